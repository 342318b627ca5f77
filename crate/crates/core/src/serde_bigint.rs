//! Serialize BigInt as a decimal string. Certificate values exceed 64-bit
//! (and double-precision) ranges, so JSON numbers are not an option.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};
use std::str::FromStr;

pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    BigInt::from_str(&s).map_err(|e| de::Error::custom(format!("bad integer {s:?}: {e}")))
}

/// Same encoding for `Option<BigInt>` fields.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        match s {
            None => Ok(None),
            Some(s) => BigInt::from_str(&s)
                .map(Some)
                .map_err(|e| de::Error::custom(format!("bad integer {s:?}: {e}"))),
        }
    }
}
