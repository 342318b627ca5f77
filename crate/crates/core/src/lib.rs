//! Quadratic-field class-group computations and 3-divisibility certificates.
//!
//! The library has four layers:
//! - [`arith`]: arbitrary-precision factoring, valuations, kernels, CRT;
//! - [`quadforms`]: binary quadratic forms and the class-group oracle
//!   (class numbers by reduced-form enumeration, narrow class numbers by
//!   cycle counting, 3-ranks via Gauss composition);
//! - [`cubicfields`]: ramification tests for depressed cubics X³ − aX − b,
//!   deciding whether the splitting field is unramified over Q(√D);
//! - [`families`]: the constructive families and the (k, n) triple
//!   certificates, with independent re-verification;
//! - [`sweeps`]: grid sweeps tying the lemma machinery to the oracle.

pub mod arith;
pub mod cubicfields;
pub mod error;
pub mod families;
pub mod quadforms;
pub mod serde_bigint;
pub mod sweeps;

pub use arith::Budget;
pub use error::{Error, Result};
