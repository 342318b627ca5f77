//! Property sweeps: reflection scan, family sweeps, and the
//! lemma-versus-oracle fuzz over a grid of depressed cubics.

use crate::arith::{self, Budget};
use crate::cubicfields::DepressedCubic;
use crate::error::{Error, Result};
use crate::quadforms::{
    class_number_imaginary, fundamental_discriminant, narrow_class_number_real, three_rank,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

/// One squarefree d of the reflection scan: r, s are the 3-ranks of Q(√d)
/// and Q(√−3d); the scan checks r ≤ s ≤ r+1 and the h-divisibility transfer.
#[derive(Debug, Clone, Serialize)]
pub struct ScholzRow {
    pub d: i64,
    pub r: u32,
    pub s: u32,
    pub h_plus: u64,
    pub h_minus: u64,
    pub rank_ok: bool,
    pub divisibility_ok: bool,
}

impl ScholzRow {
    pub fn ok(&self) -> bool {
        self.rank_ok && self.divisibility_ok
    }
}

pub fn scholz_scan(d_max: i64, budget: &Budget) -> Result<Vec<ScholzRow>> {
    let ds: Vec<i64> = (2..=d_max)
        .filter(|&d| {
            arith::squarefree_kernel(&BigInt::from(d), budget)
                .map(|k| k == BigInt::from(d))
                .unwrap_or(false)
        })
        .collect();
    ds.into_par_iter()
        .map(|d| {
            let dp = fundamental_discriminant(&BigInt::from(d), budget)?;
            let dm = fundamental_discriminant(&BigInt::from(-3 * d), budget)?;
            let r = three_rank(&dp, budget, false)?;
            let s = three_rank(&dm, budget, false)?;
            let h_plus = narrow_class_number_real(&dp, budget, false)?;
            let h_minus = class_number_imaginary(&dm, budget, false)?;
            Ok(ScholzRow {
                d,
                r,
                s,
                h_plus,
                h_minus,
                rank_ok: r <= s && s <= r + 1,
                divisibility_ok: h_plus % 3 != 0 || h_minus % 3 == 0,
            })
        })
        .collect()
}

/// One value of t in a family sweep.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyRow {
    pub t: i64,
    #[serde(with = "crate::serde_bigint")]
    pub radicand: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub discriminant: BigInt,
    pub class_number: u64,
    pub divisible_by_3: bool,
}

/// h(Q(√(1 − 2916t³))) for each t in the range; all must be ≡ 0 (mod 3).
pub fn prop25_sweep(t_lo: i64, t_hi: i64, budget: &Budget) -> Result<Vec<FamilyRow>> {
    (t_lo..=t_hi)
        .into_par_iter()
        .map(|t| {
            if t < 1 {
                return Err(Error::InvalidN {
                    n: BigInt::from(t),
                    reason: "prop25 requires t ≥ 1".into(),
                });
            }
            let t_big = BigInt::from(t);
            let radicand = 1 - 2916 * t_big.pow(3);
            let d = fundamental_discriminant(&radicand, budget)?;
            let h = class_number_imaginary(&d, budget, false)?;
            Ok(FamilyRow {
                t,
                radicand,
                discriminant: d.value().clone(),
                class_number: h,
                divisible_by_3: h % 3 == 0,
            })
        })
        .collect()
}

/// h+(Q(√(3t(3888t² + 108t + 1)))) for each t in the range with 3 ∤ t.
pub fn prop24_sweep(t_lo: i64, t_hi: i64, budget: &Budget) -> Result<Vec<FamilyRow>> {
    let ts: Vec<i64> = (t_lo..=t_hi).filter(|t| *t != 0 && t % 3 != 0).collect();
    ts.into_par_iter()
        .map(|t| {
            let t_big = BigInt::from(t);
            let radicand = 3 * &t_big * (3888 * &t_big * &t_big + 108 * &t_big + 1);
            let d = fundamental_discriminant(&radicand, budget)?;
            let h = if d.value().is_positive() {
                narrow_class_number_real(&d, budget, false)?
            } else {
                class_number_imaginary(&d, budget, false)?
            };
            Ok(FamilyRow {
                t,
                radicand,
                discriminant: d.value().clone(),
                class_number: h,
                divisible_by_3: h % 3 == 0,
            })
        })
        .collect()
}

/// One verified cubic of the lemma fuzz.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzCase {
    pub a: i64,
    pub b: i64,
    #[serde(with = "crate::serde_bigint")]
    pub disc: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub field_disc: BigInt,
    pub class_number: u64,
    pub divisible_by_3: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    /// Cubics in the grid meeting the hypotheses with unramified splitting
    /// field (before sampling).
    pub qualifying: u64,
    /// How many of those were cross-checked against the class-group oracle.
    pub verified: u64,
    /// Qualifying cases whose field discriminant exceeded the enumeration
    /// budget; reported, not failed.
    pub skipped_over_budget: u64,
    pub violations: Vec<FuzzCase>,
}

/// The class-field-theory cross-check: every qualifying cubic on the grid
/// |a|, |b| ≤ bound must land in a field with 3 | h (ordinary for D < 0,
/// narrow for D > 0).
///
/// `samples` = 0 verifies every qualifying case; otherwise the qualifying
/// list is subsampled with a deterministic stride so roughly `samples`
/// cases spread over the whole grid get the (expensive) oracle check.
pub fn lemma_fuzz(bound: i64, samples: u64, budget: &Budget) -> Result<FuzzReport> {
    let mut qualifying: Vec<(i64, i64)> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if b == 0 {
                continue;
            }
            let f = DepressedCubic::new(BigInt::from(a), BigInt::from(b));
            if !f.is_irreducible(budget)? {
                continue;
            }
            if arith::is_square(&f.discriminant()) {
                continue;
            }
            if !f.normalization_ok(budget)? {
                continue;
            }
            let report = f.splitting_field_unramified(budget)?;
            if report.unramified {
                qualifying.push((a, b));
            }
        }
    }
    let total = qualifying.len() as u64;
    let stride = if samples == 0 { 1 } else { (total / samples).max(1) as usize };
    let sampled: Vec<(i64, i64)> = qualifying.iter().copied().step_by(stride).collect();

    let outcomes: Vec<std::result::Result<FuzzCase, (i64, i64)>> = sampled
        .par_iter()
        .map(|&(a, b)| {
            let f = DepressedCubic::new(BigInt::from(a), BigInt::from(b));
            let disc = f.discriminant();
            let d = match fundamental_discriminant(&disc, budget) {
                Ok(d) => d,
                Err(_) => return Err((a, b)),
            };
            let h = if d.value().is_negative() {
                class_number_imaginary(&d, budget, false)
            } else {
                narrow_class_number_real(&d, budget, false)
            };
            match h {
                Ok(h) => Ok(FuzzCase {
                    a,
                    b,
                    disc,
                    field_disc: d.value().clone(),
                    class_number: h,
                    divisible_by_3: h % 3 == 0,
                }),
                Err(Error::EnumBudget(_, _)) => Err((a, b)),
                Err(_) => Err((a, b)),
            }
        })
        .collect();

    let mut verified = 0u64;
    let mut skipped = 0u64;
    let mut violations = Vec::new();
    for o in outcomes {
        match o {
            Ok(case) => {
                verified += 1;
                if !case.divisible_by_3 {
                    violations.push(case);
                }
            }
            Err(_) => skipped += 1,
        }
    }
    Ok(FuzzReport {
        qualifying: total,
        verified,
        skipped_over_budget: skipped,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scholz_scan_small() {
        let b = Budget::default();
        let rows = scholz_scan(50, &b).unwrap();
        assert!(rows.iter().all(|r| r.ok()), "{rows:?}");
        // d = 2, 3, 5, 6, 7, 10, ... squarefree only.
        assert!(rows.iter().any(|r| r.d == 2));
        assert!(!rows.iter().any(|r| r.d == 4));
    }

    #[test]
    fn prop25_sweep_small() {
        let b = Budget::default();
        let rows = prop25_sweep(1, 3, &b).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.divisible_by_3));
        assert_eq!(rows[0].discriminant, BigInt::from(-2915));
    }

    #[test]
    fn prop24_sweep_small() {
        let b = Budget::default();
        let rows = prop24_sweep(1, 4, &b).unwrap();
        // t = 3 skipped.
        assert_eq!(rows.iter().map(|r| r.t).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(rows.iter().all(|r| r.divisible_by_3));
        assert_eq!(rows[0].class_number, 24);
    }

    #[test]
    fn lemma_fuzz_tiny_grid() {
        let b = Budget::default();
        let rep = lemma_fuzz(20, 0, &b).unwrap();
        assert!(rep.qualifying >= 100, "only {} qualifying", rep.qualifying);
        assert_eq!(rep.verified, rep.qualifying - rep.skipped_over_budget);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }
}
