//! Constructive families of quadratic fields with class number divisible by
//! 3, and the triple-certificate chain built from them.
//!
//! A certificate for (k, n) pins down d = -2916·t_n³ with
//! t_n = n·(3888n² + 108n + 1) and witnesses, for each of Q(√d), Q(√(d+1)),
//! Q(√(d+k²)), a depressed cubic whose splitting field is an unramified
//! cyclic cubic extension of the corresponding real quadratic field, plus
//! the reflection step into the imaginary field. Verification re-derives
//! everything from (k, n); stored values are cross-checked, never trusted.

use crate::arith::{self, Budget};
use crate::cubicfields::{DepressedCubic, RamificationReport};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// For n ≡ 1 (mod k): t_n ≡ 3888 + 108 + 1 = 3997 = 7·571 (mod k), so
/// 27·t_n ≡ 3³·7·571 ≢ 0 (mod k) whenever 3 ∤ k and gcd(k, 3997) = 1.
const T_RESIDUE: u32 = 3997; // 7 · 571

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyLabel {
    #[serde(rename = "prop24")]
    Prop24,
    #[serde(rename = "prop25")]
    Prop25,
    #[serde(rename = "theorem-k")]
    TheoremK,
}

/// One field's witness: the real quadratic field with 3 | h+, the cubic
/// that proves it, and (when applied) the reflected imaginary radicand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub label: FamilyLabel,
    #[serde(with = "crate::serde_bigint")]
    pub radicand_real: BigInt,
    #[serde(
        with = "crate::serde_bigint::option",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub radicand_real_kernel: Option<BigInt>,
    pub witness_cubic: DepressedCubic,
    #[serde(
        with = "crate::serde_bigint::option",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub reflected_radicand: Option<BigInt>,
    /// False when the factoring budget forced raw (unnormalized) radicands.
    pub radicands_normalized: bool,
    pub report: RamificationReport,
}

/// The full witness chain for one (k, n).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleCertificate {
    #[serde(with = "crate::serde_bigint")]
    pub k: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub n: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub t_n: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub d: BigInt,
    pub congruence_check: bool,
    pub all_checks: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
    pub entries: Vec<FamilyWitness>,
}

fn poly_part(t: &BigInt) -> BigInt {
    3888 * t * t + 108 * t + 1
}

/// Prop-2.4 family: radicand 3t(3888t² + 108t + 1), witness
/// X³ − 3(108t+1)X − 2. Requires t ≠ 0, t ≢ 0 (mod 3).
pub fn prop24_radicand(t: &BigInt, budget: &Budget) -> Result<FamilyWitness> {
    if t.is_zero() || t.mod_floor(&BigInt::from(3)).is_zero() {
        return Err(Error::InvalidN {
            n: t.clone(),
            reason: "prop24 requires t ≠ 0 and t ≢ 0 (mod 3)".into(),
        });
    }
    let radicand = 3 * t * poly_part(t);
    let cubic = DepressedCubic::new(3 * (108 * t + 1), BigInt::from(2));
    let report = cubic.splitting_field_unramified(budget)?;
    let kernel = match arith::squarefree_kernel(&radicand, budget) {
        Ok(k) => Some(k),
        Err(Error::FactorBudget { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FamilyWitness {
        label: FamilyLabel::Prop24,
        radicand_real: radicand,
        radicands_normalized: kernel.is_some(),
        radicand_real_kernel: kernel,
        witness_cubic: cubic,
        reflected_radicand: None,
        report,
    })
}

/// Prop-2.5 family: real radicand 3(2916t³ − 1), witness X³ − 27tX − 1,
/// reflected into the imaginary field Q(√(1 − 2916t³)). Requires t ≥ 1.
pub fn prop25_radicand(t: &BigInt, budget: &Budget) -> Result<FamilyWitness> {
    if !t.is_positive() {
        return Err(Error::InvalidN {
            n: t.clone(),
            reason: "prop25 requires t ≥ 1".into(),
        });
    }
    let cube_term = 2916 * t.pow(3);
    let radicand = 3 * (&cube_term - 1);
    let cubic = DepressedCubic::new(27 * t, BigInt::one());
    let report = cubic.splitting_field_unramified(budget)?;
    let kernel = match arith::squarefree_kernel(&radicand, budget) {
        Ok(k) => Some(k),
        Err(Error::FactorBudget { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FamilyWitness {
        label: FamilyLabel::Prop25,
        radicand_real: radicand,
        radicands_normalized: kernel.is_some(),
        radicand_real_kernel: kernel,
        witness_cubic: cubic,
        reflected_radicand: Some(BigInt::one() - cube_term),
        report,
    })
}

/// Reflection target: 3 | h+(Q(√m)) forces 3 | h(Q(√kernel(−3m))).
pub fn scholz_reflect(radicand: &BigInt, budget: &Budget) -> Result<BigInt> {
    if !radicand.is_positive() {
        return Err(Error::Negative(radicand.clone()));
    }
    if arith::is_square(radicand) {
        return Err(Error::SquareRadicand(radicand.clone()));
    }
    arith::squarefree_kernel(&(-3 * radicand), budget)
}

/// Verdict of the k-hypothesis check, with the first failed clause named.
#[derive(Debug, Clone, Serialize)]
pub struct KValidation {
    pub ok: bool,
    pub reason: Option<String>,
}

/// k must be ≥ 1, cube-free, ≡ 1 (mod 9), and coprime to 3997 = 7·571.
pub fn validate_k(k: &BigInt, budget: &Budget) -> Result<KValidation> {
    let fail = |reason: &str| KValidation { ok: false, reason: Some(reason.into()) };
    if !k.is_positive() {
        return Ok(fail("k < 1"));
    }
    if !arith::is_cubefree(k, budget)? {
        return Ok(fail("k is not cube-free"));
    }
    if k.mod_floor(&BigInt::from(9)) != BigInt::one() {
        return Ok(fail("k ≢ 1 (mod 9)"));
    }
    if !k.gcd(&BigInt::from(T_RESIDUE)).is_one() {
        return Ok(fail("gcd(k, 3997) ≠ 1"));
    }
    Ok(KValidation { ok: true, reason: None })
}

fn require_valid_k(k: &BigInt, budget: &Budget) -> Result<()> {
    let v = validate_k(k, budget)?;
    if !v.ok {
        return Err(Error::InvalidK { k: k.clone(), reason: v.reason.unwrap() });
    }
    Ok(())
}

pub fn t_of_n(n: &BigInt) -> BigInt {
    n * poly_part(n)
}

fn theorem_checks_pass(k: &BigInt, n: &BigInt, budget: &Budget) -> Result<bool> {
    let t = t_of_n(n);
    let f = DepressedCubic::new(27 * &t, k.clone());
    if !f.is_irreducible(budget)? {
        return Ok(false);
    }
    let disc = 27 * (2916 * t.pow(3) - k * k);
    Ok(!arith::is_square(&disc))
}

const SEARCH_BOUND: u64 = 1_000_000;

/// Smallest n ≥ from with n ≡ 2 (mod 9), n ≡ 1 (mod k), f_{t_n} irreducible
/// and D(f_{t_n}) not a perfect square. The per-candidate checks replace the
/// non-effective threshold below which candidates could misbehave.
pub fn next_n(k: &BigInt, from: &BigInt, budget: &Budget) -> Result<BigInt> {
    require_valid_k(k, budget)?;
    let (r, m) = arith::crt_pair(&BigInt::from(2), &BigInt::from(9), &BigInt::one(), k)?;
    // Smallest n ≥ max(from, 1) with n ≡ r (mod m).
    let lo = if from.is_positive() { from.clone() } else { BigInt::one() };
    let mut n = &lo + (&r - &lo).mod_floor(&m);
    for _ in 0..SEARCH_BOUND {
        if theorem_checks_pass(k, &n, budget)? {
            return Ok(n);
        }
        n += &m;
    }
    Err(Error::SearchBound(SEARCH_BOUND))
}

fn congruence_holds(k: &BigInt, t_n: &BigInt) -> bool {
    if k.is_one() {
        // Everything is 0 mod 1; the clause is vacuous for the degenerate k.
        return true;
    }
    let residue_ok = t_n.mod_floor(k) == BigInt::from(T_RESIDUE).mod_floor(k);
    let prod: BigInt = 27 * t_n;
    let nonzero = !prod.mod_floor(k).is_zero();
    residue_ok && nonzero
}

/// Builds the certificate for one (k, n). Any failed sub-check aborts with
/// the failing entry identified.
pub fn make_triple(k: &BigInt, n: &BigInt, budget: &Budget) -> Result<TripleCertificate> {
    require_valid_k(k, budget)?;
    if n.mod_floor(&BigInt::from(9)) != BigInt::from(2) {
        return Err(Error::InvalidN { n: n.clone(), reason: "n ≢ 2 (mod 9)".into() });
    }
    if n.mod_floor(k) != BigInt::one().mod_floor(k) {
        return Err(Error::InvalidN { n: n.clone(), reason: "n ≢ 1 (mod k)".into() });
    }
    let t_n = t_of_n(n);
    let d = -2916 * t_n.pow(3);

    // Entry 1: the prop24 family at t := n, then reflect Q(√(3·t_n)) into Q(√d).
    let mut entry1 = prop24_radicand(n, budget).map_err(|e| entry_err(1, e))?;
    entry1.reflected_radicand = match scholz_reflect(&entry1.radicand_real, budget) {
        Ok(kern) => Some(kern),
        Err(Error::FactorBudget { .. }) => {
            entry1.radicands_normalized = false;
            Some(-3 * &entry1.radicand_real)
        }
        Err(e) => return Err(entry_err(1, e)),
    };

    // Entry 2: the prop25 family at t := t_n; reflected radicand is exactly d + 1.
    let entry2 = prop25_radicand(&t_n, budget).map_err(|e| entry_err(2, e))?;

    // Entry 3: the k-witness X³ − 27·t_nX − k; reflected radicand d + k².
    let cubic3 = DepressedCubic::new(27 * &t_n, k.clone());
    let report3 = cubic3.splitting_field_unramified(budget).map_err(|e| entry_err(3, e))?;
    let radicand3 = 3 * (2916 * t_n.pow(3) - k * k);
    let kernel3 = match arith::squarefree_kernel(&radicand3, budget) {
        Ok(kern) => Some(kern),
        Err(Error::FactorBudget { .. }) => None,
        Err(e) => return Err(entry_err(3, e)),
    };
    let entry3 = FamilyWitness {
        label: FamilyLabel::TheoremK,
        radicand_real: radicand3,
        radicands_normalized: kernel3.is_some(),
        radicand_real_kernel: kernel3,
        witness_cubic: cubic3,
        reflected_radicand: Some(&d + k * k),
        report: report3,
    };

    let congruence_check = congruence_holds(k, &t_n);
    let all_checks = congruence_check
        && entry1.report.unramified
        && entry2.report.unramified
        && entry3.report.unramified;
    if !all_checks {
        return Err(Error::CertificateCheck {
            item: format!("triple(k={k}, n={n})"),
            detail: "a ramification or congruence check failed".into(),
        });
    }
    Ok(TripleCertificate {
        k: k.clone(),
        n: n.clone(),
        t_n,
        d,
        congruence_check,
        all_checks,
        degenerate: if k.is_one() { Some("pair".into()) } else { None },
        entries: vec![entry1, entry2, entry3],
    })
}

fn entry_err(idx: usize, e: Error) -> Error {
    Error::CertificateCheck { item: format!("entry-{idx}"), detail: e.to_string() }
}

/// One re-verified item of a certificate audit.
#[derive(Debug, Clone, Serialize)]
pub struct AuditItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub all_pass: bool,
    pub items: Vec<AuditItem>,
}

/// Re-derives the whole chain from (k, n) and cross-checks every stored
/// value. Hostile input is allowed: failures are reported items, not errors.
pub fn verify_certificate(cert: &TripleCertificate, budget: &Budget) -> AuditReport {
    let mut items: Vec<AuditItem> = Vec::new();
    let push = |items: &mut Vec<AuditItem>, name: &str, pass: bool, detail: String| {
        items.push(AuditItem { name: name.into(), pass, detail });
    };

    let k_ok = match validate_k(&cert.k, budget) {
        Ok(v) => {
            push(&mut items, "k-valid", v.ok, v.reason.unwrap_or_else(|| "ok".into()));
            v.ok
        }
        Err(e) => {
            push(&mut items, "k-valid", false, e.to_string());
            false
        }
    };

    let n_ok = cert.n.mod_floor(&BigInt::from(9)) == BigInt::from(2)
        && (!k_ok || cert.n.mod_floor(&cert.k) == BigInt::one().mod_floor(&cert.k));
    push(&mut items, "n-residues", n_ok, format!("n = {}", cert.n));

    let t_n = t_of_n(&cert.n);
    let t_ok = t_n == cert.t_n;
    push(
        &mut items,
        "t_n",
        t_ok,
        if t_ok { format!("t_n = {t_n}") } else { format!("t_n mismatch: expected {t_n}, stored {}", cert.t_n) },
    );

    let d: BigInt = -2916 * t_n.pow(3);
    let d_ok = d == cert.d && d.is_negative() && (&d + &cert.k * &cert.k).is_negative();
    push(&mut items, "d", d_ok, format!("d = {d}"));

    let expected_cubics = [
        DepressedCubic::new(3 * (108 * &cert.n + 1), BigInt::from(2)),
        DepressedCubic::new(27 * &t_n, BigInt::one()),
        DepressedCubic::new(27 * &t_n, cert.k.clone()),
    ];
    let expected_radicands = [
        3 * &cert.n * poly_part(&cert.n),
        3 * (2916 * t_n.pow(3) - 1),
        3 * (2916 * t_n.pow(3) - &cert.k * &cert.k),
    ];
    let expected_reflected: [Option<BigInt>; 3] =
        [None, Some(&d + 1), Some(&d + &cert.k * &cert.k)];

    let entries_ok = cert.entries.len() == 3;
    push(&mut items, "entry-count", entries_ok, format!("{} entries", cert.entries.len()));

    for (i, entry) in cert.entries.iter().enumerate().take(3) {
        let tag = i + 1;
        let cubic_ok = entry.witness_cubic == expected_cubics[i];
        push(
            &mut items,
            &format!("entry-{tag}-cubic"),
            cubic_ok,
            format!("X³ − {}X − {}", entry.witness_cubic.a, entry.witness_cubic.b),
        );
        let rad_ok = entry.radicand_real == expected_radicands[i];
        push(&mut items, &format!("entry-{tag}-radicand"), rad_ok, entry.radicand_real.to_string());

        // Re-run the ramification machinery on the *stored* cubic: a
        // tampered cubic either differs above or fails here.
        match entry.witness_cubic.splitting_field_unramified(budget) {
            Ok(rep) => {
                let ok = rep.unramified && rep.disc == entry.report.disc;
                push(
                    &mut items,
                    &format!("entry-{tag}-ramification"),
                    ok,
                    format!("unramified = {}, disc = {}", rep.unramified, rep.disc),
                );
            }
            Err(e) => push(&mut items, &format!("entry-{tag}-ramification"), false, e.to_string()),
        }

        // Reflection bookkeeping. Entry 1 stores a kernel (or raw −3·rad),
        // entries 2 and 3 the exact values d+1, d+k².
        match (i, &entry.reflected_radicand) {
            (0, Some(r)) => {
                let raw = -3 * &entry.radicand_real;
                let ok = if entry.radicands_normalized {
                    match arith::squarefree_kernel(&raw, budget) {
                        Ok(kern) => *r == kern,
                        Err(_) => false,
                    }
                } else {
                    *r == raw
                };
                push(&mut items, "entry-1-reflection", ok, r.to_string());
            }
            (0, None) => push(&mut items, "entry-1-reflection", false, "missing".into()),
            (_, stored) => {
                let ok = *stored == expected_reflected[i];
                push(&mut items, &format!("entry-{tag}-reflection"), ok, format!("{stored:?}"));
            }
        }
    }

    let cong = congruence_holds(&cert.k, &t_n);
    push(&mut items, "congruence", cong && cert.congruence_check, format!("t_n ≡ 3997 (mod k): {cong}"));

    let recomputed_all = items.iter().all(|i| i.pass);
    let flag_ok = cert.all_checks == recomputed_all;
    push(&mut items, "all_checks-flag", flag_ok, format!("stored = {}", cert.all_checks));

    let all_pass = items.iter().all(|i| i.pass);
    AuditReport { all_pass, items }
}
