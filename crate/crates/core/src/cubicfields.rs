//! Ramification tests for depressed cubics X³ − aX − b.
//!
//! The splitting field of such a cubic is an unramified cyclic cubic
//! extension of Q(√D) exactly when no rational prime is totally ramified in
//! the cubic field Q(α). Total ramification at a prime is decided by
//! valuations of a and b (and residues mod 9 / 27 at p = 3), so the whole
//! test reduces to checking 3 together with the primes dividing gcd(a, b).

use crate::arith::{self, Budget};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// f(X) = X³ − aX − b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepressedCubic {
    #[serde(with = "crate::serde_bigint")]
    pub a: BigInt,
    #[serde(with = "crate::serde_bigint")]
    pub b: BigInt,
}

/// Which clause of the total-ramification criterion fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionTag {
    #[serde(rename = "q-case")]
    QCase,
    #[serde(rename = "3-i")]
    ThreeI,
    #[serde(rename = "3-ii")]
    ThreeII,
    #[serde(rename = "3-iii")]
    ThreeIII,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeCheck {
    #[serde(with = "crate::serde_bigint")]
    pub p: BigInt,
    pub totally_ramified: bool,
    pub condition: ConditionTag,
}

/// Full audit trail for one cubic: hypotheses plus the per-prime verdicts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RamificationReport {
    pub cubic: DepressedCubic,
    #[serde(with = "crate::serde_bigint")]
    pub disc: BigInt,
    pub disc_is_square: bool,
    pub irreducible: bool,
    pub normalized: bool,
    pub checked_primes: Vec<PrimeCheck>,
    pub unramified: bool,
}

impl DepressedCubic {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        DepressedCubic { a, b }
    }

    /// D(f) = 4a³ − 27b².
    pub fn discriminant(&self) -> BigInt {
        4 * self.a.pow(3) - 27 * &self.b * &self.b
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        x.pow(3) - &self.a * x - &self.b
    }

    /// Irreducibility over Q. A monic integer cubic is reducible iff it has
    /// an integer root, necessarily dividing b; b = 0 is reducible outright.
    pub fn is_irreducible(&self, budget: &Budget) -> Result<bool> {
        if self.b.is_zero() {
            return Ok(false);
        }
        for d in divisors(self.b.magnitude(), budget)? {
            let d = BigInt::from(d);
            if self.eval(&d).is_zero() || self.eval(&(-&d)).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The valuation hypothesis: no prime p has v_p(a) ≥ 2 and v_p(b) ≥ 3.
    /// A failing p must divide gcd(a, b), so only those primes are checked.
    pub fn normalization_ok(&self, budget: &Budget) -> Result<bool> {
        Ok(self.normalization_violation(budget)?.is_none())
    }

    fn normalization_violation(&self, budget: &Budget) -> Result<Option<BigInt>> {
        let g = self.a.gcd(&self.b);
        if g.is_zero() {
            // a = b = 0 is not a valid cubic here.
            return Err(Error::Zero);
        }
        for p in prime_divisors(&g, budget)? {
            if val_allowing_zero(&p, &self.a) >= 2 && val_allowing_zero(&p, &self.b) >= 3 {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    fn check_hypotheses(&self, budget: &Budget) -> Result<(BigInt, bool)> {
        if !self.is_irreducible(budget)? {
            return Err(Error::ReducibleCubic { a: self.a.clone(), b: self.b.clone() });
        }
        let disc = self.discriminant();
        if arith::is_square(&disc) {
            return Err(Error::SquareCubicDiscriminant { a: self.a.clone(), b: self.b.clone() });
        }
        if let Some(p) = self.normalization_violation(budget)? {
            return Err(Error::NotNormalized { a: self.a.clone(), b: self.b.clone(), p });
        }
        Ok((disc, true))
    }

    /// Total-ramification test at p, under the hypotheses (irreducible,
    /// nonsquare discriminant, normalized); violations are errors, not
    /// answers.
    pub fn totally_ramified_at(&self, p: &BigInt, budget: &Budget) -> Result<(bool, ConditionTag)> {
        if p.is_negative() || !arith::is_probable_prime(p.magnitude()) {
            return Err(Error::NotPrime(p.clone()));
        }
        self.check_hypotheses(budget)?;
        Ok(self.totally_ramified_unchecked(p))
    }

    fn totally_ramified_unchecked(&self, p: &BigInt) -> (bool, ConditionTag) {
        let three = BigInt::from(3);
        if *p != three {
            // q ≠ 3: totally ramified iff 1 ≤ v_q(b) ≤ v_q(a).
            let vb = val_allowing_zero(p, &self.b);
            if vb >= 1 && vb <= val_allowing_zero(p, &self.a) {
                return (true, ConditionTag::QCase);
            }
            return (false, ConditionTag::None);
        }
        let va = val_allowing_zero(&three, &self.a);
        let vb = val_allowing_zero(&three, &self.b);
        // Clause (i) shares the q-case orientation 1 ≤ v₃(b) ≤ v₃(a): it is
        // the Newton-polygon slope test (single segment of slope v₃(b)/3),
        // and the Eisenstein configuration v₃(b) = 1 ≤ v₃(a) must fire.
        if vb >= 1 && vb <= va {
            return (true, ConditionTag::ThreeI);
        }
        let a_mod9 = self.a.mod_floor(&BigInt::from(9));
        if va >= 1 && a_mod9 != BigInt::from(3) && vb == 0 {
            let lhs = (&self.b * &self.b).mod_floor(&BigInt::from(9));
            let rhs = (&self.a + 1i32).mod_floor(&BigInt::from(9));
            if lhs != rhs {
                return (true, ConditionTag::ThreeII);
            }
        }
        if a_mod9 == BigInt::from(3) && vb == 0 {
            let lhs = (&self.b * &self.b).mod_floor(&BigInt::from(27));
            let rhs = (&self.a + 1i32).mod_floor(&BigInt::from(27));
            if lhs != rhs {
                return (true, ConditionTag::ThreeIII);
            }
        }
        (false, ConditionTag::None)
    }

    /// Decides whether the splitting field of f is unramified over Q(√D(f)).
    ///
    /// The prime set checked is {3} ∪ {p : p | gcd(a, b)}: the q ≠ 3
    /// criterion needs q | b and q | a, and every p = 3 clause either needs
    /// 3 | a or is settled by residues, so no other prime can fire.
    pub fn splitting_field_unramified(&self, budget: &Budget) -> Result<RamificationReport> {
        let (disc, _) = self.check_hypotheses(budget)?;
        let g = self.a.gcd(&self.b);
        let mut primes = vec![BigInt::from(3)];
        for p in prime_divisors(&g, budget)? {
            if p != BigInt::from(3) {
                primes.push(p);
            }
        }
        primes.sort();
        self.report_for_primes(disc, primes)
    }

    /// Belt-and-braces variant: widens the checked set to every prime
    /// dividing D(f). Only usable when D(f) is within the factoring budget.
    pub fn splitting_field_unramified_exhaustive(
        &self,
        budget: &Budget,
    ) -> Result<RamificationReport> {
        let (disc, _) = self.check_hypotheses(budget)?;
        let mut primes = vec![BigInt::from(3)];
        for p in prime_divisors(&disc, budget)? {
            if p != BigInt::from(3) {
                primes.push(p);
            }
        }
        for p in prime_divisors(&self.a.gcd(&self.b), budget)? {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        primes.sort();
        self.report_for_primes(disc, primes)
    }

    fn report_for_primes(&self, disc: BigInt, primes: Vec<BigInt>) -> Result<RamificationReport> {
        let mut checked = Vec::with_capacity(primes.len());
        let mut unramified = true;
        for p in primes {
            let (ram, tag) = self.totally_ramified_unchecked(&p);
            unramified &= !ram;
            checked.push(PrimeCheck { p, totally_ramified: ram, condition: tag });
        }
        Ok(RamificationReport {
            cubic: self.clone(),
            disc,
            disc_is_square: false,
            irreducible: true,
            normalized: true,
            checked_primes: checked,
            unramified,
        })
    }
}

fn val_allowing_zero(p: &BigInt, n: &BigInt) -> u32 {
    // v_p(0) = ∞; u32::MAX stands in, safely above any real exponent.
    if n.is_zero() {
        return u32::MAX;
    }
    let p = p.magnitude();
    let mut m = n.magnitude().clone();
    let mut e = 0u32;
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    e
}

fn prime_divisors(n: &BigInt, budget: &Budget) -> Result<Vec<BigInt>> {
    if n.is_zero() || n.magnitude().is_one() {
        return Ok(Vec::new());
    }
    let f = arith::factor(n, budget)?;
    Ok(f.factors.into_iter().map(|(p, _)| BigInt::from(p)).collect())
}

fn divisors(n: &BigUint, budget: &Budget) -> Result<Vec<BigUint>> {
    let f = arith::factor(&BigInt::from(n.clone()), budget)?;
    let mut out = vec![BigUint::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        let mut pk = BigUint::one();
        for _ in 0..=*e {
            for d in &out {
                next.push(d * &pk);
            }
            pk *= p;
        }
        out = next;
    }
    out.sort();
    Ok(out)
}
