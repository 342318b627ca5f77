//! Arbitrary-precision integer utilities: factoring, valuations,
//! square/cube-free detection, squarefree kernels, CRT.
//!
//! Factoring is trial division over a small-prime sieve followed by Brent's
//! variant of Pollard rho with parameters derived deterministically from the
//! input, so repeated runs factor the same number the same way.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Resource limits for factoring and class-group enumeration.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Decimal-digit bound above which `factor` refuses to run.
    pub factor_digits: usize,
    /// Bound on |discriminant| for class-group enumeration.
    pub enum_bound: i64,
}

impl Default for Budget {
    fn default() -> Self {
        // Family numbers (t_n products around 10^8) factor comfortably under
        // 20 digits; theorem-scale radicands (~10^24) are meant to stay raw.
        Budget { factor_digits: 20, enum_bound: 400_000_000 }
    }
}

impl Budget {
    pub fn check_factorable(&self, n: &BigInt) -> Result<()> {
        let digits = n.magnitude().to_string().len();
        if digits > self.factor_digits {
            return Err(Error::FactorBudget { n: n.clone(), digits, bound: self.factor_digits });
        }
        Ok(())
    }
}

const TRIAL_BOUND: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut p = 2usize;
        while p * p <= n {
            if sieve[p] {
                let mut q = p * p;
                while q <= n {
                    sieve[q] = false;
                    q += p;
                }
            }
            p += 1;
        }
        (2..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// A complete prime factorization, `sign * Π p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer.
    pub fn product(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let acc = BigInt::from(acc);
        if self.sign < 0 {
            -acc
        } else {
            acc
        }
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for u64 (the base set covers all 64-bit inputs).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &MR_BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Strong-pseudoprime battery. Deterministic for inputs below ~3.3e24 with
/// the first twelve prime bases; larger inputs get an extended fixed base
/// set, making this a (reproducible) probabilistic test there.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    let extended: [u64; 8] = [41, 43, 47, 53, 59, 61, 67, 71];
    let bases = MR_BASES.iter().chain(extended.iter());
    'base: for &a in bases {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent-variant rho on u64 moduli; the increment constant walks 1, 2, 3, ...
/// so the factor found is a deterministic function of the input.
fn rho_u64(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n) && n.is_odd());
    for c in 1u64.. {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn rho_big(n: &BigUint) -> BigUint {
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x >= y { &x - &y } else { &y - &x };
            let d = diff.gcd(n);
            if d == *n {
                break;
            }
            if !d.is_one() {
                return d;
            }
        }
    }
    unreachable!()
}

fn factor_odd_cofactor(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = if let Some(v) = n.to_u64() {
        BigUint::from(rho_u64(v))
    } else {
        rho_big(&n)
    };
    let q = &n / &d;
    factor_odd_cofactor(d, out);
    factor_odd_cofactor(q, out);
}

/// Complete factorization of a nonzero integer, deterministic ordering.
pub fn factor(n: &BigInt, budget: &Budget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    budget.check_factorable(n)?;
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        if (&m % p).is_zero() {
            let mut e = 0u32;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            factors.push((pb, e));
        }
    }
    if !m.is_one() {
        // Cofactor with no prime factor below the trial bound.
        if m < BigUint::from(TRIAL_BOUND as u64).pow(2) {
            factors.push((m, 1));
        } else {
            let mut primes = Vec::new();
            factor_odd_cofactor(m, &mut primes);
            primes.sort();
            let mut i = 0;
            while i < primes.len() {
                let mut e = 1u32;
                while i + 1 < primes.len() && primes[i + 1] == primes[i] {
                    e += 1;
                    i += 1;
                }
                factors.push((primes[i].clone(), e));
                i += 1;
            }
        }
    }
    factors.sort_by(|(p, _), (q, _)| p.cmp(q));
    Ok(Factorization { sign, factors })
}

/// Largest e with p^e | n. Rejects n = 0 and non-prime p.
pub fn valuation(p: &BigInt, n: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    if p.is_negative() || !is_probable_prime(p.magnitude()) {
        return Err(Error::NotPrime(p.clone()));
    }
    let p = p.magnitude();
    let mut m = n.magnitude().clone();
    let mut e = 0u32;
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Floor of the square root; rejects negative input.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::Negative(n.clone()));
    }
    Ok(n.sqrt())
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// sign(n) · Π_{e odd} p — the unique squarefree integer with
/// n = kernel(n) · (perfect square).
pub fn squarefree_kernel(n: &BigInt, budget: &Budget) -> Result<BigInt> {
    let f = factor(n, budget)?;
    let mut k = BigUint::one();
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            k *= p;
        }
    }
    let k = BigInt::from(k);
    Ok(if f.sign < 0 { -k } else { k })
}

/// True iff no prime cube divides n (n ≥ 1).
pub fn is_cubefree(n: &BigInt, budget: &Budget) -> Result<bool> {
    if !n.is_positive() {
        return Err(Error::Negative(n.clone()));
    }
    let f = factor(n, budget)?;
    Ok(f.factors.iter().all(|(_, e)| *e < 3))
}

/// Extended gcd: returns (g, x, y) with g = x·a + y·b, g ≥ 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, tmp);
        let tmp = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, tmp);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Combines r1 mod m1 and r2 mod m2 into the unique residue mod m1·m2.
/// Requires coprime moduli.
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Result<(BigInt, BigInt)> {
    if !m1.is_positive() || !m2.is_positive() {
        return Err(Error::Negative(if m1.is_positive() { m2.clone() } else { m1.clone() }));
    }
    let (g, x, _) = ext_gcd(m1, m2);
    if !g.is_one() {
        return Err(Error::NonCoprimeModuli(m1.clone(), m2.clone()));
    }
    let m = m1 * m2;
    // r = r1 + m1 * x * (r2 - r1) mod m, since m1*x ≡ 1 (mod m2).
    let r = (r1 + m1 * x * (r2 - r1)).mod_floor(&m);
    Ok((r, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&bi(7), &bi(3997)).unwrap(), 1);
        assert_eq!(valuation(&bi(2), &bi(5)).unwrap(), 0);
        assert_eq!(valuation(&bi(3), &bi(34992)).unwrap(), 7);
    }

    #[test]
    fn valuation_rejects_bad_input() {
        assert!(matches!(valuation(&bi(7), &bi(0)), Err(Error::Zero)));
        assert!(matches!(valuation(&bi(6), &bi(10)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn factor_examples() {
        let b = Budget::default();
        let f = factor(&bi(3997), &b).unwrap();
        assert_eq!(
            f.factors,
            vec![(BigUint::from(7u32), 1), (BigUint::from(571u32), 1)]
        );
        let f = factor(&bi(1), &b).unwrap();
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());
        let f = factor(&bi(2916), &b).unwrap();
        assert_eq!(
            f.factors,
            vec![(BigUint::from(2u32), 2), (BigUint::from(3u32), 6)]
        );
    }

    #[test]
    fn factor_rejects_zero_and_budget() {
        let b = Budget::default();
        assert!(matches!(factor(&bi(0), &b), Err(Error::Zero)));
        let huge: BigInt = BigInt::from(10).pow(30) + 7;
        assert!(matches!(factor(&huge, &b), Err(Error::FactorBudget { .. })));
    }

    #[test]
    fn factor_large_semiprime() {
        // Forces the rho path: both primes exceed the trial bound.
        let p = bi(1_000_003);
        let q = bi(1_000_033);
        let n = &p * &q;
        let f = factor(&n, &Budget::default()).unwrap();
        assert_eq!(f.product(), n);
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn square_detection() {
        assert!(is_square(&bi(2916)));
        assert!(is_square(&bi(0)));
        assert!(!is_square(&bi(78705)));
        assert!(!is_square(&bi(-4)));
        assert_eq!(isqrt(&bi(78705)).unwrap(), bi(280));
        assert!(isqrt(&bi(-1)).is_err());
    }

    #[test]
    fn kernel_examples() {
        let b = Budget::default();
        assert_eq!(squarefree_kernel(&bi(-23328), &b).unwrap(), bi(-2));
        assert_eq!(squarefree_kernel(&bi(1), &b).unwrap(), bi(1));
        assert_eq!(squarefree_kernel(&bi(12), &b).unwrap(), bi(3));
    }

    #[test]
    fn cubefree_examples() {
        let b = Budget::default();
        assert!(is_cubefree(&bi(10), &b).unwrap());
        assert!(!is_cubefree(&bi(8), &b).unwrap());
        assert!(is_cubefree(&bi(19), &b).unwrap());
        assert!(is_cubefree(&bi(1), &b).unwrap());
    }

    #[test]
    fn crt_examples() {
        let (r, m) = crt_pair(&bi(2), &bi(9), &bi(1), &bi(10)).unwrap();
        assert_eq!((r, m), (bi(11), bi(90)));
        let (r, m) = crt_pair(&bi(2), &bi(9), &bi(1), &bi(1)).unwrap();
        assert_eq!((r, m), (bi(2), bi(9)));
        let (r, m) = crt_pair(&bi(2), &bi(9), &bi(1), &bi(19)).unwrap();
        assert_eq!((r, m), (bi(20), bi(171)));
        assert!(matches!(
            crt_pair(&bi(1), &bi(6), &bi(2), &bi(9)),
            Err(Error::NonCoprimeModuli(_, _))
        ));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3997 / 7 * 0 + 571));
        assert!(!is_prime_u64(3997));
        assert!(is_probable_prime(&BigUint::from(1_000_003u64)));
        // Carmichael number.
        assert!(!is_prime_u64(561));
    }
}
