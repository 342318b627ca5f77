//! Binary quadratic forms and the class-group oracle.
//!
//! Class numbers are computed by exhaustive enumeration of reduced forms:
//! counting reduced forms for negative discriminants, counting cycles of
//! reduced forms for positive ones (the narrow class number h+). The 3-rank
//! counts classes killed by cubing, using Gauss composition.
//!
//! Real fields deliberately use h+ rather than h: the two differ by a factor
//! of at most 2, so their odd parts agree and every 3-divisibility statement
//! transfers verbatim. Class equality in the real case is same-cycle
//! membership.

use crate::arith::{self, Budget};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A discriminant: ≡ 0 or 1 (mod 4) and not a perfect square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discriminant(BigInt);

impl Discriminant {
    pub fn new(value: BigInt) -> Result<Self> {
        let r = value.mod_floor(&BigInt::from(4));
        if !(r.is_zero() || r == BigInt::from(1)) {
            return Err(Error::BadDiscriminantResidue(value));
        }
        if arith::is_square(&value) {
            return Err(Error::SquareRadicand(value));
        }
        Ok(Discriminant(value))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// True iff this is the discriminant of a quadratic field (not an order).
    pub fn is_fundamental(&self, budget: &Budget) -> Result<bool> {
        let d = &self.0;
        if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
            Ok(arith::squarefree_kernel(d, budget)? == *d)
        } else {
            let m: BigInt = d / 4;
            let r = m.mod_floor(&BigInt::from(4)).to_i64().unwrap();
            Ok((r == 2 || r == 3) && arith::squarefree_kernel(&m, budget)? == m)
        }
    }
}

/// Discriminant of the quadratic field Q(√radicand): the squarefree kernel
/// m0, or 4·m0 when m0 ≢ 1 (mod 4).
pub fn fundamental_discriminant(radicand: &BigInt, budget: &Budget) -> Result<Discriminant> {
    if radicand.is_zero() {
        return Err(Error::Zero);
    }
    if arith::is_square(radicand) {
        return Err(Error::SquareRadicand(radicand.clone()));
    }
    let m0 = arith::squarefree_kernel(radicand, budget)?;
    let d = if m0.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        m0
    } else {
        4 * m0
    };
    Discriminant::new(d)
}

/// A primitive integral binary quadratic form aX² + bXY + cY².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    a.abs().gcd(&b.abs()).gcd(&c.abs())
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i128;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl QForm {
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self> {
        if gcd3(a, b, c) != 1 {
            return Err(Error::ImprimitiveForm(
                BigInt::from(a),
                BigInt::from(b),
                BigInt::from(c),
            ));
        }
        Ok(QForm { a, b, c })
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(self.a, self.b, self.c) == 1
    }

    pub fn inverse(&self) -> QForm {
        QForm { a: self.a, b: -self.b, c: self.c }
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
        } else {
            is_reduced_indefinite(self.a, self.b, d)
        }
    }

    /// Canonical reduced representative of this form's class.
    ///
    /// Negative discriminant: the unique reduced form (|b| ≤ a ≤ c, b ≥ 0 on
    /// the boundary). Positive: some form on the class's reduction cycle.
    pub fn reduce(&self) -> Result<QForm> {
        if !self.is_primitive() {
            return Err(Error::ImprimitiveForm(
                BigInt::from(self.a),
                BigInt::from(self.b),
                BigInt::from(self.c),
            ));
        }
        let d = self.discriminant();
        if d < 0 {
            if self.a < 0 {
                // Negative definite; not a class-group element.
                return Err(Error::ImprimitiveForm(
                    BigInt::from(self.a),
                    BigInt::from(self.b),
                    BigInt::from(self.c),
                ));
            }
            Ok(reduce_definite(*self))
        } else {
            Ok(reduce_indefinite(*self))
        }
    }

    /// Gauss composition of two classes, returned reduced.
    pub fn compose(&self, other: &QForm) -> Result<QForm> {
        let d1 = self.discriminant();
        let d2 = other.discriminant();
        if d1 != d2 {
            return Err(Error::DiscriminantMismatch(BigInt::from(d1), BigInt::from(d2)));
        }
        let f = self.reduce()?;
        let g = other.reduce()?;
        let raw = compose_raw(&f, &g, d1);
        raw.reduce()
    }
}

fn reduce_definite(mut f: QForm) -> QForm {
    let d = f.discriminant();
    loop {
        if f.b.abs() <= f.a && f.a <= f.c {
            if f.b < 0 && (f.b.abs() == f.a || f.a == f.c) {
                f.b = -f.b;
            }
            return f;
        }
        if f.c < f.a || (f.c == f.a && f.b < 0) {
            f = QForm { a: f.c, b: -f.b, c: f.a };
        } else {
            // Translate b into (-a, a].
            let k = (f.a - f.b).div_euclid(2 * f.a);
            let b = f.b + 2 * k * f.a;
            let c = (b * b - d) / (4 * f.a);
            f = QForm { a: f.a, b, c };
        }
    }
}

fn is_reduced_indefinite(a: i128, b: i128, d: i128) -> bool {
    // 0 < b < √d and √d − b < 2|a| < √d + b, all strict (√d irrational).
    if b <= 0 || b * b >= d {
        return false;
    }
    let t = 2 * a.abs();
    if t > b && (t - b) * (t - b) >= d {
        return false;
    }
    (t + b) * (t + b) > d
}

/// One step of the reduction operator ρ for indefinite forms.
fn rho_step(f: QForm, d: i128, sqrt_d: i128) -> QForm {
    let ac = f.c.abs();
    let m = 2 * ac;
    let hi = if ac > sqrt_d { ac } else { sqrt_d };
    // b' ≡ -b (mod 2|c|), the largest such value ≤ hi.
    let bp = hi - (hi + f.b).rem_euclid(m);
    let cp = (bp * bp - d) / (4 * f.c);
    QForm { a: f.c, b: bp, c: cp }
}

fn reduce_indefinite(mut f: QForm) -> QForm {
    let d = f.discriminant();
    let s = isqrt_i128(d);
    while !is_reduced_indefinite(f.a, f.b, d) {
        f = rho_step(f, d, s);
    }
    f
}

/// General Dirichlet composition via a three-term Bezout identity
/// (x·a1 + y·a2 + z·(b1+b2)/2 = g).
fn compose_raw(f: &QForm, g: &QForm, d: i128) -> QForm {
    let (a1, b1) = (f.a, f.b);
    let (a2, b2) = (g.a, g.b);
    let s = (b1 + b2) / 2;
    let (g1, u, v) = ext_gcd_i128(a1, a2);
    let (g0, w1, w2) = ext_gcd_i128(g1, s);
    let (x, y, z) = (w1 * u, w1 * v, w2);
    debug_assert_eq!(x * a1 + y * a2 + z * s, g0);
    let a3 = (a1 / g0) * (a2 / g0);
    let mut b3 = (x * a1 * b2 + y * a2 * b1 + z * (b1 * b2 + d) / 2) / g0;
    b3 = b3.rem_euclid(2 * a3);
    let c3 = (b3 * b3 - d) / (4 * a3);
    QForm { a: a3, b: b3, c: c3 }
}

/// Principal (identity) form of a discriminant, reduced.
pub fn principal_form(d: i128) -> QForm {
    let r = d.rem_euclid(4); // 0 or 1
    if d < 0 {
        QForm { a: 1, b: r, c: (r - d) / 4 }
    } else {
        let s = isqrt_i128(d);
        let b = if s % 2 == r % 2 { s } else { s - 1 };
        reduce_indefinite(QForm { a: 1, b, c: (b * b - d) / 4 })
    }
}

/// All reduced forms of a negative discriminant, in lexicographic (a, b)
/// order of the enumeration.
pub fn reduced_forms_imaginary(d: i128) -> Vec<QForm> {
    debug_assert!(d < 0 && d.rem_euclid(4) <= 1);
    let mut out = Vec::new();
    let a_max = isqrt_i128(-d / 3);
    let parity = d.rem_euclid(2);
    for a in 1..=a_max {
        let m = (4 * a) as u64;
        // b runs over -a < b ≤ a with b ≡ d (mod 2); incremental b² mod 4a.
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        if b > a {
            continue;
        }
        let mut r = ((b * b - d) % (4 * a)) as u64;
        loop {
            if r == 0 {
                let c = (b * b - d) / (4 * a);
                if c >= a && gcd3(a, b, c) == 1 && !(a == c && b < 0) {
                    out.push(QForm { a, b, c });
                }
            }
            if b + 2 > a {
                break;
            }
            // (b+2)² = b² + 4b + 4
            let step = 4 * b + 4;
            let mut nr = r as i128 + step;
            while nr >= m as i128 {
                nr -= m as i128;
            }
            while nr < 0 {
                nr += m as i128;
            }
            r = nr as u64;
            b += 2;
        }
    }
    out
}

/// All reduced indefinite forms of a positive nonsquare discriminant.
pub fn reduced_forms_indefinite(d: i128) -> Vec<QForm> {
    debug_assert!(d > 0);
    let s = isqrt_i128(d);
    let parity = d.rem_euclid(2);
    let mut out = Vec::new();
    let mut b = if parity == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4;
        let dv_max = isqrt_i128(n);
        for dv in 1..=dv_max {
            if n % dv != 0 {
                continue;
            }
            let pair = [dv, n / dv];
            let take = if pair[0] == pair[1] { 1 } else { 2 };
            for &aa in pair.iter().take(take) {
                // a·c = -n; both sign choices of a.
                let cc = n / aa;
                if gcd3(aa, b, cc) != 1 {
                    continue;
                }
                if is_reduced_indefinite(aa, b, d) {
                    out.push(QForm { a: aa, b, c: -cc });
                    out.push(QForm { a: -aa, b, c: cc });
                }
            }
        }
        b += 2;
    }
    out.sort();
    out
}

/// Partition of the reduced indefinite forms into ρ-cycles; one cycle per
/// narrow class.
pub fn reduction_cycles(d: i128) -> Vec<Vec<QForm>> {
    let forms = reduced_forms_indefinite(d);
    let s = isqrt_i128(d);
    let index: HashMap<QForm, ()> = forms.iter().map(|f| (*f, ())).collect();
    let mut seen: HashMap<QForm, bool> = HashMap::new();
    let mut cycles = Vec::new();
    for f in &forms {
        if seen.contains_key(f) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = *f;
        while !seen.contains_key(&g) {
            seen.insert(g, true);
            cycle.push(g);
            g = rho_step(g, d, s);
            debug_assert!(index.contains_key(&g));
        }
        cycles.push(cycle);
    }
    cycles
}

fn check_usable(
    d: &Discriminant,
    budget: &Budget,
    allow_nonfundamental: bool,
) -> Result<i128> {
    if d.value().abs() > BigInt::from(budget.enum_bound) {
        return Err(Error::EnumBudget(d.value().clone(), budget.enum_bound));
    }
    if !allow_nonfundamental && !d.is_fundamental(budget)? {
        return Err(Error::NotFundamental(d.value().clone()));
    }
    Ok(d.value().to_i128().unwrap())
}

/// Class number of an imaginary quadratic field by counting reduced forms.
/// Non-fundamental discriminants (form class numbers of orders) are only
/// accepted behind the explicit flag.
pub fn class_number_imaginary(
    d: &Discriminant,
    budget: &Budget,
    allow_nonfundamental: bool,
) -> Result<u64> {
    if !d.value().is_negative() {
        return Err(Error::NotImaginary(d.value().clone()));
    }
    let dv = check_usable(d, budget, allow_nonfundamental)?;
    Ok(reduced_forms_imaginary(dv).len() as u64)
}

/// Narrow class number h+ of a real quadratic field: the number of
/// ρ-cycles of reduced indefinite forms.
pub fn narrow_class_number_real(
    d: &Discriminant,
    budget: &Budget,
    allow_nonfundamental: bool,
) -> Result<u64> {
    if !d.value().is_positive() {
        return Err(Error::NotReal(d.value().clone()));
    }
    let dv = check_usable(d, budget, allow_nonfundamental)?;
    Ok(reduction_cycles(dv).len() as u64)
}

fn cube(f: &QForm) -> Result<QForm> {
    f.compose(f)?.compose(f)
}

fn rank_from_count(count: usize, d: &BigInt) -> Result<u32> {
    let mut r = 0u32;
    let mut pow = 1usize;
    while pow < count {
        pow *= 3;
        r += 1;
    }
    if pow != count {
        return Err(Error::CertificateCheck {
            item: format!("three_rank({d})"),
            detail: format!("cube-kernel size {count} is not a power of 3"),
        });
    }
    Ok(r)
}

/// 3-rank of the class group: r with 3^r elements cubing to the identity.
/// Positive discriminants are measured in the narrow group, whose 3-rank
/// equals the ordinary one.
pub fn three_rank(d: &Discriminant, budget: &Budget, allow_nonfundamental: bool) -> Result<u32> {
    let dv = check_usable(d, budget, allow_nonfundamental)?;
    if dv < 0 {
        let forms = reduced_forms_imaginary(dv);
        let ident = principal_form(dv);
        let mut count = 0usize;
        for f in &forms {
            if cube(f)? == ident {
                count += 1;
            }
        }
        rank_from_count(count, d.value())
    } else {
        let cycles = reduction_cycles(dv);
        let mut cycle_of: HashMap<QForm, usize> = HashMap::new();
        for (i, cy) in cycles.iter().enumerate() {
            for f in cy {
                cycle_of.insert(*f, i);
            }
        }
        let principal = cycle_of[&principal_form(dv)];
        let mut count = 0usize;
        for cy in &cycles {
            let f3 = cube(&cy[0])?;
            if cycle_of[&f3] == principal {
                count += 1;
            }
        }
        rank_from_count(count, d.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "imaginary-ordinary")]
    ImaginaryOrdinary,
    #[serde(rename = "real-narrow")]
    RealNarrow,
}

/// The oracle's verdict for one quadratic field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    #[serde(with = "crate::serde_bigint")]
    pub discriminant: BigInt,
    pub kind: GroupKind,
    pub class_number: u64,
    pub three_rank: u32,
}

/// Class number and 3-rank of Q(√radicand), ordinary for imaginary fields,
/// narrow for real ones.
pub fn class_group_summary(radicand: &BigInt, budget: &Budget) -> Result<ClassGroupSummary> {
    let d = fundamental_discriminant(radicand, budget)?;
    let (kind, class_number) = if d.value().is_negative() {
        (GroupKind::ImaginaryOrdinary, class_number_imaginary(&d, budget, false)?)
    } else {
        (GroupKind::RealNarrow, narrow_class_number_real(&d, budget, false)?)
    };
    let three_rank = three_rank(&d, budget, false)?;
    Ok(ClassGroupSummary { discriminant: d.value().clone(), kind, class_number, three_rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(v: i64) -> Discriminant {
        Discriminant::new(BigInt::from(v)).unwrap()
    }

    #[test]
    fn discriminant_residue_and_square_rejected() {
        assert!(Discriminant::new(BigInt::from(-23)).is_ok());
        assert!(matches!(
            Discriminant::new(BigInt::from(-2)),
            Err(Error::BadDiscriminantResidue(_))
        ));
        assert!(matches!(
            Discriminant::new(BigInt::from(16)),
            Err(Error::SquareRadicand(_))
        ));
    }

    #[test]
    fn fundamental_discriminant_examples() {
        let b = Budget::default();
        assert_eq!(
            fundamental_discriminant(&BigInt::from(-2915), &b).unwrap().value(),
            &BigInt::from(-2915)
        );
        assert_eq!(
            fundamental_discriminant(&BigInt::from(2), &b).unwrap().value(),
            &BigInt::from(8)
        );
        assert_eq!(
            fundamental_discriminant(&BigInt::from(-23328), &b).unwrap().value(),
            &BigInt::from(-8)
        );
        assert!(matches!(
            fundamental_discriminant(&BigInt::from(9), &b),
            Err(Error::SquareRadicand(_))
        ));
    }

    #[test]
    fn reduce_examples() {
        let f = QForm::new(6, 11, 6).unwrap();
        assert_eq!(f.reduce().unwrap(), QForm { a: 1, b: 1, c: 6 });
        let f = QForm::new(1, 1, 6).unwrap();
        assert_eq!(f.reduce().unwrap(), QForm { a: 1, b: 1, c: 6 });
        let f = QForm::new(1, 0, 1).unwrap();
        assert_eq!(f.reduce().unwrap(), QForm { a: 1, b: 0, c: 1 });
        assert!(QForm::new(2, 2, 2).is_err());
    }

    #[test]
    fn class_numbers_small() {
        let b = Budget::default();
        assert_eq!(class_number_imaginary(&disc(-23), &b, false).unwrap(), 3);
        assert_eq!(class_number_imaginary(&disc(-4), &b, false).unwrap(), 1);
        assert_eq!(class_number_imaginary(&disc(-2915), &b, false).unwrap(), 24);
        assert!(matches!(
            class_number_imaginary(&disc(5), &b, false),
            Err(Error::NotImaginary(_))
        ));
        // -12 = 4·(-3) with -3 ≡ 1 (mod 4): an order, not a field.
        assert!(matches!(
            class_number_imaginary(&disc(-12), &b, false),
            Err(Error::NotFundamental(_))
        ));
        assert_eq!(class_number_imaginary(&disc(-12), &b, true).unwrap(), 1);
    }

    #[test]
    fn narrow_class_numbers_small() {
        let b = Budget::default();
        assert_eq!(narrow_class_number_real(&disc(5), &b, false).unwrap(), 1);
        assert_eq!(narrow_class_number_real(&disc(12), &b, false).unwrap(), 2);
        assert_eq!(narrow_class_number_real(&disc(229), &b, false).unwrap(), 3);
        // Fundamental discriminant of the Prop-2.4 radicand at t = 1.
        assert_eq!(narrow_class_number_real(&disc(47964), &b, false).unwrap(), 24);
        assert!(matches!(
            narrow_class_number_real(&disc(-23), &b, false),
            Err(Error::NotReal(_))
        ));
    }

    #[test]
    fn reduced_forms_minus_23() {
        let forms = reduced_forms_imaginary(-23);
        assert_eq!(
            forms,
            vec![
                QForm { a: 1, b: 1, c: 6 },
                QForm { a: 2, b: -1, c: 3 },
                QForm { a: 2, b: 1, c: 3 },
            ]
        );
    }

    #[test]
    fn composition_on_minus_23() {
        let g = QForm::new(2, 1, 3).unwrap();
        let ginv = QForm::new(2, -1, 3).unwrap();
        let id = QForm::new(1, 1, 6).unwrap();
        assert_eq!(g.compose(&ginv).unwrap(), id);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&g).unwrap(), ginv);
        let other = QForm::new(1, 0, 1).unwrap();
        assert!(matches!(
            g.compose(&other),
            Err(Error::DiscriminantMismatch(_, _))
        ));
    }

    #[test]
    fn group_laws_exhaustive_small() {
        let b = Budget::default();
        for dv in [-23i64, -47, -71, -4, -163, -2915] {
            let d = disc(dv);
            if !d.is_fundamental(&b).unwrap() {
                continue;
            }
            let forms = reduced_forms_imaginary(dv as i128);
            let id = principal_form(dv as i128);
            for f in &forms {
                assert_eq!(f.compose(&id).unwrap(), *f);
                assert_eq!(f.compose(&f.inverse()).unwrap(), id);
                for g in &forms {
                    let fg = f.compose(g).unwrap();
                    assert!(forms.contains(&fg), "closure fails at {fg:?} in {dv}");
                }
            }
            // Associativity on a few triples.
            for f in forms.iter().take(3) {
                for g in forms.iter().take(3) {
                    for h in forms.iter().take(3) {
                        let lhs = f.compose(g).unwrap().compose(h).unwrap();
                        let rhs = f.compose(&g.compose(h).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn three_rank_examples() {
        let b = Budget::default();
        assert_eq!(three_rank(&disc(-23), &b, false).unwrap(), 1);
        assert_eq!(three_rank(&disc(-4), &b, false).unwrap(), 0);
        // d = 79: Δ = 316 for the real field, Δ = -3·79·4 → -948 reflected.
        let s = three_rank(&disc(-948), &b, false).unwrap();
        assert!((1..=2).contains(&s), "s = {s}");
        assert_eq!(three_rank(&disc(316), &b, false).unwrap(), 1);
    }

    #[test]
    fn summary_consistency() {
        let b = Budget::default();
        let s = class_group_summary(&BigInt::from(-23), &b).unwrap();
        assert_eq!(s.class_number, 3);
        assert_eq!(s.three_rank, 1);
        assert!(matches!(s.kind, GroupKind::ImaginaryOrdinary));
        assert_eq!((s.class_number % 3 == 0), (s.three_rank >= 1));
        let s = class_group_summary(&BigInt::from(11991), &b).unwrap();
        assert!(matches!(s.kind, GroupKind::RealNarrow));
        assert_eq!(s.class_number % 3, 0);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Budget { factor_digits: 20, enum_bound: 100 };
        assert!(matches!(
            class_number_imaginary(&disc(-2915), &tight, false),
            Err(Error::EnumBudget(_, _))
        ));
    }
}
