//! Picard groups of imaginary quadratic orders, modelled by reduced primitive
//! positive definite binary quadratic forms `(a, b, c)` of discriminant
//! `D = b^2 - 4ac` under Gauss composition.
//!
//! Non-fundamental discriminants are handled exactly like fundamental ones:
//! primitivity `gcd(a, b, c) = 1` is what cuts the form classes down to the
//! invertible ideal classes of the order of discriminant `D`.

use std::fmt;

use serde::Serialize;

use crate::arith::{distinct_prime_factors, ext_gcd, gcd};
use crate::error::{Error, Result};

/// Discriminant of an imaginary quadratic order: `D < 0`, `D ≡ 0, 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        Ok(Discriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    /// All valid discriminants `-max_abs <= D <= -3`, ordered by increasing `|D|`.
    pub fn all_up_to(max_abs: u64) -> impl Iterator<Item = Discriminant> {
        (3..=max_abs as i64).filter_map(|n| Discriminant::new(-n).ok())
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Alias matching the operation name used throughout the CLI.
pub fn make_discriminant(d: i64) -> Result<Discriminant> {
    Discriminant::new(d)
}

/// A primitive positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadForm {
    /// Builds a form, checking positive definiteness and primitivity.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        if a <= 0 || c <= 0 || disc >= 0 || disc < i64::MIN as i128 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        if gcd(gcd(a, b), c) != 1 {
            return Err(Error::NotPrimitive { a, b, c });
        }
        Ok(QuadForm { a, b, c })
    }

    /// Builds the form `(a, b, (b^2 - D) / 4a)`, if that is integral.
    pub fn from_ab(disc: Discriminant, a: i64, b: i64) -> Result<Self> {
        let num = (b as i128) * (b as i128) - disc.value() as i128;
        let den = 4 * a as i128;
        if a <= 0 || num % den != 0 {
            return Err(Error::NotPositiveDefinite { a, b, c: 0 });
        }
        QuadForm::new(a, b, (num / den) as i64)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn discriminant(&self) -> Discriminant {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        Discriminant(d as i64)
    }

    /// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (-b != a && a != c))
    }

    /// `b = 0`, `a = b`, or `a = c`. For reduced forms this is exactly 2-torsion.
    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.a == self.b || self.a == self.c
    }

    /// The inverse class `(a, -b, c)` (not reduced in general).
    pub fn opposite(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }
    }

    /// Action of `S = [[0, -1], [1, 0]]`: `(a, b, c) -> (c, -b, a)`.
    pub fn act_s(&self) -> QuadForm {
        QuadForm { a: self.c, b: -self.b, c: self.a }
    }

    /// Action of `T = [[1, 1], [0, 1]]`: `(a, b, c) -> (a, b + 2a, a + b + c)`.
    /// `None` on overflow.
    pub fn act_t(&self) -> Option<QuadForm> {
        let b = self.b.checked_add(self.a.checked_mul(2)?)?;
        let c = self.a.checked_add(self.b)?.checked_add(self.c)?;
        Some(QuadForm { a: self.a, b, c })
    }

    /// Evaluates `f(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The identity class: `(1, 0, -D/4)` or `(1, 1, (1 - D)/4)`.
pub fn principal_form(disc: Discriminant) -> QuadForm {
    let d = disc.value();
    if d.rem_euclid(4) == 0 {
        QuadForm { a: 1, b: 0, c: -d / 4 }
    } else {
        QuadForm { a: 1, b: 1, c: (1 - d) / 4 }
    }
}

/// Gauss reduction to the unique reduced form in the `SL2(Z)` orbit.
pub fn reduce_form(f: &QuadForm) -> Result<QuadForm> {
    if gcd(gcd(f.a, f.b), f.c) != 1 {
        return Err(Error::NotPrimitive { a: f.a, b: f.b, c: f.c });
    }
    let disc = f.b as i128 * f.b as i128 - 4 * f.a as i128 * f.c as i128;
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    loop {
        // translate b into (-a, a]
        if b <= -a || b > a {
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            b = r;
            c = (b * b - disc) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    Ok(QuadForm { a: a as i64, b: b as i64, c: c as i64 })
}

/// Composition of two classes (Dirichlet composition), returned reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if df != dg {
        return Err(Error::DiscriminantMismatch(df.value(), dg.value()));
    }
    let disc = df.value() as i128;
    let (f1, f2) = if f.a <= g.a { (f, g) } else { (g, f) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);

    let s = (b1 + b2) / 2;
    let n = b2 - s;

    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (d, u, _v) = ext_gcd(a2, a1);
        (u, d)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let (d1, x2, y2) = ext_gcd(s, d);
        (x2, -y2, d1)
    };

    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!((b3 * b3 - disc) % (4 * a3), 0);

    let unreduced = QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 };
    reduce_form(&unreduced)
}

/// `mu` from Gauss' genus theory: `|Pic(O)[2]| = 2^(mu - 1)`.
pub fn gauss_mu(disc: Discriminant) -> u32 {
    let d = disc.value();
    let r = distinct_prime_factors(d).iter().filter(|&&p| p != 2).count() as u32;
    if d.rem_euclid(4) == 1 {
        return r;
    }
    let n = -d / 4;
    match (n % 4, n % 8) {
        (3, _) => r,
        (1, _) | (2, _) => r + 1,
        (_, 4) => r + 1,
        (_, 0) => r + 2,
        _ => unreachable!("n mod 4 covers all residues"),
    }
}

/// `2^(mu - 1)`.
pub fn two_torsion_order(disc: Discriminant) -> u64 {
    1u64 << (gauss_mu(disc) - 1)
}

/// Explicit table of `Pic(O)` for one discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroupTable {
    pub disc: Discriminant,
    pub forms: Vec<QuadForm>,
    pub h: usize,
    pub two_torsion: Vec<QuadForm>,
    pub mu: u32,
}

impl ClassGroupTable {
    pub fn two_torsion_order(&self) -> u64 {
        1u64 << (self.mu - 1)
    }
}

/// All reduced primitive forms of discriminant `D`, sorted by `a`, then `|b|`,
/// then `b > 0` first. The principal form comes first.
pub fn reduced_forms(disc: Discriminant) -> Vec<QuadForm> {
    let d = disc.value();
    let mut out = Vec::new();
    let mut a: i64 = 1;
    while 3 * a * a <= -d {
        // b ≡ D (mod 2)
        let start = if d.rem_euclid(2) == 0 { 0 } else { 1 };
        for b_abs in (start..=a).step_by(2) {
            let num = b_abs * b_abs - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            for b in [b_abs, -b_abs] {
                if b < 0 && (b_abs == a || a == c) {
                    continue;
                }
                if gcd(gcd(a, b), c) == 1 {
                    out.push(QuadForm { a, b, c });
                }
                if b_abs == 0 {
                    break;
                }
            }
        }
        a += 1;
    }
    out
}

/// Class number `h(D)`.
pub fn class_number(disc: Discriminant) -> usize {
    reduced_forms(disc).len()
}

/// Builds the class group table; 2-torsion is found by squaring each class.
pub fn enumerate_class_group(disc: Discriminant) -> ClassGroupTable {
    let forms = reduced_forms(disc);
    let principal = principal_form(disc);
    let two_torsion = forms
        .iter()
        .filter(|f| compose(f, f).expect("same discriminant") == principal)
        .copied()
        .collect();
    ClassGroupTable { disc, h: forms.len(), forms, two_torsion, mu: gauss_mu(disc) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn form(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c).unwrap()
    }

    #[test]
    fn discriminant_validation() {
        assert_eq!(make_discriminant(-15).unwrap().value(), -15);
        assert_eq!(make_discriminant(-4).unwrap().value(), -4);
        assert_eq!(make_discriminant(-14), Err(Error::InvalidDiscriminant(-14)));
        assert!(make_discriminant(-13).is_err());
        assert!(make_discriminant(0).is_err());
        assert!(make_discriminant(5).is_err());
    }

    #[test]
    fn principal_forms() {
        assert_eq!(principal_form(disc(-4)), form(1, 0, 1));
        assert_eq!(principal_form(disc(-15)), form(1, 1, 4));
        assert_eq!(principal_form(disc(-23)), form(1, 1, 6));
        assert!(principal_form(disc(-100)).is_reduced());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_form(&form(1, 0, 1)).unwrap(), form(1, 0, 1));
        assert_eq!(reduce_form(&form(3, 2, 2)).unwrap(), form(2, 2, 3));
        assert_eq!(reduce_form(&form(4, 2, 1)).unwrap(), form(1, 0, 3));
        // boundary sign conventions
        assert_eq!(reduce_form(&form(2, -2, 3)).unwrap(), form(2, 2, 3));
        assert_eq!(reduce_form(&form(3, -2, 3)).unwrap(), form(3, 2, 3));
    }

    #[test]
    fn reduction_rejects_non_primitive() {
        assert!(matches!(QuadForm::new(2, 2, 2), Err(Error::NotPrimitive { .. })));
        let raw = QuadForm { a: 2, b: 0, c: 2 };
        assert!(matches!(reduce_form(&raw), Err(Error::NotPrimitive { .. })));
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&form(1, 1, 4), &form(2, 1, 2)).unwrap(), form(2, 1, 2));
        assert_eq!(compose(&form(2, 1, 2), &form(2, 1, 2)).unwrap(), form(1, 1, 4));
        assert_eq!(compose(&form(2, 1, 3), &form(2, 1, 3)).unwrap(), form(2, -1, 3));
        assert_eq!(
            compose(&form(1, 1, 4), &form(1, 1, 6)),
            Err(Error::DiscriminantMismatch(-15, -23))
        );
    }

    #[test]
    fn class_group_examples() {
        let t = enumerate_class_group(disc(-15));
        assert_eq!(t.h, 2);
        assert_eq!(t.forms, vec![form(1, 1, 4), form(2, 1, 2)]);
        let t = enumerate_class_group(disc(-23));
        assert_eq!(t.forms, vec![form(1, 1, 6), form(2, 1, 3), form(2, -1, 3)]);
        assert_eq!(t.two_torsion, vec![form(1, 1, 6)]);
        let t = enumerate_class_group(disc(-4));
        assert_eq!(t.forms, vec![form(1, 0, 1)]);
        assert_eq!(class_number(disc(-47)), 5);
        assert_eq!(class_number(disc(-71)), 7);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(gauss_mu(disc(-15)), 2);
        assert_eq!(gauss_mu(disc(-4)), 1);
        assert_eq!(gauss_mu(disc(-32)), 2);
        assert_eq!(two_torsion_order(disc(-15)), 2);
        assert_eq!(two_torsion_order(disc(-4)), 1);
        assert_eq!(two_torsion_order(disc(-120)), 4);
        let t = enumerate_class_group(disc(-32));
        assert_eq!(t.two_torsion, vec![form(1, 0, 8), form(3, 2, 3)]);
    }

    #[test]
    fn act_generators_preserve_discriminant() {
        let f = form(2, 1, 3);
        assert_eq!(f.act_s().discriminant(), f.discriminant());
        assert_eq!(f.act_t().unwrap().discriminant(), f.discriminant());
        assert_eq!(reduce_form(&f.act_t().unwrap().act_s()).unwrap(), f);
    }
}
