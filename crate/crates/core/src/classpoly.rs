//! Hilbert class polynomials `H_D(x) = prod (x - j(tau_f))` over the reduced
//! forms `f` of discriminant `D`, computed by evaluating `j` at the CM points
//! in multiprecision and rounding the expanded coefficients to integers.
//!
//! `j` is evaluated as `E4(q)^3 / Delta(q)` with `Delta = q * prod (1 - q^n)^24`.
//! For reduced forms `|q| <= exp(-pi sqrt 3) ~ 0.0043`, so both series lose
//! roughly eight bits per term.

use std::f64::consts::{LN_2, LOG2_E, PI};
use std::fmt;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::highprec::{self, round_to_bigint, HighPrecComplex, RM};
use crate::quadform::{enumerate_class_group, ClassGroupTable, Discriminant, QuadForm};

/// Below this the rounding check cannot be trusted.
pub const MIN_PRECISION: usize = 64;
/// Extra bits on every series tail.
pub const TAIL_GUARD_BITS: usize = 16;
/// Retries at doubled precision before giving up.
pub const MAX_RETRIES: usize = 3;

/// Monic polynomial with exact integer coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Coefficients in ascending degree. The leading one must be 1.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Option<Self> {
        match coeffs.last() {
            Some(lead) if lead.is_one() => Some(IntPolynomial { coeffs }),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Height in bits: `max log2 |c_k|`.
    pub fn height_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The CM point `tau = (-b + sqrt(D)) / 2a` in the upper half plane.
pub fn form_to_tau(f: &QuadForm, prec: usize) -> HighPrecComplex {
    let d = f.discriminant().abs();
    let two_a = BigFloat::from_i64(2 * f.a(), prec);
    let re = BigFloat::from_i64(-f.b(), prec).div(&two_a, prec, RM);
    let im = BigFloat::from_u64(d, prec).sqrt(prec, RM).div(&two_a, prec, RM);
    HighPrecComplex::new(re, im, prec)
}

/// Number of series terms needed so the E4 / eta tails fall below
/// `2^-(prec + TAIL_GUARD_BITS)`, given `log2 |q|`.
fn series_terms(log2_q: f64, prec: usize) -> usize {
    let target = -((prec + TAIL_GUARD_BITS) as f64);
    // tail of 240 sum n^3 q^n / (1 - q^n) beyond N is at most
    // 2 * 240 * (N+1)^3 |q|^(N+1) for |q| < 1/2
    let mut n = 1usize;
    loop {
        let m = (n + 1) as f64;
        let tail = 1.0 + 240f64.log2() + 3.0 * m.log2() + m * log2_q;
        if tail < target {
            return n;
        }
        n += 1;
    }
}

/// `j(tau)` with relative accuracy about `2^-prec`.
pub fn j_invariant(tau: &HighPrecComplex, prec: usize) -> Result<HighPrecComplex> {
    if prec < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(prec));
    }
    let work = prec + TAIL_GUARD_BITS + 16;
    let y = highprec::real_to_f64(&tau.im);
    debug_assert!(y > 0.0, "tau must lie in the upper half plane");
    let log2_q = -2.0 * PI * y * LOG2_E;
    let terms = series_terms(log2_q, prec);

    // q = exp(-2 pi y) * (cos 2 pi x + i sin 2 pi x)
    let two_pi = highprec::pi(work).mul(&BigFloat::from_u8(2, work), work, RM);
    let radius = highprec::with_consts(|cc| {
        two_pi.mul(&tau.im, work, RM).neg().exp(work, RM, cc)
    });
    let angle = two_pi.mul(&tau.re, work, RM);
    let q = HighPrecComplex::from_polar(&radius, &angle, work);

    let one = HighPrecComplex::one(work);
    let mut qn = one.clone();
    let mut eta_prod = one.clone();
    let mut e4_sum = HighPrecComplex::zero(work);
    for n in 1..=terms as i64 {
        qn = &qn * &q;
        let denom = &one - &qn;
        eta_prod = &eta_prod * &denom;
        let term = qn.div(&denom).scale_i64(n * n * n);
        e4_sum = &e4_sum + &term;
    }
    let e4 = &one + &e4_sum.scale_i64(240);
    let delta = &q * &eta_prod.pow_u32(24);
    let j = e4.pow_u32(3).div(&delta);
    Ok(HighPrecComplex::new(j.re, j.im, work))
}

/// Working precision for `H_D`: `ceil(pi sqrt|D| / ln 2 * sum 1/a) + 33 + h`,
/// never below [`MIN_PRECISION`].
pub fn precision_bound(disc: Discriminant, table: &ClassGroupTable) -> usize {
    let inv_a: f64 = table.forms.iter().map(|f| 1.0 / f.a() as f64).sum();
    let height = (PI * (disc.abs() as f64).sqrt() / LN_2 * inv_a).ceil() as usize;
    (height + 33 + table.h).max(MIN_PRECISION)
}

/// `j(tau_f)` for every form in the table, in table order.
pub fn cm_values(table: &ClassGroupTable, prec: usize) -> Result<Vec<HighPrecComplex>> {
    table.forms.iter().map(|f| j_invariant(&form_to_tau(f, prec), prec)).collect()
}

/// Expands `prod (x - r)` into ascending complex coefficients.
pub fn expand_from_roots(roots: &[HighPrecComplex], prec: usize) -> Vec<HighPrecComplex> {
    let mut coeffs = vec![HighPrecComplex::one(prec)];
    for r in roots {
        let mut next = vec![HighPrecComplex::zero(prec); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * r);
        }
        coeffs = next;
    }
    coeffs
}

/// Unrounded numerical expansion of `H_D` at a fixed precision.
#[derive(Debug, Clone)]
pub struct NumericExpansion {
    pub prec: usize,
    pub roots: Vec<HighPrecComplex>,
    pub coeffs: Vec<HighPrecComplex>,
}

impl NumericExpansion {
    /// Rounds every coefficient. Returns the polynomial and the worst
    /// residual, counting imaginary parts as residual too.
    pub fn round(&self) -> (IntPolynomial, f64) {
        let mut worst = 0f64;
        let mut ints = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (n, res) = round_to_bigint(&c.re, self.prec);
            let im = highprec::real_to_f64(&c.im).abs();
            worst = worst.max(res).max(im);
            ints.push(n);
        }
        let last = ints.len() - 1;
        ints[last] = BigInt::one();
        (IntPolynomial { coeffs: ints }, worst)
    }
}

pub fn expand_at_precision(disc: Discriminant, prec: usize) -> Result<NumericExpansion> {
    let table = enumerate_class_group(disc);
    let roots = cm_values(&table, prec)?;
    let work = roots.first().map_or(prec, |r| r.prec);
    let coeffs = expand_from_roots(&roots, work);
    Ok(NumericExpansion { prec: work, roots, coeffs })
}

/// What happened while computing `H_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertReport {
    pub initial_prec: usize,
    pub final_prec: usize,
    pub attempts: usize,
    pub max_residual: f64,
}

/// Single attempt at a fixed precision; fails if any residual is `>= 1/4`.
pub fn hilbert_class_polynomial_at(disc: Discriminant, prec: usize) -> Result<(IntPolynomial, f64)> {
    let expansion = expand_at_precision(disc, prec)?;
    let (poly, residual) = expansion.round();
    if residual >= 0.25 {
        return Err(Error::RoundingFailure { disc: disc.value(), prec, residual });
    }
    Ok((poly, residual))
}

/// `H_D(x)`, with retries at doubled precision when rounding is ambiguous.
pub fn hilbert_class_polynomial_with_report(disc: Discriminant) -> Result<(IntPolynomial, HilbertReport)> {
    let table = enumerate_class_group(disc);
    let initial = precision_bound(disc, &table);
    let mut prec = initial;
    let mut last_err = None;
    for attempt in 0..=MAX_RETRIES {
        match hilbert_class_polynomial_at(disc, prec) {
            Ok((poly, residual)) => {
                debug_assert_eq!(poly.degree(), table.h);
                let report = HilbertReport {
                    initial_prec: initial,
                    final_prec: prec,
                    attempts: attempt + 1,
                    max_residual: residual,
                };
                return Ok((poly, report));
            }
            Err(e) => {
                log::warn!("H_{disc}: {e}; retrying at {} bits", 2 * prec);
                last_err = Some(e);
                prec *= 2;
            }
        }
    }
    Err(last_err.expect("at least one attempt"))
}

pub fn hilbert_class_polynomial(disc: Discriminant) -> Result<IntPolynomial> {
    hilbert_class_polynomial_with_report(disc).map(|(p, _)| p)
}
