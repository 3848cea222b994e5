//! Multiprecision complex numbers over `astro_float::BigFloat`.
//!
//! Every operation rounds to nearest at the carrier's precision, so each step
//! has relative error at most `2^(1 - prec)`.

use std::cell::RefCell;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::Zero;

pub const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Runs `f` with this thread's constant cache (pi, ln 2, ...).
pub fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

pub fn pi(prec: usize) -> BigFloat {
    with_consts(|cc| cc.pi(prec, RM))
}

#[derive(Debug, Clone)]
pub struct HighPrecComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl HighPrecComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        HighPrecComplex { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        HighPrecComplex { re: BigFloat::from_i64(v, prec), im: BigFloat::from_i64(0, prec), prec }
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        HighPrecComplex { re, im: BigFloat::from_i64(0, prec), prec }
    }

    /// `r * (cos t + i sin t)`.
    pub fn from_polar(r: &BigFloat, t: &BigFloat, prec: usize) -> Self {
        let (cos, sin) = with_consts(|cc| (t.cos(prec, RM, cc), t.sin(prec, RM, cc)));
        HighPrecComplex { re: r.mul(&cos, prec, RM), im: r.mul(&sin, prec, RM), prec }
    }

    pub fn conj(&self) -> Self {
        HighPrecComplex { re: self.re.clone(), im: BigFloat::neg(&self.im), prec: self.prec }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let k = BigFloat::from_i64(k, self.prec);
        HighPrecComplex {
            re: self.re.mul(&k, self.prec, RM),
            im: self.im.mul(&k, self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let den = other.norm_sqr();
        let re = self.re.mul(&other.re, p, RM).add(&self.im.mul(&other.im, p, RM), p, RM);
        let im = self.im.mul(&other.re, p, RM).sub(&self.re.mul(&other.im, p, RM), p, RM);
        HighPrecComplex { re: re.div(&den, p, RM), im: im.div(&den, p, RM), prec: p }
    }

    pub fn pow_u32(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate `log2 |z|` (`-inf` for zero).
    pub fn log2_abs(&self) -> f64 {
        let m = log2_abs_real(&self.re).max(log2_abs_real(&self.im));
        if m == f64::NEG_INFINITY {
            return m;
        }
        // |z| lies within a factor sqrt(2) of max(|re|, |im|)
        let r = to_f64_scaled(&self.re, m);
        let i = to_f64_scaled(&self.im, m);
        m + 0.5 * (r * r + i * i).log2()
    }

    /// Lossy conversion for diagnostics.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (real_to_f64(&self.re), real_to_f64(&self.im))
    }
}

impl Add for &HighPrecComplex {
    type Output = HighPrecComplex;
    fn add(self, rhs: Self) -> HighPrecComplex {
        let p = self.prec.max(rhs.prec);
        HighPrecComplex { re: self.re.add(&rhs.re, p, RM), im: self.im.add(&rhs.im, p, RM), prec: p }
    }
}

impl Sub for &HighPrecComplex {
    type Output = HighPrecComplex;
    fn sub(self, rhs: Self) -> HighPrecComplex {
        let p = self.prec.max(rhs.prec);
        HighPrecComplex { re: self.re.sub(&rhs.re, p, RM), im: self.im.sub(&rhs.im, p, RM), prec: p }
    }
}

impl Mul for &HighPrecComplex {
    type Output = HighPrecComplex;
    fn mul(self, rhs: Self) -> HighPrecComplex {
        let p = self.prec.max(rhs.prec);
        let re = self.re.mul(&rhs.re, p, RM).sub(&self.im.mul(&rhs.im, p, RM), p, RM);
        let im = self.re.mul(&rhs.im, p, RM).add(&self.im.mul(&rhs.re, p, RM), p, RM);
        HighPrecComplex { re, im, prec: p }
    }
}

impl Neg for &HighPrecComplex {
    type Output = HighPrecComplex;
    fn neg(self) -> HighPrecComplex {
        HighPrecComplex { re: BigFloat::neg(&self.re), im: BigFloat::neg(&self.im), prec: self.prec }
    }
}

/// `floor(log2 |x|) + 1`-ish magnitude estimate; `-inf` for zero.
pub fn log2_abs_real(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, _, exp, _)) if !x.is_zero() => {
            let top = words.last().copied().unwrap_or(0) as f64 / 2f64.powi(64);
            exp as f64 + top.log2()
        }
        _ => f64::NEG_INFINITY,
    }
}

fn to_f64_scaled(x: &BigFloat, log2_scale: f64) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, sign, exp, _)) if !x.is_zero() => {
            let top = words.last().copied().unwrap_or(0) as f64 / 2f64.powi(64);
            let v = top * 2f64.powf(exp as f64 - log2_scale);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        _ => 0.0,
    }
}

pub fn real_to_f64(x: &BigFloat) -> f64 {
    to_f64_scaled(x, 0.0)
}

/// Exact conversion of an integral `BigFloat` to `BigInt`.
pub fn integral_to_bigint(x: &BigFloat) -> BigInt {
    let Some((words, bits, sign, exp, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if x.is_zero() || exp <= 0 {
        return BigInt::zero();
    }
    let mut mag = BigInt::from_slice(
        BigSign::Plus,
        &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
    );
    let shift = bits as i64 - exp as i64;
    if shift >= 0 {
        mag >>= shift as usize;
    } else {
        mag <<= (-shift) as usize;
    }
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

/// Nearest integer to `x` and the residual `|x - round(x)|` as an `f64`.
pub fn round_to_bigint(x: &BigFloat, prec: usize) -> (BigInt, f64) {
    let half = BigFloat::from_f64(0.5, prec);
    let rounded = x.add(&half, prec, RM).floor();
    let residual = real_to_f64(&x.sub(&rounded, prec, RM)).abs();
    (integral_to_bigint(&rounded), residual)
}
