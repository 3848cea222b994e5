//! Dense polynomials over `F_p` for word-sized odd primes `p`.
//!
//! Products go through `u128`, so any `p < 2^64` is exact. Roots in `F_p`
//! are counted as `deg gcd(x^p - x, f)` and listed by exhaustive evaluation
//! (capped at [`LIST_ROOTS_MAX_P`]).

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::classpoly::IntPolynomial;
use crate::error::{Error, Result};

pub const LIST_ROOTS_MAX_P: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FpPolynomial {
    p: u64,
    /// Ascending degree, no trailing zeros. Empty means zero, which only
    /// arises as an arithmetic result.
    coeffs: Vec<u64>,
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

impl FpPolynomial {
    /// Reduces `coeffs` (ascending) mod `p`. Rejects composite or even `p`
    /// and the zero polynomial.
    pub fn new(p: u64, coeffs: &[u64]) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let coeffs = trim(coeffs.iter().map(|c| c % p).collect());
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(FpPolynomial { p, coeffs })
    }

    /// Like [`FpPolynomial::new`] but for signed coefficients.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Result<Self> {
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        Self::new(p, &reduced)
    }

    fn raw(p: u64, coeffs: Vec<u64>) -> Self {
        FpPolynomial { p, coeffs: trim(coeffs) }
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::raw(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        Ok(Self::raw(p, out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Ok(Self::raw(p, out))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::raw(self.p, Vec::new()));
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Ok(Self::raw(p, out))
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_field(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::raw(p, Vec::new()), Self::raw(p, rem)));
        }
        let lead_inv = inv_mod(divisor.coeffs[dd], p);
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let t = mul_mod(rem[k], lead_inv, p);
            if t == 0 {
                continue;
            }
            quot[k - dd] = t;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = (rem[idx] + p - mul_mod(t, c, p)) % p;
            }
        }
        rem.truncate(dd);
        Ok((Self::raw(p, quot), Self::raw(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p);
                Self::raw(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let out = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| mul_mod(c, k as u64 % p, p)).collect();
        Self::raw(p, out)
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.p);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

/// Monic gcd; `gcd(0, 0)` is zero.
pub fn poly_gcd(f: &FpPolynomial, g: &FpPolynomial) -> Result<FpPolynomial> {
    f.check_field(g)?;
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// `base^e mod m` by square-and-multiply.
pub fn poly_powmod(base: &FpPolynomial, mut e: u64, m: &FpPolynomial) -> Result<FpPolynomial> {
    base.check_field(m)?;
    match m.degree() {
        None | Some(0) => return Err(Error::ConstantModulus),
        _ => {}
    }
    let mut acc = FpPolynomial::raw(m.p, vec![1]);
    let mut sq = base.rem(m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq)?.rem(m)?;
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq)?.rem(m)?;
        }
    }
    Ok(acc)
}

/// Reduces `H` coefficientwise into `[0, p)`. Requires a prime `p > 3`.
pub fn reduce_mod_p(h: &IntPolynomial, p: u64) -> Result<FpPolynomial> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::PrimeTooSmall(p));
    }
    let modulus = BigInt::from(p);
    let coeffs: Vec<u64> = h
        .coeffs()
        .iter()
        .map(|c| {
            let r = ((c % &modulus) + &modulus) % &modulus;
            r.to_u64().expect("residue below p")
        })
        .collect();
    FpPolynomial::new(p, &coeffs)
}

/// Number of distinct roots in `F_p`: `deg gcd(x^p - x mod f, f)`.
pub fn count_fp_roots(f: &FpPolynomial) -> Result<usize> {
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(0),
        _ => {}
    }
    let x = FpPolynomial::x(f.p);
    let frob = poly_powmod(&x, f.p, f)?.sub(&x)?;
    let g = poly_gcd(&frob, f)?;
    Ok(g.degree().unwrap_or(0))
}

/// Sorted distinct roots by evaluating at every residue.
pub fn list_fp_roots(f: &FpPolynomial) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.p > LIST_ROOTS_MAX_P {
        return Err(Error::ListingBoundExceeded { p: f.p, bound: LIST_ROOTS_MAX_P });
    }
    Ok((0..f.p).filter(|&x| f.eval(x) == 0).collect())
}

/// `gcd(f, f')` is constant.
pub fn is_squarefree(f: &FpPolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = poly_gcd(f, &f.derivative())?;
    Ok(g.degree() == Some(0))
}
