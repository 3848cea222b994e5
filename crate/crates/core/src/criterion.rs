//! Nonemptiness criterion for the `F_p`-roots of `H_D mod p`, for primes `p`
//! inert in `K` with `p > |D|`.
//!
//! The roots exist iff for every prime `l | D`:
//!
//! * `l` odd: `(-p / l) = 1`;
//! * `l = 2`: (a) `p ≡ 7 (mod 8)`, or (b) `-p + D/4 ≡ 0, 1, 4 (mod 8)`, or
//!   (c) `-p + D ≡ 1 (mod 8)`.
//!
//! These are exactly the conditions for `-p` to be a norm from `O_l^×`,
//! i.e. for `x^2 - (D/4) y^2 = -p` to be solvable in `Z_l`. The
//! [`local_norm_solvable`] oracle decides that equation directly by a residue
//! search and Hensel lifting, without using the congruences above.
//!
//! The condition that the quaternion algebra `(-d, -p)` be ramified only at
//! `p` and infinity (`(-p / l) = 1` for odd `l | d`, `d` the squarefree kernel)
//! needs no separate check: every prime dividing `d` divides `D`, so it is
//! already covered by the per-`l` conditions.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{distinct_prime_factors, is_prime};
use crate::error::{Error, Result};
use crate::quadform::{two_torsion_order, Discriminant};

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    const TAB: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let v = n.trailing_zeros();
    n >>= v;
    let mut k: i8 = if v.is_multiple_of(2) { 1 } else { TAB[(a & 7) as usize] };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n is odd and positive: Jacobi symbol, periodic in a
    a = a.rem_euclid(n);
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB[(n & 7) as usize];
        }
        if a & n & 2 != 0 {
            k = -k;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// `p` stays prime in `K = Q(sqrt D)`: `(D / p) = -1`.
///
/// Uses `D` itself rather than its squarefree kernel, which agrees whenever
/// `p ∤ D`.
pub fn is_inert(disc: Discriminant, p: u64) -> bool {
    kronecker(disc.value(), p as i64) == -1
}

/// Which clause of the criterion a prime `l | D` satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionTag {
    /// `l` odd and `(-p / l) = 1`.
    OddLegendre,
    /// `p ≡ 7 (mod 8)`.
    TwoA,
    /// `-p + D/4 ≡ 0, 1, 4 (mod 8)`.
    TwoB,
    /// `-p + D ≡ 1 (mod 8)`.
    TwoC,
    Failed,
}

impl ConditionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionTag::OddLegendre => "i",
            ConditionTag::TwoA => "ii(a)",
            ConditionTag::TwoB => "ii(b)",
            ConditionTag::TwoC => "ii(c)",
            ConditionTag::Failed => "none",
        }
    }
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ConditionTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Condition (i) for an odd prime `l | D`.
pub fn odd_ell_condition(disc: Discriminant, p: u64, ell: u64) -> Result<bool> {
    if ell.is_multiple_of(2) || !is_prime(ell) || disc.value() % ell as i64 != 0 {
        return Err(Error::BadOddEll { disc: disc.value(), ell });
    }
    Ok(kronecker(-(p as i64), ell as i64) == 1)
}

/// Condition (ii) at `l = 2`; the tag is the first of (a), (b), (c) that holds.
pub fn two_ell_condition(disc: Discriminant, p: u64) -> Result<(bool, ConditionTag)> {
    let d = disc.value();
    if d % 2 != 0 {
        return Err(Error::OddDiscriminant(d));
    }
    let p = p as i64;
    let tag = if p.rem_euclid(8) == 7 {
        ConditionTag::TwoA
    } else if matches!((-p + d / 4).rem_euclid(8), 0 | 1 | 4) {
        ConditionTag::TwoB
    } else if (-p + d).rem_euclid(8) == 1 {
        ConditionTag::TwoC
    } else {
        ConditionTag::Failed
    };
    Ok((tag != ConditionTag::Failed, tag))
}

/// Per-prime outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllCondition {
    pub ell: u64,
    pub condition_met: bool,
    pub which_subcase: ConditionTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    #[serde(rename = "D")]
    pub disc: Discriminant,
    pub p: u64,
    pub inert: bool,
    pub applicable: bool,
    /// Why the criterion does not apply, when it does not.
    pub reason: Option<String>,
    pub per_ell: Vec<EllCondition>,
    pub predicted_nonempty: Option<bool>,
    pub predicted_count: Option<u64>,
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(())
}

/// Evaluates the criterion for `(D, p)`. Inputs outside the hypotheses
/// (`p` split or ramified, or `p <= |D|`) get a report without a prediction.
pub fn predict(disc: Discriminant, p: u64) -> Result<CriterionReport> {
    check_prime(p)?;
    let inert = is_inert(disc, p);
    let large = p > disc.abs();
    let reason = match (inert, large) {
        (true, true) => None,
        (false, _) => Some(match kronecker(disc.value(), p as i64) {
            0 => format!("p = {p} is ramified (divides D = {disc})"),
            _ => format!("p = {p} splits in Q(sqrt({disc}))"),
        }),
        (true, false) => Some(format!("p = {p} does not exceed |D| = {}", disc.abs())),
    };
    let applicable = reason.is_none();
    let mut report = CriterionReport {
        disc,
        p,
        inert,
        applicable,
        reason,
        per_ell: Vec::new(),
        predicted_nonempty: None,
        predicted_count: None,
    };
    if !applicable {
        return Ok(report);
    }
    for ell in distinct_prime_factors(disc.value()) {
        let (met, tag) = if ell == 2 {
            two_ell_condition(disc, p)?
        } else {
            let met = odd_ell_condition(disc, p, ell)?;
            (met, if met { ConditionTag::OddLegendre } else { ConditionTag::Failed })
        };
        report.per_ell.push(EllCondition { ell, condition_met: met, which_subcase: tag });
    }
    let nonempty = report.per_ell.iter().all(|c| c.condition_met);
    report.predicted_nonempty = Some(nonempty);
    report.predicted_count = Some(if nonempty { two_torsion_order(disc) } else { 0 });
    Ok(report)
}

/// A solution of `x^2 - (D/4) y^2 ≡ -p (mod modulus)` obtained by lifting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormWitness {
    pub ell: u64,
    pub modulus: u128,
    /// `D/4` as a residue mod `modulus`.
    pub k: u128,
    pub x: u128,
    pub y: u128,
}

impl NormWitness {
    pub fn verify(&self, p: u64) -> bool {
        let m = self.modulus;
        let lhs = (self.x * self.x % m + m - self.k * (self.y * self.y % m) % m) % m;
        lhs == (m - p as u128 % m) % m
    }
}

/// Lifting target: the largest power of `ell` below `2^40`.
fn lift_modulus(ell: u64) -> (u32, u128) {
    let mut e = 0u32;
    let mut m: u128 = 1;
    while m * ell as u128 <= 1u128 << 40 {
        m *= ell as u128;
        e += 1;
    }
    (e, m)
}

fn pow_u128(b: u128, mut e: u128, m: u128) -> u128 {
    let (mut acc, mut b) = (1 % m, b % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Inverse of a unit modulo `ell^e` (Euler: `u^(phi - 1)`).
fn inv_unit(u: u128, ell: u64, m: u128) -> u128 {
    let phi = m / ell as u128 * (ell as u128 - 1);
    pow_u128(u, phi - 1, m)
}

/// Lifts a unit square root `r` of `t` from `ell^from` to the full modulus `m`.
fn lift_sqrt(t: u128, mut r: u128, ell: u64, from: u32, m: u128) -> u128 {
    let ell = ell as u128;
    let mut pk = ell.pow(from);
    if ell == 2 {
        // r^2 ≡ t (mod 2^j), j >= 3: r or r + 2^(j-1) works mod 2^(j+1)
        while pk < m {
            let next = pk * 2;
            if (r * r) % next != t % next {
                r = (r + pk / 2) % next;
            }
            pk = next;
        }
    } else {
        // Newton step one digit at a time: r += c ell^j with 2 r c ≡ -(r^2 - t)/ell^j
        while pk < m {
            let next = pk * ell;
            let err = (r * r % next + next - t % next) % next;
            let digit = err / pk;
            let inv = inv_unit(2 * r % ell, ell as u64, ell);
            let c = (ell - digit % ell) % ell * inv % ell;
            r = (r + c * pk) % next;
            pk = next;
        }
    }
    r % m
}

/// Decides solvability of `x^2 - (D/4) y^2 = -p` in `Z_ell^2` and returns a
/// lifted witness when solvable.
///
/// Odd `ell`: a solution mod `ell` with nonvanishing gradient `(2x, -2ky)`
/// lifts; any `ell`-adic solution reduces to one, and the gradient cannot
/// vanish because `-p` is a unit. `ell = 2`: since `-p` is odd, any 2-adic
/// solution has `x` or `(D/4) y` odd, and such a solution mod 8 lifts.
pub fn local_norm_witness(disc: Discriminant, p: u64, ell: u64) -> Result<Option<NormWitness>> {
    let d = disc.value();
    if !is_prime(ell) || d % ell as i64 != 0 {
        return Err(Error::NormPrecondition(format!("ell = {ell} must be a prime dividing D = {d}")));
    }
    if !is_prime(p) || p.is_multiple_of(2) || p == ell || d % p as i64 == 0 {
        return Err(Error::NormPrecondition(format!("p = {p} must be an odd prime not dividing ell * D")));
    }
    if !is_inert(disc, p) {
        return Err(Error::NormPrecondition(format!("p = {p} is not inert for D = {d}")));
    }
    let (exp, m) = lift_modulus(ell);
    let k: u128 = if ell == 2 {
        // 4 | D here since D ≡ 0, 1 (mod 4)
        ((d / 4) as i128).rem_euclid(m as i128) as u128
    } else {
        let d_mod = (d as i128).rem_euclid(m as i128) as u128;
        d_mod * inv_unit(4, ell, m) % m
    };
    let target = (m - p as u128 % m) % m; // -p mod m
    let (search, from) = if ell == 2 { (8u128, 3u32) } else { (ell as u128, 1u32) };
    let ell128 = ell as u128;

    // residue -> square roots, so the scan over (x, y) costs O(search)
    let mut roots: Vec<Vec<u128>> = vec![Vec::new(); search as usize];
    for x in 0..search {
        roots[(x * x % search) as usize].push(x);
    }
    for y in 0..search {
        let t_small = (target % search + (k % search) * (y * y) % search) % search;
        for &x in &roots[t_small as usize] {
            let x_unit = x % ell128 != 0;
            let ky_unit = !((k % ell128) * (y % ell128)).is_multiple_of(ell128);
            let witness = if x_unit {
                // fix y, solve x^2 = -p + k y^2
                let t = (target + k * (y * y % m)) % m;
                let xr = lift_sqrt(t, x, ell, from, m);
                NormWitness { ell, modulus: m, k, x: xr, y }
            } else if ky_unit {
                // fix x, solve y^2 = (x^2 + p) / k
                let t = (x * x % m + p as u128 % m) % m * inv_unit(k % m, ell, m) % m;
                let yr = lift_sqrt(t, y, ell, from, m);
                NormWitness { ell, modulus: m, k, x, y: yr }
            } else {
                continue;
            };
            assert!(witness.verify(p), "lift failed: {witness:?} (exp {exp})");
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// `-p` is a norm from `O_ell^×`.
pub fn local_norm_solvable(disc: Discriminant, p: u64, ell: u64) -> Result<bool> {
    local_norm_witness(disc, p, ell).map(|w| w.is_some())
}
