//! Counting extensions of p-adic fields inside a fixed algebraic closure.
//!
//! `count_extensions` and `count_totally_ramified` evaluate the classical
//! closed-form counts for a field of residue characteristic `p` and given
//! absolute degree. `count_with_profile` counts extensions with a prescribed
//! ramification index and inertia degree by moving to the unramified shift:
//! an extension of `F` of degree `e*f` with ramification index exactly `e`
//! corresponds to a totally ramified degree-`e` extension of the unramified
//! degree-`f` extension of `F`.
//!
//! Every power appearing in the formulas has an exact integer exponent
//! (`sum_{i<=s} D / p^i` with `p^s | d | D`), which is asserted rather than
//! approximated.

use num::bigint::BigUint;
use num::traits::Zero;

use crate::exactmath::is_prime_u64;
use crate::{Error, Result};

/// Hard cap on `enumerate_profiles`: the counts grow doubly exponentially in
/// the degree, and nothing downstream needs more than degree 24.
pub const DEFAULT_PROFILE_DEGREE_CAP: u64 = 24;

/// A p-adic field described by its residue characteristic and absolute degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalField {
    pub p: u64,
    pub abs_degree: u64,
}

impl LocalField {
    pub fn new(p: u64, abs_degree: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if abs_degree == 0 {
            return Err(Error::InvalidInput(
                "absolute degree must be positive".into(),
            ));
        }
        Ok(LocalField { p, abs_degree })
    }

    /// The unramified extension of degree `f`.
    pub fn unramified_shift(&self, f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidInput(
                "inertia degree must be positive".into(),
            ));
        }
        let abs_degree = self
            .abs_degree
            .checked_mul(f)
            .ok_or_else(|| Error::LimitExceeded("absolute degree overflow".into()))?;
        Ok(LocalField {
            p: self.p,
            abs_degree,
        })
    }
}

/// A ramification/inertia profile `(e, f)` of an extension of local fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtensionProfile {
    pub e: u64,
    pub f: u64,
}

impl ExtensionProfile {
    pub fn new(e: u64, f: u64) -> Result<Self> {
        if e == 0 || f == 0 {
            return Err(Error::InvalidInput(
                "profile components must be positive".into(),
            ));
        }
        Ok(ExtensionProfile { e, f })
    }

    pub fn degree(&self) -> u64 {
        self.e * self.f
    }

    /// Wild iff the residue characteristic divides the ramification index.
    pub fn is_wild(&self, p: u64) -> bool {
        self.e % p == 0
    }
}

/// Splits `d = h * p^m` with `gcd(h, p) = 1`.
fn split_tame_wild(d: u64, p: u64) -> (u64, u32) {
    let mut h = d;
    let mut m = 0u32;
    while h % p == 0 {
        h /= p;
        m += 1;
    }
    (h, m)
}

/// Exact exponent `(1/p + ... + 1/p^s) * big_d`, an integer whenever
/// `p^s | big_d`; errors if integrality fails.
fn epsilon_exponent(s: u32, big_d: u64, p: u64) -> Result<u64> {
    let mut total = 0u64;
    let mut power = 1u64;
    for _ in 1..=s {
        power = power
            .checked_mul(p)
            .ok_or_else(|| Error::LimitExceeded("p^s overflow".into()))?;
        if big_d % power != 0 {
            return Err(Error::InvalidInput(format!(
                "non-integral exponent: {power} does not divide {big_d}"
            )));
        }
        total += big_d / power;
    }
    Ok(total)
}

/// Clamp an exact exponent into `u32` for `BigUint::pow`, guarding memory.
fn pow_exponent(e: u64) -> Result<u32> {
    if e > 20_000_000 {
        return Err(Error::LimitExceeded(format!(
            "power exponent {e} too large"
        )));
    }
    Ok(e as u32)
}

fn sigma_divisor_sum(h: u64) -> BigUint {
    let mut s = BigUint::zero();
    for l in 1..=h {
        if h % l == 0 {
            s += BigUint::from(l);
        }
    }
    s
}

/// Number of extensions of `field` of degree `d` inside a fixed algebraic
/// closure. Reduces to the divisor sum `sigma(d)` when `p` does not divide `d`.
pub fn count_extensions(field: &LocalField, d: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let p = field.p;
    let (h, m) = split_tame_wild(d, p);
    let big_d = d
        .checked_mul(field.abs_degree)
        .ok_or_else(|| Error::LimitExceeded("absolute degree overflow".into()))?;
    let pb = BigUint::from(p);
    let mut wild_sum = BigUint::zero();
    for s in 0..=m {
        // (p^{m+s+1} - p^{2s}) / (p - 1), an integer since 2s <= m+s+1.
        let coeff = (pb.pow(m + s + 1) - pb.pow(2 * s)) / BigUint::from(p - 1);
        let cur = pb.pow(pow_exponent(epsilon_exponent(s, big_d, p)?)?);
        let prev = if s == 0 {
            BigUint::zero()
        } else {
            pb.pow(pow_exponent(epsilon_exponent(s - 1, big_d, p)?)?)
        };
        wild_sum += coeff * (cur - prev);
    }
    Ok(sigma_divisor_sum(h) * wild_sum)
}

/// Number of totally ramified extensions of `field` of degree `d`. Reduces to
/// `d` when `p` does not divide `d`.
pub fn count_totally_ramified(field: &LocalField, d: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let p = field.p;
    let (_, m) = split_tame_wild(d, p);
    let big_d = d
        .checked_mul(field.abs_degree)
        .ok_or_else(|| Error::LimitExceeded("absolute degree overflow".into()))?;
    let pb = BigUint::from(p);
    let mut sum = BigUint::zero();
    for s in 0..=m {
        let cur = pb.pow(pow_exponent(epsilon_exponent(s, big_d, p)?)?);
        let prev = if s == 0 {
            BigUint::zero()
        } else {
            pb.pow(pow_exponent(epsilon_exponent(s - 1, big_d, p)?)?)
        };
        sum += pb.pow(s) * (cur - prev);
    }
    Ok(BigUint::from(d) * sum)
}

/// Number of extensions of `field` with ramification index exactly `e` and
/// inertia degree exactly `f`: the totally ramified degree-`e` count over the
/// unramified shift of degree `f`.
pub fn count_with_profile(field: &LocalField, e: u64, f: u64) -> Result<BigUint> {
    let shifted = field.unramified_shift(f)?;
    count_totally_ramified(&shifted, e)
}

/// Upper bound for the number of distinct completions with ramification index
/// `e`: the profile counts summed over the inertia degrees in `f_set`.
pub fn bound_n_e(field: &LocalField, e: u64, f_set: &[u64]) -> Result<BigUint> {
    if f_set.is_empty() {
        return Err(Error::InvalidInput("empty inertia-degree set".into()));
    }
    let mut distinct: Vec<u64> = f_set.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut total = BigUint::zero();
    for &f in &distinct {
        total += count_with_profile(field, e, f)?;
    }
    Ok(total)
}

/// Every profile `(e, f)` with `e * f <= dmax` together with its count,
/// sorted by `(degree, e)`.
pub fn enumerate_profiles(
    field: &LocalField,
    dmax: u64,
) -> Result<Vec<(ExtensionProfile, BigUint)>> {
    enumerate_profiles_with_cap(field, dmax, DEFAULT_PROFILE_DEGREE_CAP)
}

/// As [`enumerate_profiles`] with an explicit degree cap.
pub fn enumerate_profiles_with_cap(
    field: &LocalField,
    dmax: u64,
    cap: u64,
) -> Result<Vec<(ExtensionProfile, BigUint)>> {
    if dmax == 0 {
        return Err(Error::InvalidInput("dmax must be positive".into()));
    }
    if dmax > cap {
        return Err(Error::LimitExceeded(format!(
            "dmax {dmax} exceeds the cap {cap}"
        )));
    }
    let mut out = Vec::new();
    for e in 1..=dmax {
        for f in 1..=dmax / e {
            out.push((ExtensionProfile { e, f }, count_with_profile(field, e, f)?));
        }
    }
    out.sort_by_key(|(pr, _)| (pr.degree(), pr.e));
    Ok(out)
}
