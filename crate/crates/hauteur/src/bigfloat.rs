//! Fixed-point interval reals with certified natural logarithms.
//!
//! A [`RealInterval`] stores two `BigInt` mantissas `lo <= hi` at a common
//! binary scale; it encloses every real in `[lo/2^scale, hi/2^scale]`. All
//! constructors and operations keep the enclosure property, so any value read
//! out of this module carries a proven error bound. Logarithms are computed
//! with the atanh series after range reduction to `[1, 2)`; only floor
//! divisions are used and the accumulated ulp loss is added to the upper
//! endpoint.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Guard bits added on top of the requested scale while summing series.
const GUARD_BITS: u32 = 64;

/// An enclosure `[lo, hi] / 2^scale` of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

impl RealInterval {
    /// Degenerate interval holding an exact dyadic value.
    pub fn exact(mantissa: BigInt, scale: u32) -> Self {
        RealInterval {
            lo: mantissa.clone(),
            hi: mantissa,
            scale,
        }
    }

    /// The exact integer `n` at the given scale.
    pub fn from_u64(n: u64, scale: u32) -> Self {
        Self::exact(BigInt::from(n) << scale, scale)
    }

    /// Zero at the given scale.
    pub fn zero(scale: u32) -> Self {
        Self::exact(BigInt::zero(), scale)
    }

    /// Interval from explicit endpoints `[lo, hi] / 2^scale`.
    pub fn span(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        assert!(lo <= hi);
        Self::new(lo, hi, scale)
    }

    fn new(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        debug_assert!(lo <= hi);
        RealInterval { lo, hi, scale }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Lower endpoint mantissa at this scale.
    pub fn lo_mantissa(&self) -> BigInt {
        self.lo.clone()
    }

    /// Upper endpoint mantissa at this scale.
    pub fn hi_mantissa(&self) -> BigInt {
        self.hi.clone()
    }

    /// Clamp the enclosure from below to zero (for quantities known to be
    /// non-negative).
    pub fn clamp_lo_zero(&self) -> Self {
        let lo = self.lo.clone().max(BigInt::zero());
        let hi = self.hi.clone().max(lo.clone());
        Self::new(lo, hi, self.scale)
    }

    /// Lower endpoint as an exact rational.
    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.scale)
    }

    /// Upper endpoint as an exact rational.
    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.scale)
    }

    /// Width of the enclosure as an exact rational.
    pub fn width(&self) -> BigRational {
        self.hi_rational() - self.lo_rational()
    }

    /// Midpoint, as an exact rational.
    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.scale + 1))
    }

    /// Midpoint collapsed to `f64` (saturating on overflow).
    pub fn to_f64(&self) -> f64 {
        self.mid_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Change the scale, widening outward as needed.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            let shift = scale - self.scale;
            Self::new(&self.lo << shift, &self.hi << shift, scale)
        } else {
            let shift = self.scale - scale;
            Self::new(shr_floor(&self.lo, shift), shr_ceil(&self.hi, shift), scale)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = align(self, other);
        Self::new(a.lo + b.lo, a.hi + b.hi, a.scale)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone(), self.scale)
    }

    /// Multiply by an exact non-negative integer.
    pub fn mul_uint(&self, n: &BigUint) -> Self {
        let n = BigInt::from(n.clone());
        Self::new(&self.lo * &n, &self.hi * &n, self.scale)
    }

    /// Multiply by an exact rational, with outward rounding.
    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let num = r.numer();
        let den = r.denom();
        debug_assert!(den.is_positive());
        if r.is_negative() {
            return self.neg().mul_rational(&-r.clone());
        }
        let lo = div_floor_bigint(&(&self.lo * num), den);
        let hi = div_ceil_bigint(&(&self.hi * num), den);
        Self::new(lo, hi, self.scale)
    }

    /// Divide by a strictly positive interval, with outward rounding.
    pub fn div_pos(&self, other: &Self) -> Result<Self> {
        if !other.lo.is_positive() {
            return Err(Error::Precision(
                "division by an interval not bounded away from zero".into(),
            ));
        }
        let scale = self.scale.max(other.scale);
        let cands = [
            self.lo_rational() / other.lo_rational(),
            self.lo_rational() / other.hi_rational(),
            self.hi_rational() / other.lo_rational(),
            self.hi_rational() / other.hi_rational(),
        ];
        let lo = cands.iter().min().unwrap();
        let hi = cands.iter().max().unwrap();
        Ok(Self::new(
            rational_floor_at(lo, scale),
            rational_ceil_at(hi, scale),
            scale,
        ))
    }

    /// Certified strict comparison. `Some(true)` means every value of `self`
    /// exceeds every value of `other`; `Some(false)` means `self <= other`
    /// pointwise is guaranteed; `None` means the enclosures overlap.
    pub fn strictly_greater(&self, other: &Self) -> Option<bool> {
        let (a, b) = align(self, other);
        if a.lo > b.hi {
            Some(true)
        } else if a.hi <= b.lo {
            Some(false)
        } else {
            None
        }
    }

    /// True when the whole enclosure lies strictly above the given rational.
    pub fn above(&self, r: &BigRational) -> bool {
        self.lo_rational() > *r
    }

    /// True when the whole enclosure lies strictly below the given rational.
    pub fn below(&self, r: &BigRational) -> bool {
        self.hi_rational() < *r
    }

    /// Midpoint rendered in decimal with `sig` significant digits.
    ///
    /// Values with decimal exponent in `[-4, 14]` are rendered plainly,
    /// anything larger in scientific notation `m.mmm...e+E`. Rendering is
    /// exact integer arithmetic on the midpoint, so output is deterministic.
    pub fn decimal(&self, sig: u32) -> String {
        decimal_of_rational(&self.mid_rational(), sig)
    }
}

fn align(a: &RealInterval, b: &RealInterval) -> (RealInterval, RealInterval) {
    let scale = a.scale.max(b.scale);
    (a.rescale(scale), b.rescale(scale))
}

fn shr_floor(n: &BigInt, shift: u32) -> BigInt {
    // BigInt >> is an arithmetic shift: rounds toward negative infinity.
    n >> shift
}

fn shr_ceil(n: &BigInt, shift: u32) -> BigInt {
    -((-n) >> shift)
}

fn div_floor_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    num::Integer::div_floor(a, b)
}

fn div_ceil_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    -num::Integer::div_floor(&-a.clone(), b)
}

fn rational_floor_at(r: &BigRational, scale: u32) -> BigInt {
    div_floor_bigint(&(r.numer() << scale), r.denom())
}

fn rational_ceil_at(r: &BigRational, scale: u32) -> BigInt {
    div_ceil_bigint(&(r.numer() << scale), r.denom())
}

/// Floor of atanh(t/2^s) in ulps, together with a certified bound on the
/// number of ulps by which it may undershoot. Requires `0 <= t <= 0.36 * 2^s`.
fn atanh_floor(t: &BigInt, s: u32) -> (BigInt, u64) {
    debug_assert!(!t.is_negative());
    let t2 = (t * t) >> s;
    let mut pow = t.clone();
    let mut sum = t.clone();
    let mut iters: u64 = 0;
    let mut odd = BigInt::from(3u32);
    while !pow.is_zero() {
        pow = (&pow * &t2) >> s;
        if pow.is_zero() {
            break;
        }
        sum += &pow / &odd;
        odd += 2;
        iters += 1;
        // t^2 < 1/8 * 2^s keeps this loop near s/3 rounds; bail out hard if not.
        assert!(iters < 64 + 2 * s as u64, "atanh series failed to contract");
    }
    // Each round loses at most 3 ulps (pow and term floors plus carryover);
    // the dropped tail is below 3 ulps once pow reaches zero.
    (sum, 3 * iters + 16)
}

/// Enclosure of `ln(m/2^s)` for a mantissa `2^s <= m < 2^{s+1}` known to
/// undershoot the true value by at most `in_err` ulps.
fn ln_mantissa(m: &BigInt, s: u32, in_err: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << s;
    let t = ((m - &one) << s) / (m + &one);
    let (sum, err) = atanh_floor(&t, s);
    let lo = &sum << 1;
    let hi = (&sum + BigInt::from(2 * (err + in_err + 2))) << 1;
    (lo, hi)
}

/// Certified enclosure of `ln 2`.
pub fn ln2(scale: u32) -> RealInterval {
    let s = scale + GUARD_BITS;
    // ln 2 = 2 atanh(1/3)
    let t = (BigInt::one() << s) / BigInt::from(3u32);
    let (sum, err) = atanh_floor(&t, s);
    let lo = &sum << 1;
    let hi = (&sum + BigInt::from(2 * (err + 2))) << 1;
    RealInterval::new(lo, hi, s).rescale(scale)
}

/// Certified enclosure of `ln n` for `n >= 1`.
pub fn ln_uint(n: &BigUint, scale: u32) -> RealInterval {
    assert!(!n.is_zero(), "ln of zero");
    if n.is_one() {
        return RealInterval::zero(scale);
    }
    let s = scale + GUARD_BITS;
    let k = (n.bits() - 1) as u32;
    let (m, in_err) = if s >= k {
        (BigInt::from(n.clone()) << (s - k), 0)
    } else {
        (BigInt::from(n >> (k - s) as u64), 1)
    };
    let (mlo, mhi) = ln_mantissa(&m, s, in_err);
    let l2 = ln2(scale).rescale(s).mul_uint(&BigUint::from(k));
    RealInterval::new(mlo + l2.lo, mhi + l2.hi, s).rescale(scale)
}

/// Certified enclosure of `ln 10`.
pub fn ln10(scale: u32) -> RealInterval {
    ln_uint(&BigUint::from(10u32), scale)
}

/// Certified enclosure of `ln r` for a strictly positive rational.
pub fn ln_rational(r: &BigRational, scale: u32) -> Result<RealInterval> {
    if !r.is_positive() {
        return Err(Error::Domain("logarithm of a non-positive value".into()));
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    Ok(ln_uint(num, scale).sub(&ln_uint(den, scale)))
}

/// Enclosure of `ln x` over a strictly positive interval `x`.
pub fn ln_interval(x: &RealInterval, scale: u32) -> Result<RealInterval> {
    let lo = x.lo_rational();
    let hi = x.hi_rational();
    if !lo.is_positive() {
        return Err(Error::Domain(
            "logarithm of an interval reaching zero".into(),
        ));
    }
    let a = ln_rational(&lo, scale)?;
    let b = ln_rational(&hi, scale)?;
    Ok(RealInterval::new(a.lo, b.hi, scale))
}

fn decimal_of_rational(v: &BigRational, sig: u32) -> String {
    assert!(sig >= 1);
    if v.is_zero() {
        return "0".into();
    }
    let neg = v.is_negative();
    let num = v.numer().magnitude().clone();
    let den = v.denom().magnitude().clone();
    // Decimal exponent e with 10^e <= |v| < 10^{e+1}.
    let mut e = ((num.bits() as i64 - den.bits() as i64) as f64 * 2f64.log10()).floor() as i64;
    loop {
        // |v| >= 10^e  <=>  num * 10^{-e} >= den  (shift to whichever side is positive)
        let ge = if e >= 0 {
            num.clone() >= &den * BigUint::from(10u32).pow(e as u32)
        } else {
            &num * BigUint::from(10u32).pow((-e) as u32) >= den
        };
        if !ge {
            e -= 1;
            continue;
        }
        let lt_next = if e + 1 >= 0 {
            num.clone() < &den * BigUint::from(10u32).pow((e + 1) as u32)
        } else {
            &num * BigUint::from(10u32).pow((-(e + 1)) as u32) < den
        };
        if !lt_next {
            e += 1;
            continue;
        }
        break;
    }
    // digits = round(|v| * 10^{sig-1-e}), a sig-digit integer.
    let shift = sig as i64 - 1 - e;
    let (n, d) = if shift >= 0 {
        (&num * BigUint::from(10u32).pow(shift as u32), den.clone())
    } else {
        (
            num.clone(),
            &den * BigUint::from(10u32).pow((-shift) as u32),
        )
    };
    let mut digits = (&n * BigUint::from(2u32) + &d) / (&d * BigUint::from(2u32));
    if digits >= BigUint::from(10u32).pow(sig) {
        digits = BigUint::from(10u32).pow(sig - 1);
        e += 1;
    }
    let ds = digits.to_string();
    let sign = if neg { "-" } else { "" };
    if (-4..=14).contains(&e) {
        if e >= ds.len() as i64 - 1 {
            // Integer-like: pad with zeros.
            let zeros = e as usize + 1 - ds.len();
            format!("{sign}{}{}", ds, "0".repeat(zeros))
        } else if e >= 0 {
            let (int, frac) = ds.split_at(e as usize + 1);
            format!("{sign}{int}.{frac}")
        } else {
            format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), ds)
        }
    } else {
        let (head, tail) = ds.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigUint;

    fn approx(iv: &RealInterval) -> f64 {
        iv.to_f64()
    }

    #[test]
    fn ln2_matches_reference() {
        // ln 2 = 0.69314718055994530941723212145817656807...
        let iv = ln2(192);
        let reference = std::f64::consts::LN_2;
        assert!((approx(&iv) - reference).abs() < 1e-15);
        assert!(iv.width() < BigRational::new(1.into(), BigInt::one() << 150));
        // The enclosure sits inside the 50-digit bracket
        // 0.69314718055994530941723212145817656807550013436025 <= ln 2 <= ...26.
        let den = BigInt::from(10u8).pow(50u32);
        let lo_ref: BigInt = "69314718055994530941723212145817656807550013436025"
            .parse()
            .unwrap();
        let hi_ref = &lo_ref + BigInt::one();
        assert!(iv.lo_rational() >= BigRational::new(lo_ref, den.clone()));
        assert!(iv.hi_rational() <= BigRational::new(hi_ref, den));
    }

    #[test]
    fn ln_small_integers() {
        for (n, expect) in [
            (2u64, std::f64::consts::LN_2),
            (3, 1.0986122886681098),
            (5, 1.6094379124341003),
            (10, std::f64::consts::LN_10),
            (1, 0.0),
        ] {
            let iv = ln_uint(&BigUint::from(n), 128);
            assert!((approx(&iv) - expect).abs() < 1e-14, "ln {n}");
        }
    }

    #[test]
    fn ln_huge_integer() {
        // ln(3^1000) = 1000 ln 3
        let n = BigUint::from(3u32).pow(1000u32);
        let iv = ln_uint(&n, 128);
        assert!((approx(&iv) - 1000.0 * 1.0986122886681098).abs() < 1e-10);
    }

    #[test]
    fn ln_rational_signs() {
        let r = BigRational::new(BigInt::from(5), BigInt::from(4));
        let iv = ln_rational(&r, 160).unwrap();
        assert!((approx(&iv) - 0.22314355131420976).abs() < 1e-15);
        let small = BigRational::new(BigInt::from(1), BigInt::from(3));
        let iv = ln_rational(&small, 160).unwrap();
        assert!(approx(&iv) < 0.0);
        assert!(ln_rational(&BigRational::zero(), 64).is_err());
    }

    #[test]
    fn interval_ordering_decisions() {
        let two = RealInterval::from_u64(2, 64);
        let three = RealInterval::from_u64(3, 64);
        assert_eq!(three.strictly_greater(&two), Some(true));
        assert_eq!(two.strictly_greater(&three), Some(false));
        // Touching endpoints still decide strict >; genuine overlap does not.
        assert_eq!(two.strictly_greater(&two), Some(false));
        let wide = RealInterval::exact(BigInt::from(5), 1); // [2.5, 2.5]
        let overlap = wide
            .add(&RealInterval::exact(BigInt::from(1), 0).neg())
            .add(&RealInterval::from_u64(0, 1));
        let span = RealInterval {
            lo: BigInt::from(3),
            hi: BigInt::from(7),
            scale: 1,
        };
        assert_eq!(span.strictly_greater(&wide), None);
        let _ = overlap;
    }

    #[test]
    fn decimal_rendering() {
        let iv = ln2(200);
        assert_eq!(iv.decimal(6), "0.693147");
        assert_eq!(iv.decimal(15), "0.693147180559945");
        let neg = iv.neg().mul_uint(&BigUint::from(100000u32));
        assert_eq!(neg.decimal(6), "-69314.7");
        let tiny = RealInterval::exact(BigInt::from(1), 64);
        // 2^-64 = 5.42101086242752e-20
        assert_eq!(tiny.decimal(6), "5.42101e-20");
        let big = RealInterval::from_u64(7, 8).mul_uint(&BigUint::from(10u64).pow(30));
        assert_eq!(big.decimal(3), "7.00e30");
        assert_eq!(RealInterval::zero(10).decimal(6), "0");
        assert_eq!(RealInterval::from_u64(1250, 16).decimal(3), "1250");
    }

    #[test]
    fn widths_shrink_with_scale() {
        let coarse = ln_uint(&BigUint::from(97u32), 64);
        let fine = ln_uint(&BigUint::from(97u32), 256);
        assert!(fine.width() < coarse.width());
        // The fine enclosure must sit inside the coarse one.
        assert!(coarse.lo_rational() <= fine.lo_rational());
        assert!(fine.hi_rational() <= coarse.hi_rational());
    }
}
