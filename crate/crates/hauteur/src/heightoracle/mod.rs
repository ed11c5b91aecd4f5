//! Numerical Weil-height evaluation with certified error bounds.
//!
//! An [`AlgebraicNumber`] is given by an integer minimal polynomial
//! (primitive, squarefree, no rational root above degree 1; irreducibility
//! beyond that screen is asserted by the caller). The height is evaluated
//! through the Mahler measure of the polynomial,
//! `h = (ln|lead| + sum_i ln max(1, |root_i|)) / degree`, with every root
//! modulus enclosed by the certified isolator in [`roots`].

pub mod poly;
pub mod roots;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{self, RealInterval};
use crate::{Error, Result};
use poly::IntPoly;
pub use roots::RootEnclosure;

/// Default oracle precision in bits when none is requested.
pub const DEFAULT_ORACLE_BITS: u32 = 128;

/// An algebraic number represented by an integer polynomial, stored
/// primitive with a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    coeffs: IntPoly,
}

impl AlgebraicNumber {
    /// Normalize and screen a coefficient vector (ascending powers).
    ///
    /// The content is divided out and the sign fixed, neither of which moves
    /// the roots. The screen rejects a rational root in degree >= 2 and any
    /// repeated factor; full irreducibility is the caller's assertion.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = poly::trim(coeffs);
        if poly::is_zero_poly(&coeffs) {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        if poly::degree(&coeffs) == 0 {
            return Err(Error::InvalidInput("constant polynomial".into()));
        }
        let content = poly::content(&coeffs);
        if !content.is_one() {
            let c = BigInt::from(content);
            for x in coeffs.iter_mut() {
                *x = &*x / &c;
            }
        }
        if coeffs.last().unwrap().is_negative() {
            for x in coeffs.iter_mut() {
                *x = -x.clone();
            }
        }
        let number = AlgebraicNumber { coeffs };
        number.screen()?;
        Ok(number)
    }

    /// Parse from the ASCII form accepted by [`poly::parse_polynomial`].
    pub fn parse(input: &str) -> Result<Self> {
        Self::new(poly::parse_polynomial(input)?)
    }

    fn screen(&self) -> Result<()> {
        if self.degree() >= 2 && poly::has_rational_root(&self.coeffs)? {
            return Err(Error::InvalidInput(
                "polynomial has a rational root, so it is not irreducible".into(),
            ));
        }
        if !poly::is_squarefree(&self.coeffs) {
            return Err(Error::InvalidInput(
                "polynomial has a repeated factor".into(),
            ));
        }
        Ok(())
    }

    /// Quiet version of the constructor screen, for enumeration.
    fn screens_clean(coeffs: &IntPoly) -> bool {
        if poly::degree(coeffs) >= 2 && poly::has_rational_root(coeffs).unwrap_or(true) {
            return false;
        }
        poly::is_squarefree(coeffs)
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }
}

impl std::fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", poly::format_polynomial(&self.coeffs))
    }
}

/// A height value together with a certified absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedHeight {
    pub value: f64,
    pub error_bound: f64,
}

/// Certified enclosures of all roots of the minimal polynomial.
pub fn certified_roots(a: &AlgebraicNumber, precision_bits: u32) -> Result<Vec<RootEnclosure>> {
    roots::isolate_roots(&a.coeffs, precision_bits + 24)
}

/// Height enclosure assembled from modulus bounds: callers that transform
/// the roots (e.g. powering them) reuse this to recompute the sum.
pub fn height_from_moduli(
    lead: &BigUint,
    moduli: &[(BigRational, BigRational)],
    degree: u64,
    scale: u32,
) -> Result<RealInterval> {
    let mut acc = bigfloat::ln_uint(lead, scale);
    let one = BigRational::one();
    for (lo, hi) in moduli {
        if *hi <= one {
            continue; // ln max(1, |root|) = 0 certainly
        }
        let upper = bigfloat::ln_rational(hi, scale)?;
        if *lo >= one {
            let lower = bigfloat::ln_rational(lo, scale)?;
            acc = acc.add(&RealInterval::span(
                lower.lo_mantissa(),
                upper.hi_mantissa(),
                scale,
            ));
        } else {
            // The enclosure straddles the unit circle.
            acc = acc.add(&RealInterval::span(
                BigInt::zero(),
                upper.hi_mantissa(),
                scale,
            ));
        }
    }
    let degree_iv = RealInterval::from_u64(degree, scale);
    let h = acc.div_pos(&degree_iv)?;
    // Heights are non-negative; the enclosure may be clamped from below.
    Ok(h.clamp_lo_zero())
}

/// The absolute logarithmic Weil height of the number, with certified
/// absolute error at most `2^-(precision_bits - 8)`.
pub fn weil_height(a: &AlgebraicNumber, precision_bits: u32) -> Result<CertifiedHeight> {
    let scale = precision_bits + 32;
    let roots = certified_roots(a, precision_bits)?;
    let moduli: Vec<(BigRational, BigRational)> = roots
        .into_iter()
        .map(|r| (r.modulus_lo, r.modulus_hi))
        .collect();
    let h = height_from_moduli(a.leading().magnitude(), &moduli, a.degree() as u64, scale)?;
    let value = h.to_f64();
    let half_width = (h.width() / BigRational::from_integer(2.into()))
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let cap = 2f64.powi(-(precision_bits as i32) + 8);
    if !half_width.is_finite() || half_width > cap {
        return Err(Error::Precision(format!(
            "height enclosure width {half_width:.3e} exceeds the requested 2^-{}",
            precision_bits - 8
        )));
    }
    // The f64 collapse of the midpoint adds at most one ulp on top of the
    // certified enclosure.
    let error_bound = half_width + value.abs() * f64::EPSILON;
    Ok(CertifiedHeight {
        value: value.max(0.0),
        error_bound,
    })
}

/// True iff the polynomial is cyclotomic, i.e. the number is a root of
/// unity. A certified unit-circle screen rejects fast; acceptance is by
/// exact comparison against the cyclotomic polynomials of equal degree.
pub fn is_root_of_unity(a: &AlgebraicNumber) -> Result<bool> {
    if !a.leading().is_one() || !a.coeffs[0].magnitude().is_one() {
        return Ok(false);
    }
    let d = a.degree() as u64;
    let one = BigRational::one();
    let roots = certified_roots(a, 48)?;
    if roots
        .iter()
        .any(|r| r.modulus_hi < one || r.modulus_lo > one)
    {
        return Ok(false);
    }
    // phi(n) >= sqrt(n/2), so phi(n) = d forces n <= 2 d^2.
    for n in 1..=(2 * d * d + 1) {
        if poly::euler_phi(n) == d && poly::cyclotomic(n) == a.coeffs {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All primitive screened polynomials of degree up to `max_degree` whose
/// height is at most `height_cap`, in lexicographic coefficient order.
///
/// The coefficient box comes from the Mahler bound
/// `|a_i| <= C(d, floor(d/2)) * e^{d * cap}`. Deduplication is by
/// polynomial: reciprocal pairs such as `x - 2` and `2x - 1` both appear.
pub fn northcott_census(
    max_degree: u32,
    height_cap: f64,
    precision_bits: u32,
) -> Result<Vec<AlgebraicNumber>> {
    if max_degree == 0 || max_degree > 4 {
        return Err(Error::InvalidInput(
            "census degree must be between 1 and 4".into(),
        ));
    }
    if height_cap <= 0.0 || height_cap.is_nan() || height_cap > 3f64.ln() + 1e-9 {
        return Err(Error::InvalidInput(
            "census height cap must lie in (0, ln 3]".into(),
        ));
    }
    let mut candidates: u128 = 0;
    let mut boxes = Vec::new();
    for d in 1..=max_degree {
        let binom = binomial(d as u64, (d / 2) as u64);
        let bound =
            (binom as f64 * (d as f64 * height_cap).exp() * (1.0 + 1e-12) + 1e-9).floor() as i64;
        candidates += (2 * bound as u128 + 1).pow(d) * bound as u128;
        boxes.push(bound);
    }
    if candidates > 5_000_000 {
        return Err(Error::LimitExceeded(format!(
            "census would enumerate about {candidates} candidates"
        )));
    }
    let mut out = Vec::new();
    for d in 1..=max_degree as usize {
        let bound = boxes[d - 1];
        let mut coeffs = vec![-bound; d]; // a_0 .. a_{d-1}; a_d handled below
        'outer: loop {
            for lead in 1..=bound {
                let mut poly_vec: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
                poly_vec.push(BigInt::from(lead));
                if poly_vec[0].is_zero() {
                    continue; // zero is not in the multiplicative group
                }
                if !poly::content(&poly_vec).is_one() {
                    continue;
                }
                if !AlgebraicNumber::screens_clean(&poly_vec) {
                    continue;
                }
                let number = AlgebraicNumber { coeffs: poly_vec };
                let h = weil_height(&number, precision_bits)?;
                if h.value <= height_cap {
                    out.push(number);
                }
            }
            // Advance the odometer over a_0 .. a_{d-1}.
            for slot in (0..d).rev() {
                if coeffs[slot] < bound {
                    coeffs[slot] += 1;
                    continue 'outer;
                }
                coeffs[slot] = -bound;
            }
            break;
        }
    }
    out.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn number(s: &str) -> AlgebraicNumber {
        AlgebraicNumber::parse(s).unwrap()
    }

    #[test]
    fn rational_point_heights() {
        let h = weil_height(&number("x - 2"), 128).unwrap();
        assert!((h.value - 2f64.ln()).abs() < 1e-15);
        let h = weil_height(&number("2x - 1"), 128).unwrap();
        assert!((h.value - 2f64.ln()).abs() < 1e-15);
        let h = weil_height(&number("x - 1"), 128).unwrap();
        assert_eq!(h.value, 0.0);
    }

    #[test]
    fn golden_ratio_height() {
        // h = ln((1 + sqrt 5)/2) / 2 = 0.24060591252980172...
        let h = weil_height(&number("x^2 - x - 1"), 128).unwrap();
        assert!((h.value - 0.2406059125298017).abs() < 1e-12);
        assert!(h.error_bound < 1e-15);
    }

    #[test]
    fn cyclotomic_heights_vanish() {
        for s in ["x + 1", "x^2 + x + 1", "x^2 + 1", "x^4 - x^2 + 1"] {
            let h = weil_height(&number(s), 128).unwrap();
            assert!(h.value <= 1e-13, "{s}: {}", h.value);
        }
    }

    #[test]
    fn lehmer_height() {
        let lehmer = number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
        let h = weil_height(&lehmer, 256).unwrap();
        assert!(
            (h.value - 0.016235761200773814).abs() < 1e-13,
            "{}",
            h.value
        );
        let h2 = weil_height(&lehmer, 512).unwrap();
        assert!((h.value - h2.value).abs() < 1e-6);
    }

    #[test]
    fn heights_are_nonnegative() {
        for s in [
            "x^2 + x + 1",
            "x^2 - x - 1",
            "3x^2 - x - 1",
            "x^3 - 2",
            "5x^3 - 1",
        ] {
            let h = weil_height(&number(s), 96).unwrap();
            assert!(h.value >= 0.0, "{s}");
        }
    }

    #[test]
    fn root_of_unity_detection() {
        assert!(is_root_of_unity(&number("x^2 + x + 1")).unwrap());
        assert!(is_root_of_unity(&number("x^4 - x^2 + 1")).unwrap());
        assert!(is_root_of_unity(&number("x - 1")).unwrap());
        assert!(is_root_of_unity(&number("x + 1")).unwrap());
        assert!(!is_root_of_unity(&number("x^2 - x - 1")).unwrap());
        assert!(!is_root_of_unity(&number("x - 2")).unwrap());
        // Salem-like: all but two roots on the circle, still not cyclotomic.
        assert!(!is_root_of_unity(&number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")).unwrap());
        // Monic, unit constant term, roots off the circle.
        assert!(!is_root_of_unity(&number("x^2 - 3x + 1")).unwrap());
    }

    #[test]
    fn height_zero_iff_root_of_unity() {
        for s in [
            "x^2 + x + 1",
            "x^4 - x^2 + 1",
            "x^2 - x - 1",
            "x^3 - 2",
            "x^2 - 3x + 1",
            "x + 2",
        ] {
            let a = number(s);
            let zero_height = weil_height(&a, 128).unwrap().value <= 1e-12;
            let cyclo = is_root_of_unity(&a).unwrap();
            assert_eq!(zero_height, cyclo, "{s}");
        }
    }

    #[test]
    fn power_rule() {
        // Raising every root to the k-th power multiplies the height by k.
        for s in ["x^2 - x - 1", "x^3 - 2", "x^2 - 3x + 1"] {
            let a = number(s);
            let h = weil_height(&a, 160).unwrap();
            let roots = certified_roots(&a, 160).unwrap();
            for k in [2u32, 3, 5] {
                let powered: Vec<(BigRational, BigRational)> = roots
                    .iter()
                    .map(|r| {
                        (
                            num::traits::Pow::pow(r.modulus_lo.clone(), k),
                            num::traits::Pow::pow(r.modulus_hi.clone(), k),
                        )
                    })
                    .collect();
                let lead_pow = num::traits::Pow::pow(a.leading().magnitude().clone(), k);
                let hk = height_from_moduli(&lead_pow, &powered, a.degree() as u64, 192)
                    .unwrap()
                    .to_f64();
                assert!(
                    (hk - k as f64 * h.value).abs() < 1e-9,
                    "{s} k={k}: {hk} vs {}",
                    k as f64 * h.value
                );
            }
        }
    }

    #[test]
    fn height_is_symmetric_in_the_roots() {
        let a = number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
        let roots = certified_roots(&a, 128).unwrap();
        let mut moduli: Vec<(BigRational, BigRational)> = roots
            .into_iter()
            .map(|r| (r.modulus_lo, r.modulus_hi))
            .collect();
        let forward = height_from_moduli(&BigUint::one(), &moduli, 10, 160).unwrap();
        moduli.reverse();
        let backward = height_from_moduli(&BigUint::one(), &moduli, 10, 160).unwrap();
        assert_eq!(forward.lo_rational(), backward.lo_rational());
        assert_eq!(forward.hi_rational(), backward.hi_rational());
    }

    #[test]
    fn census_small_caps() {
        // Cap just above ln 2: contains the six degree-one points of height
        // <= ln 2 and nothing of larger height.
        let census = northcott_census(1, 2f64.ln() + 1e-9, 96).unwrap();
        let shown: Vec<String> = census.iter().map(|a| a.to_string()).collect();
        for expected in ["x - 2", "x + 2", "2x - 1", "2x + 1", "x - 1", "x + 1"] {
            assert!(shown.iter().any(|s| s == expected), "missing {expected}");
        }
        assert_eq!(shown.len(), 6);

        // Tiny cap: exactly the degree-one roots of unity.
        let census = northcott_census(1, 0.01, 96).unwrap();
        let shown: Vec<String> = census.iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, vec!["x - 1", "x + 1"]);
    }

    #[test]
    fn census_is_stable_across_precision() {
        let a = northcott_census(2, 0.35, 96).unwrap();
        let b = northcott_census(2, 0.35, 192).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }

    #[test]
    fn constructor_normalization_and_screen() {
        // Content and sign are normalized away.
        let a = AlgebraicNumber::new(vec![4.into(), (-2).into()]).unwrap();
        assert_eq!(a.to_string(), "x - 2");
        // Reducible inputs with a rational root are rejected.
        assert!(AlgebraicNumber::parse("x^2 - 1").is_err());
        assert!(AlgebraicNumber::parse("x^2 - 4").is_err());
        // Repeated factors are rejected.
        assert!(AlgebraicNumber::new(vec![1.into(), 2.into(), 1.into()]).is_err());
        // Constants are rejected.
        assert!(AlgebraicNumber::parse("7").is_err());
    }
}
