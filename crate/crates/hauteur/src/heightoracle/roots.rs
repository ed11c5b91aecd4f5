//! Certified complex root enclosures for squarefree integer polynomials.
//!
//! A floating-point simultaneous iteration (Aberth-Ehrlich) seeds dyadic
//! fixed-point Newton refinement at doubling precision. Certification is a
//! Weierstrass-correction pass: with approximations `z_1..z_d` and
//! `w_i = p(z_i) / (lead * prod_{j!=i} (z_i - z_j))`, the union of the disks
//! `D(z_i, d * |w_i|)` contains every root, and pairwise disjoint disks
//! contain exactly one root each. The approximations are dyadic, so every
//! certificate quantity is an exact rational; no rounding enters the bounds.

use num::bigint::{BigInt, BigUint};
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{degree, derivative, IntPoly};
use crate::{Error, Result};

/// One isolated root: a floating-point view plus exact modulus bounds.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub approx_re: f64,
    pub approx_im: f64,
    /// Exact lower bound for |root|.
    pub modulus_lo: BigRational,
    /// Exact upper bound for |root|.
    pub modulus_hi: BigRational,
    /// Exact upper bound for the enclosure radius.
    pub radius: BigRational,
}

/// Isolate all complex roots with enclosure radii below `2^-radius_bits`.
pub fn isolate_roots(p: &IntPoly, radius_bits: u32) -> Result<Vec<RootEnclosure>> {
    let d = degree(p);
    if d == 0 {
        return Err(Error::InvalidInput(
            "constant polynomial has no roots".into(),
        ));
    }
    if d == 1 {
        return Ok(vec![linear_root(p)]);
    }

    let coeffs_f64: Vec<f64> = p
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs_f64.iter().any(|c| !c.is_finite()) {
        return Err(Error::LimitExceeded(
            "coefficients too large for the seed stage".into(),
        ));
    }
    let seeds = aberth_f64(&coeffs_f64)
        .ok_or_else(|| Error::Precision("seed iteration did not converge".into()))?;

    let dp = derivative(p);
    let mut scale: u32 = 128;
    let final_scale = radius_bits + 96;
    let mut roots: Vec<(BigInt, BigInt)> = seeds
        .iter()
        .map(|z| (dyadic_of_f64(z.re, scale), dyadic_of_f64(z.im, scale)))
        .collect();

    loop {
        for _ in 0..2 {
            for z in roots.iter_mut() {
                if let Some(next) = newton_step(p, &dp, z, scale) {
                    *z = next;
                }
            }
        }
        if scale >= final_scale {
            match certify(p, &roots, scale, radius_bits) {
                Some(out) => return Ok(out),
                None if scale >= final_scale + 512 => {
                    return Err(Error::Precision(format!(
                        "failed to certify disjoint enclosures of radius 2^-{radius_bits}"
                    )))
                }
                None => {}
            }
        }
        let next = (scale * 2).min(final_scale.max(scale + 64));
        roots = roots
            .into_iter()
            .map(|(re, im)| (re << (next - scale), im << (next - scale)))
            .collect();
        scale = next;
    }
}

fn linear_root(p: &IntPoly) -> RootEnclosure {
    // a1 x + a0 = 0: the root -a0/a1 is exact.
    let root = BigRational::new(-p[0].clone(), p[1].clone());
    let modulus = root.abs();
    let approx = root.to_f64().unwrap_or(0.0);
    RootEnclosure {
        approx_re: approx,
        approx_im: 0.0,
        modulus_lo: modulus.clone(),
        modulus_hi: modulus,
        radius: BigRational::zero(),
    }
}

fn dyadic_of_f64(x: f64, scale: u32) -> BigInt {
    let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    (r.numer() << scale) / r.denom()
}

/// Exact Horner evaluation at the dyadic point `z`; the result sits at scale
/// `degree * scale`.
fn eval_exact(p: &IntPoly, z: &(BigInt, BigInt), scale: u32) -> (BigInt, BigInt, u32) {
    let d = degree(p);
    let mut re = p[d].clone();
    let mut im = BigInt::zero();
    let mut out_scale = 0u32;
    for c in p[..d].iter().rev() {
        let nre = &re * &z.0 - &im * &z.1;
        let nim = &re * &z.1 + &im * &z.0;
        out_scale += scale;
        re = nre + (c << out_scale);
        im = nim;
    }
    (re, im, out_scale)
}

/// One dyadic Newton step `z - p(z)/p'(z)` truncated to `scale` bits; `None`
/// when the derivative vanishes at `z`.
fn newton_step(
    p: &IntPoly,
    dp: &IntPoly,
    z: &(BigInt, BigInt),
    scale: u32,
) -> Option<(BigInt, BigInt)> {
    let (pr, pi, sp) = eval_exact(p, z, scale);
    let (dr, di, sd) = eval_exact(dp, z, scale);
    let den = &dr * &dr + &di * &di;
    if den.is_zero() {
        return None;
    }
    // delta = p/p' at scale `scale`: mantissa = conj(p') * p * 2^{scale - (sp - sd)} / |p'|^2.
    let nre = &pr * &dr + &pi * &di;
    let nim = &pi * &dr - &pr * &di;
    let shift = sp - sd; // = scale for dense polynomials
    let (nre, nim) = if shift >= scale {
        (nre >> (shift - scale), nim >> (shift - scale))
    } else {
        (nre << (scale - shift), nim << (scale - shift))
    };
    let delta_re = nre / &den;
    let delta_im = nim / &den;
    Some((&z.0 - delta_re, &z.1 - delta_im))
}

/// Exact Weierstrass certification at the current precision. Returns `None`
/// if any radius misses the target or two disks may touch.
fn certify(
    p: &IntPoly,
    roots: &[(BigInt, BigInt)],
    scale: u32,
    radius_bits: u32,
) -> Option<Vec<RootEnclosure>> {
    let d = degree(p);
    let lead = p[d].clone();
    let dd_sq = BigUint::from((d * d) as u64);

    // Radii are carried unreduced as (num, den) pairs with
    // r_i^2 = num_i / den_i; constructing rationals here would force gcd
    // reductions of multi-kilobit integers on every certification pass.
    let mut radius_sq: Vec<(BigUint, BigUint)> = Vec::with_capacity(d);
    for (i, z) in roots.iter().enumerate() {
        let (pr, pi, _sp) = eval_exact(p, z, scale);
        // lead * prod_{j != i} (z_i - z_j), exact at scale (d-1) * scale.
        let mut den_re = lead.clone();
        let mut den_im = BigInt::zero();
        for (j, w) in roots.iter().enumerate() {
            if j == i {
                continue;
            }
            let dre = &z.0 - &w.0;
            let dim = &z.1 - &w.1;
            let nre = &den_re * &dre - &den_im * &dim;
            let nim = &den_re * &dim + &den_im * &dre;
            den_re = nre;
            den_im = nim;
        }
        let num_sq = (&pr * &pr + &pi * &pi).magnitude().clone(); // scale 2*d*scale
        let den_sq = (&den_re * &den_re + &den_im * &den_im).magnitude().clone();
        if den_sq.is_zero() {
            return None;
        }
        // r_i^2 = d^2 |w_i|^2 = d^2 num_sq / (den_sq * 4^scale).
        let num = &dd_sq * &num_sq;
        let den = den_sq << (2 * scale as usize);
        // Radius target: r_i^2 <= 4^-radius_bits.
        if &num << (2 * radius_bits as usize) > den {
            return None;
        }
        radius_sq.push((num, den));
    }

    // Disks must be pairwise disjoint: dist^2 > 2 (r_i^2 + r_j^2) suffices,
    // checked by integer cross-multiplication.
    let four_scale = BigUint::one() << (2 * scale as usize);
    for i in 0..d {
        for j in i + 1..d {
            let dre = &roots[i].0 - &roots[j].0;
            let dim = &roots[i].1 - &roots[j].1;
            let dist_num = (&dre * &dre + &dim * &dim).magnitude().clone();
            let (ni, di) = &radius_sq[i];
            let (nj, dj) = &radius_sq[j];
            // dist_num/4^scale > 2 (ni/di + nj/dj)
            let lhs = &dist_num * di * dj;
            let rhs = BigUint::from(2u32) * &four_scale * (ni * dj + nj * di);
            if lhs <= rhs {
                return None;
            }
        }
    }

    let two_scale = BigInt::one() << scale;
    let out = roots
        .iter()
        .zip(&radius_sq)
        .map(|(z, (r_num, r_den))| {
            let radius = dyadic(sqrt_upper_ratio(r_num, r_den, scale), scale);
            // |center|^2 = (re^2 + im^2) / 4^scale: integer sqrt brackets it.
            let center_sq = (&z.0 * &z.0 + &z.1 * &z.1).magnitude().clone();
            let center_lo = dyadic(center_sq.sqrt(), scale);
            let center_hi = dyadic(ceil_sqrt(&center_sq), scale);
            let modulus_lo = (&center_lo - &radius).max(BigRational::zero());
            let modulus_hi = &center_hi + &radius;
            RootEnclosure {
                approx_re: BigRational::new(z.0.clone(), two_scale.clone())
                    .to_f64()
                    .unwrap_or(0.0),
                approx_im: BigRational::new(z.1.clone(), two_scale.clone())
                    .to_f64()
                    .unwrap_or(0.0),
                modulus_lo,
                modulus_hi,
                radius,
            }
        })
        .collect();
    Some(out)
}

fn dyadic(mantissa: BigUint, bits: u32) -> BigRational {
    BigRational::new(BigInt::from(mantissa), BigInt::one() << bits)
}

fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &s * &s < *n {
        s + BigUint::one()
    } else {
        s
    }
}

/// Dyadic upper bound for `sqrt(num/den)`: `ceil(sqrt(ceil(x * 4^bits)))`
/// as a mantissa at the given scale; exact zero stays zero.
fn sqrt_upper_ratio(num: &BigUint, den: &BigUint, bits: u32) -> BigUint {
    let shifted = num << (2 * bits as usize);
    let scaled = (&shifted + den - BigUint::one()) / den;
    ceil_sqrt(&scaled)
}

fn horner_c64(p: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Aberth-Ehrlich simultaneous iteration in f64; good to ~1e-13, which only
/// needs to be close enough for Newton refinement to take over.
fn aberth_f64(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    let cauchy = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);

    for attempt in 0..5 {
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / d as f64
                    + 0.61 * attempt as f64
                    + 0.13;
                let radius = cauchy * (0.35 + 0.5 * (k as f64 + 1.0) / d as f64);
                Complex64::from_polar(radius, angle)
            })
            .collect();
        let mut converged = false;
        for _ in 0..600 {
            let mut max_step = 0.0f64;
            for i in 0..d {
                let pv = horner_c64(coeffs, z[i]);
                let dv = horner_c64(&dcoeffs, z[i]);
                if dv.norm() == 0.0 {
                    z[i] += Complex64::new(1e-8 * (attempt + 1) as f64, 2e-8);
                    max_step = f64::INFINITY;
                    continue;
                }
                let w = pv / dv;
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    if j != i {
                        let diff = z[i] - z[j];
                        if diff.norm() == 0.0 {
                            sum += Complex64::new(1e12, 0.0);
                        } else {
                            sum += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - w * sum;
                let step = if denom.norm() < 1e-280 { w } else { w / denom };
                z[i] -= step;
                let rel = step.norm() / (1.0 + z[i].norm());
                max_step = max_step.max(rel);
            }
            if max_step < 1e-14 {
                converged = true;
                break;
            }
        }
        if converged {
            return Some(z);
        }
    }
    None
}
