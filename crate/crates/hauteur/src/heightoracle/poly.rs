//! Integer polynomial helpers for the height oracle: normalization, exact
//! division, a primitive-remainder-sequence gcd (for squarefreeness), the
//! cyclotomic polynomial table and a small ASCII parser.
//!
//! Polynomials are dense coefficient vectors in ascending degree order with a
//! nonzero leading coefficient.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::{Error, Result};

pub type IntPoly = Vec<BigInt>;

pub fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &IntPoly) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

pub fn content(p: &IntPoly) -> BigUint {
    let mut g = BigUint::zero();
    for c in p {
        g = g.gcd(c.magnitude());
    }
    g
}

pub fn derivative(p: &IntPoly) -> IntPoly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigInt::from(i));
    }
    trim(out)
}

pub fn is_zero_poly(p: &IntPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic divisor; errors if the remainder is nonzero.
pub fn div_exact_monic(num: &IntPoly, den: &IntPoly) -> Result<IntPoly> {
    assert!(
        den.last().is_some_and(|c| c.is_one()),
        "divisor must be monic"
    );
    let mut rem = num.clone();
    if degree(&rem) < degree(den) {
        return Err(Error::InvalidInput("inexact polynomial division".into()));
    }
    let mut quot = vec![BigInt::zero(); degree(&rem) - degree(den) + 1];
    for shift in (0..quot.len()).rev() {
        let lead = rem[shift + degree(den)].clone();
        if lead.is_zero() {
            continue;
        }
        quot[shift] = lead.clone();
        for (j, c) in den.iter().enumerate() {
            rem[shift + j] -= &lead * c;
        }
    }
    if !is_zero_poly(&rem) {
        return Err(Error::InvalidInput("inexact polynomial division".into()));
    }
    Ok(trim(quot))
}

fn primitive_part(p: IntPoly) -> IntPoly {
    let c = content(&p);
    if c.is_zero() || c.is_one() {
        return p;
    }
    let c = BigInt::from(c);
    p.into_iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (b nonzero). A constant divisor leaves
/// remainder zero.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = degree(b);
    if db == 0 {
        return vec![BigInt::zero()];
    }
    let mut rem = a.clone();
    let lead_b = b.last().unwrap().clone();
    while !is_zero_poly(&rem) && degree(&rem) >= db {
        let dr = degree(&rem);
        let lead_r = rem.last().unwrap().clone();
        // rem <- lead_b * rem - lead_r * x^{dr-db} * b; the degree-dr terms
        // cancel exactly.
        for c in rem.iter_mut() {
            *c *= &lead_b;
        }
        for (j, c) in b.iter().enumerate() {
            rem[dr - db + j] -= &lead_r * c;
        }
        debug_assert!(rem[dr].is_zero());
        rem = trim(rem);
    }
    rem
}

/// Primitive gcd of two nonzero integer polynomials.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut x = primitive_part(trim(a.clone()));
    let mut y = primitive_part(trim(b.clone()));
    if is_zero_poly(&x) {
        return y;
    }
    if is_zero_poly(&y) {
        return x;
    }
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    while !is_zero_poly(&y) {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive_part(trim(r));
        if !is_zero_poly(&y) && degree(&y) >= degree(&x) {
            unreachable!("pseudo-remainder sequence failed to descend");
        }
    }
    // Normalize the sign of the leading coefficient.
    if x.last().is_some_and(|c| c.is_negative()) {
        for c in x.iter_mut() {
            *c = -c.clone();
        }
    }
    x
}

pub fn is_squarefree(p: &IntPoly) -> bool {
    if degree(p) <= 1 {
        return true;
    }
    degree(&poly_gcd(p, &derivative(p))) == 0
}

/// True when the polynomial has a rational root, decided exactly from the
/// divisors of the constant and leading coefficients.
pub fn has_rational_root(p: &IntPoly) -> Result<bool> {
    let d = degree(p);
    if p[0].is_zero() {
        return Ok(true); // root 0
    }
    let const_divs = divisors(p[0].magnitude())?;
    let lead_divs = divisors(p[d].magnitude())?;
    for r in &const_divs {
        for s in &lead_divs {
            if !r.gcd(s).is_one() {
                continue;
            }
            for sign in [1i64, -1] {
                // s^d p(r/s) = sum a_i r^i s^{d-i}, exactly zero iff root.
                let mut acc = BigInt::zero();
                let rb = BigInt::from(r.clone()) * BigInt::from(sign);
                let sb = BigInt::from(s.clone());
                for (i, c) in p.iter().enumerate() {
                    acc += c * rb.pow(i as u32) * sb.pow((d - i) as u32);
                }
                if acc.is_zero() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let f = crate::exactmath::Factorization::of(n)?;
    let mut divs = vec![BigUint::one()];
    for (p, e) in f.factors() {
        let e = num::traits::ToPrimitive::to_u64(e)
            .ok_or_else(|| Error::LimitExceeded("divisor exponent too large".into()))?;
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut power = BigUint::one();
            for _ in 0..=e {
                next.push(d * &power);
                power *= p;
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return Err(Error::LimitExceeded("too many divisors".into()));
        }
    }
    Ok(divs)
}

/// Euler's totient for small arguments.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut q = 2u64;
    while q * q <= m {
        if m % q == 0 {
            while m % q == 0 {
                m /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The n-th cyclotomic polynomial, by exact division of `x^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut num = trim(num);
    for d in 1..n {
        if n % d == 0 {
            num = div_exact_monic(&num, &cyclotomic(d)).expect("cyclotomic division is exact");
        }
    }
    num
}

/// Evaluate at an exact rational point.
pub fn eval_rational(p: &IntPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Parse an ASCII polynomial such as `x^2 - x - 1`, `2x^3 + 7` or `-3*x + 2`.
pub fn parse_polynomial(input: &str) -> Result<IntPoly> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty polynomial".into()));
    }
    let bytes = s.as_bytes();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut pos = 0usize;
    let mut expect_term = true;
    let mut sign = BigInt::one();
    while pos < bytes.len() {
        match bytes[pos] {
            b'+' if !expect_term || pos == 0 => {
                pos += 1;
                expect_term = true;
            }
            b'-' if !expect_term || pos == 0 => {
                pos += 1;
                expect_term = true;
                sign = -BigInt::one();
            }
            _ if expect_term => {
                let (coeff, power, consumed) = parse_term(&s[pos..])?;
                pos += consumed;
                if coeffs.len() <= power {
                    coeffs.resize(power + 1, BigInt::zero());
                }
                coeffs[power] += &sign * coeff;
                sign = BigInt::one();
                expect_term = false;
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{}' in polynomial",
                    other as char
                )))
            }
        }
    }
    if expect_term {
        return Err(Error::InvalidInput("dangling sign in polynomial".into()));
    }
    let coeffs = trim(coeffs);
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    Ok(coeffs)
}

/// Parse one term `coef`, `x`, `coef*x^k`, ...; returns (coef, power, bytes consumed).
fn parse_term(s: &str) -> Result<(BigInt, usize, usize)> {
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let digits_end = bytes[pos..]
        .iter()
        .position(|b| !b.is_ascii_digit())
        .map_or(bytes.len(), |off| pos + off);
    let mut coeff = BigInt::one();
    let mut saw_digits = false;
    if digits_end > pos {
        coeff = s[pos..digits_end]
            .parse()
            .map_err(|_| Error::InvalidInput("bad coefficient".into()))?;
        pos = digits_end;
        saw_digits = true;
    }
    if pos < bytes.len() && bytes[pos] == b'*' {
        pos += 1;
    }
    if pos < bytes.len() && (bytes[pos] == b'x' || bytes[pos] == b'X') {
        pos += 1;
        let mut power = 1usize;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let exp_end = bytes[pos..]
                .iter()
                .position(|b| !b.is_ascii_digit())
                .map_or(bytes.len(), |off| pos + off);
            if exp_end == pos {
                return Err(Error::InvalidInput("missing exponent".into()));
            }
            power = s[pos..exp_end]
                .parse()
                .map_err(|_| Error::InvalidInput("bad exponent".into()))?;
            if power > 64 {
                return Err(Error::LimitExceeded("exponent above 64".into()));
            }
            pos = exp_end;
        }
        Ok((coeff, power, pos))
    } else if saw_digits {
        Ok((coeff, 0, pos))
    } else {
        Err(Error::InvalidInput("expected a coefficient or x".into()))
    }
}

/// Render in the same ASCII form the parser accepts.
pub fn format_polynomial(p: &IntPoly) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.magnitude();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let show_coeff = i == 0 || !mag.is_one();
        if show_coeff {
            out.push_str(&mag.to_string());
        }
        if i >= 1 {
            out.push('x');
            if i > 1 {
                out.push_str(&format!("^{i}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
