//! Exact integer and rational arithmetic primitives.
//!
//! [`Factorization`] is the canonical carrier for every integer that may be
//! too large to expand (inertia bounds reach 10^1941 in routine use); it maps
//! primes to exponents and supports exact multiplication, gcd/lcm, exact
//! division and guarded expansion. The free functions cover prime valuations,
//! list lcm, the `a_r(q)` defect and the gcd-of-products identity
//! `gcd_j prod_{i != j} a_i = prod_i gcd(lcm(a_1..a_i), a_{i+1})`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};
use num::Integer;

use crate::bigfloat::{self, RealInterval};
use crate::{Error, Result};

/// Reduced rational with positive denominator (guaranteed by `BigRational`).
pub type ExactRational = BigRational;

/// Default cap, in decimal digits, on expanding a factored integer.
pub const DEFAULT_EXPAND_DIGITS: u64 = 1_000_000;

/// Fixed Miller-Rabin witness set: deterministic below 3.3 * 10^24, a strong
/// probable-prime test above.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primality test used to validate valuation and factorization inputs.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in MR_WITNESSES {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Convenience primality test for machine-word primes.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Exponent of the prime `q` in `n >= 1`.
pub fn valuation(n: &BigUint, q: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::InvalidInput("valuation of zero".into()));
    }
    if !is_prime(q) {
        return Err(Error::InvalidInput(format!(
            "valuation base {q} is not prime"
        )));
    }
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (quot, rem) = m.div_rem(q);
        if !rem.is_zero() {
            return Ok(v);
        }
        v += 1;
        m = quot;
    }
}

pub(crate) fn valuation_u64(n: u64, q: u64) -> u64 {
    debug_assert!(n > 0);
    let mut v = 0;
    let mut m = n;
    while m % q == 0 {
        v += 1;
        m /= q;
    }
    v
}

/// Least common multiple of a non-empty list of positive integers.
pub fn lcm_list(values: &[BigUint]) -> Result<BigUint> {
    if values.is_empty() {
        return Err(Error::InvalidInput("lcm of an empty list".into()));
    }
    let mut acc = BigUint::one();
    for v in values {
        if v.is_zero() {
            return Err(Error::InvalidInput("lcm of zero".into()));
        }
        acc = acc.lcm(v);
    }
    Ok(acc)
}

/// The defect `a_r(q) = sum_{e in L} v_q(e) - max_{e in L} v_q(e)` over the
/// set of distinct values of `lambda_set`. Zero whenever at most one element
/// is divisible by `q`.
pub fn a_r(lambda_set: &[BigUint], q: &BigUint) -> Result<u64> {
    if lambda_set.is_empty() {
        return Err(Error::InvalidInput("a_r over an empty set".into()));
    }
    if !is_prime(q) {
        return Err(Error::InvalidInput(format!("a_r base {q} is not prime")));
    }
    let distinct: BTreeSet<&BigUint> = lambda_set.iter().collect();
    let mut sum = 0u64;
    let mut max = 0u64;
    for e in distinct {
        let v = valuation(e, q)?;
        sum += v;
        max = max.max(v);
    }
    Ok(sum - max)
}

/// `gcd_{j=1..l} prod_{i != j} a_i` for `l >= 2` positive integers, evaluated
/// through the telescoped chain `prod_{i=1}^{l-1} gcd(lcm(a_1..a_i), a_{i+1})`
/// so that no full product is ever formed.
pub fn gcd_of_products(values: &[BigUint]) -> Result<BigUint> {
    if values.len() < 2 {
        return Err(Error::InvalidInput(
            "gcd_of_products needs at least two values".into(),
        ));
    }
    if values.iter().any(|v| v.is_zero()) {
        return Err(Error::InvalidInput("gcd_of_products of zero".into()));
    }
    let mut running_lcm = values[0].clone();
    let mut acc = BigUint::one();
    for v in &values[1..] {
        acc *= running_lcm.gcd(v);
        running_lcm = running_lcm.lcm(v);
    }
    Ok(acc)
}

/// A positive integer in factored form: a map from primes to exponents.
///
/// Zero exponents are never stored, so the empty map is the integer 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: BTreeMap<BigUint, BigUint>,
}

impl Factorization {
    /// The integer 1.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor a positive integer by trial division (backed by a probable-prime
    /// check for any large cofactor).
    pub fn of(n: &BigUint) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::InvalidInput("factorization of zero".into()));
        }
        let mut out = Factorization::one();
        let mut m = n.clone();
        let mut q = 2u64;
        while BigUint::from(q) * BigUint::from(q) <= m && q < 1_000_000 {
            let qb = BigUint::from(q);
            let mut exp = 0u64;
            loop {
                let (quot, rem) = m.div_rem(&qb);
                if !rem.is_zero() {
                    break;
                }
                m = quot;
                exp += 1;
            }
            if exp > 0 {
                out.insert_pow(qb, BigUint::from(exp));
            }
            q += if q == 2 { 1 } else { 2 };
        }
        if !m.is_one() {
            if is_prime(&m) {
                out.insert_pow(m, BigUint::one());
            } else {
                return Err(Error::LimitExceeded(format!(
                    "cofactor {m} is composite and beyond the trial-division range"
                )));
            }
        }
        Ok(out)
    }

    pub fn of_u64(n: u64) -> Result<Self> {
        Self::of(&BigUint::from(n))
    }

    /// Add `prime^exp` to the factor map (merging exponents).
    pub fn insert_pow(&mut self, prime: BigUint, exp: BigUint) {
        if exp.is_zero() {
            return;
        }
        *self.factors.entry(prime).or_insert_with(BigUint::zero) += exp;
    }

    /// Iterate `(prime, exponent)` pairs in ascending prime order.
    pub fn factors(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.factors.iter()
    }

    /// Exponent of `prime` (zero when absent).
    pub fn exponent(&self, prime: &BigUint) -> BigUint {
        self.factors
            .get(prime)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            out.insert_pow(p.clone(), e.clone());
        }
        out
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        if exp.is_zero() {
            return Self::one();
        }
        let mut out = Self::one();
        for (p, e) in &self.factors {
            out.insert_pow(p.clone(), e * exp);
        }
        out
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            let cur = out.exponent(p);
            if *e > cur {
                out.factors.insert(p.clone(), e.clone());
            }
        }
        out
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = Self::one();
        for (p, e) in &self.factors {
            let o = other.exponent(p);
            let m = e.min(&o).clone();
            if !m.is_zero() {
                out.factors.insert(p.clone(), m);
            }
        }
        out
    }

    /// Exact division; fails if any prime exponent would go negative.
    pub fn divide_exact(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            let cur = out.exponent(p);
            if *e > cur {
                return Err(Error::Domain(format!(
                    "inexact factored division at prime {p}: {cur} < {e}"
                )));
            }
            let rem = cur - e;
            if rem.is_zero() {
                out.factors.remove(p);
            } else {
                out.factors.insert(p.clone(), rem);
            }
        }
        Ok(out)
    }

    /// Expand to a plain integer, refusing once the result would exceed
    /// `digit_limit` decimal digits.
    pub fn expand_guarded(&self, digit_limit: u64) -> Result<BigUint> {
        let digits = self.log10_f64() + 1.0;
        if !digits.is_finite() || digits > digit_limit as f64 {
            return Err(Error::LimitExceeded(format!(
                "expansion would need about {digits:.0} digits (limit {digit_limit})"
            )));
        }
        let mut out = BigUint::one();
        for (p, e) in &self.factors {
            let e = e
                .to_u64()
                .ok_or_else(|| Error::LimitExceeded("exponent too large for expansion".into()))?;
            let mut base = p.clone();
            let mut k = e;
            // Square-and-multiply on the accumulator.
            while k > 0 {
                if k & 1 == 1 {
                    out *= &base;
                }
                k >>= 1;
                if k > 0 {
                    base = &base * &base;
                }
            }
        }
        Ok(out)
    }

    /// Expand under the default digit cap.
    pub fn expand(&self) -> Result<BigUint> {
        self.expand_guarded(DEFAULT_EXPAND_DIGITS)
    }

    /// Fast decimal-log estimate (not certified; use [`Self::log10_interval`]
    /// where a proven enclosure matters).
    pub fn log10_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| {
                let ef = e.to_f64().unwrap_or(f64::INFINITY);
                let pf = p.to_f64().unwrap_or(f64::INFINITY);
                ef * pf.log10()
            })
            .sum()
    }

    /// Certified enclosure of the decimal logarithm.
    pub fn log10_interval(&self, scale: u32) -> Result<RealInterval> {
        let mut acc = RealInterval::zero(scale);
        for (p, e) in &self.factors {
            acc = acc.add(&bigfloat::ln_uint(p, scale).mul_uint(e));
        }
        acc.div_pos(&bigfloat::ln10(scale))
    }

    /// Certified enclosure of the natural logarithm.
    pub fn ln_interval(&self, scale: u32) -> RealInterval {
        let mut acc = RealInterval::zero(scale);
        for (p, e) in &self.factors {
            acc = acc.add(&bigfloat::ln_uint(p, scale).mul_uint(e));
        }
        acc
    }

    /// Exact value comparison of two factored integers.
    pub fn cmp_value(&self, other: &Self) -> Result<std::cmp::Ordering> {
        if self == other {
            return Ok(std::cmp::Ordering::Equal);
        }
        // Compare self/other = num/den with the common part cancelled.
        let mut num = Factorization::one();
        let mut den = Factorization::one();
        let primes: BTreeSet<&BigUint> = self.factors.keys().chain(other.factors.keys()).collect();
        for p in primes {
            let a = self.exponent(p);
            let b = other.exponent(p);
            if a > b {
                num.insert_pow(p.clone(), a - b);
            } else if b > a {
                den.insert_pow(p.clone(), b - a);
            }
        }
        let n = num.expand_guarded(400_000)?;
        let d = den.expand_guarded(400_000)?;
        Ok(n.cmp(&d))
    }
}

impl From<u64> for Factorization {
    /// Factored form of a small integer; panics on zero or an unfactorable
    /// input (impossible below 10^12).
    fn from(n: u64) -> Self {
        Factorization::of_u64(n).expect("small integer factorization")
    }
}

impl fmt::Display for Factorization {
    /// Renders `2^2 * 3^21 * 5`; the integer 1 renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Factorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Factorization::one());
        }
        let mut out = Factorization::one();
        let mut last_prime: Option<BigUint> = None;
        for part in s.split('*') {
            let part = part.trim();
            let (p_str, e_str) = match part.split_once('^') {
                Some((p, e)) => (p.trim(), Some(e.trim())),
                None => (part, None),
            };
            let p: BigUint = p_str
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime '{p_str}'")))?;
            if !is_prime(&p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            if let Some(prev) = &last_prime {
                if *prev >= p {
                    return Err(Error::InvalidInput(
                        "primes must be strictly ascending".into(),
                    ));
                }
            }
            last_prime = Some(p.clone());
            let e: BigUint = match e_str {
                Some(e) => e
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad exponent '{e}'")))?,
                None => BigUint::one(),
            };
            if e.is_zero() {
                return Err(Error::InvalidInput("zero exponent".into()));
            }
            out.insert_pow(p, e);
        }
        Ok(out)
    }
}

/// Exact rational built from a numerator/denominator pair of u64s.
pub fn rational(num: i64, den: u64) -> ExactRational {
    BigRational::new(num.into(), (den as i64).into())
}
