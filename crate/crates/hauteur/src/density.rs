//! Exact natural densities of number fields with prescribed splitting
//! behaviour at an odd prime, among all fields of the same degree ordered by
//! absolute discriminant.
//!
//! Closed forms exist for degrees 2 through 5 (inert everywhere; totally
//! ramified only for degrees 2 and 3). Everything here is exact rational
//! arithmetic; no floating point is involved.

use num::rational::BigRational;
use num::traits::One;
use num::BigInt;

use crate::exactmath::{is_prime_u64, ExactRational};
use crate::{Error, Result};

/// The splitting behaviour a density query asks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingKind {
    Inert,
    TotallyRamified,
}

/// A density query: prime `p > 2`, degree in `2..=5`, splitting kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityQuery {
    pub p: u64,
    pub degree: u32,
    pub kind: SplittingKind,
}

impl DensityQuery {
    pub fn new(p: u64, degree: u32, kind: SplittingKind) -> Result<Self> {
        let q = DensityQuery { p, degree, kind };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime_u64(self.p) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.p)));
        }
        if self.p == 2 {
            return Err(Error::InvalidInput(
                "densities are only stated for odd primes".into(),
            ));
        }
        match (self.degree, self.kind) {
            (2..=5, SplittingKind::Inert) => Ok(()),
            (2 | 3, SplittingKind::TotallyRamified) => Ok(()),
            (4 | 5, SplittingKind::TotallyRamified) => Err(Error::InvalidInput(
                "totally ramified densities are only known for degrees 2 and 3".into(),
            )),
            _ => Err(Error::InvalidInput(format!(
                "no density formula for degree {}",
                self.degree
            ))),
        }
    }
}

fn int(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Exact natural density for a supported query.
pub fn natural_density(query: &DensityQuery) -> Result<ExactRational> {
    query.validate()?;
    let p = int(query.p);
    let value = match (query.degree, query.kind) {
        // Quadratic fields: 1/(p+1) ramified, p/(2(p+1)) inert.
        (2, SplittingKind::TotallyRamified) => BigRational::new(BigInt::one(), &p + 1),
        (2, SplittingKind::Inert) => BigRational::new(p.clone(), 2 * (&p + 1)),
        // Cubic fields: 1/(p^2+1) ramified, p(p-1)/(3(p^2+1)) inert.
        (3, SplittingKind::TotallyRamified) => BigRational::new(BigInt::one(), &p * &p + 1),
        (3, SplittingKind::Inert) => BigRational::new(&p * (&p - 1), 3 * (&p * &p + 1)),
        // Quartic fields: (1/4)(1 - (p+1)^2 / (p^3 + p^2 + 2p + 1)).
        (4, SplittingKind::Inert) => {
            let den = &p * &p * &p + &p * &p + 2 * &p + 1;
            let frac = BigRational::new((&p + 1) * (&p + 1), den);
            (BigRational::one() - frac) / BigRational::from_integer(4.into())
        }
        // Quintic fields:
        // (1/5)(1 - (p+1)(p^2+p+1) / (p^4 + p^3 + 2p^2 + 2p + 1)).
        (5, SplittingKind::Inert) => {
            let den = &p * &p * &p * &p + &p * &p * &p + 2 * &p * &p + 2 * &p + 1;
            let frac = BigRational::new((&p + 1) * (&p * &p + &p + 1), den);
            (BigRational::one() - frac) / BigRational::from_integer(5.into())
        }
        _ => unreachable!("validated query"),
    };
    Ok(value)
}

/// Exact gap `1/n - d(inert at p, degree n)`; strictly positive on the
/// supported range and shrinking as `p` grows.
pub fn conjecture_gap(p: u64, degree: u32) -> Result<ExactRational> {
    let query = DensityQuery::new(p, degree, SplittingKind::Inert)?;
    let density = natural_density(&query)?;
    Ok(BigRational::new(BigInt::one(), int(degree as u64)) - density)
}
