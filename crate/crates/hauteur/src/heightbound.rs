//! The explicit height lower bound for a tower scenario.
//!
//! For a ramification-index cap `e` at residue characteristic `p`, `k` is the
//! unique integer with `p^{k-1}(p-1) <= e < p^k(p-1)` and
//! `beta_lambda = p^{min(lambda,k)}/e + max(0, lambda-k)`. The contraction
//! parameter `lambda` is the least value making the strict inequality
//! `beta_lambda * local_degree * ln p > abs_degree * ln 2` hold; the bound for
//! every element of infinite order is then
//!
//! ```text
//! h(x) >= (beta * local_degree / abs_degree * ln p - ln 2) / (p^{f+lambda} + p^lambda)
//! ```
//!
//! reported here through its natural logarithm, since `f` routinely reaches
//! 10^17 and beyond. The strict inequality is decided exactly: for `p = 2` it
//! reduces to a rational comparison, for odd `p` interval arithmetic at
//! doubling precision always separates the sides because equality would force
//! `ln 2 / ln p` to be rational.

use std::collections::BTreeMap;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{self, RealInterval};
use crate::compositum::{e_factor_from_counts, ram_bound_from_counts};
use crate::exactmath::{is_prime_u64, ExactRational, Factorization};
use crate::krasner::{self, LocalField};
use crate::{Error, Result};

/// Default number of fractional bits carried by the logarithmic outputs.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Largest supported modulus bound `M`; the modulus `N = lcm(j <= M, p does
/// not divide j)` and the order computation grow exponentially with it.
pub const MAX_MODULUS_BOUND: u64 = 1000;

/// Escalation ladder for the interval decision procedure.
const DECISION_SCALES: [u32; 7] = [192, 448, 960, 1984, 4032, 8128, 16320];

/// Base-field data at the chosen prime: degrees, ramification and the order
/// of the prime in the class group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseFieldData {
    /// Degree of the base number field over the rationals.
    pub abs_degree: u64,
    /// Degree of the completion at the chosen prime over the p-adic rationals.
    pub local_degree: u64,
    /// Ramification index of the chosen prime over the rationals.
    pub ram_index: u64,
    /// Inertia degree of the chosen prime over the rationals.
    pub inertia_degree: u64,
    /// Order of the chosen prime in the class group of the base field.
    pub class_order: u64,
}

impl BaseFieldData {
    pub fn new(
        abs_degree: u64,
        local_degree: u64,
        ram_index: u64,
        inertia_degree: u64,
        class_order: u64,
    ) -> Result<Self> {
        let data = BaseFieldData {
            abs_degree,
            local_degree,
            ram_index,
            inertia_degree,
            class_order,
        };
        data.validate()?;
        Ok(data)
    }

    /// The rational base field: every invariant is 1.
    pub fn rational_field() -> Self {
        BaseFieldData {
            abs_degree: 1,
            local_degree: 1,
            ram_index: 1,
            inertia_degree: 1,
            class_order: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_degree == 0
            || self.local_degree == 0
            || self.ram_index == 0
            || self.inertia_degree == 0
            || self.class_order == 0
        {
            return Err(Error::InvalidInput(
                "base field invariants must be positive".into(),
            ));
        }
        if self.ram_index * self.inertia_degree != self.local_degree {
            return Err(Error::InvalidInput(format!(
                "e * f = {} * {} does not match the local degree {}",
                self.ram_index, self.inertia_degree, self.local_degree
            )));
        }
        if self.local_degree > self.abs_degree {
            return Err(Error::InvalidInput(
                "local degree exceeds the field degree".into(),
            ));
        }
        if self.abs_degree == 1 && self.class_order != 1 {
            return Err(Error::InvalidInput(
                "the rational field has trivial class group".into(),
            ));
        }
        Ok(())
    }
}

/// The unique `k` with `p^{k-1}(p-1) <= e < p^k(p-1)`, with `k = 0` exactly
/// when `e < p - 1`.
pub fn find_k(e: &BigUint, p: u64) -> u64 {
    debug_assert!(!e.is_zero());
    let pm1 = BigUint::from(p - 1);
    if *e < pm1 {
        return 0;
    }
    let mut k = 1u64;
    let mut threshold = &pm1 * BigUint::from(p);
    while *e >= threshold {
        k += 1;
        threshold *= BigUint::from(p);
    }
    k
}

/// `beta_lambda(e, p) = p^{min(lambda,k)}/e + max(0, lambda - k)`.
pub fn beta_value(e: &BigUint, p: u64, lambda: u64) -> ExactRational {
    let k = find_k(e, p);
    let mk = lambda.min(k) as u32;
    let power = BigUint::from(p).pow(mk);
    let mut beta = BigRational::new(power.into(), e.clone().into());
    if lambda > k {
        beta += BigRational::from_integer((lambda - k).into());
    }
    beta
}

/// Decides the strict inequality `beta * local_degree * ln p > abs_degree * ln 2`
/// exactly. For `p = 2` this is a rational comparison; for odd `p` interval
/// arithmetic at doubling precision terminates because equality would force
/// `ln 2 / ln p` to be rational.
pub fn passes_height_inequality(
    beta: &ExactRational,
    p: u64,
    base: &BaseFieldData,
) -> Result<bool> {
    if !beta.is_positive() {
        return Ok(false);
    }
    let lhs_factor = beta * BigRational::from_integer(base.local_degree.into());
    let rhs_factor = BigRational::from_integer(base.abs_degree.into());
    if p == 2 {
        return Ok(lhs_factor > rhs_factor);
    }
    let pb = BigUint::from(p);
    for scale in DECISION_SCALES {
        let lhs = bigfloat::ln_uint(&pb, scale).mul_rational(&lhs_factor);
        let rhs = bigfloat::ln2(scale).mul_rational(&rhs_factor);
        if let Some(answer) = lhs.strictly_greater(&rhs) {
            return Ok(answer);
        }
    }
    Err(Error::Precision(
        "could not separate beta * local * ln p from deg * ln 2".into(),
    ))
}

/// The least `lambda >= 0` whose `beta_lambda` satisfies the strict height
/// inequality, together with that `beta`.
pub fn lambda_beta(e: &BigUint, p: u64, base: &BaseFieldData) -> Result<(u64, ExactRational)> {
    if e.is_zero() {
        return Err(Error::InvalidInput(
            "ramification cap must be positive".into(),
        ));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    base.validate()?;
    let k = find_k(e, p);
    // beta grows by at least 1 per step beyond k, so the search ends within
    // abs_degree + O(1) further steps.
    let cap = k + base.abs_degree + 80;
    for lambda in 0..=cap {
        let beta = beta_value(e, p, lambda);
        if passes_height_inequality(&beta, p, base)? {
            return Ok((lambda, beta));
        }
    }
    Err(Error::Precision("lambda search exceeded its bound".into()))
}

/// Natural log of the height lower bound
/// `(beta * local/deg * ln p - ln 2) / (p^{f+lambda} + p^lambda)`, as a
/// certified enclosure with at least `precision_bits` fractional bits.
pub fn height_bound(
    f: &BigUint,
    lambda: u64,
    beta: &ExactRational,
    p: u64,
    base: &BaseFieldData,
    precision_bits: u32,
) -> Result<RealInterval> {
    if f.is_zero() {
        return Err(Error::InvalidInput("inertia cap must be positive".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    base.validate()?;
    let pb = BigUint::from(p);
    let ratio = beta * BigRational::new(base.local_degree.into(), base.abs_degree.into());
    let mut scale = precision_bits.max(DEFAULT_PRECISION_BITS) + 32;
    for _ in 0..4 {
        let lnp = bigfloat::ln_uint(&pb, scale);
        let numerator = lnp.mul_rational(&ratio).sub(&bigfloat::ln2(scale));
        if !numerator.lo_rational().is_positive() {
            if numerator.hi_rational() <= BigRational::zero() {
                return Err(Error::Domain(
                    "height bound is not positive for these parameters".into(),
                ));
            }
            scale *= 2;
            continue;
        }
        let ln_numerator = bigfloat::ln_interval(&numerator, scale)?;
        let exponent = f + BigUint::from(lambda);
        let main_term = lnp.mul_uint(&exponent);
        let tail = log1p_inverse_power(&pb, f, scale)?;
        return Ok(ln_numerator.sub(&main_term).sub(&tail));
    }
    Err(Error::Precision(
        "the bound numerator could not be separated from zero".into(),
    ))
}

/// Enclosure of `ln(1 + p^{-f})`; for `f >= 64` it collapses into
/// `[0, 2^-64]` since `ln(1+x) <= x <= 2^-64` there.
fn log1p_inverse_power(p: &BigUint, f: &BigUint, scale: u32) -> Result<RealInterval> {
    if let Some(small_f) = f.to_u64().filter(|&v| v < 64) {
        let pf = p.pow(small_f as u32);
        let arg = BigRational::new((&pf + BigUint::one()).into(), pf.into());
        bigfloat::ln_rational(&arg, scale)
    } else {
        let hi = num::bigint::BigInt::one() << scale.saturating_sub(64) as usize;
        Ok(RealInterval::span(num::bigint::BigInt::zero(), hi, scale))
    }
}

/// The modulus `N = lcm(j | 1 <= j <= m_bound, gcd(j, p) = 1)`.
pub fn modulus_n(m_bound: u64, p: u64) -> Result<BigUint> {
    modulus_n_factored(m_bound, p)?.expand()
}

fn modulus_n_factored(m_bound: u64, p: u64) -> Result<Factorization> {
    if m_bound == 0 {
        return Err(Error::InvalidInput("modulus bound must be positive".into()));
    }
    if m_bound > MAX_MODULUS_BOUND {
        return Err(Error::LimitExceeded(format!(
            "modulus bound {m_bound} exceeds {MAX_MODULUS_BOUND}"
        )));
    }
    let mut out = Factorization::one();
    for q in 2..=m_bound {
        if q == p || !is_prime_u64(q) {
            continue;
        }
        let mut exp = 0u64;
        let mut power = q;
        loop {
            exp += 1;
            match power.checked_mul(q) {
                Some(next) if next <= m_bound => power = next,
                _ => break,
            }
        }
        out.insert_pow(BigUint::from(q), BigUint::from(exp));
    }
    Ok(out)
}

/// Multiplicative order of `p` modulo `N = modulus_n(m_bound, p)`: the order
/// `g` for the rational base field, where the distinguished generator of the
/// prime is `p` itself.
pub fn rational_base_g(m_bound: u64, p: u64) -> Result<BigUint> {
    rational_base_g_factored(m_bound, p)?.expand()
}

fn rational_base_g_factored(m_bound: u64, p: u64) -> Result<Factorization> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let n_fact = modulus_n_factored(m_bound, p)?;
    if n_fact.is_one() {
        return Ok(Factorization::one());
    }
    let modulus = n_fact.expand()?;
    // Carmichael lambda(N) in factored form; q - 1 < m_bound keeps every
    // piece inside the trial-division range.
    let mut lam = Factorization::one();
    for (q, a) in n_fact.factors() {
        let a = a.to_u64().expect("small exponent");
        let q64 = q.to_u64().expect("small prime");
        let part = if q64 == 2 {
            match a {
                1 => Factorization::one(),
                2 => Factorization::from(2),
                _ => Factorization::from(2).pow(&BigUint::from(a - 2)),
            }
        } else {
            Factorization::of_u64(q64 - 1)?
                .mul(&Factorization::of_u64(q64)?.pow(&BigUint::from(a - 1)))
        };
        lam = lam.lcm(&part);
    }
    let pb = BigUint::from(p) % &modulus;
    debug_assert!(pb.modpow(&lam.expand()?, &modulus).is_one());
    // Strip each prime out of the exponent while the power stays trivial.
    let mut order = lam.clone();
    let primes: Vec<BigUint> = lam.factors().map(|(q, _)| q.clone()).collect();
    for r in primes {
        let r_fact = Factorization::of(&r)?;
        while !order.exponent(&r).is_zero() {
            let candidate = order.divide_exact(&r_fact)?;
            if pb.modpow(&candidate.expand()?, &modulus).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// The principal-power exponent `2 * class_order * e_n * g` witnessing a
/// bounded inertia degree in a ray class field.
pub fn principal_power_exponent(base: &BaseFieldData, e_n: u64, g: &BigUint) -> BigUint {
    BigUint::from(2u32) * BigUint::from(base.class_order) * BigUint::from(e_n) * g
}

/// Number of completions attached to a tower entry: an explicit count (or
/// upper bound), or a request to bound it with the extension-count formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionCount {
    Krasner,
    Explicit(BigUint),
}

/// One tower family: the degree of its members over the base field and the
/// ramification index of the unique prime above `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerEntry {
    pub degree: u64,
    pub ram_index: u64,
    pub count: CompletionCount,
}

/// Modulus data `(g, eps)` for one modulus class: the order of the
/// distinguished generator and the sign factor (1 or 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModulusEntry {
    pub order: u64,
    pub sign_factor: u8,
}

/// How the modulus orders are obtained: computed for the rational base field,
/// or supplied explicitly for any other base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModulusData {
    RationalBase,
    Explicit(Vec<ModulusEntry>),
}

/// Full input of a bound evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerScenario {
    pub p: u64,
    pub base: BaseFieldData,
    pub towers: Vec<TowerEntry>,
    pub modulus_bound: u64,
    pub moduli: ModulusData,
}

/// Output record of a bound evaluation. Both caps are kept factored; the
/// height bound itself is only ever reported in log space.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub e_bound: Factorization,
    pub f_bound: Factorization,
    pub k: u64,
    pub lambda: u64,
    pub beta: ExactRational,
    pub ln_bound: RealInterval,
    pub positive: bool,
}

impl TowerScenario {
    pub fn validate(&self) -> Result<()> {
        if !is_prime_u64(self.p) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.p)));
        }
        self.base.validate()?;
        if self.towers.is_empty() {
            return Err(Error::InvalidInput(
                "a scenario needs at least one tower".into(),
            ));
        }
        for t in &self.towers {
            if t.degree == 0 || t.ram_index == 0 {
                return Err(Error::InvalidInput(
                    "tower invariants must be positive".into(),
                ));
            }
            if t.degree % t.ram_index != 0 {
                return Err(Error::InvalidInput(format!(
                    "ramification index {} does not divide the degree {}",
                    t.ram_index, t.degree
                )));
            }
            if let CompletionCount::Explicit(c) = &t.count {
                if c.is_zero() {
                    return Err(Error::InvalidInput(
                        "completion counts must be positive".into(),
                    ));
                }
            }
        }
        if self.modulus_bound == 0 {
            return Err(Error::InvalidInput(
                "the modulus bound must be positive".into(),
            ));
        }
        match &self.moduli {
            ModulusData::RationalBase => {
                if self.base.abs_degree != 1 {
                    return Err(Error::InvalidInput(
                        "computed modulus data requires the rational base field; \
                         supply explicit moduli otherwise"
                            .into(),
                    ));
                }
            }
            ModulusData::Explicit(entries) => {
                if entries.is_empty() {
                    return Err(Error::InvalidInput("explicit modulus data is empty".into()));
                }
                for m in entries {
                    if m.order == 0 || !(m.sign_factor == 1 || m.sign_factor == 2) {
                        return Err(Error::InvalidInput(
                            "modulus entries need a positive order and a sign factor of 1 or 2"
                                .into(),
                        ));
                    }
                }
            }
        }
        // A ramification index may be counted explicitly or bounded by the
        // extension-count formulas, but not both at once.
        let mut style: BTreeMap<u64, bool> = BTreeMap::new();
        for t in &self.towers {
            let is_krasner = matches!(t.count, CompletionCount::Krasner);
            if let Some(prev) = style.insert(t.ram_index, is_krasner) {
                if prev != is_krasner {
                    return Err(Error::InvalidInput(format!(
                        "ramification index {} mixes explicit and computed counts",
                        t.ram_index
                    )));
                }
            }
        }
        Ok(())
    }

    /// Per-ramification-index completion counts `e -> N(e)`. Explicit counts
    /// add up; computed counts use the extension-count bound over every
    /// inertia degree `f` with `e * f <= max degree`.
    fn completion_counts(&self) -> Result<BTreeMap<u64, BigUint>> {
        let field = LocalField::new(self.p, self.base.local_degree)?;
        let max_d = self.towers.iter().map(|t| t.degree).max().unwrap();
        let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
        let mut bounded: Vec<u64> = Vec::new();
        for t in &self.towers {
            match &t.count {
                CompletionCount::Explicit(c) => {
                    *counts.entry(t.ram_index).or_insert_with(BigUint::zero) += c.clone();
                }
                CompletionCount::Krasner => {
                    if !bounded.contains(&t.ram_index) {
                        bounded.push(t.ram_index);
                        let f_set: Vec<u64> = (1..=max_d / t.ram_index).collect();
                        let bound = krasner::bound_n_e(&field, t.ram_index, &f_set)?;
                        counts.insert(t.ram_index, bound);
                    }
                }
            }
        }
        Ok(counts)
    }
}

/// Evaluate a scenario into a [`BoundReport`] at the default precision.
pub fn evaluate_scenario(sc: &TowerScenario) -> Result<BoundReport> {
    evaluate_scenario_with_precision(sc, DEFAULT_PRECISION_BITS)
}

/// Evaluate a scenario into a [`BoundReport`].
pub fn evaluate_scenario_with_precision(
    sc: &TowerScenario,
    precision_bits: u32,
) -> Result<BoundReport> {
    sc.validate()?;
    let counts = sc.completion_counts()?;

    let e_bound =
        Factorization::of_u64(sc.base.ram_index)?.mul(&ram_bound_from_counts(sc.p, &counts)?);

    let moduli: Vec<(Factorization, u64)> = match &sc.moduli {
        ModulusData::RationalBase => {
            vec![(rational_base_g_factored(sc.modulus_bound, sc.p)?, 1)]
        }
        ModulusData::Explicit(entries) => entries
            .iter()
            .map(|m| Ok((Factorization::of_u64(m.order)?, m.sign_factor as u64)))
            .collect::<Result<_>>()?,
    };
    let mut tower_lcm = Factorization::one();
    for t in &sc.towers {
        for (g_fact, eps) in &moduli {
            let term = Factorization::of_u64(eps * t.degree)?.mul(g_fact);
            tower_lcm = tower_lcm.lcm(&term);
        }
    }
    let f_bound = Factorization::of_u64(sc.base.inertia_degree * sc.base.class_order)?
        .mul(&tower_lcm)
        .mul(&e_factor_from_counts(sc.p, &counts)?);

    let e_value = e_bound.expand()?;
    let k = find_k(&e_value, sc.p);
    let (lambda, beta) = lambda_beta(&e_value, sc.p, &sc.base)?;
    let f_value = f_bound.expand()?;
    let ln_bound = height_bound(&f_value, lambda, &beta, sc.p, &sc.base, precision_bits)?;
    let positive = passes_height_inequality(&beta, sc.p, &sc.base)?;
    Ok(BoundReport {
        e_bound,
        f_bound,
        k,
        lambda,
        beta,
        ln_bound,
        positive,
    })
}
