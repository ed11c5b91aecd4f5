//! Upper bounds for the ramification index and the inertia degree of a
//! compositum of local field extensions.
//!
//! Inputs are multisets of ramification/inertia profiles, the multiplicity of
//! a profile being the number of distinct completions carrying it (or any
//! upper bound for it, which keeps every result a valid upper bound). With
//! `m` the number of tame extensions out of `n`:
//!
//! - all tame: the ramification index of the compositum is exactly the lcm of
//!   the individual indices, and the inertia factor is
//!   `E = prod_e e^{N(e)-1} * prod_q q^{a(q)}`;
//! - at most two wild: the same `E` applies;
//! - three or more wild: a pair of wild extensions is distinguished, the gcd
//!   collapse applies to the tame block plus that pair, and every remaining
//!   wild extension contributes its full `e^{N(e)}`. The statement holds for
//!   every choice of the pair, so both bound operations minimize over the
//!   admissible choices.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::{BigInt, BigUint, Sign};
use num::traits::{One, Zero};
use num::Integer;

use crate::exactmath::{valuation_u64, Factorization};
use crate::krasner::ExtensionProfile;
use crate::{Error, Result};

/// A multiset of extension profiles over a common residue characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionMultiset {
    p: u64,
    entries: Vec<(ExtensionProfile, BigUint)>,
}

impl ExtensionMultiset {
    /// Build a multiset; duplicate profiles are merged by adding counts.
    pub fn new(p: u64, entries: Vec<(ExtensionProfile, BigUint)>) -> Result<Self> {
        if !crate::exactmath::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty extension multiset".into()));
        }
        let mut merged: BTreeMap<ExtensionProfile, BigUint> = BTreeMap::new();
        for (profile, count) in entries {
            if count.is_zero() {
                return Err(Error::InvalidInput("zero multiplicity".into()));
            }
            *merged.entry(profile).or_insert_with(BigUint::zero) += count;
        }
        Ok(ExtensionMultiset {
            p,
            entries: merged.into_iter().collect(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[(ExtensionProfile, BigUint)] {
        &self.entries
    }

    /// Multiplicity-weighted count of extensions with ramification index `e`.
    pub fn count_for_e(&self, e: u64) -> BigUint {
        self.entries
            .iter()
            .filter(|(pr, _)| pr.e == e)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// Distinct ramification indices, ascending.
    pub fn e_values(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.entries.iter().map(|(pr, _)| pr.e).collect();
        set.into_iter().collect()
    }

    /// Per-ramification-index counts `e -> N(e)`.
    pub fn e_counts(&self) -> BTreeMap<u64, BigUint> {
        let mut map = BTreeMap::new();
        for (pr, c) in &self.entries {
            *map.entry(pr.e).or_insert_with(BigUint::zero) += c.clone();
        }
        map
    }

    /// lcm of the inertia degrees present in the multiset.
    pub fn f_lcm(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (pr, _) in &self.entries {
            acc = acc.lcm(&BigUint::from(pr.f));
        }
        acc
    }
}

/// Signed exponent vector over u64 primes, collapsed to a `Factorization`
/// only once every exponent is proven non-negative.
#[derive(Clone, Debug, Default)]
struct SignedFactors {
    exps: BTreeMap<u64, BigInt>,
}

impl SignedFactors {
    fn add_factored_u64(&mut self, n: u64, times: &BigInt) {
        debug_assert!(n > 0);
        let mut m = n;
        let mut q = 2u64;
        while q * q <= m {
            let v = valuation_u64(m, q);
            if v > 0 {
                *self.exps.entry(q).or_insert_with(BigInt::zero) += times * BigInt::from(v);
                m /= q.pow(v as u32);
            }
            q += if q == 2 { 1 } else { 2 };
        }
        if m > 1 {
            *self.exps.entry(m).or_insert_with(BigInt::zero) += times;
        }
    }

    fn add_prime(&mut self, q: u64, times: &BigInt) {
        *self.exps.entry(q).or_insert_with(BigInt::zero) += times;
    }

    fn into_factorization(self) -> Result<Factorization> {
        let mut out = Factorization::one();
        for (q, e) in self.exps {
            match e.sign() {
                Sign::Minus => {
                    return Err(Error::Domain(format!(
                        "negative exponent {e} at prime {q} in an exact division"
                    )))
                }
                Sign::NoSign => {}
                Sign::Plus => out.insert_pow(BigUint::from(q), e.to_biguint().unwrap()),
            }
        }
        Ok(out)
    }
}

fn lcm_u64(values: impl IntoIterator<Item = u64>) -> BigUint {
    let mut acc = BigUint::one();
    for v in values {
        acc = acc.lcm(&BigUint::from(v));
    }
    acc
}

/// Primes dividing any element of `values`.
fn primes_of(values: &[u64]) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &v in values {
        let mut m = v;
        let mut q = 2u64;
        while q * q <= m {
            if m % q == 0 {
                out.insert(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += if q == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.insert(m);
        }
    }
    out
}

/// `a(q) = sum_{e in set} v_q(e) - max_{e in set} v_q(e)` for u64 sets.
fn a_of_set(set: &BTreeSet<u64>, q: u64) -> u64 {
    let mut sum = 0u64;
    let mut max = 0u64;
    for &e in set {
        let v = valuation_u64(e, q);
        sum += v;
        max = max.max(v);
    }
    sum - max
}

/// Ramification bound from per-index counts. Exact (the lcm) when no index is
/// divisible by `p`; otherwise the minimum over the distinguished wild index.
pub(crate) fn ram_bound_from_counts(
    p: u64,
    counts: &BTreeMap<u64, BigUint>,
) -> Result<Factorization> {
    if counts.is_empty() {
        return Err(Error::InvalidInput("empty multiset".into()));
    }
    let tame: Vec<u64> = counts.keys().copied().filter(|e| e % p != 0).collect();
    let wild: Vec<u64> = counts.keys().copied().filter(|e| e % p == 0).collect();
    if wild.is_empty() {
        return Factorization::of(&lcm_u64(tame));
    }
    let mut best: Option<Factorization> = None;
    for &chosen in &wild {
        let lead = lcm_u64(tame.iter().copied().chain([chosen]));
        let mut cand = Factorization::of(&lead)?;
        let n_chosen = &counts[&chosen] - BigUint::one();
        cand = cand.mul(&Factorization::of_u64(chosen)?.pow(&n_chosen));
        for &other in &wild {
            if other != chosen {
                cand = cand.mul(&Factorization::of_u64(other)?.pow(&counts[&other]));
            }
        }
        best = Some(match best {
            None => cand,
            Some(cur) => match cand.cmp_value(&cur)? {
                std::cmp::Ordering::Less => cand,
                _ => cur,
            },
        });
    }
    Ok(best.unwrap())
}

/// The inertia factor `E` from per-index counts; see the module docs for the
/// tame/wild branches. The factored division is exact by construction, which
/// is asserted per prime.
pub(crate) fn e_factor_from_counts(
    p: u64,
    counts: &BTreeMap<u64, BigUint>,
) -> Result<Factorization> {
    if counts.is_empty() {
        return Err(Error::InvalidInput("empty multiset".into()));
    }
    let all: Vec<u64> = counts.keys().copied().collect();
    let tame_set: BTreeSet<u64> = all.iter().copied().filter(|e| e % p != 0).collect();
    let wild: Vec<u64> = all.iter().copied().filter(|e| e % p == 0).collect();
    let wild_total: BigUint = wild.iter().map(|e| counts[e].clone()).sum();

    if wild_total <= BigUint::from(2u32) {
        // Tame block (at most two wild extensions): one gcd collapse over all.
        let mut acc = SignedFactors::default();
        for &e in &all {
            let times = BigInt::from(&counts[&e] - BigUint::one());
            acc.add_factored_u64(e, &times);
        }
        let full_set: BTreeSet<u64> = all.iter().copied().collect();
        for &q in &primes_of(&all) {
            acc.add_prime(q, &BigInt::from(a_of_set(&full_set, q)));
        }
        return acc.into_factorization();
    }

    // Three or more wild extensions: minimize over the distinguished pair.
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for (i, &w1) in wild.iter().enumerate() {
        for &w2 in &wild[i..] {
            if w1 == w2 && counts[&w1] < BigUint::from(2u32) {
                continue;
            }
            pairs.push((w1, w2));
        }
    }
    let mut best: Option<Factorization> = None;
    for (w1, w2) in pairs {
        let mut head: BTreeSet<u64> = tame_set.clone();
        head.insert(w1);
        head.insert(w2);
        let mut acc = SignedFactors::default();
        let minus_one = BigInt::from(-1);
        for &e in &head {
            acc.add_factored_u64(e, &minus_one);
        }
        let head_vec: Vec<u64> = head.iter().copied().collect();
        for &q in &primes_of(&head_vec) {
            acc.add_prime(q, &BigInt::from(a_of_set(&head, q)));
        }
        for &e in &all {
            acc.add_factored_u64(e, &BigInt::from(counts[&e].clone()));
        }
        let cand = acc.into_factorization()?;
        best = Some(match best {
            None => cand,
            Some(cur) => match cand.cmp_value(&cur)? {
                std::cmp::Ordering::Less => cand,
                _ => cur,
            },
        });
    }
    Ok(best.unwrap())
}

/// Upper bound for the ramification index of the compositum; exact when every
/// profile is tame.
pub fn ramification_bound(ms: &ExtensionMultiset) -> Result<Factorization> {
    ram_bound_from_counts(ms.p(), &ms.e_counts())
}

/// The inertia factor `E` of the multiset.
pub fn e_factor(ms: &ExtensionMultiset) -> Result<Factorization> {
    e_factor_from_counts(ms.p(), &ms.e_counts())
}

/// Upper bound `f_lcm * E` for the inertia degree of the compositum.
pub fn inertia_bound(ms: &ExtensionMultiset, f_lcm: &BigUint) -> Result<Factorization> {
    if f_lcm.is_zero() {
        return Err(Error::InvalidInput("f_lcm must be positive".into()));
    }
    Ok(Factorization::of(f_lcm)?.mul(&e_factor(ms)?))
}

/// Two-extension inertia bound `lcm(f1, f2) * gcd(e1, e2)`.
pub fn two_field_inertia_bound(p1: &ExtensionProfile, p2: &ExtensionProfile) -> BigUint {
    let f = BigUint::from(p1.f).lcm(&BigUint::from(p2.f));
    let e = BigUint::from(p1.e).gcd(&BigUint::from(p2.e));
    f * e
}

/// The crude degree bound `prod_d d^{N_d}` from per-degree extension counts.
pub fn crude_bound(per_degree_counts: &[(u64, BigUint)]) -> Result<Factorization> {
    let mut out = Factorization::one();
    for (d, count) in per_degree_counts {
        if *d == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        out = out.mul(&Factorization::of_u64(*d)?.pow(count));
    }
    Ok(out)
}

/// Exact `(e, f)` of the compositum when the equality conditions hold:
/// linear disjointness (asserted by the caller), no wild profile, pairwise
/// equal-or-coprime ramification indices, and `prod f_i = lcm(f_i)`.
/// Returns `None` when any condition fails.
pub fn equality_case(
    ms: &ExtensionMultiset,
    linearly_disjoint: bool,
) -> Option<(Factorization, Factorization)> {
    if !linearly_disjoint {
        return None;
    }
    let p = ms.p();
    if ms.entries().iter().any(|(pr, _)| pr.is_wild(p)) {
        return None;
    }
    let e_values = ms.e_values();
    for (i, &a) in e_values.iter().enumerate() {
        for &b in &e_values[i + 1..] {
            if a.gcd(&b) != 1 {
                return None;
            }
        }
    }
    // prod f_i (with multiplicity) must equal lcm(f_i); otherwise the
    // conditions are not realizable and no exact value is produced.
    let mut f_prod = Factorization::one();
    for (pr, count) in ms.entries() {
        f_prod = f_prod.mul(&Factorization::of_u64(pr.f).ok()?.pow(count));
    }
    let f_lcm = Factorization::of(&ms.f_lcm()).ok()?;
    if f_prod != f_lcm {
        return None;
    }
    let counts = ms.e_counts();
    let mut e_exact = Factorization::one();
    let mut f_exact = f_prod;
    for (&e, count) in &counts {
        let fe = Factorization::of_u64(e).ok()?;
        e_exact = e_exact.mul(&fe);
        f_exact = f_exact.mul(&fe.pow(&(count - BigUint::one())));
    }
    Some((e_exact, f_exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krasner::{self, LocalField};

    fn profile(e: u64, f: u64) -> ExtensionProfile {
        ExtensionProfile { e, f }
    }

    fn ms(p: u64, items: &[(u64, u64, u64)]) -> ExtensionMultiset {
        let entries = items
            .iter()
            .map(|&(e, f, c)| (profile(e, f), BigUint::from(c)))
            .collect();
        ExtensionMultiset::new(p, entries).unwrap()
    }

    #[test]
    fn all_tame_ramification_is_lcm() {
        let m = ms(3, &[(2, 1, 1), (4, 1, 1), (5, 1, 1)]);
        assert_eq!(ramification_bound(&m).unwrap(), Factorization::from(20));
        let single = ms(7, &[(6, 2, 1)]);
        assert_eq!(ramification_bound(&single).unwrap(), Factorization::from(6));
    }

    #[test]
    fn wild_ramification_bound() {
        // Tame indices {1,2,4,5} plus a wild index 3 with N(3) = 21.
        let m = ms(3, &[(1, 1, 5), (2, 1, 4), (4, 1, 4), (5, 1, 5), (3, 1, 21)]);
        let expected =
            Factorization::from(60).mul(&Factorization::from(3).pow(&BigUint::from(20u32)));
        assert_eq!(ramification_bound(&m).unwrap(), expected);
        assert_eq!(expected.to_string(), "2^2 * 3^21 * 5");
    }

    #[test]
    fn ramification_minimizes_over_wild_choice() {
        // p = 5 with wild indices 5 and 10: the designated index 10 wins.
        let counts = q5_counts();
        let entries: Vec<_> = counts
            .iter()
            .map(|(&e, c)| (profile(e, 1), c.clone()))
            .collect();
        let m = ExtensionMultiset::new(5, entries).unwrap();
        let bound = ramification_bound(&m).unwrap();
        // Oracle: evaluate both designated choices directly.
        let tame_lcm = 504u64; // lcm(1,2,3,4,6,7,8,9)
        let mut choice10 = Factorization::of(&lcm_u64([tame_lcm, 10])).unwrap();
        choice10 =
            choice10.mul(&Factorization::from(10).pow(&(counts[&10].clone() - BigUint::one())));
        choice10 = choice10.mul(&Factorization::from(5).pow(&counts[&5]));
        let mut choice5 = Factorization::of(&lcm_u64([tame_lcm, 5])).unwrap();
        choice5 = choice5.mul(&Factorization::from(5).pow(&(counts[&5].clone() - BigUint::one())));
        choice5 = choice5.mul(&Factorization::from(10).pow(&counts[&10]));
        assert_eq!(
            choice10.cmp_value(&choice5).unwrap(),
            std::cmp::Ordering::Less
        );
        assert_eq!(bound, choice10);
    }

    fn q5_counts() -> BTreeMap<u64, BigUint> {
        let field = LocalField::new(5, 1).unwrap();
        let mut counts = BTreeMap::new();
        for e in 1..=10u64 {
            let fs: Vec<u64> = (1..=10 / e).collect();
            counts.insert(e, krasner::bound_n_e(&field, e, &fs).unwrap());
        }
        counts
    }

    #[test]
    fn single_extension_bounds_are_trivial() {
        let m = ms(5, &[(4, 3, 1)]);
        assert_eq!(ramification_bound(&m).unwrap(), Factorization::from(4));
        let f_lcm = m.f_lcm();
        assert_eq!(inertia_bound(&m, &f_lcm).unwrap(), Factorization::from(3));
    }

    #[test]
    fn quadratic_family_e_factor() {
        // Two totally ramified quadratics and one unramified quadratic: E = 2.
        let m = ms(5, &[(2, 1, 2), (1, 2, 1)]);
        assert_eq!(e_factor(&m).unwrap(), Factorization::from(2));
        assert_eq!(
            inertia_bound(&m, &m.f_lcm()).unwrap(),
            Factorization::from(4)
        );
    }

    #[test]
    fn two_field_examples() {
        assert_eq!(
            two_field_inertia_bound(&profile(2, 3), &profile(4, 5)),
            BigUint::from(30u32)
        );
        assert_eq!(
            two_field_inertia_bound(&profile(6, 4), &profile(6, 4)),
            BigUint::from(24u32)
        );
        assert_eq!(
            two_field_inertia_bound(&profile(1, 6), &profile(1, 10)),
            BigUint::from(30u32)
        );
    }

    #[test]
    fn crude_bound_examples() {
        let single = crude_bound(&[(7, BigUint::one())]).unwrap();
        assert_eq!(single, Factorization::from(7));
        let field = LocalField::new(11, 1).unwrap();
        let counts: Vec<(u64, BigUint)> = (1..=10)
            .map(|d| (d, krasner::count_extensions(&field, d).unwrap()))
            .collect();
        let crude = crude_bound(&counts).unwrap();
        assert!((crude.log10_f64() - 71.2699167).abs() < 1e-6);
    }

    #[test]
    fn q11_inertia_bound_value() {
        let field = LocalField::new(11, 1).unwrap();
        let rows = krasner::enumerate_profiles(&field, 10).unwrap();
        let m = ExtensionMultiset::new(11, rows).unwrap();
        let refined = inertia_bound(&m, &m.f_lcm()).unwrap();
        // 2520 * 2^5 3^2 5 * prod e^{N(e)-1} = 2^66 * 3^33 * 5^20 * 7^7
        let expected: Factorization = "2^66 * 3^33 * 5^20 * 7^7".parse().unwrap();
        assert_eq!(refined, expected);
    }

    #[test]
    fn wild_branch_matches_hand_value() {
        // Mixed-degree family at p = 3 with N(3) = 21 wild completions.
        let m = ms(3, &[(1, 1, 5), (2, 1, 4), (3, 1, 21), (4, 1, 4), (5, 1, 5)]);
        let e = e_factor(&m).unwrap();
        // lcm part excluded: E = (1/5!) * 2 * 2^4 3^21 4^4 5^5 = 2^10 * 3^20 * 5^4
        let expected: Factorization = "2^10 * 3^20 * 5^4".parse().unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn entry_order_is_irrelevant() {
        let a = ms(3, &[(1, 1, 5), (2, 1, 4), (3, 1, 21), (4, 1, 4), (5, 1, 5)]);
        let b = ms(3, &[(5, 1, 5), (3, 1, 21), (1, 1, 5), (4, 1, 4), (2, 1, 4)]);
        assert_eq!(
            ramification_bound(&a).unwrap(),
            ramification_bound(&b).unwrap()
        );
        assert_eq!(e_factor(&a).unwrap(), e_factor(&b).unwrap());
    }

    #[test]
    fn refined_below_crude() {
        for p in [3u64, 5, 11] {
            let field = LocalField::new(p, 1).unwrap();
            let rows = krasner::enumerate_profiles(&field, 8).unwrap();
            let m = ExtensionMultiset::new(p, rows).unwrap();
            let refined = inertia_bound(&m, &m.f_lcm()).unwrap();
            let counts: Vec<(u64, BigUint)> = (1..=8)
                .map(|d| (d, krasner::count_extensions(&field, d).unwrap()))
                .collect();
            let crude = crude_bound(&counts).unwrap();
            assert_eq!(
                refined.cmp_value(&crude).unwrap(),
                std::cmp::Ordering::Less,
                "p={p}"
            );
        }
    }

    #[test]
    fn equality_case_behaviour() {
        // Pairwise coprime tame indices with coprime inertia degrees.
        let m = ms(7, &[(2, 3, 1), (3, 4, 1), (5, 1, 2)]);
        let (e, f) = equality_case(&m, true).unwrap();
        assert_eq!(e, Factorization::from(30));
        // f = prod e^{N(e)-1} * prod f_i = 5^1 * (3 * 4) = 60
        assert_eq!(f, Factorization::from(60));
        // The inertia bound agrees exactly on equality instances.
        assert_eq!(inertia_bound(&m, &m.f_lcm()).unwrap(), f);

        // Any wild profile disables the equality case.
        let wild = ms(2, &[(2, 1, 1), (3, 1, 1)]);
        assert!(equality_case(&wild, true).is_none());
        // Non-coprime non-equal indices disable it.
        let overlap = ms(7, &[(2, 1, 1), (4, 1, 1)]);
        assert!(equality_case(&overlap, true).is_none());
        // Without the disjointness assertion nothing is produced.
        assert!(equality_case(&m, false).is_none());
        // prod f = lcm f must hold.
        let bad_f = ms(7, &[(2, 3, 1), (3, 3, 1)]);
        assert!(equality_case(&bad_f, true).is_none());
        // Single extension: exact (e, f).
        let single = ms(7, &[(4, 5, 1)]);
        let (e, f) = equality_case(&single, true).unwrap();
        assert_eq!(e, Factorization::from(4));
        assert_eq!(f, Factorization::from(5));
    }

    #[test]
    fn tame_e_factor_matches_gcd_of_products() {
        // With every profile tame, E is exactly the gcd over j of the
        // products prod_{i != j} e_i taken with multiplicity.
        use crate::exactmath::gcd_of_products;
        let cases: [&[(u64, u64)]; 5] = [
            &[(2, 2), (1, 1)],
            &[(2, 3), (4, 2), (5, 1), (6, 1)],
            &[(4, 1), (6, 2), (10, 1)],
            &[(9, 4), (3, 2), (12, 1)],
            &[(7, 1), (7, 1)],
        ];
        for (idx, entries) in cases.iter().enumerate() {
            let m = ExtensionMultiset::new(
                11,
                entries
                    .iter()
                    .map(|&(e, c)| (profile(e, 1), BigUint::from(c)))
                    .collect(),
            )
            .unwrap();
            let expanded: Vec<BigUint> = m
                .entries()
                .iter()
                .flat_map(|(pr, c)| {
                    let reps = num::traits::ToPrimitive::to_u64(c).unwrap();
                    std::iter::repeat_n(BigUint::from(pr.e), reps as usize)
                })
                .collect();
            if expanded.len() < 2 {
                continue;
            }
            let oracle = gcd_of_products(&expanded).unwrap();
            let e = e_factor(&m).unwrap().expand().unwrap();
            assert_eq!(e, oracle, "case {idx}");
        }

        // The degree-<=10 family over the 11-adics, with multiplicity
        // e * floor(10/e) per index: E = 1440 * prod e^{N(e)-1}.
        let q11 = ExtensionMultiset::new(
            11,
            (1..=10u64)
                .map(|e| (profile(e, 1), BigUint::from(e * (10 / e))))
                .collect(),
        )
        .unwrap();
        let expanded: Vec<BigUint> = (1..=10u64)
            .flat_map(|e| std::iter::repeat_n(BigUint::from(e), (e * (10 / e)) as usize))
            .collect();
        assert_eq!(expanded.len(), 87);
        let e = e_factor(&q11).unwrap();
        assert_eq!(e.expand().unwrap(), gcd_of_products(&expanded).unwrap());
        let mut downstream = Factorization::from(1440);
        for e_val in 2..=10u64 {
            downstream = downstream
                .mul(&Factorization::from(e_val).pow(&BigUint::from(e_val * (10 / e_val) - 1)));
        }
        assert_eq!(e, downstream);
    }

    #[test]
    fn wild_minimization_matches_choice_enumeration() {
        // Oracle: evaluate the bound for every admissible designated choice
        // and keep the smallest; the library must agree.
        let m = ms(
            5,
            &[(2, 1, 3), (3, 1, 1), (5, 1, 2), (10, 1, 2), (15, 1, 1)],
        );
        let counts = m.e_counts();
        let tame: Vec<u64> = counts.keys().copied().filter(|e| e % 5 != 0).collect();
        let wild: Vec<u64> = counts.keys().copied().filter(|e| e % 5 == 0).collect();

        // Ramification: every choice of the distinguished wild index.
        let mut best_ram: Option<Factorization> = None;
        for &chosen in &wild {
            let mut cand =
                Factorization::of(&lcm_u64(tame.iter().copied().chain([chosen]))).unwrap();
            cand = cand.mul(
                &Factorization::of_u64(chosen)
                    .unwrap()
                    .pow(&(counts[&chosen].clone() - BigUint::one())),
            );
            for &other in &wild {
                if other != chosen {
                    cand = cand.mul(&Factorization::of_u64(other).unwrap().pow(&counts[&other]));
                }
            }
            best_ram = Some(match best_ram {
                None => cand,
                Some(cur) => match cand.cmp_value(&cur).unwrap() {
                    std::cmp::Ordering::Less => cand,
                    _ => cur,
                },
            });
        }
        assert_eq!(ramification_bound(&m).unwrap(), best_ram.unwrap());

        // Inertia factor: every multiset pair of designated wild indices.
        let mut best_e: Option<Factorization> = None;
        for (i, &w1) in wild.iter().enumerate() {
            for &w2 in &wild[i..] {
                if w1 == w2 && counts[&w1] < BigUint::from(2u32) {
                    continue;
                }
                let head: BTreeSet<u64> = tame.iter().copied().chain([w1, w2]).collect();
                let mut num = Factorization::one();
                for (&e, c) in &counts {
                    num = num.mul(&Factorization::of_u64(e).unwrap().pow(c));
                }
                for &q in &primes_of(&head.iter().copied().collect::<Vec<_>>()) {
                    num = num.mul(
                        &Factorization::of_u64(q)
                            .unwrap()
                            .pow(&BigUint::from(a_of_set(&head, q))),
                    );
                }
                let mut den = Factorization::one();
                for &e in &head {
                    den = den.mul(&Factorization::of_u64(e).unwrap());
                }
                let cand = num.divide_exact(&den).unwrap();
                best_e = Some(match best_e {
                    None => cand,
                    Some(cur) => match cand.cmp_value(&cur).unwrap() {
                        std::cmp::Ordering::Less => cand,
                        _ => cur,
                    },
                });
            }
        }
        assert_eq!(e_factor(&m).unwrap(), best_e.unwrap());
    }

    #[test]
    fn e_factor_division_is_exact() {
        // The 1/e collapse must never drive a prime exponent negative, in
        // either branch, including all-wild multisets with unit counts.
        let probes = [
            ms(2, &[(2, 1, 1), (4, 1, 1), (6, 1, 1), (8, 1, 2)]),
            ms(2, &[(2, 1, 1), (4, 1, 1), (8, 1, 1)]),
            ms(3, &[(3, 1, 1), (6, 2, 1), (9, 1, 1), (2, 1, 1)]),
            ms(5, &[(5, 1, 3)]),
            ms(7, &[(14, 1, 1), (21, 1, 1), (7, 2, 1)]),
        ];
        for m in probes {
            e_factor(&m).unwrap();
        }
    }
}
