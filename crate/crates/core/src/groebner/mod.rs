//! Gröbner bases over the rationals for homogeneous ideals in torus variables.

mod hilbert;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{Monomial, Polynomial, Rational};

pub(crate) use hilbert::{divide_by_one_minus_z, hilbert_numerator, series_from_numerator};

/// The fixed module-wide order: graded reverse lexicographic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder;

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    generators: Vec<Polynomial>,
    source: Vec<Polynomial>,
    order: MonomialOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite(u128),
    Infinite,
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Reduced, monic, sorted by increasing leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn source_ideal(&self) -> &[Polynomial] {
        &self.source
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant())
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let lf = f.leading_monomial().unwrap();
    let lg = g.leading_monomial().unwrap();
    let l = lf.lcm(lg);
    let a = f.mul_term(
        &lf.quotient_of(&l),
        &g.leading_coefficient().unwrap().clone(),
    );
    let b = g.mul_term(
        &lg.quotient_of(&l),
        &f.leading_coefficient().unwrap().clone(),
    );
    &a - &b
}

/// Full reduction of `p` by monic `basis`; returns the remainder.
fn reduce(p: &Polynomial, basis: &[&Polynomial]) -> Polynomial {
    let nvars = p.nvars();
    if p.is_zero() || basis.is_empty() {
        return p.clone();
    }
    let mut work: BTreeMap<Monomial, Rational> = p.terms().iter().cloned().collect();
    let mut remainder: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        let reducer = basis
            .iter()
            .find(|g| g.leading_monomial().map(|l| l.divides(&m)).unwrap_or(false));
        match reducer {
            None => remainder.push((m, c)),
            Some(g) => {
                let shift = g.leading_monomial().unwrap().quotient_of(&m);
                // g is monic: subtract c * shift * g, skipping the leading term
                for (gm, gc) in &g.terms()[1..] {
                    let key = gm.mul(&shift);
                    let delta = &c * gc;
                    match work.get_mut(&key) {
                        Some(v) => {
                            *v -= delta;
                            if v.is_zero() {
                                work.remove(&key);
                            }
                        }
                        None => {
                            work.insert(key, -delta);
                        }
                    }
                }
            }
        }
    }
    Polynomial::from_sorted_unchecked(nvars, remainder)
}

fn check_inputs(gens: &[Polynomial]) -> Result<usize> {
    let nvars = gens.first().map(|g| g.nvars()).unwrap_or(0);
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::VariableCountMismatch {
                left: nvars,
                right: g.nvars(),
            });
        }
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous(g.to_string()));
        }
    }
    Ok(nvars)
}

#[derive(Clone, Debug)]
struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Buchberger's algorithm with the Gebauer–Möller pair criteria and the
/// normal selection strategy. The result is the reduced basis.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    let nvars = check_inputs(gens)?;
    buchberger_in(gens, nvars, order)
}

/// As [`buchberger`], with the variable count given explicitly (needed for empty input).
pub fn buchberger_in(
    gens: &[Polynomial],
    nvars: usize,
    order: MonomialOrder,
) -> Result<GroebnerBasis> {
    check_inputs(gens)?;
    if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::VariableCountMismatch {
            left: nvars,
            right: g.nvars(),
        });
    }
    let mut polys: Vec<Polynomial> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let insert = |h: Polynomial,
                  polys: &mut Vec<Polynomial>,
                  active: &mut Vec<usize>,
                  pairs: &mut Vec<Pair>| {
        let hi = polys.len();
        let lh = h.leading_monomial().unwrap().clone();
        polys.push(h);
        gebauer_moller_update(hi, &lh, polys, active, pairs);
    };

    let mut sorted: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    sorted.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    for g in sorted {
        let basis: Vec<&Polynomial> = active.iter().map(|&k| &polys[k]).collect();
        let r = reduce(&g, &basis);
        if !r.is_zero() {
            insert(r.monic(), &mut polys, &mut active, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index for determinism
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.cmp(&b.lcm).then(a.j.cmp(&b.j)).then(a.i.cmp(&b.i)))
            .unwrap();
        let pair = pairs.swap_remove(best);
        let s = s_polynomial(&polys[pair.i], &polys[pair.j]);
        let basis: Vec<&Polynomial> = active.iter().map(|&k| &polys[k]).collect();
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            if r.is_constant() {
                return Ok(GroebnerBasis {
                    nvars,
                    generators: vec![Polynomial::one(nvars)],
                    source: gens.to_vec(),
                    order,
                });
            }
            insert(r.monic(), &mut polys, &mut active, &mut pairs);
        }
    }

    let minimal: Vec<Polynomial> = active.iter().map(|&k| polys[k].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (idx, g) in minimal.iter().enumerate() {
        let others: Vec<&Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, p)| p)
            .collect();
        let lead = Polynomial::monomial(
            g.leading_monomial().unwrap().clone(),
            Rational::from_integer(1.into()),
        );
        let tail = g - &lead;
        let r = &lead + &reduce(&tail, &others);
        reduced.push(r);
    }
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    Ok(GroebnerBasis {
        nvars,
        generators: reduced,
        source: gens.to_vec(),
        order,
    })
}

fn gebauer_moller_update(
    hi: usize,
    lh: &Monomial,
    polys: &[Polynomial],
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
) {
    let lead = |k: usize| polys[k].leading_monomial().unwrap();

    let candidates: Vec<Pair> = active
        .iter()
        .map(|&g| Pair {
            lcm: lh.lcm(lead(g)),
            i: g,
            j: hi,
        })
        .collect();

    // chain criterion on the new pairs, then the product criterion
    let mut kept: Vec<Pair> = Vec::new();
    for (a, p) in candidates.iter().enumerate() {
        let coprime = lh.is_coprime(lead(p.i));
        let dominated = candidates[a + 1..]
            .iter()
            .chain(kept.iter())
            .any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p.clone());
        }
    }
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|p| !lh.is_coprime(lead(p.i)))
        .collect();

    pairs.retain(|p| {
        !(lh.divides(&p.lcm) && lh.lcm(lead(p.i)) != p.lcm && lh.lcm(lead(p.j)) != p.lcm)
    });
    pairs.extend(new_pairs);

    active.retain(|&g| !lh.divides(lead(g)));
    active.push(hi);
}

/// Memoized `buchberger_in`, keyed by the generators' canonical text.
/// Catalog instances sharing an ideal reuse one computation.
pub fn cached_basis(gens: &[Polynomial], nvars: usize) -> Result<Arc<GroebnerBasis>> {
    type Cache = Mutex<HashMap<(usize, Vec<String>), Arc<GroebnerBasis>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (
        nvars,
        gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    );
    let cache = CACHE.get_or_init(Default::default);
    if let Some(gb) = cache.lock().unwrap().get(&key) {
        return Ok(gb.clone());
    }
    let gb = Arc::new(buchberger_in(gens, nvars, MonomialOrder)?);
    cache.lock().unwrap().insert(key, gb.clone());
    Ok(gb)
}

pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    if p.nvars() != gb.nvars {
        return Err(Error::VariableCountMismatch {
            left: p.nvars(),
            right: gb.nvars,
        });
    }
    let basis: Vec<&Polynomial> = gb.generators.iter().collect();
    Ok(reduce(p, &basis))
}

/// Outcome of an ideal-membership query with its re-checkable evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub member: bool,
    /// Normal form of the query modulo the basis (zero iff member).
    pub remainder: Polynomial,
    pub basis: GroebnerBasis,
}

impl MembershipCertificate {
    /// Re-derives the verdict from the recorded basis.
    pub fn recheck(&self, p: &Polynomial) -> Result<bool> {
        let nf = normal_form(p, &self.basis)?;
        Ok(nf == self.remainder && nf.is_zero() == self.member)
    }
}

pub fn ideal_member(p: &Polynomial, gens: &[Polynomial]) -> Result<MembershipCertificate> {
    let basis = buchberger_in(gens, p.nvars(), MonomialOrder)?;
    let remainder = normal_form(p, &basis)?;
    Ok(MembershipCertificate {
        member: remainder.is_zero(),
        remainder,
        basis,
    })
}

pub fn is_zero_dimensional(gb: &GroebnerBasis) -> bool {
    if gb.is_unit_ideal() {
        return true;
    }
    let mut seen = vec![false; gb.nvars];
    for m in gb.leading_monomials() {
        if let Some(i) = m.pure_power_variable() {
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

fn numerator(gb: &GroebnerBasis) -> Vec<i128> {
    hilbert_numerator(&gb.leading_monomials())
}

pub fn staircase_dimension(gb: &GroebnerBasis) -> QuotientDimension {
    if gb.is_unit_ideal() {
        return QuotientDimension::Finite(0);
    }
    if !is_zero_dimensional(gb) {
        return QuotientDimension::Infinite;
    }
    match divide_by_one_minus_z(&numerator(gb), gb.nvars) {
        Some(q) => QuotientDimension::Finite(q.iter().sum::<i128>() as u128),
        None => QuotientDimension::Infinite,
    }
}

/// Counts of standard monomials per cohomological degree `0..=max_degree`
/// (odd degrees are always zero since torus variables have degree 2).
pub fn hilbert_series(gb: &GroebnerBasis, max_degree: usize) -> Vec<u128> {
    let series = if gb.is_unit_ideal() {
        vec![0; max_degree / 2 + 1]
    } else {
        series_from_numerator(&numerator(gb), gb.nvars, max_degree / 2)
    };
    let mut out = vec![0u128; max_degree + 1];
    for (k, c) in series.into_iter().enumerate() {
        out[2 * k] = c as u128;
    }
    out
}

/// Zero-dimensionality test for a square homogeneous system.
pub fn is_regular_system(polys: &[Polynomial]) -> Result<bool> {
    let nvars = polys.first().map(|p| p.nvars()).unwrap_or(0);
    if polys.len() != nvars {
        return Err(Error::RegularSystemShape {
            polys: polys.len(),
            vars: nvars,
        });
    }
    let gb = buchberger_in(polys, nvars, MonomialOrder)?;
    Ok(is_zero_dimensional(&gb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    fn gb(gens: &[&str], n: usize) -> GroebnerBasis {
        let g: Vec<Polynomial> = gens.iter().map(|s| p(s, n)).collect();
        buchberger_in(&g, n, MonomialOrder).unwrap()
    }

    #[test]
    fn variables_form_a_basis() {
        let b = gb(&["t1", "t2"], 2);
        assert_eq!(b.generators(), &[p("t2", 2), p("t1", 2)]);
        assert_eq!(staircase_dimension(&b), QuotientDimension::Finite(1));
    }

    #[test]
    fn zero_ideal_has_empty_basis() {
        let b = gb(&["0"], 2);
        assert!(b.generators().is_empty());
        assert_eq!(hilbert_series(&b, 4), vec![1, 0, 2, 0, 3]);
        assert_eq!(staircase_dimension(&b), QuotientDimension::Infinite);
    }

    #[test]
    fn squares_sum_and_product() {
        let b = gb(&["t1^2 + t2^2", "t1^2*t2^2"], 2);
        assert!(is_zero_dimensional(&b));
        let leads = b.leading_monomials();
        assert!(leads.iter().any(|m| m.pure_power_variable() == Some(0)));
        assert!(leads.iter().any(|m| m.pure_power_variable() == Some(1)));
        assert_eq!(staircase_dimension(&b), QuotientDimension::Finite(8));
        // (1-q^4)(1-q^8)/(1-q^2)^2 = 1 + 2q^2 + 2q^4 + 2q^6 + q^8
        assert_eq!(
            hilbert_series(&b, 10),
            vec![1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 0]
        );
    }

    #[test]
    fn division_by_sum_of_squares() {
        let b = gb(&["t1^2 + t2^2"], 2);
        assert_eq!(normal_form(&p("t1^4", 2), &b).unwrap(), p("t2^4", 2));
        assert_eq!(
            normal_form(&p("1", 2), &gb(&["t1", "t2"], 2)).unwrap(),
            p("1", 2)
        );
    }

    #[test]
    fn normal_form_is_idempotent_and_kills_sources() {
        let b = gb(&["t1^2 - t2*t3", "t2^3 + t1*t3^2", "t3^2*t1"], 3);
        for s in b.source_ideal() {
            assert!(normal_form(s, &b).unwrap().is_zero());
        }
        let q = p("t1^5 + 3*t2^5 - t1*t2*t3^3", 3);
        let nf = normal_form(&q, &b).unwrap();
        assert_eq!(normal_form(&nf, &b).unwrap(), nf);
    }

    #[test]
    fn s_polynomials_reduce_to_zero() {
        let b = gb(&["t1^3 - t2^2*t3", "t1*t2*t3 - t3^3", "t2^3 - t1^2*t3"], 3);
        let refs: Vec<&Polynomial> = b.generators().iter().collect();
        for i in 0..refs.len() {
            for j in i + 1..refs.len() {
                assert!(reduce(&s_polynomial(refs[i], refs[j]), &refs).is_zero());
            }
        }
    }

    #[test]
    fn membership_examples() {
        let c = ideal_member(&p("t1^2", 1), &[p("2*t1", 1)]).unwrap();
        assert!(c.member);
        assert!(c.recheck(&p("t1^2", 1)).unwrap());
        let c = ideal_member(&p("t1", 2), &[p("t2", 2)]).unwrap();
        assert!(!c.member);
        // Pfaffian image s1^2 s2^2 against s1 s2
        let c = ideal_member(&p("t1^2*t2^2", 2), &[p("t1*t2", 2)]).unwrap();
        assert!(c.member);
    }

    #[test]
    fn su3_coinvariants() {
        // e2, e3 of (t1, t2, -t1-t2)
        let e2 = p("-t1^2 - t1*t2 - t2^2", 2);
        let e3 = p("-t1^2*t2 - t1*t2^2", 2);
        let b = buchberger(&[e2.clone(), e3.clone()], MonomialOrder).unwrap();
        assert!(is_zero_dimensional(&b));
        assert_eq!(staircase_dimension(&b), QuotientDimension::Finite(6));
        assert!(is_regular_system(&[e2, e3]).unwrap());
    }

    #[test]
    fn regular_system_shapes() {
        assert!(is_regular_system(&[p("t1^2", 2), p("t2^2", 2)]).unwrap());
        assert!(!is_regular_system(&[p("t1", 2), p("t1*t2", 2)]).unwrap());
        assert!(is_regular_system(&[p("2*t1^2", 1)]).unwrap());
        assert!(matches!(
            is_regular_system(&[p("t1", 2)]),
            Err(Error::RegularSystemShape { .. })
        ));
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        assert!(matches!(
            buchberger(&[p("t1^2 + t2", 2)], MonomialOrder),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn monomial_ideal_series() {
        let b = gb(&["t1^2"], 1);
        assert_eq!(hilbert_series(&b, 6), vec![1, 0, 1, 0, 0, 0, 0]);
    }
}
