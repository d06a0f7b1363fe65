//! The formality criterion: a regular subset of images of size rk K with
//! every other image in the ideal it generates.

use std::time::{Duration, Instant};

use super::equivariant::check_equivariant_formality;
use super::series::{self, Series};
use super::verdict::{Answer, MembershipRecord, SplittingWitness, Verdict, Witness};
use super::CartanModel;
use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;
use crate::groebner::{
    cached_basis, hilbert_numerator, hilbert_series, is_zero_dimensional, normal_form,
    GroebnerBasis,
};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub deadline: Option<Instant>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { deadline: None }
    }

    pub fn within(d: Duration) -> Self {
        SearchBudget {
            deadline: Some(Instant::now() + d),
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() > d)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::within(DEFAULT_BUDGET)
    }
}

fn combinations(pool: &[usize], r: usize) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < r - cur.len() {
                break;
            }
            cur.push(pool[i]);
            go(pool, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, r, 0, &mut Vec::new(), &mut out);
    out
}

/// Candidate regular subsets in search order: subsets whose degrees equal
/// those of H*(BK) first, then by degree sum, then lexicographically.
fn candidate_subsets(m: &CartanModel) -> Vec<Vec<usize>> {
    let degrees = m.image_degrees();
    let nonzero: Vec<usize> = (0..m.images.len())
        .filter(|&i| !m.images[i].is_zero())
        .collect();
    let mut target = m.base.generator_degrees.clone();
    target.sort_unstable();
    let mut subsets = combinations(&nonzero, m.nvars());
    subsets.sort_by_cached_key(|s| {
        let mut d: Vec<u32> = s.iter().map(|&i| degrees[i]).collect();
        d.sort_unstable();
        let sum: u32 = d.iter().sum();
        (d != target, sum, s.clone())
    });
    subsets
}

fn redundant_in_order(m: &CartanModel, regular: &[usize]) -> Vec<usize> {
    let degrees = m.image_degrees();
    let mut rest: Vec<usize> = (0..m.images.len())
        .filter(|i| !regular.contains(i))
        .collect();
    rest.sort_by_key(|&i| (degrees[i], i));
    rest
}

fn regular_basis(m: &CartanModel, regular: &[usize]) -> Result<std::sync::Arc<GroebnerBasis>> {
    let polys: Vec<Polynomial> = regular.iter().map(|&i| m.images[i].clone()).collect();
    cached_basis(&polys, m.nvars())
}

fn try_subset(m: &CartanModel, regular: &[usize]) -> Result<Option<SplittingWitness>> {
    let gb = regular_basis(m, regular)?;
    if gb.is_unit_ideal() || !is_zero_dimensional(&gb) {
        return Ok(None);
    }
    let order = redundant_in_order(m, regular);
    let mut certs = Vec::with_capacity(order.len());
    for &j in &order {
        let nf = normal_form(&m.images[j], &gb)?;
        if !nf.is_zero() {
            return Ok(None);
        }
        certs.push(MembershipRecord {
            index: j,
            image: m.images[j].to_string(),
            remainder: nf.to_string(),
        });
    }
    Ok(Some(SplittingWitness {
        nvars: m.nvars(),
        regular_subset: regular.to_vec(),
        redundant_order: order,
        regular_basis: gb.generators().iter().map(|g| g.to_string()).collect(),
        membership_certificates: certs,
    }))
}

/// Calls `visit` on every splitting in search order until it returns true.
/// Returns `Ok(false)` when the budget ran out first.
pub(crate) fn for_each_splitting(
    m: &CartanModel,
    budget: SearchBudget,
    mut visit: impl FnMut(SplittingWitness) -> Result<bool>,
) -> Result<bool> {
    for subset in candidate_subsets(m) {
        if budget.expired() {
            return Ok(false);
        }
        if let Some(w) = try_subset(m, &subset)? {
            if visit(w)? {
                return Ok(true);
            }
        }
    }
    Ok(true)
}

pub fn find_splitting_with(
    m: &CartanModel,
    budget: SearchBudget,
) -> Result<Option<SplittingWitness>> {
    let mut found = None;
    for_each_splitting(m, budget, |w| {
        found = Some(w);
        Ok(true)
    })?;
    Ok(found)
}

pub fn find_splitting(m: &CartanModel) -> Result<Option<SplittingWitness>> {
    find_splitting_with(m, SearchBudget::default())
}

/// Recomputes every part of a splitting witness from the model.
pub fn verify_splitting(m: &CartanModel, w: &SplittingWitness) -> Result<bool> {
    let n = m.images.len();
    let mut all: Vec<usize> = w
        .regular_subset
        .iter()
        .chain(&w.redundant_order)
        .copied()
        .collect();
    all.sort_unstable();
    if w.nvars != m.nvars()
        || w.regular_subset.len() != m.nvars()
        || all != (0..n).collect::<Vec<_>>()
        || w.membership_certificates.len() != w.redundant_order.len()
    {
        return Ok(false);
    }
    let gb = regular_basis(m, &w.regular_subset)?;
    let text: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
    if text != w.regular_basis || gb.is_unit_ideal() || !is_zero_dimensional(&gb) {
        return Ok(false);
    }
    for (cert, &j) in w.membership_certificates.iter().zip(&w.redundant_order) {
        if cert.index != j || cert.image != m.images[j].to_string() {
            return Ok(false);
        }
        let nf = normal_form(&m.images[j], &gb)?;
        if !nf.is_zero() || cert.remainder != "0" {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `prod_{j in S}(1 - q^{d_j}) / prod_i (1 - q^{e_i}) * prod_{j not in S}(1 + q^{d_j - 1})`,
/// cross-checked against the leading-term ideal of the regular images.
pub fn poincare_series(m: &CartanModel, w: &SplittingWitness) -> Result<Series> {
    let degrees = m.image_degrees();
    let reg: Vec<u32> = w.regular_subset.iter().map(|&i| degrees[i]).collect();
    let red: Vec<u32> = w.redundant_order.iter().map(|&i| degrees[i] - 1).collect();
    let base = &m.base.generator_degrees;
    let elliptic = series::divide_exact(
        &series::product_one_minus(&reg),
        &series::product_one_minus(base),
    )
    .ok_or_else(|| {
        Error::Inconsistent(format!(
            "{}: elliptic factor is not a polynomial",
            m.label()
        ))
    })?;
    if elliptic.iter().any(|&c| c < 0) {
        return Err(Error::Inconsistent(format!(
            "{}: negative Betti number",
            m.label()
        )));
    }

    let gb = regular_basis(m, &w.regular_subset)?;
    let numerator = hilbert_numerator(&gb.leading_monomials());
    let halves: Vec<u32> = reg.iter().map(|d| d / 2).collect();
    if series::trim(numerator) != series::product_one_minus(&halves) {
        return Err(Error::Inconsistent(format!(
            "{}: leading-term ideal is not a complete intersection of the expected degrees",
            m.label()
        )));
    }
    // Q[t]/(psi_S) is free over H*(BK)/(psi_S) with basis counted by
    // prod_i (1 + q^2 + ... + q^{e_i - 2}).
    let mut torus = elliptic.clone();
    for &e in base {
        let block: Series = (0..e as usize - 1)
            .map(|k| i128::from(k % 2 == 0))
            .collect();
        torus = series::mul(&torus, &block);
    }
    let computed = hilbert_series(&gb, torus.len() - 1);
    let computed: Series = computed.into_iter().map(|c| c as i128).collect();
    if series::trim(computed) != torus {
        return Err(Error::Inconsistent(format!(
            "{}: Hilbert series disagrees with the degree formula",
            m.label()
        )));
    }
    Ok(series::mul(&elliptic, &series::product_one_plus(&red)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalityOutcome {
    pub formal: Answer,
    pub witness: Option<SplittingWitness>,
    pub poincare: Option<Series>,
    pub notes: Vec<String>,
}

pub fn check_formality(m: &CartanModel) -> Result<FormalityOutcome> {
    check_formality_with(m, SearchBudget::default())
}

fn check_formality_with(m: &CartanModel, budget: SearchBudget) -> Result<FormalityOutcome> {
    let mut found = None;
    let finished = for_each_splitting(m, budget, |w| {
        found = Some(w);
        Ok(true)
    })?;
    match found {
        Some(w) => {
            let p = poincare_series(m, &w)?;
            Ok(FormalityOutcome {
                formal: Answer::Yes,
                witness: Some(w),
                poincare: Some(p),
                notes: Vec::new(),
            })
        }
        None => Ok(FormalityOutcome {
            formal: Answer::NoWitnessFound,
            witness: None,
            poincare: None,
            notes: vec![if finished {
                "no regular subset splits the model".into()
            } else {
                "splitting search ran out of time".into()
            }],
        }),
    }
}

/// Formality and equivariant formality in one pass. Splittings are tried in
/// search order until one also passes the equivariant criteria.
pub fn analyze(m: &CartanModel) -> Result<Verdict> {
    analyze_with(m, SearchBudget::default())
}

pub fn analyze_with(m: &CartanModel, budget: SearchBudget) -> Result<Verdict> {
    let mut first: Option<SplittingWitness> = None;
    let mut accepted = None;
    let finished = for_each_splitting(m, budget, |w| {
        let eq = check_equivariant_formality(m, &w)?;
        if first.is_none() {
            first = Some(w.clone());
        }
        if eq.answer.is_yes() {
            accepted = Some((w, eq));
            return Ok(true);
        }
        Ok(false)
    })?;
    let space = m.label();
    let mut notes = Vec::new();
    if !m.recipe.is_empty() {
        notes.push(format!("embedding: {}", m.recipe));
    }
    if let Some((w, eq)) = accepted {
        let p = poincare_series(m, &w)?;
        notes.push(
            "regular subset: first success in search order (degree match, degree sum, index)"
                .into(),
        );
        return Ok(Verdict {
            space,
            formal: Answer::Yes,
            equivariantly_formal: Answer::Yes,
            route: eq.route,
            poincare: Some(
                series::to_counts(&p)
                    .ok_or_else(|| Error::Inconsistent("negative Betti number".into()))?,
            ),
            witness: Some(Witness::Splitting {
                splitting: w,
                equivariant: eq.witness,
            }),
            notes,
        });
    }
    if !finished {
        notes.push("search budget exhausted".into());
    }
    match first {
        Some(w) => {
            let p = poincare_series(m, &w)?;
            notes.push(
                "formal, but no ordering of the redundant images passed the Borel membership test"
                    .into(),
            );
            Ok(Verdict {
                space,
                formal: Answer::Yes,
                equivariantly_formal: Answer::NoWitnessFound,
                route: None,
                poincare: series::to_counts(&p),
                witness: Some(Witness::Splitting {
                    splitting: w,
                    equivariant: None,
                }),
                notes,
            })
        }
        None => {
            notes.push("no splitting found".into());
            Ok(Verdict {
                space,
                formal: Answer::NoWitnessFound,
                equivariantly_formal: Answer::NoWitnessFound,
                route: None,
                witness: None,
                poincare: None,
                notes,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::model;
    use super::*;

    #[test]
    fn symplectic_double_block_splits() {
        let m = model("Sp(2)", "Sp(1)", "diagonal-double-block");
        let w = find_splitting(&m).unwrap().unwrap();
        assert_eq!(w.regular_subset, vec![0]);
        assert_eq!(w.redundant_order, vec![1]);
        assert!(verify_splitting(&m, &w).unwrap());
        assert_eq!(
            poincare_series(&m, &w).unwrap(),
            series::product_one_plus(&[7])
        );
    }

    #[test]
    fn rank_one_real_form() {
        let m = model("SU(3)", "SO(3)", "real-in-complex");
        let f = check_formality(&m).unwrap();
        assert_eq!(f.formal, Answer::Yes);
        assert_eq!(f.poincare.unwrap(), series::product_one_plus(&[5]));
    }

    #[test]
    fn real_in_quaternionic() {
        let m = model("Sp(3)", "SO(3)", "real-in-quaternionic");
        let texts: Vec<String> = m.images.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["t1^2", "0", "0"]);
        let f = check_formality(&m).unwrap();
        assert_eq!(f.poincare.unwrap(), series::product_one_plus(&[7, 11]));
    }

    #[test]
    fn quaternionic_double_block_is_free() {
        let m = model("Sp(4)", "Sp(2)", "diagonal-double-block");
        let f = check_formality(&m).unwrap();
        assert_eq!(f.poincare.unwrap(), series::product_one_plus(&[11, 15]));
    }

    #[test]
    fn equal_rank_flag_manifold() {
        let m = model("SU(3)", "T^2", "maximal-torus");
        let w = find_splitting(&m).unwrap().unwrap();
        assert_eq!(w.regular_subset, vec![0, 1]);
        assert!(w.redundant_order.is_empty());
        let p = poincare_series(&m, &w).unwrap();
        assert_eq!(p, vec![1, 0, 2, 0, 2, 0, 1]);
    }

    #[test]
    fn tampered_witness_fails() {
        let m = model("Sp(2)", "Sp(1)", "diagonal-double-block");
        let mut w = find_splitting(&m).unwrap().unwrap();
        w.regular_basis[0] = "t1^3".into();
        assert!(!verify_splitting(&m, &w).unwrap());
    }

    #[test]
    fn nonsplitting_model_is_inconclusive() {
        // only one nonzero image for a rank-2 base
        let mut m = model("SU(3)", "T^2", "maximal-torus");
        m.images[1] = Polynomial::zero(2);
        let f = check_formality(&m).unwrap();
        assert_eq!(f.formal, Answer::NoWitnessFound);
    }
}
