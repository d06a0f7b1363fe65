//! Pure Sullivan models of homogeneous spaces `G/K`, the splitting criterion
//! for formality, criteria for equivariant formality of the isotropy action,
//! and a brute-force cohomology oracle.

mod degrees;
mod dga;
mod equivariant;
mod express;
pub mod series;
mod splitting;
mod verdict;

use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;
use crate::liegroups::{substitute_linear, Embedding, GroupDatum, TorusMap};

pub use degrees::{degree_reasoning_check, equal_rank_by_degrees, DegreeFact};
pub use dga::{
    build_borel_model, build_invariant_borel_model, cartan_pure_model, default_surjectivity_degree,
    dga_cohomology_upto, verify_fiber_surjectivity, witness_surjectivity_degree, BorelModel,
    PureModel, DEFAULT_BASIS_LIMIT,
};
pub use equivariant::{
    check_equivariant_formality, verify_equivariant_witness, EquivariantOutcome,
};
pub use express::{check_expression, express_in, weighted_exponents};
pub use splitting::{
    analyze, analyze_with, check_formality, find_splitting, find_splitting_with, poincare_series,
    verify_splitting, FormalityOutcome, SearchBudget,
};
pub use verdict::{
    Answer, BorelCertificate, BorelEvidence, DegreeCandidate, DegreeWitness, EquivariantWitness,
    MembershipRecord, ProductWitness, Route, SplittingWitness, TransferWitness, Verdict, Witness,
};

/// The model `(H*(BK) ⊗ ΛV_G, d)` with `d v_j = psi_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanModel {
    pub group: GroupDatum,
    pub base: GroupDatum,
    pub map: TorusMap,
    pub recipe: String,
    /// Degrees of the odd generators `v_j`.
    pub fiber_degrees: Vec<u32>,
    /// `psi_j` in the reduced torus variables of K.
    pub images: Vec<Polynomial>,
    pub corank: usize,
}

impl CartanModel {
    pub fn label(&self) -> String {
        format!("{}/{}", self.group.label, self.base.label)
    }

    pub fn nvars(&self) -> usize {
        self.base.rank
    }

    pub fn image_degrees(&self) -> Vec<u32> {
        self.fiber_degrees.iter().map(|d| d + 1).collect()
    }

    /// `dim G - dim K`, the top degree of `H*(G/K)`.
    pub fn formal_dimension(&self) -> u32 {
        self.group.dimension() - self.base.dimension()
    }

    /// Whether every image is a polynomial in K's invariant generators.
    pub fn images_are_invariant(&self) -> Result<bool> {
        let gens = self.base.invariants()?;
        for psi in &self.images {
            if express_in(psi, gens)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same model with G's generators listed in another order.
    pub fn permuted(&self, order: &[usize]) -> Result<CartanModel> {
        let mut seen = vec![false; self.images.len()];
        if order.len() != seen.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::OutOfRange(
                "not a permutation of the generators".into(),
            ));
        }
        Ok(CartanModel {
            fiber_degrees: order.iter().map(|&i| self.fiber_degrees[i]).collect(),
            images: order.iter().map(|&i| self.images[i].clone()).collect(),
            ..self.clone()
        })
    }
}

/// Restricts each invariant generator of G along `map` (rows: G's reduced
/// coordinates, columns: K's reduced coordinates).
pub fn build_model(g: &GroupDatum, k: &GroupDatum, map: &TorusMap) -> Result<CartanModel> {
    let gens = g.invariants()?;
    if k.rank > g.rank {
        return Err(Error::RankMismatch(format!(
            "{} has rank {} but {} has rank {}",
            k.label, k.rank, g.label, g.rank
        )));
    }
    if map.source_rank != g.rank || map.target_rank != k.rank {
        return Err(Error::RankMismatch(format!(
            "torus map is {} x {}, expected {} x {}",
            map.source_rank, map.target_rank, g.rank, k.rank
        )));
    }
    let images = gens
        .iter()
        .map(|p| substitute_linear(p, map))
        .collect::<Result<Vec<_>>>()?;
    Ok(CartanModel {
        group: g.clone(),
        base: k.clone(),
        map: map.clone(),
        recipe: String::new(),
        fiber_degrees: g.generator_degrees.iter().map(|d| d - 1).collect(),
        images,
        corank: g.rank - k.rank,
    })
}

pub fn build_model_from_embedding(e: &Embedding) -> Result<CartanModel> {
    let mut m = build_model(&e.group, &e.subgroup, &e.map)?;
    m.recipe = e.recipe.clone();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroups::{embed_recipe, make_group};

    pub(crate) fn model(g: &str, k: &str, recipe: &str) -> CartanModel {
        let g = make_group(g).unwrap();
        let k = make_group(k).unwrap();
        build_model_from_embedding(&embed_recipe(recipe, &g, &k).unwrap()).unwrap()
    }

    fn texts(m: &CartanModel) -> Vec<String> {
        m.images.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn symplectic_double_block() {
        let m = model("Sp(2)", "Sp(1)", "diagonal-double-block");
        assert_eq!(texts(&m), vec!["2*t1^2", "t1^4"]);
        assert_eq!(m.fiber_degrees, vec![3, 7]);
        assert_eq!(m.corank, 1);
        assert!(m.images_are_invariant().unwrap());
    }

    #[test]
    fn real_in_complex_rank_one() {
        let m = model("SU(3)", "SO(3)", "real-in-complex");
        assert_eq!(texts(&m), vec!["-t1^2", "0"]);
        assert_eq!(m.fiber_degrees, vec![3, 5]);
    }

    #[test]
    fn identity_embedding() {
        let m = model("SU(3)", "SU(3)", "identity");
        let g = make_group("SU(3)").unwrap();
        assert_eq!(m.images, g.invariants().unwrap().to_vec());
        assert_eq!(m.corank, 0);
    }

    #[test]
    fn degree_only_group_is_rejected() {
        let g = make_group("E6").unwrap();
        let k = make_group("F4").unwrap();
        let map = TorusMap::unchecked(vec![vec![0; 4]; 6], 6, 4).unwrap();
        assert!(matches!(
            build_model(&g, &k, &map),
            Err(Error::DegreeOnly(_))
        ));
    }
}
