//! One space `G/K` named by labels: the entry point shared by the CLI and the
//! Python bindings.

use std::time::Duration;

use crate::cartanmodel::{
    analyze_with, build_borel_model, build_invariant_borel_model, build_model_from_embedding,
    degree_reasoning_check, dga_cohomology_upto, equal_rank_by_degrees, verify_fiber_surjectivity,
    CartanModel, DegreeFact, SearchBudget, Verdict,
};
use crate::error::{Error, Result};
use crate::liegroups::{check_inclusion_possible, embed_recipe, make_group, GroupDatum};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceQuery {
    pub group: String,
    pub subgroup: String,
    /// Recipe `kind` or `kind@H > kind`; required when both groups are explicit.
    pub embedding: Option<String>,
    pub facts: Vec<DegreeFact>,
    pub budget: Duration,
}

impl SpaceQuery {
    pub fn new(group: &str, subgroup: &str, embedding: Option<&str>) -> SpaceQuery {
        SpaceQuery {
            group: group.into(),
            subgroup: subgroup.into(),
            embedding: embedding.map(String::from),
            facts: Vec::new(),
            budget: Duration::from_secs(60),
        }
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.group, self.subgroup)
    }

    fn groups(&self) -> Result<(GroupDatum, GroupDatum)> {
        let g = make_group(&self.group)?;
        let k = make_group(&self.subgroup)?;
        check_inclusion_possible(&g, &k)?;
        Ok((g, k))
    }

    /// The Cartan model; only for explicit groups.
    pub fn model(&self) -> Result<CartanModel> {
        let (g, k) = self.groups()?;
        self.explicit_model(&g, &k)
    }

    fn explicit_model(&self, g: &GroupDatum, k: &GroupDatum) -> Result<CartanModel> {
        let recipe = self.embedding.as_deref().ok_or_else(|| {
            Error::Embedding(format!("{} in {} needs an embedding", k.label, g.label))
        })?;
        build_model_from_embedding(&embed_recipe(recipe, g, k)?)
    }
}

/// Decides formality and equivariant formality, through the Cartan model
/// for explicit groups and through degrees otherwise.
pub fn check_space(q: &SpaceQuery) -> Result<Verdict> {
    let (g, k) = q.groups()?;
    let label = q.label();
    if g.is_explicit() && k.is_explicit() {
        let m = q.explicit_model(&g, &k)?;
        let mut v = analyze_with(&m, SearchBudget::within(q.budget))?;
        v.space = label;
        return Ok(v);
    }
    if q.embedding.is_some() {
        let which = if g.is_explicit() { &k.label } else { &g.label };
        return Err(Error::Embedding(format!(
            "{label}: {which} is known by its degrees only, so no embedding can be applied"
        )));
    }
    if g.rank == k.rank {
        return equal_rank_by_degrees(&label, &g.generator_degrees, &k.generator_degrees);
    }
    degree_reasoning_check(&label, &g.generator_degrees, &k.generator_degrees, &q.facts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorelBase {
    /// Two copies of the torus ring of K.
    Torus,
    /// Two copies of the invariant ring of K.
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub betti: Vec<u64>,
    /// Restriction to the fiber is onto in every degree up to the bound.
    pub surjective: bool,
}

/// Brute-force Betti numbers and fiber-restriction surjectivity up to `max_degree`.
pub fn oracle_space(q: &SpaceQuery, max_degree: u32, base: BorelBase) -> Result<OracleResult> {
    let m = q.model()?;
    let betti = dga_cohomology_upto(&m, max_degree)?;
    let b = match base {
        BorelBase::Torus => build_borel_model(&m)?,
        BorelBase::Invariant => build_invariant_borel_model(&m)?,
    };
    let surjective = verify_fiber_surjectivity(&b, &m, max_degree)?;
    Ok(OracleResult { betti, surjective })
}
