//! Families of homogeneous spaces, their reductions to primitive checks,
//! and the batch runner that produces the golden verdict report.
//!
//! The catalog is a TOML file with one `[[family]]` record per family. Labels
//! and constraints use `{expr}` placeholders over the family parameters; see
//! `data/catalog.toml` for the schema in use.

mod report;
mod run;
mod template;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cartanmodel::{DegreeFact, Route};
use crate::error::{Error, Result};
use crate::liegroups::parse_label;

pub use report::{InstanceReport, OracleRecord, Report, ReportCounts};
pub use run::{execute, recheck, run_catalog, run_instance};
pub use template::{evaluate, fill, holds, Params};

/// Environment variable naming a catalog file that replaces the built-in one.
pub const CATALOG_ENV: &str = "ISOFORMAL_CATALOG";

const BUILTIN: &str = include_str!("../../data/catalog.toml");

/// Which enumeration of the source a family comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceList {
    EqualRank,
    SharedTorus,
    Remaining,
    Symmetric,
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Build the Cartan model and search for a splitting.
    Direct,
    /// Reuse the verdict of a space whose subgroup has a conjugate torus.
    SharedTorus,
    /// rk G = rk K.
    EqualRank,
    /// `L x L / ΔK`, `L x L / ΔL`, `L^4 / ΔL`.
    Product,
    /// G is a torus.
    Torus,
    /// Exceptional groups known by degrees only.
    DegreeOnly,
}

/// Two subgroups compared inside an ambient group by a Weyl search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSpec {
    /// Group in which the tori are compared; absent when the conjugacy is a
    /// declared fact only.
    #[serde(default)]
    pub ambient: Option<String>,
    /// Recipe for the family's subgroup inside the ambient group; defaults to
    /// the family recipe.
    #[serde(default)]
    pub subgroup_recipe: Option<String>,
    /// The partner subgroup as it sits in the ambient group.
    #[serde(default)]
    pub partner: Option<String>,
    #[serde(default)]
    pub partner_recipe: Option<String>,
    /// Subgroup of the target space `G/K'`.
    #[serde(default)]
    pub target_subgroup: Option<String>,
    #[serde(default)]
    pub target_recipe: Option<String>,
    /// Reuse the verdict of another (parameter-free) family.
    #[serde(default)]
    pub target_family: Option<String>,
    #[serde(default)]
    pub target_facts: Vec<DegreeFact>,
    #[serde(default)]
    pub declared_fact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    /// Which structural case: 5 (`LxL/ΔK`), 6 (`LxL/ΔL`), 7 (`L^4/ΔL`).
    pub case: u8,
    /// The group `L` whose degrees give the free factor.
    pub free_group: String,
    /// How many copies of `L`'s shifted degrees split off.
    pub copies: u32,
    #[serde(default)]
    pub factor_group: Option<String>,
    #[serde(default)]
    pub factor_subgroup: Option<String>,
    #[serde(default)]
    pub factor_recipe: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub label: String,
    pub list: SourceList,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<String>,
    pub group: String,
    pub subgroup: String,
    /// Standard embedding steps from the subgroup outward, `kind@H > kind`.
    #[serde(default)]
    pub recipe: Option<String>,
    pub reduction: Reduction,
    pub expected_routes: Vec<Route>,
    #[serde(default)]
    pub facts: Vec<DegreeFact>,
    #[serde(default)]
    pub transfer: Option<TransferSpec>,
    #[serde(default)]
    pub product: Option<ProductSpec>,
    #[serde(default)]
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(rename = "family", default)]
    pub families: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest rank of G to instantiate.
    pub max_rank: usize,
    /// Run the cohomology oracles on instances up to this formal dimension.
    pub oracle_dimension: Option<u32>,
    /// Per-instance budget for the splitting search, in seconds.
    pub budget_seconds: u64,
    /// Only families whose label contains this text.
    pub family_filter: Option<String>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_rank: 8,
            oracle_dimension: None,
            budget_seconds: 60,
            family_filter: None,
        }
    }
}

/// Primitive verification steps an instance reduces to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Direct {
        group: String,
        subgroup: String,
        recipe: String,
    },
    EqualRankDegrees {
        group: String,
        subgroup: String,
    },
    Degrees {
        group: String,
        subgroup: String,
        facts: Vec<DegreeFact>,
    },
    Transfer {
        group: String,
        subgroup: String,
        /// Recipe of the family's own subgroup in G, for a direct cross-check.
        recipe: Option<String>,
        comparison: Option<TorusComparison>,
        declared_fact: Option<String>,
        target_space: String,
        target: Box<Check>,
    },
    Product {
        case: u8,
        group: String,
        subgroup: String,
        recipe: Option<String>,
        free_degrees: Vec<u32>,
        factor: Option<(String, Box<Check>)>,
    },
    TorusQuotient {
        group: String,
        subgroup: String,
        recipe: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusComparison {
    pub ambient: String,
    pub subgroup: String,
    pub subgroup_recipe: String,
    pub partner: String,
    pub partner_recipe: String,
}

/// One instantiated family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub family: String,
    pub list: SourceList,
    pub reduction: Reduction,
    pub params: BTreeMap<String, i64>,
    pub space: String,
    pub group_rank: usize,
    pub expected_routes: Vec<Route>,
    pub check: Check,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let c: Catalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("built-in catalog is well formed")
    }

    /// The file named by `ISOFORMAL_CATALOG`, or the built-in catalog.
    pub fn load_default() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Catalog::load(std::path::Path::new(&path)),
            None => Ok(Catalog::builtin()),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("cannot read {}: {e}", path.display())))?;
        Catalog::parse(&text)
    }

    pub fn family(&self, label: &str) -> Option<&CatalogEntry> {
        self.families.iter().find(|f| f.label == label)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.families {
            if !seen.insert(f.label.as_str()) {
                return Err(Error::Catalog(format!(
                    "family `{}` appears twice",
                    f.label
                )));
            }
            let needs = |ok: bool, what: &str| {
                if ok {
                    Ok(())
                } else {
                    Err(Error::Catalog(format!("family `{}`: {what}", f.label)))
                }
            };
            needs(!f.expected_routes.is_empty(), "no expected route")?;
            match f.reduction {
                Reduction::Direct | Reduction::Torus => {
                    needs(f.recipe.is_some(), "needs a recipe")?
                }
                Reduction::SharedTorus => {
                    let t = f.transfer.as_ref();
                    needs(t.is_some(), "needs a [transfer] table")?;
                    let t = t.unwrap();
                    needs(
                        t.ambient.is_some() || t.declared_fact.is_some(),
                        "a transfer needs an ambient group or a declared fact",
                    )?;
                    needs(
                        t.ambient.is_none() || (t.partner.is_some() && t.partner_recipe.is_some()),
                        "an ambient comparison needs partner and partner_recipe",
                    )?;
                    needs(
                        t.target_family.is_some()
                            || t.target_subgroup.is_some()
                            || t.partner.is_some(),
                        "a transfer needs a target",
                    )?;
                    if let Some(tf) = &t.target_family {
                        let target = self.family(tf);
                        needs(
                            target.is_some_and(|x| x.params.is_empty()),
                            "target family must exist and be parameter-free",
                        )?;
                    }
                }
                Reduction::Product => {
                    let p = f.product.as_ref();
                    needs(p.is_some(), "needs a [product] table")?;
                    needs(
                        matches!(p.unwrap().case, 5..=7),
                        "product case must be 5, 6 or 7",
                    )?;
                }
                Reduction::EqualRank | Reduction::DegreeOnly => {}
            }
            for c in &f.constraints {
                let ones: Params = f.params.iter().map(|p| (p.clone(), 1)).collect();
                holds(c, &ones)?;
            }
        }
        Ok(())
    }

    /// All instances of all families within the bounds, in catalog order and
    /// lexicographic parameter order within a family.
    pub fn instances(&self, bounds: &Bounds) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for f in &self.families {
            if let Some(filter) = &bounds.family_filter {
                if !f.label.contains(filter.as_str()) {
                    continue;
                }
            }
            out.extend(self.reduce_entry(f, bounds)?);
        }
        if let Some(filter) = &bounds.family_filter {
            if !self
                .families
                .iter()
                .any(|f| f.label.contains(filter.as_str()))
            {
                return Err(Error::Catalog(format!(
                    "no family label contains `{filter}`"
                )));
            }
        }
        Ok(out)
    }

    /// Instantiates one family and reduces each instance to primitive checks.
    pub fn reduce_entry(&self, e: &CatalogEntry, bounds: &Bounds) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for params in parameter_tuples(e, bounds)? {
            let group = fill(&e.group, &params)?;
            let rank = label_rank(&group)?;
            if rank > bounds.max_rank {
                continue;
            }
            let subgroup = fill(&e.subgroup, &params)?;
            let check = self.plan(e, &params, bounds)?;
            out.push(Instance {
                family: e.label.clone(),
                list: e.list,
                reduction: e.reduction,
                params,
                space: format!("{group}/{subgroup}"),
                group_rank: rank,
                expected_routes: e.expected_routes.clone(),
                check,
            });
        }
        Ok(out)
    }

    fn plan(&self, e: &CatalogEntry, params: &Params, bounds: &Bounds) -> Result<Check> {
        let group = fill(&e.group, params)?;
        let subgroup = fill(&e.subgroup, params)?;
        let recipe = e.recipe.as_deref().map(|r| fill(r, params)).transpose()?;
        let explicit = is_explicit(&group)? && is_explicit(&subgroup)?;
        let missing = |what: &str| Error::Catalog(format!("family `{}`: {what}", e.label));
        Ok(match e.reduction {
            Reduction::Direct => Check::Direct {
                group,
                subgroup,
                recipe: recipe.ok_or_else(|| missing("needs a recipe"))?,
            },
            Reduction::EqualRank if explicit && recipe.is_some() => Check::Direct {
                group,
                subgroup,
                recipe: recipe.unwrap(),
            },
            Reduction::EqualRank => Check::EqualRankDegrees { group, subgroup },
            Reduction::DegreeOnly => Check::Degrees {
                group,
                subgroup,
                facts: e.facts.clone(),
            },
            Reduction::Torus => Check::TorusQuotient {
                group,
                subgroup,
                recipe: recipe.ok_or_else(|| missing("needs a recipe"))?,
            },
            Reduction::Product => {
                let p = e
                    .product
                    .as_ref()
                    .ok_or_else(|| missing("needs a [product] table"))?;
                let free_group = fill(&p.free_group, params)?;
                let degrees = crate::liegroups::make_group(&free_group)?.generator_degrees;
                let free_degrees = (0..p.copies)
                    .flat_map(|_| degrees.iter().map(|d| d - 1))
                    .collect();
                let factor = match (&p.factor_group, &p.factor_subgroup) {
                    (Some(fg), Some(fs)) => {
                        let fg = fill(fg, params)?;
                        let fs = fill(fs, params)?;
                        let check = match &p.factor_recipe {
                            Some(r) => Check::Direct {
                                group: fg.clone(),
                                subgroup: fs.clone(),
                                recipe: fill(r, params)?,
                            },
                            None => Check::Degrees {
                                group: fg.clone(),
                                subgroup: fs.clone(),
                                facts: e.facts.clone(),
                            },
                        };
                        Some((format!("{fg}/{fs}"), Box::new(check)))
                    }
                    _ => None,
                };
                Check::Product {
                    case: p.case,
                    group,
                    subgroup,
                    recipe: if explicit { recipe } else { None },
                    free_degrees,
                    factor,
                }
            }
            Reduction::SharedTorus => {
                let t = e
                    .transfer
                    .as_ref()
                    .ok_or_else(|| missing("needs a [transfer] table"))?;
                let comparison = match &t.ambient {
                    Some(a) => Some(TorusComparison {
                        ambient: fill(a, params)?,
                        subgroup: subgroup.clone(),
                        subgroup_recipe: t
                            .subgroup_recipe
                            .as_deref()
                            .or(e.recipe.as_deref())
                            .map(|r| fill(r, params))
                            .transpose()?
                            .ok_or_else(|| {
                                missing("needs a recipe for the subgroup in the ambient group")
                            })?,
                        partner: fill(t.partner.as_deref().unwrap_or_default(), params)?,
                        partner_recipe: fill(
                            t.partner_recipe.as_deref().unwrap_or_default(),
                            params,
                        )?,
                    }),
                    None => None,
                };
                let (target_space, target) = match &t.target_family {
                    Some(tf) => {
                        let f = self
                            .family(tf)
                            .ok_or_else(|| missing("unknown target family"))?;
                        let inst = self.reduce_entry(
                            f,
                            &Bounds {
                                max_rank: usize::MAX,
                                ..bounds.clone()
                            },
                        )?;
                        let inst = inst
                            .into_iter()
                            .next()
                            .ok_or_else(|| missing("target family is empty"))?;
                        (inst.space, inst.check)
                    }
                    None => {
                        let ts = fill(
                            t.target_subgroup
                                .as_deref()
                                .or(t.partner.as_deref())
                                .unwrap_or_default(),
                            params,
                        )?;
                        let check = match &t.target_recipe {
                            Some(r) if explicit => Check::Direct {
                                group: group.clone(),
                                subgroup: ts.clone(),
                                recipe: fill(r, params)?,
                            },
                            _ if label_rank(&ts)? == label_rank(&group)? => {
                                Check::EqualRankDegrees {
                                    group: group.clone(),
                                    subgroup: ts.clone(),
                                }
                            }
                            _ => Check::Degrees {
                                group: group.clone(),
                                subgroup: ts.clone(),
                                facts: t.target_facts.clone(),
                            },
                        };
                        (format!("{group}/{ts}"), check)
                    }
                };
                Check::Transfer {
                    group,
                    subgroup,
                    recipe: if explicit { recipe } else { None },
                    comparison,
                    declared_fact: t.declared_fact.clone(),
                    target_space,
                    target: Box::new(target),
                }
            }
        })
    }
}

fn label_rank(label: &str) -> Result<usize> {
    Ok(parse_label(label)?.iter().map(|f| f.rank()).sum())
}

fn is_explicit(label: &str) -> Result<bool> {
    Ok(parse_label(label)?.iter().all(|f| !f.is_exceptional()))
}

/// Parameter tuples in lexicographic order. Each parameter ranges over
/// `1..=2*max_rank+2`, which covers every classical label of rank at most
/// `max_rank`; the rank filter does the rest.
fn parameter_tuples(e: &CatalogEntry, bounds: &Bounds) -> Result<Vec<Params>> {
    let top = (2 * bounds.max_rank.min(16) + 2) as i64;
    let mut out = Vec::new();
    let mut values = vec![1i64; e.params.len()];
    loop {
        let params: Params = e
            .params
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect();
        let mut ok = true;
        for c in &e.constraints {
            if !holds(c, &params)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(params);
        }
        // odometer, last parameter fastest
        let mut i = values.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if values[i] < top {
                values[i] += 1;
                values[i + 1..].iter_mut().for_each(|v| *v = 1);
                break;
            }
        }
    }
}
