use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::report::{InstanceReport, OracleRecord, Report};
use super::{Bounds, Catalog, Check, Instance, TorusComparison};
use crate::cartanmodel::{
    analyze_with, build_invariant_borel_model, build_model_from_embedding,
    default_surjectivity_degree, degree_reasoning_check, dga_cohomology_upto,
    equal_rank_by_degrees, poincare_series, series, verify_equivariant_witness,
    verify_fiber_surjectivity, verify_splitting, witness_surjectivity_degree, Answer, CartanModel,
    ProductWitness, Route, SearchBudget, TransferWitness, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::liegroups::{
    embed_recipe, make_group, verify_weyl_witness, weyl_orbit_search, Embedding, Factor,
};

fn embedding(group: &str, subgroup: &str, recipe: &str) -> Result<Embedding> {
    embed_recipe(recipe, &make_group(group)?, &make_group(subgroup)?)
}

fn model(group: &str, subgroup: &str, recipe: &str) -> Result<CartanModel> {
    build_model_from_embedding(&embedding(group, subgroup, recipe)?)
}

fn degrees(label: &str) -> Result<Vec<u32>> {
    Ok(make_group(label)?.generator_degrees)
}

struct Outcome {
    verdict: Verdict,
    /// Verdict of the family's own model, when a reduction was used and the
    /// model is explicit.
    direct: Option<Verdict>,
    model: Option<CartanModel>,
}

fn direct(
    group: &str,
    subgroup: &str,
    recipe: &str,
    budget: SearchBudget,
) -> Result<(Verdict, CartanModel)> {
    let m = model(group, subgroup, recipe)?;
    let mut v = analyze_with(&m, budget)?;
    v.space = format!("{group}/{subgroup}");
    Ok((v, m))
}

fn point(space: String) -> Verdict {
    Verdict {
        space,
        formal: Answer::Yes,
        equivariantly_formal: Answer::Yes,
        route: Some(Route::EqualRank),
        witness: None,
        poincare: Some(vec![1]),
        notes: vec!["a point".into()],
    }
}

fn compare_tori(c: &TorusComparison) -> Result<(Embedding, Embedding)> {
    let amb = make_group(&c.ambient)?;
    let own = embed_recipe(&c.subgroup_recipe, &amb, &make_group(&c.subgroup)?)?;
    let partner = embed_recipe(&c.partner_recipe, &amb, &make_group(&c.partner)?)?;
    if own.subgroup.rank != partner.subgroup.rank {
        return Err(Error::RankMismatch(format!(
            "{} and {} have different ranks and cannot share a torus",
            c.subgroup, c.partner
        )));
    }
    Ok((own, partner))
}

fn times_free(p: &[u64], free: &[u32]) -> Option<Vec<u64>> {
    let base: Vec<i128> = p.iter().map(|&c| c as i128).collect();
    series::to_counts(&series::mul(&base, &series::product_one_plus(free)))
}

fn run_check(check: &Check, budget: SearchBudget) -> Result<Outcome> {
    Ok(match check {
        Check::Direct {
            group,
            subgroup,
            recipe,
        } => {
            let (verdict, m) = direct(group, subgroup, recipe, budget)?;
            Outcome {
                verdict,
                direct: None,
                model: Some(m),
            }
        }
        Check::EqualRankDegrees { group, subgroup } => Outcome {
            verdict: equal_rank_by_degrees(
                &format!("{group}/{subgroup}"),
                &degrees(group)?,
                &degrees(subgroup)?,
            )?,
            direct: None,
            model: None,
        },
        Check::Degrees {
            group,
            subgroup,
            facts,
        } => Outcome {
            verdict: degree_reasoning_check(
                &format!("{group}/{subgroup}"),
                &degrees(group)?,
                &degrees(subgroup)?,
                facts,
            )?,
            direct: None,
            model: None,
        },
        Check::Transfer {
            group,
            subgroup,
            recipe,
            comparison,
            declared_fact,
            target_space,
            target,
        } => {
            let space = format!("{group}/{subgroup}");
            let weyl = match comparison {
                Some(c) => {
                    let (own, partner) = compare_tori(c)?;
                    match weyl_orbit_search(&own.group, &own.map, &partner.map)? {
                        Some(w) => Some(w),
                        None => {
                            return Ok(Outcome {
                                verdict: Verdict::inconclusive(
                                    space,
                                    format!("no Weyl element of {} matches the tori", c.ambient),
                                ),
                                direct: None,
                                model: None,
                            })
                        }
                    }
                }
                None => None,
            };
            let target_verdict = run_check(target, budget)?.verdict;
            let (own, m) = match recipe {
                Some(r) => {
                    let (v, m) = direct(group, subgroup, r, budget)?;
                    (Some(v), Some(m))
                }
                None => (None, None),
            };
            let mut notes = vec![format!("verdict transferred from {target_space}")];
            if let Some(f) = declared_fact {
                notes.push(format!("declared fact: {f}"));
            }
            let poincare = own.as_ref().and_then(|v| v.poincare.clone());
            if poincare.is_some() {
                notes.push("Poincaré polynomial from the space's own model".into());
            }
            let yes = target_verdict.all_yes();
            Outcome {
                verdict: Verdict {
                    space,
                    formal: target_verdict.formal,
                    equivariantly_formal: target_verdict.equivariantly_formal,
                    route: yes.then_some(Route::SharedTorusTransfer),
                    witness: Some(Witness::Transfer(TransferWitness {
                        target: target_space.clone(),
                        ambient: comparison
                            .as_ref()
                            .map(|c| c.ambient.clone())
                            .unwrap_or_default(),
                        weyl,
                        declared_fact: declared_fact.clone(),
                        target_verdict: Box::new(target_verdict),
                    })),
                    poincare,
                    notes,
                },
                direct: own,
                model: m,
            }
        }
        Check::Product {
            case,
            group,
            subgroup,
            recipe,
            free_degrees,
            factor,
        } => {
            let factor_verdict = match factor {
                Some((_, c)) => run_check(c, budget)?.verdict,
                None => point(format!("{subgroup}/{subgroup}")),
            };
            let (own, m) = match recipe {
                Some(r) => {
                    let (v, m) = direct(group, subgroup, r, budget)?;
                    (Some(v), Some(m))
                }
                None => (None, None),
            };
            let rule = match case {
                5 => "L x L / ΔK is the antidiagonal L times L/K",
                6 => "L x L / ΔL is diffeomorphic to L",
                _ => "L^4 / ΔL is diffeomorphic to L^3",
            };
            let yes = factor_verdict.all_yes();
            let poincare = factor_verdict
                .poincare
                .as_ref()
                .and_then(|p| times_free(p, free_degrees));
            Outcome {
                verdict: Verdict {
                    space: format!("{group}/{subgroup}"),
                    formal: factor_verdict.formal,
                    equivariantly_formal: factor_verdict.equivariantly_formal,
                    route: yes.then_some(Route::ProductReduction),
                    witness: Some(Witness::Product(ProductWitness {
                        rule: rule.into(),
                        free_degrees: free_degrees.clone(),
                        factor: Some(Box::new(factor_verdict)),
                    })),
                    poincare,
                    notes: vec![format!("structural case {case}")],
                },
                direct: own,
                model: m,
            }
        }
        Check::TorusQuotient {
            group,
            subgroup,
            recipe,
        } => {
            let g = make_group(group)?;
            if !g.factors.iter().all(|f| matches!(f, Factor::Torus(_))) {
                return Err(Error::Catalog(format!("{group} is not a torus")));
            }
            let k = make_group(subgroup)?;
            let free = vec![1; g.rank - k.rank];
            let (own, m) = direct(group, subgroup, recipe, budget)?;
            Outcome {
                verdict: Verdict {
                    space: format!("{group}/{subgroup}"),
                    formal: Answer::Yes,
                    equivariantly_formal: Answer::Yes,
                    route: Some(Route::TorusQuotient),
                    witness: Some(Witness::Product(ProductWitness {
                        rule: "a torus modulo a subtorus is a torus".into(),
                        free_degrees: free.clone(),
                        factor: None,
                    })),
                    poincare: series::to_counts(&series::product_one_plus(&free)),
                    notes: vec!["structural case 1".into()],
                },
                direct: Some(own),
                model: Some(m),
            }
        }
    })
}

/// Runs the primitive checks of one instance.
pub fn execute(check: &Check, budget: SearchBudget) -> Result<Verdict> {
    Ok(run_check(check, budget)?.verdict)
}

/// Re-derives the witness of a verdict produced by `execute`.
pub fn recheck(check: &Check, v: &Verdict) -> Result<bool> {
    if !v.all_yes() {
        return Ok(false);
    }
    match (check, &v.witness) {
        (
            Check::Direct {
                group,
                subgroup,
                recipe,
            },
            Some(Witness::Splitting {
                splitting,
                equivariant: Some(eq),
            }),
        ) => {
            let m = model(group, subgroup, recipe)?;
            let p = series::to_counts(&poincare_series(&m, splitting)?);
            Ok(verify_splitting(&m, splitting)?
                && verify_equivariant_witness(&m, splitting, eq)?
                && p.as_ref() == v.poincare.as_ref())
        }
        (Check::EqualRankDegrees { group, subgroup }, Some(Witness::Degrees(_))) => {
            Ok(&equal_rank_by_degrees(&v.space, &degrees(group)?, &degrees(subgroup)?)? == v)
        }
        (
            Check::Degrees {
                group,
                subgroup,
                facts,
            },
            Some(Witness::Degrees(_)),
        ) => Ok(
            &degree_reasoning_check(&v.space, &degrees(group)?, &degrees(subgroup)?, facts)? == v,
        ),
        (
            Check::Transfer {
                comparison,
                declared_fact,
                target,
                target_space,
                ..
            },
            Some(Witness::Transfer(t)),
        ) => {
            if &t.target != target_space || &t.declared_fact != declared_fact {
                return Ok(false);
            }
            let tori = match (comparison, &t.weyl) {
                (Some(c), Some(w)) => {
                    let (own, partner) = compare_tori(c)?;
                    verify_weyl_witness(&own.group, &own.map, &partner.map, w)?
                }
                (None, None) => declared_fact.is_some(),
                _ => false,
            };
            Ok(tori && recheck(target, &t.target_verdict)?)
        }
        (
            Check::Product {
                free_degrees,
                factor,
                ..
            },
            Some(Witness::Product(p)),
        ) => {
            let Some(fv) = &p.factor else {
                return Ok(false);
            };
            let factor_ok = match factor {
                Some((_, c)) => recheck(c, fv)?,
                None => fv.all_yes() && fv.poincare.as_deref() == Some(&[1][..]),
            };
            let poincare = fv
                .poincare
                .as_ref()
                .and_then(|q| times_free(q, free_degrees));
            Ok(factor_ok && &p.free_degrees == free_degrees && poincare == v.poincare)
        }
        (
            Check::TorusQuotient {
                group, subgroup, ..
            },
            Some(Witness::Product(p)),
        ) => {
            let n = make_group(group)?.rank - make_group(subgroup)?.rank;
            Ok(p.free_degrees == vec![1; n]
                && v.poincare == series::to_counts(&series::product_one_plus(&p.free_degrees)))
        }
        _ => Ok(false),
    }
}

fn splitting_of(v: &Verdict) -> Option<&crate::cartanmodel::SplittingWitness> {
    match &v.witness {
        Some(Witness::Splitting { splitting, .. }) => Some(splitting),
        _ => None,
    }
}

fn oracle(m: &CartanModel, v: &Verdict, own: Option<&Verdict>) -> Result<OracleRecord> {
    let dim = m.formal_dimension();
    let betti = dga_cohomology_upto(m, dim)?;
    let poincare_matches = v.poincare.as_ref().is_some_and(|p| {
        let mut p = p.clone();
        p.resize(betti.len().max(p.len()), 0);
        p == betti
    });
    let (degree, surjective) = if v.equivariantly_formal.is_yes() {
        let b = build_invariant_borel_model(m)?;
        let n = match own.or(Some(v)).and_then(splitting_of) {
            Some(w) => witness_surjectivity_degree(&b, m, w),
            None => default_surjectivity_degree(m),
        };
        (Some(n), Some(verify_fiber_surjectivity(&b, m, n)?))
    } else {
        (None, None)
    };
    Ok(OracleRecord {
        formal_dimension: dim,
        poincare_matches,
        surjectivity_degree: degree,
        surjective,
    })
}

/// Runs, rechecks and (within the bounds) oracle-checks one instance.
pub fn run_instance(inst: &Instance, bounds: &Bounds) -> InstanceReport {
    let start = Instant::now();
    let budget = SearchBudget::within(Duration::from_secs(bounds.budget_seconds));
    let mut report = InstanceReport {
        family: inst.family.clone(),
        list: inst.list,
        reduction: inst.reduction,
        params: inst.params.clone(),
        space: inst.space.clone(),
        group_rank: inst.group_rank,
        expected_routes: inst.expected_routes.clone(),
        route_matches: false,
        witness_rechecked: false,
        direct_agrees: None,
        oracle: None,
        verdict: None,
        error: None,
        elapsed_ms: 0,
    };
    let result = (|| -> Result<()> {
        let out = run_check(&inst.check, budget)?;
        report.route_matches = out
            .verdict
            .route
            .is_some_and(|r| inst.expected_routes.contains(&r));
        report.witness_rechecked = recheck(&inst.check, &out.verdict)?;
        report.direct_agrees = out.direct.as_ref().map(|d| {
            d.formal == out.verdict.formal
                && d.equivariantly_formal == out.verdict.equivariantly_formal
        });
        if let (Some(m), Some(limit)) = (&out.model, bounds.oracle_dimension) {
            if m.formal_dimension() <= limit {
                report.oracle = Some(oracle(m, &out.verdict, out.direct.as_ref())?);
            }
        }
        report.verdict = Some(out.verdict);
        Ok(())
    })();
    if let Err(e) = result {
        report.error = Some(e.to_string());
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

/// Runs every instance within the bounds. Instances run in parallel; the
/// report keeps catalog order.
pub fn run_catalog(catalog: &Catalog, bounds: &Bounds) -> Result<Report> {
    let start = Instant::now();
    let instances = catalog.instances(bounds)?;
    let reports: Vec<InstanceReport> = instances
        .par_iter()
        .map(|i| run_instance(i, bounds))
        .collect();
    Ok(Report::new(
        bounds.clone(),
        reports,
        start.elapsed().as_millis() as u64,
    ))
}
