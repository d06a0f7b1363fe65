//! Formality from generator degrees alone, for groups without explicit
//! invariant polynomials.
//!
//! A candidate says, for each generator `y` of H*(BK) of degree `e`, which
//! generator of H*(BG) hits it: either linearly (same degree), or as a pure
//! power `y^k` (degree `k e`). Linear hits cancel in pairs. What remains is
//! `Q[y_i : k_i > 1]` with the power generators, and the unused generators
//! of H*(BG). An unused generator of degree `d` is forced to vanish when
//! every monomial of degree `d` in the remaining `y`'s is a single `y` of
//! that degree: a nonzero coefficient there would be a linear hit, which is
//! a different candidate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::express::weighted_exponents;
use super::series;
use super::verdict::{Answer, DegreeCandidate, DegreeWitness, Route, Verdict, Witness};
use crate::error::{Error, Result};

/// Inputs to the degree argument that are not consequences of degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeFact {
    /// The degree-4 generator of H*(BG) restricts to a class with nonzero
    /// linear part in a degree-4 generator of H*(BK) (the Killing form of G
    /// restricts to a nonzero invariant form on K).
    KillingForm,
}

impl DegreeFact {
    pub fn describe(self) -> &'static str {
        match self {
            DegreeFact::KillingForm => {
                "degree-4 generator restricts with nonzero linear part (Killing form)"
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Linear(usize),
    Power(usize, u32),
}

fn search(
    g: &[u32],
    k: &[u32],
    i: usize,
    roles: &mut Vec<Role>,
    linear_used: &mut Vec<bool>,
    out: &mut Vec<Vec<Role>>,
) {
    if i == k.len() {
        out.push(roles.clone());
        return;
    }
    for (j, &d) in g.iter().enumerate() {
        if d % k[i] != 0 || linear_used[j] {
            continue;
        }
        let e = d / k[i];
        if e == 1 {
            linear_used[j] = true;
            roles.push(Role::Linear(j));
            search(g, k, i + 1, roles, linear_used, out);
            roles.pop();
            linear_used[j] = false;
        } else {
            roles.push(Role::Power(j, e));
            search(g, k, i + 1, roles, linear_used, out);
            roles.pop();
        }
    }
}

fn satisfies(g: &[u32], k: &[u32], roles: &[Role], facts: &[DegreeFact]) -> bool {
    let linear: BTreeSet<usize> = roles
        .iter()
        .filter_map(|r| {
            if let Role::Linear(j) = r {
                Some(*j)
            } else {
                None
            }
        })
        .collect();
    // a generator hit linearly cannot also supply a pure power
    if roles
        .iter()
        .any(|r| matches!(r, Role::Power(j, _) if linear.contains(j)))
    {
        return false;
    }
    facts.iter().all(|f| match f {
        DegreeFact::KillingForm => {
            let applies = g.contains(&4) && k.contains(&4);
            !applies
                || roles
                    .iter()
                    .zip(k)
                    .any(|(r, &e)| e == 4 && matches!(r, Role::Linear(j) if g[*j] == 4))
        }
    })
}

/// `None` when too few generators can have a nonzero image on the
/// remaining even generators; the cohomology of a compact `G/K` is finite,
/// so such an assignment cannot occur.
fn evaluate(g: &[u32], k: &[u32], roles: &[Role]) -> Option<DegreeCandidate> {
    let mut linear = Vec::new();
    let mut powers = Vec::new();
    let mut used = vec![false; g.len()];
    let mut remaining_k = Vec::new();
    let mut power_gens = BTreeSet::new();
    let mut shared = false;
    for (r, &e) in roles.iter().zip(k) {
        match *r {
            Role::Linear(j) => {
                used[j] = true;
                linear.push((e, g[j]));
            }
            Role::Power(j, p) => {
                shared |= !power_gens.insert(j);
                used[j] = true;
                remaining_k.push(e);
                powers.push((e, p, g[j]));
            }
        }
    }
    linear.sort_unstable();
    powers.sort_unstable();
    let mut free: Vec<u32> = (0..g.len()).filter(|&j| !used[j]).map(|j| g[j]).collect();
    free.sort_unstable();
    let forced_zero = |d: u32| {
        weighted_exponents(&remaining_k, d)
            .iter()
            .all(|e| e.iter().map(|&x| x as u32).sum::<u32>() == 1)
    };
    let live = power_gens.len() + free.iter().filter(|&&d| !forced_zero(d)).count();
    if live < remaining_k.len() {
        return None;
    }
    let certified = !shared && free.iter().all(|&d| forced_zero(d));
    let power_degrees: Vec<u32> = powers.iter().map(|&(_, _, d)| d).collect();
    let power_bases: Vec<u32> = powers.iter().map(|&(e, _, _)| e).collect();
    let elliptic = series::divide_exact(
        &series::product_one_minus(&power_degrees),
        &series::product_one_minus(&power_bases),
    )
    .unwrap_or_else(|| vec![0]);
    let spheres: Vec<u32> = free.iter().map(|d| d - 1).collect();
    let p = series::mul(&elliptic, &series::product_one_plus(&spheres));
    let mut parts = Vec::new();
    if !spheres.is_empty() {
        parts.push(format!(
            "spheres of dimensions {}",
            spheres
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    for &(e, k, d) in &powers {
        parts.push(format!("(v{e}, v{}; dv{} = v{e}^{k})", d - 1, d - 1));
    }
    if parts.is_empty() {
        parts.push("a point".into());
    }
    Some(DegreeCandidate {
        linear,
        powers,
        free_degrees: free,
        sphere_dimensions: spheres,
        certified,
        poincare: series::to_counts(&p).unwrap_or_default(),
        description: parts.join(" plus "),
    })
}

/// Enumerates every degree-consistent candidate. The verdict is yes when
/// every candidate is certified; the candidates are listed either way.
pub fn degree_reasoning_check(
    space: &str,
    group_degrees: &[u32],
    subgroup_degrees: &[u32],
    facts: &[DegreeFact],
) -> Result<Verdict> {
    if subgroup_degrees.len() > group_degrees.len() {
        return Err(Error::RankMismatch(format!(
            "{space}: subgroup has more generators than the group"
        )));
    }
    let mut k = subgroup_degrees.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    let mut raw = Vec::new();
    search(
        group_degrees,
        &k,
        0,
        &mut Vec::new(),
        &mut vec![false; group_degrees.len()],
        &mut raw,
    );
    let mut candidates: Vec<DegreeCandidate> = Vec::new();
    let mut impossible = 0;
    for roles in raw
        .iter()
        .filter(|r| satisfies(group_degrees, &k, r, facts))
    {
        let Some(c) = evaluate(group_degrees, &k, roles) else {
            impossible += 1;
            continue;
        };
        if !candidates
            .iter()
            .any(|x| x.linear == c.linear && x.powers == c.powers)
        {
            candidates.push(c);
        }
    }
    candidates.sort_by(|a, b| {
        b.linear
            .len()
            .cmp(&a.linear.len())
            .then_with(|| a.powers.cmp(&b.powers))
    });
    let witness = DegreeWitness {
        group_degrees: group_degrees.to_vec(),
        subgroup_degrees: subgroup_degrees.to_vec(),
        facts: facts.iter().map(|f| f.describe().to_string()).collect(),
        candidates,
        impossible,
    };
    let yes = !witness.candidates.is_empty() && witness.candidates.iter().all(|c| c.certified);
    let mut notes = Vec::new();
    if witness.candidates.is_empty() {
        notes.push("no degree-consistent assignment".into());
    } else if !yes {
        notes.push(
            "some candidate has an unused generator that degrees alone do not force to vanish"
                .into(),
        );
    }
    // distinct candidates may differ in Poincaré polynomial; report one only when they agree
    let poincare = match witness.candidates.as_slice() {
        [first, rest @ ..] if yes && rest.iter().all(|c| c.poincare == first.poincare) => {
            Some(first.poincare.clone())
        }
        _ => None,
    };
    let answer = if yes {
        Answer::Yes
    } else {
        Answer::NoWitnessFound
    };
    Ok(Verdict {
        space: space.to_string(),
        formal: answer,
        equivariantly_formal: answer,
        route: yes.then_some(Route::DegreeReasoning),
        witness: Some(Witness::Degrees(witness)),
        poincare,
        notes,
    })
}

/// Equal rank: the images form a regular sequence for any embedding, so
/// `P(q) = prod (1 - q^{d_j}) / prod (1 - q^{e_i})`.
pub fn equal_rank_by_degrees(
    space: &str,
    group_degrees: &[u32],
    subgroup_degrees: &[u32],
) -> Result<Verdict> {
    if group_degrees.len() != subgroup_degrees.len() {
        return Err(Error::RankMismatch(format!("{space}: ranks differ")));
    }
    let p = series::divide_exact(
        &series::product_one_minus(group_degrees),
        &series::product_one_minus(subgroup_degrees),
    )
    .ok_or_else(|| {
        Error::Inconsistent(format!(
            "{space}: degrees do not give a polynomial quotient"
        ))
    })?;
    let counts = series::to_counts(&p)
        .ok_or_else(|| Error::Inconsistent(format!("{space}: negative Betti number")))?;
    Ok(Verdict {
        space: space.to_string(),
        formal: Answer::Yes,
        equivariantly_formal: Answer::Yes,
        route: Some(Route::EqualRank),
        witness: Some(Witness::Degrees(DegreeWitness {
            group_degrees: group_degrees.to_vec(),
            subgroup_degrees: subgroup_degrees.to_vec(),
            facts: vec!["equal rank".into()],
            candidates: Vec::new(),
            impossible: 0,
        })),
        poincare: Some(counts),
        notes: vec!["equal rank: generator degrees determine the cohomology".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroups::make_group;

    fn degrees(label: &str) -> Vec<u32> {
        make_group(label).unwrap().generator_degrees
    }

    fn candidates(v: &Verdict) -> &[DegreeCandidate] {
        match &v.witness {
            Some(Witness::Degrees(w)) => &w.candidates,
            _ => panic!("no degree witness"),
        }
    }

    #[test]
    fn e7_mod_f4_has_two_candidates() {
        let v = degree_reasoning_check(
            "E7/F4",
            &degrees("E7"),
            &degrees("F4"),
            &[DegreeFact::KillingForm],
        )
        .unwrap();
        assert!(v.all_yes());
        let c = candidates(&v);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].sphere_dimensions, vec![19, 27, 35]);
        assert!(c[0].powers.is_empty());
        assert_eq!(c[1].sphere_dimensions, vec![11, 19, 27]);
        assert_eq!(c[1].powers, vec![(12, 3, 36)]);
    }

    #[test]
    fn e6_mod_f4_is_free() {
        let v = degree_reasoning_check(
            "E6/F4",
            &degrees("E6"),
            &degrees("F4"),
            &[DegreeFact::KillingForm],
        )
        .unwrap();
        assert!(v.all_yes());
        assert_eq!(candidates(&v).len(), 1);
        assert_eq!(candidates(&v)[0].sphere_dimensions, vec![9, 17]);
        assert_eq!(
            v.poincare.unwrap(),
            series::to_counts(&series::product_one_plus(&[9, 17])).unwrap()
        );
    }

    #[test]
    fn e6_mod_spin9() {
        let v = degree_reasoning_check(
            "E6/Spin(9)",
            &degrees("E6"),
            &degrees("Spin(9)"),
            &[DegreeFact::KillingForm],
        )
        .unwrap();
        assert!(v.all_yes());
        let c = candidates(&v);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].powers, vec![(8, 3, 24)]);
        assert_eq!(c[0].sphere_dimensions, vec![9, 17]);
    }

    #[test]
    fn e7_mod_sp4_is_not_decided_by_degrees() {
        let v = degree_reasoning_check(
            "E7/Sp(4)",
            &degrees("E7"),
            &degrees("Sp(4)"),
            &[DegreeFact::KillingForm],
        )
        .unwrap();
        assert_eq!(v.formal, Answer::NoWitnessFound);
    }

    #[test]
    fn identical_degrees() {
        let d = degrees("F4");
        let v = degree_reasoning_check("F4/F4", &d, &d, &[DegreeFact::KillingForm]).unwrap();
        assert!(v.all_yes());
        assert_eq!(v.poincare.unwrap(), vec![1]);
    }

    #[test]
    fn equal_rank_exceptional() {
        let v = equal_rank_by_degrees("G2/T^2", &degrees("G2"), &[2, 2]).unwrap();
        assert_eq!(v.poincare.unwrap().iter().sum::<u64>(), 12);
    }
}
