//! Equivariant formality of the isotropy action from a splitting.
//!
//! A redundant generator `v_j` lifts to a closed element of the Borel model
//! exactly when `psi_j(u) - psi_j(w)` lies in the ideal generated by the
//! corresponding differences of earlier generators in `H*(BK) ⊗ H*(BK)`.
//! Membership of `psi_j` in the single-copy ideal is not enough: for
//! `SU(3)/T^1` with weights `(1, 1, -2)` the images are `-3s^2, -2s^3` and
//! the space is formal, but `u^3 - w^3` is not in `(u^2 - w^2)`.

use super::express::{check_expression, express_in};
use super::verdict::{
    Answer, BorelCertificate, BorelEvidence, EquivariantWitness, Route, SplittingWitness,
};
use super::CartanModel;
use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;
use crate::groebner::{cached_basis, normal_form};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantOutcome {
    pub answer: Answer,
    pub route: Option<Route>,
    pub witness: Option<EquivariantWitness>,
}

fn doubled(p: &Polynomial, r: usize) -> Result<Polynomial> {
    let u = p.embed(2 * r, 0)?;
    let w = p.embed(2 * r, r)?;
    Ok(&u - &w)
}

fn doubled_ideal(
    m: &CartanModel,
    earlier: &[usize],
) -> Result<std::sync::Arc<crate::groebner::GroebnerBasis>> {
    let r = m.nvars();
    let gens = earlier
        .iter()
        .map(|&s| doubled(&m.images[s], r))
        .collect::<Result<Vec<_>>>()?;
    cached_basis(&gens, 2 * r)
}

fn certify(m: &CartanModel, j: usize, placed: &[usize]) -> Result<Option<BorelCertificate>> {
    let psi = &m.images[j];
    if psi.is_zero() {
        return Ok(Some(BorelCertificate {
            index: j,
            earlier: Vec::new(),
            evidence: BorelEvidence::ZeroImage,
        }));
    }
    let earlier: Vec<usize> = placed
        .iter()
        .copied()
        .filter(|&s| !m.images[s].is_zero())
        .collect();
    let gens: Vec<Polynomial> = earlier.iter().map(|&s| m.images[s].clone()).collect();
    if let Some(p) = express_in(psi, &gens)? {
        return Ok(Some(BorelCertificate {
            index: j,
            earlier,
            evidence: BorelEvidence::Expression {
                polynomial: p.to_string(),
            },
        }));
    }
    let gb = doubled_ideal(m, &earlier)?;
    if normal_form(&doubled(psi, m.nvars())?, &gb)?.is_zero() {
        return Ok(Some(BorelCertificate {
            index: j,
            earlier,
            evidence: BorelEvidence::DoubledIdeal {
                basis: gb.generators().iter().map(|g| g.to_string()).collect(),
            },
        }));
    }
    Ok(None)
}

fn route_for(m: &CartanModel, w: &SplittingWitness) -> Route {
    if m.corank == 0 {
        return Route::EqualRank;
    }
    if w.redundant_order.iter().all(|&j| m.images[j].is_zero()) {
        return Route::VanishingRedundantImages;
    }
    let degrees = m.image_degrees();
    let reg: u128 = w
        .regular_subset
        .iter()
        .map(|&i| degrees[i] as u128)
        .product();
    let base: u128 = m
        .base
        .generator_degrees
        .iter()
        .map(|&e| e as u128)
        .product();
    if reg == base {
        Route::FreeCohomology
    } else {
        Route::NestedMembership
    }
}

/// Orders the redundant generators greedily (smallest degree first) so that
/// each one passes the doubled membership test against everything before it.
/// Membership only gets easier as generators are added, so the greedy order
/// succeeds whenever any order does.
pub fn check_equivariant_formality(
    m: &CartanModel,
    w: &SplittingWitness,
) -> Result<EquivariantOutcome> {
    if w.regular_subset.len() != m.nvars()
        || w.regular_subset.len() + w.redundant_order.len() != m.images.len()
    {
        return Err(Error::MissingWitness(format!(
            "{}: splitting witness does not fit the model",
            m.label()
        )));
    }
    let route = route_for(m, w);
    let mut placed = w.regular_subset.clone();
    let degrees = m.image_degrees();
    let mut remaining = w.redundant_order.clone();
    remaining.sort_by_key(|&j| (degrees[j], j));
    let mut certificates = Vec::new();
    while !remaining.is_empty() {
        let mut progress = None;
        for (pos, &j) in remaining.iter().enumerate() {
            if let Some(c) = certify(m, j, &placed)? {
                progress = Some((pos, c));
                break;
            }
        }
        match progress {
            Some((pos, c)) => {
                placed.push(remaining.remove(pos));
                certificates.push(c);
            }
            None => {
                return Ok(EquivariantOutcome {
                    answer: Answer::NoWitnessFound,
                    route: None,
                    witness: None,
                })
            }
        }
    }
    Ok(EquivariantOutcome {
        answer: Answer::Yes,
        route: Some(route),
        witness: Some(EquivariantWitness {
            order: placed,
            certificates,
        }),
    })
}

/// Re-derives each Borel certificate.
pub fn verify_equivariant_witness(
    m: &CartanModel,
    s: &SplittingWitness,
    w: &EquivariantWitness,
) -> Result<bool> {
    let r = s.regular_subset.len();
    if w.order.len() != m.images.len()
        || w.order[..r] != s.regular_subset[..]
        || w.certificates.len() != w.order.len() - r
    {
        return Ok(false);
    }
    let mut sorted = w.order.clone();
    sorted.sort_unstable();
    if sorted != (0..m.images.len()).collect::<Vec<_>>() {
        return Ok(false);
    }
    for (k, cert) in w.certificates.iter().enumerate() {
        let j = w.order[r + k];
        let before = &w.order[..r + k];
        if cert.index != j || cert.earlier.iter().any(|s| !before.contains(s)) {
            return Ok(false);
        }
        let psi = &m.images[j];
        let ok = match &cert.evidence {
            BorelEvidence::ZeroImage => psi.is_zero(),
            BorelEvidence::Expression { polynomial } => {
                let p = Polynomial::parse(polynomial, cert.earlier.len())?;
                let gens: Vec<Polynomial> =
                    cert.earlier.iter().map(|&s| m.images[s].clone()).collect();
                check_expression(&p, &gens, psi)
            }
            BorelEvidence::DoubledIdeal { basis } => {
                let gb = doubled_ideal(m, &cert.earlier)?;
                let text: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
                &text == basis && normal_form(&doubled(psi, m.nvars())?, &gb)?.is_zero()
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::splitting::find_splitting;
    use super::super::tests::model;
    use super::super::{build_model, build_model_from_embedding};
    use super::*;
    use crate::liegroups::{embed_recipe, make_group, TorusMap};

    fn outcome(m: &CartanModel) -> (SplittingWitness, EquivariantOutcome) {
        let w = find_splitting(m).unwrap().expect("formal");
        let e = check_equivariant_formality(m, &w).unwrap();
        (w, e)
    }

    #[test]
    fn vanishing_images() {
        let m = model("Sp(2)", "Sp(1)", "diagonal-double-block");
        let (_, e) = outcome(&m);
        // psi_2 = s^4 = psi_1^2 / 4 is nonzero, so this is not the vanishing route
        assert_eq!(e.route, Some(Route::FreeCohomology));
        let m = model("SU(3)", "SO(3)", "real-in-complex");
        assert_eq!(outcome(&m).1.route, Some(Route::VanishingRedundantImages));
    }

    #[test]
    fn unitary_in_special_unitary_via_symplectic_and_block() {
        let g = make_group("SU(4)").unwrap();
        let k = make_group("U(2)").unwrap();
        let e = embed_recipe(
            "complex-in-quaternionic@Sp(2) > quaternionic-in-complex",
            &g,
            &k,
        )
        .unwrap();
        let m = build_model_from_embedding(&e).unwrap();
        let (w, out) = outcome(&m);
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.route, Some(Route::VanishingRedundantImages));
        assert!(verify_equivariant_witness(&m, &w, out.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn special_orthogonal_routes() {
        let m = model("SO(8)", "Sp(2)", "quaternionic-in-real");
        assert_eq!(outcome(&m).1.route, Some(Route::FreeCohomology));
        let m = model("SO(8)", "SO(4)", "diagonal-double-block");
        let (w, out) = outcome(&m);
        assert_eq!(out.route, Some(Route::NestedMembership));
        assert!(verify_equivariant_witness(&m, &w, out.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn single_copy_membership_is_not_enough() {
        let g = make_group("SU(3)").unwrap();
        let k = make_group("T^1").unwrap();
        let map = TorusMap::new(vec![vec![1], vec![1]], 2, 1).unwrap();
        let m = build_model(&g, &k, &map).unwrap();
        let texts: Vec<String> = m.images.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["-3*t1^2", "-2*t1^3"]);
        let (_, out) = outcome(&m);
        assert_eq!(out.answer, Answer::NoWitnessFound);
    }

    #[test]
    fn tampered_certificate_fails() {
        let m = model("SO(8)", "SO(4)", "diagonal-double-block");
        let (w, out) = outcome(&m);
        let mut eq = out.witness.unwrap();
        let c = eq
            .certificates
            .iter_mut()
            .find(|c| matches!(c.evidence, BorelEvidence::Expression { .. }))
            .unwrap();
        c.evidence = BorelEvidence::Expression {
            polynomial: "0".into(),
        };
        assert!(!verify_equivariant_witness(&m, &w, &eq).unwrap());
    }
}
