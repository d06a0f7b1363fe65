//! Kernel checks shared by the property suites and the acceptance run.
#![allow(dead_code)]

use isoformal::exactpoly::{elementary_symmetric, power_sum, Monomial, Polynomial, Rational};
use isoformal::groebner::ideal_member;
use isoformal::liegroups::{make_group, substitute_linear, GroupDatum, WeylElement, WeylType};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn int(c: i64) -> Rational {
    Rational::from_integer(BigInt::from(c))
}

pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u16>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(nvars - 1, degree - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

pub fn homogeneous(nvars: usize, degree: u32, coeffs: &[i64]) -> Polynomial {
    let terms = monomials(nvars, degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(e, &c)| (Monomial::from_exponents(e), int(c)));
    Polynomial::from_terms(nvars, terms)
}

// Newton identities

pub fn e_k(k: usize, n: usize) -> Polynomial {
    if k > n {
        Polynomial::zero(n)
    } else {
        elementary_symmetric(k, &(0..n).collect::<Vec<_>>(), false, n).unwrap()
    }
}

/// k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
pub fn check_newton(n: usize, k: usize) -> Result<(), TestCaseError> {
    let vars: Vec<usize> = (0..n).collect();
    let mut rhs = Polynomial::zero(n);
    for i in 1..=k {
        let p = power_sum(i as u16, &vars, false, n).unwrap();
        let term = &e_k(k - i, n) * &p;
        rhs = if i % 2 == 1 {
            &rhs + &term
        } else {
            &rhs - &term
        };
    }
    let lhs = e_k(k, n).scale(&int(k as i64));
    prop_assert_eq!(lhs, rhs, "n = {}, k = {}", n, k);
    Ok(())
}

// Gröbner membership against a linear-algebra oracle: for homogeneous
// generators, p of degree D is in the ideal iff it lies in the span of
// m * g_i over monomials m of degree D - deg g_i.

pub fn in_span(rows: &[Vec<Rational>], target: &[Rational]) -> bool {
    let width = target.len();
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let reduce = |v: &mut Vec<Rational>, basis: &[(usize, Vec<Rational>)]| {
        for (p, b) in basis {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for j in 0..width {
                    v[j] = &v[j] - &c * &b[j];
                }
            }
        }
    };
    for r in rows {
        let mut v = r.clone();
        reduce(&mut v, &basis);
        if let Some(p) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[p].recip();
            let v: Vec<Rational> = v.iter().map(|c| c * &inv).collect();
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let c = b[p].clone();
                    for j in 0..width {
                        b[j] = &b[j] - &c * &v[j];
                    }
                }
            }
            basis.push((p, v));
        }
    }
    let mut t = target.to_vec();
    reduce(&mut t, &basis);
    t.iter().all(Rational::is_zero)
}

pub fn membership_oracle(
    p: &Polynomial,
    gens: &[(u32, Polynomial)],
    degree: u32,
    nvars: usize,
) -> bool {
    let cols = monomials(nvars, degree);
    let vector = |q: &Polynomial| -> Vec<Rational> {
        cols.iter()
            .map(|e| q.coefficient(&Monomial::from_exponents(e.clone())))
            .collect()
    };
    let mut rows = Vec::new();
    for (d, g) in gens {
        if *d > degree {
            continue;
        }
        for m in monomials(nvars, degree - d) {
            let shifted = g.mul_term(&Monomial::from_exponents(m), &Rational::one());
            rows.push(vector(&shifted));
        }
    }
    in_span(&rows, &vector(p))
}

#[derive(Debug, Clone)]
pub struct MembershipCase {
    pub nvars: usize,
    pub gens: Vec<(u32, Polynomial)>,
    pub degree: u32,
    pub target: Polynomial,
}

pub fn arb_membership_case() -> impl Strategy<Value = MembershipCase> {
    (1usize..=3).prop_flat_map(|nvars| {
        let gen = (1u32..=4, prop::collection::vec(-3i64..=3, 1..8));
        (
            prop::collection::vec(gen, 1..=3),
            2u32..=8,
            prop::collection::vec(-3i64..=3, 1..12),
            prop::collection::vec(prop::collection::vec(-2i64..=2, 1..6), 3),
            any::<bool>(),
        )
            .prop_map(move |(specs, degree, coeffs, mults, combine)| {
                let gens: Vec<(u32, Polynomial)> = specs
                    .into_iter()
                    .map(|(d, c)| (d, homogeneous(nvars, d, &c)))
                    .filter(|(_, g)| !g.is_zero())
                    .collect();
                let target = if combine {
                    // a combination of the generators, so usually a member
                    gens.iter()
                        .zip(&mults)
                        .fold(Polynomial::zero(nvars), |acc, ((d, g), m)| {
                            if *d > degree {
                                return acc;
                            }
                            &acc + &(&homogeneous(nvars, degree - d, m) * g)
                        })
                } else {
                    homogeneous(nvars, degree, &coeffs)
                };
                MembershipCase {
                    nvars,
                    gens,
                    degree,
                    target,
                }
            })
    })
}

pub fn check_membership(case: &MembershipCase) -> Result<(), TestCaseError> {
    if case.gens.is_empty() {
        return Ok(());
    }
    let gens: Vec<Polynomial> = case.gens.iter().map(|(_, g)| g.clone()).collect();
    let cert = ideal_member(&case.target, &gens).unwrap();
    let expected = membership_oracle(&case.target, &case.gens, case.degree, case.nvars);
    prop_assert_eq!(cert.member, expected, "{:?}", case);
    prop_assert_eq!(cert.remainder.is_zero(), expected);
    Ok(())
}

// Weyl invariance of the invariant generators

/// Every classical simple group of rank 1 to 6, with U(n) and tori.
pub fn classical_groups() -> Vec<String> {
    let mut out = Vec::new();
    for r in 1..=6 {
        out.push(format!("SU({})", r + 1));
        out.push(format!("U({r})"));
        out.push(format!("SO({})", 2 * r + 1));
        out.push(format!("Sp({r})"));
        out.push(format!("T^{r}"));
        if r >= 2 {
            out.push(format!("SO({})", 2 * r));
        }
    }
    out.extend(["SU(3)xSp(2)", "SO(8)xU(2)"].map(String::from));
    out
}

/// A Weyl element built block by block from a seed.
pub fn weyl_element(g: &GroupDatum, seed: &[u64]) -> WeylElement {
    let n = g.ambient_dim();
    let mut w = WeylElement::identity(n);
    let mut next = seed.iter().cycle();
    for b in g.weyl_blocks() {
        if b.kind == WeylType::Trivial {
            continue;
        }
        let mut idx: Vec<usize> = (b.start..b.start + b.len).collect();
        for i in (1..idx.len()).rev() {
            let j = (*next.next().unwrap() % (i as u64 + 1)) as usize;
            idx.swap(i, j);
        }
        let mut signs: Vec<i8> = (0..b.len)
            .map(|_| {
                if b.kind != WeylType::A && next.next().unwrap() % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        if b.kind == WeylType::D && signs.iter().filter(|&&s| s < 0).count() % 2 == 1 {
            signs[0] = -signs[0];
        }
        for (k, p) in (b.start..b.start + b.len).enumerate() {
            w.perm[p] = idx[k];
            w.signs[p] = signs[k];
        }
    }
    w
}

pub fn check_weyl_invariance(label: &str, seed: &[u64]) -> Result<(), TestCaseError> {
    let g = make_group(label).unwrap();
    let w = weyl_element(&g, seed);
    prop_assert!(w.is_legal(&g), "{} {:?}", label, w);
    let map = w.as_torus_map(&g).unwrap();
    for f in g.invariants().unwrap() {
        prop_assert_eq!(
            substitute_linear(f, &map).unwrap(),
            f.clone(),
            "{} {:?}",
            label,
            w
        );
    }
    Ok(())
}
