//! Writing a polynomial as a polynomial in given homogeneous generators.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactpoly::{Monomial, Polynomial};
use crate::linalg::{Echelon, SparseVec};

/// All exponent vectors `a` with `sum a_i * weights[i] == target`.
/// Zero weights are skipped (their exponent stays 0).
pub fn weighted_exponents(weights: &[u32], target: u32) -> Vec<Vec<u16>> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        if w == 0 {
            cur.push(0);
            go(weights, i + 1, left, cur, out);
            cur.pop();
            return;
        }
        let mut k = 0u32;
        while k * w <= left {
            cur.push(k as u16);
            go(weights, i + 1, left - k * w, cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Products of powers of a fixed list of polynomials, memoized.
pub(crate) struct PowerTable<'a> {
    gens: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerTable<'a> {
    pub fn new(gens: &'a [Polynomial]) -> Self {
        let powers = gens
            .iter()
            .map(|g| vec![Polynomial::one(g.nvars())])
            .collect();
        PowerTable { gens, powers }
    }

    fn power(&mut self, i: usize, k: u16) -> &Polynomial {
        while self.powers[i].len() <= k as usize {
            let next = self.powers[i].last().unwrap() * &self.gens[i];
            self.powers[i].push(next);
        }
        &self.powers[i][k as usize]
    }

    pub fn product(&mut self, exps: &[u16], nvars: usize) -> Polynomial {
        let mut acc = Polynomial::one(nvars);
        for (i, &k) in exps.iter().enumerate() {
            if k > 0 {
                acc = &acc * &self.power(i, k).clone();
            }
        }
        acc
    }
}

/// Solves `target = P(gens)` with `P` weighted-homogeneous. Returns `P` as a
/// polynomial in `gens.len()` variables (the variable count may be zero).
pub fn express_in(target: &Polynomial, gens: &[Polynomial]) -> Result<Option<Polynomial>> {
    let nvars = target.nvars();
    if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::VariableCountMismatch {
            left: nvars,
            right: g.nvars(),
        });
    }
    let m = gens.len();
    if target.is_zero() {
        return Ok(Some(Polynomial::zero(m)));
    }
    let degree = target
        .homogeneous_degree()
        .ok_or_else(|| Error::NotHomogeneous(target.to_string()))?;
    let mut weights = Vec::with_capacity(m);
    for g in gens {
        match g.homogeneous_degree() {
            Some(d) if !g.is_zero() => weights.push(d),
            _ if g.is_zero() => weights.push(0),
            _ => return Err(Error::NotHomogeneous(g.to_string())),
        }
    }
    if weights.iter().all(|&w| w == 0) {
        return Ok(None);
    }
    let candidates = weighted_exponents(&weights, degree);
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let to_vec = |p: &Polynomial, index: &mut HashMap<Monomial, usize>| -> SparseVec {
        let mut v: SparseVec = p
            .terms()
            .iter()
            .map(|(mono, c)| {
                let n = index.len();
                (*index.entry(mono.clone()).or_insert(n), c.clone())
            })
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    };
    let mut table = PowerTable::new(gens);
    let mut echelon = Echelon::tracking();
    for exps in &candidates {
        let col = table.product(exps, nvars);
        let v = to_vec(&col, &mut index);
        echelon.insert(&v);
    }
    let t = to_vec(target, &mut index);
    let Some(sol) = echelon.solve(&t) else {
        return Ok(None);
    };
    let terms = sol
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (Monomial::from_exponents(candidates[k].iter().copied()), c));
    let p = Polynomial::from_terms(m, terms);
    Ok(Some(p))
}

/// Evaluates `p(gens)` and compares with `target`.
pub fn check_expression(p: &Polynomial, gens: &[Polynomial], target: &Polynomial) -> bool {
    p.nvars() == gens.len() && gens.iter().all(|g| g.nvars() == target.nvars()) && {
        let mut table = PowerTable::new(gens);
        let mut acc = Polynomial::zero(target.nvars());
        for (mono, c) in p.terms() {
            let term = table.product(mono.exponents(), target.nvars()).scale(c);
            acc = &acc + &term;
        }
        &acc == target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn exponent_enumeration() {
        let e = weighted_exponents(&[4, 8], 16);
        assert_eq!(e, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        assert_eq!(weighted_exponents(&[4], 6), Vec::<Vec<u16>>::new());
    }

    #[test]
    fn quarter_square() {
        let gens = vec![p("2*t1^2", 1)];
        let target = p("t1^4", 1);
        let e = express_in(&target, &gens).unwrap().unwrap();
        assert_eq!(e.to_string(), "1/4*t1^2");
        assert!(check_expression(&e, &gens, &target));
    }

    #[test]
    fn not_in_subalgebra() {
        let gens = vec![p("t1^2 + t2^2", 2)];
        assert!(express_in(&p("t1^2*t2^2", 2), &gens).unwrap().is_none());
    }
}
