//! Hilbert numerators of monomial ideals.
//!
//! For a monomial ideal `I` in `n` variables of weight 1 the Hilbert series of
//! `k[x]/I` is `HN(z) / (1 - z)^n`. The numerator is computed by the pivot
//! recursion `HN(I) = HN(I + <p>) + z^deg(p) * HN(I : p)`, which never
//! enumerates standard monomials.

use crate::exactpoly::Monomial;

/// Dense integer polynomial in `z`, lowest coefficient first.
pub(crate) type Numerator = Vec<i128>;

fn add_into(acc: &mut Numerator, other: &[i128], shift: usize) {
    if acc.len() < other.len() + shift {
        acc.resize(other.len() + shift, 0);
    }
    for (i, &c) in other.iter().enumerate() {
        acc[i + shift] += c;
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

pub(crate) fn hilbert_numerator(gens: &[Monomial]) -> Numerator {
    numerator_rec(minimalize(gens.to_vec()))
}

fn numerator_rec(gens: Vec<Monomial>) -> Numerator {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    let nvars = gens[0].nvars();

    // pairwise coprime generators: product of (1 - z^deg)
    let mut support_count = vec![0usize; nvars];
    for g in &gens {
        for (i, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                support_count[i] += 1;
            }
        }
    }
    let (pivot_var, &count) = support_count
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
        .unwrap();
    if count <= 1 {
        let mut acc: Numerator = vec![1];
        for g in &gens {
            let d = g.degree() as usize;
            let mut next = vec![0i128; acc.len() + d];
            for (i, &c) in acc.iter().enumerate() {
                next[i] += c;
                next[i + d] -= c;
            }
            acc = next;
        }
        return acc;
    }

    let mut exps: Vec<u16> = gens
        .iter()
        .map(|g| g.exponent(pivot_var))
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let k = exps[(exps.len() - 1) / 2];
    let mut pivot_exps = vec![0u16; nvars];
    pivot_exps[pivot_var] = k;
    let pivot = Monomial::from_exponents(pivot_exps);

    // I + <p>
    let mut sum: Vec<Monomial> = gens.iter().filter(|g| !pivot.divides(g)).cloned().collect();
    sum.push(pivot.clone());
    // I : p
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut e = g.exponents().to_vec();
            e[pivot_var] = e[pivot_var].saturating_sub(k);
            Monomial::from_exponents(e)
        })
        .collect();

    let mut acc = numerator_rec(minimalize(sum));
    let colon_part = numerator_rec(minimalize(colon));
    add_into(&mut acc, &colon_part, k as usize);
    while acc.len() > 1 && *acc.last().unwrap() == 0 {
        acc.pop();
    }
    acc
}

/// Series coefficients (in exponent degree) of `num / (1 - z)^n` up to `max`.
pub(crate) fn series_from_numerator(num: &[i128], nvars: usize, max: usize) -> Vec<i128> {
    let mut coeffs = vec![0i128; max + 1];
    for (i, &c) in num.iter().enumerate().take(max + 1) {
        coeffs[i] = c;
    }
    for _ in 0..nvars {
        for i in 1..=max {
            coeffs[i] += coeffs[i - 1];
        }
    }
    coeffs
}

/// Exact quotient `num / (1 - z)^n` when it is a polynomial.
pub(crate) fn divide_by_one_minus_z(num: &[i128], times: usize) -> Option<Vec<i128>> {
    let mut cur = num.to_vec();
    for _ in 0..times {
        // cur = (1 - z) * q; q_i = cur_i + q_{i-1}
        let mut q = Vec::with_capacity(cur.len());
        let mut prev = 0i128;
        for &c in &cur {
            prev += c;
            q.push(prev);
        }
        if q.pop() != Some(0) {
            return None;
        }
        cur = q;
        if cur.is_empty() {
            return None;
        }
    }
    Some(cur)
}
