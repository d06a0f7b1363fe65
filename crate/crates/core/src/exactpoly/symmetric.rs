use super::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use num_traits::One;

fn check_indices(vars: &[usize], nvars: usize) -> Result<()> {
    if let Some(&bad) = vars.iter().find(|&&v| v >= nvars) {
        return Err(Error::OutOfRange(format!(
            "variable index {bad} in a ring with {nvars} variables"
        )));
    }
    Ok(())
}

/// `e_k` of the listed variables (0-based), or of their squares when `squared`.
pub fn elementary_symmetric(
    k: usize,
    vars: &[usize],
    squared: bool,
    nvars: usize,
) -> Result<Polynomial> {
    check_indices(vars, nvars)?;
    if k > vars.len() {
        return Err(Error::OutOfRange(format!(
            "e_{k} needs at least {k} variables, got {}",
            vars.len()
        )));
    }
    let power = if squared { 2 } else { 1 };
    let inputs: Vec<Polynomial> = vars
        .iter()
        .map(|&v| {
            let mut e = vec![0u16; nvars];
            e[v] = power;
            Polynomial::monomial(Monomial::from_exponents(e), Rational::one())
        })
        .collect();
    Ok(elementary_symmetric_of(&inputs, k, nvars))
}

/// `e_k(x_1, ..., x_m)` for arbitrary polynomials `x_i`.
pub fn elementary_symmetric_of(xs: &[Polynomial], k: usize, nvars: usize) -> Polynomial {
    // e[j] holds e_j of the prefix processed so far
    let mut e = vec![Polynomial::zero(nvars); k + 1];
    e[0] = Polynomial::one(nvars);
    for x in xs {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * x;
            e[j] = &e[j] + &add;
        }
    }
    e.swap_remove(k)
}

/// Power sum `p_k` of the listed variables (or of their squares).
pub fn power_sum(k: u16, vars: &[usize], squared: bool, nvars: usize) -> Result<Polynomial> {
    check_indices(vars, nvars)?;
    let power = if squared { 2 * k } else { k };
    Ok(Polynomial::from_terms(
        nvars,
        vars.iter().map(|&v| {
            let mut e = vec![0u16; nvars];
            e[v] = power;
            (Monomial::from_exponents(e), Rational::one())
        }),
    ))
}

/// The product `t_{v1} * ... * t_{vm}` (Euler class of SO(2m) for `m` coordinates).
pub fn top_class(vars: &[usize], nvars: usize) -> Result<Polynomial> {
    check_indices(vars, nvars)?;
    if vars.is_empty() {
        return Err(Error::OutOfRange(
            "top class of an empty variable list".into(),
        ));
    }
    let mut e = vec![0u16; nvars];
    for &v in vars {
        e[v] += 1;
    }
    Ok(Polynomial::monomial(
        Monomial::from_exponents(e),
        Rational::one(),
    ))
}
