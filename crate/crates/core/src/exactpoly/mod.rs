//! Exact rational polynomials in torus variables of cohomological degree 2.

mod monomial;
mod polynomial;
mod symmetric;
mod text;

pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use symmetric::{elementary_symmetric, elementary_symmetric_of, power_sum, top_class};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> crate::Result<Polynomial> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
