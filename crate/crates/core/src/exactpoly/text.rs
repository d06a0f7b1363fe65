//! Canonical text form: `2*t1^2 - 1/3*t1*t2`.
//!
//! Terms appear in decreasing monomial order, unit coefficients are
//! omitted on non-constant terms, and the zero polynomial prints as `0`.
//! `parse(emit(p)) == p` and `emit(parse(s)) == s` for canonical `s`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let body = monomial_text(m);
            if body.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{}", abs, body)?;
            }
        }
        Ok(())
    }
}

fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("t{}", i + 1)),
            _ => parts.push(format!("t{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

impl Polynomial {
    /// Parses the canonical text form (whitespace-insensitive; factors may
    /// repeat and coefficients may appear anywhere in a product).
    pub fn parse(text: &str, nvars: usize) -> Result<Polynomial> {
        let err = |reason: &str| Error::PolynomialSyntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }

        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos > 0 {
                return Err(err("expected `+` or `-` between terms"));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let body = &compact[start..pos];
            if body.is_empty() {
                return Err(err("missing term"));
            }
            let (m, mut c) = parse_term(body, nvars).map_err(|r| err(&r))?;
            if sign < 0 {
                c = -c;
            }
            terms.push((m, c));
        }
        Ok(Polynomial::from_terms(nvars, terms))
    }
}

fn parse_term(body: &str, nvars: usize) -> std::result::Result<(Monomial, Rational), String> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u16; nvars];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err("empty factor".into());
        }
        if let Some(rest) = factor.strip_prefix('t') {
            let (idx, pow) = match rest.split_once('^') {
                Some((i, p)) => (
                    i,
                    p.parse::<u16>()
                        .map_err(|_| format!("bad exponent in `{factor}`"))?,
                ),
                None => (rest, 1),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| format!("bad variable `{factor}`"))?;
            if idx == 0 || idx > nvars {
                return Err(format!("variable t{idx} outside t1..t{nvars}"));
            }
            exps[idx - 1] = exps[idx - 1]
                .checked_add(pow)
                .ok_or_else(|| "exponent overflow".to_string())?;
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    Ok((Monomial::from_exponents(exps), coeff))
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad number `{s}`"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad number `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for s in [
            "2*t1^2 - 1/3*t1*t2",
            "-t1^3 + t2^3",
            "0",
            "7/2",
            "t1*t2*t3 - 5",
            "-1/4*t2^4",
        ] {
            let p = Polynomial::parse(s, 3).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn non_canonical_input_normalizes() {
        let p = Polynomial::parse(" t2*t1 + 2/4 * t1 * t2 - 3 + 3", 2).unwrap();
        assert_eq!(p.to_string(), "3/2*t1*t2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(Polynomial::parse("", 2).is_err());
        assert!(Polynomial::parse("t3", 2).is_err());
        assert!(Polynomial::parse("t0", 2).is_err());
        assert!(Polynomial::parse("1/0", 2).is_err());
        assert!(Polynomial::parse("t1**t2", 2).is_err());
        assert!(Polynomial::parse("x1", 2).is_err());
        assert!(Polynomial::parse("t1 +", 2).is_err());
    }
}
