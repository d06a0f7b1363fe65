//! Integer arithmetic over family parameters: `{a+b+c}` placeholders in
//! labels and constraints such as `a%2 + b%2 <= 1`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Params = BTreeMap<String, i64>;

fn bad(text: &str, why: &str) -> Error {
    Error::Catalog(format!("cannot evaluate `{text}`: {why}"))
}

struct Parser<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
    params: &'a Params,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<i64> {
        let mut v = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if c == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<i64> {
        let mut v = self.atom()?;
        while let Some(c @ ('*' | '/' | '%')) = self.peek() {
            self.pos += 1;
            let rhs = self.atom()?;
            v = match c {
                '*' => v * rhs,
                _ if rhs == 0 => return Err(bad(self.text, "division by zero")),
                '/' => v.div_euclid(rhs),
                _ => v.rem_euclid(rhs),
            };
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<i64> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(bad(self.text, "unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                s.parse().map_err(|_| bad(self.text, "number too large"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.params
                    .get(&name)
                    .copied()
                    .ok_or_else(|| bad(self.text, &format!("unknown parameter `{name}`")))
            }
            _ => Err(bad(
                self.text,
                "expected a number, parameter or parenthesis",
            )),
        }
    }
}

pub fn evaluate(text: &str, params: &Params) -> Result<i64> {
    let mut p = Parser {
        text,
        chars: text.chars().collect(),
        pos: 0,
        params,
    };
    let v = p.sum()?;
    if p.peek().is_some() {
        return Err(bad(text, "trailing input"));
    }
    Ok(v)
}

const OPS: [&str; 6] = ["<=", ">=", "==", "!=", "<", ">"];

/// Evaluates one comparison `lhs op rhs`.
pub fn holds(constraint: &str, params: &Params) -> Result<bool> {
    for op in OPS {
        if let Some((l, r)) = constraint.split_once(op) {
            let (l, r) = (evaluate(l, params)?, evaluate(r, params)?);
            return Ok(match op {
                "<=" => l <= r,
                ">=" => l >= r,
                "==" => l == r,
                "!=" => l != r,
                "<" => l < r,
                _ => l > r,
            });
        }
    }
    Err(Error::Catalog(format!(
        "constraint `{constraint}` has no comparison"
    )))
}

/// Replaces every `{expr}` with its value.
pub fn fill(template: &str, params: &Params) -> Result<String> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| Error::Catalog(format!("unclosed placeholder in `{template}`")))?;
        out.push_str(&evaluate(&rest[open + 1..open + close], params)?.to_string());
        rest = &rest[open + close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, i64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn arithmetic_and_placeholders() {
        let p = params(&[("a", 3), ("b", 4)]);
        assert_eq!(evaluate("2*(a+b) - 1", &p).unwrap(), 13);
        assert_eq!(evaluate("a%2 + b%2", &p).unwrap(), 1);
        assert_eq!(
            fill("SO({a+b})/SO({a})SO({b})", &p).unwrap(),
            "SO(7)/SO(3)SO(4)"
        );
        assert_eq!(fill("E6", &p).unwrap(), "E6");
    }

    #[test]
    fn comparisons() {
        let p = params(&[("a", 3), ("b", 4)]);
        assert!(holds("a <= b", &p).unwrap());
        assert!(holds("a % 2 == 1", &p).unwrap());
        assert!(!holds("a >= b", &p).unwrap());
        assert!(holds("a != b", &p).unwrap());
    }

    #[test]
    fn errors() {
        let p = params(&[("a", 1)]);
        assert!(evaluate("a + z", &p).is_err());
        assert!(evaluate("(a", &p).is_err());
        assert!(evaluate("a / 0", &p).is_err());
        assert!(holds("a", &p).is_err());
        assert!(fill("SU({a", &p).is_err());
    }
}
