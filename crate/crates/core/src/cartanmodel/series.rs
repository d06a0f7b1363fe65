//! Integer polynomials in `q` for Poincaré and Hilbert series bookkeeping.

pub type Series = Vec<i128>;

pub fn trim(mut s: Series) -> Series {
    while s.len() > 1 && *s.last().unwrap() == 0 {
        s.pop();
    }
    s
}

pub fn mul(a: &[i128], b: &[i128]) -> Series {
    if a.is_empty() || b.is_empty() {
        return vec![0];
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `1 + sign * q^d`
pub fn binomial(d: u32, sign: i128) -> Series {
    let mut s = vec![0i128; d as usize + 1];
    s[0] += 1;
    s[d as usize] += sign;
    s
}

pub fn product_one_plus(degrees: &[u32]) -> Series {
    degrees
        .iter()
        .fold(vec![1], |acc, &d| mul(&acc, &binomial(d, 1)))
}

pub fn product_one_minus(degrees: &[u32]) -> Series {
    degrees
        .iter()
        .fold(vec![1], |acc, &d| mul(&acc, &binomial(d, -1)))
}

/// Exact quotient `num / den` when `den` has constant term 1 and divides `num`.
pub fn divide_exact(num: &[i128], den: &[i128]) -> Option<Series> {
    let num = trim(num.to_vec());
    let den = trim(den.to_vec());
    if den.first() != Some(&1) {
        return None;
    }
    if num.len() < den.len() {
        return if num.iter().all(|&x| x == 0) {
            Some(vec![0])
        } else {
            None
        };
    }
    let qlen = num.len() - den.len() + 1;
    let mut q = vec![0i128; qlen];
    for k in 0..qlen {
        let mut c = num[k];
        for i in 1..den.len().min(k + 1) {
            c -= den[i] * q[k - i];
        }
        q[k] = c;
    }
    let q = trim(q);
    if mul(&q, &den) == num {
        Some(q)
    } else {
        None
    }
}

pub fn evaluate_at_one(s: &[i128]) -> i128 {
    s.iter().sum()
}

/// Coefficients as non-negative integers (Poincaré polynomials).
pub fn to_counts(s: &[i128]) -> Option<Vec<u64>> {
    s.iter().map(|&c| u64::try_from(c).ok()).collect()
}

/// Human-readable form like `1 + q^5 + 2*q^8`.
pub fn display(s: &[i128]) -> String {
    let mut parts = Vec::new();
    for (d, &c) in s.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let body = match (d, c) {
            (0, _) => c.to_string(),
            (1, 1) => "q".to_string(),
            (1, _) => format!("{c}*q"),
            (_, 1) => format!("q^{d}"),
            _ => format!("{c}*q^{d}"),
        };
        parts.push(body);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_intersection_quotient() {
        // (1-q^4)(1-q^8)/(1-q^2)^2
        let num = product_one_minus(&[4, 8]);
        let den = product_one_minus(&[2, 2]);
        let q = divide_exact(&num, &den).unwrap();
        assert_eq!(q, vec![1, 0, 2, 0, 2, 0, 2, 0, 1]);
        assert_eq!(evaluate_at_one(&q), 8);
    }

    #[test]
    fn non_divisible() {
        assert!(divide_exact(&product_one_minus(&[4]), &product_one_minus(&[6])).is_none());
    }

    #[test]
    fn spheres() {
        let p = product_one_plus(&[11, 15]);
        assert_eq!(display(&p), "1 + q^11 + q^15 + q^26");
    }
}
