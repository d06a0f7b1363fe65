use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;

pub type IntMatrix = Vec<Vec<i64>>;

/// Integer linear substitution of torus coordinates: row `i` gives the
/// image of source coordinate `t_i` as a combination of target coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusMap {
    pub matrix: IntMatrix,
    pub source_rank: usize,
    pub target_rank: usize,
}

impl TorusMap {
    /// Checks shape and that the target torus embeds (full column rank).
    pub fn new(matrix: IntMatrix, source_rank: usize, target_rank: usize) -> Result<TorusMap> {
        let map = TorusMap::unchecked(matrix, source_rank, target_rank)?;
        let r = int_rank(&map.matrix, target_rank);
        if r != target_rank {
            return Err(Error::RankMismatch(format!(
                "torus map has rank {r}, but the subgroup torus has rank {target_rank}"
            )));
        }
        Ok(map)
    }

    /// Shape checks only; the map may fail to be injective on the target torus.
    pub fn unchecked(
        matrix: IntMatrix,
        source_rank: usize,
        target_rank: usize,
    ) -> Result<TorusMap> {
        if matrix.len() != source_rank || matrix.iter().any(|r| r.len() != target_rank) {
            return Err(Error::DimensionMismatch(format!(
                "torus map matrix is not {source_rank} x {target_rank}"
            )));
        }
        Ok(TorusMap {
            matrix,
            source_rank,
            target_rank,
        })
    }

    pub fn identity(n: usize) -> TorusMap {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        TorusMap {
            matrix,
            source_rank: n,
            target_rank: n,
        }
    }

    pub fn rank(&self) -> usize {
        int_rank(&self.matrix, self.target_rank)
    }
}

/// `outer: G -> H` followed by `inner: H -> K` gives `G -> K`.
pub fn compose(outer: &TorusMap, inner: &TorusMap) -> Result<TorusMap> {
    if outer.target_rank != inner.source_rank {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose a map into rank {} with a map from rank {}",
            outer.target_rank, inner.source_rank
        )));
    }
    Ok(TorusMap {
        matrix: mat_mul(&outer.matrix, &inner.matrix, inner.target_rank),
        source_rank: outer.source_rank,
        target_rank: inner.target_rank,
    })
}

pub fn substitute_linear(p: &Polynomial, map: &TorusMap) -> Result<Polynomial> {
    if p.nvars() != map.source_rank {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables, map from {} coordinates",
            p.nvars(),
            map.source_rank
        )));
    }
    p.substitute_rows(&map.matrix, map.target_rank)
}

pub(crate) fn mat_mul(a: &IntMatrix, b: &IntMatrix, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            let mut out = vec![0i64; cols];
            for (k, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fraction-free incremental row echelon over the integers.
#[derive(Debug, Clone, Default)]
pub(crate) struct IntSpan {
    rows: Vec<(usize, Vec<i128>)>,
}

impl IntSpan {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                let p = row[*pivot];
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = p * *x - c * y;
                }
                let g = v.iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

pub(crate) fn int_rank(m: &IntMatrix, cols: usize) -> usize {
    let mut span = IntSpan::default();
    for row in m {
        let v: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        debug_assert_eq!(v.len(), cols);
        span.insert(&v);
    }
    span.rank()
}

/// Whether the column spaces of two equally tall matrices coincide.
pub fn same_column_space(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let col = |m: &IntMatrix, j: usize| -> Vec<i128> { m.iter().map(|r| r[j] as i128).collect() };
    let ca = a.first().map(|r| r.len()).unwrap_or(0);
    let cb = b.first().map(|r| r.len()).unwrap_or(0);
    let mut sa = IntSpan::default();
    let mut sb = IntSpan::default();
    let mut both = IntSpan::default();
    for j in 0..ca {
        sa.insert(&col(a, j));
        both.insert(&col(a, j));
    }
    for j in 0..cb {
        sb.insert(&col(b, j));
        both.insert(&col(b, j));
    }
    sa.rank() == sb.rank() && sb.rank() == both.rank()
}
