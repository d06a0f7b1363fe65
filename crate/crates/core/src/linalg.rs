//! Exact sparse linear algebra over the rationals.

use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactpoly::Rational;

pub type SparseVec = Vec<(usize, Rational)>;

/// Row-echelon basis grown one vector at a time. Each stored row has a
/// unit pivot at its largest column, which keeps fill-in low on the
/// differentials built here.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
    // combination of inserted vectors producing each stored row
    combos: BTreeMap<usize, SparseVec>,
    track: bool,
    inserted: usize,
}

fn axpy(work: &mut BTreeMap<usize, Rational>, c: &Rational, row: &[(usize, Rational)]) {
    for (k, v) in row {
        let delta = c * v;
        match work.get_mut(k) {
            Some(x) => {
                *x += delta;
                if x.is_zero() {
                    work.remove(k);
                }
            }
            None => {
                work.insert(*k, delta);
            }
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Also records how each basis row arises from the inserted vectors.
    pub fn tracking() -> Self {
        Echelon {
            track: true,
            ..Self::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` fully; returns the remainder and, when tracking, the
    /// combination of inserted vectors that was subtracted.
    fn reduce_with(&self, v: &[(usize, Rational)]) -> (SparseVec, BTreeMap<usize, Rational>) {
        let mut work: BTreeMap<usize, Rational> =
            v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        let mut out = Vec::new();
        let mut combo = BTreeMap::new();
        while let Some((k, c)) = work.pop_last() {
            match self.rows.get(&k) {
                Some(row) => {
                    let neg = -c;
                    axpy(&mut work, &neg, &row[1..]);
                    if self.track {
                        axpy(&mut combo, &neg, &self.combos[&k]);
                    }
                }
                None => out.push((k, c)),
            }
        }
        out.reverse();
        (out, combo)
    }

    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns true when it was independent of the basis.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (rem, mut combo) = self.reduce_with(v);
        if rem.is_empty() {
            return false;
        }
        let (pivot, lead) = rem.last().expect("nonzero remainder");
        let (pivot, inv) = (*pivot, lead.recip());
        let row: SparseVec = rem.iter().rev().map(|(k, c)| (*k, c * &inv)).collect();
        if self.track {
            // row = inv * (v + combo)
            axpy(&mut combo, &Rational::one(), &[(id, Rational::one())]);
            let scaled: SparseVec = combo.into_iter().map(|(k, c)| (k, c * &inv)).collect();
            self.combos.insert(pivot, scaled);
        }
        self.rows.insert(pivot, row);
        true
    }

    /// Coefficients `x` (indexed by insertion order) with `sum x_i v_i = target`.
    pub fn solve(&self, target: &[(usize, Rational)]) -> Option<SparseVec> {
        assert!(self.track, "solve needs a tracking echelon");
        let (rem, combo) = self.reduce_with(target);
        if !rem.is_empty() {
            return None;
        }
        // target + combo = 0 in terms of rows; combo is minus the solution
        Some(
            combo
                .into_iter()
                .map(|(k, c)| (k, -c))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Mersenne prime used for modular ranks.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let r = (x as u64 & MODULUS) + (x >> 61) as u64;
    let r = (r & MODULUS) + (r >> 61);
    if r >= MODULUS {
        r - MODULUS
    } else {
        r
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

/// Image of `c` in the prime field, or `None` when the denominator vanishes there.
pub fn reduce_mod(c: &Rational) -> Option<u64> {
    let m = BigInt::from(MODULUS);
    let num = c.numer().mod_floor(&m).to_u64()?;
    let den = c.denom().mod_floor(&m).to_u64()?;
    (den != 0).then(|| mul_mod(num, inv_mod(den)))
}

/// Rank over the prime field. It never exceeds the rank over the rationals.
/// Returns `None` if some coefficient has a denominator divisible by the prime.
pub fn rank_mod(rows: &[SparseVec]) -> Option<usize> {
    let width = rows
        .iter()
        .flat_map(|r| r.iter().map(|(k, _)| k + 1))
        .max()
        .unwrap_or(0);
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; width];
    let mut rank = 0;
    // dense accumulator; the heap may hold stale or repeated columns
    let mut acc = vec![0u64; width];
    let mut heap = BinaryHeap::new();
    for r in rows {
        for (k, c) in r {
            acc[*k] = reduce_mod(c)?;
            heap.push(*k);
        }
        while let Some(k) = heap.pop() {
            let c = std::mem::take(&mut acc[k]);
            if c == 0 {
                continue;
            }
            match &pivots[k] {
                Some(row) => {
                    let neg = MODULUS - c;
                    for &(j, x) in row {
                        if acc[j] == 0 {
                            heap.push(j);
                        }
                        let y = acc[j] + mul_mod(neg, x);
                        acc[j] = if y >= MODULUS { y - MODULUS } else { y };
                    }
                }
                None => {
                    let inv = inv_mod(c);
                    let mut row = Vec::new();
                    while let Some(j) = heap.pop() {
                        let x = std::mem::take(&mut acc[j]);
                        if x != 0 {
                            row.push((j, mul_mod(x, inv)));
                        }
                    }
                    pivots[k] = Some(row);
                    rank += 1;
                }
            }
        }
    }
    Some(rank)
}

/// Solves `sum_i x_i columns[i] = target`, if possible.
pub fn solve(columns: &[SparseVec], target: &[(usize, Rational)]) -> Option<Vec<Rational>> {
    let mut e = Echelon::tracking();
    for c in columns {
        e.insert(c);
    }
    let sparse = e.solve(target)?;
    let mut x = vec![Rational::zero(); columns.len()];
    for (k, c) in sparse {
        x[k] = c;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, c)| (k, rat(c, 1))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn modular_rank_matches_rational_rank() {
        let rows = vec![
            v(&[(0, 3), (1, 6)]),
            v(&[(0, 1), (1, 2), (2, 5)]),
            v(&[(2, 10)]),
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank_mod(&rows), Some(2));
        let half = vec![vec![(0, rat(1, 2))], vec![(0, rat(-3, 4)), (1, rat(1, 3))]];
        assert_eq!(rank_mod(&half), Some(2));
        assert_eq!(reduce_mod(&rat(1, 2)).map(|x| mul_mod(x, 2)), Some(1));
        assert_eq!(rank_mod(&[vec![(0, rat(1, MODULUS as i64))]]), None);
    }

    #[test]
    fn solve_recovers_combination() {
        let cols = vec![
            v(&[(0, 1), (1, 1)]),
            v(&[(1, 1), (2, 1)]),
            v(&[(0, 1), (2, 1)]),
        ];
        // 2*c0 - c1 + 3*c2 = (5, 1, 2)
        let x = solve(&cols, &v(&[(0, 5), (1, 1), (2, 2)])).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(-1, 1), rat(3, 1)]);
        assert!(solve(&cols[..2], &v(&[(0, 1)])).is_none());
    }

    #[test]
    fn solve_with_redundant_columns() {
        let cols = vec![v(&[(0, 2)]), v(&[(0, 4)]), v(&[(1, 3)])];
        let x = solve(&cols, &v(&[(0, 6), (1, 3)])).unwrap();
        let mut check: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, xi) in cols.iter().zip(&x) {
            axpy(&mut check, xi, c);
        }
        assert_eq!(check.into_iter().collect::<Vec<_>>(), v(&[(0, 6), (1, 3)]));
    }
}
