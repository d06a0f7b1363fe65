//! Brute-force cohomology of pure Sullivan algebras by linear algebra on
//! graded pieces, and the fiber-restriction test on the Borel model.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::express::{express_in, weighted_exponents};
use super::verdict::SplittingWitness;
use super::CartanModel;
use crate::error::{Error, Result};
use crate::exactpoly::{Monomial, Polynomial, Rational};
use crate::linalg::{self, Echelon, SparseVec};

/// Largest graded piece the oracle will build.
pub const DEFAULT_BASIS_LIMIT: usize = 400_000;

/// `(Q[y] ⊗ Λ(v), d)` with `d y = 0` and `d v_j = differentials[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureModel {
    pub even_degrees: Vec<u32>,
    pub odd_degrees: Vec<u32>,
    /// Polynomials in the even generators (variable `i` has weight `even_degrees[i]`).
    pub differentials: Vec<Polynomial>,
}

/// The Borel model of the isotropy action: two copies `u, w` of a base ring
/// and `d v_j = psi_j(u) - psi_j(w)`. The base is either the torus ring of K
/// (every variable of degree 2) or the invariant ring `H*(BK)` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelModel {
    pub copy_rank: usize,
    /// Degrees of the variables of one copy.
    pub copy_degrees: Vec<u32>,
    pub model: PureModel,
}

impl BorelModel {
    /// The differential of every odd generator lies in the polynomial part
    /// and has the right degree, so `d^2 = 0` on generators.
    pub fn differential_squares_vanish(&self) -> bool {
        self.model.is_well_formed()
    }

    /// The fiber model obtained by setting the first copy to zero.
    pub fn fiber(&self) -> PureModel {
        let r = self.copy_rank;
        let kill: Vec<Vec<i64>> = (0..2 * r)
            .map(|i| (0..r).map(|j| i64::from(i == r + j)).collect())
            .collect();
        PureModel {
            even_degrees: self.copy_degrees.clone(),
            odd_degrees: self.model.odd_degrees.clone(),
            differentials: self
                .model
                .differentials
                .iter()
                .map(|p| p.substitute_rows(&kill, r).expect("shape"))
                .collect(),
        }
    }
}

impl PureModel {
    fn weight(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.even_degrees)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    pub fn is_well_formed(&self) -> bool {
        self.differentials.len() == self.odd_degrees.len()
            && self.even_degrees.iter().all(|&d| d > 0 && d % 2 == 0)
            && self.odd_degrees.iter().all(|&d| d % 2 == 1)
            && self
                .differentials
                .iter()
                .zip(&self.odd_degrees)
                .all(|(p, &d)| {
                    p.nvars() == self.even_degrees.len()
                        && p.terms().iter().all(|(m, _)| self.weight(m) == d + 1)
                })
    }
}

/// Builds the pure model with even generators the invariant generators of
/// K, so its cohomology is that of `G/K` itself.
pub fn cartan_pure_model(m: &CartanModel) -> Result<PureModel> {
    let gens = m.base.invariants()?;
    let differentials = m
        .images
        .iter()
        .map(|psi| {
            express_in(psi, gens)?.ok_or_else(|| {
                Error::Inconsistent(format!("{}: image {psi} is not Weyl-invariant", m.label()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PureModel {
        even_degrees: m.base.generator_degrees.clone(),
        odd_degrees: m.fiber_degrees.clone(),
        differentials,
    })
}

fn doubled_model(
    images: &[Polynomial],
    copy_degrees: Vec<u32>,
    odd_degrees: Vec<u32>,
) -> Result<BorelModel> {
    let r = copy_degrees.len();
    let differentials = images
        .iter()
        .map(|p| Ok(&p.embed(2 * r, 0)? - &p.embed(2 * r, r)?))
        .collect::<Result<Vec<_>>>()?;
    let even_degrees = copy_degrees.iter().chain(&copy_degrees).copied().collect();
    Ok(BorelModel {
        copy_rank: r,
        copy_degrees,
        model: PureModel {
            even_degrees,
            odd_degrees,
            differentials,
        },
    })
}

/// Borel model over two copies of the torus ring of K.
pub fn build_borel_model(m: &CartanModel) -> Result<BorelModel> {
    doubled_model(&m.images, vec![2; m.nvars()], m.fiber_degrees.clone())
}

/// Borel model over two copies of `H*(BK)`. Far fewer monomials per degree
/// than the torus version, which makes rank-8 instances affordable.
pub fn build_invariant_borel_model(m: &CartanModel) -> Result<BorelModel> {
    let p = cartan_pure_model(m)?;
    doubled_model(&p.differentials, p.even_degrees, p.odd_degrees)
}

type Cell = (Vec<u16>, u64);

/// Monomial basis of one degree: even exponent vector times an exterior word.
struct Piece {
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
}

struct Complex<'a> {
    model: &'a PureModel,
    limit: usize,
    pieces: HashMap<u32, Piece>,
    // odd subsets grouped by total degree
    words: Vec<(u64, u32)>,
}

impl<'a> Complex<'a> {
    fn new(model: &'a PureModel, limit: usize) -> Result<Self> {
        let n = model.odd_degrees.len();
        if n > 40 {
            return Err(Error::ResourceBound(format!("{n} odd generators")));
        }
        let mut words = Vec::with_capacity(1 << n.min(20));
        let mut stack = vec![(0u64, 0u32, 0usize)];
        while let Some((mask, deg, next)) = stack.pop() {
            words.push((mask, deg));
            for i in next..n {
                stack.push((mask | (1 << i), deg + model.odd_degrees[i], i + 1));
            }
            if words.len() > limit {
                return Err(Error::ResourceBound("too many exterior words".into()));
            }
        }
        words.sort_unstable_by_key(|&(m, d)| (d, m));
        Ok(Complex {
            model,
            limit,
            pieces: HashMap::new(),
            words,
        })
    }

    fn piece(&mut self, k: u32) -> Result<&Piece> {
        if !self.pieces.contains_key(&k) {
            let mut cells = Vec::new();
            for &(mask, d) in &self.words {
                if d > k {
                    break;
                }
                for e in weighted_exponents(&self.model.even_degrees, k - d) {
                    cells.push((e, mask));
                    if cells.len() > self.limit {
                        return Err(Error::ResourceBound(format!(
                            "degree {k} has more than {} basis elements",
                            self.limit
                        )));
                    }
                }
            }
            let index = cells
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (c, i))
                .collect();
            self.pieces.insert(k, Piece { cells, index });
        }
        Ok(&self.pieces[&k])
    }

    /// `d` of a basis cell, as a sparse vector in degree `k + 1`.
    fn differential(&mut self, k: u32, cell: &Cell) -> Result<SparseVec> {
        let model = self.model;
        let target = self.piece(k + 1)?;
        let (exps, mask) = cell;
        let mut out: HashMap<usize, Rational> = HashMap::new();
        let mut below = 0u32;
        for (i, psi) in model.differentials.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let sign = if below.is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            };
            below += 1;
            let rest = mask & !(1 << i);
            for (mono, c) in psi.terms() {
                let e: Vec<u16> = exps
                    .iter()
                    .zip(mono.exponents())
                    .map(|(a, b)| a + b)
                    .collect();
                let col = *target
                    .index
                    .get(&(e, rest))
                    .ok_or_else(|| Error::Inconsistent("differential leaves its degree".into()))?;
                let v = out.entry(col).or_insert_with(Rational::zero);
                *v += &sign * c;
            }
        }
        let mut v: SparseVec = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|(k, _)| *k);
        Ok(v)
    }

    fn differential_rows(&mut self, k: u32) -> Result<Vec<SparseVec>> {
        let cells = self.piece(k)?.cells.clone();
        cells.iter().map(|c| self.differential(k, c)).collect()
    }
}

fn differential_rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rows of `d` in degree `k`, split by exterior word length. `d` lowers the
/// word length by one, so each block is a separate map.
fn blocks(c: &mut Complex, k: u32) -> Result<Vec<Vec<SparseVec>>> {
    let n = c.model.odd_degrees.len();
    let rows = c.differential_rows(k)?;
    let mut out = vec![Vec::new(); n + 1];
    for (cell, row) in c.piece(k)?.cells.iter().zip(rows) {
        out[cell.1.count_ones() as usize].push(row);
    }
    Ok(out)
}

/// Betti numbers `b_0..b_N` of a pure model.
///
/// Ranks are taken modulo a prime first; the resulting Betti numbers bound
/// the rational ones from above in every bidegree (degree, word length). A
/// block can lose rank modulo the prime only if both its source and target
/// carry modular cohomology, and exactly those blocks are redone over the
/// rationals.
pub fn pure_cohomology_upto(model: &PureModel, n: u32, limit: usize) -> Result<Vec<u64>> {
    if !model.is_well_formed() {
        return Err(Error::Inconsistent("malformed pure model".into()));
    }
    let words = model.odd_degrees.len() + 1;
    let mut c = Complex::new(model, limit)?;
    let mut rows = Vec::with_capacity(n as usize + 2);
    let mut dims = Vec::with_capacity(n as usize + 2);
    let mut ranks = Vec::with_capacity(n as usize + 2);
    for k in 0..=n + 1 {
        let b = blocks(&mut c, k)?;
        dims.push(b.iter().map(Vec::len).collect::<Vec<_>>());
        ranks.push(b.iter().map(|r| linalg::rank_mod(r)).collect::<Vec<_>>());
        rows.push(b);
    }
    let betti = |ranks: &[Vec<Option<usize>>], k: usize, l: usize| -> Option<usize> {
        let inward = if k > 0 && l + 1 < words {
            ranks[k - 1][l + 1]?
        } else {
            0
        };
        Some(dims[k][l] - ranks[k][l]? - inward)
    };
    let modular = ranks.clone();
    for k in 0..=n as usize {
        for l in 1..words {
            let ambiguous = match (betti(&modular, k, l), betti(&modular, k + 1, l - 1)) {
                (Some(s), Some(t)) => s > 0 && t > 0,
                _ => true,
            };
            if ambiguous {
                ranks[k][l] = Some(differential_rank(&rows[k][l]));
            }
        }
    }
    // every block up to degree n now has a rank: blocks of word length 0
    // map to zero and the others were resolved above when not modular
    Ok((0..=n as usize)
        .map(|k| {
            (0..words)
                .map(|l| betti(&ranks, k, l).expect("rank resolved") as u64)
                .sum()
        })
        .collect())
}

/// Cohomology of `G/K` through the model over K's invariant generators.
pub fn dga_cohomology_upto(m: &CartanModel, n: u32) -> Result<Vec<u64>> {
    pure_cohomology_upto(&cartan_pure_model(m)?, n, DEFAULT_BASIS_LIMIT)
}

/// Kernel basis of `d` in degree `k`, as combinations of basis cells.
fn cocycles(c: &mut Complex, k: u32) -> Result<Vec<SparseVec>> {
    let rows = c.differential_rows(k)?;
    let mut e = Echelon::tracking();
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some(rel) = e.solve(r) {
            // r = sum rel_j rows_j, so cell_i - sum rel_j cell_j is closed
            let mut v: SparseVec = rel.into_iter().map(|(j, x)| (j, -x)).collect();
            v.push((i, Rational::one()));
            v.sort_by_key(|(k, _)| *k);
            out.push(v);
        }
        e.insert(r);
    }
    Ok(out)
}

/// Whether restricting to the fiber (first copy set to zero) is onto in
/// every degree `<= n`.
pub fn verify_fiber_surjectivity(b: &BorelModel, m: &CartanModel, n: u32) -> Result<bool> {
    let torus = b.copy_degrees.len() == m.nvars() && b.copy_degrees.iter().all(|&d| d == 2);
    let base_ok = torus || b.copy_degrees == m.base.generator_degrees;
    if !base_ok
        || b.copy_rank != b.copy_degrees.len()
        || b.model.odd_degrees != m.fiber_degrees
        || !b.differential_squares_vanish()
    {
        return Err(Error::Inconsistent(
            "Borel model does not match the Cartan model".into(),
        ));
    }
    let fiber = b.fiber();
    let r = b.copy_rank;
    let mut total = Complex::new(&b.model, DEFAULT_BASIS_LIMIT)?;
    let mut small = Complex::new(&fiber, DEFAULT_BASIS_LIMIT)?;
    for k in 0..=n {
        let z_total = cocycles(&mut total, k)?;
        let fiber_rows = small.differential_rows(k)?;
        let closed_dim = fiber_rows.len() - differential_rank(&fiber_rows);
        let mut span = Echelon::new();
        if k > 0 {
            for row in small.differential_rows(k - 1)? {
                span.insert(&row);
            }
        }
        let cells = total.piece(k)?.cells.clone();
        let target = small.piece(k)?;
        for z in &z_total {
            let image: SparseVec = z
                .iter()
                .filter_map(|(i, x)| {
                    let (e, mask) = &cells[*i];
                    if e[..r].iter().any(|&a| a > 0) {
                        return None;
                    }
                    target
                        .index
                        .get(&(e[r..].to_vec(), *mask))
                        .map(|&j| (j, x.clone()))
                })
                .collect();
            let mut image = image;
            image.sort_by_key(|(k, _)| *k);
            span.insert(&image);
            if span.rank() == closed_dim {
                break;
            }
        }
        if span.rank() != closed_dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks every degree up to the largest odd generator, which covers all
/// algebra generators of the fiber cohomology in any case.
pub fn default_surjectivity_degree(m: &CartanModel) -> u32 {
    m.fiber_degrees.iter().copied().max().unwrap_or(0).max(2)
}

/// With a splitting at hand the fiber cohomology is generated by the base
/// variables and the redundant odd generators. The image of the restriction
/// is a subalgebra, so checking up to the largest of these degrees suffices.
pub fn witness_surjectivity_degree(b: &BorelModel, m: &CartanModel, w: &SplittingWitness) -> u32 {
    let base = b.copy_degrees.iter().copied().max().unwrap_or(0);
    let odd = w
        .redundant_order
        .iter()
        .map(|&j| m.fiber_degrees[j])
        .max()
        .unwrap_or(0);
    base.max(odd).max(2)
}

#[cfg(test)]
mod tests {
    use super::super::build_model;
    use super::super::tests::model;
    use super::*;
    use crate::liegroups::{make_group, TorusMap};

    #[test]
    fn sphere() {
        let s7 = PureModel {
            even_degrees: vec![],
            odd_degrees: vec![7],
            differentials: vec![Polynomial::zero(0)],
        };
        let b = pure_cohomology_upto(&s7, 10, 1000).unwrap();
        assert_eq!(b, vec![1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn symplectic_quotient() {
        let m = model("Sp(2)", "Sp(1)", "diagonal-double-block");
        assert_eq!(
            dga_cohomology_upto(&m, 8).unwrap(),
            vec![1, 0, 0, 0, 0, 0, 0, 1, 0]
        );
        let b = build_borel_model(&m).unwrap();
        let d: Vec<String> = b
            .model
            .differentials
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(d, vec!["2*t1^2 - 2*t2^2", "t1^4 - t2^4"]);
        assert!(verify_fiber_surjectivity(&b, &m, 7).unwrap());
    }

    #[test]
    fn wu_manifold_type() {
        let m = model("SU(3)", "SO(3)", "real-in-complex");
        assert_eq!(
            dga_cohomology_upto(&m, 6).unwrap(),
            vec![1, 0, 0, 0, 0, 1, 0]
        );
    }

    #[test]
    fn flag_manifold_surjectivity() {
        let m = model("SU(3)", "T^2", "maximal-torus");
        let b = build_borel_model(&m).unwrap();
        assert!(verify_fiber_surjectivity(&b, &m, 12).unwrap());
        assert_eq!(
            dga_cohomology_upto(&m, 7).unwrap(),
            vec![1, 0, 2, 0, 2, 0, 1, 0]
        );
    }

    #[test]
    fn circle_in_itself() {
        let g = make_group("T^1").unwrap();
        let m = build_model(&g, &g, &TorusMap::identity(1)).unwrap();
        let b = build_borel_model(&m).unwrap();
        assert_eq!(b.model.differentials[0].to_string(), "t1 - t2");
        assert!(b.differential_squares_vanish());
    }

    #[test]
    fn weighted_circle_fails_surjectivity() {
        let g = make_group("SU(3)").unwrap();
        let k = make_group("T^1").unwrap();
        let map = TorusMap::new(vec![vec![1], vec![1]], 2, 1).unwrap();
        let m = build_model(&g, &k, &map).unwrap();
        let b = build_borel_model(&m).unwrap();
        assert!(!verify_fiber_surjectivity(&b, &m, default_surjectivity_degree(&m)).unwrap());
        let b = build_invariant_borel_model(&m).unwrap();
        assert!(!verify_fiber_surjectivity(&b, &m, default_surjectivity_degree(&m)).unwrap());
    }

    #[test]
    fn invariant_base_agrees_with_torus_base() {
        for (g, k, recipe) in [
            ("Sp(2)", "Sp(1)", "diagonal-double-block"),
            ("SU(3)", "SO(3)", "real-in-complex"),
            ("SO(8)", "SO(4)", "diagonal-double-block"),
        ] {
            let m = model(g, k, recipe);
            let n = default_surjectivity_degree(&m);
            let torus = build_borel_model(&m).unwrap();
            let inv = build_invariant_borel_model(&m).unwrap();
            assert_eq!(inv.copy_degrees, m.base.generator_degrees);
            assert!(verify_fiber_surjectivity(&torus, &m, n).unwrap(), "{g}/{k}");
            assert!(verify_fiber_surjectivity(&inv, &m, n).unwrap(), "{g}/{k}");
        }
    }
}
