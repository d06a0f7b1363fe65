use serde::{Deserialize, Serialize};

use super::group::{GroupDatum, WeylType};
use super::torusmap::{mat_mul, IntMatrix, IntSpan, TorusMap};
use crate::error::{Error, Result};

pub const DEFAULT_WEYL_RANK_CAP: usize = 8;
const NODE_CAP: u64 = 50_000_000;

/// Signed permutation of a group's ambient torus coordinates:
/// `(w x)[p] = signs[p] * x[perm[p]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for p in 0..n {
            perm[self.perm[p]] = p;
            signs[self.perm[p]] = self.signs[p];
        }
        WeylElement { perm, signs }
    }

    /// Whether this is an element of G's Weyl group.
    pub fn is_legal(&self, g: &GroupDatum) -> bool {
        let n = g.ambient_dim();
        if self.perm.len() != n || self.signs.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &i in &self.perm {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        for b in g.weyl_blocks() {
            let range = b.start..b.start + b.len;
            for p in range.clone() {
                if !range.contains(&self.perm[p]) || self.signs[p].abs() != 1 {
                    return false;
                }
            }
            let negatives = self.signs[range.clone()].iter().filter(|&&s| s < 0).count();
            let ok = match b.kind {
                WeylType::A => negatives == 0,
                WeylType::BC => true,
                WeylType::D => negatives % 2 == 0,
                WeylType::Trivial => negatives == 0 && range.clone().all(|p| self.perm[p] == p),
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Applies the element to the rows of an ambient-coordinate matrix.
    pub fn act_on_rows(&self, m: &IntMatrix) -> IntMatrix {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&i, &s)| m[i].iter().map(|&x| x * s as i64).collect())
            .collect()
    }

    /// The induced substitution on G's reduced coordinates.
    pub fn as_torus_map(&self, g: &GroupDatum) -> Result<TorusMap> {
        if !self.is_legal(g) {
            return Err(Error::Embedding(format!(
                "not a Weyl element of {}",
                g.label
            )));
        }
        let permuted = self.act_on_rows(&g.reduction_matrix());
        let reduced: IntMatrix = g
            .reduced_rows()
            .iter()
            .map(|&i| permuted[i].clone())
            .collect();
        TorusMap::new(reduced, g.rank, g.rank)
    }
}

fn ambient_of(g: &GroupDatum, map: &TorusMap) -> Result<IntMatrix> {
    if map.source_rank != g.rank {
        return Err(Error::DimensionMismatch(format!(
            "map from rank {} used with {} of rank {}",
            map.source_rank, g.label, g.rank
        )));
    }
    Ok(mat_mul(&g.reduction_matrix(), &map.matrix, map.target_rank))
}

struct Search<'a> {
    a1: Vec<Vec<i128>>,
    a2: Vec<Vec<i128>>,
    block_of: Vec<(usize, usize, WeylType)>,
    used: Vec<bool>,
    perm: Vec<usize>,
    signs: Vec<i8>,
    nodes: u64,
    g: &'a GroupDatum,
}

impl Search<'_> {
    fn dfs(&mut self, p: usize, s2: &IntSpan, sw: &IntSpan, sboth: &IntSpan) -> Result<bool> {
        let n = self.a1.len();
        if p == n {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            return Err(Error::SearchBound(format!(
                "Weyl search in {} exceeded {NODE_CAP} nodes",
                self.g.label
            )));
        }
        let (start, len, kind) = self.block_of[p];
        let block_end = p + 1 == start + len;
        let mut s2n = s2.clone();
        let grew2 = s2n.insert(&self.a2[p]);
        for i in start..start + len {
            if self.used[i] {
                continue;
            }
            let zero_row = self.a1[i].iter().all(|&x| x == 0);
            let sign_choices: &[i8] = match kind {
                WeylType::BC | WeylType::D if !zero_row => &[1, -1],
                WeylType::Trivial if i != p => continue,
                _ => &[1],
            };
            for &sign in sign_choices {
                if kind == WeylType::D && block_end {
                    self.signs[p] = sign;
                    let negatives = (start..=p).filter(|&q| self.signs[q] < 0).count();
                    let has_zero = (start..start + len).any(|q| self.a1[q].iter().all(|&x| x == 0));
                    if negatives % 2 == 1 && !has_zero {
                        continue;
                    }
                }
                let row: Vec<i128> = self.a1[i].iter().map(|&x| x * sign as i128).collect();
                let mut swn = sw.clone();
                let grew_w = swn.insert(&row);
                let mut both: Vec<i128> = self.a2[p].clone();
                both.extend_from_slice(&row);
                let mut sbn = sboth.clone();
                let grew_b = sbn.insert(&both);
                if grew2 != grew_w || grew_w != grew_b {
                    continue;
                }
                self.used[i] = true;
                self.perm[p] = i;
                self.signs[p] = sign;
                if self.dfs(p + 1, &s2n, &swn, &sbn)? {
                    return Ok(true);
                }
                self.used[i] = false;
            }
        }
        Ok(false)
    }
}

/// Searches G's Weyl group for `w` with `w(image of map1) = image of map2`.
/// Returns the lexicographically least witness (by `(perm, signs)` in
/// position order, `+` before `-`), or `None` when none exists.
pub fn weyl_orbit_search(
    g: &GroupDatum,
    map1: &TorusMap,
    map2: &TorusMap,
) -> Result<Option<WeylElement>> {
    weyl_orbit_search_capped(g, map1, map2, DEFAULT_WEYL_RANK_CAP)
}

pub fn weyl_orbit_search_capped(
    g: &GroupDatum,
    map1: &TorusMap,
    map2: &TorusMap,
    rank_cap: usize,
) -> Result<Option<WeylElement>> {
    if !g.is_explicit() {
        return Err(Error::DegreeOnly(g.label.clone()));
    }
    if g.rank > rank_cap {
        return Err(Error::SearchBound(format!(
            "Weyl search limited to rank {rank_cap}, {} has rank {}",
            g.label, g.rank
        )));
    }
    if map1.source_rank != map2.source_rank || map1.target_rank != map2.target_rank {
        return Err(Error::DimensionMismatch(
            "Weyl search needs maps of equal shape".into(),
        ));
    }
    let to128 = |m: IntMatrix| -> Vec<Vec<i128>> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| x as i128).collect())
            .collect()
    };
    let a1 = to128(ambient_of(g, map1)?);
    let a2 = to128(ambient_of(g, map2)?);
    let n = a1.len();
    let mut block_of = vec![(0, 0, WeylType::Trivial); n];
    for b in g.weyl_blocks() {
        block_of[b.start..b.start + b.len].fill((b.start, b.len, b.kind));
    }
    let mut search = Search {
        a1,
        a2,
        block_of,
        used: vec![false; n],
        perm: vec![0; n],
        signs: vec![1; n],
        nodes: 0,
        g,
    };
    let empty = IntSpan::default();
    if !search.dfs(0, &empty, &empty, &empty)? {
        return Ok(None);
    }
    let mut w = WeylElement {
        perm: search.perm,
        signs: search.signs,
    };
    // odd sign count in a D block: flip a zero row, which acts trivially
    for b in g.weyl_blocks() {
        if b.kind != WeylType::D {
            continue;
        }
        let range = b.start..b.start + b.len;
        let negatives = w.signs[range.clone()].iter().filter(|&&s| s < 0).count();
        if negatives % 2 == 1 {
            let q = range
                .clone()
                .find(|&q| search.a1[w.perm[q]].iter().all(|&x| x == 0))
                .expect("zero row exists");
            w.signs[q] = -w.signs[q];
        }
    }
    debug_assert!(w.is_legal(g));
    Ok(Some(w))
}

/// Re-checks a witness: `w(image of map1) = image of map2`.
pub fn verify_weyl_witness(
    g: &GroupDatum,
    map1: &TorusMap,
    map2: &TorusMap,
    w: &WeylElement,
) -> Result<bool> {
    if !w.is_legal(g) {
        return Ok(false);
    }
    let a1 = ambient_of(g, map1)?;
    let a2 = ambient_of(g, map2)?;
    Ok(super::torusmap::same_column_space(&w.act_on_rows(&a1), &a2))
}
