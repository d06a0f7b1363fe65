use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{elementary_symmetric_of, Polynomial};

/// Default bound on the rank of classical groups built from labels.
pub const DEFAULT_MAX_RANK: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Exceptional {
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Exceptional {
    pub fn degrees(self) -> &'static [u32] {
        match self {
            Exceptional::E6 => &[4, 10, 12, 16, 18, 24],
            Exceptional::E7 => &[4, 12, 16, 20, 24, 28, 36],
            Exceptional::E8 => &[4, 16, 24, 28, 36, 40, 48, 60],
            Exceptional::F4 => &[4, 12, 16, 24],
            Exceptional::G2 => &[4, 12],
        }
    }

    pub fn weyl_order(self) -> u128 {
        match self {
            Exceptional::E6 => 51_840,
            Exceptional::E7 => 2_903_040,
            Exceptional::E8 => 696_729_600,
            Exceptional::F4 => 1_152,
            Exceptional::G2 => 12,
        }
    }

    pub fn dimension(self) -> u32 {
        match self {
            Exceptional::E6 => 78,
            Exceptional::E7 => 133,
            Exceptional::E8 => 248,
            Exceptional::F4 => 52,
            Exceptional::G2 => 14,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Exceptional::E6 => "E6",
            Exceptional::E7 => "E7",
            Exceptional::E8 => "E8",
            Exceptional::F4 => "F4",
            Exceptional::G2 => "G2",
        }
    }
}

/// One simple (or abelian, or block-unitary) factor of a compact group.
///
/// Spin groups carry the rational data of the corresponding SO group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    SU(usize),
    U(usize),
    /// S(U(a1) x ... x U(am))
    SUBlocks(Vec<usize>),
    SO(usize),
    Spin(usize),
    Sp(usize),
    Torus(usize),
    Exceptional(Exceptional),
}

/// Weyl-group action type on a run of ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylType {
    /// Permutations only.
    A,
    /// Permutations with arbitrary sign changes.
    BC,
    /// Permutations with an even number of sign changes.
    D,
    /// Trivial action.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylBlock {
    pub start: usize,
    pub len: usize,
    pub kind: WeylType,
}

impl Factor {
    /// Number of coordinates before eliminating the trace relation.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Factor::SU(n) | Factor::U(n) | Factor::Sp(n) | Factor::Torus(n) => *n,
            Factor::SUBlocks(b) => b.iter().sum(),
            Factor::SO(n) | Factor::Spin(n) => n / 2,
            Factor::Exceptional(e) => e.degrees().len(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Factor::SU(n) => n.saturating_sub(1),
            Factor::SUBlocks(b) => b.iter().sum::<usize>().saturating_sub(1),
            _ => self.ambient_dim(),
        }
    }

    /// Whether the ambient coordinates satisfy `sum = 0`.
    pub fn has_trace_relation(&self) -> bool {
        matches!(self, Factor::SU(_) | Factor::SUBlocks(_))
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, Factor::Exceptional(_))
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        match self {
            Factor::SU(n) => (2..=*n as u32).map(|k| 2 * k).collect(),
            Factor::U(n) => (1..=*n as u32).map(|k| 2 * k).collect(),
            Factor::SUBlocks(blocks) => {
                let mut d = Vec::new();
                for (bi, &a) in blocks.iter().enumerate() {
                    let first = if bi + 1 == blocks.len() { 2 } else { 1 };
                    d.extend((first..=a as u32).map(|k| 2 * k));
                }
                d
            }
            Factor::SO(n) | Factor::Spin(n) => {
                let r = (n / 2) as u32;
                if n % 2 == 1 {
                    (1..=r).map(|k| 4 * k).collect()
                } else if r == 0 {
                    Vec::new()
                } else {
                    let mut d: Vec<u32> = (1..r).map(|k| 4 * k).collect();
                    d.push(2 * r);
                    d
                }
            }
            Factor::Sp(n) => (1..=*n as u32).map(|k| 4 * k).collect(),
            Factor::Torus(k) => vec![2; *k],
            Factor::Exceptional(e) => e.degrees().to_vec(),
        }
    }

    pub fn dimension(&self) -> u32 {
        let sq = |n: usize| (n * n) as u32;
        match self {
            Factor::SU(n) => sq(*n).saturating_sub(1),
            Factor::U(n) => sq(*n),
            Factor::SUBlocks(b) => b.iter().map(|&a| sq(a)).sum::<u32>().saturating_sub(1),
            Factor::SO(n) | Factor::Spin(n) => (n * n.saturating_sub(1) / 2) as u32,
            Factor::Sp(n) => (n * (2 * n + 1)) as u32,
            Factor::Torus(k) => *k as u32,
            Factor::Exceptional(e) => e.dimension(),
        }
    }

    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            Factor::SU(n) | Factor::U(n) => fact(*n),
            Factor::SUBlocks(b) => b.iter().map(|&a| fact(a)).product(),
            Factor::SO(n) | Factor::Spin(n) => {
                let r = n / 2;
                if n % 2 == 1 {
                    (1u128 << r) * fact(r)
                } else if r == 0 {
                    1
                } else {
                    (1u128 << (r - 1)) * fact(r)
                }
            }
            Factor::Sp(n) => (1u128 << n) * fact(*n),
            Factor::Torus(_) => 1,
            Factor::Exceptional(e) => e.weyl_order(),
        }
    }

    /// Weyl action on this factor's ambient coordinates (offset 0).
    pub fn weyl_blocks(&self) -> Vec<WeylBlock> {
        let single = |len: usize, kind: WeylType| {
            vec![WeylBlock {
                start: 0,
                len,
                kind,
            }]
        };
        match self {
            Factor::SU(n) | Factor::U(n) => single(*n, WeylType::A),
            Factor::SUBlocks(b) => {
                let mut out = Vec::new();
                let mut start = 0;
                for &a in b {
                    out.push(WeylBlock {
                        start,
                        len: a,
                        kind: WeylType::A,
                    });
                    start += a;
                }
                out
            }
            Factor::SO(n) | Factor::Spin(n) => {
                let kind = if n % 2 == 1 {
                    WeylType::BC
                } else {
                    WeylType::D
                };
                single(n / 2, kind)
            }
            Factor::Sp(n) => single(*n, WeylType::BC),
            Factor::Torus(k) => single(*k, WeylType::Trivial),
            Factor::Exceptional(e) => single(e.degrees().len(), WeylType::Trivial),
        }
    }

    /// Invariant generators as polynomials in the ambient coordinates
    /// (each coordinate already written in the `nvars` reduced variables).
    fn ambient_generators(&self, coords: &[Polynomial], nvars: usize) -> Option<Vec<Polynomial>> {
        let squares: Vec<Polynomial> = coords.iter().map(|c| c * c).collect();
        let e = |xs: &[Polynomial], k: usize| elementary_symmetric_of(xs, k, nvars);
        Some(match self {
            Factor::SU(n) => (2..=*n).map(|k| e(coords, k)).collect(),
            Factor::U(n) => (1..=*n).map(|k| e(coords, k)).collect(),
            Factor::SUBlocks(blocks) => {
                let mut out = Vec::new();
                let mut start = 0;
                for (bi, &a) in blocks.iter().enumerate() {
                    let first = if bi + 1 == blocks.len() { 2 } else { 1 };
                    let block = &coords[start..start + a];
                    out.extend((first..=a).map(|k| e(block, k)));
                    start += a;
                }
                out
            }
            Factor::SO(n) | Factor::Spin(n) => {
                let r = n / 2;
                if n % 2 == 1 {
                    (1..=r).map(|k| e(&squares, k)).collect()
                } else if r == 0 {
                    Vec::new()
                } else {
                    let mut out: Vec<Polynomial> = (1..r).map(|k| e(&squares, k)).collect();
                    let mut pf = Polynomial::one(nvars);
                    for c in coords {
                        pf = &pf * c;
                    }
                    out.push(pf);
                    out
                }
            }
            Factor::Sp(n) => (1..=*n).map(|k| e(&squares, k)).collect(),
            Factor::Torus(_) => coords.to_vec(),
            Factor::Exceptional(_) => return None,
        })
    }

    fn label(&self) -> String {
        match self {
            Factor::SU(n) => format!("SU({n})"),
            Factor::U(n) => format!("U({n})"),
            Factor::SUBlocks(b) => {
                let inner: String = b.iter().map(|a| format!("U({a})")).collect();
                format!("S({inner})")
            }
            Factor::SO(n) => format!("SO({n})"),
            Factor::Spin(n) => format!("Spin({n})"),
            Factor::Sp(n) => format!("Sp({n})"),
            Factor::Torus(k) => format!("T^{k}"),
            Factor::Exceptional(e) => e.name().to_string(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Explicit,
    DegreeOnly,
}

/// Rational data of a compact connected Lie group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDatum {
    pub label: String,
    pub factors: Vec<Factor>,
    pub rank: usize,
    pub generator_degrees: Vec<u32>,
    /// Weyl-invariant generators in `rank` reduced torus variables.
    pub invariant_generators: Option<Vec<Polynomial>>,
    pub mode: Mode,
}

impl GroupDatum {
    pub fn from_factors(factors: Vec<Factor>) -> Result<GroupDatum> {
        if factors.is_empty() {
            return Err(Error::UnknownGroup(String::new()));
        }
        for f in &factors {
            let bad = match f {
                Factor::SU(n) | Factor::U(n) | Factor::Sp(n) | Factor::SO(n) | Factor::Spin(n) => {
                    *n == 0
                }
                Factor::Torus(_) => false,
                Factor::SUBlocks(b) => b.is_empty() || b.contains(&0),
                Factor::Exceptional(_) => false,
            };
            if bad {
                return Err(Error::GroupBounds(format!("{f} has a zero parameter")));
            }
        }
        let label = factors
            .iter()
            .map(|f| f.label())
            .collect::<Vec<_>>()
            .join("x");
        let rank = factors.iter().map(|f| f.rank()).sum();
        let generator_degrees = factors.iter().flat_map(|f| f.generator_degrees()).collect();
        let explicit = factors.iter().all(|f| !f.is_exceptional());
        let mut datum = GroupDatum {
            label,
            factors,
            rank,
            generator_degrees,
            invariant_generators: None,
            mode: if explicit {
                Mode::Explicit
            } else {
                Mode::DegreeOnly
            },
        };
        if explicit {
            let ambient = datum.ambient_dim();
            let coords = datum.reduced_coordinate_images();
            debug_assert_eq!(coords.len(), ambient);
            let mut gens = Vec::new();
            let mut offset = 0;
            for f in &datum.factors {
                let n = f.ambient_dim();
                gens.extend(
                    f.ambient_generators(&coords[offset..offset + n], rank)
                        .unwrap(),
                );
                offset += n;
            }
            datum.invariant_generators = Some(gens);
        }
        Ok(datum)
    }

    pub fn is_explicit(&self) -> bool {
        self.mode == Mode::Explicit
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(|f| f.ambient_dim()).sum()
    }

    pub fn dimension(&self) -> u32 {
        self.factors.iter().map(|f| f.dimension()).sum()
    }

    pub fn weyl_order(&self) -> u128 {
        self.factors.iter().map(|f| f.weyl_order()).product()
    }

    pub fn invariants(&self) -> Result<&[Polynomial]> {
        self.invariant_generators
            .as_deref()
            .ok_or_else(|| Error::DegreeOnly(self.label.clone()))
    }

    /// Integer matrix (ambient x reduced) expressing each ambient coordinate
    /// in the reduced coordinates; the last coordinate of a factor with a
    /// trace relation becomes minus the sum of the others.
    pub fn reduction_matrix(&self) -> Vec<Vec<i64>> {
        let mut rows = Vec::with_capacity(self.ambient_dim());
        let mut col = 0;
        for f in &self.factors {
            let n = f.ambient_dim();
            let r = f.rank();
            for i in 0..n {
                let mut row = vec![0i64; self.rank];
                if f.has_trace_relation() && i == n - 1 {
                    for x in row.iter_mut().skip(col).take(r) {
                        *x = -1;
                    }
                } else {
                    row[col + i] = 1;
                }
                rows.push(row);
            }
            col += r;
        }
        rows
    }

    /// Indices of the ambient coordinates kept as reduced coordinates.
    pub fn reduced_rows(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.rank);
        let mut start = 0;
        for f in &self.factors {
            let n = f.ambient_dim();
            let keep = if f.has_trace_relation() {
                n.saturating_sub(1)
            } else {
                n
            };
            out.extend(start..start + keep);
            start += n;
        }
        out
    }

    /// Ranges of ambient coordinates whose sum must vanish.
    pub fn trace_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for f in &self.factors {
            let n = f.ambient_dim();
            if f.has_trace_relation() {
                out.push(start..start + n);
            }
            start += n;
        }
        out
    }

    pub fn weyl_blocks(&self) -> Vec<WeylBlock> {
        let mut out = Vec::new();
        let mut start = 0;
        for f in &self.factors {
            for b in f.weyl_blocks() {
                out.push(WeylBlock {
                    start: start + b.start,
                    ..b
                });
            }
            start += f.ambient_dim();
        }
        out
    }

    fn reduced_coordinate_images(&self) -> Vec<Polynomial> {
        self.reduction_matrix()
            .iter()
            .map(|row| Polynomial::linear(row))
            .collect()
    }
}

impl fmt::Display for GroupDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses a group label such as `SU(4)`, `S(U(2)U(2))`, `Sp(2)xSp(2)`,
/// `Spin(9)`, `T^3`, `E7`, or juxtaposed products like `U(3)U(3)`.
pub fn parse_label(label: &str) -> Result<Vec<Factor>> {
    let s: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('×', "x");
    let unknown = || Error::UnknownGroup(label.to_string());
    let mut rest = s.as_str();
    let mut factors = Vec::new();
    while !rest.is_empty() {
        rest = rest.strip_prefix('x').unwrap_or(rest);
        let (f, tail) = parse_factor(rest).ok_or_else(unknown)?;
        factors.push(f);
        rest = tail;
    }
    if factors.is_empty() {
        return Err(unknown());
    }
    Ok(factors)
}

fn parse_paren_int(s: &str) -> Option<(usize, &str)> {
    let s = s.strip_prefix('(')?;
    let end = s.find(')')?;
    let n = s[..end].parse().ok()?;
    Some((n, &s[end + 1..]))
}

fn parse_factor(s: &str) -> Option<(Factor, &str)> {
    for (name, e) in [
        ("E6", Exceptional::E6),
        ("E7", Exceptional::E7),
        ("E8", Exceptional::E8),
        ("F4", Exceptional::F4),
        ("G2", Exceptional::G2),
    ] {
        if let Some(t) = s.strip_prefix(name) {
            return Some((Factor::Exceptional(e), t));
        }
    }
    if let Some(t) = s.strip_prefix("S(") {
        let mut blocks = Vec::new();
        let mut t = t;
        while let Some(u) = t.strip_prefix("U") {
            let (n, u) = parse_paren_int(u)?;
            blocks.push(n);
            t = u.strip_prefix('x').unwrap_or(u);
        }
        let t = t.strip_prefix(')')?;
        if blocks.is_empty() {
            return None;
        }
        return Some((Factor::SUBlocks(blocks), t));
    }
    if let Some(t) = s.strip_prefix("T^") {
        let end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
        let k = t[..end].parse().ok()?;
        return Some((Factor::Torus(k), &t[end..]));
    }
    type Ctor = (&'static str, fn(usize) -> Factor);
    let ctors: [Ctor; 5] = [
        ("Spin", Factor::Spin),
        ("SU", Factor::SU),
        ("SO", Factor::SO),
        ("Sp", Factor::Sp),
        ("U", Factor::U),
    ];
    for (name, ctor) in ctors {
        if let Some(t) = s.strip_prefix(name) {
            let (n, t) = parse_paren_int(t)?;
            return Some((ctor(n), t));
        }
    }
    if let Some(t) = s.strip_prefix('T') {
        return Some((Factor::Torus(1), t));
    }
    None
}

pub fn make_group(label: &str) -> Result<GroupDatum> {
    make_group_bounded(label, DEFAULT_MAX_RANK)
}

pub fn make_group_bounded(label: &str, max_rank: usize) -> Result<GroupDatum> {
    let factors = parse_label(label)?;
    let classical_rank: usize = factors
        .iter()
        .filter(|f| !f.is_exceptional())
        .map(|f| f.rank())
        .sum();
    if classical_rank > max_rank {
        return Err(Error::GroupBounds(format!(
            "{label} has classical rank {classical_rank}, above the bound {max_rank}"
        )));
    }
    let g = GroupDatum::from_factors(factors)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn so5_generators() {
        let g = make_group("SO(5)").unwrap();
        assert_eq!(g.rank, 2);
        assert_eq!(g.generator_degrees, vec![4, 8]);
        assert_eq!(
            g.invariants().unwrap(),
            &[p("t1^2 + t2^2", 2), p("t1^2*t2^2", 2)]
        );
    }

    #[test]
    fn so4_has_pfaffian() {
        let g = make_group("SO(4)").unwrap();
        assert_eq!(g.generator_degrees, vec![4, 4]);
        assert_eq!(
            g.invariants().unwrap(),
            &[p("t1^2 + t2^2", 2), p("t1*t2", 2)]
        );
    }

    #[test]
    fn f4_is_degree_only() {
        let g = make_group("F4").unwrap();
        assert_eq!(g.mode, Mode::DegreeOnly);
        assert_eq!(g.generator_degrees, vec![4, 12, 16, 24]);
        assert!(matches!(g.invariants(), Err(Error::DegreeOnly(_))));
    }

    #[test]
    fn su3_eliminates_last_coordinate() {
        let g = make_group("SU(3)").unwrap();
        assert_eq!(g.rank, 2);
        let gens = g.invariants().unwrap();
        // e2(t1, t2, -t1-t2) and e3(t1, t2, -t1-t2)
        assert_eq!(gens[0], p("-t1^2 - t1*t2 - t2^2", 2));
        assert_eq!(gens[1], p("-t1^2*t2 - t1*t2^2", 2));
    }

    #[test]
    fn block_unitary_group() {
        let g = make_group("S(U(2)U(1))").unwrap();
        assert_eq!(g.rank, 2);
        assert_eq!(g.generator_degrees, vec![2, 4]);
        let gens = g.invariants().unwrap();
        assert_eq!(gens[0], p("t1 + t2", 2));
        assert_eq!(gens[1], p("t1*t2", 2));
        assert_eq!(g.weyl_order(), 2);
    }

    #[test]
    fn labels_and_products() {
        let g = make_group("Sp(2)xSp(1)").unwrap();
        assert_eq!(g.rank, 3);
        assert_eq!(g.generator_degrees, vec![4, 8, 4]);
        assert_eq!(make_group("U(3)U(3)").unwrap().rank, 6);
        assert_eq!(
            make_group("Spin(9)").unwrap().generator_degrees,
            vec![4, 8, 12, 16]
        );
        assert_eq!(make_group("T^3").unwrap().invariants().unwrap().len(), 3);
        assert_eq!(make_group("SO(3)×SO(3)").unwrap().label, "SO(3)xSO(3)");
        assert!(matches!(make_group("XY(3)"), Err(Error::UnknownGroup(_))));
        assert!(matches!(make_group("SU(30)"), Err(Error::GroupBounds(_))));
        assert!(matches!(make_group("SU(0)"), Err(Error::GroupBounds(_))));
    }

    #[test]
    fn degree_counts_match_dimension() {
        for label in [
            "SU(2)",
            "SU(5)",
            "U(4)",
            "SO(2)",
            "SO(3)",
            "SO(7)",
            "SO(8)",
            "Sp(3)",
            "T^2",
            "S(U(2)U(3)U(1))",
            "E6",
            "E7",
            "E8",
            "F4",
            "G2",
        ] {
            let g = make_group(label).unwrap();
            assert_eq!(g.generator_degrees.len(), g.rank, "{label}");
            let s: u32 = g.generator_degrees.iter().map(|d| d - 1).sum();
            assert_eq!(s, g.dimension(), "{label}");
        }
    }

    #[test]
    fn reduction_matrix_for_su() {
        let g = make_group("SU(3)xT^1").unwrap();
        assert_eq!(
            g.reduction_matrix(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -1, 0], vec![0, 0, 1]]
        );
        assert_eq!(g.reduced_rows(), vec![0, 1, 3]);
    }
}
