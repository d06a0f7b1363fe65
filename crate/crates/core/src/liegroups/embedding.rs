use std::fmt;
use std::str::FromStr;

use super::group::{make_group, Factor, GroupDatum};
use super::torusmap::{int_rank, mat_mul, IntMatrix, TorusMap};
use crate::error::{Error, Result};

/// Standard inclusions of maximal tori, applied factor by factor: each
/// factor of the subgroup consumes the next run of the big group's ambient
/// coordinates; coordinates left over map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingKind {
    /// Same ambient coordinates.
    Identity,
    /// Subgroup coordinates fill the big group's coordinates in order.
    Block,
    /// `t_i` and `t_{a+i}` both map to `s_i` (a = factor size).
    DiagonalDoubleBlock,
    /// `t_i -> s_i`, `t_{a+i} -> -s_i`, as in U(n) in S(U(n)U(n)).
    ConjugateDoubleBlock,
    /// Every copy of the subgroup's coordinates maps identically (L in LxLx...).
    Diagonal,
    /// U(n) in Sp(n).
    ComplexInQuaternionic,
    /// SO(n) in SU(n): `t_{2i-1} -> s_i`, `t_{2i} -> -s_i`, odd leftover to 0.
    RealInComplex,
    /// SO(n) in Sp(n): `t_{2i-1} -> s_i`, `t_{2i} -> 0`, odd leftover to 0.
    RealInQuaternionic,
    /// Sp(n) in SO(4n): `t_{2i-1} -> s_i`, `t_{2i} -> -s_i`.
    QuaternionicInReal,
    /// U(n) in SO(2n).
    ComplexInReal,
    /// Sp(n) in SU(2n): `t_i -> s_i`, `t_{n+i} -> -s_i`.
    QuaternionicInComplex,
    /// A torus of full rank, identity on reduced coordinates.
    MaximalTorus,
    /// Explicit rows (ambient big-group coordinates) by reduced subgroup coordinates.
    Matrix(IntMatrix),
}

const NAMES: [(&str, EmbeddingKind); 12] = [
    ("identity", EmbeddingKind::Identity),
    ("block", EmbeddingKind::Block),
    ("diagonal-double-block", EmbeddingKind::DiagonalDoubleBlock),
    (
        "conjugate-double-block",
        EmbeddingKind::ConjugateDoubleBlock,
    ),
    ("diagonal", EmbeddingKind::Diagonal),
    (
        "complex-in-quaternionic",
        EmbeddingKind::ComplexInQuaternionic,
    ),
    ("real-in-complex", EmbeddingKind::RealInComplex),
    ("real-in-quaternionic", EmbeddingKind::RealInQuaternionic),
    ("quaternionic-in-real", EmbeddingKind::QuaternionicInReal),
    ("complex-in-real", EmbeddingKind::ComplexInReal),
    (
        "quaternionic-in-complex",
        EmbeddingKind::QuaternionicInComplex,
    ),
    ("maximal-torus", EmbeddingKind::MaximalTorus),
];

impl FromStr for EmbeddingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("matrix:") {
            let rows = body
                .split(';')
                .map(|r| {
                    r.split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Embedding(format!("bad matrix `{body}`")))?;
            return Ok(EmbeddingKind::Matrix(rows));
        }
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, k)| k.clone())
            .ok_or_else(|| Error::Embedding(format!("unknown embedding kind `{s}`")))
    }
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let EmbeddingKind::Matrix(rows) = self {
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            return write!(f, "matrix:{}", body.join(";"));
        }
        let name = NAMES
            .iter()
            .find(|(_, k)| k == self)
            .map(|(n, _)| *n)
            .unwrap();
        f.write_str(name)
    }
}

/// A subgroup inclusion `K -> G` on maximal tori.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub group: GroupDatum,
    pub subgroup: GroupDatum,
    /// Images of G's ambient coordinates in K's reduced coordinates.
    pub ambient: IntMatrix,
    /// The same restricted to G's reduced coordinates.
    pub map: TorusMap,
    pub recipe: String,
}

fn is_unitary(f: &Factor) -> bool {
    matches!(f, Factor::SU(_) | Factor::U(_) | Factor::SUBlocks(_))
}

fn is_orthogonal(f: &Factor) -> bool {
    matches!(f, Factor::SO(_) | Factor::Spin(_))
}

fn is_symplectic(f: &Factor) -> bool {
    matches!(f, Factor::Sp(_))
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Embedding(what()))
    }
}

/// Builds the ambient-to-ambient matrix (G ambient x K ambient).
fn ambient_matrix(kind: &EmbeddingKind, g: &GroupDatum, k: &GroupDatum) -> Result<IntMatrix> {
    let n = g.ambient_dim();
    let m = k.ambient_dim();
    let mut mat = vec![vec![0i64; m]; n];
    let kind_name = kind.to_string();
    let g_all = |pred: fn(&Factor) -> bool, family: &str| {
        require(g.factors.iter().all(pred), || {
            format!(
                "{kind_name} needs {family} big-group factors, got {}",
                g.label
            )
        })
    };
    let k_all = |pred: fn(&Factor) -> bool, family: &str| {
        require(k.factors.iter().all(pred), || {
            format!(
                "{kind_name} needs {family} subgroup factors, got {}",
                k.label
            )
        })
    };
    match kind {
        EmbeddingKind::Identity
        | EmbeddingKind::Block
        | EmbeddingKind::ComplexInQuaternionic
        | EmbeddingKind::ComplexInReal => {
            match kind {
                EmbeddingKind::Identity => require(n == m, || {
                    format!(
                        "identity needs equal coordinate counts ({} vs {})",
                        g.label, k.label
                    )
                })?,
                EmbeddingKind::ComplexInQuaternionic => g_all(is_symplectic, "symplectic")?,
                EmbeddingKind::ComplexInReal => g_all(is_orthogonal, "orthogonal")?,
                _ => {}
            }
            for (j, row) in mat.iter_mut().enumerate().take(m.min(n)) {
                row[j] = 1;
            }
            if m > n {
                return Err(overflow(g, k));
            }
        }
        EmbeddingKind::Diagonal => {
            require(m > 0 && n.is_multiple_of(m), || {
                format!("diagonal needs {} to be a power of {}", g.label, k.label)
            })?;
            for (i, row) in mat.iter_mut().enumerate() {
                row[i % m] = 1;
            }
        }
        EmbeddingKind::MaximalTorus | EmbeddingKind::Matrix(_) => unreachable!(),
        _ => {
            let mut cursor = 0;
            let mut col = 0;
            match kind {
                EmbeddingKind::RealInComplex => {
                    g_all(is_unitary, "unitary")?;
                    k_all(is_orthogonal, "orthogonal")?;
                }
                EmbeddingKind::RealInQuaternionic => {
                    g_all(is_symplectic, "symplectic")?;
                    k_all(is_orthogonal, "orthogonal")?;
                }
                EmbeddingKind::QuaternionicInReal => {
                    g_all(is_orthogonal, "orthogonal")?;
                    k_all(is_symplectic, "symplectic")?;
                }
                EmbeddingKind::QuaternionicInComplex => {
                    g_all(is_unitary, "unitary")?;
                    k_all(is_symplectic, "symplectic")?;
                }
                _ => {}
            }
            for f in &k.factors {
                let a = f.ambient_dim();
                let span = match kind {
                    EmbeddingKind::RealInComplex | EmbeddingKind::RealInQuaternionic => match f {
                        Factor::SO(s) | Factor::Spin(s) => *s,
                        _ => unreachable!(),
                    },
                    _ => 2 * a,
                };
                if cursor + span > n {
                    return Err(overflow(g, k));
                }
                for i in 0..a {
                    let (r1, r2, sign2) = match kind {
                        EmbeddingKind::DiagonalDoubleBlock => (i, a + i, 1),
                        EmbeddingKind::ConjugateDoubleBlock
                        | EmbeddingKind::QuaternionicInComplex => (i, a + i, -1),
                        EmbeddingKind::RealInComplex | EmbeddingKind::QuaternionicInReal => {
                            (2 * i, 2 * i + 1, -1)
                        }
                        EmbeddingKind::RealInQuaternionic => (2 * i, 2 * i + 1, 0),
                        _ => unreachable!(),
                    };
                    mat[cursor + r1][col + i] = 1;
                    mat[cursor + r2][col + i] = sign2;
                }
                cursor += span;
                col += a;
            }
        }
    }
    Ok(mat)
}

fn overflow(g: &GroupDatum, k: &GroupDatum) -> Error {
    Error::RankMismatch(format!("{} does not fit inside {}", k.label, g.label))
}

/// Checks that K could sit inside G at all (rank and dimension).
pub fn check_inclusion_possible(g: &GroupDatum, k: &GroupDatum) -> Result<()> {
    if k.rank > g.rank {
        return Err(Error::RankMismatch(format!(
            "{} has rank {}, larger than rank {} of {}",
            k.label, k.rank, g.rank, g.label
        )));
    }
    if k.dimension() > g.dimension() {
        return Err(Error::RankMismatch(format!(
            "{} has dimension {}, larger than dimension {} of {}",
            k.label,
            k.dimension(),
            g.dimension(),
            g.label
        )));
    }
    Ok(())
}

/// Builds the embedding of a single standard kind.
pub fn standard_embedding(
    kind: &EmbeddingKind,
    g: &GroupDatum,
    k: &GroupDatum,
) -> Result<Embedding> {
    check_inclusion_possible(g, k)?;
    let ambient = match kind {
        EmbeddingKind::MaximalTorus => {
            require(
                k.factors.iter().all(|f| matches!(f, Factor::Torus(_))) && k.rank == g.rank,
                || {
                    format!(
                        "maximal-torus needs T^{} as subgroup of {}",
                        g.rank, g.label
                    )
                },
            )?;
            g.reduction_matrix()
        }
        EmbeddingKind::Matrix(rows) => {
            require(
                rows.len() == g.ambient_dim() && rows.iter().all(|r| r.len() == k.rank),
                || {
                    format!(
                        "matrix must be {} x {} (ambient coordinates of {} by torus coordinates of {})",
                        g.ambient_dim(),
                        k.rank,
                        g.label,
                        k.label
                    )
                },
            )?;
            rows.clone()
        }
        _ => {
            let amb = ambient_matrix(kind, g, k)?;
            mat_mul(&amb, &k.reduction_matrix(), k.rank)
        }
    };
    from_ambient(g, k, ambient, kind.to_string())
}

fn from_ambient(
    g: &GroupDatum,
    k: &GroupDatum,
    ambient: IntMatrix,
    recipe: String,
) -> Result<Embedding> {
    for block in g.trace_blocks() {
        for j in 0..k.rank {
            let s: i64 = ambient[block.clone()].iter().map(|r| r[j]).sum();
            if s != 0 {
                return Err(Error::Embedding(format!(
                    "{recipe}: image of {} leaves the trace-zero torus of {}",
                    k.label, g.label
                )));
            }
        }
    }
    let reduced: IntMatrix = g
        .reduced_rows()
        .iter()
        .map(|&i| ambient[i].clone())
        .collect();
    if int_rank(&ambient, k.rank) != k.rank {
        return Err(Error::RankMismatch(format!(
            "{recipe}: the torus of {} does not embed in {}",
            k.label, g.label
        )));
    }
    let map = TorusMap::new(reduced, g.rank, k.rank)?;
    Ok(Embedding {
        group: g.clone(),
        subgroup: k.clone(),
        ambient,
        map,
        recipe,
    })
}

/// Embedding given by a reduced torus map; the eliminated coordinates are
/// recovered from the trace relations.
pub fn embedding_from_map(
    g: &GroupDatum,
    k: &GroupDatum,
    map: &TorusMap,
    recipe: &str,
) -> Result<Embedding> {
    if map.source_rank != g.rank || map.target_rank != k.rank {
        return Err(Error::DimensionMismatch(format!(
            "map is {} x {}, groups have ranks {} and {}",
            map.source_rank, map.target_rank, g.rank, k.rank
        )));
    }
    let ambient = mat_mul(&g.reduction_matrix(), &map.matrix, k.rank);
    from_ambient(g, k, ambient, recipe.to_string())
}

/// Parses `kind[@H] > kind[@H] > kind`: steps run from the subgroup
/// outward, each `@H` naming the group reached by that step.
pub fn embed_recipe(recipe: &str, g: &GroupDatum, k: &GroupDatum) -> Result<Embedding> {
    let steps: Vec<&str> = recipe.split('>').map(|s| s.trim()).collect();
    if steps.iter().any(|s| s.is_empty()) {
        return Err(Error::Embedding(format!("empty step in `{recipe}`")));
    }
    let mut lower = k.clone();
    // accumulated map from the current upper group's coordinates to K
    let mut acc: Option<TorusMap> = None;
    for (idx, step) in steps.iter().enumerate() {
        let (kind_text, upper) = match step.split_once('@') {
            Some((kt, label)) => (kt, make_group(label)?),
            None if idx + 1 == steps.len() => (*step, g.clone()),
            None => {
                return Err(Error::Embedding(format!(
                    "step `{step}` in `{recipe}` needs an @intermediate group"
                )))
            }
        };
        if idx + 1 == steps.len() && upper.label != g.label && upper.factors != g.factors {
            return Err(Error::Embedding(format!(
                "recipe ends at {} but the group is {}",
                upper.label, g.label
            )));
        }
        let kind: EmbeddingKind = kind_text.parse()?;
        let e = standard_embedding(&kind, &upper, &lower)?;
        acc = Some(match acc {
            None => e.map,
            Some(inner) => super::torusmap::compose(&e.map, &inner)?,
        });
        lower = upper;
    }
    let map = acc.unwrap();
    embedding_from_map(g, k, &map, recipe)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> GroupDatum {
        make_group(s).unwrap()
    }

    #[test]
    fn odd_orthogonal_pair_in_special_unitary() {
        let e = standard_embedding(
            &EmbeddingKind::RealInComplex,
            &grp("SU(6)"),
            &grp("SO(3)xSO(3)"),
        )
        .unwrap();
        assert_eq!(
            e.ambient,
            vec![
                vec![1, 0],
                vec![-1, 0],
                vec![0, 0],
                vec![0, 1],
                vec![0, -1],
                vec![0, 0]
            ]
        );
        assert_eq!(e.map.matrix.len(), 5);
    }

    #[test]
    fn double_block_symplectic() {
        let e = standard_embedding(
            &EmbeddingKind::DiagonalDoubleBlock,
            &grp("Sp(4)"),
            &grp("Sp(2)"),
        )
        .unwrap();
        assert_eq!(
            e.map.matrix,
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]
        );
    }

    #[test]
    fn quaternionic_in_real() {
        let e = standard_embedding(
            &EmbeddingKind::QuaternionicInReal,
            &grp("SO(8)"),
            &grp("Sp(2)"),
        )
        .unwrap();
        assert_eq!(
            e.map.matrix,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]
        );
    }

    #[test]
    fn real_in_quaternionic_convention() {
        let e = standard_embedding(
            &EmbeddingKind::RealInQuaternionic,
            &grp("Sp(3)"),
            &grp("SO(3)"),
        )
        .unwrap();
        assert_eq!(e.map.matrix, vec![vec![1], vec![0], vec![0]]);
    }

    #[test]
    fn composite_column_selection() {
        // U(1) in U(2) in Sp(2)
        let e = embed_recipe(
            "block@U(2) > complex-in-quaternionic",
            &grp("Sp(2)"),
            &grp("U(1)"),
        )
        .unwrap();
        assert_eq!(e.map.matrix, vec![vec![1], vec![0]]);
    }

    #[test]
    fn block_unitary_subgroup_reduces_columns() {
        let e = standard_embedding(
            &EmbeddingKind::Identity,
            &grp("SU(3)"),
            &grp("S(U(1)U(1)U(1))"),
        )
        .unwrap();
        assert_eq!(e.map.matrix, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(e.ambient[2], vec![-1, -1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            standard_embedding(&EmbeddingKind::Block, &grp("SU(3)"), &grp("SO(5)")),
            Err(Error::RankMismatch(_))
        ));
        assert!(matches!(
            standard_embedding(&EmbeddingKind::Block, &grp("SU(3)"), &grp("U(2)")),
            Err(Error::Embedding(_))
        ));
        assert!("sideways".parse::<EmbeddingKind>().is_err());
        assert!(embed_recipe("block > block", &grp("Sp(2)"), &grp("U(1)")).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for (name, _) in NAMES {
            assert_eq!(name.parse::<EmbeddingKind>().unwrap().to_string(), name);
        }
        let m: EmbeddingKind = "matrix:1;1;-2".parse().unwrap();
        assert_eq!(m.to_string(), "matrix:1;1;-2");
    }

    #[test]
    fn explicit_torus_matrix() {
        let k = "matrix:1;1;-2".parse::<EmbeddingKind>().unwrap();
        let e = standard_embedding(&k, &grp("SU(3)"), &grp("T^1")).unwrap();
        assert_eq!(e.map.matrix, vec![vec![1], vec![1]]);
        let bad = "matrix:1;1;1".parse::<EmbeddingKind>().unwrap();
        assert!(standard_embedding(&bad, &grp("SU(3)"), &grp("T^1")).is_err());
    }
}
