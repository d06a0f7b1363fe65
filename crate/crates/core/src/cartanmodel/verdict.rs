use serde::{Deserialize, Serialize};

use crate::liegroups::WeylElement;

/// One-sided answers: the criteria can certify "yes" but never "no".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    NoWitnessFound,
    NotApplicable,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::NoWitnessFound => "no-witness-found",
            Answer::NotApplicable => "not-applicable",
        })
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// rk G = rk K; the images form a regular sequence.
    EqualRank,
    /// Every image outside the regular subset is zero.
    VanishingRedundantImages,
    /// Each redundant image lies in the ideal of the earlier ones, in both
    /// copies of the Borel model.
    NestedMembership,
    /// The regular images generate all of H*(BK); H*(G/K) is free.
    FreeCohomology,
    /// Same maximal torus as a subgroup with a known verdict, up to conjugacy.
    SharedTorusTransfer,
    /// Only generator degrees are known; every consistent assignment works.
    DegreeReasoning,
    /// Product and diagonal reductions to a smaller space times a free factor.
    ProductReduction,
    /// Quotient by a torus acting freely on a group factor.
    TorusQuotient,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(String::from));
        f.write_str(s.as_deref().unwrap_or("?"))
    }
}

/// Re-checkable evidence that a redundant image is in the ideal of the
/// regular images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipRecord {
    pub index: usize,
    pub image: String,
    pub remainder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingWitness {
    /// Variable count of the images (the rank of K).
    pub nvars: usize,
    pub regular_subset: Vec<usize>,
    pub redundant_order: Vec<usize>,
    /// Reduced Gröbner basis of the regular images.
    pub regular_basis: Vec<String>,
    pub membership_certificates: Vec<MembershipRecord>,
}

/// Evidence that `psi_index(u) - psi_index(w)` is in the ideal generated by
/// the same differences for `earlier`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BorelEvidence {
    ZeroImage,
    /// `psi_index = P(psi_earlier)`; `P` written in variables `t1..` that
    /// stand for the earlier images in order.
    Expression {
        polynomial: String,
    },
    /// Gröbner basis of the doubled ideal (variables `u` then `w`).
    DoubledIdeal {
        basis: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorelCertificate {
    pub index: usize,
    pub earlier: Vec<usize>,
    pub evidence: BorelEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantWitness {
    pub order: Vec<usize>,
    pub certificates: Vec<BorelCertificate>,
}

/// The assignment of one degree-only candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCandidate {
    /// `(K degree, G degree)` pairs where the image is linear in the generator.
    pub linear: Vec<(u32, u32)>,
    /// `(K degree, exponent, G degree)`: the image contains a pure power.
    pub powers: Vec<(u32, u32, u32)>,
    /// G degrees whose images are forced to vanish.
    pub free_degrees: Vec<u32>,
    /// Odd degrees of the free (sphere) factors.
    pub sphere_dimensions: Vec<u32>,
    pub certified: bool,
    pub poincare: Vec<u64>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWitness {
    pub group_degrees: Vec<u32>,
    pub subgroup_degrees: Vec<u32>,
    pub facts: Vec<String>,
    pub candidates: Vec<DegreeCandidate>,
    /// Assignments discarded because they would leave infinite cohomology.
    pub impossible: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferWitness {
    /// The space whose verdict is reused.
    pub target: String,
    /// Ambient group in which the two tori are compared.
    pub ambient: String,
    /// Weyl element carrying one torus image onto the other.
    pub weyl: Option<WeylElement>,
    /// A conjugacy taken as an input fact rather than computed.
    pub declared_fact: Option<String>,
    pub target_verdict: Box<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub rule: String,
    /// Degrees of the free odd generators split off.
    pub free_degrees: Vec<u32>,
    pub factor: Option<Box<Verdict>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Splitting {
        splitting: SplittingWitness,
        equivariant: Option<EquivariantWitness>,
    },
    Degrees(DegreeWitness),
    Transfer(TransferWitness),
    Product(ProductWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub space: String,
    pub formal: Answer,
    pub equivariantly_formal: Answer,
    pub route: Option<Route>,
    pub witness: Option<Witness>,
    /// Coefficients of the Poincaré polynomial, lowest degree first.
    pub poincare: Option<Vec<u64>>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn inconclusive(space: impl Into<String>, note: impl Into<String>) -> Verdict {
        Verdict {
            space: space.into(),
            formal: Answer::NoWitnessFound,
            equivariantly_formal: Answer::NoWitnessFound,
            route: None,
            witness: None,
            poincare: None,
            notes: vec![note.into()],
        }
    }

    pub fn all_yes(&self) -> bool {
        self.formal.is_yes() && self.equivariantly_formal.is_yes()
    }
}
