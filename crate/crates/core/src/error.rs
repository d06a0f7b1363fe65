use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("cannot parse polynomial `{text}`: {reason}")]
    PolynomialSyntax { text: String, reason: String },

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error(
        "regularity test needs as many polynomials as variables ({polys} given, {vars} variables)"
    )]
    RegularSystemShape { polys: usize, vars: usize },

    #[error("unknown group label `{0}`")]
    UnknownGroup(String),

    #[error("group parameter out of bounds: {0}")]
    GroupBounds(String),

    #[error("malformed embedding: {0}")]
    Embedding(String),

    #[error("incompatible ranks: {0}")]
    RankMismatch(String),

    #[error("{0} is only known by its degrees; no invariant polynomials are available")]
    DegreeOnly(String),

    #[error("search bound exceeded: {0}")]
    SearchBound(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("report error: {0}")]
    Report(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
