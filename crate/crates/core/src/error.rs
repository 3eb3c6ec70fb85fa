use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("incomplete assignment: no value for `{0}`")]
    IncompleteAssignment(String),
    #[error("inconsistent conjugates: value of `{0}` is not the conjugate of its partner")]
    InconsistentConjugates(String),
    #[error("parse error at line {line}, column {column}: {message} (near `{token}`)")]
    Parse {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("operator is not skew-adjoint for the pairing")]
    NotSkew,
    #[error("operator has polynomial entries; {0}")]
    PolynomialEntries(String),
    #[error("not a complex structure: I^2 != -1")]
    NotComplexStructure,
    #[error("symplectic matrix is singular or not skew")]
    SingularOmega,
    #[error("not a generalized complex structure: {0}")]
    NotGeneralizedComplex(String),
    #[error("structures do not commute")]
    NotCommuting,
    #[error("G = -J1 J2 is not positive definite: leading minor {index} = {value}")]
    NotPositiveDefinite { index: usize, value: String },
    #[error("subspace is not a generalized complex subspace (L_W meets its conjugate in dimension {0})")]
    NotGeneralizedComplexSubspace(usize),
    #[error("structure does not preserve V1 ⊕ Ann(N): {0}")]
    NotInvariant(String),
    #[error("twist H is not closed")]
    HNotClosed,
    #[error("B is not closed")]
    BNotClosed,
    #[error("B is not closed or not invariant")]
    BNotClosedOrNotInvariant,
    #[error("frame is not isotropic: <s_{0}, s_{1}> != 0")]
    NotIsotropic(usize, usize),
    #[error("malformed ε family: {0}")]
    MalformedFamily(String),
    #[error("residual outside adjacent degrees: {0}")]
    ResidualOutsideAdjacentDegrees(String),
    #[error("residual outside the four corners: {0}")]
    ResidualOutsideCorners(String),
    #[error("double complex invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("point is not on the level set: {0}")]
    NotOnLevelSet(String),
    #[error("torus does not act freely at the point")]
    NotFree,
    #[error("weight condition {condition}) violated: {detail}")]
    WeightConditionViolated { condition: char, detail: String },
    #[error("hypothesis not verified: {0}")]
    HypothesisNotVerified(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("scene error: {0}")]
    Scene(String),
}

pub type Result<T> = std::result::Result<T, Error>;
