use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("dimension {dim} exceeds supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("map is not surjective onto the target cone: ray {0:?} is not in the image")]
    NotSurjective(Vec<i64>),
    #[error("label mismatch between divisors: {0}")]
    LabelMismatch(String),
    #[error("invalid rational number {0:?}")]
    ParseRational(String),
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(String),
    #[error("sign of {0} could not be certified at the available precision")]
    Uncertifiable(String),
    #[error("no approximation found within search budget {0}")]
    SearchExhausted(u64),
    #[error("anchor is not certified: {0}")]
    UncertifiedAnchor(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("stabilization violated at ray {ray:?} (multiple {multiple})")]
    StabilizationViolated { ray: Vec<i64>, multiple: u64 },
    #[error("missing stabilization data for ray {0:?}")]
    MissingStabilization(Vec<i64>),
    #[error("fan violation: {0}")]
    FanViolation(String),
    #[error("divisor is not integral")]
    NotIntegral,
    #[error("empty linear system")]
    EmptyLinearSystem,
    #[error("divisor has negative Iitaka dimension (empty polytope)")]
    NegativeIitaka,
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("LP is unbounded")]
    Unbounded,
    #[error("certificate check failed: {0}")]
    CertificateInvalid(String),
    #[error("integer overflow")]
    Overflow,
    #[error("unbounded grading: {0}")]
    UnboundedGrading(String),
}

pub type Result<T> = std::result::Result<T, Error>;
