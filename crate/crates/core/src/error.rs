use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the numeric
/// predicates; none of them carries recoverable state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
    #[error("index or digit out of range: {0}")]
    OutOfRange(String),
    #[error("matrix is singular within slack (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("cone image escapes the seed cone at level {level}")]
    ConeNotInvariant { level: usize },
    #[error("requested depth {requested} exceeds the supported maximum {max}")]
    DepthTooLarge { requested: usize, max: usize },
    #[error("not enough data points: {0}")]
    InsufficientData(String),
    #[error("all strip masses vanish; pointwise dimension is undefined off the support")]
    MassVanishes,
    #[error("node budget {budget} exceeded before reaching the requested resolution")]
    ResolutionTooFine { budget: u64 },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("degenerate hull: {0}")]
    DegenerateHull(String),
}

pub type Result<T> = std::result::Result<T, Error>;
