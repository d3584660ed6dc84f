use thiserror::Error;

/// Errors surfaced by the library. CLI exit codes: verdict-level failures
/// map to 1, malformed input to 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("minimal polynomial is reducible over its base field")]
    ReducibleMinimalPolynomial,

    #[error("the two coefficients share the non-unit factor {0}; form is not saturated")]
    NotIsolatedSingularity(String),

    #[error("the 1-form is regular at the origin; nothing to reduce")]
    NotSingular,

    #[error("dicritical blow-up at point {point} (height {height})")]
    Dicritical { point: usize, height: usize },

    #[error("reduction exceeded the height limit {0}")]
    HeightLimitExceeded(usize),

    #[error("a strict transform coefficient vanishes identically on the divisor together with the other")]
    NonIsolatedOnDivisor,

    #[error("point is not reduced; classification requires a reduced singularity")]
    NotReduced,

    #[error("branch is not an invariant curve of the form")]
    BranchNotInvariant,

    #[error("Milnor stabilization exceeded the cap {0}")]
    CapExceeded(usize),

    #[error("nerve arrow undetermined in certified-only mode")]
    UnknownArrow,

    #[error("tree has a dicritical component; nerve and finite-type pipelines refuse it")]
    DicriticalTree,

    #[error("parse error at {line}:{column}: expected {expected}")]
    Parse {
        line: usize,
        column: usize,
        expected: String,
    },

    #[error("annotation refers to unknown id {0}")]
    UnknownAnnotationId(String),

    #[error("annotation for {id} conflicts with a certified value")]
    AnnotationConflict { id: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
