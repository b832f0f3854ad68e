use thiserror::Error;

/// Errors raised by the numeric, algebraic and combinatorial routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid period matrix: {0}")]
    InvalidPeriodMatrix(String),

    #[error("matrix is not integral symplectic: {0}")]
    NotSymplectic(String),

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("requested accuracy {target:e} unattainable within radius cap {cap}; best bound {achievable:e}")]
    UnattainableAccuracy { target: f64, achievable: f64, cap: usize },

    #[error("denominator too small ({0:e}); resample the point")]
    SmallDenominator(f64),

    #[error("ambiguous characteristic match: {candidates} candidates passed")]
    Ambiguity { candidates: usize },

    #[error("ill-conditioned slice: {0}")]
    IllConditionedSlice(String),

    #[error("restricted function vanishes identically on the slice")]
    DegenerateSlice,

    #[error("unresolved point classification: gradient norm {grad_norm:e} lies in the tolerance gap")]
    UnresolvedClassification { grad_norm: f64 },

    #[error("point is not on the zero locus: |theta| = {0:e}")]
    NotOnLocus(f64),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not a separating-curve splitting: {0}")]
    NotSplitting(String),

    #[error("table verification failed at row {row}: {reason}")]
    TableVerification { row: usize, reason: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    /// Stable machine-readable identifier used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InvalidPeriodMatrix(_) => "invalid_period_matrix",
            Error::NotSymplectic(_) => "not_symplectic",
            Error::NumericInstability(_) => "numeric_instability",
            Error::UnattainableAccuracy { .. } => "unattainable_accuracy",
            Error::SmallDenominator(_) => "resample",
            Error::Ambiguity { .. } => "ambiguity",
            Error::IllConditionedSlice(_) => "ill_conditioned_slice",
            Error::DegenerateSlice => "degenerate_slice",
            Error::UnresolvedClassification { .. } => "unresolved_classification",
            Error::NotOnLocus(_) => "not_on_locus",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NotSplitting(_) => "not_splitting",
            Error::TableVerification { .. } => "table_verification",
            Error::Resource(_) => "resource",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
