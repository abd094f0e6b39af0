use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("non-finite entry in matrix input")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error(
        "input is not a quantum channel (min Choi eigenvalue {min_eigenvalue:e}, \
         trace-preservation residual {tp_residual:e})"
    )]
    NotAChannel {
        min_eigenvalue: f64,
        tp_residual: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wrong Choi rank: expected {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// True for errors that mean "the input does not describe a valid CPTP map".
    pub fn is_not_a_channel(&self) -> bool {
        matches!(
            self,
            Error::NotPsd { .. }
                | Error::NotTracePreserving { .. }
                | Error::NotCompletelyPositive { .. }
                | Error::NotAChannel { .. }
        )
    }
}
