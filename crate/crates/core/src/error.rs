use thiserror::Error;

use crate::field::CoefficientField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(CoefficientField, CoefficientField),

    #[error("division by zero in the Novikov field")]
    DivisionByZero,

    #[error("cannot parse `{0}` as a Novikov field element")]
    Parse(String),

    #[error("parameters out of range: {0}")]
    OutOfRange(String),

    #[error("torus weights must be pairwise distinct (alpha_{0} = alpha_{1})")]
    CoincidentWeights(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "O(-{n}) -> P^{m} lies in the range 2+m <= n <= 2m where weak+ monotonicity fails; \
         the continuation matrix is not defined there"
    )]
    Unsupported { m: u32, n: u32 },

    #[error("{0} is not invertible in the coefficient field")]
    NotInvertible(String),

    #[error("presentation is incomplete: coefficients at generator powers {0:?} are unknown")]
    IncompletePresentation(Vec<usize>),

    #[error("ring elements belong to different presentations")]
    PresentationMismatch,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
