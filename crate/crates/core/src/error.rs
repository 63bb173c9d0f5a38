use thiserror::Error;

use crate::embedding::PerturbationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry model: {0}")]
    InvalidModel(String),

    #[error("point outside the model domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("points {0}, {1} and {2} are collinear; configuration is not in general position")]
    NotInGeneralPosition(usize, usize, usize),

    #[error("convex hulls of the two sides intersect")]
    HullsIntersect,

    #[error("perturbation step budget of {budget} exhausted with {remaining} collinear triples left")]
    StepBudgetExhausted {
        budget: usize,
        remaining: usize,
        report: Box<PerturbationReport>,
    },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("graph error: {0}")]
    Graph(String),
}

impl Error {
    /// Invariant violations signal a bug or a numerical breakdown rather than
    /// bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
