use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("value {0} is not finite")]
    NonFinite(f64),

    #[error("negative mass {mass} at vertex {vertex}")]
    NegativeMass { vertex: String, mass: Box<Rational> },

    #[error("masses sum to {sum}, deficit from 1 is {deficit}")]
    MassSumNotOne { sum: Box<Rational>, deficit: Box<Rational> },

    #[error("covariance {0} lies outside [-1, 1]")]
    CovarianceOutOfRange(Box<Rational>),

    #[error("pair density {0} does not have uniform ±1 marginals")]
    NonUniformMarginals(String),

    #[error("product space has {atoms} atoms, above the cap of {cap}")]
    ProductSpaceTooLarge { atoms: u128, cap: u64 },

    #[error("constraints {first} and {second} disagree on the marginal over {over:?}: {detail}")]
    InconsistentOverlap {
        first: usize,
        second: usize,
        over: Vec<String>,
        detail: String,
    },

    #[error("certificate has {got} coefficients, complex has {expected} scalar equations")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid marginal complex: {0}")]
    InvalidComplex(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("category {0} has no scheduled time slot")]
    UnscheduledCategory(usize),

    #[error("category {0} has no trials")]
    EmptyCategory(usize),

    #[error("analysis needs 3 or 4 categories, record has {0}")]
    WrongCategoryCount(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
