//! Exact decisions for the marginal problem of ±1-valued random variables.
//!
//! * [`density`]: pair densities on `{±1}²` and their covariances.
//! * [`polytope`]: tetrahedron, six Bell inequalities and CHSH checks.
//! * [`joint`], [`complex`]: joint reconstruction and the general
//!   marginal-complex solver with Farkas certificates ([`lp`]).
//! * [`sim`]: Monte Carlo EPR experiments under hidden-variable models.

pub mod cli;
pub mod complex;
pub mod density;
pub mod error;
pub mod joint;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod sim;

pub use complex::{solve_complex, verify_certificate, FeasibilityResult, MarginalComplex};
pub use density::{CovarianceTriple, PairDensity};
pub use error::{Error, Result};
pub use joint::{chsh_reconstruct, feasible_t_interval, joint_pair_marginal, reconstruct_joint};
pub use polytope::{bell_six_check, chsh_check, tetrahedron_check, CovarianceQuad, InequalityReport};
pub use rational::Rational;
