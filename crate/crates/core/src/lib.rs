//! Multi-precision laboratory for the Airy solutions of Painleve II.
//!
//! The same family of special solutions `q_n(z; lambda)` is computed by three
//! independent routes: Hankel (tau) determinants of Airy derivatives, the
//! Baecklund recursion started from `q_1`, and the recurrence coefficients of
//! monic orthogonal polynomials for the cubic weight `exp(s^3/3 - t s)` on a
//! combination of rays. The crate cross-checks the routes against each other
//! and against the defining differential equations.

pub mod atlas;
pub mod backlund;
pub mod cli;
pub mod cubic;
pub mod error;
pub mod spectral;
pub mod linalg;
pub mod mp;
pub mod tau;

pub use error::{Error, Result};
pub use mp::{ApComplex, Lambda, PrecCtx, SeedSpec};
pub use tau::{qps_from_tau, tau_derivative, tau_minor, Route, SolutionJet, TauMinor};
