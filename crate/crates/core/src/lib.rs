//! Stable approximation of functions from equispaced samples with Jacobi
//! polynomial frames.
//!
//! A function on `[-1, 1]` is sampled at `m + 1` equispaced nodes and fitted by
//! a combination of Jacobi polynomials that are orthonormal on a larger
//! interval `[-gamma, gamma]`. The resulting least-squares system is
//! exponentially ill-conditioned; solving it with a truncated SVD (discarding
//! singular values `<= epsilon`) still yields accurate, well-conditioned
//! approximations.

mod accurate;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod frame;
pub mod orthopoly;
pub mod par;
pub mod quadrature;
pub mod sampling;

pub use error::{FrameError, Result};
pub use frame::{
    approximate, assemble, condition_estimate, evaluate, factorize, project_via_singular, singular_poly, DesignMatrix,
    FrameApproximant, FrameConfig, FrameSolver, SingularPolynomial, TruncatedFactorization,
};
pub use orthopoly::{jacobi_eval, jacobi_eval_all, norm_constant, FrameSystem, JacobiParams};
pub use par::Execution;
pub use sampling::{make_grid, EquispacedGrid, SampleVector};
