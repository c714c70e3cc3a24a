//! Oja's algorithm as an online learner over symmetric matrix sequences.
//!
//! When the inputs share an orthonormal eigenbasis, the squared overlaps of
//! Oja's iterate with that basis evolve exactly like the weights of the
//! multiplicative weights method on a derived loss sequence. This crate
//! implements both learners, the bridge between them, checkers for the
//! resulting regret bounds, and two applications: gap-free leading-eigenvalue
//! approximation and convex minimization of `g(x^T A_1 x, ..., x^T A_m x)` over
//! the unit sphere.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod bound;
pub mod eig;
pub mod error;
pub mod experts;
pub mod instance;
pub mod linalg;
pub mod oja;
pub mod quadform;
mod scalar;
pub mod simplex;

pub use bound::BoundReport;
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SymmetricMatrix64 = linalg::SymmetricMatrix<f64>;
pub type UnitVector64 = linalg::UnitVector<f64>;
pub type OrthonormalBasis64 = linalg::OrthonormalBasis<f64>;
pub type CommutingFamily64 = linalg::CommutingFamily<f64>;
pub type MwState64 = experts::MwState<f64>;
pub type OjaState64 = oja::OjaState<f64>;
pub type BoundReport64 = bound::BoundReport<f64>;
pub type EigResult64 = eig::EigResult<f64>;
pub type QuadOptResult64 = quadform::QuadOptResult<f64>;
pub type QuadFormProblem64 = quadform::QuadFormProblem<f64>;
