//! Exact scalar arithmetic, dense linear algebra over ℚ(i), and sparse
//! multivariate polynomials with constant-coefficient differential operators.

pub mod gaussian;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use gaussian::GaussianRational;
pub use matrix::{Matrix, SylvesterCertificate, Vector};
pub use poly::MultiPoly;
pub use rational::Rational;
