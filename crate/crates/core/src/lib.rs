//! Exact λ-bracket calculus for free-field vertex algebras over ℚ(k), with
//! presented algebras, homomorphism checks and the classical Poisson limit.

pub mod classical;
pub mod expr;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod vertex;
pub mod verifier;
