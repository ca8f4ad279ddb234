//! Free-field vertex algebras: canonical normal forms and the λ-bracket calculus.

mod algebra;
mod engine;
mod field;
mod monomial;

use thiserror::Error;

pub use algebra::{FactorSpec, FreeFieldAlgebra, GeneratorKind, GeneratorSpec};
pub use field::{binomial, factorial, BiPoly, Field, LambdaPoly};
pub use monomial::{interned_count, MonoId, Monomial, Part, VecGen};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VertexError {
    #[error("field does not belong to algebra `{0}`")]
    MixedAlgebra(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator name `{0}` used twice")]
    SlotClash(String),
}

#[cfg(test)]
mod tests;
