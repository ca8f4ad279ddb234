//! Homomorphism, conformal-vector and axiom checks in free-field targets.

mod axioms;
mod conformal;
mod pir;
mod suites;

use rayon::prelude::*;
use thiserror::Error;

use crate::classical::ClassicalError;
use crate::expr::{ExprError, FieldExpr};
use crate::presentation::{HomAssignment, PresentationError};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Level, ScalarError};
use crate::vertex::{Field, FreeFieldAlgebra, LambdaPoly, VertexError};

pub use axioms::{
    check_jacobi, check_leibniz, check_quasi_associativity, check_sesquilinearity, check_skew,
    random_field, run_axiom_suite,
};
pub use conformal::{central_charge, verify_conformal, virasoro_data, weight_of, VirasoroData};
pub use suites::{run_suite, SuiteOptions, SUITE_NAMES};
pub use pir::{calibrate_pi_r, dual_level, pi_r_images, verify_pi_r, PiRCalibration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("not a Virasoro field: residual {0}")]
    NotVirasoro(String),
    #[error("not an eigenvector of L₀: {0}")]
    NotEigen(String),
    #[error("{0}")]
    Config(String),
}

/// Builds a bracket check; the residual is `actual - expected`.
pub fn bracket_check(
    alg: &FreeFieldAlgebra,
    label: String,
    expected: &LambdaPoly,
    actual: &LambdaPoly,
) -> Check {
    let residual = actual.sub(expected);
    Check::new(
        label,
        alg.render_ope(expected),
        alg.render_ope(actual),
        alg.render_ope(&residual),
    )
}

pub fn field_check(alg: &FreeFieldAlgebra, label: String, expected: &Field, actual: &Field) -> Check {
    let residual = actual.sub(expected);
    Check::new(
        label,
        alg.render_field(expected),
        alg.render_field(actual),
        alg.render_field(&residual),
    )
}

/// The λ-polynomial of a table entry pushed through `h`, as `[x_λ y]`.
fn expected_bracket(
    h: &HomAssignment,
    target: &FreeFieldAlgebra,
    x: &str,
    y: &str,
) -> Result<LambdaPoly, VerifierError> {
    let Some((entry, swapped)) = h.source.entry(x, y) else {
        return Ok(LambdaPoly::zero());
    };
    let mut products = Vec::new();
    for (pole, e) in &entry.poles {
        products.push((pole - 1, eval(&h.apply(e), target)?));
    }
    let stored = LambdaPoly::from_products(products);
    Ok(if swapped { target.skew(&stored) } else { stored })
}

fn eval(e: &FieldExpr, target: &FreeFieldAlgebra) -> Result<Field, VerifierError> {
    Ok(e.eval(target)?)
}

/// Checks every generator pair of the source against its table entry (or
/// against regularity when the pair is absent) and that each relation maps
/// to zero. Scalars are specialized at `level` first.
pub fn verify_hom(h: &HomAssignment, level: &Level) -> Result<VerificationReport, VerifierError> {
    let target = h.target_algebra()?.at_level(level)?;
    let images: Vec<(String, Field)> = h
        .images
        .iter()
        .map(|(g, e)| Ok((g.clone(), eval(e, &target)?)))
        .collect::<Result<_, VerifierError>>()?;
    let image = |g: &str| &images.iter().find(|(n, _)| n == g).expect("image present").1;
    let pairs = h.source.pairs();
    let mut checks: Vec<Check> = pairs
        .par_iter()
        .map(|(x, y)| {
            let expected = expected_bracket(h, &target, x, y)?;
            let actual = target.lambda_bracket(image(x), image(y))?;
            let kind = if h.source.entry(x, y).is_some() { "bracket" } else { "regular" };
            Ok(bracket_check(&target, format!("{kind} [{x}_λ {y}]"), &expected, &actual))
        })
        .collect::<Result<_, VerifierError>>()?;
    let relations: Vec<Check> = h
        .source
        .relations
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let actual = eval(&h.apply(r), &target)?;
            Ok(field_check(&target, format!("relation {}", i + 1), &Field::zero(), &actual))
        })
        .collect::<Result<_, VerifierError>>()?;
    checks.extend(relations);
    let mut report = VerificationReport::new(h.name.clone(), level.to_string());
    for c in checks {
        report.push(c);
    }
    Ok(report)
}
