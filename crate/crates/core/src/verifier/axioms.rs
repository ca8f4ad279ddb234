//! Randomized checks of the λ-bracket axioms and the Wick formulas on
//! sampled fields of bounded conformal weight.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Check, VerificationReport};
use crate::scalar::Scalar;
use crate::vertex::{binomial, BiPoly, Field, FreeFieldAlgebra, LambdaPoly};

use super::VerifierError;

fn grading(f: &Field) -> u32 {
    f.terms().map(|(id, _)| id.get().grading()).max().unwrap_or(0)
}

fn random_atom(alg: &FreeFieldAlgebra, max_grading: u32, rng: &mut ChaCha8Rng) -> Result<Field, VerifierError> {
    let spec = alg.generators().choose(rng).expect("nonempty generator list");
    let base = alg.generator(&spec.name)?;
    let room = max_grading.saturating_sub(grading(&base));
    let derivs = if room == 0 { 0 } else { rng.gen_range(0..=room.min(2)) };
    Ok(alg.derive_n(&base, derivs)?)
}

/// A random linear combination of normally ordered products of generator
/// derivatives whose terms have weight at most `max_grading`.
pub fn random_field(
    alg: &FreeFieldAlgebra,
    max_grading: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Field, VerifierError> {
    let mut out = Field::zero();
    let terms = rng.gen_range(1..=2);
    for _ in 0..terms {
        let mut t = random_atom(alg, max_grading, rng)?;
        if rng.gen_bool(0.5) {
            let room = max_grading.saturating_sub(grading(&t));
            let second = random_atom(alg, room, rng)?;
            if grading(&t) + grading(&second) <= max_grading {
                t = alg.nprod(&t, &second)?;
            }
        }
        let c = rng.gen_range(-3i64..=3);
        out.add_scaled(&t, &Scalar::from_int(if c == 0 { 1 } else { c }));
    }
    Ok(out)
}

fn render_bi(alg: &FreeFieldAlgebra, p: &BiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.coeffs()
        .map(|((i, j), f)| format!("λ^{i}μ^{j}: {}", alg.render_field(f)))
        .collect::<Vec<_>>()
        .join("; ")
}

fn lp_check(alg: &FreeFieldAlgebra, label: String, lhs: &LambdaPoly, rhs: &LambdaPoly) -> Check {
    Check::new(label, alg.render_ope(rhs), alg.render_ope(lhs), alg.render_ope(&lhs.sub(rhs)))
}

fn field_check(alg: &FreeFieldAlgebra, label: String, lhs: &Field, rhs: &Field) -> Check {
    Check::new(label, alg.render_field(rhs), alg.render_field(lhs), alg.render_field(&lhs.sub(rhs)))
}

/// `[b_λ a] = -[a_{-λ-∂} b]`.
pub fn check_skew(alg: &FreeFieldAlgebra, a: &Field, b: &Field) -> Result<(LambdaPoly, LambdaPoly), VerifierError> {
    Ok((alg.lambda_bracket(b, a)?, alg.skew(&alg.lambda_bracket(a, b)?)))
}

/// `[∂a_λ b] = -λ[a_λ b]` and `[a_λ ∂b] = (∂+λ)[a_λ b]`.
pub fn check_sesquilinearity(
    alg: &FreeFieldAlgebra,
    a: &Field,
    b: &Field,
) -> Result<[(LambdaPoly, LambdaPoly); 2], VerifierError> {
    let p = alg.lambda_bracket(a, b)?;
    let left = (
        alg.lambda_bracket(&alg.derive(a)?, b)?,
        p.shift(1).scale(&Scalar::from_int(-1)),
    );
    let mut right_rhs = p.shift(1);
    right_rhs.add_assign(&p.map_fields(|f| alg.derive(f).expect("checked field")));
    let right = (alg.lambda_bracket(a, &alg.derive(b)?)?, right_rhs);
    Ok([left, right])
}

/// Both sides of `[a_λ[b_μ c]] - [b_μ[a_λ c]] = [[a_λ b]_{λ+μ} c]`.
pub fn check_jacobi(
    alg: &FreeFieldAlgebra,
    a: &Field,
    b: &Field,
    c: &Field,
) -> Result<(BiPoly, BiPoly), VerifierError> {
    let one = Scalar::one();
    let mut lhs = BiPoly::zero();
    for (j, q) in alg.lambda_bracket(b, c)?.coeffs() {
        for (i, r) in alg.lambda_bracket(a, q)?.coeffs() {
            lhs.add_at(i, j, r, &one);
        }
    }
    for (i, s) in alg.lambda_bracket(a, c)?.coeffs() {
        for (j, t) in alg.lambda_bracket(b, s)?.coeffs() {
            lhs.add_at(i, j, t, &Scalar::from_int(-1));
        }
    }
    let mut rhs = BiPoly::zero();
    for (n, p) in alg.lambda_bracket(a, b)?.coeffs() {
        for (m, u) in alg.lambda_bracket(p, c)?.coeffs() {
            for t in 0..=m {
                rhs.add_at(n + t, m - t, u, &binomial(m, t));
            }
        }
    }
    Ok((lhs, rhs))
}

/// `:(:ab:)c: - :a(:bc:): = Σⱼ :(∂^{j+1}a/(j+1)) [b_λ c]_j: + (a ↔ b)`.
pub fn check_quasi_associativity(
    alg: &FreeFieldAlgebra,
    a: &Field,
    b: &Field,
    c: &Field,
) -> Result<(Field, Field), VerifierError> {
    let lhs = alg.nprod(&alg.nprod(a, b)?, c)?.sub(&alg.nprod(a, &alg.nprod(b, c)?)?);
    let mut rhs = Field::zero();
    for (x, y) in [(a, b), (b, a)] {
        for (j, q) in alg.lambda_bracket(y, c)?.coeffs() {
            let dx = alg.derive_n(x, j + 1)?;
            let factor = Scalar::one().div_int(i64::from(j) + 1);
            rhs.add_scaled(&alg.nprod(&dx, q)?, &factor);
        }
    }
    Ok((lhs, rhs))
}

/// `[a_λ :bc:] = :[a_λ b]c: + :b[a_λ c]: + ∫₀^λ [[a_λ b]_μ c] dμ`.
pub fn check_leibniz(
    alg: &FreeFieldAlgebra,
    a: &Field,
    b: &Field,
    c: &Field,
) -> Result<(LambdaPoly, LambdaPoly), VerifierError> {
    let lhs = alg.lambda_bracket(a, &alg.nprod(b, c)?)?;
    let one = Scalar::one();
    let mut rhs = LambdaPoly::zero();
    let ab = alg.lambda_bracket(a, b)?;
    for (n, p) in ab.coeffs() {
        rhs.add_at(n, &alg.nprod(p, c)?, &one);
        for (m, u) in alg.lambda_bracket(p, c)?.coeffs() {
            rhs.add_at(n + m + 1, u, &one.div_int(i64::from(m) + 1));
        }
    }
    for (n, q) in alg.lambda_bracket(a, c)?.coeffs() {
        rhs.add_at(n, &alg.nprod(b, q)?, &one);
    }
    Ok((lhs, rhs))
}

fn triple_checks(alg: &FreeFieldAlgebra, tag: &str, a: &Field, b: &Field, c: &Field) -> Result<Vec<Check>, VerifierError> {
    let mut out = Vec::new();
    let (l, r) = check_skew(alg, a, b)?;
    out.push(lp_check(alg, format!("{tag}: skew-symmetry"), &l, &r));
    for ((l, r), side) in check_sesquilinearity(alg, a, b)?.iter().zip(["left", "right"]) {
        out.push(lp_check(alg, format!("{tag}: sesquilinearity ({side})"), l, r));
    }
    let (l, r) = check_jacobi(alg, a, b, c)?;
    let residual = l.sub(&r);
    out.push(Check::new(
        format!("{tag}: Jacobi identity"),
        render_bi(alg, &r),
        render_bi(alg, &l),
        render_bi(alg, &residual),
    ));
    let (l, r) = check_quasi_associativity(alg, a, b, c)?;
    out.push(field_check(alg, format!("{tag}: quasi-associativity"), &l, &r));
    let (l, r) = check_leibniz(alg, a, b, c)?;
    out.push(lp_check(alg, format!("{tag}: non-commutative Wick formula"), &l, &r));
    Ok(out)
}

/// Runs every axiom on all generator triples and on `samples` random triples
/// of weight at most `max_grading`, reproducibly from `seed`.
pub fn run_axiom_suite(
    alg: &FreeFieldAlgebra,
    max_grading: u32,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifierError> {
    let names: Vec<String> = alg.generators().iter().map(|g| g.name.clone()).collect();
    let mut triples: Vec<(String, Field, Field, Field)> = Vec::new();
    for x in &names {
        for y in &names {
            for z in &names {
                triples.push((
                    format!("({x}, {y}, {z})"),
                    alg.generator(x)?,
                    alg.generator(y)?,
                    alg.generator(z)?,
                ));
            }
        }
    }
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let a = random_field(alg, max_grading, &mut rng)?;
        let b = random_field(alg, max_grading, &mut rng)?;
        let c = random_field(alg, max_grading, &mut rng)?;
        triples.push((format!("sample {i}"), a, b, c));
    }
    let checks: Vec<Vec<Check>> = triples
        .par_iter()
        .map(|(tag, a, b, c)| triple_checks(alg, tag, a, b, c))
        .collect::<Result<_, _>>()?;
    let mut report = VerificationReport::new(format!("axioms {}", alg.name()), alg.level().to_string());
    report.note(format!("seed {seed}, {samples} samples, weight ≤ {max_grading}"));
    for c in checks.into_iter().flatten() {
        report.push(c);
    }
    Ok(report)
}
