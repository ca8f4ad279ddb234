//! Virasoro checks: central charge, conformal weights, primary fields.

use std::collections::BTreeMap;

use crate::presentation::builtin_definitions;
use crate::report::{Check, VerificationReport};
use crate::scalar::{Level, Scalar};
use crate::vertex::{Field, FreeFieldAlgebra, LambdaPoly};

use super::VerifierError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroData {
    pub central_charge: Scalar,
    pub weights: BTreeMap<String, Scalar>,
    pub primary: BTreeMap<String, bool>,
}

/// Checks `[L_λ L] = (∂ + 2λ)L + (c/12)λ³` and returns `c`.
pub fn central_charge(l: &Field, alg: &FreeFieldAlgebra) -> Result<Scalar, VerifierError> {
    let p = alg.lambda_bracket(l, l)?;
    let quartic = p.coeff(3);
    let c12 = quartic.as_vacuum_multiple().ok_or_else(|| {
        VerifierError::NotVirasoro(format!("λ³ coefficient {}", alg.render_field(&quartic)))
    })?;
    let mut expected = LambdaPoly::zero();
    expected.add_at(0, &alg.derive(l)?, &Scalar::one());
    expected.add_at(1, l, &Scalar::from_int(2));
    expected.add_at(3, &alg.vacuum(), &c12);
    let residual = p.sub(&expected);
    if !residual.is_zero() {
        return Err(VerifierError::NotVirasoro(alg.render_ope(&residual)));
    }
    Ok(c12.mul_int(12))
}

/// Reads `Δ` from `[L_λ a] = ∂a + Δλa + …`; `a` is primary when nothing else appears.
pub fn weight_of(l: &Field, a: &Field, alg: &FreeFieldAlgebra) -> Result<(Scalar, bool), VerifierError> {
    let p = alg.lambda_bracket(l, a)?;
    let linear = p.coeff(1);
    let weight = match (linear.terms().next(), a.terms().next()) {
        (None, _) => Scalar::zero(),
        (Some((id, c)), _) => {
            let ac = a.coefficient(id);
            if ac.is_zero() {
                return Err(VerifierError::NotEigen(alg.render_field(&linear)));
            }
            c.try_div(&ac)?
        }
    };
    if linear != a.scale(&weight) {
        return Err(VerifierError::NotEigen(alg.render_field(&linear)));
    }
    let translation = p.coeff(0) == alg.derive(a)?;
    let primary = translation && p.degree().is_none_or(|d| d <= 1);
    Ok((weight, primary))
}

/// Central charge plus the weight of every generator that is an `L₀`-eigenvector.
pub fn virasoro_data(l: &Field, alg: &FreeFieldAlgebra) -> Result<VirasoroData, VerifierError> {
    let central_charge = central_charge(l, alg)?;
    let mut weights = BTreeMap::new();
    let mut primary = BTreeMap::new();
    for g in alg.generators() {
        if let Ok((w, p)) = weight_of(l, &alg.generator(&g.name)?, alg) {
            weights.insert(g.name.clone(), w);
            primary.insert(g.name.clone(), p);
        }
    }
    Ok(VirasoroData {
        central_charge,
        weights,
        primary,
    })
}

fn named_field(name: &str, alg: &FreeFieldAlgebra) -> Result<Field, VerifierError> {
    let f = builtin_definitions()
        .field(name)
        .ok_or_else(|| VerifierError::Config(format!("missing built-in field {name}")))?;
    Ok(f.expr.eval(alg)?)
}

fn charge_check(label: &str, alg: &FreeFieldAlgebra, l: &Field, expected: &Scalar) -> (Check, Option<Scalar>) {
    match central_charge(l, alg) {
        Ok(c) => {
            let residual = &c - expected;
            (
                Check::new(label, expected.to_string(), c.to_string(), residual.to_string()),
                Some(c),
            )
        }
        Err(e) => (Check::flag(label, false, e.to_string()), None),
    }
}

/// Central charge regression value of `ω_U` in `βγ ⊗ EL ⊗ βγ`.
pub const OMEGA_U_CENTRAL_CHARGE: i64 = 6;

/// The conformal-vector suite: `c = 26` for the reduced vector, the Virasoro
/// field `-ν(F)/(k+2)`, and `ω_U` with its generator weights.
pub fn verify_conformal(level: &Level) -> Result<VerificationReport, VerifierError> {
    let mut report = VerificationReport::new("conformal", level.to_string());
    let el = FreeFieldAlgebra::el().at_level(level)?;

    let omega_i = named_field("omega_I", &el)?;
    let (check, c) = charge_check("omega_I central charge = 26", &el, &omega_i, &Scalar::from_int(26));
    report.push(check);
    if let Some(c) = c {
        report.push(Check::flag(
            "omega_I central charge is independent of k",
            c.is_constant(),
            c.to_string(),
        ));
    }

    let nu = builtin_definitions().map("map_nu").expect("built-in map_nu");
    let factor = Scalar::from_int(-1).try_div(&(Scalar::k() + Scalar::from_int(2)));
    match factor.and_then(|f| f.eval_at_level(level)) {
        Ok(f) => {
            let l = nu.image("F").expect("image of F").eval(&el)?.scale(&f);
            let k = Scalar::k();
            let two = Scalar::from_int(2);
            let expected = -((&two * &k + Scalar::one()) * (Scalar::from_int(3) * &k + Scalar::from_int(4)))
                .try_div(&(&k + &two))?;
            let expected = expected.eval_at_level(level)?;
            let (check, _) = charge_check("-nu(F)/(k+2) central charge", &el, &l, &expected);
            report.push(check);
            let alt = Scalar::one()
                - Scalar::from_int(6) * (&k + &Scalar::one()).pow(2)?.try_div(&(&k + &two))?;
            let alt = alt.eval_at_level(level)?;
            report.push(Check::new(
                "-(2k+1)(3k+4)/(k+2) = 1 - 6(k+1)^2/(k+2)",
                expected.to_string(),
                alt.to_string(),
                (&alt - &expected).to_string(),
            ));
        }
        Err(_) => report.note("-nu(F)/(k+2) is undefined at this level; skipped"),
    }

    let u = FreeFieldAlgebra::dch_u().at_level(level)?;
    let omega_u = named_field("omega_U", &u)?;
    let (check, _) = charge_check(
        "omega_U central charge (regression)",
        &u,
        &omega_u,
        &Scalar::from_int(OMEGA_U_CENTRAL_CHARGE),
    );
    report.push(check);
    for (g, w) in [("bx", 1), ("gx", 0), ("by", 1), ("gy", 0)] {
        let label = format!("omega_U weight of {g} = {w}");
        match weight_of(&omega_u, &u.generator(g)?, &u) {
            Ok((x, _)) => report.push(Check::new(
                label,
                w.to_string(),
                x.to_string(),
                (&x - &Scalar::from_int(w)).to_string(),
            )),
            Err(e) => report.push(Check::flag(label, false, e.to_string())),
        }
    }
    let (vac_weight, vac_primary) = weight_of(&omega_u, &u.vacuum(), &u)?;
    report.push(Check::flag(
        "omega_U vacuum has weight 0 and is primary",
        vac_weight.is_zero() && vac_primary,
        format!("weight {vac_weight}, primary {vac_primary}"),
    ));
    Ok(report)
}
