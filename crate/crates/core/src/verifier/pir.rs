//! The right action: `x_R = Σⱼ f^{ij}x_L^j + k*·Σⱼₗ (xʲ,xˡ)·f^{ij}·ωₗ` pushed
//! into `βγ ⊗ EL ⊗ βγ` through the restriction map.

use std::fmt;

use rayon::prelude::*;

use crate::expr::FieldExpr;
use crate::presentation::{builtin_definitions, pi_r_data, HomAssignment};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Level, Scalar};
use crate::vertex::{Field, FreeFieldAlgebra, LambdaPoly};

use super::{bracket_check, VerifierError};

/// Sign and normalization conventions for assembling the right-action fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRCalibration {
    /// Overall sign of the `Σ f^{ij} x_L^j` part.
    pub matrix_sign: i64,
    /// Overall sign of the form part.
    pub form_sign: i64,
    /// Scale of the invariant pairing relative to `(e,f) = 1, (h,h) = 2`.
    pub pairing_scale: Scalar,
    /// Write `:f x:` and `:f ω:` (function first) rather than `:x f:`, `:ω f:`.
    pub function_left: bool,
}

impl Default for PiRCalibration {
    fn default() -> Self {
        PiRCalibration {
            matrix_sign: 1,
            form_sign: 1,
            pairing_scale: Scalar::one(),
            function_left: true,
        }
    }
}

impl fmt::Display for PiRCalibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matrix sign {:+}, form sign {:+}, pairing scale {}, {} ordering",
            self.matrix_sign,
            self.form_sign,
            self.pairing_scale,
            if self.function_left { "function-left" } else { "function-right" }
        )
    }
}

impl PiRCalibration {
    /// Every combination tried by [`calibrate_pi_r`], default first.
    pub fn candidates() -> Vec<PiRCalibration> {
        let mut out = Vec::new();
        for function_left in [true, false] {
            for pairing_scale in [Scalar::one(), Scalar::from_ratio(1, 2), Scalar::from_int(2)] {
                for matrix_sign in [1, -1] {
                    for form_sign in [1, -1] {
                        out.push(PiRCalibration {
                            matrix_sign,
                            form_sign,
                            pairing_scale: pairing_scale.clone(),
                            function_left,
                        });
                    }
                }
            }
        }
        out
    }
}

fn restriction() -> &'static HomAssignment {
    builtin_definitions().map("map_r").expect("built-in map_r")
}

/// The dual level `k* = -k-4`.
pub fn dual_level() -> Scalar {
    -(Scalar::k() + Scalar::from_int(4))
}

/// `(P_e, P_h, P_f)` and the left images `(r(e), r(h), r(f))` in the target.
pub fn pi_r_images(
    target: &FreeFieldAlgebra,
    cal: &PiRCalibration,
) -> Result<([Field; 3], [Field; 3]), VerifierError> {
    let data = pi_r_data();
    let r = restriction();
    let ev = |e: &FieldExpr| -> Result<Field, VerifierError> { Ok(r.apply(e).eval(target)?) };
    let np = |f: &Field, x: &Field| -> Result<Field, VerifierError> {
        Ok(if cal.function_left {
            target.nprod(f, x)?
        } else {
            target.nprod(x, f)?
        })
    };
    let left: Vec<Field> = data
        .basis
        .iter()
        .map(|g| ev(&FieldExpr::gen(g)))
        .collect::<Result<_, _>>()?;
    let forms: Vec<Field> = data.forms.iter().map(ev).collect::<Result<_, _>>()?;
    let kstar = dual_level().eval_at_level(target.level())?;
    let scale = cal.pairing_scale.eval_at_level(target.level())?;
    let mut right = Vec::new();
    for i in 0..3 {
        let mut matrix_part = Field::zero();
        let mut form_part = Field::zero();
        for (j, lj) in left.iter().enumerate() {
            let f = ev(&data.matrix[i][j])?;
            matrix_part.add_assign(&np(&f, lj)?);
            for (l, form) in forms.iter().enumerate() {
                let pairing = data.pairing[j][l];
                if pairing != 0 {
                    form_part.add_scaled(&np(&f, form)?, &Scalar::from_int(pairing));
                }
            }
        }
        let mut p = matrix_part.scale(&Scalar::from_int(cal.matrix_sign));
        p.add_scaled(&form_part, &(&kstar * &scale).mul_int(cal.form_sign));
        right.push(p);
    }
    let to_array = |v: Vec<Field>| -> [Field; 3] { v.try_into().expect("three fields") };
    Ok((to_array(right), to_array(left)))
}

/// `[x_λ y] = [x,y] + k*(x,y)λ` for `x, y ∈ {e, h, f}` with
/// `[e,h] = -2e`, `[e,f] = h`, `[h,f] = -2f`.
fn affine_expected(i: usize, j: usize, p: &[Field; 3], target: &FreeFieldAlgebra) -> Result<LambdaPoly, VerifierError> {
    let data = pi_r_data();
    let mut out = LambdaPoly::zero();
    let two = Scalar::from_int(2);
    // structure constants on the basis (e, h, f)
    let commutator: Option<(usize, Scalar)> = match (i, j) {
        (0, 1) => Some((0, -&two)),
        (1, 0) => Some((0, two.clone())),
        (0, 2) => Some((1, Scalar::one())),
        (2, 0) => Some((1, Scalar::from_int(-1))),
        (1, 2) => Some((2, -&two)),
        (2, 1) => Some((2, two.clone())),
        _ => None,
    };
    if let Some((m, c)) = commutator {
        out.add_at(0, &p[m], &c);
    }
    let pairing = data.pairing[i][j];
    if pairing != 0 {
        let kstar = dual_level().eval_at_level(target.level())?;
        out.add_at(1, &target.vacuum(), &kstar.mul_int(pairing));
    }
    Ok(out)
}

fn run_checks(
    target: &FreeFieldAlgebra,
    cal: &PiRCalibration,
) -> Result<Vec<Check>, VerifierError> {
    let (p, l) = pi_r_images(target, cal)?;
    let names = ["e", "h", "f"];
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
    let mut checks: Vec<Check> = pairs
        .par_iter()
        .filter(|(i, j)| i <= j)
        .map(|&(i, j)| {
            let expected = affine_expected(i, j, &p, target)?;
            let actual = target.lambda_bracket(&p[i], &p[j])?;
            Ok(bracket_check(
                target,
                format!("affine [{}_R λ {}_R] at level k*", names[i], names[j]),
                &expected,
                &actual,
            ))
        })
        .collect::<Result<_, VerifierError>>()?;
    let commutant: Vec<Check> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let actual = target.lambda_bracket(&p[i], &l[j])?;
            Ok(bracket_check(
                target,
                format!("commutant [{}_R λ {}_L]", names[i], names[j]),
                &LambdaPoly::zero(),
                &actual,
            ))
        })
        .collect::<Result<_, VerifierError>>()?;
    checks.extend(commutant);
    Ok(checks)
}

/// Verifies the affine OPE at level `k*` and commutation with the left action
/// under the given calibration.
pub fn verify_pi_r(level: &Level, cal: &PiRCalibration) -> Result<VerificationReport, VerifierError> {
    let target = FreeFieldAlgebra::dch_u().at_level(level)?;
    let mut report = VerificationReport::new("pir", level.to_string());
    report.note(format!("calibration: {cal}"));
    for c in run_checks(&target, cal)? {
        report.push(c);
    }
    Ok(report)
}

/// The first candidate calibration whose closure test passes at `level`.
pub fn calibrate_pi_r(level: &Level) -> Result<Option<PiRCalibration>, VerifierError> {
    let target = FreeFieldAlgebra::dch_u().at_level(level)?;
    for cal in PiRCalibration::candidates() {
        if run_checks(&target, &cal)?.iter().all(|c| c.pass) {
            return Ok(Some(cal));
        }
    }
    Ok(None)
}
