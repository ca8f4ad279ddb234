//! Named verification suites, shared by the command-line tool and the tests.

use crate::classical::{
    c2_relation_check, check_poisson_axioms, verify_poisson_map, ClassicalError, C2_DICTIONARY,
};
use crate::presentation::Definitions;
use crate::report::{Check, VerificationReport};
use crate::scalar::Level;
use crate::vertex::FreeFieldAlgebra;

use super::{run_axiom_suite, verify_conformal, verify_hom, verify_pi_r, PiRCalibration, VerifierError};

pub const SUITE_NAMES: &[&str] = &["r", "ds1", "nu", "pir", "conformal", "axioms", "classical", "c2", "all"];

/// Knobs for the randomized suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random triples per algebra; each contributes three fields.
    pub samples: usize,
    pub max_grading: u32,
    /// Restricts the axiom suite to one algebra; defaults to `EL` and `BgEL`.
    pub algebra: Option<String>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 70,
            max_grading: 4,
            algebra: None,
        }
    }
}

fn hom_suite(defs: &Definitions, map: &str, level: &Level) -> Result<VerificationReport, VerifierError> {
    let h = defs
        .map(map)
        .ok_or_else(|| VerifierError::Config(format!("no map named {map}")))?;
    verify_hom(h, level)
}

fn poisson_suite(defs: &Definitions) -> Result<VerificationReport, VerifierError> {
    let mut report = VerificationReport::new("classical", "classical");
    for name in ["ZG", "KT"] {
        let p = defs
            .poisson(name)
            .ok_or_else(|| VerifierError::Config(format!("no Poisson algebra named {name}")))?;
        report.absorb(name, check_poisson_axioms(p)?);
    }
    let chart = defs
        .poisson_map("chart")
        .ok_or_else(|| VerifierError::Config("no Poisson map named chart".into()))?;
    report.absorb("chart", verify_poisson_map(chart)?);
    Ok(report)
}

/// The C₂ comparison only makes sense at the critical level; a symbolic
/// request is specialized to `k = -2`.
fn c2_suite(level: &Level) -> Result<VerificationReport, VerifierError> {
    let critical = Level::from_ratio(-2, 1);
    let level = if level.is_symbolic() { &critical } else { level };
    let mut report = c2_relation_check(C2_DICTIONARY, level)?;
    if level != &critical {
        report.note("the dictionary is stated for k = -2");
    }
    let control: &[(&str, &str)] = &[("C", "X"), ("D", "Y"), ("F", "-S")];
    let broken = match c2_relation_check(control, level) {
        Ok(r) => !r.overall,
        Err(ClassicalError::LevelDependent(_)) => true,
        Err(e) => return Err(e.into()),
    };
    report.push(Check::flag(
        "control: the dictionary with D -> Y does not reproduce the table",
        broken,
        if broken { "rejected" } else { "accepted" },
    ));
    Ok(report)
}

fn axiom_suite(level: &Level, opts: &SuiteOptions) -> Result<VerificationReport, VerifierError> {
    let names: Vec<String> = match &opts.algebra {
        Some(a) => vec![a.clone()],
        None => vec!["EL".into(), "BgEL".into()],
    };
    let mut report = VerificationReport::new("axioms", level.to_string());
    for name in names {
        let alg = FreeFieldAlgebra::by_name(&name)
            .ok_or_else(|| VerifierError::Config(format!("no free-field algebra named {name}")))?
            .at_level(level)?;
        report.absorb(&name, run_axiom_suite(&alg, opts.max_grading, opts.samples, opts.seed)?);
    }
    Ok(report)
}

/// Runs one named suite. Maps, fields and Poisson data are looked up in `defs`.
pub fn run_suite(
    name: &str,
    level: &Level,
    defs: &Definitions,
    opts: &SuiteOptions,
) -> Result<VerificationReport, VerifierError> {
    let mut report = match name {
        "r" => hom_suite(defs, "map_r", level)?,
        "ds1" => hom_suite(defs, "map_ds1", level)?,
        "nu" => hom_suite(defs, "map_nu", level)?,
        "pir" => verify_pi_r(level, &PiRCalibration::default())?,
        "conformal" => verify_conformal(level)?,
        "axioms" => axiom_suite(level, opts)?,
        "classical" => poisson_suite(defs)?,
        "c2" => c2_suite(level)?,
        "all" => {
            let mut all = VerificationReport::new("all", level.to_string());
            for s in SUITE_NAMES.iter().filter(|s| **s != "all") {
                all.absorb(s, run_suite(s, level, defs, opts)?);
            }
            all
        }
        other => {
            return Err(VerifierError::Config(format!(
                "unknown suite {other}; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    report.suite = name.to_string();
    Ok(report)
}
