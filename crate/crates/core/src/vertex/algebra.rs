use std::collections::HashMap;
use std::fmt;

use parking_lot::RwLock;

use crate::scalar::{Level, Scalar, ScalarError};

use super::field::{Field, LambdaPoly};
use super::monomial::{MonoId, Monomial, Part};
use super::VertexError;

/// One tensor factor of a free-field algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorSpec {
    /// `[β_λ γ] = 1`.
    BetaGamma { beta: String, gamma: String },
    /// `[η_λ η] = eta_norm·λ`, `[η_λ λ±] = ±λ±`, `:λ₊λ₋: = 1`.
    El {
        eta: String,
        lamp: String,
        lamm: String,
        eta_norm: Scalar,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Current,
    FunctionUnit,
    BosonB,
    BosonG,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub kind: GeneratorKind,
    pub slot: usize,
}

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) nprod: RwLock<HashMap<(MonoId, MonoId), Field>>,
    pub(crate) bracket: RwLock<HashMap<(MonoId, MonoId), LambdaPoly>>,
}

/// A tensor product of βγ systems and EL factors, together with memo tables
/// for the normally ordered product and the λ-bracket on basis monomials.
pub struct FreeFieldAlgebra {
    name: String,
    level: Level,
    factors: Vec<FactorSpec>,
    generators: Vec<GeneratorSpec>,
    vacuum: Monomial,
    pub(crate) caches: Caches,
}

impl Clone for FreeFieldAlgebra {
    fn clone(&self) -> Self {
        FreeFieldAlgebra::build(&self.name, self.level.clone(), self.factors.clone())
            .expect("already validated")
    }
}

impl fmt::Debug for FreeFieldAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeFieldAlgebra")
            .field("name", &self.name)
            .field("level", &self.level)
            .field("factors", &self.factors)
            .finish()
    }
}

impl FreeFieldAlgebra {
    pub fn new(name: &str, factors: Vec<FactorSpec>) -> Result<Self, VertexError> {
        Self::build(name, Level::Symbolic, factors)
    }

    fn build(name: &str, level: Level, factors: Vec<FactorSpec>) -> Result<Self, VertexError> {
        let mut generators: Vec<GeneratorSpec> = Vec::new();
        let mut parts = Vec::new();
        for (slot, f) in factors.iter().enumerate() {
            let named: Vec<(&str, GeneratorKind)> = match f {
                FactorSpec::BetaGamma { beta, gamma } => {
                    parts.push(Part::BetaGamma {
                        beta: Vec::new(),
                        gamma: Vec::new(),
                    });
                    vec![(beta, GeneratorKind::BosonB), (gamma, GeneratorKind::BosonG)]
                }
                FactorSpec::El {
                    eta, lamp, lamm, ..
                } => {
                    parts.push(Part::El {
                        eta: Vec::new(),
                        jets: Vec::new(),
                        charge: 0,
                    });
                    vec![
                        (eta, GeneratorKind::Current),
                        (lamp, GeneratorKind::FunctionUnit),
                        (lamm, GeneratorKind::FunctionUnit),
                    ]
                }
            };
            for (n, kind) in named {
                if generators.iter().any(|g| g.name == n) || n == "k" || n == "d" {
                    return Err(VertexError::SlotClash(n.to_string()));
                }
                generators.push(GeneratorSpec {
                    name: n.to_string(),
                    kind,
                    slot,
                });
            }
        }
        Ok(FreeFieldAlgebra {
            name: name.to_string(),
            level,
            factors,
            generators,
            vacuum: Monomial::from_parts(parts),
            caches: Caches::default(),
        })
    }

    /// `η, λ₊, λ₋` with `[η_λ η] = 2(k+2)λ`.
    pub fn el() -> Self {
        Self::new("EL", vec![el_factor()]).expect("fixed names")
    }

    /// A single βγ system with generators `bx, gx`.
    pub fn beta_gamma() -> Self {
        Self::new("BetaGamma", vec![bg_factor("bx", "gx")]).expect("fixed names")
    }

    /// `βγ_x ⊗ EL`, the target of the one-sided reduction.
    pub fn bg_el() -> Self {
        Self::new("BgEL", vec![bg_factor("bx", "gx"), el_factor()]).expect("fixed names")
    }

    /// `βγ_x ⊗ EL ⊗ βγ_y`, chiral differential operators on the big cell.
    pub fn dch_u() -> Self {
        Self::new(
            "DchU",
            vec![bg_factor("bx", "gx"), el_factor(), bg_factor("by", "gy")],
        )
        .expect("fixed names")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "EL" => Some(Self::el()),
            "BetaGamma" => Some(Self::beta_gamma()),
            "BgEL" => Some(Self::bg_el()),
            "DchU" => Some(Self::dch_u()),
            _ => None,
        }
    }

    /// Tensor product; generator names must stay distinct.
    pub fn tensor(name: &str, algebras: &[&FreeFieldAlgebra]) -> Result<Self, VertexError> {
        let mut level = Level::Symbolic;
        let mut factors = Vec::new();
        for a in algebras {
            if !a.level.is_symbolic() {
                level = a.level.clone();
            }
            factors.extend(a.factors.iter().cloned());
        }
        Self::build(name, level, factors)
    }

    /// Copy with every structure constant specialized at `level`.
    pub fn at_level(&self, level: &Level) -> Result<Self, ScalarError> {
        let factors = self
            .factors
            .iter()
            .map(|f| match f {
                FactorSpec::El {
                    eta,
                    lamp,
                    lamm,
                    eta_norm,
                } => Ok(FactorSpec::El {
                    eta: eta.clone(),
                    lamp: lamp.clone(),
                    lamm: lamm.clone(),
                    eta_norm: eta_norm.eval_at_level(level)?,
                }),
                other => Ok(other.clone()),
            })
            .collect::<Result<Vec<_>, ScalarError>>()?;
        Ok(Self::build(&self.name, level.clone(), factors).expect("already validated"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn vacuum_monomial(&self) -> &Monomial {
        &self.vacuum
    }

    pub fn vacuum(&self) -> Field {
        Field::monomial(self.vacuum.clone())
    }

    /// The field of a generator.
    pub fn generator(&self, name: &str) -> Result<Field, VertexError> {
        let spec = self
            .generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| VertexError::UnknownGenerator(name.to_string()))?;
        let mut m = self.vacuum.clone();
        let is_lamm = matches!(&self.factors[spec.slot], FactorSpec::El { lamm, .. } if lamm == name);
        match &mut m.parts_mut()[spec.slot] {
            Part::BetaGamma { beta, gamma } => match spec.kind {
                GeneratorKind::BosonB => beta.push(0),
                _ => gamma.push(0),
            },
            Part::El { eta, charge, .. } => match spec.kind {
                GeneratorKind::Current => eta.push(0),
                _ => *charge = if is_lamm { -1 } else { 1 },
            },
        }
        Ok(Field::monomial(m))
    }

    pub(crate) fn eta_norm(&self, slot: usize) -> Option<&Scalar> {
        match &self.factors[slot] {
            FactorSpec::El { eta_norm, .. } => Some(eta_norm),
            FactorSpec::BetaGamma { .. } => None,
        }
    }

    pub fn check(&self, a: &Field) -> Result<(), VertexError> {
        for (id, _) in a.terms() {
            if !id.get().same_layout(&self.vacuum) {
                return Err(VertexError::MixedAlgebra(self.name.clone()));
            }
        }
        Ok(())
    }

    /// Renders a monomial as a right-nested normal product in the global order.
    pub fn render_monomial(&self, m: &Monomial) -> String {
        fn deriv(name: &str, order: u32) -> String {
            match order {
                0 => name.to_string(),
                1 => format!("d({name})"),
                n => format!("d^{n}({name})"),
            }
        }
        let mut factors: Vec<String> = Vec::new();
        for (part, spec) in m.parts().iter().zip(&self.factors) {
            match (part, spec) {
                (Part::BetaGamma { beta, gamma }, FactorSpec::BetaGamma { beta: b, gamma: g }) => {
                    factors.extend(beta.iter().map(|&o| deriv(b, o)));
                    factors.extend(gamma.iter().map(|&o| deriv(g, o)));
                }
                (
                    Part::El { eta, jets, charge },
                    FactorSpec::El {
                        eta: e, lamp, lamm, ..
                    },
                ) => {
                    factors.extend(eta.iter().map(|&o| deriv(e, o)));
                    factors.extend(jets.iter().map(|&o| deriv(lamp, o)));
                    let unit = if *charge > 0 { lamp } else { lamm };
                    factors.extend((0..charge.unsigned_abs()).map(|_| unit.clone()));
                }
                _ => return "<mixed>".to_string(),
            }
        }
        match factors.len() {
            0 => "1".to_string(),
            1 => factors.pop().expect("one factor"),
            _ => format!(":({}):", factors.join(" ")),
        }
    }

    /// Renders a field in expression syntax; the output reparses to the same field.
    pub fn render_field(&self, f: &Field) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.sorted_terms().into_iter().enumerate() {
            let negative = c.leading_sign() < 0;
            let c = if negative { -c } else { c };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.render_monomial(&m);
            if m.is_vacuum() {
                out.push_str(&c.to_string());
            } else if c.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{c}*{mono}"));
            }
        }
        out
    }

    /// Singular part of the OPE, `Σ a₍ₙ₎b/(z-w)^(n+1)`, highest pole first.
    pub fn render_ope(&self, p: &LambdaPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<String> = Vec::new();
        let mut orders: Vec<u32> = p.coeffs().map(|(n, _)| n).collect();
        orders.reverse();
        for n in orders {
            let f = p.nth_product(n);
            let num = if f.len() == 1 {
                let (id, c) = f.terms().next().expect("one term");
                let m = id.get();
                let cs = c.to_string();
                let cs = if cs.starts_with('-') { format!("({cs})") } else { cs };
                if m.is_vacuum() {
                    cs
                } else if c.is_one() {
                    self.render_monomial(&m)
                } else {
                    format!("{cs}*{}", self.render_monomial(&m))
                }
            } else {
                format!("({})", self.render_field(&f))
            };
            let pole = if n == 0 {
                "(z-w)".to_string()
            } else {
                format!("(z-w)^{}", n + 1)
            };
            terms.push(format!("{num}/{pole}"));
        }
        terms.join(" + ")
    }
}

fn el_factor() -> FactorSpec {
    FactorSpec::El {
        eta: "eta".into(),
        lamp: "lamp".into(),
        lamm: "lamm".into(),
        eta_norm: Scalar::from_int(2) * (Scalar::k() + Scalar::from_int(2)),
    }
}

fn bg_factor(beta: &str, gamma: &str) -> FactorSpec {
    FactorSpec::BetaGamma {
        beta: beta.into(),
        gamma: gamma.into(),
    }
}
