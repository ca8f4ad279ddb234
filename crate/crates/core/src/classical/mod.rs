//! Poisson algebras: presentations by generators, brackets and an ideal, maps
//! between them, and the C₂ reduction of presented vertex algebras.

mod element;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::expr::FieldExpr;
use crate::presentation::{builtin_definitions, AlgebraPresentation};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Level, ScalarError};

pub use element::{parse_element, PMono, PoissonElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("parse error at offset {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("`{0}` is not a single term and cannot be inverted")]
    NotInvertible(String),
    #[error("generator `{0}` is not declared invertible")]
    NotLaurent(String),
    #[error("coefficient `{0}` still depends on k after dropping derivatives")]
    LevelDependent(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Generators (some invertible), brackets with one order per pair, and the
/// generators of an ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonPresentation {
    pub name: String,
    pub generators: Vec<String>,
    pub laurent: Vec<String>,
    pub brackets: Vec<(String, String, PoissonElement)>,
    pub ideal: Vec<PoissonElement>,
}

impl PoissonPresentation {
    pub fn empty(name: &str) -> Self {
        PoissonPresentation {
            name: name.to_string(),
            generators: Vec::new(),
            laurent: Vec::new(),
            brackets: Vec::new(),
            ideal: Vec::new(),
        }
    }

    /// Checks that an element lives in this presentation's Laurent ring.
    pub fn check_element(&self, e: &PoissonElement) -> Result<(), ClassicalError> {
        for v in e.variables() {
            if !self.generators.contains(&v) {
                return Err(ClassicalError::UnknownGenerator(v));
            }
        }
        for v in e.inverted_variables() {
            if !self.laurent.contains(&v) {
                return Err(ClassicalError::NotLaurent(v));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        for l in &self.laurent {
            if !self.generators.contains(l) {
                return Err(ClassicalError::UnknownGenerator(l.clone()));
            }
        }
        for (a, b, v) in &self.brackets {
            for g in [a, b] {
                if !self.generators.contains(g) {
                    return Err(ClassicalError::UnknownGenerator(g.clone()));
                }
            }
            self.check_element(v)?;
        }
        for r in &self.ideal {
            self.check_element(r)?;
        }
        Ok(())
    }

    /// `{a, b}` on generators, using antisymmetry for the unstored order.
    pub fn generator_bracket(&self, a: &str, b: &str) -> PoissonElement {
        for (x, y, v) in &self.brackets {
            if x == a && y == b {
                return v.clone();
            }
            if x == b && y == a {
                return v.neg();
            }
        }
        PoissonElement::zero()
    }

    /// `{f, g} = Σ ∂f/∂xᵢ ∂g/∂xⱼ {xᵢ, xⱼ}`.
    pub fn pbracket(&self, f: &PoissonElement, g: &PoissonElement) -> Result<PoissonElement, ClassicalError> {
        self.check_element(f)?;
        self.check_element(g)?;
        let fv = f.variables();
        let gv = g.variables();
        let mut out = PoissonElement::zero();
        for x in &fv {
            let dfx = f.partial(x);
            for y in &gv {
                let b = self.generator_bracket(x, y);
                if b.is_zero() {
                    continue;
                }
                out = out.add(&dfx.mul(&g.partial(y)).mul(&b));
            }
        }
        Ok(out)
    }

    /// Remainder of `f` modulo the ideal.
    pub fn reduce(&self, f: &PoissonElement) -> PoissonElement {
        f.reduce_mod(&self.ideal)
    }
}

impl fmt::Display for PoissonPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "poisson {}", self.name)?;
        writeln!(f, "generators: {}", self.generators.join(" "))?;
        if !self.laurent.is_empty() {
            writeln!(f, "laurent: {}", self.laurent.join(" "))?;
        }
        for (a, b, v) in &self.brackets {
            writeln!(f, "pbracket {a} {b} : {v}")?;
        }
        for r in &self.ideal {
            writeln!(f, "relation: {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonMap {
    pub name: String,
    pub source: PoissonPresentation,
    pub target: PoissonPresentation,
    pub images: Vec<(String, PoissonElement)>,
}

impl PoissonMap {
    pub fn validate(&self) -> Result<(), ClassicalError> {
        for (g, e) in &self.images {
            if !self.source.generators.contains(g) {
                return Err(ClassicalError::UnknownGenerator(g.clone()));
            }
            self.target.check_element(e)?;
        }
        Ok(())
    }

    pub fn apply(&self, f: &PoissonElement) -> Result<PoissonElement, ClassicalError> {
        f.substitute(&|v| self.images.iter().find(|(g, _)| g == v).map(|(_, e)| e.clone()))
    }
}

impl fmt::Display for PoissonMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pmap {} from {} to {}", self.name, self.source.name, self.target.name)?;
        for (g, e) in &self.images {
            writeln!(f, "image {g} : {e}")?;
        }
        Ok(())
    }
}

fn element_check(label: String, expected: &PoissonElement, actual: &PoissonElement, residual: &PoissonElement) -> Check {
    Check::new(label, expected.to_string(), actual.to_string(), residual.to_string())
}

/// Jacobi on every generator triple and the Casimir property of each ideal
/// generator modulo the ideal.
pub fn check_poisson_axioms(p: &PoissonPresentation) -> Result<VerificationReport, ClassicalError> {
    let mut report = VerificationReport::new(format!("poisson axioms {}", p.name), "classical");
    let gens = &p.generators;
    let var = |g: &str| PoissonElement::var(g);
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for l in j + 1..gens.len() {
                let (x, y, z) = (var(&gens[i]), var(&gens[j]), var(&gens[l]));
                let t1 = p.pbracket(&x, &p.pbracket(&y, &z)?)?;
                let t2 = p.pbracket(&y, &p.pbracket(&z, &x)?)?;
                let t3 = p.pbracket(&z, &p.pbracket(&x, &y)?)?;
                let sum = t1.add(&t2).add(&t3);
                report.push(element_check(
                    format!("jacobi ({}, {}, {})", gens[i], gens[j], gens[l]),
                    &PoissonElement::zero(),
                    &sum,
                    &sum,
                ));
            }
        }
    }
    for r in &p.ideal {
        for g in gens {
            let b = p.pbracket(r, &var(g))?;
            let rem = p.reduce(&b);
            report.push(element_check(
                format!("casimir {{{r}, {g}}}"),
                &PoissonElement::zero(),
                &b,
                &rem,
            ));
        }
    }
    Ok(report)
}

/// Bracket compatibility on generator pairs and ideal-to-ideal.
pub fn verify_poisson_map(m: &PoissonMap) -> Result<VerificationReport, ClassicalError> {
    let mut report = VerificationReport::new(format!("poisson map {}", m.name), "classical");
    let gens = &m.source.generators;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (x, y) = (&gens[i], &gens[j]);
            let mx = m.apply(&PoissonElement::var(x))?;
            let my = m.apply(&PoissonElement::var(y))?;
            let lhs = m.target.pbracket(&mx, &my)?;
            let rhs = m.apply(&m.source.generator_bracket(x, y))?;
            let residual = m.target.reduce(&lhs.sub(&rhs));
            report.push(element_check(format!("bracket ({x}, {y})"), &rhs, &lhs, &residual));
        }
    }
    for r in &m.source.ideal {
        let image = m.apply(r)?;
        let residual = m.target.reduce(&image);
        report.push(element_check(
            format!("ideal {r}"),
            &PoissonElement::zero(),
            &image,
            &residual,
        ));
    }
    Ok(report)
}

/// Reads a field expression in the C₂ quotient: derivatives vanish and normal
/// products become commutative products. Scalars are evaluated at `level` and
/// must be rational.
pub fn to_classical(e: &FieldExpr, level: &Level) -> Result<PoissonElement, ClassicalError> {
    Ok(match e {
        FieldExpr::Gen(n) => PoissonElement::var(n),
        FieldExpr::Unit => PoissonElement::one(),
        FieldExpr::Derive(inner, 0) => to_classical(inner, level)?,
        FieldExpr::Derive(..) => PoissonElement::zero(),
        FieldExpr::NProd(a, b) => to_classical(a, level)?.mul(&to_classical(b, level)?),
        FieldExpr::Scale(c, inner) => {
            let x = to_classical(inner, level)?;
            if x.is_zero() {
                return Ok(x);
            }
            let c = c.eval_at_level(level)?;
            let q: BigRational = c
                .to_rational()
                .ok_or_else(|| ClassicalError::LevelDependent(c.to_string()))?;
            x.scale(&q)
        }
        FieldExpr::Sum(v) => {
            let mut acc = PoissonElement::zero();
            for t in v {
                acc = acc.add(&to_classical(t, level)?);
            }
            acc
        }
    })
}

/// The C₂ Poisson algebra of a presentation: `{x, y}` is the simple-pole
/// coefficient of the table entry, read classically.
pub fn c2_reduce(p: &AlgebraPresentation, level: &Level) -> Result<PoissonPresentation, ClassicalError> {
    let mut out = PoissonPresentation::empty(&format!("C2({})", p.name));
    out.generators = p.generators.clone();
    for e in &p.brackets {
        let Some(simple) = e.poles.get(&1) else {
            continue;
        };
        let v = to_classical(simple, level)?;
        if !v.is_zero() {
            out.brackets.push((e.left.clone(), e.right.clone(), v));
        }
    }
    for r in &p.relations {
        let v = to_classical(r, level)?;
        if !v.is_zero() {
            out.ideal.push(v);
        }
    }
    Ok(out)
}

/// Generator images `C ↦ X`, `D ↦ -Y`, `F ↦ -S` at the critical level.
pub const C2_DICTIONARY: &[(&str, &str)] = &[("C", "X"), ("D", "-Y"), ("F", "-S")];

/// Free-field dictionary `λ± ↦ γ^{∓1/2}`, `η ↦ -2b`, with `g = γ^{1/2}`.
pub const FREE_FIELD_DICTIONARY: &[(&str, &str)] = &[("eta", "-2*b"), ("lamp", "g^-1"), ("lamm", "g")];

fn builtin_poisson(name: &str) -> PoissonPresentation {
    builtin_definitions()
        .poisson(name)
        .cloned()
        .expect("built-in Poisson presentation")
}

/// The dictionary as a Poisson map from the C₂ algebra of `Itilde` to `O(Z_G)`.
pub fn c2_dictionary_map(dictionary: &[(&str, &str)], level: &Level) -> Result<PoissonMap, ClassicalError> {
    let source = c2_reduce(
        builtin_definitions().algebra("Itilde").expect("built-in Itilde"),
        level,
    )?;
    let images = dictionary
        .iter()
        .map(|(g, e)| Ok((g.to_string(), parse_element(e)?)))
        .collect::<Result<Vec<_>, ClassicalError>>()?;
    let m = PoissonMap {
        name: "dictionary".into(),
        source,
        target: builtin_poisson("ZG"),
        images,
    };
    m.validate()?;
    Ok(m)
}

/// Compares the C₂ reduction of `Itilde` with `O(Z_G)` through a dictionary:
/// the bracket table exactly, and the relation against `±(SX²-Y²+1)`.
pub fn c2_relation_check(dictionary: &[(&str, &str)], level: &Level) -> Result<VerificationReport, ClassicalError> {
    let m = c2_dictionary_map(dictionary, level)?;
    let mut report = VerificationReport::new("c2", level.to_string());
    let gens = &m.source.generators;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (x, y) = (&gens[i], &gens[j]);
            let lhs = m.target.pbracket(
                &m.apply(&PoissonElement::var(x))?,
                &m.apply(&PoissonElement::var(y))?,
            )?;
            let rhs = m.apply(&m.source.generator_bracket(x, y))?;
            let residual = lhs.sub(&rhs);
            report.push(element_check(format!("table ({x}, {y})"), &lhs, &rhs, &residual));
        }
    }
    let casimir = m.target.ideal.first().cloned().unwrap_or_default();
    for r in &m.source.ideal {
        let image = m.apply(r)?;
        let plus = image.sub(&casimir);
        let minus = image.add(&casimir);
        let (sign, residual) = if minus.is_zero() {
            ("-", minus)
        } else if plus.is_zero() {
            ("+", plus)
        } else if minus.terms().count() <= plus.terms().count() {
            ("-", minus)
        } else {
            ("+", plus)
        };
        report.push(element_check(
            format!("relation {r} vs {sign}({casimir})"),
            &if sign == "-" { casimir.neg() } else { casimir.clone() },
            &image,
            &residual,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zg() -> PoissonPresentation {
        builtin_poisson("ZG")
    }

    #[test]
    fn zg_table() {
        let p = zg();
        let v = |s: &str| PoissonElement::var(s);
        assert_eq!(p.pbracket(&v("S"), &v("X")).unwrap(), v("Y"));
        assert!(p.pbracket(&v("X"), &v("X")).unwrap().is_zero());
        let cas = parse_element("S*X^2 - Y^2 + 1").unwrap();
        assert!(p.pbracket(&cas, &v("X")).unwrap().is_zero());
    }

    #[test]
    fn corrupted_table_fails_jacobi() {
        let mut p = zg();
        p.brackets[0].2 = PoissonElement::var("X");
        let r = check_poisson_axioms(&p).unwrap();
        assert!(!r.overall);
    }
}
