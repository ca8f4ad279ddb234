//! Presented vertex algebras, homomorphism data, and the shipped definitions.

mod builtins;
mod format;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::classical::{PoissonMap, PoissonPresentation};
use crate::expr::{ExprError, FieldExpr};
use crate::vertex::{Field, FreeFieldAlgebra, VertexError};

pub use builtins::{builtin, builtin_definitions, pi_r_data, Builtin, PiRData, BUILTIN_NAMES};
pub use format::{load_definitions, load_presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown generator `{name}` in {context}")]
    UnknownGenerator { name: String, context: String },
    #[error("bracket pair ({0}, {1}) listed twice")]
    DuplicatePair(String, String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("map `{map}` gives no image for `{generator}`")]
    MissingImage { map: String, generator: String },
}

/// One row of an OPE table: `left(z) right(w) ~ Σ poles[p]/(z-w)^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub poles: BTreeMap<u32, FieldExpr>,
}

/// Generators, an OPE table with one order per pair, relation fields, and an
/// optional conformal vector. Pairs missing from the table have regular OPE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub generators: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub relations: Vec<FieldExpr>,
    pub conformal: Option<FieldExpr>,
}

impl AlgebraPresentation {
    /// The table entry for the unordered pair, and whether it is stored as `(b, a)`.
    pub fn entry(&self, a: &str, b: &str) -> Option<(&BracketEntry, bool)> {
        self.brackets.iter().find_map(|e| {
            if e.left == a && e.right == b {
                Some((e, false))
            } else if e.left == b && e.right == a {
                Some((e, true))
            } else {
                None
            }
        })
    }

    /// Unordered generator pairs `(gᵢ, gⱼ)` with `i ≤ j`, in declaration order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i..] {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    /// The OPE table in display form, one line per entry.
    pub fn render_ope_table(&self) -> String {
        let mut out = String::new();
        for e in &self.brackets {
            let terms: Vec<String> = e
                .poles
                .iter()
                .rev()
                .map(|(p, x)| {
                    let pole = if *p == 1 {
                        "(z-w)".to_string()
                    } else {
                        format!("(z-w)^{p}")
                    };
                    match x {
                        FieldExpr::Sum(v) if v.len() > 1 => format!("({x})/{pole}"),
                        _ => format!("{x}/{pole}"),
                    }
                })
                .collect();
            out.push_str(&format!("{}(z) {}(w) ~ {}\n", e.left, e.right, terms.join(" + ")));
        }
        out
    }

    pub(crate) fn validate(&self) -> Result<(), PresentationError> {
        let known = |n: &str| self.generators.iter().any(|g| g == n);
        let check_expr = |e: &FieldExpr, context: &str| -> Result<(), PresentationError> {
            for g in e.generators() {
                if !known(&g) {
                    return Err(PresentationError::UnknownGenerator {
                        name: g,
                        context: context.to_string(),
                    });
                }
            }
            Ok(())
        };
        let mut seen: Vec<(String, String)> = Vec::new();
        for e in &self.brackets {
            for g in [&e.left, &e.right] {
                if !known(g) {
                    return Err(PresentationError::UnknownGenerator {
                        name: g.clone(),
                        context: format!("bracket table of {}", self.name),
                    });
                }
            }
            let key = if e.left <= e.right {
                (e.left.clone(), e.right.clone())
            } else {
                (e.right.clone(), e.left.clone())
            };
            if seen.contains(&key) {
                return Err(PresentationError::DuplicatePair(e.left.clone(), e.right.clone()));
            }
            seen.push(key);
            for x in e.poles.values() {
                check_expr(x, &format!("bracket {} {}", e.left, e.right))?;
            }
        }
        for r in &self.relations {
            check_expr(r, "relation")?;
        }
        if let Some(c) = &self.conformal {
            check_expr(c, "conformal vector")?;
        }
        Ok(())
    }
}

/// Images of the generators of a presented algebra in a free-field target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomAssignment {
    pub name: String,
    pub source: AlgebraPresentation,
    pub target: String,
    pub images: Vec<(String, FieldExpr)>,
}

impl HomAssignment {
    pub fn image(&self, generator: &str) -> Option<&FieldExpr> {
        self.images.iter().find(|(g, _)| g == generator).map(|(_, e)| e)
    }

    pub fn image_map(&self) -> HashMap<String, FieldExpr> {
        self.images.iter().cloned().collect()
    }

    /// Pushes a source expression through the assignment.
    pub fn apply(&self, e: &FieldExpr) -> FieldExpr {
        e.substitute(&self.image_map())
    }

    pub fn target_algebra(&self) -> Result<FreeFieldAlgebra, PresentationError> {
        FreeFieldAlgebra::by_name(&self.target)
            .ok_or_else(|| PresentationError::UnknownAlgebra(self.target.clone()))
    }
}

/// A named field of a free-field algebra, such as a conformal vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedField {
    pub name: String,
    pub algebra: String,
    pub expr: FieldExpr,
}

/// Everything a definition file can declare.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Definitions {
    pub algebras: Vec<AlgebraPresentation>,
    pub maps: Vec<HomAssignment>,
    pub fields: Vec<NamedField>,
    pub poisson: Vec<PoissonPresentation>,
    pub poisson_maps: Vec<PoissonMap>,
}

impl Definitions {
    pub fn algebra(&self, name: &str) -> Option<&AlgebraPresentation> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn map(&self, name: &str) -> Option<&HomAssignment> {
        self.maps.iter().find(|m| m.name == name)
    }

    pub fn field(&self, name: &str) -> Option<&NamedField> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn poisson(&self, name: &str) -> Option<&PoissonPresentation> {
        self.poisson.iter().find(|p| p.name == name)
    }

    pub fn poisson_map(&self, name: &str) -> Option<&PoissonMap> {
        self.poisson_maps.iter().find(|m| m.name == name)
    }

    /// `self` with every entry of `top` added, replacing same-named entries.
    pub fn overlay(&self, top: &Definitions) -> Definitions {
        fn merge<T: Clone>(base: &[T], top: &[T], name: impl Fn(&T) -> &str) -> Vec<T> {
            let mut out: Vec<T> = base
                .iter()
                .filter(|b| !top.iter().any(|t| name(t) == name(b)))
                .cloned()
                .collect();
            out.extend(top.iter().cloned());
            out
        }
        Definitions {
            algebras: merge(&self.algebras, &top.algebras, |a| &a.name),
            maps: merge(&self.maps, &top.maps, |m| &m.name),
            fields: merge(&self.fields, &top.fields, |f| &f.name),
            poisson: merge(&self.poisson, &top.poisson, |p| &p.name),
            poisson_maps: merge(&self.poisson_maps, &top.poisson_maps, |m| &m.name),
        }
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {}", self.name)?;
        writeln!(f, "generators: {}", self.generators.join(" "))?;
        for e in &self.brackets {
            let poles: Vec<String> = e.poles.iter().rev().map(|(p, x)| format!("{p}={x}")).collect();
            writeln!(f, "bracket {} {} : {}", e.left, e.right, poles.join(" ; "))?;
        }
        for r in &self.relations {
            writeln!(f, "relation: {r}")?;
        }
        if let Some(c) = &self.conformal {
            writeln!(f, "conformal: {c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for HomAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "map {} from {} to {}", self.name, self.source.name, self.target)?;
        for (g, e) in &self.images {
            writeln!(f, "image {g} : {e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for NamedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {} in {} : {}", self.name, self.algebra, self.expr)
    }
}

impl fmt::Display for Definitions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut blocks: Vec<String> = Vec::new();
        blocks.extend(self.algebras.iter().map(|a| a.to_string()));
        blocks.extend(self.maps.iter().map(|m| m.to_string()));
        blocks.extend(self.fields.iter().map(|x| x.to_string()));
        blocks.extend(self.poisson.iter().map(|p| p.to_string()));
        blocks.extend(self.poisson_maps.iter().map(|m| m.to_string()));
        write!(f, "{}", blocks.join("\n"))
    }
}

/// Evaluates an expression to a canonical field of `target`.
pub fn eval_expr(e: &FieldExpr, target: &FreeFieldAlgebra) -> Result<Field, ExprError> {
    e.eval(target)
}

/// Tensor product of free-field algebras; cross-factor brackets vanish.
pub fn tensor(name: &str, algebras: &[&FreeFieldAlgebra]) -> Result<FreeFieldAlgebra, VertexError> {
    FreeFieldAlgebra::tensor(name, algebras)
}
