//! The line-oriented definition file format.
//!
//! ```text
//! algebra EL
//! generators: eta lamp lamm
//! bracket eta eta : 2=2*(k+2)
//! bracket eta lamp : 1=lamp
//! bracket eta lamm : 1=-lamm
//! relation: :(lamp lamm): - 1
//!
//! map nu from Itilde to EL
//! image C : lamp
//!
//! field omega in EL : :(eta d(lamp) lamm): + d(eta)
//!
//! poisson ZG
//! generators: X Y S
//! laurent: X
//! pbracket S X : Y
//! relation: S*X^2 - Y^2 + 1
//!
//! pmap chart from ZG to KT
//! image X : g^-1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;

use crate::classical::{parse_element, PoissonMap, PoissonPresentation};
use crate::expr::{parse_expr, FieldExpr};
use crate::vertex::FreeFieldAlgebra;

use super::{
    builtin_definitions, AlgebraPresentation, BracketEntry, Definitions, HomAssignment,
    NamedField, PresentationError,
};

/// Loads a file that declares exactly one algebra.
pub fn load_presentation(text: &str) -> Result<AlgebraPresentation, PresentationError> {
    let defs = load_definitions(text)?;
    match defs.algebras.len() {
        1 => Ok(defs.algebras.into_iter().next().expect("one algebra")),
        n => Err(PresentationError::Parse {
            line: 1,
            reason: format!("expected exactly one algebra block, found {n}"),
        }),
    }
}

/// Loads a definition file. Map sources not declared in the file are looked
/// up among the built-in definitions.
pub fn load_definitions(text: &str) -> Result<Definitions, PresentationError> {
    parse(text, true)
}

pub(super) fn parse(text: &str, with_builtins: bool) -> Result<Definitions, PresentationError> {
    let mut defs = Definitions::default();
    let mut block = Block::None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| PresentationError::Parse {
            line: line_no,
            reason,
        };
        let (head, rest) = split_head(line);
        match head {
            "algebra" | "map" | "poisson" | "pmap" | "field" => {
                block.finish(&mut defs, with_builtins)?;
                block = Block::None;
            }
            _ => {}
        }
        match head {
            "algebra" => {
                let name = single_name(rest).ok_or_else(|| err("expected `algebra <name>`".into()))?;
                block = Block::Algebra(AlgebraPresentation {
                    name,
                    generators: Vec::new(),
                    brackets: Vec::new(),
                    relations: Vec::new(),
                    conformal: None,
                });
            }
            "poisson" => {
                let name = single_name(rest).ok_or_else(|| err("expected `poisson <name>`".into()))?;
                block = Block::Poisson(PoissonPresentation::empty(&name), line_no);
            }
            "map" | "pmap" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let [name, "from", source, "to", target] = words[..] else {
                    return Err(err(format!("expected `{head} <name> from <source> to <target>`")));
                };
                block = Block::Map {
                    poisson: head == "pmap",
                    name: name.to_string(),
                    source: source.to_string(),
                    target: target.to_string(),
                    images: Vec::new(),
                    line: line_no,
                };
            }
            "field" => {
                let (decl, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `field <name> in <algebra> : <expr>`".into()))?;
                let words: Vec<&str> = decl.split_whitespace().collect();
                let [name, "in", algebra] = words[..] else {
                    return Err(err("expected `field <name> in <algebra> : <expr>`".into()));
                };
                let expr = parse_expr(body).map_err(|e| err(e.to_string()))?;
                let target = FreeFieldAlgebra::by_name(algebra)
                    .ok_or_else(|| PresentationError::UnknownAlgebra(algebra.to_string()))?;
                check_target(&expr, &target, &format!("field {name}"))?;
                defs.fields.push(NamedField {
                    name: name.to_string(),
                    algebra: algebra.to_string(),
                    expr,
                });
            }
            "generators:" => match &mut block {
                Block::Algebra(p) => p.generators = names(rest),
                Block::Poisson(p, _) => p.generators = names(rest),
                _ => return Err(err("`generators:` outside an algebra block".into())),
            },
            "laurent:" => match &mut block {
                Block::Poisson(p, _) => p.laurent = names(rest),
                _ => return Err(err("`laurent:` outside a poisson block".into())),
            },
            "bracket" => {
                let Block::Algebra(p) = &mut block else {
                    return Err(err("`bracket` outside an algebra block".into()));
                };
                let (pair, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `bracket g1 g2 : p=expr ; ...`".into()))?;
                let [left, right] = pair.split_whitespace().collect::<Vec<_>>()[..] else {
                    return Err(err("expected two generator names".into()));
                };
                let mut poles = BTreeMap::new();
                for item in body.split(';') {
                    let (pole, expr) = item
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected `<pole>=<expr>`, found `{}`", item.trim())))?;
                    let pole: u32 = pole
                        .trim()
                        .parse()
                        .ok()
                        .filter(|p| *p >= 1)
                        .ok_or_else(|| err(format!("bad pole order `{}`", pole.trim())))?;
                    let expr = parse_expr(expr).map_err(|e| err(e.to_string()))?;
                    if poles.insert(pole, expr).is_some() {
                        return Err(err(format!("pole {pole} given twice")));
                    }
                }
                p.brackets.push(BracketEntry {
                    left: left.to_string(),
                    right: right.to_string(),
                    poles,
                });
            }
            "pbracket" => {
                let Block::Poisson(p, _) = &mut block else {
                    return Err(err("`pbracket` outside a poisson block".into()));
                };
                let (pair, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `pbracket g1 g2 : <element>`".into()))?;
                let [left, right] = pair.split_whitespace().collect::<Vec<_>>()[..] else {
                    return Err(err("expected two generator names".into()));
                };
                let value = parse_element(body).map_err(|e| err(e.to_string()))?;
                p.brackets.push((left.to_string(), right.to_string(), value));
            }
            "relation:" => match &mut block {
                Block::Algebra(p) => p
                    .relations
                    .push(parse_expr(rest).map_err(|e| err(e.to_string()))?),
                Block::Poisson(p, _) => p
                    .ideal
                    .push(parse_element(rest).map_err(|e| err(e.to_string()))?),
                _ => return Err(err("`relation:` outside an algebra block".into())),
            },
            "conformal:" => {
                let Block::Algebra(p) = &mut block else {
                    return Err(err("`conformal:` outside an algebra block".into()));
                };
                p.conformal = Some(parse_expr(rest).map_err(|e| err(e.to_string()))?);
            }
            "image" => {
                let Block::Map { images, .. } = &mut block else {
                    return Err(err("`image` outside a map block".into()));
                };
                let (g, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `image g : <expr>`".into()))?;
                let g = single_name(g).ok_or_else(|| err("expected one generator name".into()))?;
                images.push((g, body.trim().to_string(), line_no));
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    block.finish(&mut defs, with_builtins)?;
    Ok(defs)
}

enum Block {
    None,
    Algebra(AlgebraPresentation),
    Poisson(PoissonPresentation, usize),
    Map {
        poisson: bool,
        name: String,
        source: String,
        target: String,
        images: Vec<(String, String, usize)>,
        line: usize,
    },
}

impl Block {
    fn finish(&mut self, defs: &mut Definitions, with_builtins: bool) -> Result<(), PresentationError> {
        match std::mem::replace(self, Block::None) {
            Block::None => Ok(()),
            Block::Algebra(p) => {
                p.validate()?;
                defs.algebras.push(p);
                Ok(())
            }
            Block::Poisson(p, line) => {
                p.validate().map_err(|e| PresentationError::Parse {
                    line,
                    reason: e.to_string(),
                })?;
                defs.poisson.push(p);
                Ok(())
            }
            Block::Map {
                poisson: false,
                name,
                source,
                target,
                images,
                ..
            } => {
                let source = lookup(defs, with_builtins, |d| d.algebra(&source).cloned())
                    .ok_or(PresentationError::UnknownAlgebra(source))?;
                let algebra = FreeFieldAlgebra::by_name(&target)
                    .ok_or_else(|| PresentationError::UnknownAlgebra(target.clone()))?;
                let mut parsed = Vec::new();
                for (g, body, line) in images {
                    if !source.generators.contains(&g) {
                        return Err(PresentationError::UnknownGenerator {
                            name: g,
                            context: format!("map {name}"),
                        });
                    }
                    let e = parse_expr(&body).map_err(|e| PresentationError::Parse {
                        line,
                        reason: e.to_string(),
                    })?;
                    check_target(&e, &algebra, &format!("image of {g} under {name}"))?;
                    parsed.push((g, e));
                }
                let images = order_images(&name, &source.generators, parsed)?;
                defs.maps.push(HomAssignment {
                    name,
                    source,
                    target,
                    images,
                });
                Ok(())
            }
            Block::Map {
                poisson: true,
                name,
                source,
                target,
                images,
                line,
            } => {
                let source_p = lookup(defs, with_builtins, |d| d.poisson(&source).cloned())
                    .ok_or(PresentationError::UnknownAlgebra(source))?;
                let target_p = lookup(defs, with_builtins, |d| d.poisson(&target).cloned())
                    .ok_or(PresentationError::UnknownAlgebra(target))?;
                let mut parsed = Vec::new();
                for (g, body, line) in images {
                    if !source_p.generators.contains(&g) {
                        return Err(PresentationError::UnknownGenerator {
                            name: g,
                            context: format!("map {name}"),
                        });
                    }
                    let e = parse_element(&body).map_err(|e| PresentationError::Parse {
                        line,
                        reason: e.to_string(),
                    })?;
                    parsed.push((g, e));
                }
                let images = order_images(&name, &source_p.generators, parsed)?;
                let m = PoissonMap {
                    name,
                    source: source_p,
                    target: target_p,
                    images,
                };
                m.validate()
                    .map_err(|e| PresentationError::Parse { line, reason: e.to_string() })?;
                defs.poisson_maps.push(m);
                Ok(())
            }
        }
    }
}

fn lookup<T>(defs: &Definitions, with_builtins: bool, get: impl Fn(&Definitions) -> Option<T>) -> Option<T> {
    get(defs).or_else(|| with_builtins.then(|| get(builtin_definitions())).flatten())
}

fn order_images<T>(
    map: &str,
    generators: &[String],
    mut parsed: Vec<(String, T)>,
) -> Result<Vec<(String, T)>, PresentationError> {
    let mut out = Vec::new();
    for g in generators {
        let pos = parsed
            .iter()
            .position(|(h, _)| h == g)
            .ok_or_else(|| PresentationError::MissingImage {
                map: map.to_string(),
                generator: g.clone(),
            })?;
        out.push(parsed.swap_remove(pos));
    }
    if let Some((g, _)) = parsed.into_iter().next() {
        return Err(PresentationError::Parse {
            line: 0,
            reason: format!("map {map} gives two images for `{g}`"),
        });
    }
    Ok(out)
}

fn check_target(e: &FieldExpr, target: &FreeFieldAlgebra, context: &str) -> Result<(), PresentationError> {
    for g in e.generators() {
        if !target.generators().iter().any(|s| s.name == g) {
            return Err(PresentationError::UnknownGenerator {
                name: g,
                context: context.to_string(),
            });
        }
    }
    Ok(())
}

fn split_head(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim()),
        None => (line, ""),
    }
}

fn single_name(s: &str) -> Option<String> {
    let mut it = s.split_whitespace();
    let name = it.next()?;
    it.next().is_none().then(|| name.to_string())
}

fn names(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}
