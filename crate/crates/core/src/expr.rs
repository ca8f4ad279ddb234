//! Field expressions: the textual language for generators, derivatives, normal
//! products and scalar multiples.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | atom ['^' int]
//! atom   := int | 'k' | name | 'd' ['^' int] '(' expr ')' | ':(' atom+ '):' | '(' expr ')'
//! ```
//!
//! `:(a b c):` is sugar for `:(a :(b c):):`. A bare scalar term means a multiple
//! of the vacuum.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use crate::vertex::{Field, FreeFieldAlgebra, VertexError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldExpr {
    Gen(String),
    Derive(Box<FieldExpr>, u32),
    NProd(Box<FieldExpr>, Box<FieldExpr>),
    Scale(Scalar, Box<FieldExpr>),
    Sum(Vec<FieldExpr>),
    Unit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at offset {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
}

impl FieldExpr {
    pub fn gen(name: &str) -> Self {
        FieldExpr::Gen(name.to_string())
    }

    pub fn nprod(a: FieldExpr, b: FieldExpr) -> Self {
        FieldExpr::NProd(Box::new(a), Box::new(b))
    }

    pub fn derive(a: FieldExpr, n: u32) -> Self {
        FieldExpr::Derive(Box::new(a), n)
    }

    pub fn scale(c: Scalar, a: FieldExpr) -> Self {
        FieldExpr::Scale(c, Box::new(a))
    }

    pub fn scalar(c: Scalar) -> Self {
        FieldExpr::Scale(c, Box::new(FieldExpr::Unit))
    }

    /// Generator names referenced anywhere in the tree.
    pub fn generators(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_generators(&self, out: &mut Vec<String>) {
        match self {
            FieldExpr::Gen(n) => out.push(n.clone()),
            FieldExpr::Derive(e, _) | FieldExpr::Scale(_, e) => e.collect_generators(out),
            FieldExpr::NProd(a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
            FieldExpr::Sum(v) => v.iter().for_each(|e| e.collect_generators(out)),
            FieldExpr::Unit => {}
        }
    }

    /// Replaces generators by expressions; unknown names are left alone.
    pub fn substitute(&self, images: &HashMap<String, FieldExpr>) -> FieldExpr {
        match self {
            FieldExpr::Gen(n) => images.get(n).cloned().unwrap_or_else(|| self.clone()),
            FieldExpr::Derive(e, n) => FieldExpr::Derive(Box::new(e.substitute(images)), *n),
            FieldExpr::NProd(a, b) => FieldExpr::nprod(a.substitute(images), b.substitute(images)),
            FieldExpr::Scale(c, e) => FieldExpr::Scale(c.clone(), Box::new(e.substitute(images))),
            FieldExpr::Sum(v) => FieldExpr::Sum(v.iter().map(|e| e.substitute(images)).collect()),
            FieldExpr::Unit => FieldExpr::Unit,
        }
    }

    /// Evaluates to a canonical field in `target`. Scalars are specialized at
    /// the target's level.
    pub fn eval(&self, target: &FreeFieldAlgebra) -> Result<Field, ExprError> {
        Ok(match self {
            FieldExpr::Gen(n) => target.generator(n)?,
            FieldExpr::Unit => target.vacuum(),
            FieldExpr::Derive(e, n) => target.derive_n(&e.eval(target)?, *n)?,
            FieldExpr::NProd(a, b) => target.nprod(&a.eval(target)?, &b.eval(target)?)?,
            FieldExpr::Scale(c, e) => e.eval(target)?.scale(&c.eval_at_level(target.level())?),
            FieldExpr::Sum(v) => {
                let mut acc = Field::zero();
                for e in v {
                    acc.add_assign(&e.eval(target)?);
                }
                acc
            }
        })
    }

    fn is_sum(&self) -> bool {
        matches!(self, FieldExpr::Sum(v) if v.len() > 1)
    }

    fn negative_scale(&self) -> Option<(Scalar, &FieldExpr)> {
        match self {
            FieldExpr::Scale(c, e) if c.leading_sign() < 0 => Some((-c, e)),
            _ => None,
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Gen(_) | FieldExpr::Derive(..) | FieldExpr::NProd(..) | FieldExpr::Unit => {
                write!(f, "{self}")
            }
            _ => write!(f, "({self})"),
        }
    }

    fn fmt_scaled(c: &Scalar, e: &FieldExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(e, FieldExpr::Unit) {
            return write!(f, "{c}");
        }
        if c.is_one() {
            return e.fmt_atom(f);
        }
        if (-c).is_one() {
            write!(f, "-")?;
            return e.fmt_atom(f);
        }
        write!(f, "{c}*")?;
        e.fmt_atom(f)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Gen(n) => write!(f, "{n}"),
            FieldExpr::Unit => write!(f, "1"),
            FieldExpr::Derive(e, n) => {
                match n {
                    1 => write!(f, "d(")?,
                    n => write!(f, "d^{n}(")?,
                }
                write!(f, "{e})")
            }
            FieldExpr::NProd(a, b) => {
                write!(f, ":(")?;
                a.fmt_atom(f)?;
                let mut rest: &FieldExpr = b;
                while let FieldExpr::NProd(x, y) = rest {
                    write!(f, " ")?;
                    x.fmt_atom(f)?;
                    rest = y;
                }
                write!(f, " ")?;
                rest.fmt_atom(f)?;
                write!(f, "):")
            }
            FieldExpr::Scale(c, e) => {
                if e.is_sum() {
                    if c.is_one() {
                        return write!(f, "({e})");
                    }
                    return write!(f, "{c}*({e})");
                }
                Self::fmt_scaled(c, e, f)
            }
            FieldExpr::Sum(v) => {
                if v.is_empty() {
                    return write!(f, "0");
                }
                for (i, t) in v.iter().enumerate() {
                    match (i, t.negative_scale()) {
                        (0, Some((c, e))) => {
                            write!(f, "-")?;
                            Self::fmt_term(&c, e, f)?;
                        }
                        (_, Some((c, e))) => {
                            write!(f, " - ")?;
                            Self::fmt_term(&c, e, f)?;
                        }
                        (0, None) => Self::fmt_summand(t, f)?,
                        (_, None) => {
                            write!(f, " + ")?;
                            Self::fmt_summand(t, f)?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

impl FieldExpr {
    fn fmt_term(c: &Scalar, e: &FieldExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if e.is_sum() {
            if c.is_one() {
                return write!(f, "({e})");
            }
            return write!(f, "{c}*({e})");
        }
        Self::fmt_scaled(c, e, f)
    }

    fn fmt_summand(t: &FieldExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if t.is_sum() {
            write!(f, "({t})")
        } else {
            write!(f, "{t}")
        }
    }
}

impl std::str::FromStr for FieldExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

/// Parses a field expression. A purely scalar input becomes a vacuum multiple.
pub fn parse_expr(text: &str) -> Result<FieldExpr, ExprError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("end of input"));
    }
    Ok(v.into_field())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    NOpen,
    NClose,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b':' if b.get(i + 1) == Some(&b'(') => {
                i += 1;
                Tok::NOpen
            }
            b')' if b.get(i + 1) == Some(&b':') => {
                i += 1;
                Tok::NClose
            }
            b')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(text[start..=i].parse().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(ExprError::Parse {
                    pos: i,
                    expected: format!("a token, found `{}`", c as char),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

enum Val {
    S(Scalar),
    F(FieldExpr),
}

impl Val {
    fn into_field(self) -> FieldExpr {
        match self {
            Val::S(s) => FieldExpr::scalar(s),
            Val::F(f) => f,
        }
    }

    fn neg(self) -> Val {
        match self {
            Val::S(s) => Val::S(-s),
            Val::F(FieldExpr::Scale(c, e)) => Val::F(FieldExpr::Scale(-c, e)),
            Val::F(f) => Val::F(FieldExpr::scale(Scalar::from_int(-1), f)),
        }
    }
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn err(&self, expected: &str) -> ExprError {
        let pos = self
            .tokens
            .get(self.pos)
            .map(|t| t.0)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.0 + 1).unwrap_or(0));
        ExprError::Parse {
            pos,
            expected: expected.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ExprError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn expr(&mut self) -> Result<Val, ExprError> {
        let mut terms: Vec<Val> = Vec::new();
        let first_neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let t = self.term()?;
        terms.push(if first_neg { t.neg() } else { t });
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(self.term()?.neg());
            } else {
                break;
            }
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term"));
        }
        if terms.iter().all(|t| matches!(t, Val::S(_))) {
            let mut acc = Scalar::zero();
            for t in terms {
                if let Val::S(s) = t {
                    acc += &s;
                }
            }
            return Ok(Val::S(acc));
        }
        let mut flat = Vec::new();
        for t in terms {
            match t.into_field() {
                FieldExpr::Sum(v) => flat.extend(v),
                f => flat.push(f),
            }
        }
        Ok(Val::F(FieldExpr::Sum(flat)))
    }

    fn term(&mut self) -> Result<Val, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.factor()?;
                acc = match (acc, rhs) {
                    (Val::S(a), Val::S(b)) => Val::S(a * b),
                    (Val::S(a), Val::F(f)) | (Val::F(f), Val::S(a)) => Val::F(scale_expr(a, f)),
                    (Val::F(_), Val::F(_)) => {
                        return Err(self.err("a scalar factor (use :( ): for normal products)"))
                    }
                };
            } else if self.eat(&Tok::Slash) {
                let rhs = self.factor()?;
                let Val::S(d) = rhs else {
                    return Err(self.err("a scalar divisor"));
                };
                let inv = d.inv()?;
                acc = match acc {
                    Val::S(a) => Val::S(a * inv),
                    Val::F(f) => Val::F(scale_expr(inv, f)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Val, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let neg = self.eat(&Tok::Minus);
            let Some(Tok::Int(e)) = self.peek().cloned() else {
                return Err(self.err("an integer exponent"));
            };
            self.pos += 1;
            let e: i32 = i32::try_from(e).map_err(|_| self.err("a small exponent"))?;
            let Val::S(s) = base else {
                return Err(self.err("a scalar base for `^`"));
            };
            return Ok(Val::S(s.pow(if neg { -e } else { e })?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Val, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("an operand"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Val::S(Scalar::from_bigint(n))),
            Tok::Ident(name) if name == "k" => Ok(Val::S(Scalar::k())),
            Tok::Ident(name)
                if name == "d" && matches!(self.peek(), Some(Tok::LParen) | Some(Tok::Caret)) =>
            {
                let mut order = 1u32;
                if self.eat(&Tok::Caret) {
                    let Some(Tok::Int(n)) = self.peek().cloned() else {
                        return Err(self.err("a derivative order"));
                    };
                    self.pos += 1;
                    order = u32::try_from(n).map_err(|_| self.err("a small derivative order"))?;
                }
                self.expect(&Tok::LParen, "`(` after d")?;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(match inner {
                    Val::S(_) => Val::S(Scalar::zero()),
                    Val::F(f) => Val::F(derive_expr(f, order)),
                })
            }
            Tok::Ident(name) => Ok(Val::F(FieldExpr::Gen(name))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::NOpen => {
                let mut items = Vec::new();
                while !self.eat(&Tok::NClose) {
                    if self.peek().is_none() {
                        return Err(self.err("`):`"));
                    }
                    items.push(self.factor()?.into_field());
                }
                let Some(mut acc) = items.pop() else {
                    return Err(self.err("at least one factor inside :( ):"));
                };
                while let Some(x) = items.pop() {
                    acc = FieldExpr::nprod(x, acc);
                }
                Ok(Val::F(acc))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("an operand"))
            }
        }
    }
}

fn scale_expr(c: Scalar, f: FieldExpr) -> FieldExpr {
    match f {
        FieldExpr::Scale(d, e) => FieldExpr::Scale(c * d, e),
        f => FieldExpr::scale(c, f),
    }
}

fn derive_expr(f: FieldExpr, order: u32) -> FieldExpr {
    match f {
        FieldExpr::Derive(e, n) => FieldExpr::Derive(e, n + order),
        f => FieldExpr::derive(f, order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_normal_product() {
        assert_eq!(
            parse_expr(":(lamp lamm):").unwrap(),
            FieldExpr::nprod(FieldExpr::gen("lamp"), FieldExpr::gen("lamm"))
        );
    }

    #[test]
    fn nary_products_nest_right() {
        let e = parse_expr(":(a b c):").unwrap();
        let f = parse_expr(":(a :(b c):):").unwrap();
        assert_eq!(e, f);
        assert_eq!(e.to_string(), ":(a b c):");
    }

    #[test]
    fn nu_image_of_f() {
        let e = parse_expr("-1/4*:(eta eta): - :(lamm lamm): - (k+1)/2*d(eta)").unwrap();
        let FieldExpr::Sum(terms) = &e else {
            panic!("expected a sum")
        };
        assert_eq!(terms.len(), 3);
        assert_eq!(
            terms[2],
            FieldExpr::scale(
                "-(k+1)/2".parse().unwrap(),
                FieldExpr::derive(FieldExpr::gen("eta"), 1)
            )
        );
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn unterminated_product_is_an_error() {
        assert!(matches!(parse_expr(":(lamp"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse_expr("eta*eta"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse_expr("eta/eta"), Err(ExprError::Parse { .. })));
    }

    #[test]
    fn generator_named_d_and_derivative_of_d() {
        let e = parse_expr(":(d d(b)): - :(b d(d)):").unwrap();
        assert_eq!(e.generators(), vec!["b".to_string(), "d".to_string()]);
        assert_eq!(e.to_string(), ":(d d(b)): - :(b d(d)):");
    }

    #[test]
    fn scalar_terms_are_vacuum_multiples() {
        let e = parse_expr("1/2 + (2*k+3)/4*:(d(wa) wc):").unwrap();
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        assert_eq!(
            parse_expr("1").unwrap(),
            FieldExpr::scalar(Scalar::one())
        );
    }

    #[test]
    fn scaled_sums_render_with_parentheses() {
        let e = parse_expr("(2*k+7)/2*(:(C d(D)): - :(d(C) D):)").unwrap();
        assert_eq!(e.to_string(), "(2*k+7)/2*(:(C d(D)): - :(d(C) D):)");
    }
}
