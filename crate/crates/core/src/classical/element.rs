//! Laurent polynomials over ℚ in named variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ClassicalError;

/// Sorted `(variable, exponent)` pairs with nonzero exponents.
pub type PMono = Vec<(String, i32)>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PoissonElement {
    terms: BTreeMap<PMono, BigRational>,
}

fn mono_mul(a: &PMono, b: &PMono) -> PMono {
    let mut map: BTreeMap<String, i32> = a.iter().cloned().collect();
    for (v, e) in b {
        *map.entry(v.clone()).or_insert(0) += e;
    }
    map.into_iter().filter(|(_, e)| *e != 0).collect()
}

impl PoissonElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(Vec::new(), c);
        out
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn var(name: &str) -> Self {
        let mut out = Self::zero();
        out.add_term(vec![(name.to_string(), 1)], BigRational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMono, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: PMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Inverse of a single term.
    pub fn inverse(&self) -> Result<Self, ClassicalError> {
        if self.terms.len() != 1 {
            return Err(ClassicalError::NotInvertible(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        let inv: PMono = m.iter().map(|(v, e)| (v.clone(), -e)).collect();
        let mut out = Self::zero();
        out.add_term(inv, c.recip());
        Ok(out)
    }

    pub fn pow(&self, e: i32) -> Result<Self, ClassicalError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn partial(&self, var: &str) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(v, _)| v == var) {
                let e = m[pos].1;
                let mut dm = m.clone();
                if e == 1 {
                    dm.remove(pos);
                } else {
                    dm[pos].1 = e - 1;
                }
                out.add_term(dm, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Variables that occur with a negative exponent.
    pub fn inverted_variables(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().filter(|(_, e)| *e < 0).map(|(v, _)| v.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Substitutes every variable through `image`.
    pub fn substitute(
        &self,
        image: &dyn Fn(&str) -> Option<PoissonElement>,
    ) -> Result<Self, ClassicalError> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (v, e) in m {
                let x = image(v).ok_or_else(|| ClassicalError::UnknownGenerator(v.clone()))?;
                t = t.mul(&x.pow(*e)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Multiplies by the smallest monomial that clears all negative exponents.
    fn clear_denominators(&self) -> Self {
        let mut shift: BTreeMap<String, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, e) in m {
                if *e < 0 {
                    let s = shift.entry(v.clone()).or_insert(0);
                    *s = (*s).max(-e);
                }
            }
        }
        let m: PMono = shift.into_iter().collect();
        let mut unit = Self::zero();
        unit.add_term(m, BigRational::one());
        self.mul(&unit)
    }

    /// Remainder of multivariate division by `g` in lexicographic order,
    /// after clearing monomial denominators. For a principal ideal this
    /// decides membership exactly.
    pub fn reduce_by(&self, g: &PoissonElement) -> PoissonElement {
        if g.is_zero() {
            return self.clone();
        }
        let g = g.clear_denominators();
        let (lm, lc) = g.leading();
        let mut p = self.clear_denominators();
        let mut rem = Self::zero();
        while !p.is_zero() {
            let (pm, pc) = p.leading();
            match mono_div(&pm, &lm) {
                Some(q) => {
                    let mut t = Self::zero();
                    t.add_term(q, pc / lc.clone());
                    p = p.sub(&t.mul(&g));
                }
                None => {
                    let mut t = Self::zero();
                    t.add_term(pm, pc);
                    rem = rem.add(&t);
                    p = p.sub(&t);
                }
            }
        }
        rem
    }

    /// Remainder modulo a list of ideal generators (sequential division).
    pub fn reduce_mod(&self, ideal: &[PoissonElement]) -> PoissonElement {
        let mut out = self.clone();
        for g in ideal {
            out = out.reduce_by(g);
        }
        out
    }

    fn leading(&self) -> (PMono, BigRational) {
        let (m, c) = self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0)).expect("nonzero");
        (m.clone(), c.clone())
    }
}

/// Lexicographic order on exponent vectors, variables compared by name.
fn lex_cmp(a: &PMono, b: &PMono) -> std::cmp::Ordering {
    let mut vars: Vec<&String> = a.iter().chain(b.iter()).map(|(v, _)| v).collect();
    vars.sort();
    vars.dedup();
    let exp = |m: &PMono, v: &str| m.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0);
    for v in vars {
        match exp(a, v).cmp(&exp(b, v)) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn mono_div(a: &PMono, b: &PMono) -> Option<PMono> {
    let mut map: BTreeMap<String, i32> = a.iter().cloned().collect();
    for (v, e) in b {
        let slot = map.entry(v.clone()).or_insert(0);
        *slot -= e;
        if *slot < 0 {
            return None;
        }
    }
    Some(map.into_iter().filter(|(_, e)| *e != 0).collect())
}

impl fmt::Display for PoissonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&PMono, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let deg = |m: &PMono| m.iter().map(|(_, e)| *e).sum::<i32>();
            deg(b.0).cmp(&deg(a.0)).then_with(|| lex_cmp(b.0, a.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for PoissonElement {
    type Err = ClassicalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_element(s)
    }
}

/// Parses `+ - * / ^` expressions in variables and rational constants.
/// Division and negative powers are allowed only by single terms.
pub fn parse_element(text: &str) -> Result<PoissonElement, ClassicalError> {
    let mut p = ElemParser {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("end of input"));
    }
    Ok(v)
}

struct ElemParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ElemParser<'_> {
    fn err(&self, expected: &str) -> ClassicalError {
        ClassicalError::Parse {
            pos: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PoissonElement, ClassicalError> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PoissonElement, ClassicalError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                let d = self.factor()?;
                acc = acc.mul(&d.inverse()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<PoissonElement, ClassicalError> {
        if self.eat(b'-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let e = i32::try_from(n).map_err(|_| self.err("a small exponent"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ClassicalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("an integer"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .expect("digits"))
    }

    fn atom(&mut self) -> Result<PoissonElement, ClassicalError> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("`)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(PoissonElement::constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                Ok(PoissonElement::var(name))
            }
            _ => Err(self.err("an operand")),
        }
    }
}
