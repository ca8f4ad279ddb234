//! Linear combinations of monomials and polynomials in the formal bracket variable.

use std::collections::BTreeMap;

use crate::scalar::{Level, Scalar, ScalarError};

use super::monomial::{MonoId, Monomial};

/// A canonical element of a free-field algebra: a finite map from interned
/// monomials to nonzero scalars.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Field {
    terms: BTreeMap<MonoId, Scalar>,
}

impl Field {
    pub fn zero() -> Self {
        Field::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Field::term(MonoId::intern(m), Scalar::one())
    }

    pub fn term(id: MonoId, c: Scalar) -> Self {
        let mut f = Field::zero();
        f.add_term(id, &c);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MonoId, &Scalar)> {
        self.terms.iter().map(|(id, c)| (*id, c))
    }

    pub fn coefficient(&self, id: MonoId) -> Scalar {
        self.terms.get(&id).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, id: MonoId, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&id) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&id);
                }
            }
            None => {
                self.terms.insert(id, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Field, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (id, x) in &other.terms {
                self.add_term(*id, x);
            }
        } else {
            for (id, x) in &other.terms {
                self.add_term(*id, &(x * c));
            }
        }
    }

    pub fn add_assign(&mut self, other: &Field) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn add(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Field {
        let mut out = Field::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Field {
        self.scale(&Scalar::from_int(-1))
    }

    /// If the field is `c·vacuum` return `c` (zero counts as `0·vacuum`).
    pub fn as_vacuum_multiple(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (id, c) = self.terms.iter().next().expect("one term");
                id.get().is_vacuum().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Specializes every coefficient at `level`.
    pub fn eval_at_level(&self, level: &Level) -> Result<Field, ScalarError> {
        let mut out = Field::zero();
        for (id, c) in &self.terms {
            out.add_term(*id, &c.eval_at_level(level)?);
        }
        Ok(out)
    }

    /// Terms sorted by monomial content, for stable presentation.
    pub fn sorted_terms(&self) -> Vec<(std::sync::Arc<Monomial>, Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(id, c)| (id.get(), c.clone())).collect();
        v.sort_by(|a, b| b.0.grading().cmp(&a.0.grading()).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

/// `Σ λⁿ·coeffs[n]`. The OPE pole of order `n+1` is `a₍ₙ₎b = n!·coeffs[n]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: BTreeMap<u32, Field>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn constant(f: Field) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_at(0, &f, &Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Raw coefficient of `λⁿ`.
    pub fn coeff(&self, n: u32) -> Field {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Field)> {
        self.coeffs.iter().map(|(n, f)| (*n, f))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// `a₍ₙ₎b`, the coefficient of `(z-w)^(-n-1)`.
    pub fn nth_product(&self, n: u32) -> Field {
        self.coeff(n).scale(&factorial(n))
    }

    /// Builds a λ-polynomial from OPE coefficients `a₍ₙ₎b`.
    pub fn from_products(products: impl IntoIterator<Item = (u32, Field)>) -> Self {
        let mut p = LambdaPoly::zero();
        for (n, f) in products {
            let c = Scalar::one().try_div(&factorial(n)).expect("nonzero factorial");
            p.add_at(n, &f, &c);
        }
        p
    }

    pub fn add_at(&mut self, n: u32, f: &Field, c: &Scalar) {
        if f.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(n).or_default();
        slot.add_scaled(f, c);
        if slot.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add_assign(&mut self, other: &LambdaPoly) {
        for (n, f) in &other.coeffs {
            self.add_at(*n, f, &Scalar::one());
        }
    }

    pub fn add_scaled(&mut self, other: &LambdaPoly, c: &Scalar) {
        for (n, f) in &other.coeffs {
            self.add_at(*n, f, c);
        }
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiplies by `λ^shift`.
    pub fn shift(&self, shift: u32) -> LambdaPoly {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|(n, f)| (n + shift, f.clone())).collect(),
        }
    }

    pub fn map_fields(&self, mut f: impl FnMut(&Field) -> Field) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, x) in &self.coeffs {
            out.add_at(*n, &f(x), &Scalar::one());
        }
        out
    }

    pub fn eval_at_level(&self, level: &Level) -> Result<LambdaPoly, ScalarError> {
        let mut out = LambdaPoly::zero();
        for (n, f) in &self.coeffs {
            out.add_at(*n, &f.eval_at_level(level)?, &Scalar::one());
        }
        Ok(out)
    }
}

/// Polynomial in two bracket variables `λ^i μ^j` with field coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), Field>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_at(&mut self, i: u32, j: u32, f: &Field, c: &Scalar) {
        if f.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_default();
        slot.add_scaled(f, c);
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((u32, u32), &Field)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), f) in &other.coeffs {
            out.add_at(*i, *j, f, &Scalar::from_int(-1));
        }
        out
    }
}

pub fn factorial(n: u32) -> Scalar {
    let mut acc = num_bigint::BigInt::from(1);
    for i in 2..=n {
        acc *= i;
    }
    Scalar::from_bigint(acc)
}

pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Scalar::from_bigint(acc)
}
