//! Dense univariate polynomials in `k` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients are stored little-endian (`coeffs[i]` multiplies `k^i`) with no
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `k`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Non-negative gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        debug_assert!(!c.is_zero());
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Pseudo-remainder: `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let top = r.leading();
            let shift = rd - dd;
            // r <- lc * r - top * k^shift * d
            let mut scaled = r.scale(&lc);
            for (i, c) in d.coeffs.iter().enumerate() {
                scaled.coeffs[i + shift] -= &top * c;
            }
            r = Self::from_coeffs(scaled.coeffs);
        }
        r
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        self.div_exact_int(&c)
    }

    /// Primitive gcd (positive leading coefficient, content 1). `gcd(0, 0) = 0`.
    pub fn gcd_primitive(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Exact division; panics (in debug) if `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        if d.is_one() {
            return self.clone();
        }
        let Some(nd) = self.degree() else {
            return Self::zero();
        };
        if nd < dd {
            debug_assert!(self.is_zero());
            return Self::zero();
        }
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            debug_assert!((top % &lc).is_zero(), "inexact polynomial division");
            let t = top / &lc;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &t * c;
            }
            q[shift] = t;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Self::from_coeffs(q)
    }

    pub fn eval(&self, num: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
        // Horner on the homogenized form: sum c_i num^i den^(n-i) / den^n.
        let n = self.coeffs.len();
        if n == 0 {
            return (BigInt::zero(), BigInt::one());
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        // acc = sum c_i num^i den^(n-1-i)
        (acc, num_traits::pow(den.clone(), n - 1))
    }

    /// Derivative with respect to `k`.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for IntPoly {
    /// Descending powers, e.g. `2*k^2-3*k+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "k")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
