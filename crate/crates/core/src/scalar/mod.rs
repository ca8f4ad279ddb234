//! Exact arithmetic in Q(k), the rational functions in the formal level `k`.

mod level;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use level::Level;
pub use parse::parse_scalar;
pub use poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at level {0}")]
    PoleAtLevel(String),
    #[error("cannot parse scalar at offset {pos}: {reason}")]
    Parse { pos: usize, reason: String },
}

/// An element of Q(k) in lowest terms.
///
/// `num / den` with integer-coefficient polynomials, `gcd(num, den) = 1` over Q,
/// the joint integer content of `num` and `den` equal to 1, and `den` with
/// positive leading coefficient. Zero is `0 / 1`. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: IntPoly,
    den: IntPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar {
            num: IntPoly::constant(n),
            den: IntPoly::one(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::new(
            IntPoly::constant(BigInt::from(p)),
            IntPoly::constant(BigInt::from(q)),
        )
        .expect("zero denominator")
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Scalar::new(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
        .expect("BigRational has nonzero denominator")
    }

    /// The formal level `k`.
    pub fn k() -> Self {
        Scalar {
            num: IntPoly::var(),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Scalar {
            num: p,
            den: IntPoly::one(),
        }
    }

    /// Builds `num / den` and normalizes it.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: IntPoly, mut den: IntPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd_primitive(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_exact_int(&c);
            den = den.div_exact_int(&c);
        }
        Scalar { num, den }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `k`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| {
            BigRational::new(self.num.constant_term(), self.den.constant_term())
        })
    }

    pub fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Sign of the leading coefficient of the numerator (-1, 0 or 1).
    pub fn leading_sign(&self) -> i32 {
        match self.num.leading() {
            c if c.is_negative() => -1,
            c if c.is_zero() => 0,
            _ => 1,
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().try_div(self)
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, d: i64) -> Scalar {
        assert!(d != 0, "division by zero");
        Self::normalized(self.num.clone(), self.den.scale(&BigInt::from(d)))
    }

    pub fn mul_int(&self, m: i64) -> Scalar {
        if m == 0 {
            return Scalar::zero();
        }
        Self::normalized(self.num.scale(&BigInt::from(m)), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(Scalar {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Specializes at a level; symbolic levels return the value unchanged.
    pub fn eval_at_level(&self, level: &Level) -> Result<Scalar, ScalarError> {
        match level {
            Level::Symbolic => Ok(self.clone()),
            Level::Numeric(r) => {
                let (p, q) = (r.numer(), r.denom());
                let (n, nd) = self.num.eval(p, q);
                let (d, dd) = self.den.eval(p, q);
                if d.is_zero() {
                    return Err(ScalarError::PoleAtLevel(level.to_string()));
                }
                let value = BigRational::new(n * dd, nd * d);
                Ok(Scalar::from_rational(&value))
            }
        }
    }

    fn fmt_factored(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (nc, nfac) = factor_poly(&self.num);
        let (dc, dfac) = factor_poly(&self.den);
        // value = nc/dc * prod(nfac) / prod(dfac), dc > 0 after sign transfer
        let mut coef = BigRational::new(nc, dc);
        if coef.is_negative() {
            write!(f, "-")?;
            coef = -coef;
        }
        let cn = coef.numer();
        let cd = coef.denom();
        let mut top: Vec<String> = Vec::new();
        if !cn.is_one() || nfac.is_empty() {
            top.push(cn.to_string());
        }
        top.extend(nfac.iter().map(render_factor));
        write!(f, "{}", top.join("*"))?;
        let mut bottom: Vec<String> = Vec::new();
        if !cd.is_one() {
            bottom.push(cd.to_string());
        }
        bottom.extend(dfac.iter().map(render_factor));
        match bottom.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", bottom[0]),
            _ => write!(f, "/({})", bottom.join("*")),
        }
    }
}

fn render_factor((p, e): &(IntPoly, u32)) -> String {
    let base = if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    };
    if *e > 1 {
        format!("{base}^{e}")
    } else {
        base
    }
}

/// Splits a polynomial into a signed integer content and primitive factors,
/// pulling out linear factors with rational roots. Leftover factors of
/// degree > 1 are kept whole.
fn factor_poly(p: &IntPoly) -> (BigInt, Vec<(IntPoly, u32)>) {
    if p.is_constant() {
        return (p.constant_term(), Vec::new());
    }
    let mut content = p.content();
    if p.leading().is_negative() {
        content = -content;
    }
    let mut rest = p.div_exact_int(&content);
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    // k^m
    let zeros = rest.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        factors.push((IntPoly::var(), zeros as u32));
        rest = IntPoly::from_coeffs(rest.coeffs()[zeros..].to_vec());
    }
    'outer: while rest.degree().is_some_and(|d| d >= 2) {
        let lc = rest.leading().abs();
        let c0 = rest.constant_term().abs();
        let (Some(lc_small), Some(c0_small)) = (lc.to_u64(), c0.to_u64()) else {
            break;
        };
        if lc_small > 1_000_000 || c0_small > 1_000_000 {
            break;
        }
        for q in divisors(lc_small) {
            for pnum in divisors(c0_small) {
                for sign in [1i64, -1] {
                    // candidate root sign*pnum/q, factor q*k - sign*pnum
                    let lin = IntPoly::from_coeffs(vec![
                        BigInt::from(-sign * pnum as i64),
                        BigInt::from(q),
                    ]);
                    if lin.content() != BigInt::one() {
                        continue;
                    }
                    let (v, _) = rest.eval(&BigInt::from(sign * pnum as i64), &BigInt::from(q));
                    if v.is_zero() {
                        rest = rest.div_exact(&lin);
                        push_factor(&mut factors, lin);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    if !rest.is_one() {
        push_factor(&mut factors, rest);
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0).then(b.0.coeffs().cmp(a.0.coeffs())));
    (content, factors)
}

fn push_factor(factors: &mut Vec<(IntPoly, u32)>, f: IntPoly) {
    if let Some(slot) = factors.iter_mut().find(|(g, _)| *g == f) {
        slot.1 += 1;
    } else {
        factors.push((f, 1));
    }
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![1];
    }
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

impl fmt::Display for Scalar {
    /// Factored form that reparses, e.g. `-(k+2)*(2*k+1)*(3*k+4)/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_factored(f)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar {
                    num: self.num.add(&rhs.num),
                    den: IntPoly::one(),
                };
            }
            return Scalar::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Scalar::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar {
                num: self.num.mul(&rhs.num),
                den: IntPoly::one(),
            };
        }
        Scalar::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}
