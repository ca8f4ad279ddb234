use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ScalarError;

/// Where the level `k` lives: kept formal, or fixed to an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Level {
    #[default]
    Symbolic,
    Numeric(BigRational),
}

impl Level {
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Level::Numeric(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Level::Symbolic)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Symbolic => write!(f, "symbolic"),
            Level::Numeric(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Level::Numeric(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Level {
    type Err = ScalarError;

    /// Accepts `symbolic`, `k`, an integer, or `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("symbolic") || t == "k" {
            return Ok(Level::Symbolic);
        }
        let bad = |reason: &str| ScalarError::Parse {
            pos: 0,
            reason: format!("{reason}: `{t}`"),
        };
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad("invalid level numerator"))?;
        let q: BigInt = q.parse().map_err(|_| bad("invalid level denominator"))?;
        if q.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Level::Numeric(BigRational::new(p, q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_levels() {
        assert_eq!("symbolic".parse::<Level>().unwrap(), Level::Symbolic);
        assert_eq!("-1/2".parse::<Level>().unwrap(), Level::from_ratio(-1, 2));
        assert_eq!("-2".parse::<Level>().unwrap().to_string(), "-2");
        assert!("1/0".parse::<Level>().is_err());
        assert!("x".parse::<Level>().is_err());
    }
}
