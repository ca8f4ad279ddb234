//! Scalar syntax: integers, `k`, `+ - * / ^`, parentheses.

use num_bigint::BigInt;

use super::{Scalar, ScalarError};

pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> ScalarError {
        ScalarError::Parse {
            pos: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = if c == b'*' { acc * f } else { acc.try_div(&f)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.skip_ws();
            let e = self.integer()?;
            let e: i32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'k') => {
                self.pos += 1;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    return Err(self.err("unknown identifier"));
                }
                Ok(Scalar::k())
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_bigint(self.integer()?)),
            Some(_) => Err(self.err("expected number, `k` or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let v = parse_scalar("1 + 2*k^2 - (k+1)/2").unwrap();
        assert_eq!(v.to_string(), "(4*k^2-k+1)/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("(k+1").is_err());
        assert!(parse_scalar("kk").is_err());
        assert!(parse_scalar("1/(k-k)").is_err());
    }
}
