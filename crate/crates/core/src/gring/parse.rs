//! Parser for motivic class expressions.
//!
//! Grammar:
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := (base | '(' expr ')') ('^' exponent)? ('/' '(' expr ')')?
//! base     := 'L' | integer
//! exponent := ['-'] integer | '(' ['-'] integer '/' integer ')'
//! ```
//! The canonical printer emits a strict subset of this grammar, so printed
//! values always parse back to an equal class.

use super::LRational;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

pub fn parse_class(text: &str) -> Result<LRational> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn expr(&mut self) -> Result<LRational> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
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

    fn term(&mut self) -> Result<LRational> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LRational> {
        let mut value = match self.peek() {
            Some(b'(') => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            Some(b'L') => {
                self.pos += 1;
                self.skip_ws();
                LRational::l()
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                LRational::from_bigint(n)
            }
            _ => return Err(self.err("expected `L`, an integer, or `(`")),
        };
        if self.eat(b'^') {
            let e = self.exponent()?;
            value = self.apply_power(value, e)?;
        }
        if self.eat(b'/') {
            self.expect(b'(')?;
            let den = self.expr()?;
            self.expect(b')')?;
            value = value.div(&den)?;
        }
        Ok(value)
    }

    fn apply_power(&self, base: LRational, e: BigRational) -> Result<LRational> {
        if e.is_integer() {
            let k: i32 = e
                .to_integer()
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            return base.pow(k);
        }
        // Fractional exponents only make sense on L itself, where they
        // adjoin a root of L.
        if base == LRational::l() {
            Ok(LRational::l_pow(&e))
        } else {
            Err(self.err("fractional exponents are only supported on L"))
        }
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            self.expect(b'/')?;
            let d = self.integer()?;
            self.expect(b')')?;
            if d == BigInt::from(0) {
                return Err(self.err("zero exponent denominator"));
            }
            let q = BigRational::new(n, d);
            Ok(if neg { -q } else { q })
        } else {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let q = BigRational::from_integer(n);
            Ok(if neg { -q } else { q })
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self
            .peek()
            .map(|b| b.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        self.skip_ws();
        Ok(s.parse::<BigInt>().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_polynomial() {
        let v = parse_class("L^3 - 1").unwrap();
        assert_eq!(v.to_string(), "L^3 - 1");
        assert_eq!(
            v,
            LRational::l_pow_int(3).sub(&LRational::one())
        );
    }

    #[test]
    fn gcd_reduction_on_parse() {
        let v = parse_class("(L-1)/(L^2-1)").unwrap();
        assert_eq!(v.to_string(), "(1)/(L + 1)");
        // multiply back: v * (L^2 - 1) == L - 1
        let back = v.mul(&parse_class("L^2-1").unwrap());
        assert_eq!(back, parse_class("L-1").unwrap());
    }

    #[test]
    fn fractional_exponent() {
        let v = parse_class("L^(1/2)").unwrap();
        assert_eq!(v.granularity(), 2);
        assert_eq!(v.to_string(), "L^(1/2)");
        assert_eq!(v.mul(&v), LRational::l());
    }

    #[test]
    fn negative_exponent() {
        let v = parse_class("L^-1").unwrap();
        assert_eq!(v, LRational::one().div(&LRational::l()).unwrap());
        assert_eq!(v.to_string(), "(1)/(L)");
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_class("L + + 1").unwrap_err();
        match e {
            crate::error::Error::Parse { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zero_denominator_literal() {
        let e = parse_class("(L)/(L - L)").unwrap_err();
        assert!(matches!(e, crate::error::Error::DivisionByZero));
    }

    #[test]
    fn round_trip_print_parse() {
        for s in [
            "L^3",
            "(L^3 - 1)/(L + 1)",
            "L^(1/2)",
            "(2*L^2 - 3*L + 1)/(5*L + 2)",
            "0",
            "-L + 1",
        ] {
            let v = parse_class(s).unwrap();
            let printed = v.to_string();
            let back = parse_class(&printed).unwrap();
            assert_eq!(v, back, "round trip failed for {s} -> {printed}");
        }
    }
}
