//! Parser for polynomial expressions with named variables.
//!
//! Same shape as the class grammar, with identifiers as atoms and integer
//! coefficients; exponents must be non-negative integers and there is no
//! division. Jet variables use their printed names (`x1_0`).

use super::{Domain, MultiPoly, RegistryRef};
use crate::error::{Error, Result};
use num_bigint::BigInt;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    registry: RegistryRef,
}

/// Parses an integer-coefficient polynomial over the given registry.
pub fn parse_poly(text: &str, registry: &RegistryRef) -> Result<MultiPoly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        registry: registry.clone(),
    };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Collects the identifiers appearing in a polynomial expression, sorted
/// with numeric suffix awareness (`x2` before `x10`).
pub fn scan_variables(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut names: Vec<String> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            let name = std::str::from_utf8(&bytes[start..i]).unwrap().to_string();
            if !names.contains(&name) {
                names.push(name);
            }
        } else {
            i += 1;
        }
    }
    names.sort_by(|a, b| natural_cmp(a, b));
    names
}

fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    // Split into (alpha prefix, numeric suffix) pieces for humane ordering.
    let split = |s: &str| {
        let idx = s
            .find(|c: char| c.is_ascii_digit())
            .unwrap_or(s.len());
        let (head, tail) = s.split_at(idx);
        (head.to_string(), tail.parse::<u64>().ok())
    };
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    (ha, na, a.to_string()).cmp(&(hb, nb, b.to_string()))
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

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                MultiPoly::constant(
                    Domain::Integer,
                    self.registry.clone(),
                    Domain::Integer.from_bigint(&n),
                )
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.identifier();
                let idx = self
                    .registry
                    .index_of(&name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                MultiPoly::var(Domain::Integer, self.registry.clone(), idx)
            }
            _ => return Err(self.err("expected a variable, integer, or `(`")),
        };
        if self.eat(b'^') {
            let e = self.exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .map(|b| b.is_ascii_alphanumeric() || b == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string();
        self.skip_ws();
        s
    }

    fn exponent(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("exponent must be a small non-negative integer"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
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
