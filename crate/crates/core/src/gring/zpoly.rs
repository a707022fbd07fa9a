//! Sparse univariate polynomials over the integers.
//!
//! Internal representation backing [`LRational`](super::LRational): the
//! numerator and denominator are polynomials in `M = L^(1/N)`. Exponents are
//! kept non-negative; Laurent values shift the shared monomial factor into
//! the fraction. Canonicalization needs exact gcds, computed with the
//! primitive polynomial remainder sequence so all arithmetic stays in ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Terms sorted by ascending exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ZPoly {
    pub terms: Vec<(u64, BigInt)>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            ZPoly::zero()
        } else {
            ZPoly {
                terms: vec![(0, c)],
            }
        }
    }

    pub fn monomial(exp: u64, c: BigInt) -> Self {
        if c.is_zero() {
            ZPoly::zero()
        } else {
            ZPoly {
                terms: vec![(exp, c)],
            }
        }
    }

    /// Builds from arbitrary (exponent, coefficient) pairs, merging duplicates.
    pub fn from_terms(pairs: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut terms: Vec<(u64, BigInt)> = Vec::new();
        for (e, c) in pairs {
            terms.push((e, c));
        }
        terms.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(u64, BigInt)> = Vec::new();
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        ZPoly { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Degree in M; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn min_exp(&self) -> Option<u64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out: Vec<(u64, BigInt)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                std::cmp::Ordering::Less => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ea, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        ZPoly { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut acc: std::collections::BTreeMap<u64, BigInt> = std::collections::BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        ZPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiplies every exponent by `factor` (granularity alignment).
    pub fn stretch(&self, factor: u64) -> Self {
        ZPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * factor, c.clone()))
                .collect(),
        }
    }

    /// Divides every exponent by `factor`; caller guarantees divisibility.
    pub fn shrink(&self, factor: u64) -> Self {
        ZPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert_eq!(e % factor, 0);
                    (e / factor, c.clone())
                })
                .collect(),
        }
    }

    pub fn shift(&self, delta: u64) -> Self {
        ZPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + delta, c.clone()))
                .collect(),
        }
    }

    /// Gcd of all coefficients; zero polynomial has content 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn divide_content(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        ZPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k / c)).collect(),
        }
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.divide_content(&c)
        }
    }

    /// One pseudo-division step sequence: returns the pseudo-remainder of
    /// `self` by `other` (`other` nonzero, deg(self) >= deg(other)).
    fn pseudo_rem(&self, other: &Self) -> Self {
        let db = other.degree().expect("divisor must be nonzero");
        let lb = other.leading_coeff().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff().unwrap().clone();
            // r := lb*r - lr * M^(dr-db) * other
            r = r.scale(&lb).sub(&other.shift(dr - db).scale(&lr));
        }
        r
    }

    /// Exact gcd over ℤ via the primitive remainder sequence. The result is
    /// primitive with positive leading coefficient, times the coefficient gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.positive_lc();
        }
        if other.is_zero() {
            return self.positive_lc();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                let g = b.primitive_part().positive_lc();
                return g.scale(&cont);
            }
            a = b;
            b = r.primitive_part();
        }
    }

    fn positive_lc(&self) -> Self {
        match self.leading_coeff() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Exact division; panics if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return ZPoly::zero();
        }
        let db = other.degree().unwrap();
        let lb = other.leading_coeff().unwrap();
        let mut r = self.clone();
        let mut q: Vec<(u64, BigInt)> = Vec::new();
        while let Some(dr) = r.degree() {
            assert!(dr >= db, "inexact polynomial division");
            let lr = r.leading_coeff().unwrap();
            let (c, rem) = lr.div_rem(lb);
            assert!(rem.is_zero(), "inexact polynomial division");
            q.push((dr - db, c.clone()));
            r = r.sub(&other.shift(dr - db).scale(&c));
            if r.is_zero() {
                break;
            }
        }
        q.reverse();
        ZPoly { terms: q }
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            acc += c * pow_bigint(x, *e);
        }
        acc
    }
}

pub(crate) fn pow_bigint(x: &BigInt, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}
