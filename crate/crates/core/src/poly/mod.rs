//! Sparse multivariate polynomials over ℤ, ℚ and prime fields.
//!
//! These carry the jet equations, the counting queries and the base-locus
//! constraints. Terms live in a `BTreeMap` keyed by exponent vectors, so
//! iteration order (and therefore printing) is deterministic.

mod order;
mod parse;

pub use order::{degrevlex_cmp, leading_term_degrevlex};
pub use parse::{parse_poly, scan_variables};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An ordered list of variable names, optionally flagged as a jet registry.
///
/// Jet registries hold the coordinates `x_i^(j)` of a jet space, stored
/// level-major (`x1_0, ..., xn_0, x1_1, ...`) so the level-0 block comes
/// first. The printed name of `x_i^(j)` is `xi_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    jet: Option<(usize, usize)>, // (base dimension n, level m)
}

pub type RegistryRef = Arc<VarRegistry>;

impl VarRegistry {
    /// Plain registry from distinct names; declaration order is the
    /// descending variable order used by monomial comparisons.
    pub fn new(names: Vec<String>) -> Result<RegistryRef> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::Invalid(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(Arc::new(VarRegistry { names, jet: None }))
    }

    /// Jet registry with variables `x_i^(j)`, `1 <= i <= n`, `0 <= j <= m`.
    ///
    /// Variables are ordered first by upper index and then by lower: a lower
    /// level always outranks a higher one, and within a level `x1 > x2 > ...`.
    /// The storage order equals the descending comparison order.
    pub fn jet(n: usize, m: usize) -> RegistryRef {
        let mut names = Vec::with_capacity(n * (m + 1));
        for j in 0..=m {
            for i in 1..=n {
                names.push(format!("x{i}_{j}"));
            }
        }
        Arc::new(VarRegistry {
            names,
            jet: Some((n, m)),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `(n, m)` when this is a jet registry.
    pub fn jet_shape(&self) -> Option<(usize, usize)> {
        self.jet
    }

    /// Index of the jet variable `x_i^(j)` (`i` is 1-based).
    pub fn jet_index(&self, i: usize, j: usize) -> usize {
        let (n, m) = self.jet.expect("not a jet registry");
        debug_assert!(1 <= i && i <= n && j <= m);
        j * n + (i - 1)
    }
}

/// Coefficient domain of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Integer,
    Rational,
    /// Prime field F_p with p < 2^16; coefficients stored reduced in [0, p).
    PrimeField(u32),
}

impl Domain {
    pub fn prime_field(p: u32) -> Result<Domain> {
        if p >= 1 << 16 {
            return Err(Error::Domain(format!("prime {p} exceeds 2^16")));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Domain::PrimeField(p))
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient in one of the three domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(c) => c.is_zero(),
            Coeff::Rat(c) => c.is_zero(),
            Coeff::Fp(c) => *c == 0,
        }
    }
}

impl Domain {
    pub fn zero(&self) -> Coeff {
        match self {
            Domain::Integer => Coeff::Int(BigInt::zero()),
            Domain::Rational => Coeff::Rat(BigRational::zero()),
            Domain::PrimeField(_) => Coeff::Fp(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            Domain::Integer => Coeff::Int(BigInt::one()),
            Domain::Rational => Coeff::Rat(BigRational::one()),
            Domain::PrimeField(_) => Coeff::Fp(1),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            Domain::Integer => Coeff::Int(n.clone()),
            Domain::Rational => Coeff::Rat(BigRational::from_integer(n.clone())),
            Domain::PrimeField(p) => {
                let p = BigInt::from(*p);
                let r = n.mod_floor(&p);
                Coeff::Fp(r.to_u64().unwrap())
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_bigint(&BigInt::from(n))
    }

    fn check(&self, c: &Coeff) -> Coeff {
        debug_assert!(matches!(
            (self, c),
            (Domain::Integer, Coeff::Int(_))
                | (Domain::Rational, Coeff::Rat(_))
                | (Domain::PrimeField(_), Coeff::Fp(_))
        ));
        c.clone()
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Domain::Integer, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (Domain::Rational, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Domain::PrimeField(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp((x + y) % *p as u64)
            }
            _ => panic!("coefficient outside domain"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Domain::Integer, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (Domain::Rational, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Domain::PrimeField(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp((x * y) % *p as u64)
            }
            _ => panic!("coefficient outside domain"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Domain::Integer, Coeff::Int(x)) => Coeff::Int(-x),
            (Domain::Rational, Coeff::Rat(x)) => Coeff::Rat(-x),
            (Domain::PrimeField(p), Coeff::Fp(x)) => {
                Coeff::Fp(if *x == 0 { 0 } else { *p as u64 - x })
            }
            _ => panic!("coefficient outside domain"),
        }
    }

    /// Multiplication by a machine integer (derivative exponents).
    pub fn scale_u64(&self, a: &Coeff, k: u64) -> Coeff {
        match (self, a) {
            (Domain::Integer, Coeff::Int(x)) => Coeff::Int(x * BigInt::from(k)),
            (Domain::Rational, Coeff::Rat(x)) => {
                Coeff::Rat(x * BigRational::from_integer(BigInt::from(k)))
            }
            (Domain::PrimeField(p), Coeff::Fp(x)) => Coeff::Fp((x * (k % *p as u64)) % *p as u64),
            _ => panic!("coefficient outside domain"),
        }
    }
}

/// A sparse multivariate polynomial: a map from exponent vectors to nonzero
/// coefficients, tied to a registry and a coefficient domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    domain: Domain,
    registry: RegistryRef,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl MultiPoly {
    pub fn zero(domain: Domain, registry: RegistryRef) -> Self {
        MultiPoly {
            domain,
            registry,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(domain: Domain, registry: RegistryRef, c: Coeff) -> Self {
        let mut p = MultiPoly::zero(domain, registry);
        if !c.is_zero() {
            let n = p.registry.len();
            p.terms.insert(vec![0; n], p.domain.check(&c));
        }
        p
    }

    pub fn var(domain: Domain, registry: RegistryRef, idx: usize) -> Self {
        let mut exps = vec![0u32; registry.len()];
        exps[idx] = 1;
        let one = domain.one();
        let mut p = MultiPoly::zero(domain, registry);
        p.terms.insert(exps, one);
        p
    }

    pub fn monomial(
        domain: Domain,
        registry: RegistryRef,
        exps: Vec<u32>,
        c: Coeff,
    ) -> Self {
        assert_eq!(exps.len(), registry.len());
        let mut p = MultiPoly::zero(domain, registry);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn registry(&self) -> &RegistryRef {
        &self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// True when the polynomial only uses variables with index < `k`.
    pub fn uses_only_first_vars(&self, k: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e[k.min(e.len())..].iter().all(|&x| x == 0))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch);
        }
        Ok(())
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let s = self.domain.add(existing, &c);
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.domain.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = MultiPoly::zero(self.domain, self.registry.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exps, self.domain.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = MultiPoly::zero(self.domain, self.registry.clone());
        for (e, k) in &self.terms {
            out.insert_term(e.clone(), self.domain.mul(k, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = MultiPoly::constant(self.domain, self.registry.clone(), self.domain.one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Ring-homomorphic substitution: variable `i` maps to `images[i]`.
    /// All images must share a registry and domain, which become the result's.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.registry.len() {
            return Err(Error::Invalid(format!(
                "substitute needs {} images, got {}",
                self.registry.len(),
                images.len()
            )));
        }
        let target_dom = images
            .first()
            .map(|p| p.domain)
            .unwrap_or(self.domain);
        let target_reg = images
            .first()
            .map(|p| p.registry.clone())
            .unwrap_or_else(|| self.registry.clone());
        for img in images {
            if img.domain != target_dom {
                return Err(Error::DomainMismatch);
            }
            if img.registry != target_reg {
                return Err(Error::RegistryMismatch);
            }
        }
        // Cache powers of each image as they are needed.
        let mut pows: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|img| {
                vec![
                    MultiPoly::constant(target_dom, target_reg.clone(), target_dom.one()),
                    img.clone(),
                ]
            })
            .collect();
        let mut out = MultiPoly::zero(target_dom, target_reg.clone());
        for (exps, c) in &self.terms {
            let mut term = MultiPoly::constant(
                target_dom,
                target_reg.clone(),
                coerce(self.domain, target_dom, c)?,
            );
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i])?;
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a registry containing the same
    /// variable names (matching by name).
    pub fn reindex(&self, target: RegistryRef) -> Result<Self> {
        let map: Vec<usize> = self
            .registry
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownVariable(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut out = MultiPoly::zero(self.domain, target.clone());
        for (exps, c) in &self.terms {
            let mut nexps = vec![0u32; target.len()];
            for (i, &e) in exps.iter().enumerate() {
                nexps[map[i]] = e;
            }
            out.insert_term(nexps, c.clone());
        }
        Ok(out)
    }

    pub fn to_domain(&self, domain: Domain) -> Result<Self> {
        let mut out = MultiPoly::zero(domain, self.registry.clone());
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), coerce(self.domain, domain, c)?);
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = MultiPoly::zero(self.domain, self.registry.clone());
        for (exps, c) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut nexps = exps.clone();
            nexps[var] = e - 1;
            out.insert_term(nexps, self.domain.scale_u64(c, e as u64));
        }
        out
    }

    /// Exact evaluation over a prime field.
    pub fn eval_point(&self, point: &[u64]) -> Result<u64> {
        let p = match self.domain {
            Domain::PrimeField(p) => p as u64,
            _ => {
                return Err(Error::Domain(
                    "eval_point requires a prime-field polynomial".into(),
                ))
            }
        };
        if point.len() != self.registry.len() {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, registry has {}",
                point.len(),
                self.registry.len()
            )));
        }
        let mut acc: u64 = 0;
        for (exps, c) in &self.terms {
            let mut t = match c {
                Coeff::Fp(v) => *v,
                _ => unreachable!(),
            };
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t = (t * point[i]) % p;
                }
            }
            acc = (acc + t) % p;
        }
        Ok(acc)
    }

    fn format_coeff(c: &Coeff) -> (bool, String) {
        match c {
            Coeff::Int(v) => (v.is_negative(), v.abs().to_string()),
            Coeff::Rat(v) => {
                let neg = v.is_negative();
                let a = if neg { -v } else { v.clone() };
                let s = if a.is_integer() {
                    a.numer().to_string()
                } else {
                    format!("({}/{})", a.numer(), a.denom())
                };
                (neg, s)
            }
            Coeff::Fp(v) => (false, v.to_string()),
        }
    }
}

fn coerce(from: Domain, to: Domain, c: &Coeff) -> Result<Coeff> {
    if from == to {
        return Ok(c.clone());
    }
    match (c, to) {
        (Coeff::Int(v), _) => Ok(to.from_bigint(v)),
        (Coeff::Rat(v), Domain::Integer) if v.is_integer() => Ok(Coeff::Int(v.to_integer())),
        _ => Err(Error::Domain(format!(
            "cannot convert coefficient between {from:?} and {to:?}"
        ))),
    }
}

impl std::fmt::Display for MultiPoly {
    /// Terms print in descending exponent-vector order, explicit `*` between
    /// atoms: `x1_0*x2_1 + 3*x1_1`. Within a monomial, jet variables list by
    /// base index first and level second.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Print order of the variables inside a monomial.
        let atom_order: Vec<usize> = match self.registry.jet_shape() {
            None => (0..self.registry.len()).collect(),
            Some((n, m)) => {
                let mut order = Vec::with_capacity(n * (m + 1));
                for i in 1..=n {
                    for j in 0..=m {
                        order.push(self.registry.jet_index(i, j));
                    }
                }
                order
            }
        };
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let (neg, mag) = Self::format_coeff(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut atoms: Vec<String> = Vec::new();
            let is_const_term = exps.iter().all(|&e| e == 0);
            if mag != "1" || is_const_term {
                atoms.push(mag);
            }
            for &i in &atom_order {
                match exps[i] {
                    0 => {}
                    1 => atoms.push(self.registry.name(i).to_string()),
                    e => atoms.push(format!("{}^{}", self.registry.name(i), e)),
                }
            }
            write!(f, "{}", atoms.join("*"))?;
        }
        Ok(())
    }
}
