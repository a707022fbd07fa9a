//! Exact rational functions in the two Hodge–Deligne variables `u`, `v`.
//!
//! This is the target of the specialization `L -> uv`. Values are quotients
//! of integer polynomials in `u, v`; common monomial factors are shifted into
//! the fraction so both sides have non-negative exponents. Canonicalization
//! divides out the bivariate gcd (primitive remainder sequence in `v` over
//! ℤ[u]), reduces to joint primitive integer coefficients, and fixes the sign
//! so the denominator's lexicographically-leading coefficient is positive.

use super::zpoly::ZPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Polynomial in `v` with ℤ[u] coefficients: index = v-exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UvPoly {
    /// coeffs[j] is the ℤ[u]-coefficient of v^j; highest entry nonzero.
    coeffs: Vec<ZPoly>,
}

impl UvPoly {
    fn zero() -> Self {
        UvPoly { coeffs: Vec::new() }
    }

    fn one() -> Self {
        UvPoly {
            coeffs: vec![ZPoly::one()],
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    fn trim(mut self) -> Self {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    fn from_terms(terms: impl IntoIterator<Item = ((u64, u64), BigInt)>) -> Self {
        let mut by_v: BTreeMap<u64, Vec<(u64, BigInt)>> = BTreeMap::new();
        for ((eu, ev), c) in terms {
            by_v.entry(ev).or_default().push((eu, c));
        }
        let deg_v = match by_v.keys().next_back() {
            Some(d) => *d as usize,
            None => return UvPoly::zero(),
        };
        let mut coeffs = vec![ZPoly::zero(); deg_v + 1];
        for (ev, ts) in by_v {
            coeffs[ev as usize] = ZPoly::from_terms(ts);
        }
        UvPoly { coeffs }.trim()
    }

    fn terms(&self) -> Vec<((u64, u64), BigInt)> {
        let mut out = Vec::new();
        for (ev, zp) in self.coeffs.iter().enumerate() {
            for (eu, c) in &zp.terms {
                out.push(((*eu, ev as u64), c.clone()));
            }
        }
        out
    }

    fn deg_v(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lc_v(&self) -> &ZPoly {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn neg(&self) -> Self {
        UvPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            let a = self.coeffs.get(j).cloned().unwrap_or_else(ZPoly::zero);
            let b = other.coeffs.get(j).cloned().unwrap_or_else(ZPoly::zero);
            coeffs.push(a.add(&b));
        }
        UvPoly { coeffs }.trim()
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UvPoly::zero();
        }
        let mut coeffs = vec![ZPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UvPoly { coeffs }.trim()
    }

    fn mul_zp(&self, z: &ZPoly) -> Self {
        UvPoly {
            coeffs: self.coeffs.iter().map(|c| c.mul(z)).collect(),
        }
        .trim()
    }

    fn shift_v(&self, k: usize) -> Self {
        if self.is_zero() {
            return UvPoly::zero();
        }
        let mut coeffs = vec![ZPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UvPoly { coeffs }
    }

    /// Content with respect to `v`: the ℤ[u]-gcd of the coefficients.
    fn content_v(&self) -> ZPoly {
        let mut g = ZPoly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_exact_zp(&self, z: &ZPoly) -> Self {
        UvPoly {
            coeffs: self.coeffs.iter().map(|c| c.div_exact(z)).collect(),
        }
        .trim()
    }

    fn primitive_v(&self) -> Self {
        let c = self.content_v();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_exact_zp(&c)
        }
    }

    fn pseudo_rem(&self, other: &Self) -> Self {
        let db = other.deg_v().expect("divisor nonzero");
        let lb = other.lc_v().clone();
        let mut r = self.clone();
        while let Some(dr) = r.deg_v() {
            if dr < db || r.is_zero() {
                break;
            }
            let lr = r.lc_v().clone();
            r = r.mul_zp(&lb).sub(&other.shift_v(dr - db).mul_zp(&lr));
        }
        r
    }

    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let cont = self.content_v().gcd(&other.content_v());
        let mut a = self.primitive_v();
        let mut b = other.primitive_v();
        if a.deg_v() < b.deg_v() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive_v().mul_zp(&cont);
            }
            a = b;
            b = r.primitive_v();
        }
    }

    /// Exact division by a full divisor (used after gcd).
    fn div_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return UvPoly::zero();
        }
        let db = other.deg_v().expect("divisor nonzero");
        let lb = other.lc_v();
        let mut r = self.clone();
        let mut q = vec![ZPoly::zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.deg_v() {
            if r.is_zero() {
                break;
            }
            assert!(dr >= db, "inexact bivariate division");
            let c = r.lc_v().div_exact(lb);
            q[dr - db] = c.clone();
            r = r.sub(&other.shift_v(dr - db).mul_zp(&c));
        }
        UvPoly { coeffs: q }.trim()
    }

    /// Joint integer content of all coefficients.
    fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(&c.content());
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_int(&self, n: &BigInt) -> Self {
        UvPoly {
            coeffs: self.coeffs.iter().map(|c| c.divide_content(n)).collect(),
        }
    }

    /// Coefficient of the lexicographically-leading term (v first, then u).
    fn lex_leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last().and_then(|c| c.leading_coeff())
    }

    fn min_exp_u(&self) -> Option<u64> {
        self.coeffs
            .iter()
            .filter_map(|c| c.min_exp())
            .min()
    }

    fn min_exp_v(&self) -> Option<u64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|j| j as u64)
    }

    fn shift_down(&self, du: u64, dv: u64) -> Self {
        let coeffs = self.coeffs[dv as usize..]
            .iter()
            .map(|c| {
                ZPoly::from_terms(c.terms.iter().map(|(e, k)| (e - du, k.clone())))
            })
            .collect();
        UvPoly { coeffs }
    }
}

/// A Hodge–Deligne value: an exact rational function in `u` and `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERational {
    num: UvPoly,
    den: UvPoly,
}

impl ERational {
    pub fn zero() -> Self {
        ERational {
            num: UvPoly::zero(),
            den: UvPoly::one(),
        }
    }

    pub fn one() -> Self {
        ERational {
            num: UvPoly::one(),
            den: UvPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ERational {
            num: UvPoly::from_terms([((0, 0), BigInt::from(n))]),
            den: UvPoly::one(),
        }
        .normalized()
    }

    pub fn u() -> Self {
        ERational {
            num: UvPoly::from_terms([((1, 0), BigInt::one())]),
            den: UvPoly::one(),
        }
    }

    pub fn v() -> Self {
        ERational {
            num: UvPoly::from_terms([((0, 1), BigInt::one())]),
            den: UvPoly::one(),
        }
    }

    /// Image of an `L`-fraction under `L -> uv`: each `M^e` becomes `(uv)^e`.
    pub(crate) fn from_uv_diagonal(num: &[(u64, BigInt)], den: &[(u64, BigInt)]) -> Self {
        let lift = |ts: &[(u64, BigInt)]| {
            UvPoly::from_terms(ts.iter().map(|(e, c)| ((*e, *e), c.clone())))
        };
        ERational {
            num: lift(num),
            den: lift(den),
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.num.is_zero() {
            return ERational::zero();
        }
        // Strip the common monomial factor first; the remainder-sequence gcd
        // keeps the true polynomial part.
        let du = self
            .num
            .min_exp_u()
            .unwrap()
            .min(self.den.min_exp_u().unwrap());
        let dv = self
            .num
            .min_exp_v()
            .unwrap()
            .min(self.den.min_exp_v().unwrap());
        if du > 0 || dv > 0 {
            self.num = self.num.shift_down(du, dv);
            self.den = self.den.shift_down(du, dv);
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        let joint = self.num.int_content().gcd(&self.den.int_content());
        if !joint.is_one() && !joint.is_zero() {
            self.num = self.num.div_int(&joint);
            self.den = self.den.div_int(&joint);
        }
        if self.den.lex_leading_coeff().map(|c| c.is_negative()) == Some(true) {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        ERational {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ERational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ERational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    /// Numerator terms as ((exp_u, exp_v), coefficient).
    pub fn numerator_terms(&self) -> Vec<((u64, u64), BigInt)> {
        self.num.terms()
    }

    pub fn denominator_terms(&self) -> Vec<((u64, u64), BigInt)> {
        self.den.terms()
    }

    fn format_side(side: &UvPoly) -> String {
        if side.is_zero() {
            return "0".to_string();
        }
        let mut terms = side.terms();
        // Descending by total degree, then by u-exponent.
        terms.sort_by(|((au, av), _), ((bu, bv), _)| {
            (bu + bv, bu).cmp(&(au + av, au))
        });
        let mut out = String::new();
        for (idx, ((eu, ev), c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut atoms: Vec<String> = Vec::new();
            if !abs.is_one() || (*eu == 0 && *ev == 0) {
                atoms.push(abs.to_string());
            }
            for (sym, e) in [("u", eu), ("v", ev)] {
                match e {
                    0 => {}
                    1 => atoms.push(sym.to_string()),
                    _ => atoms.push(format!("{sym}^{e}")),
                }
            }
            out.push_str(&atoms.join("*"));
        }
        out
    }
}

impl std::fmt::Display for ERational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", Self::format_side(&self.num))
        } else {
            write!(
                f,
                "({})/({})",
                Self::format_side(&self.num),
                Self::format_side(&self.den)
            )
        }
    }
}
