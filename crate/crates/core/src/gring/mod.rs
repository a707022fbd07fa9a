//! Exact arithmetic in the localized Grothendieck-ring image.
//!
//! Motivic values are modeled as rational functions in the Lefschetz class
//! `L`, with fractional exponents allowed through a per-value granularity
//! `N`: internally a value is a quotient of integer polynomials in
//! `M = L^(1/N)`. This subring carries everything the toolkit computes:
//! classes of the shipped varieties, stratum classes, geometric series
//! `1/(1 - L^{-k})` and the values of motivic integrals.
//!
//! Canonical form (unique per value, so equality is structural):
//! * numerator and denominator are coprime polynomials in `M`;
//! * their joint coefficient gcd is 1 and the denominator's leading
//!   coefficient is positive;
//! * the granularity `N` is minimal (no common factor with all exponents);
//! * zero is `0/1` with `N = 1`.
//!
//! The virtual dimension of a nonzero value is deg(num) - deg(den), in units
//! of `1/N`; the zero class has dimension minus infinity. On this
//! representable subring `dim(a*b) = dim(a) + dim(b)` holds exactly — a
//! property of the representation by rational functions, not of the full
//! localized ring, where multiplicativity of the dimension is unknown.

mod erational;
mod parse;
mod zpoly;

pub use erational::ERational;
pub use parse::parse_class;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use zpoly::{pow_bigint, ZPoly};

/// Virtual dimension of a motivic class: a rational number, or minus
/// infinity exactly for the zero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VirtualDim {
    NegInfinity,
    Finite(BigRational),
}

impl VirtualDim {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            VirtualDim::NegInfinity => None,
            VirtualDim::Finite(d) => Some(d),
        }
    }

    pub fn from_int(d: i64) -> Self {
        VirtualDim::Finite(BigRational::from_integer(BigInt::from(d)))
    }
}

impl std::fmt::Display for VirtualDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VirtualDim::NegInfinity => write!(f, "-inf"),
            VirtualDim::Finite(d) => write!(f, "{}", d),
        }
    }
}

/// A motivic class: an exact rational function in `L` with exponents in
/// `(1/N)·ℤ`, kept in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LRational {
    /// Granularity: all exponents are integer multiples of `1/gran`.
    gran: u64,
    /// Numerator, a polynomial in `M = L^(1/gran)`.
    num: ZPoly,
    /// Denominator, never zero, positive leading coefficient.
    den: ZPoly,
}

impl LRational {
    pub fn zero() -> Self {
        LRational {
            gran: 1,
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        LRational::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        LRational::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        LRational {
            gran: 1,
            num: ZPoly::constant(n),
            den: ZPoly::one(),
        }
    }

    /// The Lefschetz class `L` itself.
    pub fn l() -> Self {
        LRational::l_pow_int(1)
    }

    /// `L^k` for an integer `k` (negative exponents allowed).
    pub fn l_pow_int(k: i64) -> Self {
        if k >= 0 {
            LRational {
                gran: 1,
                num: ZPoly::monomial(k as u64, BigInt::one()),
                den: ZPoly::one(),
            }
        } else {
            LRational {
                gran: 1,
                num: ZPoly::one(),
                den: ZPoly::monomial((-k) as u64, BigInt::one()),
            }
        }
    }

    /// `L^q` for a rational exponent `q`.
    pub fn l_pow(q: &BigRational) -> Self {
        let den = q.denom().to_u64().expect("exponent denominator too large");
        let num = q.numer().clone();
        let mut v = if num.is_negative() {
            let e = (-num.clone()).to_u64().expect("exponent too large");
            LRational {
                gran: den,
                num: ZPoly::one(),
                den: ZPoly::monomial(e, BigInt::one()),
            }
        } else {
            let e = num.to_u64().expect("exponent too large");
            LRational {
                gran: den,
                num: ZPoly::monomial(e, BigInt::one()),
                den: ZPoly::one(),
            }
        };
        v.normalize();
        v
    }

    /// Builds a value from raw (exponent numerator, coefficient) term lists
    /// over granularity `gran`. Exponents may be negative; the common shift
    /// moves into the fraction.
    pub fn from_parts(
        gran: u64,
        num: impl IntoIterator<Item = (i64, BigInt)>,
        den: impl IntoIterator<Item = (i64, BigInt)>,
    ) -> Result<Self> {
        assert!(gran >= 1, "granularity must be positive");
        let num: Vec<(i64, BigInt)> = num.into_iter().collect();
        let den: Vec<(i64, BigInt)> = den.into_iter().collect();
        let shift = num
            .iter()
            .chain(den.iter())
            .map(|(e, _)| *e)
            .min()
            .unwrap_or(0)
            .min(0);
        let lift = |v: Vec<(i64, BigInt)>| {
            ZPoly::from_terms(v.into_iter().map(|(e, c)| ((e - shift) as u64, c)))
        };
        let num = lift(num);
        let den = lift(den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut v = LRational { gran, num, den };
        v.normalize();
        Ok(v)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn granularity(&self) -> u64 {
        self.gran
    }

    /// Numerator terms as (exponent numerator over granularity, coefficient).
    pub fn numerator_terms(&self) -> Vec<(u64, BigInt)> {
        self.num.terms.clone()
    }

    pub fn denominator_terms(&self) -> Vec<(u64, BigInt)> {
        self.den.terms.clone()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            *self = LRational::zero();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        // Joint primitivity: with integer coefficients on both sides the
        // per-part contents cannot both be 1 in general, so the canonical
        // scaling makes the gcd of all coefficients 1.
        let joint = self.num.content().gcd(&self.den.content());
        if !joint.is_one() {
            self.num = self.num.divide_content(&joint);
            self.den = self.den.divide_content(&joint);
        }
        if self.den.leading_coeff().map(|c| c.is_negative()) == Some(true) {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        // Minimal granularity: strip a common factor of the granularity and
        // every exponent.
        if self.gran > 1 {
            let mut g = self.gran;
            for (e, _) in self.num.terms.iter().chain(self.den.terms.iter()) {
                g = g.gcd(e);
                if g == 1 {
                    break;
                }
            }
            if g > 1 {
                self.num = self.num.shrink(g);
                self.den = self.den.shrink(g);
                self.gran /= g;
            }
        }
    }

    /// Rescales two values to a common granularity.
    fn aligned(&self, other: &Self) -> (u64, ZPoly, ZPoly, ZPoly, ZPoly) {
        let gran = self.gran.lcm(&other.gran);
        let fa = gran / self.gran;
        let fb = gran / other.gran;
        (
            gran,
            self.num.stretch(fa),
            self.den.stretch(fa),
            other.num.stretch(fb),
            other.den.stretch(fb),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (gran, na, da, nb, db) = self.aligned(other);
        let mut v = LRational {
            gran,
            num: na.mul(&db).add(&nb.mul(&da)),
            den: da.mul(&db),
        };
        v.normalize();
        v
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LRational {
            gran: self.gran,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (gran, na, da, nb, db) = self.aligned(other);
        let mut v = LRational {
            gran,
            num: na.mul(&nb),
            den: da.mul(&db),
        };
        v.normalize();
        v
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (gran, na, da, nb, db) = self.aligned(other);
        let mut v = LRational {
            gran,
            num: na.mul(&db),
            den: da.mul(&nb),
        };
        v.normalize();
        Ok(v)
    }

    /// Integer powers; negative exponents invert (error on zero base).
    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return LRational::one().div(&self.pow(-e)?);
        }
        let mut acc = LRational::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Virtual dimension: top exponent of the numerator minus top exponent
    /// of the denominator, minus infinity for zero.
    pub fn virtual_dim(&self) -> VirtualDim {
        match self.num.degree() {
            None => VirtualDim::NegInfinity,
            Some(dn) => {
                let dd = self.den.degree().unwrap();
                let diff = BigInt::from(dn) - BigInt::from(dd);
                VirtualDim::Finite(BigRational::new(diff, BigInt::from(self.gran)))
            }
        }
    }

    /// Ring-homomorphic evaluation `L -> q` for an integer `q >= 2`.
    ///
    /// Requires integral exponents, or `q` a perfect `N`-th power so that a
    /// root of `q` realizes `L^(1/N)`.
    pub fn specialize_q(&self, q: &BigInt) -> Result<BigRational> {
        if *q < BigInt::from(2) {
            return Err(Error::Domain(format!(
                "specialization point must be >= 2, got {q}"
            )));
        }
        let point = if self.gran == 1 {
            q.clone()
        } else {
            match nth_root_exact(q, self.gran) {
                Some(r) => r,
                None => {
                    return Err(Error::Domain(format!(
                        "granularity {} requires q to be a perfect {}-th power, got {q}",
                        self.gran, self.gran
                    )))
                }
            }
        };
        let num = self.num.eval(&point);
        let den = self.den.eval(&point);
        // The denominator is a product of factors with no root at q >= 2.
        assert!(!den.is_zero(), "denominator vanished at q = {q}");
        Ok(BigRational::new(num, den))
    }

    /// Specialization `L -> uv` into the two-variable Hodge–Deligne ring.
    /// Fails on fractional exponents: the target has no root of `uv`.
    pub fn to_e_rational(&self) -> Result<ERational> {
        if self.gran != 1 {
            return Err(Error::Domain(format!(
                "cannot map L^(1/{}) to the (u, v) ring; no root of uv exists there",
                self.gran
            )));
        }
        Ok(ERational::from_uv_diagonal(&self.num.terms, &self.den.terms))
    }

    /// Formats one side of the fraction; exponents are printed over the
    /// reduced granularity, e.g. `L^3`, `L^(1/2)`, `5*L^2`.
    fn format_side(&self, side: &ZPoly) -> String {
        if side.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in side.terms.iter().rev().enumerate() {
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
            let power = if *e == 0 {
                None
            } else {
                let g = e.gcd(&self.gran);
                let (en, ed) = (e / g, self.gran / g);
                Some(if ed == 1 {
                    if en == 1 {
                        "L".to_string()
                    } else {
                        format!("L^{en}")
                    }
                } else {
                    format!("L^({en}/{ed})")
                })
            };
            match power {
                None => out.push_str(&abs.to_string()),
                Some(p) => {
                    if abs.is_one() {
                        out.push_str(&p);
                    } else {
                        out.push_str(&format!("{abs}*{p}"));
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for LRational {
    /// Canonical print: descending exponents, explicit signs, both sides
    /// parenthesized when a denominator is present, e.g. `(L^3 - 1)/(L + 1)`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.format_side(&self.num))
        } else {
            write!(
                f,
                "({})/({})",
                self.format_side(&self.num),
                self.format_side(&self.den)
            )
        }
    }
}

/// Exact integer `n`-th root, if `q` is a perfect `n`-th power.
fn nth_root_exact(q: &BigInt, n: u64) -> Option<BigInt> {
    if n == 1 {
        return Some(q.clone());
    }
    let r = q.nth_root(n as u32);
    if pow_bigint(&r, n) == *q {
        Some(r)
    } else {
        None
    }
}

/// Closed form of the convergent geometric series with ratio `L^{-k}`:
/// `1/(1 - L^{-k}) = L^k/(L^k - 1)`.
pub fn geometric_series(k: u64) -> Result<LRational> {
    if k == 0 {
        return Err(Error::Domain(
            "geometric series requires k >= 1; the k = 0 series does not converge".into(),
        ));
    }
    let lk = LRational::l_pow_int(k as i64);
    lk.div(&lk.sub(&LRational::one()))
}

/// Partial sum of the same series: `sum_{i=0}^{T-1} L^{-ki}`.
pub fn partial_geometric(k: u64, terms: u64) -> LRational {
    let mut acc = LRational::zero();
    for i in 0..terms {
        acc = acc.add(&LRational::l_pow_int(-((k * i) as i64)));
    }
    acc
}
