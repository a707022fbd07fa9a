//! Combinatorial log-resolution data and the invariants computed from it.
//!
//! A dataset records, for a log resolution of a pair, the divisor
//! multiplicities `a_i` (in the pullback of the subscheme) and `b_i` (in the
//! relative canonical divisor), flags for centers inside a locus `W` and for
//! the exceptional divisor of the blowup along the subscheme itself, and the
//! classes of the open strata `[D_J°]` as motivic values. Everything else is
//! evaluated from these numbers:
//!
//! * the normal-crossing integral `sum_J [D_J°] prod_{j in J} (L-1)/(L^{r_j+1}-1)`;
//! * the motivic volume (the integral at `r = b`), which the transformation
//!   rule forces to equal the class of the base;
//! * multi-contact measures `[D_J°] (L-1)^{|J|} L^{-sum r_j}`;
//! * log canonical threshold `min (b_i + 1)/a_i`, KLT/LC tests, minimal log
//!   discrepancies, inversion-of-adjunction comparison;
//! * contact-locus codimensions `sum nu_i` upstairs and
//!   `sum nu_i (b_i + 1)` downstairs, and the threshold recovered from them.

use crate::error::{Error, Result};
use crate::gring::{geometric_series, parse_class, LRational, VirtualDim};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One prime divisor of the resolution with its discrepancy data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Divisor {
    pub name: String,
    /// Multiplicity in the pullback of the subscheme.
    pub a: u64,
    /// Multiplicity in the relative canonical divisor.
    pub b: u64,
    /// The divisor's image lies inside the marked locus W.
    #[serde(rename = "in_W", default)]
    pub in_w: bool,
    /// Marks the exceptional divisor of the blowup along the subscheme
    /// (consumed by the rational-singularities criterion).
    #[serde(default)]
    pub is_blowup_exceptional: bool,
}

/// Combinatorial model of a log resolution.
#[derive(Debug, Clone)]
pub struct ResolutionData {
    pub ambient_dim: usize,
    pub total_class: Option<LRational>,
    pub divisors: Vec<Divisor>,
    /// Class of each nonempty open stratum, keyed by the divisor subset.
    pub strata: BTreeMap<BTreeSet<usize>, LRational>,
    pub notes: Vec<String>,
}

/// Serialized dataset; classes are strings in the class grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolutionFile {
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_class: Option<String>,
    pub divisors: Vec<Divisor>,
    pub strata: Vec<StratumFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumFile {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub class: String,
}

impl ResolutionData {
    pub fn from_file(file: &ResolutionFile) -> Result<ResolutionData> {
        let mut strata = BTreeMap::new();
        for s in &file.strata {
            let mut key = BTreeSet::new();
            for name in &s.j {
                let idx = file
                    .divisors
                    .iter()
                    .position(|d| &d.name == name)
                    .ok_or_else(|| {
                        Error::Validation(format!("stratum references unknown divisor `{name}`"))
                    })?;
                key.insert(idx);
            }
            if strata.insert(key, parse_class(&s.class)?).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate stratum key {:?}",
                    s.j
                )));
            }
        }
        let total_class = match &file.total_class {
            Some(t) => Some(parse_class(t)?),
            None => None,
        };
        Ok(ResolutionData {
            ambient_dim: file.ambient_dim,
            total_class,
            divisors: file.divisors.clone(),
            strata,
            notes: file.notes.clone(),
        })
    }

    pub fn to_file(&self) -> ResolutionFile {
        ResolutionFile {
            ambient_dim: self.ambient_dim,
            total_class: self.total_class.as_ref().map(|t| t.to_string()),
            divisors: self.divisors.clone(),
            strata: self
                .strata
                .iter()
                .map(|(k, v)| StratumFile {
                    j: k.iter().map(|&i| self.divisors[i].name.clone()).collect(),
                    class: v.to_string(),
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<ResolutionData> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let file: ResolutionFile = serde_json::from_str(&text)
            .map_err(|e| Error::Validation(format!("malformed dataset: {e}")))?;
        ResolutionData::from_file(&file)
    }

    /// Class of a stratum; absent keys and explicit zero classes both mean
    /// the stratum is empty.
    pub fn stratum(&self, key: &BTreeSet<usize>) -> LRational {
        self.strata.get(key).cloned().unwrap_or_else(LRational::zero)
    }

    pub fn stratum_nonempty(&self, key: &BTreeSet<usize>) -> bool {
        !self.stratum(key).is_zero()
    }

    pub fn divisor_index(&self, name: &str) -> Option<usize> {
        self.divisors.iter().position(|d| d.name == name)
    }
}

/// Validation outcome; `partition` compares the stratum sum against the
/// declared total class when one is present.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub problems: Vec<String>,
    pub stratum_sum: String,
    pub partition_checked: bool,
    pub partition_ok: bool,
}

pub fn validate(data: &ResolutionData) -> ValidationReport {
    let mut problems = Vec::new();
    if !data.strata.contains_key(&BTreeSet::new()) {
        problems.push("the open stratum (empty J) must be declared".to_string());
    }
    for key in data.strata.keys() {
        for &idx in key {
            if idx >= data.divisors.len() {
                problems.push(format!("stratum key references divisor index {idx}"));
            }
        }
    }
    let mut names = BTreeSet::new();
    for d in &data.divisors {
        if !names.insert(&d.name) {
            problems.push(format!("duplicate divisor name `{}`", d.name));
        }
    }
    let sum = data
        .strata
        .values()
        .fold(LRational::zero(), |acc, c| acc.add(c));
    let (partition_checked, partition_ok) = match &data.total_class {
        Some(total) => {
            let ok = *total == sum;
            if !ok {
                problems.push(format!(
                    "stratum classes sum to {sum}, declared total is {total}"
                ));
            }
            (true, ok)
        }
        None => (false, true),
    };
    ValidationReport {
        ok: problems.is_empty(),
        problems,
        stratum_sum: sum.to_string(),
        partition_checked,
        partition_ok,
    }
}

/// The normal-crossing motivic integral for the divisor `sum r_i D_i`:
/// `sum_J [D_J°] prod_{j in J, r_j > 0} (L-1)/(L^{r_j+1}-1)`.
///
/// Divisors with `r_j = 0` contribute no factor (an order-zero condition is
/// no condition); rational `r_j` are supported through fractional powers of
/// `L` and must be non-negative.
pub fn nc_integral(data: &ResolutionData, r: &[BigRational]) -> Result<LRational> {
    if r.len() != data.divisors.len() {
        return Err(Error::Invalid(format!(
            "expected {} multiplicities, got {}",
            data.divisors.len(),
            r.len()
        )));
    }
    if r.iter().any(|x| x.is_negative()) {
        return Err(Error::Invalid("multiplicities must be non-negative".into()));
    }
    let l = LRational::l();
    let one = LRational::one();
    let mut acc = LRational::zero();
    for (key, class) in &data.strata {
        let mut term = class.clone();
        for &j in key {
            if r[j].is_zero() {
                continue;
            }
            let exp = &r[j] + BigRational::one();
            let denom = LRational::l_pow(&exp).sub(&one);
            term = term.mul(&l.sub(&one).div(&denom)?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn to_rationals(r: &[u64]) -> Vec<BigRational> {
    r.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Measure of the multi-contact locus with orders exactly `r`:
/// `[D_J°] (L-1)^{|J|} L^{-sum r_j}` with `J = supp r`; zero when the
/// supporting stratum is empty.
pub fn contact_measure(data: &ResolutionData, r: &[u64]) -> Result<LRational> {
    if r.len() != data.divisors.len() {
        return Err(Error::Invalid(format!(
            "expected {} contact orders, got {}",
            data.divisors.len(),
            r.len()
        )));
    }
    let supp: BTreeSet<usize> = r
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, _)| i)
        .collect();
    let class = data.stratum(&supp);
    if class.is_zero() {
        return Ok(LRational::zero());
    }
    let lm1 = LRational::l().sub(&LRational::one());
    let total: u64 = r.iter().sum();
    let mut out = class;
    for _ in 0..supp.len() {
        out = out.mul(&lm1);
    }
    out = out.mul(&LRational::l_pow_int(-(total as i64)));
    Ok(out)
}

/// The motivic volume: the normal-crossing integral against the relative
/// canonical multiplicities `b`. Equal to the class of the base space.
pub fn motivic_volume(data: &ResolutionData) -> Result<LRational> {
    let b: Vec<u64> = data.divisors.iter().map(|d| d.b).collect();
    nc_integral(data, &to_rationals(&b))
}

/// Log canonical threshold outcome; the empty pair gets the distinct
/// infinite state rather than a number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Finite(BigRational),
    Infinite,
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::Finite(q) => write!(f, "{q}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

impl Threshold {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Threshold::Finite(q) => Some(q),
            Threshold::Infinite => None,
        }
    }
}

/// `lct = min over a_i > 0 of (b_i + 1)/a_i`; errors for the pair with the
/// empty subscheme (all `a_i = 0`), whose threshold is infinite.
pub fn lct_resolution(data: &ResolutionData) -> Result<BigRational> {
    let mut best: Option<BigRational> = None;
    for d in &data.divisors {
        if d.a == 0 {
            continue;
        }
        let v = BigRational::new(BigInt::from(d.b + 1), BigInt::from(d.a));
        best = Some(match best {
            None => v,
            Some(cur) => cur.min(v),
        });
    }
    best.ok_or_else(|| {
        Error::Invalid(
            "all divisors have a = 0: the pair (X, 0) has infinite threshold".into(),
        )
    })
}

/// Kawamata log terminal: `b_i - q a_i + 1 > 0` for every divisor.
pub fn klt_test(data: &ResolutionData, q: &BigRational) -> bool {
    data.divisors.iter().all(|d| discrepancy(d, q).is_positive())
}

/// Log canonical: `b_i - q a_i + 1 >= 0` for every divisor.
pub fn lc_test(data: &ResolutionData, q: &BigRational) -> bool {
    data.divisors.iter().all(|d| !discrepancy(d, q).is_negative())
}

fn discrepancy(d: &Divisor, q: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(d.b)) - q * BigRational::from_integer(BigInt::from(d.a))
        + BigRational::one()
}

/// Minimal log discrepancy over the marked locus, or minus infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mld {
    NegInfinity,
    Finite(BigRational),
}

impl std::fmt::Display for Mld {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mld::NegInfinity => write!(f, "-inf"),
            Mld::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// `mld = min over divisors with center in W of (b_i - q a_i + 1)`, set to
/// minus infinity as soon as the minimum goes negative.
pub fn mld(data: &ResolutionData, q: &BigRational) -> Result<Mld> {
    let mut best: Option<BigRational> = None;
    for d in data.divisors.iter().filter(|d| d.in_w) {
        let v = discrepancy(d, q);
        best = Some(match best {
            None => v,
            Some(cur) => cur.min(v),
        });
    }
    match best {
        None => Err(Error::Invalid(
            "no divisor has its center inside W; mld is undefined".into(),
        )),
        Some(v) if v.is_negative() => Ok(Mld::NegInfinity),
        Some(v) => Ok(Mld::Finite(v)),
    }
}

/// Comparison outcome for inversion of adjunction.
#[derive(Debug, Clone, Serialize)]
pub struct IoaReport {
    pub ambient: String,
    pub restricted: String,
    /// "equal", "ambient < restricted" or "ambient > restricted".
    pub relation: String,
    pub equal: bool,
}

/// Compares `mld(W; X, Y + D)` computed on the ambient dataset with
/// `mld(W; D, Y|_D)` computed on the restricted one.
pub fn ioa_compare(
    ambient: &ResolutionData,
    restricted: &ResolutionData,
    q: &BigRational,
) -> Result<IoaReport> {
    let a = mld(ambient, q)?;
    let r = mld(restricted, q)?;
    let relation = match (&a, &r) {
        (Mld::NegInfinity, Mld::NegInfinity) => "equal",
        (Mld::NegInfinity, Mld::Finite(_)) => "ambient < restricted",
        (Mld::Finite(_), Mld::NegInfinity) => "ambient > restricted",
        (Mld::Finite(x), Mld::Finite(y)) => match x.cmp(y) {
            std::cmp::Ordering::Less => "ambient < restricted",
            std::cmp::Ordering::Equal => "equal",
            std::cmp::Ordering::Greater => "ambient > restricted",
        },
    };
    Ok(IoaReport {
        ambient: a.to_string(),
        restricted: r.to_string(),
        relation: relation.to_string(),
        equal: relation == "equal",
    })
}

/// Codimensions of a multi-contact locus and of its image downstairs.
#[derive(Debug, Clone, Serialize)]
pub struct ContactCodim {
    pub codim_source: u64,
    pub codim_image: u64,
    pub nonempty: bool,
}

/// `codim Cont^nu = sum nu_i` upstairs and `sum nu_i (b_i + 1)` for the
/// image, provided the supporting stratum is nonempty.
pub fn contact_codim(data: &ResolutionData, nu: &[u64]) -> Result<ContactCodim> {
    if nu.len() != data.divisors.len() {
        return Err(Error::Invalid(format!(
            "expected {} contact orders, got {}",
            data.divisors.len(),
            nu.len()
        )));
    }
    let supp: BTreeSet<usize> = nu
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, _)| i)
        .collect();
    let nonempty = data.stratum_nonempty(&supp);
    let codim_source: u64 = nu.iter().sum();
    let codim_image: u64 = nu
        .iter()
        .zip(&data.divisors)
        .map(|(&v, d)| v * (d.b + 1))
        .sum();
    Ok(ContactCodim {
        codim_source,
        codim_image,
        nonempty,
    })
}

/// Minimal image codimension over all multi-indices with `sum nu_i a_i = p`
/// supported on a nonempty stratum; `None` when no multi-index qualifies.
pub fn contact_codim_p(data: &ResolutionData, p: u64) -> Result<Option<u64>> {
    if p == 0 {
        return Err(Error::Invalid("contact order must be positive".into()));
    }
    let mut best: Option<u64> = None;
    let k = data.divisors.len();
    let mut nu = vec![0u64; k];
    // bounded search: every entry is at most p
    fn rec(
        data: &ResolutionData,
        p: u64,
        idx: usize,
        remaining: u64,
        nu: &mut Vec<u64>,
        best: &mut Option<u64>,
    ) {
        if idx == nu.len() {
            if remaining != 0 {
                return;
            }
            let supp: BTreeSet<usize> = nu
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, _)| i)
                .collect();
            if !data.stratum_nonempty(&supp) {
                return;
            }
            let codim: u64 = nu
                .iter()
                .zip(&data.divisors)
                .map(|(&v, d)| v * (d.b + 1))
                .sum();
            *best = Some(match *best {
                None => codim,
                Some(cur) => cur.min(codim),
            });
            return;
        }
        let a = data.divisors[idx].a;
        let max = if a == 0 { p } else { remaining / a };
        for v in 0..=max {
            nu[idx] = v;
            rec(data, p, idx + 1, remaining - v * a, nu, best);
        }
        nu[idx] = 0;
    }
    rec(data, p, 0, p, &mut nu, &mut best);
    Ok(best)
}

/// Threshold recovered from image codimensions of contact loci:
/// `min over 1 <= p <= bound of codim_p / p`. Equals the resolution-side
/// threshold whenever every divisor's singleton stratum is nonempty and the
/// bound reaches the least common multiple of the `a_i`.
pub fn lct_via_contact(data: &ResolutionData, bound: u64) -> Result<Threshold> {
    let mut best: Option<BigRational> = None;
    for p in 1..=bound {
        if let Some(codim) = contact_codim_p(data, p)? {
            let v = BigRational::new(BigInt::from(codim), BigInt::from(p));
            best = Some(match best {
                None => v,
                Some(cur) => cur.min(v),
            });
        }
    }
    Ok(match best {
        None => Threshold::Infinite,
        Some(v) => Threshold::Finite(v),
    })
}

/// Rational-singularities criterion for a locally complete intersection of
/// codimension `c`, evaluated on a dataset listing the exceptional divisors
/// of a resolution that dominates the blowup along the subscheme (the
/// blowup's own exceptional divisor carries the flag): true iff
/// `b_i >= c * a_i` for every non-flagged divisor.
pub fn rational_sing_lci_test(data: &ResolutionData, c: u64) -> Result<bool> {
    let flagged = data
        .divisors
        .iter()
        .filter(|d| d.is_blowup_exceptional)
        .count();
    if flagged != 1 {
        return Err(Error::Invalid(format!(
            "exactly one divisor must be flagged is_blowup_exceptional, found {flagged}"
        )));
    }
    Ok(data
        .divisors
        .iter()
        .filter(|d| !d.is_blowup_exceptional)
        .all(|d| d.b >= c * d.a))
}

/// Symbolic consistency of the single-divisor integral with its that-many
/// term expansion: `nc_integral(r) = [D°_empty] + [D°](L-1) * (geom(r+1)-1)`
/// where both sides collapse by the geometric series in closed form.
pub fn single_divisor_series_identity(data: &ResolutionData, r: u64) -> Result<bool> {
    if data.divisors.len() != 1 {
        return Err(Error::Invalid("identity needs exactly one divisor".into()));
    }
    let closed = nc_integral(data, &to_rationals(&[r]))?;
    let open = data.stratum(&BTreeSet::new());
    let dd: BTreeSet<usize> = [0].into_iter().collect();
    let div_class = data.stratum(&dd);
    let lm1 = LRational::l().sub(&LRational::one());
    let tail = div_class
        .mul(&lm1)
        .mul(&geometric_series(r + 1)?.sub(&LRational::one()));
    Ok(closed == open.add(&tail))
}

/// Virtual dimension of the motivic volume (must equal the ambient
/// dimension on every shipped dataset).
pub fn volume_dimension(data: &ResolutionData) -> Result<VirtualDim> {
    Ok(motivic_volume(data)?.virtual_dim())
}
