//! Jet-side log canonical thresholds and their bounds.
//!
//! The threshold of a pair can be read off the growth of jet-scheme
//! dimensions: `lct = n - sup_m dim J_m / (m+1)`, the supremum being
//! attained whenever `m+1` is divisible by every multiplicity `a_i` of a log
//! resolution. Dimension tables are built either from structure (linear
//! equations, products, homogeneous shifts) or from point counts at several
//! primes, accepted only when the estimates agree across all prime pairs.

use crate::count::{count_jets_over_locus, estimate_dim, CountOptions, DimEstimate};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::resolution::{klt_test, lct_resolution, ResolutionData, Threshold};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Where a dimension entry came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum DimSource {
    ExactByStructure,
    CountEstimate { primes: Vec<u32> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetDimEntry {
    pub m: usize,
    pub dim: u64,
    #[serde(flatten)]
    pub source: DimSource,
}

/// Dimensions of the jet schemes of one subscheme, by level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetDimTable {
    pub n: usize,
    pub entries: Vec<JetDimEntry>,
}

impl JetDimTable {
    /// Checks the structural bounds: each dimension is at most `(m+1) n`,
    /// and at least `(m+1) dim Y` when the subscheme dimension is known.
    pub fn check(&self, dim_y: Option<u64>) -> Result<()> {
        for e in &self.entries {
            let cap = (e.m as u64 + 1) * self.n as u64;
            if e.dim > cap {
                return Err(Error::Validation(format!(
                    "dim J_{} = {} exceeds (m+1) n = {cap}",
                    e.m, e.dim
                )));
            }
            if let Some(dy) = dim_y {
                let floor = (e.m as u64 + 1) * dy;
                if e.dim < floor {
                    return Err(Error::Validation(format!(
                        "dim J_{} = {} is below (m+1) dim Y = {floor}",
                        e.m, e.dim
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `n - max_m dim/(m+1)` together with the levels attaining the maximum.
/// An upper bound for the threshold in general; exact when some `m+1` in the
/// table is divisible by all multiplicities of a log resolution.
pub fn lct_from_jet_dims(table: &JetDimTable) -> Result<(BigRational, Vec<usize>)> {
    if table.entries.is_empty() {
        return Err(Error::Invalid("empty dimension table".into()));
    }
    let ratio = |e: &JetDimEntry| {
        BigRational::new(BigInt::from(e.dim), BigInt::from(e.m as u64 + 1))
    };
    let max = table.entries.iter().map(ratio).max().unwrap();
    let certified: Vec<usize> = table
        .entries
        .iter()
        .filter(|e| ratio(e) == max)
        .map(|e| e.m)
        .collect();
    let value = BigRational::from_integer(BigInt::from(table.n as u64)) - max;
    Ok((value, certified))
}

/// KLT via jet dimensions: `dim J_m < (m+1)(n - q)` for every table entry.
pub fn klt_jet_test(table: &JetDimTable, q: &BigRational) -> bool {
    jet_test(table, q, true)
}

/// LC via jet dimensions: the weak inequality.
pub fn lc_jet_test(table: &JetDimTable, q: &BigRational) -> bool {
    jet_test(table, q, false)
}

fn jet_test(table: &JetDimTable, q: &BigRational, strict: bool) -> bool {
    table.entries.iter().all(|e| {
        let lhs = BigRational::from_integer(BigInt::from(e.dim));
        let rhs = BigRational::from_integer(BigInt::from(e.m as u64 + 1))
            * (BigRational::from_integer(BigInt::from(table.n as u64)) - q);
        if strict {
            lhs < rhs
        } else {
            lhs <= rhs
        }
    })
}

/// Bounds from the maximal local multiplicity: `1/a <= lct <= n/a`.
pub fn lct_bounds_mult(a: u64, n: u64) -> (BigRational, BigRational) {
    assert!(a >= 1);
    (
        BigRational::new(BigInt::from(1), BigInt::from(a)),
        BigRational::new(BigInt::from(n), BigInt::from(a)),
    )
}

/// Lower bound for a homogeneous hypersurface of degree `d` with singular
/// locus of dimension `r`: `min((n - r)/d, 1)`.
pub fn lct_bound_homogeneous(n: u64, d: u64, r: u64) -> BigRational {
    assert!(d >= 1 && r < n);
    let bound = BigRational::new(BigInt::from(n - r), BigInt::from(d));
    let one = BigRational::from_integer(BigInt::from(1));
    bound.min(one)
}

/// Threshold around a locus from dimensions counted over it; the empty table
/// (no jets over the locus) reports the infinite sentinel.
pub fn lct_around_locus(table: &JetDimTable) -> Threshold {
    match lct_from_jet_dims(table) {
        Ok((v, _)) => Threshold::Finite(v),
        Err(_) => Threshold::Infinite,
    }
}

/// Outcome of the two-pipeline comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub lct_resolution: String,
    pub lct_jets: String,
    pub certified_at: Vec<usize>,
    pub lct_agree: bool,
    /// (q, resolution-side KLT, jet-side KLT) for each disagreement.
    pub klt_discrepancies: Vec<(String, bool, bool)>,
    pub ok: bool,
}

/// Verifies that the resolution-side and jet-side thresholds agree and that
/// the KLT tests coincide on a grid of coefficients `k/denominator`.
pub fn cross_check(
    data: &ResolutionData,
    table: &JetDimTable,
    grid_denominator: u64,
    grid_max_numerator: u64,
) -> Result<CrossCheckReport> {
    let res_lct = lct_resolution(data)?;
    let (jet_lct, certified_at) = lct_from_jet_dims(table)?;
    let lct_agree = res_lct == jet_lct;
    let mut klt_discrepancies = Vec::new();
    for k in 0..=grid_max_numerator {
        let q = BigRational::new(BigInt::from(k), BigInt::from(grid_denominator));
        let res_klt = klt_test(data, &q);
        let jet_klt = klt_jet_test(table, &q);
        if res_klt != jet_klt {
            klt_discrepancies.push((q.to_string(), res_klt, jet_klt));
        }
    }
    let ok = lct_agree && klt_discrepancies.is_empty();
    Ok(CrossCheckReport {
        lct_resolution: res_lct.to_string(),
        lct_jets: jet_lct.to_string(),
        certified_at,
        lct_agree,
        klt_discrepancies,
        ok,
    })
}

/// Per-level outcome of the count-based table builder.
#[derive(Debug, Clone, Serialize)]
pub enum TableBuild {
    Accepted { m: usize, dim: u64 },
    RejectedUnstable { m: usize, estimates: Vec<(u32, u32, i64)> },
    Empty { m: usize },
}

/// Builds a dimension table by counting jets (optionally over a base locus)
/// at each prime. Entries are accepted only when the dimension estimate is
/// stable across all prime pairs; unstable levels are reported so the caller
/// can add primes.
pub fn build_table_from_counts(
    gens: &[MultiPoly],
    base_locus: &[MultiPoly],
    n: usize,
    levels: &[usize],
    primes: &[u32],
    opts: CountOptions,
) -> Result<(JetDimTable, Vec<TableBuild>)> {
    if primes.len() < 2 {
        return Err(Error::Invalid(
            "dimension certification needs at least two primes".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut outcomes = Vec::new();
    for &m in levels {
        let counts: Vec<(u32, num_bigint::BigUint)> = primes
            .iter()
            .map(|&p| {
                count_jets_over_locus(gens, base_locus, m, p, opts).map(|r| (p, r.count))
            })
            .collect::<Result<_>>()?;
        match estimate_dim(&counts)? {
            DimEstimate::Empty => outcomes.push(TableBuild::Empty { m }),
            DimEstimate::Estimate {
                dim,
                stable,
                pairwise,
            } => {
                if stable && dim >= 0 {
                    entries.push(JetDimEntry {
                        m,
                        dim: dim as u64,
                        source: DimSource::CountEstimate {
                            primes: primes.to_vec(),
                        },
                    });
                    outcomes.push(TableBuild::Accepted { m, dim: dim as u64 });
                } else {
                    outcomes.push(TableBuild::RejectedUnstable {
                        m,
                        estimates: pairwise,
                    });
                }
            }
        }
    }
    Ok((JetDimTable { n, entries }, outcomes))
}

/// Merges two tables along the product rule `dim J_m(Y x Y') = dim J_m(Y) +
/// dim J_m(Y')`, keeping levels present in both.
pub fn product_table(a: &JetDimTable, b: &JetDimTable) -> JetDimTable {
    let mut entries = Vec::new();
    for ea in &a.entries {
        if let Some(eb) = b.entries.iter().find(|e| e.m == ea.m) {
            entries.push(JetDimEntry {
                m: ea.m,
                dim: ea.dim + eb.dim,
                source: DimSource::ExactByStructure,
            });
        }
    }
    JetDimTable {
        n: a.n + b.n,
        entries,
    }
}
