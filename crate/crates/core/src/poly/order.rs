//! Degree-reverse-lexicographic monomial comparison.
//!
//! The registry's storage order is the descending variable order. For jet
//! registries that is "first by upper index and then by lower": all level-0
//! variables outrank all level-1 variables, and within one level `x1` is the
//! largest. Under degrevlex a monomial is large when it has higher total
//! degree, or on ties when it avoids the cheap (late) variables; e.g. with
//! `x1 > x2 > x3` one has `x2^4 > x1^3*x3 > x1^2*x2*x3`.

use super::MultiPoly;
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Compares two exponent vectors (over the same registry) in degrevlex.
pub fn degrevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // Ties: scan from the cheapest variable backwards; the monomial with the
    // smaller exponent at the last difference is the larger one.
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// The unique maximal term of a nonzero polynomial under degrevlex with the
/// registry's jet variable order, returned as a one-term polynomial.
pub fn leading_term_degrevlex(f: &MultiPoly) -> Result<MultiPoly> {
    if f.is_zero() {
        return Err(Error::Invalid(
            "the zero polynomial has no leading term".into(),
        ));
    }
    let (exps, coeff) = f
        .terms()
        .max_by(|(ea, _), (eb, _)| degrevlex_cmp(ea, eb))
        .unwrap();
    Ok(MultiPoly::monomial(
        f.domain(),
        f.registry().clone(),
        exps.clone(),
        coeff.clone(),
    ))
}
