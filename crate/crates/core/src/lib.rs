//! mint-core: exact arithmetic for desk-scale motivic integration.
//!
//! The toolkit has six subsystems:
//!
//! * [`gring`] — rational functions in the Lefschetz class `L` (with
//!   fractional exponents), virtual dimension, geometric series, and the
//!   Hodge–Deligne specialization `L -> uv`.
//! * [`poly`] — sparse multivariate polynomials over ℤ, ℚ and prime fields,
//!   with a parser, derivatives and degree-reverse-lexicographic leading
//!   terms for jet variable orders.
//! * [`jet`] — jet-scheme equation generation by truncated power-series
//!   substitution, fibers over a base point, the homogeneous shift
//!   isomorphism and the initial-term identity.
//! * [`count`] — exhaustive point counting over prime fields: jet schemes,
//!   contact loci, counts over a base locus, dimension estimates from
//!   several primes, and the blowup fibration check.
//! * [`resolution`] — combinatorial log-resolution data and every invariant
//!   evaluated on it: normal-crossing motivic integrals, motivic volume,
//!   log canonical thresholds, KLT/LC tests, minimal log discrepancies and
//!   contact-locus codimensions.
//! * [`invariants`] — jet-side log canonical thresholds from dimension
//!   tables, bounds, and cross-validation against resolution data.

pub mod count;
pub mod error;
pub mod gring;
pub mod invariants;
pub mod jet;
pub mod poly;
pub mod resolution;

pub use error::{Error, Result};
