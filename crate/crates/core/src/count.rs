//! Exhaustive point counting over prime fields.
//!
//! The verification engine: jet schemes, contact loci and blowup jet maps
//! are counted point by point over `F_p^N`, specializing motivic identities
//! at `L = q`. Enumeration runs an odometer with the `x^(0)` block outermost
//! so base-locus constraints prune whole inner blocks, and shards the index
//! range across threads; shards share nothing and the reducer is a sum, so
//! parallel and serial runs agree exactly.

use crate::error::{Error, Result};
use crate::jet::{jet_system, lift_to_level_zero};
use crate::poly::{is_prime, Domain, MultiPoly};
use num_bigint::BigUint;
use serde::Serialize;
use std::time::Instant;

/// Default enumeration budget: `p^N` must stay within `2^32` points.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

/// A finite-field enumeration request.
#[derive(Debug, Clone)]
pub struct CountQuery {
    pub prime: u32,
    pub nvars: usize,
    /// Every equation must vanish.
    pub equations: Vec<MultiPoly>,
    /// Every inequation must be nonzero.
    pub inequations: Vec<MultiPoly>,
    /// Number of leading variables forming the base block (0 = none).
    pub base_vars: usize,
    /// Constraints on the base block only; failure skips the whole block.
    pub base_equations: Vec<MultiPoly>,
    pub budget: u128,
    pub shards: usize,
}

impl CountQuery {
    pub fn new(prime: u32, nvars: usize, equations: Vec<MultiPoly>) -> Self {
        CountQuery {
            prime,
            nvars,
            equations,
            inequations: Vec::new(),
            base_vars: 0,
            base_equations: Vec::new(),
            budget: DEFAULT_BUDGET,
            shards: default_shards(),
        }
    }
}

pub fn default_shards() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Exact enumeration result.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    /// Serialized as a decimal string to keep the JSON exact.
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
    pub p: u32,
    pub vars: usize,
    pub seconds: f64,
    pub shards: usize,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Flat term list for the evaluation hot loop.
struct Compiled {
    /// (coefficient, [(variable index, exponent)])
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn build(poly: &MultiPoly, p: u64) -> Result<Compiled> {
        match poly.domain() {
            Domain::PrimeField(q) if q as u64 == p => {}
            _ => {
                return Err(Error::Domain(
                    "counting requires polynomials over the query's prime field".into(),
                ))
            }
        }
        let mut terms = Vec::with_capacity(poly.num_terms());
        for (exps, c) in poly.terms() {
            let c = match c {
                crate::poly::Coeff::Fp(v) => *v,
                _ => unreachable!(),
            };
            let factors: Vec<(usize, u32)> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect();
            terms.push((c, factors));
        }
        Ok(Compiled { terms })
    }

    #[inline]
    fn eval(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                let x = point[i];
                if x == 0 {
                    t = 0;
                    break;
                }
                for _ in 0..e {
                    t = (t * x) % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

fn checked_space(p: u32, nvars: usize, budget: u128) -> Result<u128> {
    let mut space: u128 = 1;
    for _ in 0..nvars {
        space = space.checked_mul(p as u128).ok_or_else(|| Error::Budget {
            p,
            nvars,
            space: "overflow".into(),
            budget: budget.to_string(),
        })?;
    }
    if space > budget {
        return Err(Error::Budget {
            p,
            nvars,
            space: space.to_string(),
            budget: budget.to_string(),
        });
    }
    Ok(space)
}

/// Counts the points of `F_p^N` satisfying all equations and inequations.
pub fn count_points(query: &CountQuery) -> Result<CountReport> {
    let p = query.prime;
    if !is_prime(p) || p >= 1 << 16 {
        return Err(Error::Domain(format!("{p} is not a prime below 2^16")));
    }
    for eq in query.equations.iter().chain(&query.inequations) {
        if eq.registry().len() != query.nvars {
            return Err(Error::Invalid(
                "equation registry size disagrees with the variable count".into(),
            ));
        }
    }
    for eq in &query.base_equations {
        if !eq.uses_only_first_vars(query.base_vars) {
            return Err(Error::Invalid(
                "base-locus equations may only involve the base block".into(),
            ));
        }
    }
    let space = checked_space(p, query.nvars, query.budget)?;
    let started = Instant::now();

    let eqs: Vec<Compiled> = query
        .equations
        .iter()
        .map(|e| Compiled::build(e, p as u64))
        .collect::<Result<_>>()?;
    let ineqs: Vec<Compiled> = query
        .inequations
        .iter()
        .map(|e| Compiled::build(e, p as u64))
        .collect::<Result<_>>()?;
    let base_eqs: Vec<Compiled> = query
        .base_equations
        .iter()
        .map(|e| Compiled::build(e, p as u64))
        .collect::<Result<_>>()?;

    // Inner block size: everything below the base block.
    let inner: u128 = (p as u128).pow((query.nvars - query.base_vars.min(query.nvars)) as u32);
    let shards = query.shards.max(1).min(usize::MAX);
    let ctx = EnumCtx {
        p: p as u64,
        nvars: query.nvars,
        eqs: &eqs,
        ineqs: &ineqs,
        base_eqs: &base_eqs,
        inner,
    };

    let total: u64 = if shards == 1 || space < 4096 {
        count_range(&ctx, 0, space)
    } else {
        let shards = shards.min(space.max(1) as usize);
        let chunk = space / shards as u128;
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for s in 0..shards {
                let start = s as u128 * chunk;
                let end = if s + 1 == shards {
                    space
                } else {
                    start + chunk
                };
                let ctx = &ctx;
                handles.push(scope.spawn(move || count_range(ctx, start, end)));
            }
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };

    Ok(CountReport {
        count: BigUint::from(total),
        p,
        vars: query.nvars,
        seconds: started.elapsed().as_secs_f64(),
        shards,
    })
}

struct EnumCtx<'a> {
    p: u64,
    nvars: usize,
    eqs: &'a [Compiled],
    ineqs: &'a [Compiled],
    base_eqs: &'a [Compiled],
    inner: u128,
}

/// Counts indices in `[start, end)`; the point of index `i` has the base-`p`
/// digits of `i`, most significant digit = variable 0.
fn count_range(ctx: &EnumCtx, start: u128, end: u128) -> u64 {
    let mut point = decode(ctx.p, ctx.nvars, start);
    let mut idx = start;
    let mut count = 0u64;
    while idx < end {
        // At a base-block boundary, test the base constraints once and skip
        // the entire inner block on failure.
        if !ctx.base_eqs.is_empty() && idx % ctx.inner == 0 {
            if !ctx.base_eqs.iter().all(|e| e.eval(&point, ctx.p) == 0) {
                idx += ctx.inner;
                if idx < end {
                    point = decode(ctx.p, ctx.nvars, idx);
                }
                continue;
            }
        }
        let ok = ctx.eqs.iter().all(|e| e.eval(&point, ctx.p) == 0)
            && ctx.ineqs.iter().all(|e| e.eval(&point, ctx.p) != 0);
        if ok {
            count += 1;
        }
        idx += 1;
        if idx < end {
            increment(ctx.p, &mut point);
        }
    }
    count
}

fn decode(p: u64, nvars: usize, mut idx: u128) -> Vec<u64> {
    let mut point = vec![0u64; nvars];
    for i in (0..nvars).rev() {
        point[i] = (idx % p as u128) as u64;
        idx /= p as u128;
    }
    point
}

#[inline]
fn increment(p: u64, point: &mut [u64]) {
    for d in point.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return;
        }
        *d = 0;
    }
}

/// Options shared by the jet-counting entry points.
#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub budget: u128,
    pub shards: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            shards: default_shards(),
        }
    }
}

/// Number of `F_p`-points of the level-`m` jet scheme of the subscheme cut
/// out by `gens`.
pub fn count_jets(
    gens: &[MultiPoly],
    m: usize,
    p: u32,
    opts: CountOptions,
) -> Result<CountReport> {
    let sys = jet_system(gens, m)?;
    let fp = Domain::prime_field(p)?;
    let equations = sys
        .flat_equations()
        .iter()
        .map(|e| e.to_domain(fp))
        .collect::<Result<Vec<_>>>()?;
    let mut q = CountQuery::new(p, sys.registry.len(), equations);
    q.base_vars = sys.n;
    q.budget = opts.budget;
    q.shards = opts.shards;
    count_points(&q)
}

/// Contact-order counting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactMode {
    /// `ord = s` exactly.
    Exact,
    /// `ord >= s`.
    AtLeast,
}

/// Counts level-`m` jets with prescribed contact order along `f = 0`:
/// `f^(j) = 0` for `j < s`, and in exact mode additionally `f^(s) != 0`.
/// `s = m + 1` is allowed only in at-least mode.
pub fn count_contact(
    f: &MultiPoly,
    s: usize,
    m: usize,
    p: u32,
    mode: ContactMode,
    opts: CountOptions,
) -> Result<CountReport> {
    if s > m + 1 || (s == m + 1 && mode == ContactMode::Exact) {
        return Err(Error::Invalid(format!(
            "contact order s = {s} out of range for level m = {m} in {mode:?} mode"
        )));
    }
    let sys = jet_system(&[f.clone()], m)?;
    let fp = Domain::prime_field(p)?;
    let all: Vec<MultiPoly> = sys.equations[0]
        .iter()
        .map(|e| e.to_domain(fp))
        .collect::<Result<_>>()?;
    let equations = all[..s].to_vec();
    let inequations = match mode {
        ContactMode::Exact => vec![all[s].clone()],
        ContactMode::AtLeast => Vec::new(),
    };
    let mut q = CountQuery::new(p, sys.registry.len(), equations);
    q.inequations = inequations;
    q.base_vars = sys.n;
    q.budget = opts.budget;
    q.shards = opts.shards;
    count_points(&q)
}

/// Counts jets of the subscheme whose base point lies on the locus cut out
/// by `base_locus_gens` (polynomials in the base variables).
pub fn count_jets_over_locus(
    gens: &[MultiPoly],
    base_locus_gens: &[MultiPoly],
    m: usize,
    p: u32,
    opts: CountOptions,
) -> Result<CountReport> {
    let sys = jet_system(gens, m)?;
    let fp = Domain::prime_field(p)?;
    let equations = sys
        .flat_equations()
        .iter()
        .map(|e| e.to_domain(fp))
        .collect::<Result<Vec<_>>>()?;
    let base_equations = base_locus_gens
        .iter()
        .map(|h| lift_to_level_zero(h, &sys.registry)?.to_domain(fp))
        .collect::<Result<Vec<_>>>()?;
    let mut q = CountQuery::new(p, sys.registry.len(), equations);
    q.base_vars = sys.n;
    q.base_equations = base_equations;
    q.budget = opts.budget;
    q.shards = opts.shards;
    count_points(&q)
}

/// Outcome of a dimension estimate from counts at several primes.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum DimEstimate {
    /// Some count was zero: the scheme has no points to estimate from.
    Empty,
    Estimate {
        dim: i64,
        /// True when every prime pair rounds to the same dimension.
        stable: bool,
        pairwise: Vec<(u32, u32, i64)>,
    },
}

/// Heuristic inverse of the point-count growth `N_p ~ C p^d`: estimates `d`
/// from the two largest primes and flags whether all pairs agree.
pub fn estimate_dim(counts: &[(u32, BigUint)]) -> Result<DimEstimate> {
    if counts.len() < 2 {
        return Err(Error::Invalid(
            "dimension estimation needs counts at two or more primes".into(),
        ));
    }
    let mut sorted: Vec<(u32, BigUint)> = counts.to_vec();
    sorted.sort_by_key(|(p, _)| *p);
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Invalid("primes must be distinct".into()));
        }
    }
    if sorted.iter().any(|(_, c)| c == &BigUint::from(0u32)) {
        return Ok(DimEstimate::Empty);
    }
    let est = |a: &(u32, BigUint), b: &(u32, BigUint)| -> i64 {
        let (p1, n1) = (a.0 as f64, biguint_to_f64(&a.1));
        let (p2, n2) = (b.0 as f64, biguint_to_f64(&b.1));
        ((n2 / n1).ln() / (p2 / p1).ln()).round() as i64
    };
    let mut pairwise = Vec::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            pairwise.push((sorted[i].0, sorted[j].0, est(&sorted[i], &sorted[j])));
        }
    }
    let top = est(&sorted[sorted.len() - 2], &sorted[sorted.len() - 1]);
    let stable = pairwise.iter().all(|&(_, _, d)| d == top);
    Ok(DimEstimate::Estimate {
        dim: top,
        stable,
        pairwise,
    })
}

fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_string().parse::<f64>().unwrap_or(f64::MAX)
}

/// Report of the blowup fibration check on the standard chart of the blowup
/// of the origin in affine `n`-space.
#[derive(Debug, Clone, Serialize)]
pub struct FibrationReport {
    pub n: usize,
    pub e: usize,
    pub m: usize,
    pub p: u32,
    pub jets: u64,
    pub fibers: u64,
    pub expected_fiber_size: u64,
    pub fiber_sizes_ok: bool,
    pub truncation_ok: bool,
    pub passed: bool,
    /// First offending image, if any (coefficient vector of the image jet).
    pub counterexample: Option<Vec<u64>>,
}

/// Enumerates all level-`m` jets on the chart `(x0, z1, .., z_{n-1})` of the
/// blowup of the origin, with contact order along the relative canonical
/// divisor exactly `e` (the chart map is `x0 -> x0, x_i -> x0 z_i`, whose
/// Jacobian determinant is `x0^(n-1)`). Groups jets by their image and
/// verifies that every nonempty fiber has exactly `p^e` points and that all
/// members of one fiber agree after truncation to level `m - e`.
pub fn blowup_fibration_check(
    n: usize,
    e: usize,
    m: usize,
    p: u32,
    opts: CountOptions,
) -> Result<FibrationReport> {
    if n < 2 {
        return Err(Error::Invalid("ambient dimension must be at least 2".into()));
    }
    if e % (n - 1) != 0 {
        return Err(Error::Invalid(format!(
            "contact order e = {e} must be divisible by n - 1 = {}",
            n - 1
        )));
    }
    if m < 2 * e {
        return Err(Error::Invalid(format!("level m = {m} must be at least 2e = {}", 2 * e)));
    }
    if !is_prime(p) || p >= 1 << 16 {
        return Err(Error::Domain(format!("{p} is not a prime below 2^16")));
    }
    checked_space(p, n * (m + 1), opts.budget)?;
    let ord = e / (n - 1); // vanishing order of the x0 coordinate
    let pu = p as u64;

    // jets: a-part has coefficients a_ord..a_m with a_ord != 0;
    // each z-part has m+1 free coefficients.
    let a_free = m - ord; // beyond the leading one
    let z_free = (n - 1) * (m + 1);
    let mut groups: std::collections::HashMap<Vec<u64>, (u64, Vec<u64>, bool)> =
        std::collections::HashMap::new();
    let mut jets: u64 = 0;

    let mut a_coeffs = vec![0u64; m + 1];
    let mut z_coeffs = vec![0u64; z_free];

    let a_space = (pu - 1) as u128 * (pu as u128).pow(a_free as u32);
    let z_space = (pu as u128).pow(z_free as u32);

    for ai in 0..a_space {
        // leading coefficient in 1..p, the rest free
        let mut rest = ai;
        let lead = (rest % (pu - 1) as u128) as u64 + 1;
        rest /= (pu - 1) as u128;
        for c in a_coeffs.iter_mut() {
            *c = 0;
        }
        a_coeffs[ord] = lead;
        for k in 0..a_free {
            a_coeffs[ord + 1 + k] = (rest % pu as u128) as u64;
            rest /= pu as u128;
        }
        for zi in 0..z_space {
            let mut rest = zi;
            for c in z_coeffs.iter_mut() {
                *c = (rest % pu as u128) as u64;
                rest /= pu as u128;
            }
            jets += 1;

            // image: (a, trunc(a*z_1), ..., trunc(a*z_{n-1}))
            let mut image = Vec::with_capacity(n * (m + 1));
            image.extend_from_slice(&a_coeffs);
            for zb in 0..n - 1 {
                let z = &z_coeffs[zb * (m + 1)..(zb + 1) * (m + 1)];
                for t in 0..=m {
                    let mut acc = 0u64;
                    for i in 0..=t {
                        acc = (acc + a_coeffs[i] * z[t - i]) % pu;
                    }
                    image.push(acc);
                }
            }

            // truncation of the source jet to level m - e
            let keep = m - e + 1;
            let mut truncated = Vec::with_capacity(n * keep);
            truncated.extend_from_slice(&a_coeffs[..keep]);
            for zb in 0..n - 1 {
                truncated.extend_from_slice(&z_coeffs[zb * (m + 1)..zb * (m + 1) + keep]);
            }

            match groups.get_mut(&image) {
                None => {
                    groups.insert(image, (1, truncated, true));
                }
                Some((count, repr, agree)) => {
                    *count += 1;
                    if *agree && *repr != truncated {
                        *agree = false;
                    }
                }
            }
        }
    }

    let expected = pu.pow(e as u32);
    let mut fiber_sizes_ok = true;
    let mut truncation_ok = true;
    let mut counterexample = None;
    for (image, (count, _, agree)) in &groups {
        if *count != expected {
            fiber_sizes_ok = false;
            counterexample.get_or_insert_with(|| image.clone());
        }
        if !*agree {
            truncation_ok = false;
            counterexample.get_or_insert_with(|| image.clone());
        }
    }
    let passed = fiber_sizes_ok && truncation_ok;
    Ok(FibrationReport {
        n,
        e,
        m,
        p,
        jets,
        fibers: groups.len() as u64,
        expected_fiber_size: expected,
        fiber_sizes_ok,
        truncation_ok,
        passed,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::base_registry;
    use crate::poly::parse_poly;

    fn fp_poly(s: &str, n: usize, p: u32) -> MultiPoly {
        let r = base_registry(n);
        parse_poly(s, &r)
            .unwrap()
            .to_domain(Domain::prime_field(p).unwrap())
            .unwrap()
    }

    fn serial() -> CountOptions {
        CountOptions {
            budget: DEFAULT_BUDGET,
            shards: 1,
        }
    }

    #[test]
    fn line_in_the_plane() {
        let f = fp_poly("x1", 2, 3);
        let q = CountQuery::new(3, 2, vec![f]);
        assert_eq!(count_points(&q).unwrap().count, BigUint::from(3u32));
    }

    #[test]
    fn node_curve_points() {
        let f = fp_poly("x1*x2", 2, 2);
        let q = CountQuery::new(2, 2, vec![f]);
        assert_eq!(count_points(&q).unwrap().count, BigUint::from(3u32));
    }

    #[test]
    fn inequation_only() {
        let f = fp_poly("x1", 1, 5);
        let mut q = CountQuery::new(5, 1, vec![]);
        q.inequations = vec![f];
        assert_eq!(count_points(&q).unwrap().count, BigUint::from(4u32));
    }

    #[test]
    fn budget_violation() {
        let f = fp_poly("x1", 2, 3);
        let mut q = CountQuery::new(3, 2, vec![f]);
        q.budget = 8;
        assert!(matches!(count_points(&q), Err(Error::Budget { .. })));
    }

    #[test]
    fn jets_of_a_line_are_affine() {
        // Y = {x=0} in A^2, m = 2, p = 2: 2^(1*(2+1)) = 8
        let r = base_registry(2);
        let f = parse_poly("x1", &r).unwrap();
        let rep = count_jets(&[f], 2, 2, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(8u32));
    }

    #[test]
    fn jets_of_empty_scheme() {
        let r = base_registry(2);
        let one = parse_poly("1", &r).unwrap();
        let rep = count_jets(&[one], 1, 3, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(0u32));
    }

    #[test]
    fn jets_of_node_level_one() {
        let r = base_registry(2);
        let f = parse_poly("x1*x2", &r).unwrap();
        let rep = count_jets(&[f], 1, 2, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(8u32));
    }

    #[test]
    fn contact_counts_on_the_line() {
        // X = A^1, Y = {0}: exact order 1 at level 1 over F_3 -> q - 1 = 2
        let r = base_registry(1);
        let f = parse_poly("x1", &r).unwrap();
        let rep = count_contact(&f, 1, 1, 3, ContactMode::Exact, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(2u32));
        // s = 0 exact at level 0 over F_5: base point off Y -> 4
        let rep = count_contact(&f, 0, 0, 5, ContactMode::Exact, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(4u32));
    }

    #[test]
    fn contact_partition_node() {
        // sum over exact orders + tail = p^(n(m+1)) for f = xy, m = 2, p = 2
        let r = base_registry(2);
        let f = parse_poly("x1*x2", &r).unwrap();
        let mut total = BigUint::from(0u32);
        for s in 0..=2 {
            total += count_contact(&f, s, 2, 2, ContactMode::Exact, serial())
                .unwrap()
                .count;
        }
        total += count_contact(&f, 3, 2, 2, ContactMode::AtLeast, serial())
            .unwrap()
            .count;
        assert_eq!(total, BigUint::from(64u32));
    }

    #[test]
    fn over_locus_counts() {
        // Y = {x=0} in A^2, H = {y=0}, m=1, p=3: x0=x1=y0=0, y1 free -> 3
        let r = base_registry(2);
        let f = parse_poly("x1", &r).unwrap();
        let h = parse_poly("x2", &r).unwrap();
        let rep = count_jets_over_locus(&[f.clone()], &[h], 1, 3, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(3u32));

        // no constraints = plain jet count
        let rep = count_jets_over_locus(&[f.clone()], &[], 1, 3, serial()).unwrap();
        assert_eq!(rep.count, count_jets(&[f], 1, 3, serial()).unwrap().count);

        // node over the origin, m=1, p=2: x0 = y0 = 0 -> 4
        let fxy = parse_poly("x1*x2", &r).unwrap();
        let hx = parse_poly("x1", &r).unwrap();
        let hy = parse_poly("x2", &r).unwrap();
        let rep = count_jets_over_locus(&[fxy], &[hx, hy], 1, 2, serial()).unwrap();
        assert_eq!(rep.count, BigUint::from(4u32));
    }

    #[test]
    fn dimension_estimates() {
        // exact powers: J_2(A^1) has 8 @ 2 and 27 @ 3 -> dim 3, stable
        let counts = vec![
            (2u32, BigUint::from(8u32)),
            (3u32, BigUint::from(27u32)),
        ];
        match estimate_dim(&counts).unwrap() {
            DimEstimate::Estimate { dim, stable, .. } => {
                assert_eq!(dim, 3);
                assert!(stable);
            }
            other => panic!("unexpected {other:?}"),
        }
        // empty scheme
        let counts = vec![(2u32, BigUint::from(0u32)), (3u32, BigUint::from(0u32))];
        assert_eq!(estimate_dim(&counts).unwrap(), DimEstimate::Empty);
    }

    #[test]
    fn node_dimension_from_three_primes() {
        let r = base_registry(2);
        let f = parse_poly("x1*x2", &r).unwrap();
        let counts: Vec<(u32, BigUint)> = [2u32, 3, 5]
            .iter()
            .map(|&p| (p, count_jets(&[f.clone()], 1, p, serial()).unwrap().count))
            .collect();
        assert_eq!(counts[0].1, BigUint::from(8u32));
        assert_eq!(counts[1].1, BigUint::from(21u32));
        assert_eq!(counts[2].1, BigUint::from(65u32));
        match estimate_dim(&counts).unwrap() {
            DimEstimate::Estimate { dim, stable, .. } => {
                assert_eq!(dim, 2);
                assert!(stable);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let r = base_registry(2);
        let f = parse_poly("x1^2 + x2^3", &r).unwrap();
        let serial_rep = count_jets(&[f.clone()], 3, 3, serial()).unwrap();
        let par = CountOptions {
            budget: DEFAULT_BUDGET,
            shards: 7,
        };
        let par_rep = count_jets(&[f], 3, 3, par).unwrap();
        assert_eq!(serial_rep.count, par_rep.count);
    }

    #[test]
    fn fibration_small_cases() {
        // e = 0: injective, every fiber a single point
        let rep = blowup_fibration_check(2, 0, 1, 3, serial()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.expected_fiber_size, 1);

        // n=2, e=1, m=2, p=2: fibers of size 2
        let rep = blowup_fibration_check(2, 1, 2, 2, serial()).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.expected_fiber_size, 2);
        assert_eq!(rep.jets % rep.fibers, 0);
    }

    #[test]
    fn fibration_triangular_reconstruction() {
        // For n=2, e=1, m=2: given the image and the a-coefficients the
        // visible z-coefficients are recovered by back substitution
        // b_t = (beta_t - sum a_{t-i} b_i)/a_0; the hidden one is free.
        let p = 3u64;
        let ord = 1usize;
        let m = 2usize;
        // one specific source jet: a = (0, 2, 1), z = (1, 2, 0)
        let a = [0u64, 2, 1];
        let z = [1u64, 2, 0];
        let mut beta = [0u64; 3];
        for t in 0..=m {
            let mut acc = 0;
            for i in 0..=t {
                acc = (acc + a[i] * z[t - i]) % p;
            }
            beta[t] = acc;
        }
        // reconstruct z from beta knowing a: beta[ord+k] = sum a[ord+i] z[k-i]
        let lead = a[ord];
        let inv = (1..p).find(|x| (x * lead) % p == 1).unwrap();
        let mut rec = [0u64; 2]; // only z0, z1 visible (m - ord = 1)
        for k in 0..=m - ord {
            let mut acc = beta[ord + k];
            for i in 0..k {
                acc = (acc + p * p - (a[ord + k - i] * rec[i]) % p) % p;
            }
            rec[k] = (acc * inv) % p;
        }
        assert_eq!(rec[0], z[0]);
        assert_eq!(rec[1], z[1]);
    }
}
