//! Jet-scheme equations by truncated power-series substitution.
//!
//! Substituting `x_i -> sum_j x_i^(j) t^j` into a polynomial `f` and reading
//! off coefficients of `t^0..t^m` produces the `m+1` equations
//! `f^(0), ..., f^(m)` cutting out the level-`m` jets of the hypersurface
//! `f = 0` inside the jet space of affine space; several generators are
//! handled per generator. The first two coefficients have closed forms:
//! `f^(0) = f(x^(0))` and `f^(1) = sum_i df/dx_i(x^(0)) x_i^(1)`, and a
//! coefficient `f^(j)` never involves variables of level above `j`.

use crate::error::{Error, Result};
use crate::poly::{Coeff, Domain, MultiPoly, RegistryRef, VarRegistry};
use crate::poly::leading_term_degrevlex;
use serde::{Deserialize, Serialize};

/// The equations of a level-`m` jet scheme, grouped per generator.
#[derive(Debug, Clone)]
pub struct JetSystem {
    pub n: usize,
    pub m: usize,
    /// Registry of the base affine space (x1..xn).
    pub base_registry: RegistryRef,
    /// Jet registry with variables `x_i^(j)` stored level-major.
    pub registry: RegistryRef,
    pub generators: Vec<MultiPoly>,
    /// `equations[k][j]` is the level-`j` equation of generator `k`.
    pub equations: Vec<Vec<MultiPoly>>,
}

impl JetSystem {
    /// All equations flattened in generator-major order.
    pub fn flat_equations(&self) -> Vec<MultiPoly> {
        self.equations.iter().flatten().cloned().collect()
    }

    pub fn equation_count(&self) -> usize {
        self.equations.iter().map(|e| e.len()).sum()
    }

    /// Substitutes the base-point coordinates `x^(0) := point` into every
    /// equation. Equations that become identically zero are retained as zero
    /// markers, so the level structure stays aligned.
    pub fn fiber_at(&self, point: &[Coeff]) -> Result<JetSystem> {
        if point.len() != self.n {
            return Err(Error::Invalid(format!(
                "fiber point has {} coordinates, base has {}",
                point.len(),
                self.n
            )));
        }
        let domain = self
            .generators
            .first()
            .map(|g| g.domain())
            .unwrap_or(Domain::Integer);
        let images: Vec<MultiPoly> = (0..self.registry.len())
            .map(|idx| {
                // level-major layout: indices 0..n are the x^(0) block
                if idx < self.n {
                    MultiPoly::constant(domain, self.registry.clone(), point[idx].clone())
                } else {
                    MultiPoly::var(domain, self.registry.clone(), idx)
                }
            })
            .collect();
        let equations = self
            .equations
            .iter()
            .map(|per_gen| {
                per_gen
                    .iter()
                    .map(|eq| eq.substitute(&images))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(JetSystem {
            n: self.n,
            m: self.m,
            base_registry: self.base_registry.clone(),
            registry: self.registry.clone(),
            generators: self.generators.clone(),
            equations,
        })
    }

    /// Fiber over the origin.
    pub fn fiber_at_origin(&self) -> Result<JetSystem> {
        let domain = self
            .generators
            .first()
            .map(|g| g.domain())
            .unwrap_or(Domain::Integer);
        self.fiber_at(&vec![domain.zero(); self.n])
    }
}

/// Serialized form: polynomials as strings in the printed grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetSystemFile {
    pub n: usize,
    pub m: usize,
    pub generators: Vec<String>,
    pub equations: Vec<Vec<String>>,
}

impl JetSystem {
    pub fn to_file(&self) -> JetSystemFile {
        JetSystemFile {
            n: self.n,
            m: self.m,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            equations: self
                .equations
                .iter()
                .map(|per_gen| per_gen.iter().map(|e| e.to_string()).collect())
                .collect(),
        }
    }

    /// Rebuilds a system from its serialized form and re-derives the
    /// equations, checking they match the stored ones.
    pub fn from_file(file: &JetSystemFile) -> Result<JetSystem> {
        let base = base_registry(file.n);
        let gens: Vec<MultiPoly> = file
            .generators
            .iter()
            .map(|s| crate::poly::parse_poly(s, &base))
            .collect::<Result<_>>()?;
        let sys = jet_system(&gens, file.m)?;
        let stored: Vec<Vec<String>> = sys
            .equations
            .iter()
            .map(|per_gen| per_gen.iter().map(|e| e.to_string()).collect())
            .collect();
        if stored != file.equations {
            return Err(Error::Validation(
                "stored jet equations disagree with the generators".into(),
            ));
        }
        Ok(sys)
    }
}

/// Canonical base registry `x1..xn`.
pub fn base_registry(n: usize) -> RegistryRef {
    VarRegistry::new((1..=n).map(|i| format!("x{i}")).collect()).expect("distinct names")
}

/// Coefficients of `t^0..t^m` of `f(sum_j x^(j) t^j)`, as polynomials over
/// the jet registry of `f`'s registry.
///
/// Works over ℤ and prime fields. Truncation is applied at every
/// intermediate product, so no untruncated series is ever materialized.
pub fn jet_expand(f: &MultiPoly, m: usize) -> Result<Vec<MultiPoly>> {
    let n = f.registry().len();
    let jet_reg = VarRegistry::jet(n, m);
    jet_expand_into(f, m, &jet_reg)
}

/// As [`jet_expand`], writing the result over the supplied jet registry
/// (which must contain at least levels `0..=m` of `n` base variables).
pub fn jet_expand_into(
    f: &MultiPoly,
    m: usize,
    jet_reg: &RegistryRef,
) -> Result<Vec<MultiPoly>> {
    let n = f.registry().len();
    let domain = f.domain();
    let (jn, jm) = jet_reg
        .jet_shape()
        .ok_or_else(|| Error::Invalid("target registry is not a jet registry".into()))?;
    if jn != n || jm < m {
        return Err(Error::Invalid(format!(
            "jet registry shape ({jn}, {jm}) cannot hold level-{m} jets of {n} variables"
        )));
    }

    // Truncated series with coefficients in the jet variables.
    type Series = Vec<MultiPoly>;
    let zero = |reg: &RegistryRef| MultiPoly::zero(domain, reg.clone());
    let series_mul = |a: &Series, b: &Series| -> Result<Series> {
        let mut out: Series = vec![zero(jet_reg); m + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j > m {
                    break;
                }
                if bj.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&ai.mul(bj)?)?;
            }
        }
        Ok(out)
    };

    // pows[i][e] = (series of x_i)^e, built on demand.
    let var_series: Vec<Series> = (0..n)
        .map(|i| {
            (0..=m)
                .map(|j| MultiPoly::var(domain, jet_reg.clone(), jet_reg.jet_index(i + 1, j)))
                .collect()
        })
        .collect();
    let mut pows: Vec<Vec<Series>> = (0..n)
        .map(|i| {
            let mut one_series = vec![zero(jet_reg); m + 1];
            one_series[0] =
                MultiPoly::constant(domain, jet_reg.clone(), domain.one());
            vec![one_series, var_series[i].clone()]
        })
        .collect();

    let mut acc: Series = vec![zero(jet_reg); m + 1];
    for (exps, c) in f.terms() {
        let mut term: Series = vec![zero(jet_reg); m + 1];
        term[0] = MultiPoly::constant(domain, jet_reg.clone(), c.clone());
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while pows[i].len() <= e as usize {
                let next = series_mul(pows[i].last().unwrap(), &var_series[i])?;
                pows[i].push(next);
            }
            term = series_mul(&term, &pows[i][e as usize])?;
        }
        for (j, t) in term.into_iter().enumerate() {
            acc[j] = acc[j].add(&t)?;
        }
    }
    Ok(acc)
}

/// Builds the jet system of the subscheme cut out by `gens` at level `m`.
pub fn jet_system(gens: &[MultiPoly], m: usize) -> Result<JetSystem> {
    let base = gens
        .first()
        .ok_or_else(|| Error::Invalid("jet system needs at least one generator".into()))?
        .registry()
        .clone();
    for g in gens {
        if *g.registry() != base {
            return Err(Error::RegistryMismatch);
        }
    }
    let n = base.len();
    let jet_reg = VarRegistry::jet(n, m);
    let equations = gens
        .iter()
        .map(|g| jet_expand_into(g, m, &jet_reg))
        .collect::<Result<Vec<_>>>()?;
    Ok(JetSystem {
        n,
        m,
        base_registry: base,
        registry: jet_reg,
        generators: gens.to_vec(),
        equations,
    })
}

/// Report of the homogeneous shift identity: the fiber of the level-`m` jet
/// projection over the origin, for a homogeneous `f` of degree `d`, carries
/// the same equations as the level-`(m-d)` jets after dropping every level
/// by one, with `n(d-1)` coordinates left unconstrained.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub degree: u32,
    pub level: usize,
    pub matches: bool,
    /// Per level `d..=m`: does the shifted fiber equation equal the
    /// corresponding lower-level jet equation?
    pub per_level: Vec<bool>,
    /// Fiber equations of level below `d` must vanish identically.
    pub low_levels_zero: bool,
    pub free_vars: usize,
}

/// Checks the shift identity. Requires `f` homogeneous and `m >= d - 1`;
/// `m = d - 1` is the degenerate case where level `-1` is a single point and
/// every fiber equation vanishes.
pub fn homogeneous_shift_equations(
    f: &MultiPoly,
    m: usize,
) -> Result<(JetSystem, ShiftReport)> {
    let d = homogeneous_degree(f)?;
    if m + 1 < d as usize {
        return Err(Error::Invalid(format!(
            "level m = {m} must be at least d - 1 = {}",
            d - 1
        )));
    }
    let n = f.registry().len();
    let sys = jet_system(&[f.clone()], m)?;
    let fiber = sys.fiber_at_origin()?;
    let fiber_eqs = &fiber.equations[0];

    let low_levels_zero = fiber_eqs[..(d as usize).min(m + 1)]
        .iter()
        .all(|e| e.is_zero());

    // Shift x^(j) -> x^(j-1) in the fiber equations and compare with the
    // level-(m-d) jet equations of f.
    let mut per_level = Vec::new();
    if m >= d as usize {
        let md = m - d as usize;
        let expected = jet_expand_into(f, md, &fiber.registry)?;
        let domain = f.domain();
        let images: Vec<MultiPoly> = (0..fiber.registry.len())
            .map(|idx| {
                let j = idx / n;
                let i = idx % n + 1;
                if j == 0 {
                    // level 0 cannot occur in the fiber equations
                    MultiPoly::zero(domain, fiber.registry.clone())
                } else {
                    MultiPoly::var(
                        domain,
                        fiber.registry.clone(),
                        fiber.registry.jet_index(i, j - 1),
                    )
                }
            })
            .collect();
        for j in d as usize..=m {
            let shifted = fiber_eqs[j].substitute(&images)?;
            per_level.push(shifted == expected[j - d as usize]);
        }
    }
    let matches = low_levels_zero && per_level.iter().all(|&b| b);
    let report = ShiftReport {
        degree: d,
        level: m,
        matches,
        per_level,
        low_levels_zero,
        free_vars: n * (d as usize - 1),
    };
    Ok((fiber, report))
}

/// Per-level outcome of the initial-term identity.
#[derive(Debug, Clone, Serialize)]
pub struct InitialTermEntry {
    pub j: usize,
    /// The fiber equation at level `a*j` vanished identically (reported,
    /// not fatal).
    pub zero: bool,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InitialTermsReport {
    pub multiplicity: u32,
    pub entries: Vec<InitialTermEntry>,
    pub all_matched: bool,
}

/// For homogeneous `f` of degree `a`, checks that the degrevlex initial term
/// of the origin-fiber equation at level `a*j` equals the initial term of
/// `f` with variables moved to level `j`, for `j = 1..=p`.
pub fn initial_terms_check(f: &MultiPoly, p: usize) -> Result<InitialTermsReport> {
    let a = homogeneous_degree(f)?;
    let m = a as usize * p;
    let sys = jet_system(&[f.clone()], m)?;
    let fiber = sys.fiber_at_origin()?;
    let fiber_eqs = &fiber.equations[0];
    // The level-0 block keeps the base variable order, so the initial term of
    // f can be read off after lifting x_i to x_i^(0).
    let lt_f = leading_term_degrevlex(&lift_to_level_zero(f, &fiber.registry)?)?;

    let mut entries = Vec::new();
    for j in 1..=p {
        let eq = &fiber_eqs[a as usize * j];
        if eq.is_zero() {
            entries.push(InitialTermEntry {
                j,
                zero: true,
                matched: false,
            });
            continue;
        }
        let lt = leading_term_degrevlex(eq)?;
        let expected = raise_level(&lt_f, j)?;
        entries.push(InitialTermEntry {
            j,
            zero: false,
            matched: lt == expected,
        });
    }
    let all_matched = entries.iter().all(|e| e.matched);
    Ok(InitialTermsReport {
        multiplicity: a,
        entries,
        all_matched,
    })
}

/// Moves a level-0 monomial to level `j` within the same jet registry.
fn raise_level(term: &MultiPoly, j: usize) -> Result<MultiPoly> {
    let reg = term.registry().clone();
    let (n, _m) = reg
        .jet_shape()
        .ok_or_else(|| Error::Invalid("expected a jet registry".into()))?;
    let domain = term.domain();
    let images: Vec<MultiPoly> = (0..reg.len())
        .map(|idx| {
            let lvl = idx / n;
            let i = idx % n + 1;
            if lvl == 0 {
                MultiPoly::var(domain, reg.clone(), reg.jet_index(i, j))
            } else {
                MultiPoly::var(domain, reg.clone(), idx)
            }
        })
        .collect();
    term.substitute(&images)
}

fn homogeneous_degree(f: &MultiPoly) -> Result<u32> {
    let mut degrees: Vec<u32> = f.terms().map(|(e, _)| e.iter().sum()).collect();
    degrees.dedup();
    match (degrees.len(), degrees.first()) {
        (1, Some(&d)) if d >= 1 => Ok(d),
        (0, _) => Err(Error::Invalid("zero polynomial is not homogeneous".into())),
        _ => Err(Error::Invalid(
            "polynomial is not homogeneous of positive degree".into(),
        )),
    }
}

/// Upper bound for the dimension of the level-`m` jets of a subvariety of
/// dimension `dim_y` in ambient dimension `n`, from the maximal local
/// multiplicity `a`: `dim_y + m*n - floor(m/a)`.
pub fn dim_upper_bound(n: u64, dim_y: u64, a: u64, m: u64) -> u64 {
    assert!(a >= 1 && dim_y < n);
    dim_y + m * n - m / a
}

/// Re-expression of a base polynomial over the level-0 block of a jet
/// registry (x_i becomes x_i^(0)).
pub fn lift_to_level_zero(f: &MultiPoly, jet_reg: &RegistryRef) -> Result<MultiPoly> {
    let n = f.registry().len();
    let domain = f.domain();
    let images: Vec<MultiPoly> = (0..n)
        .map(|i| MultiPoly::var(domain, jet_reg.clone(), jet_reg.jet_index(i + 1, 0)))
        .collect();
    f.substitute(&images)
}
