//! `mint` — batch front end for the motivic integration toolkit.
//!
//! Every invocation runs one operation and prints a single JSON document on
//! standard output. Exit codes: 0 success, 1 usage error, 2 enumeration
//! budget violation, 3 validation failure.

use clap::{Args, Parser, Subcommand};
use mint_core::count::{
    blowup_fibration_check, count_contact, count_jets, count_jets_over_locus, count_points,
    estimate_dim, ContactMode, CountOptions, CountQuery, CountReport, DimEstimate,
    DEFAULT_BUDGET,
};
use mint_core::error::Error;
use mint_core::gring::parse_class;
use mint_core::invariants::{
    cross_check, lct_around_locus, lct_bound_homogeneous, lct_bounds_mult, lct_from_jet_dims,
    JetDimTable,
};
use mint_core::jet::{
    base_registry, homogeneous_shift_equations, initial_terms_check, jet_system, JetSystem,
};
use mint_core::poly::{parse_poly, scan_variables, Domain, MultiPoly};
use mint_core::resolution as res;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

/// Hard cap on the enumeration budget; larger values need --force.
const HARD_CAP: u128 = DEFAULT_BUDGET;

#[derive(Parser)]
#[command(name = "mint", version, about = "Exact motivic-integration toolkit")]
struct Cli {
    /// Zero out wall-clock fields so identical runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Number of enumeration shards (default: available parallelism).
    #[arg(long, global = true)]
    shards: Option<usize>,
    /// Enumeration budget (max points); overrides MINT_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Allow budgets above the hard cap.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grothendieck-ring classes: evaluate, dimension, specializations.
    #[command(subcommand)]
    Gring(GringCmd),
    /// Jet-scheme equations and structural identities.
    #[command(subcommand)]
    Jet(JetCmd),
    /// Finite-field point counting.
    #[command(subcommand)]
    Count(CountCmd),
    /// Log-resolution datasets and their invariants.
    #[command(subcommand)]
    Res(ResCmd),
    /// Jet-side log canonical thresholds and bounds.
    #[command(subcommand)]
    Lct(LctCmd),
}

#[derive(Subcommand)]
enum GringCmd {
    /// Evaluate a class expression to canonical form.
    Eval(ClassArg),
    /// Virtual dimension of a class.
    Dim(ClassArg),
    /// Specialize L to an integer q >= 2.
    SpecQ {
        #[command(flatten)]
        class: ClassArg,
        #[arg(short = 'q')]
        q: i64,
    },
    /// Specialize L to uv in the Hodge-Deligne ring.
    EPoly(ClassArg),
}

#[derive(Args)]
struct ClassArg {
    /// Class expression, e.g. "(L^3 - 1)/(L + 1)".
    #[arg(short = 'c', long = "class")]
    class: String,
}

#[derive(Subcommand)]
enum JetCmd {
    /// Expand one polynomial into its jet equations.
    Expand {
        #[arg(short = 'f')]
        poly: String,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Build the jet system of several generators.
    System {
        #[arg(short = 'f', required = true)]
        polys: Vec<String>,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Jet system restricted to the fiber over the origin.
    Fiber0 {
        #[arg(short = 'f', required = true)]
        polys: Vec<String>,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Homogeneous shift identity check.
    ShiftCheck {
        #[arg(short = 'f')]
        poly: String,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Initial-term identity check at levels a, 2a, ..., pa.
    InitialCheck {
        #[arg(short = 'f')]
        poly: String,
        /// Number of levels to check.
        #[arg(long = "levels", default_value_t = 2)]
        levels: usize,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Count solutions of equations (and inequations) in F_p^N.
    Points {
        #[arg(short = 'f')]
        equations: Vec<String>,
        #[arg(long = "ineq")]
        inequations: Vec<String>,
        #[arg(short = 'p')]
        prime: u32,
        #[arg(short = 'n')]
        vars: Option<usize>,
    },
    /// Count F_p-points of a jet scheme.
    Jets {
        #[arg(short = 'f', required = true)]
        gens: Vec<String>,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'p')]
        prime: u32,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Count jets with prescribed contact order along a hypersurface.
    Contact {
        #[arg(short = 'f')]
        poly: String,
        #[arg(long = "order")]
        order: usize,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'p')]
        prime: u32,
        #[arg(long = "mode", default_value = "exact")]
        mode: String,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Count jets whose base point lies on a locus.
    OverLocus {
        #[arg(short = 'f', required = true)]
        gens: Vec<String>,
        #[arg(long = "locus")]
        locus: Vec<String>,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'p')]
        prime: u32,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Estimate a dimension from jet counts at several primes.
    EstimateDim {
        #[arg(short = 'f', required = true)]
        gens: Vec<String>,
        #[arg(short = 'm')]
        level: usize,
        /// Comma-separated primes, e.g. 2,3,5.
        #[arg(short = 'P', long = "primes")]
        primes: String,
        #[arg(short = 'n')]
        ambient: Option<usize>,
    },
    /// Fibration check on the blowup chart of the origin of A^n.
    BlowupCheck {
        #[arg(short = 'n')]
        ambient: usize,
        #[arg(short = 'e')]
        contact: usize,
        #[arg(short = 'm')]
        level: usize,
        #[arg(short = 'p')]
        prime: u32,
    },
}

#[derive(Subcommand)]
enum ResCmd {
    /// Validate a resolution dataset.
    Validate { file: String },
    /// Normal-crossing motivic integral with multiplicities -r r1,r2,...
    Integral {
        file: String,
        /// Comma-separated multiplicities in divisor order; rationals allowed.
        #[arg(short = 'r', long = "orders")]
        orders: String,
    },
    /// Motivic volume (integral against the relative canonical divisor).
    Volume { file: String },
    /// Log canonical threshold from the resolution data.
    Lct { file: String },
    /// Kawamata log terminal test at coefficient q.
    Klt {
        file: String,
        #[arg(short = 'q')]
        q: String,
    },
    /// Log canonical test at coefficient q.
    Lc {
        file: String,
        #[arg(short = 'q')]
        q: String,
    },
    /// Minimal log discrepancy over the marked locus at coefficient q.
    Mld {
        file: String,
        #[arg(short = 'q')]
        q: String,
    },
    /// Inversion-of-adjunction comparison of two datasets.
    Ioa {
        ambient: String,
        restricted: String,
        #[arg(short = 'q', default_value = "1")]
        q: String,
    },
    /// Codimension of a multi-contact locus (--nu v1,v2,...).
    ContactCodim {
        file: String,
        #[arg(long = "nu")]
        nu: String,
    },
    /// Minimal image codimension over multi-indices with sum nu_i a_i = p.
    ContactCodimP {
        file: String,
        #[arg(long = "order")]
        order: u64,
    },
    /// Threshold recovered from contact-locus codimensions up to a bound.
    LctContact {
        file: String,
        #[arg(long = "bound")]
        bound: u64,
    },
    /// Rational-singularities criterion for an LCI of codimension c.
    RationalSing {
        file: String,
        #[arg(long = "codim")]
        codim: u64,
    },
}

#[derive(Subcommand)]
enum LctCmd {
    /// Threshold from a jet dimension table file.
    FromDims { file: String },
    /// Bounds 1/a <= lct <= n/a from the maximal multiplicity.
    Bounds {
        #[arg(short = 'a')]
        mult: u64,
        #[arg(short = 'n')]
        ambient: u64,
    },
    /// Lower bound min((n-r)/d, 1) for a homogeneous hypersurface.
    HomogBound {
        #[arg(short = 'n')]
        ambient: u64,
        #[arg(short = 'd')]
        degree: u64,
        #[arg(short = 'r')]
        sing_dim: u64,
    },
    /// Threshold around a locus from an over-locus dimension table.
    Around { file: String },
    /// Cross-check resolution data against a jet dimension table.
    CrossCheck {
        res_file: String,
        table_file: String,
        #[arg(long = "grid-den", default_value_t = 12)]
        grid_den: u64,
        #[arg(long = "grid-max", default_value_t = 24)]
        grid_max: u64,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap help/version go to stdout with success
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion
            {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let budget = match resolve_budget(&cli) {
        Ok(b) => b,
        Err(msg) => {
            println!("{}", json!({ "error": msg }));
            std::process::exit(1);
        }
    };
    let opts = CountOptions {
        budget,
        shards: cli.shards.unwrap_or_else(mint_core::count::default_shards),
    };
    match run(&cli, opts) {
        Ok(Output { json: doc, exit }) => {
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            std::process::exit(exit);
        }
        Err(e) => {
            let exit = match &e {
                Error::Budget { .. } => 2,
                Error::Validation(_) => 3,
                _ => 1,
            };
            println!("{}", json!({ "error": e.to_string() }));
            std::process::exit(exit);
        }
    }
}

fn resolve_budget(cli: &Cli) -> Result<u128, String> {
    let requested = match cli.budget {
        Some(b) => Some(b),
        None => match std::env::var("MINT_BUDGET") {
            Ok(v) => Some(
                v.parse::<u128>()
                    .map_err(|_| format!("MINT_BUDGET is not an integer: {v}"))?,
            ),
            Err(_) => None,
        },
    };
    match requested {
        None => Ok(DEFAULT_BUDGET),
        Some(b) if b <= HARD_CAP || cli.force => Ok(b),
        Some(b) => Err(format!(
            "budget {b} exceeds the hard cap {HARD_CAP}; pass --force to override"
        )),
    }
}

struct Output {
    json: Value,
    exit: i32,
}

fn ok(json: Value) -> Result<Output, Error> {
    Ok(Output { json, exit: 0 })
}

fn run(cli: &Cli, opts: CountOptions) -> Result<Output, Error> {
    match &cli.cmd {
        Cmd::Gring(cmd) => run_gring(cmd),
        Cmd::Jet(cmd) => run_jet(cmd),
        Cmd::Count(cmd) => run_count(cmd, opts, cli.no_timing),
        Cmd::Res(cmd) => run_res(cmd),
        Cmd::Lct(cmd) => run_lct(cmd),
    }
}

fn run_gring(cmd: &GringCmd) -> Result<Output, Error> {
    match cmd {
        GringCmd::Eval(arg) => {
            let v = parse_class(&arg.class)?;
            ok(json!({ "value": v.to_string() }))
        }
        GringCmd::Dim(arg) => {
            let v = parse_class(&arg.class)?;
            ok(json!({ "dim": v.virtual_dim().to_string() }))
        }
        GringCmd::SpecQ { class, q } => {
            let v = parse_class(&class.class)?;
            let r = v.specialize_q(&BigInt::from(*q))?;
            ok(json!({ "value": r.to_string() }))
        }
        GringCmd::EPoly(arg) => {
            let v = parse_class(&arg.class)?;
            ok(json!({ "value": v.to_e_rational()?.to_string() }))
        }
    }
}

/// Parses user polynomials onto the canonical base registry x1..xn: the
/// variable names appearing in the input map to x1, x2, ... in natural
/// order (x before y, x2 before x10).
fn parse_gens(texts: &[String], ambient: Option<usize>) -> Result<Vec<MultiPoly>, Error> {
    let names = scan_variables(&texts.join(" "));
    let n = ambient.unwrap_or(names.len()).max(names.len()).max(1);
    let canon = base_registry(n);
    if names.iter().all(|nm| canon.index_of(nm).is_some()) {
        return texts.iter().map(|t| parse_poly(t, &canon)).collect();
    }
    let user_reg = mint_core::poly::VarRegistry::new(names.clone())?;
    let images: Vec<MultiPoly> = (0..names.len())
        .map(|i| MultiPoly::var(Domain::Integer, canon.clone(), i))
        .collect();
    texts
        .iter()
        .map(|t| parse_poly(t, &user_reg)?.substitute(&images))
        .collect()
}

fn system_json(sys: &JetSystem) -> Value {
    serde_json::to_value(sys.to_file()).unwrap()
}

fn run_jet(cmd: &JetCmd) -> Result<Output, Error> {
    match cmd {
        JetCmd::Expand {
            poly,
            level,
            ambient,
        } => {
            let gens = parse_gens(std::slice::from_ref(poly), *ambient)?;
            let sys = jet_system(&gens, *level)?;
            let eqs: Vec<String> = sys.equations[0].iter().map(|e| e.to_string()).collect();
            ok(json!({ "n": sys.n, "m": sys.m, "equations": eqs }))
        }
        JetCmd::System {
            polys,
            level,
            ambient,
        } => {
            let gens = parse_gens(polys, *ambient)?;
            let sys = jet_system(&gens, *level)?;
            ok(system_json(&sys))
        }
        JetCmd::Fiber0 {
            polys,
            level,
            ambient,
        } => {
            let gens = parse_gens(polys, *ambient)?;
            let sys = jet_system(&gens, *level)?.fiber_at_origin()?;
            ok(system_json(&sys))
        }
        JetCmd::ShiftCheck {
            poly,
            level,
            ambient,
        } => {
            let gens = parse_gens(std::slice::from_ref(poly), *ambient)?;
            let (_, report) = homogeneous_shift_equations(&gens[0], *level)?;
            ok(serde_json::to_value(report).unwrap())
        }
        JetCmd::InitialCheck {
            poly,
            levels,
            ambient,
        } => {
            let gens = parse_gens(std::slice::from_ref(poly), *ambient)?;
            let report = initial_terms_check(&gens[0], *levels)?;
            ok(serde_json::to_value(report).unwrap())
        }
    }
}

fn report_json(report: &CountReport, no_timing: bool) -> Value {
    let mut v = serde_json::to_value(report).unwrap();
    if no_timing {
        v["seconds"] = json!(0.0);
    }
    v
}

fn to_fp(polys: &[MultiPoly], p: u32) -> Result<Vec<MultiPoly>, Error> {
    let fp = Domain::prime_field(p)?;
    polys.iter().map(|f| f.to_domain(fp)).collect()
}

fn parse_primes(text: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad prime `{s}`")))
        })
        .collect()
}

fn run_count(cmd: &CountCmd, opts: CountOptions, no_timing: bool) -> Result<Output, Error> {
    match cmd {
        CountCmd::Points {
            equations,
            inequations,
            prime,
            vars,
        } => {
            let all: Vec<String> = equations
                .iter()
                .chain(inequations.iter())
                .cloned()
                .collect();
            let parsed = parse_gens(&all, *vars)?;
            let (eqs, ineqs) = parsed.split_at(equations.len());
            let nvars = parsed
                .first()
                .map(|f| f.registry().len())
                .unwrap_or(vars.unwrap_or(0));
            let mut q = CountQuery::new(*prime, nvars, to_fp(eqs, *prime)?);
            q.inequations = to_fp(ineqs, *prime)?;
            q.budget = opts.budget;
            q.shards = opts.shards;
            let rep = count_points(&q)?;
            ok(report_json(&rep, no_timing))
        }
        CountCmd::Jets {
            gens,
            level,
            prime,
            ambient,
        } => {
            let gens = parse_gens(gens, *ambient)?;
            let rep = count_jets(&gens, *level, *prime, opts)?;
            ok(report_json(&rep, no_timing))
        }
        CountCmd::Contact {
            poly,
            order,
            level,
            prime,
            mode,
            ambient,
        } => {
            let gens = parse_gens(std::slice::from_ref(poly), *ambient)?;
            let mode = match mode.as_str() {
                "exact" => ContactMode::Exact,
                "at-least" => ContactMode::AtLeast,
                other => {
                    return Err(Error::Invalid(format!(
                        "mode must be `exact` or `at-least`, got `{other}`"
                    )))
                }
            };
            let rep = count_contact(&gens[0], *order, *level, *prime, mode, opts)?;
            ok(report_json(&rep, no_timing))
        }
        CountCmd::OverLocus {
            gens,
            locus,
            level,
            prime,
            ambient,
        } => {
            let all: Vec<String> = gens.iter().chain(locus.iter()).cloned().collect();
            let parsed = parse_gens(&all, *ambient)?;
            let (g, h) = parsed.split_at(gens.len());
            let rep = count_jets_over_locus(g, h, *level, *prime, opts)?;
            ok(report_json(&rep, no_timing))
        }
        CountCmd::EstimateDim {
            gens,
            level,
            primes,
            ambient,
        } => {
            let gens = parse_gens(gens, *ambient)?;
            let primes = parse_primes(primes)?;
            let mut counts = Vec::new();
            let mut reports = Vec::new();
            for &p in &primes {
                let rep = count_jets(&gens, *level, p, opts)?;
                counts.push((p, rep.count.clone()));
                reports.push(report_json(&rep, no_timing));
            }
            let estimate = estimate_dim(&counts)?;
            let est_json = match estimate {
                DimEstimate::Empty => json!({ "dim": "empty", "stable": true }),
                DimEstimate::Estimate {
                    dim,
                    stable,
                    pairwise,
                } => json!({ "dim": dim, "stable": stable, "pairwise": pairwise }),
            };
            ok(json!({ "m": level, "counts": reports, "estimate": est_json }))
        }
        CountCmd::BlowupCheck {
            ambient,
            contact,
            level,
            prime,
        } => {
            let rep = blowup_fibration_check(*ambient, *contact, *level, *prime, opts)?;
            ok(serde_json::to_value(rep).unwrap())
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("bad rational `{text}`")))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(Error::Invalid("zero denominator".into()));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Invalid(format!("bad entry `{s}`")))
        })
        .collect()
}

fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, Error> {
    text.split(',').map(parse_rational).collect()
}

fn load_data(path: &str) -> Result<res::ResolutionData, Error> {
    res::ResolutionData::load(std::path::Path::new(path))
}

fn load_table(path: &str) -> Result<JetDimTable, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("malformed table: {e}")))
}

fn run_res(cmd: &ResCmd) -> Result<Output, Error> {
    match cmd {
        ResCmd::Validate { file } => {
            let data = load_data(file)?;
            let rep = res::validate(&data);
            let exit = if rep.ok { 0 } else { 3 };
            Ok(Output {
                json: serde_json::to_value(rep).unwrap(),
                exit,
            })
        }
        ResCmd::Integral { file, orders } => {
            let data = load_data(file)?;
            let r = parse_rational_list(orders)?;
            let v = res::nc_integral(&data, &r)?;
            ok(json!({ "value": v.to_string() }))
        }
        ResCmd::Volume { file } => {
            let data = load_data(file)?;
            let v = res::motivic_volume(&data)?;
            ok(json!({ "value": v.to_string() }))
        }
        ResCmd::Lct { file } => {
            let data = load_data(file)?;
            let v = res::lct_resolution(&data)?;
            ok(json!({ "lct": v.to_string() }))
        }
        ResCmd::Klt { file, q } => {
            let data = load_data(file)?;
            let q = parse_rational(q)?;
            ok(json!({ "klt": res::klt_test(&data, &q) }))
        }
        ResCmd::Lc { file, q } => {
            let data = load_data(file)?;
            let q = parse_rational(q)?;
            ok(json!({ "lc": res::lc_test(&data, &q) }))
        }
        ResCmd::Mld { file, q } => {
            let data = load_data(file)?;
            let q = parse_rational(q)?;
            ok(json!({ "mld": res::mld(&data, &q)?.to_string() }))
        }
        ResCmd::Ioa {
            ambient,
            restricted,
            q,
        } => {
            let a = load_data(ambient)?;
            let r = load_data(restricted)?;
            let q = parse_rational(q)?;
            let rep = res::ioa_compare(&a, &r, &q)?;
            ok(serde_json::to_value(rep).unwrap())
        }
        ResCmd::ContactCodim { file, nu } => {
            let data = load_data(file)?;
            let nu = parse_u64_list(nu)?;
            let rep = res::contact_codim(&data, &nu)?;
            ok(serde_json::to_value(rep).unwrap())
        }
        ResCmd::ContactCodimP { file, order } => {
            let data = load_data(file)?;
            match res::contact_codim_p(&data, *order)? {
                Some(c) => ok(json!({ "codim": c })),
                None => ok(json!({ "codim": "empty" })),
            }
        }
        ResCmd::LctContact { file, bound } => {
            let data = load_data(file)?;
            let v = res::lct_via_contact(&data, *bound)?;
            ok(json!({ "lct": v.to_string() }))
        }
        ResCmd::RationalSing { file, codim } => {
            let data = load_data(file)?;
            let v = res::rational_sing_lci_test(&data, *codim)?;
            ok(json!({ "rational_singularities": v }))
        }
    }
}

fn run_lct(cmd: &LctCmd) -> Result<Output, Error> {
    match cmd {
        LctCmd::FromDims { file } => {
            let table = load_table(file)?;
            table.check(None).map_err(|e| e)?;
            let (v, certified) = lct_from_jet_dims(&table)?;
            ok(json!({ "lct": v.to_string(), "certified_at": certified }))
        }
        LctCmd::Bounds { mult, ambient } => {
            let (lo, hi) = lct_bounds_mult(*mult, *ambient);
            ok(json!({ "low": lo.to_string(), "high": hi.to_string() }))
        }
        LctCmd::HomogBound {
            ambient,
            degree,
            sing_dim,
        } => {
            let b = lct_bound_homogeneous(*ambient, *degree, *sing_dim);
            ok(json!({ "bound": b.to_string() }))
        }
        LctCmd::Around { file } => {
            let table = load_table(file)?;
            ok(json!({ "lct": lct_around_locus(&table).to_string() }))
        }
        LctCmd::CrossCheck {
            res_file,
            table_file,
            grid_den,
            grid_max,
        } => {
            let data = load_data(res_file)?;
            let table = load_table(table_file)?;
            let rep = cross_check(&data, &table, *grid_den, *grid_max)?;
            ok(serde_json::to_value(rep).unwrap())
        }
    }
}
