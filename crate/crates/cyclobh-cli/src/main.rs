//! Batch front door: every experiment as a subcommand with reproducible
//! seeds and machine-readable output.
//!
//! Exit codes: 0 success, 1 error, 2 when a certified bound is numerically
//! violated (the scientifically interesting event, kept machine-detectable).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use cyclobh::bh::{
    bh_constant_search, bh_quotient, bohr_majorant, bohr_radius_lower_bound, sidon_bound,
    sidon_quotient, BoundConfig, SearchStrategy,
};
use cyclobh::group::GroupParams;
use cyclobh::hw::{hw_bh_quotient, random_observable, DEFAULT_DENSE_BUDGET};
use cyclobh::io::{polynomial_from_json, DecompositionJson, PolynomialJson, SampleTableJson};
use cyclobh::learn::{
    chernoff_sample_size, junta_approximate, learn_from_samples, learning_error_curve, CurveGrid,
};
use cyclobh::maxmod::{
    build_dn_system, gmp_partial_bound, hull_sup_estimate, n3_counterexample,
    convex_hull_bh_constant, TorusBhConfig,
};
use cyclobh::poly::{fourier_analyze, random_polynomial, CoeffLaw, CyclicPolynomial};
use cyclobh::split::{full_splitting, SplitMethod};

const TOOL: &str = "cyclobh";

/// A certified bound was numerically violated; surfaces as exit code 2.
#[derive(Debug)]
struct BoundViolation(String);

impl std::fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bound violation: {}", self.0)
    }
}

impl std::error::Error for BoundViolation {}

#[derive(Parser, Debug, Serialize)]
#[command(name = TOOL, version, about = "Fourier, splitting, and quotient experiments on cyclic groups")]
struct Cli {
    /// Worker-thread cap for internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Enumeration budget (points); CYCLOBH_BUDGET overrides the default.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Fourier analysis or synthesis of a polynomial / sample table.
    Transform(TransformArgs),
    /// Maximize the coefficient-versus-sup quotient over degree-d polynomials.
    BhSearch(BhSearchArgs),
    /// Sidon quotient of a polynomial against the index-set bound.
    Sidon(SidonArgs),
    /// Bohr-radius lower bound, with an optional membership certificate.
    Bohr(BohrArgs),
    /// Support-homogeneous splitting with growth certificates.
    Split(SplitArgs),
    /// Convex-hull versus group suprema, or the explicit order-3 witness.
    Maxmod(MaxmodArgs),
    /// Sample-based learning of a bounded low-degree polynomial.
    Learn(LearnArgs),
    /// Coefficient-threshold junta approximation.
    Junta(JuntaArgs),
    /// Qudit shift/phase observable quotients.
    Hw(HwArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Direction {
    Analyze,
    Synthesize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct TransformArgs {
    #[arg(long, value_enum)]
    direction: Direction,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Validated against the file when given.
    #[arg(long = "N")]
    order: Option<u32>,
    /// Validated against the file when given.
    #[arg(long = "n")]
    vars: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct BhSearchArgs {
    #[arg(long = "N")]
    order: u32,
    #[arg(long = "n")]
    vars: usize,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 2000)]
    iterations: u64,
    #[arg(long, default_value_t = 1)]
    restarts: u32,
    #[arg(long, value_enum, default_value = "coordinate-ascent")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum StrategyArg {
    Random,
    CoordinateAscent,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => SearchStrategy::Random,
            StrategyArg::CoordinateAscent => SearchStrategy::CoordinateAscent,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SidonArgs {
    #[arg(long = "N")]
    order: Option<u32>,
    #[arg(long = "n")]
    vars: Option<usize>,
    #[arg(long)]
    d: u32,
    /// Polynomial JSON; a random one is drawn when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.6)]
    density: f64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct BohrArgs {
    #[arg(long = "N")]
    order: u32,
    #[arg(long = "n")]
    vars: usize,
    #[arg(long)]
    d: u32,
    /// Override for the quotient constant in the bound.
    #[arg(long)]
    bh_constant: Option<f64>,
    /// d-homogeneous polynomial to certify at --rho.
    #[arg(long)]
    check: Option<PathBuf>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SplitArgs {
    #[arg(long = "N")]
    order: Option<u32>,
    #[arg(long = "n")]
    vars: Option<usize>,
    #[arg(long, default_value_t = 3)]
    d: u32,
    #[arg(long, value_enum, default_value = "direct")]
    method: MethodArg,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum MethodArg {
    Direct,
    Prime,
    Vandermonde,
}

impl From<MethodArg> for SplitMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => SplitMethod::Direct,
            MethodArg::Prime => SplitMethod::Prime,
            MethodArg::Vandermonde => SplitMethod::Vandermonde,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct MaxmodArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Emit the explicit order-3 witness instead of a random suite.
    #[arg(long)]
    n3_counterexample: bool,
    #[arg(long = "N", default_value_t = 3)]
    order: u32,
    #[arg(long = "n", default_value_t = 1)]
    vars: usize,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    count: u32,
    #[arg(long, default_value_t = 16)]
    samples_per_edge: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LearnArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[arg(long = "N")]
    order: u32,
    #[arg(long = "n")]
    vars: usize,
    #[arg(long)]
    d: u32,
    /// Sample count; defaults to the index-count formula value.
    #[arg(long = "M")]
    samples: Option<u64>,
    /// Coefficient accuracy; defaults to the b² formula value.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, default_value_t = 10)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-truth polynomial JSON; a random bounded one otherwise.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Comma-separated sample counts for an error curve.
    #[arg(long)]
    m_grid: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct JuntaArgs {
    #[arg(long = "N")]
    order: Option<u32>,
    #[arg(long = "n")]
    vars: Option<usize>,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    /// Quotient constant; defaults to the measured quotient of the input.
    #[arg(long)]
    bh_constant: Option<f64>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct HwArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[arg(long = "N", default_value_t = 3)]
    order: u32,
    #[arg(long = "n", default_value_t = 2)]
    vars: usize,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 10)]
    count: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the identity-plus-shift example instead of random observables.
    #[arg(long)]
    identity_plus_x: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Header<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    master_seed: u64,
    config: &'a C,
}

fn header_json<C: Serialize>(command: &str, seed: u64, config: &C) -> serde_json::Value {
    serde_json::to_value(Header {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command,
        master_seed: seed,
        config,
    })
    .expect("serializable header")
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

/// Prepends the header as the first field of the payload object, so every
/// JSON output starts with it and transform outputs stay directly reusable
/// as inputs (readers ignore the extra field).
fn emit_json(out: &Option<PathBuf>, header: serde_json::Value, data: serde_json::Value) -> Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("header".into(), header);
    match data {
        serde_json::Value::Object(fields) => {
            for (k, v) in fields {
                doc.insert(k, v);
            }
        }
        other => {
            doc.insert("data".into(), other);
        }
    }
    emit(out, &(serde_json::to_string_pretty(&doc)? + "\n"))
}

fn emit_csv(
    out: &Option<PathBuf>,
    header: &serde_json::Value,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut s = String::new();
    s.push_str(&format!("# {}\n", serde_json::to_string(header)?));
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    emit(out, &s)
}

/// Rows as CSV (with the header comment line) or as a JSON document.
fn emit_rows(
    out: &Option<PathBuf>,
    format: OutputFormat,
    header: serde_json::Value,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    match format {
        OutputFormat::Csv => emit_csv(out, &header, columns, rows),
        OutputFormat::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in columns.iter().zip(row.iter()) {
                        let value = v
                            .parse::<f64>()
                            .ok()
                            .and_then(serde_json::Number::from_f64)
                            .map(serde_json::Value::Number)
                            .unwrap_or_else(|| serde_json::Value::String(v.clone()));
                        obj.insert((*k).to_string(), value);
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            emit_json(out, header, serde_json::json!({ "rows": json_rows }))
        }
    }
}

fn read_polynomial(path: &PathBuf) -> Result<CyclicPolynomial> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(polynomial_from_json(&text)?)
}

fn validate_params(
    f: &CyclicPolynomial,
    order: Option<u32>,
    vars: Option<usize>,
) -> Result<()> {
    if let Some(n) = order {
        if n != f.params().order() {
            bail!(
                "order mismatch: file has N = {}, flag says {}",
                f.params().order(),
                n
            );
        }
    }
    if let Some(v) = vars {
        if v != f.params().vars() {
            bail!(
                "variable-count mismatch: file has n = {}, flag says {}",
                f.params().vars(),
                v
            );
        }
    }
    Ok(())
}

/// Deterministic nonzero draw: bumps an internal salt until a nonempty
/// polynomial appears, so every seed is usable.
fn nonzero_random(params: &GroupParams, d: u32, density: f64, seed: u64) -> Result<CyclicPolynomial> {
    for salt in 0..1000u64 {
        let f = random_polynomial(
            params,
            d,
            density,
            CoeffLaw::ComplexGaussian,
            seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
    bail!("could not draw a nonzero polynomial at density {density}");
}

fn bounded_random(params: &GroupParams, d: u32, density: f64, seed: u64, budget: u64) -> Result<CyclicPolynomial> {
    let raw = nonzero_random(params, d, density, seed)?;
    let sup = raw.sup_norm(budget, seed);
    Ok(raw.scale(Complex64::new(1.0 / sup.value, 0.0)))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("CYCLOBH_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1 << 22);
    let cfg = BoundConfig::default();

    match &cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::BhSearch(a) => cmd_bh_search(a, budget, &cfg),
        Command::Sidon(a) => cmd_sidon(a, budget, &cfg),
        Command::Bohr(a) => cmd_bohr(a, budget, &cfg),
        Command::Split(a) => cmd_split(a, budget),
        Command::Maxmod(a) => cmd_maxmod(a, budget),
        Command::Learn(a) => cmd_learn(a, budget, &cfg),
        Command::Junta(a) => cmd_junta(a, budget, &cfg),
        Command::Hw(a) => cmd_hw(a, &cfg),
    }
}

fn cmd_transform(a: &TransformArgs) -> Result<()> {
    let text = fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let header = header_json("transform", 0, a);
    match a.direction {
        Direction::Analyze => {
            let table: SampleTableJson =
                serde_json::from_str(&text).context("parsing sample table")?;
            if let Some(n) = a.order {
                if n != table.order {
                    bail!("order mismatch: file has N = {}, flag says {n}", table.order);
                }
            }
            if let Some(v) = a.vars {
                if v != table.n {
                    bail!("variable-count mismatch: file has n = {}, flag says {v}", table.n);
                }
            }
            let (params, dense) = table.into_dense()?;
            let poly = fourier_analyze(&dense, &params)?;
            emit_json(&a.out, header, serde_json::to_value(PolynomialJson::from(&poly))?)
        }
        Direction::Synthesize => {
            let poly = polynomial_from_json(&text)?;
            validate_params(&poly, a.order, a.vars)?;
            let dense = poly.synthesize(u64::MAX)?;
            let table = SampleTableJson::from_dense(poly.params(), &dense);
            emit_json(&a.out, header, serde_json::to_value(table)?)
        }
    }
}

fn cmd_bh_search(a: &BhSearchArgs, budget: u64, cfg: &BoundConfig) -> Result<()> {
    let params = GroupParams::new(a.order, a.vars)?;
    let report = bh_constant_search(
        &params,
        a.d,
        a.iterations,
        a.restarts,
        a.strategy.into(),
        a.seed,
        budget,
        cfg,
    )?;
    let header = header_json("bh-search", a.seed, a);
    match a.format {
        OutputFormat::Json => {
            let data = serde_json::json!({
                "best_quotient": report.best_quotient,
                "best_polynomial": PolynomialJson::from(&report.best_polynomial),
                "iterations": report.iterations,
                "reference_bound": report.reference_bound,
                "bound_violations": report.bound_violations,
                "trajectory": report.trajectory,
            });
            emit_json(&a.out, header, data)?;
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .trajectory
                .iter()
                .map(|(it, q)| vec![it.to_string(), q.to_string()])
                .collect();
            emit_csv(&a.out, &header, &["iteration", "quotient"], &rows)?;
        }
    }
    if report.bound_violations > 0 {
        return Err(BoundViolation(format!(
            "{} quotients exceeded the explicit bound",
            report.bound_violations
        ))
        .into());
    }
    Ok(())
}

fn cmd_sidon(a: &SidonArgs, budget: u64, cfg: &BoundConfig) -> Result<()> {
    let f = match &a.input {
        Some(path) => {
            let f = read_polynomial(path)?;
            validate_params(&f, a.order, a.vars)?;
            f
        }
        None => {
            let params = GroupParams::new(
                a.order.context("--N required without --in")?,
                a.vars.context("--n required without --in")?,
            )?;
            nonzero_random(&params, a.d, a.density, a.seed)?
        }
    };
    let quotient = sidon_quotient(&f, budget, a.seed)?;
    let bound = sidon_bound(f.params(), a.d, cfg);
    let header = header_json("sidon", a.seed, a);
    emit_json(
        &a.out,
        header,
        serde_json::json!({
            "quotient": quotient,
            "bound": bound,
            "N": f.params().order(),
            "n": f.params().vars(),
            "d": a.d,
        }),
    )?;
    if let Some(b) = bound {
        if quotient > b {
            return Err(BoundViolation(format!("sidon quotient {quotient} > bound {b}")).into());
        }
    }
    Ok(())
}

fn cmd_bohr(a: &BohrArgs, budget: u64, cfg: &BoundConfig) -> Result<()> {
    let params = GroupParams::new(a.order, a.vars)?;
    let bound = bohr_radius_lower_bound(&params, a.d, a.bh_constant, cfg)?;
    let mut check = serde_json::Value::Null;
    let mut violated = None;
    if let Some(path) = &a.check {
        let f = read_polynomial(path)?;
        validate_params(&f, Some(a.order), Some(a.vars))?;
        let rho = a.rho.unwrap_or(bound / 2.0);
        let sup = f.sup_norm(budget, 0);
        let majorant = bohr_majorant(&f, a.d, rho)?;
        let ok = majorant <= sup.value + 1e-9;
        if rho <= bound && sup.certified && sup.value <= 1.0 + 1e-9 && !ok {
            violated = Some(format!(
                "majorant {majorant} exceeds the sup {} at rho {rho} below the bound {bound}",
                sup.value
            ));
        }
        check = serde_json::json!({
            "rho": rho, "majorant": majorant, "sup": sup.value, "within": ok,
        });
    }
    let header = header_json("bohr", 0, a);
    emit_json(
        &a.out,
        header,
        serde_json::json!({ "radius_lower_bound": bound, "check": check }),
    )?;
    if let Some(msg) = violated {
        return Err(BoundViolation(msg).into());
    }
    Ok(())
}

fn cmd_split(a: &SplitArgs, budget: u64) -> Result<()> {
    let f = match &a.input {
        Some(path) => {
            let f = read_polynomial(path)?;
            validate_params(&f, a.order, a.vars)?;
            f
        }
        None => {
            let params = GroupParams::new(
                a.order.context("--N required without --in")?,
                a.vars.context("--n required without --in")?,
            )?;
            nonzero_random(&params, a.d, a.density, a.seed)?
        }
    };
    let dec = full_splitting(&f, a.method.into(), budget, a.seed)?;
    let header = header_json("split", a.seed, a);
    emit_json(
        &a.out,
        header,
        serde_json::to_value(DecompositionJson::from(&dec))?,
    )?;
    if let Some(bounds) = &dec.part_bounds {
        let source = dec.source_sup_norm.value;
        for (norm, bound) in dec.part_sup_norms.iter().zip(bounds) {
            if norm.value / source > *bound {
                return Err(BoundViolation(format!(
                    "part ratio {} exceeds the growth bound {bound}",
                    norm.value / source
                ))
                .into());
            }
        }
    }
    Ok(())
}

fn cmd_maxmod(a: &MaxmodArgs, budget: u64) -> Result<()> {
    let mut header = header_json("maxmod", a.seed, a);
    // Record the disc-route comparison constant alongside the samples.
    if let Ok(params) = GroupParams::new(a.order, a.vars) {
        if let Ok(c) = convex_hull_bh_constant(&params, a.d, None, &TorusBhConfig::default()) {
            header["hull_disc_constant"] = serde_json::json!(c);
        }
    }
    let columns = ["N", "n", "d", "seed", "group_sup", "hull_sup", "ratio"];
    let mut rows = Vec::new();
    let mut violation = None;
    if a.n3_counterexample {
        let w = n3_counterexample();
        let r = hull_sup_estimate(&w.polynomial, a.samples_per_edge.max(2), a.seed, budget);
        rows.push(vec![
            "3".into(),
            "1".into(),
            "2".into(),
            a.seed.to_string(),
            r.group_sup.value.to_string(),
            r.hull_sup.to_string(),
            r.ratio.to_string(),
        ]);
    } else {
        let params = GroupParams::new(a.order, a.vars)?;
        // The partial bound applies on odd orders when the local degree fits
        // the moment-system half.
        let partial_bound = if a.order % 2 == 1 {
            let n_small = (a.order + 1) / 2;
            build_dn_system(n_small)
                .ok()
                .map(|sys| (n_small, gmp_partial_bound(&sys, a.d)))
        } else {
            None
        };
        for idx in 0..a.count {
            let seed = a.seed.wrapping_add(idx as u64);
            let f = random_polynomial(&params, a.d, 0.8, CoeffLaw::ComplexGaussian, seed)?;
            if f.is_zero() {
                continue;
            }
            let r = hull_sup_estimate(&f, a.samples_per_edge, seed, budget);
            if let Some((n_small, bound)) = partial_bound {
                if f.local_degree() <= n_small - 1 && r.ratio > bound {
                    violation = Some(format!(
                        "hull ratio {} exceeds the partial bound {bound}",
                        r.ratio
                    ));
                }
            }
            rows.push(vec![
                a.order.to_string(),
                a.vars.to_string(),
                a.d.to_string(),
                seed.to_string(),
                r.group_sup.value.to_string(),
                r.hull_sup.to_string(),
                r.ratio.to_string(),
            ]);
        }
    }
    emit_rows(&a.out, a.format, header, &columns, &rows)?;
    if let Some(msg) = violation {
        return Err(BoundViolation(msg).into());
    }
    Ok(())
}

fn cmd_learn(a: &LearnArgs, budget: u64, cfg: &BoundConfig) -> Result<()> {
    let params = GroupParams::new(a.order, a.vars)?;
    let truth = match &a.truth {
        Some(path) => {
            let f = read_polynomial(path)?;
            validate_params(&f, Some(a.order), Some(a.vars))?;
            f
        }
        None => bounded_random(&params, a.d, 0.5, a.seed, budget)?,
    };
    let measured = bh_quotient(&truth, a.d, budget, a.seed, cfg)?.quotient;
    let sizes = chernoff_sample_size(
        a.epsilon,
        a.delta,
        a.d,
        a.order,
        a.vars,
        measured.max(1.0),
    )?;
    let b = a.b.unwrap_or(sizes.b);
    let m = a
        .samples
        .or_else(|| sizes.m_b.to_string().parse().ok())
        .context("sample count overflows u64; pass --M explicitly")?;
    let header = header_json("learn", a.seed, a);

    if let Some(grid) = &a.m_grid {
        let counts: Vec<u64> = grid
            .split(',')
            .map(|t| t.trim().parse().context("bad --m-grid entry"))
            .collect::<Result<_>>()?;
        let curve = learning_error_curve(
            &truth,
            a.d,
            &CurveGrid::SampleCounts { counts, b },
            a.trials,
            &[a.epsilon],
            a.seed,
            budget,
        )?;
        let rows: Vec<Vec<String>> = curve
            .points
            .iter()
            .map(|p| {
                vec![
                    p.m.to_string(),
                    p.b.to_string(),
                    p.exhaustive.to_string(),
                    p.median_error_sq.to_string(),
                    p.success_fractions[0].1.to_string(),
                ]
            })
            .collect();
        emit_rows(
            &a.out,
            a.format,
            header,
            &["M", "b", "exhaustive", "median_error_sq", "success_fraction"],
            &rows,
        )
    } else {
        let mut rows = Vec::new();
        for trial in 0..a.trials {
            let seed = a.seed.wrapping_add(1 + trial as u64);
            let rep = learn_from_samples(|t, _| truth.eval_group(t), &params, a.d, b, m, seed)?
                .with_truth(&truth);
            rows.push(vec![
                trial.to_string(),
                m.to_string(),
                b.to_string(),
                rep.a.to_string(),
                rep.surviving.len().to_string(),
                rep.l2_error_sq.unwrap_or(f64::NAN).to_string(),
            ]);
        }
        emit_rows(
            &a.out,
            a.format,
            header,
            &["trial", "M", "b", "a", "surviving", "error_sq"],
            &rows,
        )
    }
}

fn cmd_junta(a: &JuntaArgs, budget: u64, cfg: &BoundConfig) -> Result<()> {
    let f = match &a.input {
        Some(path) => {
            let f = read_polynomial(path)?;
            validate_params(&f, a.order, a.vars)?;
            f
        }
        None => {
            let params = GroupParams::new(
                a.order.context("--N required without --in")?,
                a.vars.context("--n required without --in")?,
            )?;
            bounded_random(&params, a.d, 0.5, a.seed, budget)?
        }
    };
    let measured = bh_quotient(&f, a.d, budget, a.seed, cfg)?.quotient;
    let bh = a.bh_constant.unwrap_or_else(|| measured.max(1.0));
    let rep = junta_approximate(&f, a.d, a.epsilon, bh, budget, a.seed)?;
    let header = header_json("junta", a.seed, a);
    emit_json(
        &a.out,
        header,
        serde_json::json!({
            "k": rep.k,
            "coordinates": rep.coordinates,
            "lambda": rep.lambda,
            "l2_error": rep.l2_error,
            "k_bound": rep.k_bound,
            "kept_indices": rep.kept,
            "measured_quotient": measured,
            "bh_constant": bh,
            "junta": PolynomialJson::from(&rep.junta),
        }),
    )?;
    // With a dominating constant the tail bound is certified; exceeding ε
    // would falsify it.
    if bh >= measured && rep.l2_error > a.epsilon {
        return Err(BoundViolation(format!(
            "junta error {} above ε with a dominating constant",
            rep.l2_error
        ))
        .into());
    }
    Ok(())
}

fn cmd_hw(a: &HwArgs, cfg: &BoundConfig) -> Result<()> {
    let header = header_json("hw", a.seed, a);
    let columns = ["index", "degree", "lhs", "operator_norm", "quotient", "bound"];
    let mut rows = Vec::new();
    let mut violation = None;
    if a.identity_plus_x {
        let one = cyclobh::hw::HwIndex {
            l: vec![0; a.vars.max(1)],
            m: vec![0; a.vars.max(1)],
        };
        let mut l = vec![0u8; a.vars.max(1)];
        l[0] = 1;
        let x = cyclobh::hw::HwIndex {
            l,
            m: vec![0; a.vars.max(1)],
        };
        let obs = cyclobh::hw::HwObservable::from_terms(
            a.order,
            a.vars.max(1),
            [
                (one, Complex64::new(1.0, 0.0)),
                (x, Complex64::new(1.0, 0.0)),
            ],
        )?;
        let q = hw_bh_quotient(&obs, 1, a.seed, DEFAULT_DENSE_BUDGET, cfg)?;
        rows.push(vec![
            "identity_plus_x".into(),
            q.d.to_string(),
            q.lhs.to_string(),
            q.rhs.to_string(),
            q.quotient.to_string(),
            q.reference_bound.map_or("n/a".into(), |b| b.to_string()),
        ]);
        if let Some(b) = q.reference_bound {
            if q.quotient > b {
                violation = Some(format!("quotient {} above {b}", q.quotient));
            }
        }
    } else {
        let mut produced = 0u32;
        let mut seed = a.seed;
        while produced < a.count {
            let obs = random_observable(a.order, a.vars, a.d, 0.5, seed)?;
            seed = seed.wrapping_add(1);
            if obs.is_zero() {
                continue;
            }
            let q = hw_bh_quotient(&obs, a.d, seed, DEFAULT_DENSE_BUDGET, cfg)?;
            if let Some(b) = q.reference_bound {
                if q.quotient > b {
                    violation = Some(format!("quotient {} above {b}", q.quotient));
                }
            }
            rows.push(vec![
                produced.to_string(),
                obs.degree().to_string(),
                q.lhs.to_string(),
                q.rhs.to_string(),
                q.quotient.to_string(),
                q.reference_bound.map_or("n/a".into(), |b| b.to_string()),
            ]);
            produced += 1;
        }
    }
    emit_rows(&a.out, a.format, header, &columns, &rows)?;
    if let Some(msg) = violation {
        return Err(BoundViolation(msg).into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{TOOL}: {err:#}");
            if err.downcast_ref::<BoundViolation>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
