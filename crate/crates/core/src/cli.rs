//! Command-line front end.
//!
//! Every subcommand produces a table. CSV output has a header row and prints
//! floats with 17 significant digits; JSON output is
//! `{"meta": {...}, "rows": [...]}` plus a `summary` object for the checking
//! commands. Data goes to stdout, diagnostics to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::dihedral::{DihedralGroup, OrbitPairings, PlanePoint, C64};
use crate::error::{DunklError, Result};
use crate::kernel::{
    check_ek_bound, check_em_bound, delta_effective, ek_integral, ek_integral_with, ek_series, ek_sigma_closed,
    IntegralOptions, KernelResult,
};
use crate::metrics::{component_scales, rel_error, scaled_error};
use crate::polyalg::{oracle_em_sequence, ParameterK};
use crate::recurrence::em_sequence;
use crate::series::{a_coeffs, em_closed_sigma_sequence, em_genseries_sequence, truncation_order, RadiusGuard};

/// Largest degree compared against the symbolic oracle in `crosscheck`.
const ORACLE_MAX_DEGREE: usize = 12;
/// Largest `δa` at which `crosscheck` runs the integral path; its rounding
/// error grows like `e^{2δa}`.
const INTEGRAL_MAX_DELTA_A: f64 = 4.0;
/// Slack allowed on the component bound ratio.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "dunkl", version, about = "Dunkl kernel for dihedral groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homogeneous components E_0 .. E_{m-max}.
    Em(JobArgs),
    /// The kernel E_k(x, y).
    Kernel(JobArgs),
    /// Pairwise method discrepancies over seeded random instances.
    Crosscheck(JobArgs),
    /// Growth bound ratios.
    Bounds(JobArgs),
    /// Taylor coefficients of the generating function.
    Phi(JobArgs),
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Dihedral order.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Multiplicity, "re" or "re,im".
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub k: String,
    /// First point, "a,b" or "a,b,c,d" for (a+ic, b+id).
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub x: String,
    /// Second point, same format as --x.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, default_value_t = 10)]
    pub m_max: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances for crosscheck; 0 checks the --n/--k/--x/--y instance.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Integer ν with Re γ > -ν for the bounds.
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    /// Contour radius for the integral path.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Recurrence,
    Genseries,
    Oracle,
    Sigma,
    Series,
    Integral,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Recurrence => "recurrence",
            Method::Genseries => "genseries",
            Method::Oracle => "oracle",
            Method::Sigma => "sigma",
            Method::Series => "series",
            Method::Integral => "integral",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Parsed and validated job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub group: DihedralGroup,
    pub param: ParameterK,
    pub x: PlanePoint,
    pub y: PlanePoint,
    pub args: JobArgs,
}

fn parse_numbers(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| DunklError::Domain(format!("cannot parse {what} component {t:?}")))
        })
        .collect()
}

pub fn parse_complex(s: &str) -> Result<C64> {
    match parse_numbers(s, "k")?.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(DunklError::Domain(format!("expected \"re\" or \"re,im\", got {s:?}"))),
    }
}

pub fn parse_point(s: &str) -> Result<PlanePoint> {
    let p = match parse_numbers(s, "point")?.as_slice() {
        [a, b] => PlanePoint::real(*a, *b),
        [a, b, c, d] => PlanePoint::new(C64::new(*a, *c), C64::new(*b, *d)),
        _ => return Err(DunklError::Domain(format!("expected \"a,b\" or \"a,b,c,d\", got {s:?}"))),
    };
    if !p.is_finite() {
        return Err(DunklError::Domain(format!("point {s:?} is not finite")));
    }
    Ok(p)
}

impl JobSpec {
    pub fn from_args(args: &JobArgs) -> Result<Self> {
        let group = DihedralGroup::new(args.n)?;
        let param = ParameterK::new(args.n, parse_complex(&args.k)?)?;
        if !(args.tol > 0.0 && args.tol.is_finite()) {
            return Err(DunklError::Domain(format!("--tol must be positive (got {})", args.tol)));
        }
        Ok(Self { group, param, x: parse_point(&args.x)?, y: parse_point(&args.y)?, args: args.clone() })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Missing, Cell::Float)
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    summary: Vec<(&'static str, Cell)>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), summary: Vec::new() }
    }

    fn render(&self, job: &JobSpec) -> String {
        match job.args.format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("meta".into(), meta(job));
                doc.insert("rows".into(), Value::Array(rows));
                if !self.summary.is_empty() {
                    let s: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
                    doc.insert("summary".into(), Value::Object(s));
                }
                let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values are serialisable");
                out.push('\n');
                out
            }
        }
    }

    fn summary_text(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k} = {}\n", v.csv())).collect()
    }
}

fn point_json(p: &PlanePoint) -> Value {
    json!([p.x1.re, p.x1.im, p.x2.re, p.x2.im])
}

fn meta(job: &JobSpec) -> Value {
    json!({
        "n": job.param.n,
        "k": [job.param.k.re, job.param.k.im],
        "x": point_json(&job.x),
        "y": point_json(&job.y),
        "method": job.args.method.name(),
        "tol": job.args.tol,
        "seed": job.args.seed,
    })
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

impl Outcome {
    fn failure(e: &DunklError) -> Self {
        Self { stdout: String::new(), stderr: format!("error[{}]: {e}\n", e.code()), status: e.exit_code() }
    }
}

type Handler = fn(&JobSpec) -> Result<(Table, bool)>;

pub fn execute(cli: &Cli) -> Outcome {
    let (args, f): (&JobArgs, Handler) = match &cli.command {
        Command::Em(a) => (a, cmd_em),
        Command::Kernel(a) => (a, cmd_kernel),
        Command::Crosscheck(a) => (a, cmd_crosscheck),
        Command::Bounds(a) => (a, cmd_bounds),
        Command::Phi(a) => (a, cmd_phi),
    };
    let run = || -> Result<Outcome> {
        let job = JobSpec::from_args(args)?;
        let (table, ok) = with_threads(|| f(&job))?;
        Ok(Outcome { stdout: table.render(&job), stderr: table.summary_text(), status: if ok { 0 } else { 1 } })
    };
    run().unwrap_or_else(|e| Outcome::failure(&e))
}

/// Runs `f` on a pool capped by `DUNKL_THREADS` when that variable is set.
fn with_threads<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match std::env::var("DUNKL_THREADS") {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .map_err(|_| DunklError::Domain(format!("DUNKL_THREADS must be a positive integer (got {v:?})")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| DunklError::Consistency(format!("cannot build thread pool: {e}")))?;
            pool.install(f)
        }
        Err(_) => f(),
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let out = execute(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.status
}

fn unsupported(method: Method, command: &str) -> DunklError {
    DunklError::Domain(format!("method {} is not available for {command}", method.name()))
}

fn em_values(job: &JobSpec) -> Result<Vec<C64>> {
    let (g, p, x, y, m) = (&job.group, &job.param, &job.x, &job.y, job.args.m_max);
    match job.args.method {
        Method::Auto | Method::Recurrence => em_sequence(g, p, x, y, m),
        Method::Genseries => {
            let orbit = OrbitPairings::new(g, x, y);
            let s = a_coeffs(p, &orbit, m)?;
            em_genseries_sequence(p, &orbit, &s, m)
        }
        Method::Oracle => oracle_em_sequence(g, p, x, y, m),
        Method::Sigma => em_closed_sigma_sequence(g, p, x, y, m),
        other => Err(unsupported(other, "em")),
    }
}

fn cmd_em(job: &JobSpec) -> Result<(Table, bool)> {
    let mut t = Table::new(vec!["m", "re", "im"]);
    for (m, v) in em_values(job)?.into_iter().enumerate() {
        t.rows.push(vec![Cell::Int(m as u64), Cell::Float(v.re), Cell::Float(v.im)]);
    }
    Ok((t, true))
}

fn kernel_value(job: &JobSpec) -> Result<KernelResult> {
    let (g, p, x, y, tol) = (&job.group, &job.param, &job.x, &job.y, job.args.tol);
    match job.args.method {
        Method::Auto | Method::Series => ek_series(g, p, x, y, tol),
        Method::Integral => ek_integral_with(g, p, x, y, &IntegralOptions { tol, rho: job.args.rho }),
        Method::Sigma => ek_sigma_closed(g, p, x, y, tol),
        other => Err(unsupported(other, "kernel")),
    }
}

fn cmd_kernel(job: &JobSpec) -> Result<(Table, bool)> {
    let r = kernel_value(job)?;
    let mut t = Table::new(vec!["re", "im", "method", "count", "error_estimate"]);
    t.rows.push(vec![
        Cell::Float(r.value.re),
        Cell::Float(r.value.im),
        Cell::Text(r.method.to_string()),
        Cell::Int(r.count as u64),
        Cell::Float(r.error_estimate),
    ]);
    Ok((t, true))
}

fn cmd_phi(job: &JobSpec) -> Result<(Table, bool)> {
    let orbit = OrbitPairings::new(&job.group, &job.x, &job.y);
    let delta = delta_effective(&job.param).delta_effective;
    let guard = RadiusGuard::new(orbit.a_bound, delta);
    let rho = if orbit.a_bound > 0.0 { guard.rho_default } else { 1.0 };
    let order = truncation_order(&job.param, orbit.a_bound, delta, rho, job.args.tol, job.args.m_max)?;
    let s = a_coeffs(&job.param, &orbit, order)?;
    let mut t = Table::new(vec!["p", "re", "im"]);
    for (p, v) in s.phi.iter().enumerate() {
        t.rows.push(vec![Cell::Int(p as u64), Cell::Float(v.re), Cell::Float(v.im)]);
    }
    Ok((t, true))
}

fn cmd_bounds(job: &JobSpec) -> Result<(Table, bool)> {
    let (g, p) = (&job.group, &job.param);
    let em = check_em_bound(g, p, &job.x, &job.y, job.args.m_max, job.args.nu)?;
    let grid: Vec<(PlanePoint, PlanePoint)> = (0..=16).map(|j| (job.x.scale(j as f64 / 8.0), job.y)).collect();
    let ek = check_ek_bound(g, p, &grid, job.args.nu)?;
    let mut t = Table::new(vec!["kind", "index", "ratio"]);
    for (m, r) in em.ratios.iter().enumerate() {
        t.rows.push(vec![Cell::Text("em".into()), Cell::Int(m as u64), Cell::Float(*r)]);
    }
    for (i, r) in ek.ratios.iter().enumerate() {
        t.rows.push(vec![Cell::Text("ek".into()), Cell::Int(i as u64), Cell::Float(*r)]);
    }
    let ok = em.max_ratio <= 1.0 + BOUND_SLACK && ek.sup_ratio <= ek.constant;
    t.summary = vec![
        ("delta", Cell::Float(em.delta)),
        ("em_max_ratio", Cell::Float(em.max_ratio)),
        ("ek_sup_ratio", Cell::Float(ek.sup_ratio)),
        ("ek_constant", Cell::Float(ek.constant)),
        ("pass", Cell::Text(ok.to_string())),
    ];
    Ok((t, ok))
}

/// One crosscheck instance.
#[derive(Clone, Debug)]
struct Instance {
    group: DihedralGroup,
    param: ParameterK,
    x: PlanePoint,
    y: PlanePoint,
}

/// Largest pairwise discrepancies for one instance; `None` when a method does not apply.
#[derive(Clone, Debug, Default)]
struct Discrepancy {
    delta_a: f64,
    em: f64,
    sigma: Option<f64>,
    kernel: Option<f64>,
}

impl Discrepancy {
    fn max(&self) -> f64 {
        [Some(self.em), self.sigma, self.kernel].into_iter().flatten().fold(0.0, f64::max)
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> PlanePoint {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    PlanePoint::real(r * theta.cos(), r * theta.sin())
}

/// Draws `count` instances; every fifth one has `x` on the mirror of `σ`.
fn draw_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = [2usize, 3, 4, 5, 7][rng.gen_range(0..5)];
            let param = loop {
                let k = C64::new(rng.gen_range(-0.3..1.0), rng.gen_range(-0.5..0.5));
                if let Ok(p) = ParameterK::new(n, k) {
                    if p.regularity_margin() >= 0.1 {
                        break p;
                    }
                }
            };
            let mut x = random_point(&mut rng);
            let y = random_point(&mut rng);
            if i % 5 == 0 {
                x = PlanePoint::real(x.x1.re, 0.0);
            }
            Instance { group: DihedralGroup::new(n).expect("n ≥ 2"), param, x, y }
        })
        .collect()
}

fn check_instance(inst: &Instance, m_max: usize) -> Result<Discrepancy> {
    let (g, p, x, y) = (&inst.group, &inst.param, &inst.x, &inst.y);
    let orbit = OrbitPairings::new(g, x, y);
    let delta_a = delta_effective(p).delta_effective * orbit.a_bound;
    let scales = component_scales(p.gamma, orbit.a_bound, m_max);
    let worst = |a: &[C64], b: &[C64]| {
        a.iter().zip(b).zip(&scales).map(|((u, v), s)| scaled_error(*u, *v, *s)).fold(0.0, f64::max)
    };

    let rec = em_sequence(g, p, x, y, m_max)?;
    let s = a_coeffs(p, &orbit, m_max)?;
    let gen = em_genseries_sequence(p, &orbit, &s, m_max)?;
    let oracle = oracle_em_sequence(g, p, x, y, m_max.min(ORACLE_MAX_DEGREE))?;
    let em = worst(&rec, &gen).max(worst(&rec, &oracle));

    let symmetric = orbit.is_sigma_symmetric(1e-12);
    let series = ek_series(g, p, x, y, 1e-14)?.value;
    let mut sigma = None;
    if symmetric {
        let closed = em_closed_sigma_sequence(g, p, x, y, m_max)?;
        let ek = ek_sigma_closed(g, p, x, y, 1e-14)?.value;
        sigma = Some(worst(&rec, &closed).max(rel_error(series, ek)));
    }
    let kernel = if p.gamma.re > 0.0 && delta_a <= INTEGRAL_MAX_DELTA_A {
        Some(rel_error(series, ek_integral(g, p, x, y, 1e-11)?.value))
    } else {
        None
    };
    Ok(Discrepancy { delta_a, em, sigma, kernel })
}

fn cmd_crosscheck(job: &JobSpec) -> Result<(Table, bool)> {
    if job.args.samples == 0 {
        return crosscheck_single(job);
    }
    let instances = draw_instances(job.args.seed, job.args.samples);
    let results: Vec<Result<Discrepancy>> =
        instances.par_iter().map(|inst| check_instance(inst, job.args.m_max)).collect();
    let mut t = Table::new(vec![
        "sample", "n", "k_re", "k_im", "x1", "x2", "y1", "y2", "delta_a", "em", "sigma", "kernel", "pass",
    ]);
    let mut worst = 0.0f64;
    let mut failures = 0u64;
    for (i, (inst, res)) in instances.iter().zip(results).enumerate() {
        let d = res?;
        let pass = d.max() <= job.args.tol;
        worst = worst.max(d.max());
        failures += u64::from(!pass);
        t.rows.push(vec![
            Cell::Int(i as u64),
            Cell::Int(inst.param.n as u64),
            Cell::Float(inst.param.k.re),
            Cell::Float(inst.param.k.im),
            Cell::Float(inst.x.x1.re),
            Cell::Float(inst.x.x2.re),
            Cell::Float(inst.y.x1.re),
            Cell::Float(inst.y.x2.re),
            Cell::Float(d.delta_a),
            Cell::Float(d.em),
            opt(d.sigma),
            opt(d.kernel),
            Cell::Text(pass.to_string()),
        ]);
    }
    t.summary = vec![
        ("samples", Cell::Int(instances.len() as u64)),
        ("max_discrepancy", Cell::Float(worst)),
        ("failures", Cell::Int(failures)),
    ];
    Ok((t, failures == 0))
}

/// Per-method values for the instance given on the command line.
fn crosscheck_single(job: &JobSpec) -> Result<(Table, bool)> {
    let (g, p, x, y, m) = (&job.group, &job.param, &job.x, &job.y, job.args.m_max);
    let orbit = OrbitPairings::new(g, x, y);
    let mut t = Table::new(vec!["method", "quantity", "re", "im"]);
    let mut push = |method: &str, quantity: &str, v: C64| {
        t.rows.push(vec![Cell::Text(method.into()), Cell::Text(quantity.into()), Cell::Float(v.re), Cell::Float(v.im)]);
    };
    let em_label = format!("E_{m}");
    let rec = em_sequence(g, p, x, y, m)?;
    push("recurrence", &em_label, rec[m]);
    if p.require_nonzero_gamma().is_ok() {
        let s = a_coeffs(p, &orbit, m)?;
        push("genseries", &em_label, em_genseries_sequence(p, &orbit, &s, m)?[m]);
    }
    if m <= ORACLE_MAX_DEGREE {
        push("oracle", &em_label, oracle_em_sequence(g, p, x, y, m)?[m]);
    }
    let symmetric = orbit.is_sigma_symmetric(1e-12);
    if symmetric {
        push("sigma", &em_label, em_closed_sigma_sequence(g, p, x, y, m)?[m]);
    }
    let series = ek_series(g, p, x, y, job.args.tol)?;
    push(&series.method.to_string(), "E_k", series.value);
    if p.gamma.re > 0.0 {
        push("integral", "E_k", ek_integral(g, p, x, y, job.args.tol)?.value);
    }
    if symmetric {
        push("sigma", "E_k", ek_sigma_closed(g, p, x, y, job.args.tol)?.value);
    }
    Ok((t, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut full = vec!["dunkl"];
        full.extend_from_slice(args);
        execute(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("-0.5, 2").unwrap(), C64::new(-0.5, 2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_point("1,2").unwrap(), PlanePoint::real(1.0, 2.0));
        assert_eq!(parse_point("1,2,3,4").unwrap(), PlanePoint::new(C64::new(1.0, 3.0), C64::new(2.0, 4.0)));
        assert!(parse_point("1").is_err());
        assert!(parse_point("a,b").is_err());
    }

    #[test]
    fn em_rows() {
        let out = run_args(&["em", "--n", "3", "--k", "0.5", "--x", "1,0", "--y", "1,1", "--m-max", "5"]);
        assert_eq!(out.status, 0);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "m,re,im");
        let cols: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert!((cols[1] - 1.0 / 2.5).abs() < 1e-15);
        assert!(lines[1].starts_with("0,1.0000000000000000e0,"));
    }

    #[test]
    fn domain_error_exit_code() {
        let out = run_args(&["em", "--n", "3", "--k=-0.5"]);
        assert_eq!(out.status, 2);
        assert!(out.stderr.starts_with("error[domain]"), "{}", out.stderr);
        assert!(out.stderr.contains("γ = -1.5 violates regularity"));
        let out = run_args(&["kernel", "--method", "oracle"]);
        assert_eq!(out.status, 2);
    }

    #[test]
    fn json_schema() {
        let out = run_args(&["kernel", "--x", "0,0", "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["meta"]["n"], json!(3));
        assert_eq!(v["meta"]["method"], json!("auto"));
        assert_eq!(v["rows"][0]["re"], json!(1.0));
        assert_eq!(v["rows"][0]["im"], json!(0.0));
    }

    #[test]
    fn instances_are_reproducible() {
        let a = draw_instances(7, 10);
        let b = draw_instances(7, 10);
        for (u, v) in a.iter().zip(&b) {
            assert_eq!(u.param, v.param);
            assert_eq!(u.x, v.x);
            assert_eq!(u.y, v.y);
        }
        assert_eq!(a[0].x.x2, C64::new(0.0, 0.0));
        assert!(a.iter().all(|i| i.param.regularity_margin() >= 0.1));
    }
}
