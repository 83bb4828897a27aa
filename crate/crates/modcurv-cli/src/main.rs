use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use modcurv::hypergeo::{
    appell_f1, appell_f2, gauss_2f1, kummer_1f1, lauricella_fd, AppellF1Params, AppellF2Params, EvalResult,
    GaussParams, LauricellaParams, Method,
};
use modcurv::report::RelationReport;
use modcurv::spectral::{self, SpectralIndex};
use modcurv::suites::{self, GridSpec, Suite, Tolerances};
use modcurv::symbol;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// println that stops quietly when stdout is a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        if let Err(e) = writeln!(out, $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

#[derive(Parser)]
#[command(name = "modcurv", version, about = "Hypergeometric spectral functions and their identity checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one function at one point.
    ///
    /// Hypergeometric functions take positional numbers:
    ///   2f1 a b c z | 1f1 a b z | f1 a b b' c x y | f2 a b b' c c' x y |
    ///   fd a c α1..αn x1..xn.
    /// Spectral functions take flags: K --a --b --m --y, H --a --b --c --m --y1 --y2,
    /// Kdelta/Tdelta --s --m, Hdelta --s --t --m.
    Eval(EvalArgs),
    /// Run a relation suite and report residuals.
    Verify(VerifyArgs),
    /// Print the symbolic b2 derivation.
    DeriveB2(DeriveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Func {
    #[value(name = "2f1")]
    F21,
    #[value(name = "1f1")]
    F11,
    #[value(name = "f1")]
    F1,
    #[value(name = "f2")]
    F2,
    #[value(name = "fd")]
    Fd,
    #[value(name = "K")]
    K,
    #[value(name = "H")]
    H,
    #[value(name = "Kdelta")]
    Kdelta,
    #[value(name = "Hdelta")]
    Hdelta,
    #[value(name = "Tdelta")]
    Tdelta,
}

#[derive(clap::Args)]
struct EvalArgs {
    function: Func,
    #[arg(allow_negative_numbers = true)]
    values: Vec<f64>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    #[arg(long)]
    y1: Option<f64>,
    #[arg(long)]
    y2: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    suite: String,
    /// Comma-separated m values.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<f64>>,
    /// Comma-separated first arguments.
    #[arg(long, value_delimiter = ',')]
    args: Option<Vec<f64>>,
    /// Comma-separated second arguments of the two-variable functions.
    #[arg(long, value_delimiter = ',')]
    args2: Option<Vec<f64>>,
    #[arg(long)]
    exclusion_radius: Option<f64>,
    /// Key-value file with grid lists and tolerances.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for <suite>.json and <suite>.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only print failing relations and the summary.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Paper,
    Json,
}

#[derive(clap::Args)]
struct DeriveArgs {
    #[arg(long, value_enum, default_value = "paper")]
    format: Format,
    /// Compare the decomposition numerically against the closed forms.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    #[arg(long, default_value_t = 4.0)]
    m: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = set_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let res = match cli.cmd {
        Cmd::Eval(a) => eval(&a).map(|_| ExitCode::SUCCESS),
        Cmd::Verify(a) => verify(&a),
        Cmd::DeriveB2(a) => derive_b2(&a),
    };
    res.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}

fn set_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("MODCURV_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("MODCURV_THREADS={v:?} is not a count"))?;
    if n == 0 {
        bail!("MODCURV_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

#[derive(Serialize)]
struct Evaluated {
    function: String,
    value: f64,
    est_error: f64,
    method: String,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Series => "series",
        Method::Pfaff => "pfaff-series",
        Method::SingleSum => "single-sum",
        Method::Quadrature => "quadrature",
        Method::ClosedForm => "closed-form",
    }
}

fn need<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing --{flag}"))
}

fn positional(a: &EvalArgs, n: usize, usage: &str) -> anyhow::Result<()> {
    if a.values.len() != n {
        bail!("expected {n} numbers: {usage}");
    }
    Ok(())
}

fn from_result(r: EvalResult) -> (f64, f64, String) {
    (r.value, r.est_error, method_name(r.method).to_string())
}

/// Closed form with the distance to its hypergeometric combination as error.
fn closed(value: f64, hyper: f64) -> (f64, f64, String) {
    (value, (value - hyper).abs(), "closed-form".to_string())
}

fn eval(a: &EvalArgs) -> anyhow::Result<()> {
    let v = &a.values;
    let (value, est_error, method) = match a.function {
        Func::F21 => {
            positional(a, 4, "2f1 a b c z")?;
            from_result(gauss_2f1(&GaussParams::new(v[0], v[1], v[2])?, v[3])?)
        }
        Func::F11 => {
            positional(a, 3, "1f1 a b z")?;
            from_result(kummer_1f1(v[0], v[1], v[2])?)
        }
        Func::F1 => {
            positional(a, 6, "f1 a b b' c x y")?;
            from_result(appell_f1(&AppellF1Params::new(v[0], v[1], v[2], v[3])?, v[4], v[5])?)
        }
        Func::F2 => {
            positional(a, 7, "f2 a b b' c c' x y")?;
            from_result(appell_f2(&AppellF2Params::new(v[0], v[1], v[2], v[3], v[4])?, v[5], v[6])?)
        }
        Func::Fd => {
            if v.len() < 4 || v.len() % 2 != 0 {
                bail!("expected fd a c α1..αn x1..xn with n >= 1");
            }
            let n = (v.len() - 2) / 2;
            let p = LauricellaParams::new(v[0], v[2..2 + n].to_vec(), v[1])?;
            from_result(lauricella_fd(&p, &v[2 + n..])?)
        }
        Func::K => {
            let idx = SpectralIndex::k(need(a.a, "a")?, need(a.b, "b")?, need(a.m, "m")?)?;
            let y = need(a.y, "y")?;
            if !(y > 0.0) {
                bail!("--y must be positive");
            }
            let g = modcurv::gamma::gamma_ratio(idx.degree(), idx.weight());
            let r = gauss_2f1(&GaussParams::new(idx.degree(), idx.b as f64, idx.weight())?, 1.0 - y)?;
            (g * r.value, g.abs() * r.est_error, method_name(r.method).to_string())
        }
        Func::H => {
            let idx = SpectralIndex::h(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?, need(a.m, "m")?)?;
            let (y1, y2) = (need(a.y1, "y1")?, need(a.y2, "y2")?);
            if !(y1 > 0.0 && y2 > 0.0) {
                bail!("--y1 and --y2 must be positive");
            }
            let g = modcurv::gamma::gamma_ratio(idx.degree(), idx.weight());
            let p = AppellF1Params::new(idx.degree(), idx.c.unwrap_or(1) as f64, idx.b as f64, idx.weight())?;
            let r = appell_f1(&p, 1.0 - y1 * y2, 1.0 - y1)?;
            (g * r.value, g.abs() * r.est_error, method_name(r.method).to_string())
        }
        Func::Kdelta => {
            let (s, m) = (need(a.s, "s")?, need(a.m, "m")?);
            spectral::k_delta(s, m)?;
            closed(spectral::k_delta_closed(s, m), spectral::k_delta_hyper(s, m)?)
        }
        Func::Hdelta => {
            let (s, t, m) = (need(a.s, "s")?, need(a.t, "t")?, need(a.m, "m")?);
            spectral::h_delta(s, t, m)?;
            closed(spectral::h_delta_closed(s, t, m), spectral::h_delta_hyper(s, t, m)?)
        }
        Func::Tdelta => {
            let (s, m) = (need(a.s, "s")?, need(a.m, "m")?);
            spectral::t_delta(s, m)?;
            closed(spectral::t_delta_closed(s, m), spectral::t_delta_hyper(s, m)?)
        }
    };
    // a value inside its own error bar is indistinguishable from zero
    let value = if value.abs() <= est_error { 0.0 } else { value };
    let name = a.function.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default();
    if a.json {
        say!("{}", serde_json::to_string(&Evaluated { function: name, value, est_error, method })?);
    } else {
        say!("{value}");
        say!("est_error {est_error:e}");
        say!("method {method}");
    }
    Ok(())
}

/// Grid and tolerances from an optional key-value file, then the flags.
fn load_config(a: &VerifyArgs) -> anyhow::Result<(GridSpec, Tolerances)> {
    let mut grid = GridSpec::default();
    let mut tol = Tolerances::default();
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        apply_config(&text, &mut grid, &mut tol)?;
    }
    if let Some(m) = &a.m {
        grid.m_values = m.clone();
    }
    if let Some(v) = &a.args {
        grid.arg_values = v.clone();
    }
    if let Some(v) = &a.args2 {
        grid.second_args = v.clone();
    }
    if let Some(r) = a.exclusion_radius {
        grid.exclusion_radius = r;
    }
    grid.validate()?;
    Ok((grid, tol))
}

fn parse_list(v: &str) -> anyhow::Result<Vec<f64>> {
    v.split(',').map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?}"))).collect()
}

/// Lines `key = value`; `#` starts a comment. Grid keys are `m`, `args`,
/// `args2` and `exclusion_radius`; every other key names a tolerance.
fn apply_config(text: &str, grid: &mut GridSpec, tol: &mut Tolerances) -> anyhow::Result<()> {
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
        let (k, v) = (k.trim(), v.trim());
        let ctx = || format!("line {}", n + 1);
        match k {
            "m" => grid.m_values = parse_list(v).with_context(ctx)?,
            "args" => grid.arg_values = parse_list(v).with_context(ctx)?,
            "args2" => grid.second_args = parse_list(v).with_context(ctx)?,
            "exclusion_radius" => grid.exclusion_radius = v.parse().with_context(ctx)?,
            _ => tol.set(k, v.parse().with_context(ctx)?).with_context(ctx)?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    suite: &'a str,
    passed: bool,
    reports: &'a [RelationReport],
}

fn write_reports(dir: &Path, suite: &str, reports: &[RelationReport]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let passed = reports.iter().all(|r| r.passed);
    let json = serde_json::to_string_pretty(&ReportFile { suite, passed, reports })?;
    fs::write(dir.join(format!("{suite}.json")), json)?;
    let mut w = csv::Writer::from_path(dir.join(format!("{suite}.csv")))?;
    w.write_record(["relation_id", "point", "residual"])?;
    for r in reports {
        for p in &r.points {
            let pt = p.point.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
            w.write_record([r.relation_id.as_str(), &pt, &p.residual.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn verify(a: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let suite: Suite = a.suite.parse()?;
    let (grid, tol) = load_config(a)?;
    let reports = suites::run(suite, &grid, &tol)?;
    for r in &reports {
        if a.quiet && r.passed {
            continue;
        }
        let mut line = format!(
            "{} {} max={:.3e} tol={:.1e} points={}",
            if r.passed { "PASS" } else { "FAIL" },
            r.relation_id,
            r.max_abs_residual,
            r.tolerance,
            r.points.len()
        );
        if let Some(c) = &r.fitted_constants {
            let fits: BTreeMap<_, _> = c.iter().map(|(k, v)| (k.as_str(), format!("{v:.12}"))).collect();
            line += &format!(" fitted={fits:?}");
        }
        say!("{line}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    say!("{suite}: {} relations, {failed} failed", reports.len());
    if let Some(dir) = &a.out {
        write_reports(dir, suite.name(), &reports)?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct Derivation {
    b2: Vec<String>,
    sphere_average_terms: Vec<String>,
    sphere_average: Vec<String>,
    normalized: Vec<String>,
    coefficients: BTreeMap<String, String>,
    decomposition: symbol::SpectralDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation: Option<f64>,
}

fn derive_b2(a: &DeriveArgs) -> anyhow::Result<ExitCode> {
    let b2 = symbol::build_b2();
    let terms = symbol::sphere_average_terms(&b2)?;
    let avg = symbol::sphere_average(&b2)?;
    let normalized = symbol::normalize_k_left(&avg)?;
    let dec = symbol::decompose_spectral(&normalized)?;
    let dev = if a.check { Some(symbol::numeric_crosscheck(&dec, a.s, a.t, a.m)?) } else { None };
    let coefficients = dec
        .entries
        .iter()
        .map(|e| {
            let key = match e.modular_prefactor {
                0 => e.family.to_string(),
                1 => format!("y1 {}", e.family),
                w => format!("y1^{w} {}", e.family),
            };
            (key, e.coeff.to_string())
        })
        .collect();
    let out = Derivation {
        b2: b2.words().iter().map(|w| w.to_string()).collect(),
        sphere_average_terms: terms.iter().map(|w| w.to_string()).collect(),
        sphere_average: avg.words().iter().map(|w| w.to_string()).collect(),
        normalized: normalized.words().iter().map(|w| w.to_string()).collect(),
        coefficients,
        decomposition: dec,
        max_deviation: dev,
    };
    match a.format {
        Format::Json => say!("{}", serde_json::to_string_pretty(&out)?),
        Format::Paper => {
            say!("b2 ({} terms):", out.b2.len());
            for w in &out.b2 {
                say!("  {w}");
            }
            say!("sphere average, term by term ({} terms):", out.sphere_average_terms.len());
            for w in &out.sphere_average_terms {
                say!("  {w}");
            }
            say!("with k moved to the left ({} terms):", out.normalized.len());
            for w in &out.normalized {
                say!("  {w}");
            }
            say!("spectral decomposition:");
            say!("{}", out.decomposition);
            if let Some(d) = dev {
                say!("max deviation at (s, t, m) = ({}, {}, {}): {d:e}", a.s, a.t, a.m);
            }
        }
    }
    Ok(match dev {
        Some(d) if !(d <= a.tol) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}
