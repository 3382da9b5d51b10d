//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code:
//! 0 success, 2 configuration error, 3 numerical failure, 4 verification failure.

pub mod curve_io;
pub mod formats;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::correspondence::EuclideanPoint;
use crate::error::Error;
use crate::incidence::{degree_genus, lines_through_point, IncidenceResult};
use crate::lagrangian::{trace_locus, TraceConfig};
use crate::ruled::{build_ruled_surface, edge_of_regression, DEFAULT_N_R, DEFAULT_R_RANGE};
use crate::spectral::{branch_points, reality_check, SpectralCurve};
use crate::verify::{verify_all, verify_curve, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidCurve(_) | Error::Domain(_) | Error::SingularCurve(_) => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Obj,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "minitwistor", about = "Lagrangian curves, flat ruled surfaces and caustics of spectral curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Builtin name (charge2:k=<k>, charge3) or path to a JSON curve file.
    #[arg(long, default_value = "charge2:k=0.8", global = true)]
    pub curve: String,
    /// Grid cells per chart axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Half-width of each chart square.
    #[arg(long, global = true)]
    pub window: Option<f64>,
    #[arg(long = "r-min", global = true, allow_hyphen_values = true)]
    pub r_min: Option<f64>,
    #[arg(long = "r-max", global = true, allow_hyphen_values = true)]
    pub r_max: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Restrict output to one format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Multiplies verification tolerances.
    #[arg(long = "tol-scale", default_value_t = 1.0, global = true)]
    pub tol_scale: f64,
}

impl RunConfig {
    pub fn trace_config(&self) -> Result<TraceConfig, CliError> {
        let mut cfg = TraceConfig::default();
        if let Some(n) = self.grid {
            cfg.grid_n = n;
        }
        if let Some(w) = self.window {
            cfg.window = w;
        }
        cfg.validate().map_err(|e| CliError::config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn r_range(&self) -> Result<(f64, f64), CliError> {
        let r = (self.r_min.unwrap_or(DEFAULT_R_RANGE.0), self.r_max.unwrap_or(DEFAULT_R_RANGE.1));
        if !(r.0 < r.1) || !r.0.is_finite() || !r.1.is_finite() {
            return Err(CliError::config(format!("invalid r range [{}, {}]", r.0, r.1)));
        }
        Ok(r)
    }

    fn out_dir(&self) -> Result<PathBuf, CliError> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)?;
        Ok(dir)
    }

    fn wants(&self, f: Format, default: bool) -> bool {
        self.format.map_or(default, |g| g == f)
    }

    fn curve(&self) -> Result<SpectralCurve, CliError> {
        Ok(curve_io::load_curve(&self.curve)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, genus, reality residual and branch points.
    Info {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Trace the Lagrangian locus (locus.csv, locus.svg).
    Trace {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Ruled surface of one component (surface.obj, curvature.csv).
    Surface {
        #[command(flatten)]
        run: RunConfig,
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Edges of regression of all components (edges.csv, edges.svg, edges.obj).
    Edge {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Lines of the curve through a point, or through random points.
    Incidence {
        #[command(flatten)]
        run: RunConfig,
        /// Point "x1,x2,x3".
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Number of random points in [-3, 3]^3.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Verification report (verify-v1 JSON).
    Verify {
        #[command(flatten)]
        run: RunConfig,
        /// Run the full builtin suite instead of one curve.
        #[arg(long)]
        all: bool,
    },
}

/// Result of a command: text for stdout, files written, warnings.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub code: i32,
}

fn write(dir: &Path, name: &str, text: &str, out: &mut Outcome) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    out.files.push(path);
    Ok(())
}

#[derive(Serialize)]
struct Info {
    m: usize,
    degree: usize,
    genus: usize,
    reality_residual: f64,
    branch_points: Vec<BranchInfo>,
}

#[derive(Serialize)]
struct BranchInfo {
    chart: String,
    xi: [f64; 2],
    eta: [f64; 2],
    ramification: usize,
}

pub fn cmd_info(run: &RunConfig) -> Result<Outcome, CliError> {
    let c = run.curve()?;
    let (degree, genus) = degree_genus(&c);
    let bps = branch_points(&c)?;
    let info = Info {
        m: c.charge(),
        degree,
        genus,
        reality_residual: reality_check(&c).max_residual,
        branch_points: bps
            .iter()
            .map(|b| BranchInfo {
                chart: format!("{:?}", b.chart),
                xi: [b.xi.re, b.xi.im],
                eta: [b.eta.re, b.eta.im],
                ramification: b.ramification(),
            })
            .collect(),
    };
    let stdout = if run.wants(Format::Json, false) {
        serde_json::to_string_pretty(&info).expect("plain data") + "\n"
    } else {
        let mut s = format!(
            "m = {}\ndegree = {}\ngenus = {}\nreality residual = {:.3e}\nbranch points ({}):\n",
            info.m,
            info.degree,
            info.genus,
            info.reality_residual,
            info.branch_points.len()
        );
        for b in &info.branch_points {
            s += &format!("  {} xi = {:+.12} {:+.12}i  ramification {}\n", b.chart, b.xi[0], b.xi[1], b.ramification);
        }
        s
    };
    Ok(Outcome { stdout, ..Default::default() })
}

pub fn cmd_trace(run: &RunConfig) -> Result<Outcome, CliError> {
    let c = run.curve()?;
    let cfg = run.trace_config()?;
    let locus = trace_locus(&c, &cfg)?;
    let dir = run.out_dir()?;
    let mut out = Outcome::default();
    if run.wants(Format::Csv, true) {
        write(&dir, "locus.csv", &formats::locus_csv(&locus), &mut out)?;
    }
    if run.wants(Format::Svg, true) {
        write(&dir, "locus.svg", &formats::locus_svg(&locus), &mut out)?;
    }
    if run.wants(Format::Json, false) {
        write(&dir, "locus.json", &(serde_json::to_string_pretty(&locus).expect("plain data") + "\n"), &mut out)?;
    }
    for (i, comp) in locus.components.iter().enumerate() {
        if let Some(why) = &comp.breakdown {
            out.warnings.push(format!("component {i}: {why}"));
        }
    }
    out.stdout = format!("{} components\n", locus.components.len());
    Ok(out)
}

pub fn cmd_surface(run: &RunConfig, component: usize) -> Result<Outcome, CliError> {
    let c = run.curve()?;
    let cfg = run.trace_config()?;
    let r_range = run.r_range()?;
    let locus = trace_locus(&c, &cfg)?;
    let comp = locus.components.get(component).ok_or_else(|| {
        CliError::config(format!("component {component} out of range ({} components)", locus.components.len()))
    })?;
    let s = build_ruled_surface(&c, comp, r_range, DEFAULT_N_R);
    let dir = run.out_dir()?;
    let mut out = Outcome::default();
    if run.wants(Format::Obj, true) {
        write(&dir, "surface.obj", &formats::surface_obj(&s), &mut out)?;
    }
    if run.wants(Format::Csv, true) {
        write(&dir, "curvature.csv", &formats::curvature_csv(&s), &mut out)?;
    }
    out.stdout = format!("max |K| = {:.3e}\n", s.max_abs_curvature(1e-6));
    Ok(out)
}

pub fn cmd_edge(run: &RunConfig) -> Result<Outcome, CliError> {
    let c = run.curve()?;
    let cfg = run.trace_config()?;
    let locus = trace_locus(&c, &cfg)?;
    let edges = locus.components.iter().map(|k| edge_of_regression(&c, k)).collect::<Result<Vec<_>, _>>()?;
    let dir = run.out_dir()?;
    let mut out = Outcome::default();
    if edges.is_empty() {
        out.warnings.push("empty Lagrangian locus: no edges".into());
    }
    if run.wants(Format::Csv, true) {
        write(&dir, "edges.csv", &formats::edges_csv(&edges), &mut out)?;
    }
    if run.wants(Format::Svg, true) {
        write(&dir, "edges.svg", &formats::edges_svg(&edges, 8.0), &mut out)?;
    }
    if run.wants(Format::Obj, true) {
        write(&dir, "edges.obj", &formats::edges_obj(&edges, 50.0), &mut out)?;
    }
    out.stdout = format!("{} edges\n", edges.len());
    Ok(out)
}

#[derive(Serialize)]
struct IncidenceRecord {
    point: [f64; 3],
    result: IncidenceResult,
}

pub fn parse_point(s: &str) -> Result<EuclideanPoint, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let vals: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match vals.as_deref() {
        Some(&[a, b, c]) if a.is_finite() && b.is_finite() && c.is_finite() => Ok(EuclideanPoint::new(a, b, c)),
        _ => Err(CliError::config(format!("point must be \"x1,x2,x3\", got {s:?}"))),
    }
}

pub fn cmd_incidence(run: &RunConfig, point: Option<&str>, random: Option<usize>) -> Result<Outcome, CliError> {
    let c = run.curve()?;
    let points: Vec<EuclideanPoint> = match (point, random) {
        (Some(p), None) => vec![parse_point(p)?],
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            (0..n)
                .map(|_| EuclideanPoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect()
        }
        (None, None) => vec![EuclideanPoint::new(0.0, 0.0, 0.0)],
        (Some(_), Some(_)) => return Err(CliError::config("--point and --random are exclusive")),
    };
    let records: Vec<IncidenceRecord> =
        points.iter().map(|p| IncidenceRecord { point: p.to_array(), result: lines_through_point(&c, p) }).collect();
    let text = serde_json::to_string_pretty(&records).expect("plain data") + "\n";
    let mut out = Outcome::default();
    if let Some(dir) = &run.out {
        std::fs::create_dir_all(dir)?;
        write(dir, "incidence.json", &text, &mut out)?;
    }
    out.stdout = text;
    Ok(out)
}

pub fn cmd_verify(run: &RunConfig, all: bool) -> Result<Outcome, CliError> {
    let opts = VerifyOptions { trace: run.trace_config()?, seed: run.seed, tol_scale: run.tol_scale };
    let report = if all {
        verify_all(&opts)
    } else {
        let c = run.curve()?;
        verify_curve(&run.curve, &c, &opts)
    };
    let text = serde_json::to_string_pretty(&report).expect("plain data") + "\n";
    let mut out = Outcome::default();
    if let Some(dir) = &run.out {
        std::fs::create_dir_all(dir)?;
        write(dir, "verify.json", &text, &mut out)?;
    }
    for f in report.failures() {
        out.warnings.push(format!("FAILED {}: residual {:.3e}, tolerance {:.3e} {}", f.name, f.residual, f.tolerance, f.detail));
    }
    out.stdout = text;
    out.code = if report.passed { EXIT_OK } else { EXIT_VERIFY };
    Ok(out)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Info { run } => cmd_info(run),
        Command::Trace { run } => cmd_trace(run),
        Command::Surface { run, component } => cmd_surface(run, *component),
        Command::Edge { run } => cmd_edge(run),
        Command::Incidence { run, point, random } => cmd_incidence(run, point.as_deref(), *random),
        Command::Verify { run, all } => cmd_verify(run, *all),
    }
}

/// Caps rayon's global pool at `MINITWISTOR_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("MINITWISTOR_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::config(format!("MINITWISTOR_THREADS={v:?}")))?;
        // A second initialisation (e.g. in tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args`, runs the command, prints its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = configure_threads().and_then(|_| execute(&cli));
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
