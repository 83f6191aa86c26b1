//! `ttw`: exact levels, numeric eigenvalues, wavefunction samples and the
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 failed checks, 2 usage or I/O errors, 3 parameters
//! outside the domain of the requested computation.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use ttw_core::exact::{levels, wavefunction_eval, QuantumNumbers, WavefunctionSpec};
use ttw_core::grid::{build_grid, GridSpec};
use ttw_core::scalar::{numeric_spectrum, Sector};
use ttw_core::suites::{run_suite, Suite};

use config::{load_file, locate, ConfigFile, Format, Overrides, RunConfig};
use report::{write_report, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ttw", version, about = "TTW Hamiltonian: exact spectrum, numeric checks and operator-identity suites")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Config file (TOML); defaults to $TTW_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true)]
    a: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Angular nodes (multiple of 8k).
    #[arg(long = "grid-M", global = true)]
    grid_m: Option<usize>,
    /// Radial nodes.
    #[arg(long = "grid-Nr", global = true)]
    grid_nr: Option<usize>,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol, global = true)]
    tol: Vec<(String, f64)>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run the selected suites concurrently.
    #[arg(long, global = true)]
    parallel: bool,
    /// Include the optional k = 5 superintegrability checks.
    #[arg(long, global = true)]
    slow: bool,
    /// Record wall-clock seconds per suite in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact levels `N + nk <= max-level` with their osp(2|2) labels.
    Spectrum {
        #[arg(long, default_value_t = 3)]
        max_level: u32,
    },
    /// Lowest numeric eigenvalues of `H_k` on a grid, against the exact levels.
    Eigensolve {
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// `identity` (the wedge problem) or `full`.
        #[arg(long, default_value = "identity")]
        sector: String,
    },
    /// Normalized `Ψ_{N,n}` at the `(r, phi)` points of a CSV file.
    Wavefunction {
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long = "n")]
        n: u32,
        /// CSV with columns `r,phi` (a header line is optional).
        #[arg(long)]
        points: PathBuf,
    },
    /// Run verification suites (names, or `all`).
    Verify { suites: Vec<String> },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = value.trim().parse().map_err(|_| format!("tolerance '{name}' is not a number: '{value}'"))?;
    Ok((name.trim().to_string(), v))
}

/// A failure with the exit code it maps to.
struct Failure(i32, String);

impl From<ttw_core::Error> for Failure {
    fn from(e: ttw_core::Error) -> Self {
        Failure(EXIT_DOMAIN, e.to_string())
    }
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("ttw: {msg}");
            code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let c = &cli.common;
    let file = match locate(c.config.as_deref()) {
        Some(path) => load_file(&path)?,
        None => ConfigFile::default(),
    };
    let flags = Overrides {
        omega: c.omega,
        a: c.a,
        b: c.b,
        k: c.k,
        m: c.grid_m,
        nr: c.grid_nr,
        tolerances: c.tol.clone(),
        format: c.format,
        out: c.out.clone(),
        slow: c.slow,
        parallel: c.parallel,
        timings: c.timings,
    };
    let suites = match &cli.command {
        Command::Verify { suites } => Some(suites.as_slice()),
        _ => None,
    };
    let cfg = RunConfig::merge(&file, &flags, suites)?;
    cfg.params.validate()?;
    match cli.command {
        Command::Spectrum { max_level } => spectrum(&cfg, max_level),
        Command::Eigensolve { count, sector } => eigensolve(&cfg, count, &sector),
        Command::Wavefunction { big_n, n, points } => wavefunction(&cfg, big_n, n, &points),
        Command::Verify { .. } => verify(cfg),
    }
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| Failure(EXIT_USAGE, format!("cannot write to stdout: {e}"))),
    }
}

/// Rows as pretty JSON or as CSV with a header.
fn table<R: Serialize>(rows: &[R], format: Format, header: &[&str]) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows).expect("rows serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            // explicit header, so an empty table still has one
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.serialize(r).expect("in-memory write");
            }
            w.into_inner().expect("in-memory write")
        }
    }
}

#[derive(Serialize)]
struct LevelRow {
    #[serde(rename = "N")]
    big_n: u32,
    n: u32,
    m: u32,
    energy: f64,
    susy_energy: f64,
    tau: f64,
    q: f64,
}

fn spectrum(cfg: &RunConfig, max_level: u32) -> Result<i32, Failure> {
    let k = cfg.params.integer_k()? as u32;
    let rows: Vec<LevelRow> = levels(&cfg.params, max_level)?
        .into_iter()
        .map(|d| LevelRow { big_n: d.qn.big_n, n: d.qn.n, m: d.qn.big_n + k * d.qn.n, energy: d.energy, susy_energy: d.susy_energy, tau: d.tau, q: d.q })
        .collect();
    emit(cfg, &table(&rows, cfg.format, &["N", "n", "m", "energy", "susy_energy", "tau", "q"]))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EigenRow {
    index: usize,
    numeric: f64,
    /// Nearest exact level.
    exact: f64,
    relative_error: f64,
}

fn eigensolve(cfg: &RunConfig, count: usize, sector: &str) -> Result<i32, Failure> {
    let sector = match sector {
        "identity" => Sector::IdentityRep,
        "full" => Sector::Full,
        other => return Err(Failure(EXIT_USAGE, format!("unknown sector '{other}' (expected identity or full)"))),
    };
    let grid = build_grid(GridSpec::new(cfg.m, cfg.nr, cfg.params))?;
    let values = numeric_spectrum(&grid, count, sector)?;
    let p = cfg.params;
    let top = values.last().copied().unwrap_or(0.0);
    // exact levels up to a little past the largest numeric value
    let reach = ((top / (2.0 * p.omega) - 1.0 - (p.a + p.b) * p.k) / 2.0).max(0.0) as u32 + 2;
    let exact: Vec<f64> = levels(&cfg.params, reach)?.into_iter().map(|d| d.energy).collect();
    let rows: Vec<EigenRow> = values
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            let e = exact.iter().copied().min_by(|p, q| (p - x).abs().total_cmp(&(q - x).abs())).unwrap_or(f64::NAN);
            EigenRow { index, numeric: x, exact: e, relative_error: (x - e).abs() / e.abs() }
        })
        .collect();
    emit(cfg, &table(&rows, cfg.format, &["index", "numeric", "exact", "relative_error"]))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PointRow {
    r: f64,
    phi: f64,
    value: f64,
}

fn read_points(path: &std::path::Path) -> Result<Vec<(f64, f64)>, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Failure(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        let field = |i: usize| rec.get(i).and_then(|s| s.parse::<f64>().ok());
        match (field(0), field(1), rec.len()) {
            (Some(r), Some(phi), 2) => out.push((r, phi)),
            // a header row
            _ if line == 0 => continue,
            _ => return Err(Failure(EXIT_USAGE, format!("{}: row {} is not 'r,phi'", path.display(), line + 1))),
        }
    }
    Ok(out)
}

fn wavefunction(cfg: &RunConfig, big_n: u32, n: u32, points: &std::path::Path) -> Result<i32, Failure> {
    let spec = WavefunctionSpec::normalized(cfg.params, QuantumNumbers::new(big_n, n))?;
    let rows = read_points(points)?
        .into_iter()
        .map(|(r, phi)| Ok(PointRow { r, phi, value: wavefunction_eval(&spec, r, phi)? }))
        .collect::<Result<Vec<_>, ttw_core::Error>>()?;
    emit(cfg, &table(&rows, cfg.format, &["r", "phi", "value"]))?;
    Ok(EXIT_OK)
}

fn verify(cfg: RunConfig) -> Result<i32, Failure> {
    let settings = cfg.settings();
    // reject bad domains before spending time on any suite
    for &s in &cfg.suites {
        settings.validate_for(s)?;
    }
    let timed = |s: Suite| -> Result<(Suite, Vec<ttw_core::probe::ResidualReport>, f64), ttw_core::Error> {
        let t = Instant::now();
        let reports = run_suite(s, &settings)?;
        Ok((s, reports, t.elapsed().as_secs_f64()))
    };
    let results: Vec<_> = if cfg.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = cfg.suites.iter().map(|&s| scope.spawn(move || timed(s))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        cfg.suites.iter().map(|&s| timed(s)).collect()
    };
    let mut doc = ReportDocument::new(cfg.clone());
    for r in results {
        let (suite, reports, seconds) = r?;
        eprintln!("ttw: {suite}: {} checks, {} failed, {seconds:.1} s", reports.len(), reports.iter().filter(|x| !x.pass).count());
        doc.push_suite(suite, reports, cfg.timings.then_some(seconds));
    }
    emit(&cfg, &write_report(&doc, cfg.format))?;
    Ok(if doc.pass { EXIT_OK } else { EXIT_FAILED })
}
