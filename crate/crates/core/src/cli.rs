//! Command-line front end: `solve`, `table`, `wavefunction`, `oracle`.
//!
//! Every command resolves a [`RunConfig`] from built-in defaults, an
//! optional `key = value` config file, and explicit flags, in that order.
//! Exit codes: 0 success, 1 non-convergence, 2 bad input, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::SolverError;
use crate::iteration::{self, Method, NormPoint, SolveOptions, SolveResult};
use crate::model::make_params;
use crate::oracle;
use crate::reference::{self, ReferenceRow};
use crate::trial::{TrialFunction, TrialKind};
use crate::trial_two::RootChoice;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONVERGED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const DEFAULT_SAMPLES: usize = 401;
const TABLE_COLUMNS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrialArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    F,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RcArg {
    #[value(name = "0")]
    Zero,
    Inf,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootArg {
    Large,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sombrero", version, about = "Ground states of the generalized Sombrero potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one iteration scheme and print E0..En.
    Solve(RunArgs),
    /// Recompute a published table (1 = tau-iteration, 2 = f-iteration).
    Table(TableArgs),
    /// Emit r, phi, psi samples of the converged state.
    Wavefunction(RunArgs),
    /// Finite-difference ground-state energy.
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// key = value file read before the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "N")]
    pub dim: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, value_enum)]
    pub trial: Option<TrialArg>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub orders: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, value_enum)]
    pub rc: Option<RcArg>,
    #[arg(long, value_enum)]
    pub root: Option<RootArg>,
    /// Prefactor parameter of the revised trial II.
    #[arg(long = "revised-a")]
    pub revised_a: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Sample count of the wavefunction command.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 1)]
    pub which: u8,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "N", default_value_t = 3)]
    pub dim: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

/// Resolved settings of a solve or wavefunction run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: u32,
    pub g: f64,
    pub a: f64,
    pub trial: TrialKind,
    pub method: Method,
    pub opts: SolveOptions,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 3,
            g: 1.0,
            a: 2.0,
            trial: TrialKind::One,
            method: Method::Tau,
            opts: SolveOptions::default(),
            out: None,
            format: Format::Csv,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(SolverError),
    Io(std::io::Error),
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(e) if is_input_error(e) => EXIT_USAGE,
            CliError::Solver(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
}

fn is_input_error(e: &SolverError) -> bool {
    matches!(e, SolverError::ParameterDomain(_) | SolverError::Config(_) | SolverError::BadGrid(_))
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("invalid value for {key}: {v:?}")))
}

fn enum_value<T: ValueEnum>(key: &str, v: &str) -> Result<T, CliError> {
    T::from_str(v, false).map_err(|_| CliError::Usage(format!("invalid value for {key}: {v:?}")))
}

impl RunConfig {
    /// Applies one `key = value` setting. Keys are the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "N" => self.dim = parse_value(key, value)?,
            "g" => self.g = parse_value(key, value)?,
            "A" => self.a = parse_value(key, value)?,
            "trial" => self.trial = enum_value::<TrialArg>(key, value)?.into(),
            "method" => self.method = enum_value::<MethodArg>(key, value)?.into(),
            "orders" => self.opts.orders = parse_value(key, value)?,
            "tol" => self.opts.tol = parse_value(key, value)?,
            "points" => self.opts.n_points = parse_value(key, value)?,
            "rmax" => self.opts.r_max = Some(parse_value(key, value)?),
            "rc" => self.opts.r_c = enum_value::<RcArg>(key, value)?.into(),
            "root" => self.opts.root_choice = enum_value::<RootArg>(key, value)?.into(),
            "revised_a" => self.opts.revised_a = parse_value(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = enum_value(key, value)?,
            "samples" => self.samples = parse_value(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parses a config file body on top of the current values.
    pub fn apply_config(&mut self, text: &str) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", no + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Serializes to the config file format; `apply_config` reads it back.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "N = {}", self.dim);
        let _ = writeln!(s, "g = {:?}", self.g);
        let _ = writeln!(s, "A = {:?}", self.a);
        let _ = writeln!(s, "trial = {}", if self.trial == TrialKind::One { 1 } else { 2 });
        let _ = writeln!(s, "method = {}", if self.method == Method::F { "f" } else { "tau" });
        let _ = writeln!(s, "orders = {}", self.opts.orders);
        let _ = writeln!(s, "tol = {:?}", self.opts.tol);
        let _ = writeln!(s, "points = {}", self.opts.n_points);
        if let Some(r) = self.opts.r_max {
            let _ = writeln!(s, "rmax = {r:?}");
        }
        let rc = match self.opts.r_c {
            None => "auto",
            Some(NormPoint::Zero) => "0",
            Some(NormPoint::Infinity) => "inf",
        };
        let _ = writeln!(s, "rc = {rc}");
        let root = match self.opts.root_choice {
            RootChoice::Larger => "large",
            RootChoice::Smaller => "small",
        };
        let _ = writeln!(s, "root = {root}");
        let _ = writeln!(s, "revised_a = {:?}", self.opts.revised_a);
        if let Some(p) = &self.out {
            let _ = writeln!(s, "out = {}", p.display());
        }
        let _ = writeln!(s, "format = {}", if self.format == Format::Csv { "csv" } else { "json" });
        let _ = writeln!(s, "samples = {}", self.samples);
        s
    }

    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_config(&text)?;
        }
        if let Some(v) = args.dim {
            cfg.dim = v;
        }
        if let Some(v) = args.g {
            cfg.g = v;
        }
        if let Some(v) = args.a {
            cfg.a = v;
        }
        if let Some(v) = args.trial {
            cfg.trial = v.into();
        }
        if let Some(v) = args.method {
            cfg.method = v.into();
        }
        if let Some(v) = args.orders {
            cfg.opts.orders = v;
        }
        if let Some(v) = args.tol {
            cfg.opts.tol = v;
        }
        if let Some(v) = args.points {
            cfg.opts.n_points = v;
        }
        if args.rmax.is_some() {
            cfg.opts.r_max = args.rmax;
        }
        if let Some(v) = args.rc {
            cfg.opts.r_c = v.into();
        }
        if let Some(v) = args.root {
            cfg.opts.root_choice = v.into();
        }
        if let Some(v) = args.revised_a {
            cfg.opts.revised_a = v;
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        if let Some(v) = args.format {
            cfg.format = v;
        }
        if let Some(v) = args.samples {
            cfg.samples = v;
        }
        Ok(cfg)
    }
}

impl From<TrialArg> for TrialKind {
    fn from(t: TrialArg) -> Self {
        match t {
            TrialArg::One => TrialKind::One,
            TrialArg::Two => TrialKind::Two,
        }
    }
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::F => Method::F,
            MethodArg::Tau => Method::Tau,
        }
    }
}

impl From<RcArg> for Option<NormPoint> {
    fn from(r: RcArg) -> Self {
        match r {
            RcArg::Zero => Some(NormPoint::Zero),
            RcArg::Inf => Some(NormPoint::Infinity),
            RcArg::Auto => None,
        }
    }
}

impl From<RootArg> for RootChoice {
    fn from(r: RootArg) -> Self {
        match r {
            RootArg::Large => RootChoice::Larger,
            RootArg::Small => RootChoice::Smaller,
        }
    }
}

/// Full-precision float for files (17 significant digits).
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trial_label(t: TrialKind) -> &'static str {
    match t {
        TrialKind::One => "I",
        TrialKind::Two => "II",
    }
}

/// Renders a header and rows as CSV (LF line endings).
fn csv_text<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    // writes into memory cannot fail
    w.write_record(header).expect("in-memory CSV");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}

/// CSV of an energy sequence: n, energy, delta.
pub fn solve_csv(r: &SolveResult) -> String {
    let rows =
        r.energies.iter().zip(&r.deltas).enumerate().map(|(n, (e, d))| vec![n.to_string(), fmt_full(*e), fmt_full(*d)]);
    csv_text(&["n", "energy", "delta"], rows)
}

/// Reads back the rows written by [`solve_csv`].
pub fn parse_solve_csv(text: &str) -> Result<Vec<(usize, f64, f64)>, CliError> {
    let bad = |e: csv::Error| CliError::Usage(format!("bad solve CSV: {e}"));
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    if rd.headers().map_err(bad)? != vec!["n", "energy", "delta"] {
        return Err(CliError::Usage("missing solve CSV header".into()));
    }
    rd.deserialize().map(|row| row.map_err(bad)).collect()
}

fn solve_report(cfg: &RunConfig, r: &SolveResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "N={} g={} A={} trial={} method={}",
        cfg.dim,
        cfg.g,
        cfg.a,
        trial_label(cfg.trial),
        if r.method == Method::F { "f" } else { "tau" }
    );
    for (n, e) in r.energies.iter().enumerate() {
        let _ = writeln!(s, "E{n} = {e:.4}");
    }
    if r.converged {
        let _ = writeln!(s, "converged at order {}", r.iterations_used);
    } else {
        let _ = writeln!(s, "not converged after {} orders", r.iterations_used);
    }
    s
}

fn write_out(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)?;
    Ok(())
}

fn run_solve(cfg: &RunConfig, stdout: &mut String) -> Result<i32, CliError> {
    let p = make_params(cfg.dim, cfg.g, cfg.a)?;
    let r = iteration::solve(p, cfg.trial, cfg.method, &cfg.opts)?;
    stdout.push_str(&solve_report(cfg, &r));
    if let Some(path) = &cfg.out {
        let body = match cfg.format {
            Format::Csv => solve_csv(&r),
            Format::Json => serde_json::to_string_pretty(&r)
                .map_err(|e| CliError::Usage(format!("cannot serialize result: {e}")))?,
        };
        write_out(path, &body)?;
    }
    Ok(if r.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Outcome of one published row.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub row: ReferenceRow,
    pub energies: Result<Vec<f64>, String>,
}

/// Runs every row of table 1 or 2 with the scheme and root of that table,
/// truncating each energy sequence where the published one ends.
pub fn compute_table(which: u8, points: Option<usize>) -> Result<Vec<TableRow>, CliError> {
    let (rows, method) =
        reference::table(which).ok_or_else(|| CliError::Usage(format!("no table {which}; use 1 or 2")))?;
    let out = rows
        .par_iter()
        .map(|row| {
            let len = row.energies.len();
            let mut opts = SolveOptions {
                orders: len.saturating_sub(1).max(1),
                tol: 0.0,
                root_choice: row.root,
                ..Default::default()
            };
            if let Some(n) = points {
                opts.n_points = n;
            }
            let energies = make_params(3, row.g, row.a)
                .and_then(|p| iteration::solve(p, row.trial, method, &opts))
                .map(|r| r.energies.into_iter().take(len).collect())
                .map_err(|e| e.to_string());
            TableRow { row: *row, energies }
        })
        .collect();
    Ok(out)
}

fn table_text(rows: &[TableRow], full: bool) -> String {
    let header: Vec<String> = ["g", "A", "trial"]
        .iter()
        .map(|h| h.to_string())
        .chain((0..TABLE_COLUMNS).map(|i| format!("E{i}")))
        .chain(["error".to_string()])
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let records = rows.iter().map(|t| {
        let (vals, err) = match &t.energies {
            Ok(v) => (v.as_slice(), ""),
            Err(e) => (&[][..], e.as_str()),
        };
        let mut rec = vec![t.row.g.to_string(), t.row.a.to_string(), trial_label(t.row.trial).to_string()];
        rec.extend((0..TABLE_COLUMNS).map(|i| match vals.get(i) {
            Some(e) if full => fmt_full(*e),
            Some(e) => format!("{e:.4}"),
            None => String::new(),
        }));
        rec.push(err.to_string());
        rec
    });
    csv_text(&header, records)
}

fn run_table(args: &TableArgs, stdout: &mut String) -> Result<i32, CliError> {
    let rows = compute_table(args.which, args.points)?;
    stdout.push_str(&table_text(&rows, false));
    if let Some(path) = &args.out {
        write_out(path, &table_text(&rows, true))?;
    }
    Ok(if rows.iter().all(|r| r.energies.is_ok()) { EXIT_OK } else { EXIT_NUMERIC })
}

/// Samples (r, φ, ψ) at `m` uniform radii on [0, r_max], both columns
/// peak-normalized. φ is evaluated exactly, ψ/φ interpolated linearly.
pub fn wavefunction_samples(cfg: &RunConfig, r: &SolveResult, m: usize) -> Result<Vec<[f64; 3]>, CliError> {
    if m < 2 {
        return Err(CliError::Usage("samples must be >= 2".into()));
    }
    let p = make_params(cfg.dim, cfg.g, cfg.a)?;
    let trial = TrialFunction::build(p, cfg.trial, cfg.opts.trial_two())?;
    let step = r.nodes[1] - r.nodes[0];
    let last = r.nodes.len() - 1;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let x = r.r_max * i as f64 / (m - 1) as f64;
        let t = (x / step).min(last as f64);
        let j = (t.floor() as usize).min(last - 1);
        let frac = t - j as f64;
        let c = r.correction[j] * (1.0 - frac) + r.correction[j + 1] * frac;
        rows.push([x, trial.log_phi(x), c]);
    }
    let peak = rows.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max);
    for v in &mut rows {
        v[1] = (v[1] - peak).exp();
        v[2] *= v[1];
    }
    let (pmax, qmax) = rows.iter().fold((0.0f64, 0.0f64), |(a, b), v| (a.max(v[1]), b.max(v[2])));
    if !(qmax > 0.0) {
        return Err(SolverError::Degenerate("wave function has no positive peak".into()).into());
    }
    for v in &mut rows {
        v[1] /= pmax;
        v[2] /= qmax;
    }
    Ok(rows)
}

pub fn wavefunction_csv(rows: &[[f64; 3]]) -> String {
    csv_text(&["r", "phi_normalized", "psi_normalized"], rows.iter().map(|v| v.iter().map(|x| fmt_full(*x)).collect()))
}

fn run_wavefunction(cfg: &RunConfig, stdout: &mut String) -> Result<i32, CliError> {
    let p = make_params(cfg.dim, cfg.g, cfg.a)?;
    let r = iteration::solve(p, cfg.trial, cfg.method, &cfg.opts)?;
    let rows = wavefunction_samples(cfg, &r, cfg.samples)?;
    let body = wavefunction_csv(&rows);
    match &cfg.out {
        Some(path) => {
            write_out(path, &body)?;
            let _ = writeln!(stdout, "wrote {} samples to {}", rows.len(), path.display());
        }
        None => stdout.push_str(&body),
    }
    Ok(if r.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn run_oracle(args: &OracleArgs, stdout: &mut String) -> Result<i32, CliError> {
    let p = make_params(args.dim, args.g, args.a)?;
    let e = oracle::oracle_energy(&p, args.rmax, args.points)?;
    let _ = writeln!(stdout, "E = {e:.4}");
    let _ = writeln!(stdout, "E_full = {}", fmt_full(e));
    Ok(EXIT_OK)
}

/// Runs a parsed command; returns the exit code and everything meant for
/// stdout. Errors are rendered into the second string.
pub fn execute(cli: &Cli) -> (i32, String, String) {
    let mut out = String::new();
    let res = match &cli.command {
        Command::Solve(a) => RunConfig::resolve(a).and_then(|c| run_solve(&c, &mut out)),
        Command::Wavefunction(a) => RunConfig::resolve(a).and_then(|c| run_wavefunction(&c, &mut out)),
        Command::Table(a) => run_table(a, &mut out),
        Command::Oracle(a) => run_oracle(a, &mut out),
    };
    match res {
        Ok(code) => (code, out, String::new()),
        Err(e) => (e.exit_code(), out, format!("error: {e}\n")),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                (0, text, String::new())
            } else {
                (EXIT_USAGE, String::new(), text)
            }
        }
    }
}
