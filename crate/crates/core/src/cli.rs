//! The `paghz` command line.
//!
//! Every flag can also be given in a flat `key = value` file passed with
//! `--config`; keys are the long flag names (`alpha-sq` or `alpha_sq`).
//! Command-line values win over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::format::fmt_f64;
use crate::oracle::{self, Quantity, ValidationConfig, Verdict};
use crate::state::StateParams;
use crate::stats::{self, ScanRow};
use crate::wigner::{self, Axis, GridSpec};

#[derive(Debug, Parser)]
#[command(
    name = "paghz",
    version,
    about = "Wigner functions and photon statistics of photon-added GHZ coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Wigner function on a 2-D slice of phase space.
    WignerGrid(WignerGridArgs),
    /// Per-mode Mandel Q over a range of |α|².
    MandelScan(ScanArgs),
    /// Three-mode correlation g3 over a range of |α|².
    G3Scan(ScanArgs),
    /// Compare every closed form against the Fock-space oracle.
    Validate(ValidateArgs),
    /// Regenerate the data behind every figure panel.
    Figures(FiguresArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat key=value file; command-line flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output path (a directory for `figures`). Defaults to stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    /// Output format.
    #[arg(long, value_name = "csv|json")]
    pub format: Option<String>,
    /// Worker threads; falls back to PAGHZ_THREADS, then the core count.
    #[arg(long, value_name = "N")]
    pub threads: Option<String>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Photons added to mode 1.
    #[arg(long, value_name = "N")]
    pub r: Option<String>,
    /// Photons added to mode 2.
    #[arg(long, value_name = "N")]
    pub s: Option<String>,
    /// Photons added to mode 3.
    #[arg(long, value_name = "N")]
    pub t: Option<String>,
    /// Relative phase: 0, pi, or radians in [0, 2π).
    #[arg(long, value_name = "0|pi|RAD", allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Coherent amplitude.
    #[arg(long, value_name = "RE[,IM]", allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Debug, Args)]
pub struct WignerGridArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Grid ranges and sizes; the moving coordinate is (x+iy)/√2.
    #[arg(long, value_name = "X0:X1:NX,Y0:Y1:NY", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// The two fixed coordinates, in mode order (complex syntax like 1-0.5i).
    #[arg(long, value_name = "G,D", allow_hyphen_values = true)]
    pub pinned: Option<String>,
    /// Which mode's coordinate moves.
    #[arg(long, value_name = "eta|gamma|delta")]
    pub axis: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Inclusive |α|² range with N samples.
    #[arg(long, value_name = "A0:A1:N")]
    pub alpha_sq: Option<String>,
    /// Excitation tuples, e.g. "0,0,0;0,1,2". Defaults to --r/--s/--t.
    #[arg(long, value_name = "R,S,T;...")]
    pub tuples: Option<String>,
    /// Modes to report (mandel-scan only).
    #[arg(long, value_name = "1,2,3")]
    pub modes: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Inclusive |α|² range with N samples (replaces the default lattice values).
    #[arg(long, value_name = "A0:A1:N")]
    pub alpha_sq: Option<String>,
    /// Excitation tuples, e.g. "0,0,0;1,1,1".
    #[arg(long, value_name = "R,S,T;...")]
    pub tuples: Option<String>,
    /// Subset of norm,mean,second,q,triple,g3,wigner.
    #[arg(long, value_name = "LIST")]
    pub quantities: Option<String>,
    /// Sampled Wigner points per parameter set.
    #[arg(long, value_name = "N")]
    pub points: Option<String>,
    /// Seed for the Wigner sample points.
    #[arg(long, value_name = "N")]
    pub seed: Option<String>,
    /// Relative agreement tolerance.
    #[arg(long, value_name = "X")]
    pub rel_tol: Option<String>,
    /// Absolute floor below which differences agree.
    #[arg(long, value_name = "X")]
    pub abs_floor: Option<String>,
    /// Absolute tolerance for Wigner values.
    #[arg(long, value_name = "X")]
    pub wigner_abs: Option<String>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Restrict to one figure (fig3) or one panel (fig3_panelb).
    #[arg(long, value_name = "FIGID")]
    pub only: Option<String>,
}

/// A failed command: message for stderr, exit code 1.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

const KNOWN_KEYS: &[&str] = &[
    "out",
    "format",
    "threads",
    "r",
    "s",
    "t",
    "phi",
    "alpha",
    "grid",
    "pinned",
    "axis",
    "alpha_sq",
    "tuples",
    "modes",
    "quantities",
    "points",
    "seed",
    "rel_tol",
    "abs_floor",
    "wigner_abs",
    "only",
];

/// Merged settings: config file first, flags on top.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse_config(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError(format!("config line {}: expected key = value", n + 1)))?;
            let key = k.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError(format!(
                    "config line {}: unknown key '{}'",
                    n + 1,
                    k.trim()
                )));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    fn set(&mut self, key: &str, value: &Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse(v).map(Some).ok_or_else(|| {
                CliError(format!(
                    "invalid value for --{}: '{v}'",
                    key.replace('_', "-")
                ))
            }),
        }
    }

    fn load(common: &CommonArgs) -> CliResult<Self> {
        let mut s = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
                Self::parse_config(&text)?
            }
            None => Self::default(),
        };
        s.set("out", &common.out);
        s.set("format", &common.format);
        s.set("threads", &common.threads);
        Ok(s)
    }

    fn with_state(mut self, a: &StateArgs) -> Self {
        self.set("r", &a.r);
        self.set("s", &a.s);
        self.set("t", &a.t);
        self.set("phi", &a.phi);
        self.set("alpha", &a.alpha);
        self
    }

    fn threads(&self) -> CliResult<Option<usize>> {
        if let Some(n) = self.parsed("threads", |v| v.parse::<usize>().ok())? {
            return Ok(Some(n));
        }
        match std::env::var("PAGHZ_THREADS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map(Some)
                .map_err(|_| CliError(format!("invalid PAGHZ_THREADS: '{v}'"))),
            _ => Ok(None),
        }
    }

    fn format(&self) -> CliResult<Format> {
        match self.get("format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError(format!(
                "invalid value for --format: '{other}' (csv|json)"
            ))),
        }
    }

    fn excitations(&self) -> CliResult<[u32; 3]> {
        let mut e = [0; 3];
        for (slot, key) in e.iter_mut().zip(["r", "s", "t"]) {
            *slot = self.parsed(key, |v| v.parse::<u32>().ok())?.unwrap_or(0);
        }
        Ok(e)
    }

    fn phi(&self) -> CliResult<f64> {
        Ok(self.parsed("phi", parse_phi)?.unwrap_or(0.0))
    }

    fn state(&self) -> CliResult<StateParams> {
        let alpha = self
            .parsed("alpha", parse_alpha)?
            .unwrap_or(Complex64::new(0.3, 0.0));
        let [r, s, t] = self.excitations()?;
        Ok(StateParams::new(alpha, self.phi()?, r, s, t)?)
    }

    fn tuples(&self) -> CliResult<Option<Vec<[u32; 3]>>> {
        self.parsed("tuples", parse_tuples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

pub fn parse_phi(v: &str) -> Option<f64> {
    match v.trim().to_ascii_lowercase().as_str() {
        "pi" | "π" => Some(std::f64::consts::PI),
        other => other.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

pub fn parse_alpha(v: &str) -> Option<Complex64> {
    let mut parts = v.split(',').map(|p| p.trim().parse::<f64>());
    match (parts.next(), parts.next(), parts.next()) {
        (Some(Ok(re)), None, None) => Some(Complex64::new(re, 0.0)),
        (Some(Ok(re)), Some(Ok(im)), None) => Some(Complex64::new(re, im)),
        _ => None,
    }
    .filter(|z| z.re.is_finite() && z.im.is_finite())
}

/// `(start, end, count)` of an inclusive sample range.
pub type Range = (f64, f64, usize);

/// `A0:A1:N`, inclusive, `N ≥ 1` (a single sample needs `A0 == A1`).
pub fn parse_range(v: &str) -> Option<Range> {
    let f: Vec<&str> = v.split(':').map(str::trim).collect();
    if f.len() != 3 {
        return None;
    }
    let (a, b, n) = (
        f[0].parse::<f64>().ok()?,
        f[1].parse::<f64>().ok()?,
        f[2].parse::<usize>().ok()?,
    );
    let ok = a.is_finite() && b.is_finite() && n >= 1 && a <= b && (n > 1 || a == b);
    ok.then_some((a, b, n))
}

pub fn linspace((a, b, n): Range) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn parse_grid(v: &str) -> Option<(Range, Range)> {
    let (x, y) = v.split_once(',')?;
    Some((parse_range(x)?, parse_range(y)?))
}

fn parse_complex(v: &str) -> Option<Complex64> {
    v.trim()
        .parse::<Complex64>()
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn parse_pinned(v: &str) -> Option<[Complex64; 2]> {
    let (g, d) = v.split_once(',')?;
    Some([parse_complex(g)?, parse_complex(d)?])
}

pub fn parse_tuples(v: &str) -> Option<Vec<[u32; 3]>> {
    v.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let e: Vec<u32> = t
                .split(',')
                .map(|x| x.trim().parse().ok())
                .collect::<Option<_>>()?;
            (e.len() == 3).then(|| [e[0], e[1], e[2]])
        })
        .collect::<Option<Vec<_>>>()
        .filter(|v| !v.is_empty())
}

fn parse_modes(v: &str) -> Option<Vec<usize>> {
    v.split(',')
        .map(|m| {
            m.trim()
                .parse::<usize>()
                .ok()
                .filter(|m| (1..=3).contains(m))
        })
        .collect::<Option<Vec<_>>>()
        .filter(|v| !v.is_empty())
}

fn write_output(out: Option<&str>, data: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, data).map_err(|e| CliError(format!("cannot write {path}: {e}")))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(data.as_bytes())
                .map_err(|e| CliError(format!("stdout: {e}")))
        }
    }
}

/// Prints to stdout when the data went to a file, to stderr otherwise.
fn summary(to_file: bool, text: &str) {
    if to_file {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command) -> CliResult<i32> {
    let common = match &command {
        Command::WignerGrid(a) => &a.common,
        Command::MandelScan(a) | Command::G3Scan(a) => &a.common,
        Command::Validate(a) => &a.common,
        Command::Figures(a) => &a.common,
    };
    let settings = Settings::load(common)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = settings.threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| match &command {
        Command::WignerGrid(a) => cmd_wigner_grid(settings, a),
        Command::MandelScan(a) => cmd_scan(settings, a, ScanKind::Mandel),
        Command::G3Scan(a) => cmd_scan(settings, a, ScanKind::G3),
        Command::Validate(a) => cmd_validate(settings, a),
        Command::Figures(a) => cmd_figures(settings, a),
    })
}

fn grid_spec(settings: &Settings) -> CliResult<GridSpec> {
    let mut spec = GridSpec::figure_default(121);
    if let Some(((x0, x1, nx), (y0, y1, ny))) = settings.parsed("grid", parse_grid)? {
        spec.x_range = (x0, x1);
        spec.y_range = (y0, y1);
        spec.nx = nx;
        spec.ny = ny;
    }
    if let Some(p) = settings.parsed("pinned", parse_pinned)? {
        spec.pinned = p;
    }
    if let Some(axis) = settings.parsed("axis", Axis::parse)? {
        spec.axis = axis;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_wigner_grid(mut settings: Settings, a: &WignerGridArgs) -> CliResult<i32> {
    settings = settings.with_state(&a.state);
    settings.set("grid", &a.grid);
    settings.set("pinned", &a.pinned);
    settings.set("axis", &a.axis);
    let params = settings.state()?;
    let spec = grid_spec(&settings)?;
    let format = settings.format()?;
    let grid = wigner::wigner_grid(&params, &spec)?;
    let data = match format {
        Format::Csv => grid.to_csv(),
        Format::Json => grid.to_json(),
    };
    let out = settings.get("out");
    write_output(out, &data)?;
    let min = grid.min();
    summary(
        out.is_some(),
        &format!(
            "min {} at (x={}, y={})\nmax {}\nnegative fraction {}\n",
            fmt_f64(min.value),
            fmt_f64(min.x),
            fmt_f64(min.y),
            fmt_f64(grid.max()),
            fmt_f64(grid.negative_fraction()),
        ),
    );
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScanKind {
    Mandel,
    G3,
}

fn cmd_scan(mut settings: Settings, a: &ScanArgs, kind: ScanKind) -> CliResult<i32> {
    settings = settings.with_state(&a.state);
    settings.set("alpha_sq", &a.alpha_sq);
    settings.set("tuples", &a.tuples);
    settings.set("modes", &a.modes);
    let phi = settings.phi()?;
    let tuples = match settings.tuples()? {
        Some(t) => t,
        None => vec![settings.excitations()?],
    };
    let default_range = match kind {
        ScanKind::Mandel => (0.01, 3.0, 300),
        ScanKind::G3 => (0.01, 4.0, 400),
    };
    let alpha_sq = linspace(
        settings
            .parsed("alpha_sq", parse_range)?
            .unwrap_or(default_range),
    );
    if alpha_sq.iter().any(|&x| x < 0.0) {
        return Err(CliError("--alpha-sq must be non-negative".into()));
    }
    let modes = match kind {
        ScanKind::Mandel => settings
            .parsed("modes", parse_modes)?
            .unwrap_or_else(|| vec![1, 2, 3]),
        ScanKind::G3 => Vec::new(),
    };
    let rows = stats::scan(&tuples, &alpha_sq, phi, &modes)?;
    let data = match settings.format()? {
        Format::Csv => stats::scan_csv(&rows),
        Format::Json => stats::scan_json(&rows),
    };
    let out = settings.get("out");
    write_output(out, &data)?;
    let undefined = rows.iter().filter(|r| r.status != "ok").count();
    summary(
        out.is_some(),
        &format!("{} rows, {} with undefined values\n", rows.len(), undefined),
    );
    Ok(0)
}

/// The lattice `paghz validate` runs when no parameters are given.
pub fn default_validation_lattice() -> Vec<StateParams> {
    let mut out = Vec::new();
    for phi in [0.0, std::f64::consts::PI] {
        for a2 in [0.25, 1.0] {
            for r in 0..=2 {
                for s in 0..=2 {
                    for t in 0..=2 {
                        out.push(
                            StateParams::from_alpha_sq(a2, phi, r, s, t).expect("lattice is valid"),
                        );
                    }
                }
            }
        }
    }
    out
}

fn validation_lattice(settings: &Settings) -> CliResult<Vec<StateParams>> {
    let custom = ["r", "s", "t", "phi", "alpha", "alpha_sq", "tuples"]
        .iter()
        .any(|k| settings.get(k).is_some());
    if !custom {
        return Ok(default_validation_lattice());
    }
    let tuples = match settings.tuples()? {
        Some(t) => t,
        None if ["r", "s", "t"].iter().any(|k| settings.get(k).is_some()) => {
            vec![settings.excitations()?]
        }
        None => {
            let mut all = Vec::new();
            for r in 0..=2 {
                for s in 0..=2 {
                    for t in 0..=2 {
                        all.push([r, s, t]);
                    }
                }
            }
            all
        }
    };
    let phis = match settings.get("phi") {
        Some(_) => vec![settings.phi()?],
        None => vec![0.0, std::f64::consts::PI],
    };
    let alphas: Vec<Complex64> = if let Some(alpha) = settings.parsed("alpha", parse_alpha)? {
        vec![alpha]
    } else if let Some(range) = settings.parsed("alpha_sq", parse_range)? {
        linspace(range)
            .into_iter()
            .map(|a2| Complex64::new(a2.max(0.0).sqrt(), 0.0))
            .collect()
    } else {
        [0.25f64, 1.0]
            .iter()
            .map(|a2| Complex64::new(a2.sqrt(), 0.0))
            .collect()
    };
    let mut out = Vec::new();
    for &phi in &phis {
        for &alpha in &alphas {
            for &[r, s, t] in &tuples {
                out.push(StateParams::new(alpha, phi, r, s, t)?);
            }
        }
    }
    Ok(out)
}

fn cmd_validate(mut settings: Settings, a: &ValidateArgs) -> CliResult<i32> {
    settings = settings.with_state(&a.state);
    for (k, v) in [
        ("alpha_sq", &a.alpha_sq),
        ("tuples", &a.tuples),
        ("quantities", &a.quantities),
        ("points", &a.points),
        ("seed", &a.seed),
        ("rel_tol", &a.rel_tol),
        ("abs_floor", &a.abs_floor),
        ("wigner_abs", &a.wigner_abs),
    ] {
        settings.set(k, v);
    }
    let mut config = ValidationConfig::default();
    if let Some(q) = settings.parsed("quantities", |v| {
        v.split(',')
            .map(Quantity::parse)
            .collect::<Option<Vec<_>>>()
    })? {
        config.quantities = q;
    }
    if let Some(n) = settings.parsed("points", |v| v.parse::<usize>().ok())? {
        config.wigner_points = n;
    }
    if let Some(seed) = settings.parsed("seed", |v| v.parse::<u64>().ok())? {
        config.seed = seed;
    }
    let tol = |v: &str| v.parse::<f64>().ok().filter(|x| x.is_finite() && *x >= 0.0);
    if let Some(x) = settings.parsed("rel_tol", tol)? {
        config.tolerances.rel = x;
    }
    if let Some(x) = settings.parsed("abs_floor", tol)? {
        config.tolerances.abs_floor = x;
    }
    if let Some(x) = settings.parsed("wigner_abs", tol)? {
        config.tolerances.wigner_abs = x;
    }
    let lattice = validation_lattice(&settings)?;
    let out = settings.get("out");
    // fail on an unwritable path before the expensive part
    if let Some(path) = out {
        fs::File::create(path).map_err(|e| CliError(format!("cannot write {path}: {e}")))?;
    }
    let reports: Vec<_> = lattice
        .iter()
        .flat_map(|p| oracle::validate(p, &config))
        .collect();
    let data = match settings.format()? {
        Format::Csv | Format::Json => oracle::to_jsonl(&reports),
    };
    write_output(out, &data)?;
    summary(out.is_some(), &validation_summary(&reports, lattice.len()));
    Ok(oracle::exit_code(&reports))
}

/// Counts per quantity family (index suffix stripped).
pub fn validation_summary(reports: &[oracle::DiscrepancyReport], cases: usize) -> String {
    let mut counts: BTreeMap<String, [usize; 4]> = BTreeMap::new();
    for r in reports {
        let family = r
            .quantity
            .split('[')
            .next()
            .unwrap_or(&r.quantity)
            .to_string();
        let slot = match r.verdict {
            Verdict::Agree => 0,
            Verdict::PaperTypoSuspected => 1,
            Verdict::Fail => 2,
            Verdict::Undefined => 3,
        };
        counts.entry(family).or_default()[slot] += 1;
    }
    let mut s = format!("{cases} parameter sets, {} reports\n", reports.len());
    let _ = writeln!(
        s,
        "{:<14} {:>7} {:>11} {:>6} {:>10}",
        "quantity", "agree", "paper_typo", "fail", "undefined"
    );
    for (q, c) in &counts {
        let _ = writeln!(
            s,
            "{:<14} {:>7} {:>11} {:>6} {:>10}",
            q, c[0], c[1], c[2], c[3]
        );
    }
    s
}

/// One output file of `paghz figures`.
#[derive(Debug, Clone, PartialEq)]
pub enum Panel {
    Wigner {
        params: StateParams,
    },
    Scan {
        phi: f64,
        tuples: Vec<[u32; 3]>,
        alpha_sq: Range,
        modes: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePanel {
    pub figure: u32,
    pub panel: char,
    pub spec: Panel,
}

impl FigurePanel {
    pub fn file_name(&self) -> String {
        format!("fig{}_panel{}.csv", self.figure, self.panel)
    }

    pub fn render(&self) -> crate::Result<String> {
        match &self.spec {
            Panel::Wigner { params } => {
                Ok(wigner::wigner_grid(params, &GridSpec::figure_default(121))?.to_csv())
            }
            Panel::Scan {
                phi,
                tuples,
                alpha_sq,
                modes,
            } => {
                let rows: Vec<ScanRow> = stats::scan(tuples, &linspace(*alpha_sq), *phi, modes)?;
                Ok(stats::scan_csv(&rows))
            }
        }
    }
}

/// Every panel from the figure captions: α = 0.3, γ = δ = 1 for the
/// Wigner slices; `|α|²` scans for the statistics.
pub fn figure_panels() -> Vec<FigurePanel> {
    use std::f64::consts::PI;
    let wigner_sets: [(u32, f64, &[[u32; 3]]); 6] = [
        (1, 0.0, &[[0, 0, 0], [1, 2, 1], [2, 2, 2]]),
        (2, PI, &[[0, 0, 0], [1, 2, 1], [2, 2, 2]]),
        (3, 0.0, &[[1, 1, 0], [2, 2, 0], [1, 2, 0], [3, 2, 0]]),
        (4, PI, &[[1, 1, 0], [2, 2, 0], [1, 2, 0], [3, 2, 0]]),
        (5, 0.0, &[[3, 4, 5], [5, 3, 4], [4, 5, 3]]),
        (6, PI, &[[3, 4, 5], [5, 3, 4], [4, 5, 3]]),
    ];
    let mut out = Vec::new();
    for (figure, phi, tuples) in wigner_sets {
        for (k, &[r, s, t]) in tuples.iter().enumerate() {
            let params =
                StateParams::real(0.3, phi, r, s, t).expect("caption parameters are valid");
            out.push(FigurePanel {
                figure,
                panel: (b'a' + k as u8) as char,
                spec: Panel::Wigner { params },
            });
        }
    }
    let equal: Vec<[u32; 3]> = vec![[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]];
    let distinct: Vec<[u32; 3]> = vec![[0, 1, 2], [1, 2, 3], [2, 3, 4]];
    for (figure, phi) in [(7, 0.0), (8, PI)] {
        let range = (0.01, 3.0, 300);
        out.push(FigurePanel {
            figure,
            panel: 'a',
            spec: Panel::Scan {
                phi,
                tuples: equal.clone(),
                alpha_sq: range,
                modes: vec![1, 2, 3],
            },
        });
        for (k, mode) in [1usize, 2, 3].into_iter().enumerate() {
            out.push(FigurePanel {
                figure,
                panel: (b'b' + k as u8) as char,
                spec: Panel::Scan {
                    phi,
                    tuples: distinct.clone(),
                    alpha_sq: range,
                    modes: vec![mode],
                },
            });
        }
    }
    for (figure, phi) in [(9, 0.0), (10, PI)] {
        let range = (0.01, 4.0, 400);
        for (panel, tuples) in [('a', &equal), ('b', &distinct)] {
            out.push(FigurePanel {
                figure,
                panel,
                spec: Panel::Scan {
                    phi,
                    tuples: tuples.clone(),
                    alpha_sq: range,
                    modes: Vec::new(),
                },
            });
        }
    }
    out
}

fn matches_only(panel: &FigurePanel, only: &str) -> bool {
    let only = only.trim().to_ascii_lowercase();
    only == format!("fig{}", panel.figure)
        || only == format!("fig{}_panel{}", panel.figure, panel.panel)
}

fn cmd_figures(mut settings: Settings, a: &FiguresArgs) -> CliResult<i32> {
    settings.set("only", &a.only);
    if settings.format()? != Format::Csv {
        return Err(CliError("figures are written as CSV only".into()));
    }
    let dir = Path::new(settings.get("out").unwrap_or("figures"));
    let mut panels = figure_panels();
    if let Some(only) = settings.get("only") {
        panels.retain(|p| matches_only(p, only));
        if panels.is_empty() {
            return Err(CliError(format!("--only {only}: no such figure or panel")));
        }
    }
    fs::create_dir_all(dir)
        .map_err(|e| CliError(format!("cannot create {}: {e}", dir.display())))?;
    let mut failed = Vec::new();
    for panel in &panels {
        let name = panel.file_name();
        let result = panel
            .render()
            .map_err(|e| e.to_string())
            .and_then(|data| fs::write(dir.join(&name), data).map_err(|e| e.to_string()));
        match result {
            Ok(()) => println!("wrote {}", dir.join(&name).display()),
            Err(e) => {
                eprintln!("error: {name}: {e}");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!(
            "{} of {} panels failed: {}",
            failed.len(),
            panels.len(),
            failed.join(", ")
        );
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_phi("pi"), Some(std::f64::consts::PI));
        assert_eq!(parse_phi("0"), Some(0.0));
        assert_eq!(parse_phi("x"), None);
        assert_eq!(parse_alpha("0.5,-1"), Some(Complex64::new(0.5, -1.0)));
        assert_eq!(parse_alpha("2"), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(parse_alpha("1,2,3"), None);
        assert_eq!(parse_range("0:1:3"), Some((0.0, 1.0, 3)));
        assert_eq!(parse_range("1:0:3"), None);
        assert_eq!(linspace((0.0, 1.0, 3)), vec![0.0, 0.5, 1.0]);
        assert_eq!(
            parse_grid("-1:1:2,-2:2:5"),
            Some(((-1.0, 1.0, 2), (-2.0, 2.0, 5)))
        );
        assert_eq!(
            parse_pinned("1,0.5-2i"),
            Some([Complex64::new(1.0, 0.0), Complex64::new(0.5, -2.0)])
        );
        assert_eq!(
            parse_tuples("0,0,0; 1,2,3"),
            Some(vec![[0, 0, 0], [1, 2, 3]])
        );
        assert_eq!(parse_tuples("0,0"), None);
    }

    #[test]
    fn config_file_and_overrides() {
        let s = Settings::parse_config("# comment\nr = 2\nalpha-sq = 0.1:1:4\n\nphi=pi # odd\n")
            .unwrap();
        assert_eq!(s.get("r"), Some("2"));
        assert_eq!(s.get("alpha_sq"), Some("0.1:1:4"));
        assert_eq!(s.phi().unwrap(), std::f64::consts::PI);
        let s = s.with_state(&StateArgs {
            r: Some("1".into()),
            s: None,
            t: None,
            phi: None,
            alpha: None,
        });
        assert_eq!(s.excitations().unwrap(), [1, 0, 0]);
        assert!(Settings::parse_config("bogus = 1").is_err());
        assert!(Settings::parse_config("no equals sign").is_err());
    }

    #[test]
    fn figure_inventory() {
        let panels = figure_panels();
        assert_eq!(panels.len(), 32);
        let fig3: Vec<_> = panels.iter().filter(|p| matches_only(p, "fig3")).collect();
        assert_eq!(fig3.len(), 4);
        assert_eq!(fig3[3].file_name(), "fig3_paneld.csv");
        assert_eq!(
            panels
                .iter()
                .filter(|p| matches_only(p, "fig1_panelb"))
                .count(),
            1
        );
        let mut names: Vec<_> = panels.iter().map(FigurePanel::file_name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 32);
    }

    #[test]
    fn default_lattice_is_valid() {
        let lattice = default_validation_lattice();
        assert_eq!(lattice.len(), 108);
        assert!(lattice.iter().all(|p| p.validate().is_ok()));
    }
}
