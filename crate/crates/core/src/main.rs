//! `bragg` command-line front end.
//!
//! Exit codes: 0 holds, 1 fails, 4 inconclusive, 2 bad input, 3 resource limits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use bragg::fourier::{
    binned_spectrum, fourier_bohr_averaged_many, fourier_bohr_closed_with, truncated_transform_oracle, ClosedOptions,
};
use bragg::io::{self, CoefficientRow, CombMeta, WindowSpec};
use bragg::measures::{Averaging, ModelSetComb};
use bragg::{
    sap_transformable, AxisBox, CutProjectScheme, Error, QuadratureOptions, SapOptions, Status, WindowFunction,
};

const DEFAULT_OUT: &str = "bragg-out";
const DEFAULT_FREQ_BOX: &str = "-2,2";
const DEFAULT_SCALES: &str = "250,500,1000";
const DEFAULT_TOP: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "bragg", version, about = "Fourier-Bohr series and transformability checks for cut-and-project combs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the weighted comb in a box and write comb.csv.
    Generate(Common),
    /// Closed-formula Fourier-Bohr coefficients in a frequency box (coefficients.csv).
    Fbseries(Common),
    /// Transformability report (report.json, checks.csv); the exit code is the verdict.
    Verdict(Common),
    /// Brute-force truncated transform of a comb (oracle.csv).
    Oracle(Common),
    /// Write the dual scheme (dual.json).
    Dual(Common),
}

/// Flags shared by all subcommands. Flags override `--config`, which overrides defaults.
#[derive(Args, Debug, Default, Clone)]
struct Common {
    /// JSON file with any of the fields below (snake_case).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme JSON file, or a built-in: fibonacci, integers, integers:<d>.
    #[arg(long)]
    scheme: Option<String>,
    /// Window as kind:radius[:params] (e.g. tent:1, gaussian:0.5:0.2) or inline JSON or a JSON file. [default: tent:1]
    #[arg(long)]
    window: Option<String>,
    /// Physical box a,b (cube) or a1,b1,...,ad,bd.
    #[arg(long = "box", allow_hyphen_values = true)]
    box_: Option<String>,
    /// Strictly increasing averaging scales. [default: 250,500,1000]
    #[arg(long, allow_hyphen_values = true)]
    scales: Option<String>,
    /// Frequency box a,b or a1,b1,...,ad,bd. [default: -2,2]
    #[arg(long, allow_hyphen_values = true)]
    freq_box: Option<String>,
    /// Drop closed coefficients below this modulus. [default: 1e-8 dens(L) sup|h|]
    #[arg(long)]
    coeff_floor: Option<f64>,
    /// Absolute quadrature tolerance. [default: 1e-10]
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Output directory. [default: bragg-out]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG stem chart.
    #[arg(long)]
    plot: bool,
    /// Number of largest coefficients to overlay or cross-check. [default: 20]
    #[arg(long)]
    top: Option<usize>,
    /// Oracle input: a comb table written by `generate` (reads <comb>.json for the region).
    #[arg(long)]
    comb: Option<PathBuf>,
    /// Oracle frequencies: vectors separated by ';', coordinates by ','.
    #[arg(long, allow_hyphen_values = true)]
    freqs: Option<String>,
    /// Oracle on a regular grid up to this frequency (1-D, binned FFT).
    #[arg(long)]
    binned: Option<f64>,
    /// Accept discontinuous windows in `verdict` (enabled automatically with a warning).
    #[arg(long)]
    diagnostic: bool,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scheme: Option<String>,
    window: Option<serde_json::Value>,
    #[serde(rename = "box")]
    box_: Option<String>,
    scales: Option<String>,
    freq_box: Option<String>,
    coeff_floor: Option<f64>,
    quad_tol: Option<f64>,
    out: Option<PathBuf>,
    plot: Option<bool>,
    top: Option<usize>,
    diagnostic: Option<bool>,
}

/// Resolved settings for one run.
struct RunConfig {
    flags: Common,
    quad: QuadratureOptions,
    out: PathBuf,
    top: usize,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EnumerationBudgetExceeded { .. } | Error::QuadratureNonConvergence { .. } | Error::Io(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (name, flags) = match &cli.command {
        Command::Generate(c) => ("generate", c),
        Command::Fbseries(c) => ("fbseries", c),
        Command::Verdict(c) => ("verdict", c),
        Command::Oracle(c) => ("oracle", c),
        Command::Dual(c) => ("dual", c),
    };
    let result = resolve(flags.clone()).and_then(|cfg| {
        let code = match cli.command {
            Command::Generate(_) => cmd_generate(&cfg),
            Command::Fbseries(_) => cmd_fbseries(&cfg),
            Command::Verdict(_) => cmd_verdict(&cfg),
            Command::Oracle(_) => cmd_oracle(&cfg),
            Command::Dual(_) => cmd_dual(&cfg),
        }?;
        log_run(&cfg.out, name, code);
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve(mut flags: Common) -> Result<RunConfig, Failure> {
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text).map_err(|e| usage(format!("config: {e}")))?;
        flags.scheme = flags.scheme.or(file.scheme);
        flags.window = flags.window.or(file.window.map(|v| match v {
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        }));
        flags.box_ = flags.box_.or(file.box_);
        flags.scales = flags.scales.or(file.scales);
        flags.freq_box = flags.freq_box.or(file.freq_box);
        flags.coeff_floor = flags.coeff_floor.or(file.coeff_floor);
        flags.quad_tol = flags.quad_tol.or(file.quad_tol);
        flags.out = flags.out.or(file.out);
        flags.top = flags.top.or(file.top);
        flags.plot |= file.plot.unwrap_or(false);
        flags.diagnostic |= file.diagnostic.unwrap_or(false);
    }
    for (name, v) in [("coeff-floor", flags.coeff_floor), ("quad-tol", flags.quad_tol)] {
        if let Some(x) = v {
            if !(x > 0.0 && x.is_finite()) {
                return Err(usage(format!("--{name} must be positive")));
            }
        }
    }
    let quad = flags.quad_tol.map(QuadratureOptions::with_tol).unwrap_or_default();
    Ok(RunConfig {
        out: flags.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        top: flags.top.unwrap_or(DEFAULT_TOP),
        quad,
        flags,
    })
}

impl RunConfig {
    fn scheme(&self) -> Result<CutProjectScheme, Failure> {
        let name = self.flags.scheme.as_deref().ok_or_else(|| usage("--scheme is required"))?;
        let path = Path::new(name);
        if path.exists() {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{name}: {e}")))?;
            return Ok(io::parse_scheme(&text)?);
        }
        io::builtin_scheme(name).ok_or_else(|| usage(format!("{name}: no such scheme file or built-in")))
    }

    fn window(&self, m: usize) -> Result<WindowFunction, Failure> {
        let text = self.flags.window.as_deref().unwrap_or("tent:1");
        let path = Path::new(text);
        let spec: WindowSpec = if !text.trim_start().starts_with('{') && path.is_file() {
            let body = fs::read_to_string(path).map_err(|e| usage(format!("{text}: {e}")))?;
            io::parse_window_spec(&body)?
        } else {
            io::parse_window_spec(text)?
        };
        Ok(spec.to_window(m)?)
    }

    fn physical_box(&self, d: usize) -> Result<AxisBox, Failure> {
        let s = self.flags.box_.as_deref().ok_or_else(|| usage("--box is required"))?;
        Ok(io::parse_box(s, d)?)
    }

    fn freq_box(&self, d: usize) -> Result<AxisBox, Failure> {
        Ok(io::parse_box(self.flags.freq_box.as_deref().unwrap_or(DEFAULT_FREQ_BOX), d)?)
    }

    fn scales(&self, default: Option<&str>) -> Result<Option<Vec<f64>>, Failure> {
        let Some(s) = self.flags.scales.as_deref().or(default) else {
            return Ok(None);
        };
        let v = io::parse_list(s)?;
        if v.iter().any(|x| *x <= 0.0) || v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(usage("--scales must be positive and strictly increasing"));
        }
        Ok(Some(v))
    }

    fn closed_options(&self) -> ClosedOptions {
        ClosedOptions {
            coeff_floor: self.flags.coeff_floor,
            quadrature: self.quad,
            ..ClosedOptions::default()
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        write_atomic(&self.out, name, contents).map_err(|e| Failure::from(Error::Io(e)))
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    let target = dir.join(name);
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(target)
}

/// Timestamps live only here, never in data files.
fn log_run(dir: &Path, command: &str, code: u8) {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log")) {
        let _ = writeln!(f, "{secs} {command} exit={code} args={}", args.join(" "));
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Inconclusive => 4,
    }
}

fn cmd_generate(cfg: &RunConfig) -> CmdResult {
    let scheme = cfg.scheme()?;
    let window = cfg.window(scheme.internal_dim())?;
    let bounds = cfg.physical_box(scheme.physical_dim())?;
    let comb = ModelSetComb::new(scheme.clone(), window.clone())?.comb_in(&bounds)?;
    let expected = scheme.density() * window.support_box().volume() * bounds.volume();
    let meta = CombMeta {
        lower: bounds.lower().to_vec(),
        upper: bounds.upper().to_vec(),
        atoms: comb.len(),
        expected_atoms: Some(expected),
        provenance: comb.provenance().cloned(),
    };
    let path = cfg.write("comb.csv", &io::comb_to_csv(&comb)?)?;
    cfg.write("comb.csv.json", &(serde_json::to_string_pretty(&meta).map_err(Error::from)? + "\n"))?;
    println!("atoms: {}", comb.len());
    println!("expected (dens * vol(W) * vol(box)): {expected:.6}");
    if expected > 0.0 {
        println!("relative deviation: {:.3e}", (comb.len() as f64 - expected) / expected);
    }
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_fbseries(cfg: &RunConfig) -> CmdResult {
    let scheme = cfg.scheme()?;
    let window = cfg.window(scheme.internal_dim())?;
    let d = scheme.physical_dim();
    let region = cfg.freq_box(d)?;
    let series = fourier_bohr_closed_with(&scheme, &window, &region, &cfg.closed_options())?;
    let mut rows = CoefficientRow::closed_rows(&series);
    let top: Vec<Vec<f64>> = series.largest(cfg.top).iter().map(|a| a.frequency.clone()).collect();
    if let Some(scales) = cfg.scales(None)? {
        if !top.is_empty() {
            let source = ModelSetComb::new(scheme.clone(), window.clone())?;
            let estimates = fourier_bohr_averaged_many(&source, &top, &scales, Averaging::Box)?;
            rows.extend(top.iter().zip(estimates).map(|(chi, e)| CoefficientRow {
                frequency: chi.clone(),
                value: e.value,
                source: "averaged".into(),
            }));
        }
    }
    let path = cfg.write("coefficients.csv", &io::coefficients_to_csv(d, &rows)?)?;
    if cfg.flags.plot {
        let stems: Vec<(f64, f64)> = series.entries().iter().map(|a| (a.frequency[0], a.coefficient.norm())).collect();
        let title = format!(
            "|c| for {} with {} window",
            scheme.label().unwrap_or("scheme"),
            window.profile().name()
        );
        cfg.write("spectrum.svg", &bragg::svg::stem_chart(&stems, &title))?;
    }
    println!("coefficients: {} (dropped {})", series.len(), series.dropped_count());
    for a in series.largest(cfg.top.min(5)) {
        println!("  chi={:?} |c|={:.6e}", a.frequency, a.coefficient.norm());
    }
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_verdict(cfg: &RunConfig) -> CmdResult {
    let scheme = cfg.scheme()?;
    let window = cfg.window(scheme.internal_dim())?;
    let region = cfg.freq_box(scheme.physical_dim())?;
    let scales = cfg.scales(Some(DEFAULT_SCALES))?.expect("default scales");
    let diagnostic = cfg.flags.diagnostic || !window.is_continuous();
    if diagnostic && !cfg.flags.diagnostic {
        eprintln!(
            "warning: {} window is discontinuous; running in diagnostic mode",
            window.profile().name()
        );
    }
    let options = SapOptions {
        top_n: cfg.top,
        coeff_floor: cfg.flags.coeff_floor,
        quadrature: cfg.quad,
        diagnostic,
        ..SapOptions::default()
    };
    let report = sap_transformable(&scheme, &window, &region, &scales, &options)?;
    let mut table = String::from("check,status,tolerance\n");
    for c in &report.checks {
        table.push_str(&format!(
            "{},{},{}\n",
            c.name,
            status_name(c.verdict.status),
            io::fmt_real(c.verdict.tolerance_used)
        ));
    }
    table.push_str(&format!(
        "overall,{},{}\n",
        status_name(report.overall.status),
        io::fmt_real(report.overall.tolerance_used)
    ));
    let path = cfg.write("report.json", &io::report_to_json(&report)?)?;
    cfg.write("checks.csv", &table)?;
    for c in &report.checks {
        println!("{}: {}", c.name, status_name(c.verdict.status));
    }
    for n in &report.overall.notes {
        println!("note: {n}");
    }
    println!("overall: {}", status_name(report.overall.status));
    println!("wrote {}", path.display());
    Ok(status_code(report.overall.status))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Inconclusive => "inconclusive",
    }
}

fn cmd_oracle(cfg: &RunConfig) -> CmdResult {
    let comb = match &cfg.flags.comb {
        Some(path) => {
            let meta_path = PathBuf::from(format!("{}.json", path.display()));
            let meta_text =
                fs::read_to_string(&meta_path).map_err(|e| usage(format!("{}: {e}", meta_path.display())))?;
            let meta: CombMeta = serde_json::from_str(&meta_text).map_err(|e| usage(format!("comb metadata: {e}")))?;
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            io::comb_from_csv(&text, meta.region()?)?
        }
        None => {
            let scheme = cfg.scheme()?;
            let window = cfg.window(scheme.internal_dim())?;
            let bounds = cfg.physical_box(scheme.physical_dim())?;
            ModelSetComb::new(scheme, window)?.comb_in(&bounds)?
        }
    };
    let d = comb.dim();
    let rows: Vec<CoefficientRow> = match (&cfg.flags.freqs, cfg.flags.binned) {
        (Some(_), Some(_)) => return Err(usage("use either --freqs or --binned")),
        (Some(list), None) => {
            let freqs = list
                .split(';')
                .map(io::parse_list)
                .collect::<Result<Vec<_>, _>>()?;
            let values = truncated_transform_oracle(&comb, &freqs)?;
            freqs
                .into_iter()
                .zip(values)
                .map(|(f, v)| CoefficientRow {
                    frequency: f,
                    value: v,
                    source: "oracle".into(),
                })
                .collect()
        }
        (None, Some(fmax)) => {
            let spec = binned_spectrum(&comb, fmax)?;
            spec.frequencies
                .iter()
                .zip(&spec.values)
                .map(|(f, v)| CoefficientRow {
                    frequency: vec![*f],
                    value: *v,
                    source: "binned".into(),
                })
                .collect()
        }
        (None, None) => return Err(usage("--freqs or --binned is required")),
    };
    let path = cfg.write("oracle.csv", &io::coefficients_to_csv(d, &rows)?)?;
    if cfg.flags.plot && d == 1 {
        let stems: Vec<(f64, f64)> = rows.iter().map(|r| (r.frequency[0], r.value.norm())).collect();
        cfg.write("oracle.svg", &bragg::svg::stem_chart(&stems, "truncated transform"))?;
    }
    println!("atoms: {}, frequencies: {}", comb.len(), rows.len());
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_dual(cfg: &RunConfig) -> CmdResult {
    let scheme = cfg.scheme()?;
    let dual = scheme.dual()?;
    let path = cfg.write("dual.json", &io::scheme_to_json(&dual)?)?;
    println!("dens(L) = {:.16e}", scheme.density());
    println!("dens(L0) = {:.16e}", dual.density());
    println!("wrote {}", path.display());
    Ok(0)
}
