//! `qdyn` command line.
//!
//! Exit status: 0 on success, 1 for usage errors (bad flags or values,
//! malformed config), 2 for runtime failures (I/O, numerical errors).
//! Diagnostics are a single line on stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qdyn::dynamics::{
    classify_linear, iterate_orbit, iterate_system, linear_roots, MapParams, SystemParams,
};
use qdyn::ecg::{add_measurement_noise, integrate_ecg, resample_uniform};
use qdyn::escape::{render_escape_grid_with_threads, white_fraction, GridSpec, ParamMode};
use qdyn::features::extract_frame_features;
use qdyn::io::{
    beats_table, frame_table, parse_config, read_frame_csv, write_csv, write_pgm, Cell, PgmStyle,
    RunConfig, Table,
};
use qdyn::stability::stability_report;

/// Environment variable overriding `--threads`.
pub const THREADS_ENV: &str = "QDYN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qdyn",
    version,
    about = "Quadratic difference-equation dynamics and cardiac signal tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render an escape-time raster over the disk of initial values
    Escape(EscapeArgs),
    /// Iterate x[n+1] = a x[n]^alpha + b x[n-1]^alpha
    Orbit(OrbitArgs),
    /// Characteristic roots and classification of x[n+1] = b x[n] + a x[n-1]
    Linear(LinearArgs),
    /// Fixed points and stability of the coupled quadratic map
    Stability(StabilityArgs),
    /// Iterate the coupled quadratic map
    System(SystemArgs),
    /// Trajectory bundle from a grid of starting points
    Phase(PhaseArgs),
    /// Integrate the synthetic ECG model
    EcgSynth(EcgSynthArgs),
    /// Extract per-beat RR/HR/PEP from a signal CSV
    EcgFeatures(EcgFeaturesArgs),
}

fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err("value must be finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("value must be positive".into())
    }
}

fn exponent(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 && v <= 2.0 {
        Ok(v)
    } else {
        Err("exponent must lie in (0, 2]".into())
    }
}

fn mode(s: &str) -> Result<ParamMode, String> {
    s.parse().map_err(|e: qdyn::Error| e.to_string())
}

fn style(s: &str) -> Result<PgmStyle, String> {
    s.parse().map_err(|e: qdyn::Error| e.to_string())
}

#[derive(Debug, Args)]
struct EscapeArgs {
    /// polar, abs-polar or sign
    #[arg(long, default_value = "polar", value_parser = mode)]
    mode: ParamMode,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = finite)]
    k: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0, value_parser = exponent)]
    alpha: f64,
    /// Half-width of the plotted square
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0, value_parser = positive)]
    radius: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..=16384))]
    pixels: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    iters: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0, value_parser = positive)]
    threshold: f64,
    /// binary or grayscale
    #[arg(long, default_value = "binary", value_parser = style)]
    style: PgmStyle,
    #[arg(long)]
    out: PathBuf,
    /// Also write the raw escape codes as CSV (row,col,code)
    #[arg(long)]
    counts_out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism
    #[arg(long, allow_hyphen_values = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    b: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0, value_parser = exponent)]
    alpha: f64,
    #[arg(long = "x-prev", default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite)]
    x_prev: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    x0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LinearArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    b: f64,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    b: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    sigma: f64,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    b: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    sigma: f64,
    #[arg(long, default_value_t = 0.07, allow_hyphen_values = true, value_parser = finite)]
    x0: f64,
    #[arg(long, default_value_t = 0.08, allow_hyphen_values = true, value_parser = finite)]
    y0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    b: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = finite)]
    sigma: f64,
    /// Starting points per axis
    #[arg(long = "grid-n", allow_hyphen_values = true, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=1000))]
    grid_n: u32,
    /// Starting points cover [-extent, extent]^2
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0, value_parser = positive)]
    extent: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EcgSynthArgs {
    /// Config file with an [ecg] section
    #[arg(long)]
    config: PathBuf,
    /// Seconds
    #[arg(long, allow_hyphen_values = true, default_value_t = 10.0, value_parser = positive)]
    duration: f64,
    /// Integration step, seconds
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0005, value_parser = positive)]
    dt: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EcgFeaturesArgs {
    /// Signal CSV: a `t` column, `ecg` or `z`, optionally `icg` or `dzdt`
    #[arg(long = "in")]
    input: PathBuf,
    /// Analysis rate; the input is resampled when it differs
    #[arg(long, allow_hyphen_values = true, default_value_t = 2000.0, value_parser = positive)]
    rate: f64,
    #[arg(long = "kernel-len")]
    kernel_len: Option<usize>,
    #[arg(long = "poly-order")]
    poly_order: Option<usize>,
    /// Config file with a [features] section
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<qdyn::Error> for Failure {
    fn from(e: qdyn::Error) -> Self {
        match e {
            qdyn::Error::Config { .. } | qdyn::Error::InvalidParameter(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", one_line(&e.to_string()));
            return 1;
        }
    };
    let result = match cli.command {
        Command::Escape(a) => escape(a, stdout),
        Command::Orbit(a) => orbit(a, stdout, stderr),
        Command::Linear(a) => linear(a, stdout),
        Command::Stability(a) => stability(a, stdout),
        Command::System(a) => system(a, stdout, stderr),
        Command::Phase(a) => phase(a, stdout),
        Command::EcgSynth(a) => ecg_synth(a, stdout),
        Command::EcgFeatures(a) => ecg_features(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

/// Collapses a multi-line clap diagnostic into one line, dropping the usage
/// and help hints.
fn one_line(rendered: &str) -> String {
    rendered
        .lines()
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn thread_count(flag: Option<u32>) -> Result<usize, Failure> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        };
    }
    Ok(flag
        .map(|n| n as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn emit(table: &Table, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match out {
        Some(path) => write_csv(table, path).map_err(Failure::from),
        None => stdout
            .write_all(table.to_csv().as_bytes())
            .map_err(Failure::from),
    }
}

fn escape(a: EscapeArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = GridSpec {
        pixels: a.pixels as usize,
        radius: a.radius,
        mode: a.mode,
        k: a.k,
        alpha: a.alpha,
        iters: a.iters,
        threshold: a.threshold,
    };
    let threads = thread_count(a.threads)?;
    let grid = render_escape_grid_with_threads(&spec, threads)?;
    write_pgm(&grid, a.style, &a.out)?;
    if let Some(path) = &a.counts_out {
        let mut t = Table::new(["row", "col", "code"]);
        for (idx, &code) in grid.cells.iter().enumerate() {
            t.push(vec![
                Cell::Int((idx / spec.pixels) as i64),
                Cell::Int((idx % spec.pixels) as i64),
                Cell::Int(code.into()),
            ]);
        }
        write_csv(&t, path)?;
    }
    writeln!(stdout, "white fraction: {:.6}", white_fraction(&grid))?;
    Ok(())
}

fn orbit(a: OrbitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let p = MapParams::new(a.a, a.b, a.alpha)?;
    let o = iterate_orbit(&p, a.x_prev, a.x0, a.steps as usize)?;
    let mut t = Table::new(["n", "x"]);
    t.push(vec![Cell::Int(0), Cell::Real(a.x0)]);
    for (i, v) in o.values.iter().enumerate() {
        t.push(vec![Cell::Int(i as i64 + 1), Cell::Real(*v)]);
    }
    if let Some(step) = o.diverged_at {
        writeln!(stderr, "note: orbit diverged at step {step}")?;
    }
    emit(&t, a.out.as_deref(), stdout)
}

fn linear(a: LinearArgs, stdout: &mut dyn Write) -> Outcome {
    let la = linear_roots(a.a, a.b);
    writeln!(
        stdout,
        "lambda1 = {}",
        fmt_complex(la.lambda1.re, la.lambda1.im)
    )?;
    writeln!(
        stdout,
        "lambda2 = {}",
        fmt_complex(la.lambda2.re, la.lambda2.im)
    )?;
    writeln!(stdout, "spectral radius = {}", la.spectral_radius)?;
    writeln!(stdout, "{}", classify_linear(a.a, a.b))?;
    Ok(())
}

fn fmt_complex(re: f64, im: f64) -> String {
    let re = re + 0.0;
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re} {} {}i", if im < 0.0 { '-' } else { '+' }, im.abs())
    }
}

fn stability(a: StabilityArgs, stdout: &mut dyn Write) -> Outcome {
    let p = SystemParams::new(a.a, a.b, a.sigma)?;
    let reports = stability_report(&p);
    if reports.is_empty() {
        writeln!(stdout, "no real fixed points")?;
    }
    for r in reports {
        writeln!(stdout, "{r}")?;
        let (l1, l2) = r.eigenvalues;
        writeln!(
            stdout,
            "  eigenvalues: {:.12}{:+.12}i, {:.12}{:+.12}i",
            l1.re + 0.0,
            l1.im + 0.0,
            l2.re + 0.0,
            l2.im + 0.0
        )?;
    }
    Ok(())
}

fn system(a: SystemArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let p = SystemParams::new(a.a, a.b, a.sigma)?;
    let tr = iterate_system(&p, a.x0, a.y0, a.steps as usize)?;
    let mut t = Table::new(["t", "x", "y"]);
    t.push(vec![Cell::Int(0), Cell::Real(a.x0), Cell::Real(a.y0)]);
    for s in &tr.states {
        t.push(vec![
            Cell::Int(s.t as i64),
            Cell::Real(s.x),
            Cell::Real(s.y),
        ]);
    }
    if let Some(step) = tr.diverged_at {
        writeln!(stderr, "note: trajectory diverged at step {step}")?;
    }
    emit(&t, a.out.as_deref(), stdout)
}

fn phase(a: PhaseArgs, stdout: &mut dyn Write) -> Outcome {
    let p = SystemParams::new(a.a, a.b, a.sigma)?;
    let n = a.grid_n as usize;
    let coord = |i: usize| {
        if n == 1 {
            0.0
        } else {
            -a.extent + 2.0 * a.extent * i as f64 / (n - 1) as f64
        }
    };
    let mut t = Table::new(["traj", "t", "x", "y"]);
    for i in 0..n {
        for j in 0..n {
            let id = (i * n + j) as i64;
            let (x0, y0) = (coord(j), coord(i));
            t.push(vec![
                Cell::Int(id),
                Cell::Int(0),
                Cell::Real(x0),
                Cell::Real(y0),
            ]);
            let tr = iterate_system(&p, x0, y0, a.steps as usize)?;
            for s in &tr.states {
                t.push(vec![
                    Cell::Int(id),
                    Cell::Int(s.t as i64),
                    Cell::Real(s.x),
                    Cell::Real(s.y),
                ]);
            }
        }
    }
    emit(&t, a.out.as_deref(), stdout)
}

fn load_config(path: &Path) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn ecg_synth(a: EcgSynthArgs, stdout: &mut dyn Write) -> Outcome {
    let cfg = load_config(&a.config)?;
    if cfg.ecg.events.is_empty() {
        return Err(Failure::Usage(format!(
            "{}: the [ecg] section needs at least one `event = LABEL theta a b` line",
            a.config.display()
        )));
    }
    let params = cfg.ecg_params()?;
    let (x0, y0, z0) = cfg.ecg_start();
    let frame = integrate_ecg(&params, x0, y0, z0, a.duration, a.dt)?;
    let frame = add_measurement_noise(&frame, "z", params.noise_sd, params.noise_seed)?;
    write_csv(&frame_table(&frame), &a.out)?;
    writeln!(
        stdout,
        "{} samples at {} Hz written to {}",
        frame.len(),
        frame.sample_rate,
        a.out.display()
    )?;
    Ok(())
}

fn ecg_features(a: EcgFeaturesArgs, stdout: &mut dyn Write) -> Outcome {
    let mut fc = match &a.config {
        Some(path) => load_config(path)?.feature_config(),
        None => RunConfig::default().feature_config(),
    };
    if let Some(k) = a.kernel_len {
        fc.kernel_len = k;
    }
    if let Some(p) = a.poly_order {
        fc.poly_order = p;
    }
    let text = fs::read_to_string(&a.input)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", a.input.display())))?;
    let frame = read_frame_csv(&text, None)?;
    let frame = if (frame.sample_rate / a.rate - 1.0).abs() > 1e-9 {
        resample_uniform(&frame, a.rate)?
    } else {
        frame
    };
    let beats = extract_frame_features(&frame, &fc)?;
    let table = beats_table(&beats);
    fs::write(&a.out, table.to_csv())?;
    let hr: Vec<f64> = beats.iter().filter_map(|b| b.hr).collect();
    if hr.is_empty() {
        writeln!(stdout, "{} beats", beats.len())?;
    } else {
        writeln!(
            stdout,
            "{} beats, mean HR {:.2} bpm",
            beats.len(),
            hr.iter().sum::<f64>() / hr.len() as f64
        )?;
    }
    Ok(())
}
