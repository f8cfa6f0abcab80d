//! Config documents, PGM rasters and CSV tables.
//!
//! # Config format
//!
//! Line based, `key = value`, `#` starts a comment, `[name]` opens one of
//! the sections `escape`, `system`, `ecg`, `features`. ECG events are
//! repeated `event = LABEL theta a b` lines. Unknown sections and keys,
//! duplicate keys and malformed values are rejected with their line number.
//!
//! # PGM
//!
//! Binary P5: `"P5\n"`, `"<w> <h>\n"`, `"255\n"`, then `w * h` bytes in
//! row-major order.
//!
//! # CSV
//!
//! Comma separated, `\n` line ends, a header row, floats written with 17
//! significant digits (`{:.16e}`) so every value reads back bit-exactly.
//! Integer columns (step counters) are written as integers; missing
//! optional values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::ecg::{EcgEvent, EcgForm, EcgParams, WaveLabel};
use crate::escape::{EscapeGrid, GridSpec, ParamMode};
use crate::features::{BeatFeatures, FeatureConfig, OnsetWindow};
use crate::signal::SignalFrame;
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EscapeSection {
    pub mode: Option<ParamMode>,
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub radius: Option<f64>,
    pub pixels: Option<usize>,
    pub iters: Option<u32>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SystemSection {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub sigma: Option<f64>,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EcgSection {
    pub omega: Option<f64>,
    /// Baseline wander amplitude `A`, mV.
    pub amplitude: Option<f64>,
    pub resp_freq: Option<f64>,
    pub form: Option<EcgForm>,
    pub noise_sd: Option<f64>,
    pub noise_seed: Option<u64>,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub z0: Option<f64>,
    pub events: Vec<EcgEvent>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeaturesSection {
    pub kernel_len: Option<usize>,
    pub poly_order: Option<usize>,
    pub min_separation: Option<f64>,
    pub peak_quantile: Option<f64>,
    pub onset_offset: Option<f64>,
    pub onset_length: Option<f64>,
}

/// A parsed config document. Absent keys stay `None` and fall back to the
/// defaults of the object they configure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub escape: EscapeSection,
    pub system: SystemSection,
    pub ecg: EcgSection,
    pub features: FeaturesSection,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Escape,
    System,
    Ecg,
    Features,
}

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| cfg_err(line, format!("malformed value `{v}` for `{key}`")))
}

fn parse_real(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = parse_num(line, key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(cfg_err(line, format!("`{key}` must be finite")))
    }
}

fn set<T>(slot: &mut Option<T>, line: usize, key: &str, value: T) -> Result<()> {
    if slot.is_some() {
        return Err(cfg_err(line, format!("duplicate key `{key}`")));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| cfg_err(line, "unterminated section header"))?
                .trim();
            section = Some(match name {
                "escape" => Section::Escape,
                "system" => Section::System,
                "ecg" => Section::Ecg,
                "features" => Section::Features,
                other => return Err(cfg_err(line, format!("unknown section `{other}`"))),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| cfg_err(line, "expected `key = value`"))?;
        let Some(sec) = section else {
            return Err(cfg_err(line, format!("key `{key}` outside any section")));
        };
        let unknown = || cfg_err(line, format!("unknown key `{key}`"));
        match sec {
            Section::Escape => {
                let s = &mut cfg.escape;
                match key {
                    "mode" => {
                        let m = value
                            .parse()
                            .map_err(|e: Error| cfg_err(line, e.to_string()))?;
                        set(&mut s.mode, line, key, m)?
                    }
                    "k" => set(&mut s.k, line, key, parse_real(line, key, value)?)?,
                    "alpha" => set(&mut s.alpha, line, key, parse_real(line, key, value)?)?,
                    "radius" => set(&mut s.radius, line, key, parse_real(line, key, value)?)?,
                    "pixels" => set(&mut s.pixels, line, key, parse_num(line, key, value)?)?,
                    "iters" => set(&mut s.iters, line, key, parse_num(line, key, value)?)?,
                    "threshold" => set(&mut s.threshold, line, key, parse_real(line, key, value)?)?,
                    _ => return Err(unknown()),
                }
            }
            Section::System => {
                let s = &mut cfg.system;
                match key {
                    "a" => set(&mut s.a, line, key, parse_real(line, key, value)?)?,
                    "b" => set(&mut s.b, line, key, parse_real(line, key, value)?)?,
                    "sigma" => set(&mut s.sigma, line, key, parse_real(line, key, value)?)?,
                    "x0" => set(&mut s.x0, line, key, parse_real(line, key, value)?)?,
                    "y0" => set(&mut s.y0, line, key, parse_real(line, key, value)?)?,
                    "steps" => set(&mut s.steps, line, key, parse_num(line, key, value)?)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Ecg => {
                let s = &mut cfg.ecg;
                match key {
                    "omega" => set(&mut s.omega, line, key, parse_real(line, key, value)?)?,
                    "amplitude" => set(&mut s.amplitude, line, key, parse_real(line, key, value)?)?,
                    "resp_freq" => set(&mut s.resp_freq, line, key, parse_real(line, key, value)?)?,
                    "form" => {
                        let f = value
                            .parse()
                            .map_err(|e: Error| cfg_err(line, e.to_string()))?;
                        set(&mut s.form, line, key, f)?
                    }
                    "noise_sd" => set(&mut s.noise_sd, line, key, parse_real(line, key, value)?)?,
                    "noise_seed" => {
                        set(&mut s.noise_seed, line, key, parse_num(line, key, value)?)?
                    }
                    "x0" => set(&mut s.x0, line, key, parse_real(line, key, value)?)?,
                    "y0" => set(&mut s.y0, line, key, parse_real(line, key, value)?)?,
                    "z0" => set(&mut s.z0, line, key, parse_real(line, key, value)?)?,
                    "event" => s.events.push(parse_event(line, value)?),
                    _ => return Err(unknown()),
                }
            }
            Section::Features => {
                let s = &mut cfg.features;
                match key {
                    "kernel_len" => {
                        set(&mut s.kernel_len, line, key, parse_num(line, key, value)?)?
                    }
                    "poly_order" => {
                        set(&mut s.poly_order, line, key, parse_num(line, key, value)?)?
                    }
                    "min_separation" => set(
                        &mut s.min_separation,
                        line,
                        key,
                        parse_real(line, key, value)?,
                    )?,
                    "peak_quantile" => set(
                        &mut s.peak_quantile,
                        line,
                        key,
                        parse_real(line, key, value)?,
                    )?,
                    "onset_offset" => set(
                        &mut s.onset_offset,
                        line,
                        key,
                        parse_real(line, key, value)?,
                    )?,
                    "onset_length" => set(
                        &mut s.onset_length,
                        line,
                        key,
                        parse_real(line, key, value)?,
                    )?,
                    _ => return Err(unknown()),
                }
            }
        }
    }
    Ok(cfg)
}

fn parse_event(line: usize, value: &str) -> Result<EcgEvent> {
    let fields: Vec<&str> = value.split_whitespace().collect();
    let [label, theta, a, b] = fields[..] else {
        return Err(cfg_err(line, "event needs `LABEL theta a b`"));
    };
    let label: WaveLabel = label
        .parse()
        .map_err(|e: Error| cfg_err(line, e.to_string()))?;
    EcgEvent::new(
        label,
        parse_real(line, "event theta", theta)?,
        parse_real(line, "event a", a)?,
        parse_real(line, "event b", b)?,
    )
    .map_err(|e| cfg_err(line, e.to_string()))
}

impl RunConfig {
    /// Serialises back to the config format; `parse_config` of the result
    /// yields an equal `RunConfig`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, entries: Vec<(&str, Option<String>)>, extra: Vec<String>| {
            if entries.iter().all(|(_, v)| v.is_none()) && extra.is_empty() {
                return;
            }
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{name}]");
            for (k, v) in entries {
                if let Some(v) = v {
                    let _ = writeln!(out, "{k} = {v}");
                }
            }
            for line in extra {
                let _ = writeln!(out, "{line}");
            }
        };
        fn s<T: ToString>(v: &Option<T>) -> Option<String> {
            v.as_ref().map(ToString::to_string)
        }

        let e = &self.escape;
        section(
            "escape",
            vec![
                ("mode", s(&e.mode)),
                ("k", s(&e.k)),
                ("alpha", s(&e.alpha)),
                ("radius", s(&e.radius)),
                ("pixels", s(&e.pixels)),
                ("iters", s(&e.iters)),
                ("threshold", s(&e.threshold)),
            ],
            vec![],
        );
        let y = &self.system;
        section(
            "system",
            vec![
                ("a", s(&y.a)),
                ("b", s(&y.b)),
                ("sigma", s(&y.sigma)),
                ("x0", s(&y.x0)),
                ("y0", s(&y.y0)),
                ("steps", s(&y.steps)),
            ],
            vec![],
        );
        let c = &self.ecg;
        section(
            "ecg",
            vec![
                ("omega", s(&c.omega)),
                ("amplitude", s(&c.amplitude)),
                ("resp_freq", s(&c.resp_freq)),
                ("form", s(&c.form)),
                ("noise_sd", s(&c.noise_sd)),
                ("noise_seed", s(&c.noise_seed)),
                ("x0", s(&c.x0)),
                ("y0", s(&c.y0)),
                ("z0", s(&c.z0)),
            ],
            c.events
                .iter()
                .map(|ev| format!("event = {} {} {} {}", ev.label, ev.theta, ev.a, ev.b))
                .collect(),
        );
        let f = &self.features;
        section(
            "features",
            vec![
                ("kernel_len", s(&f.kernel_len)),
                ("poly_order", s(&f.poly_order)),
                ("min_separation", s(&f.min_separation)),
                ("peak_quantile", s(&f.peak_quantile)),
                ("onset_offset", s(&f.onset_offset)),
                ("onset_length", s(&f.onset_length)),
            ],
            vec![],
        );
        out
    }

    pub fn grid_spec(&self) -> GridSpec {
        let d = GridSpec::default();
        let e = &self.escape;
        GridSpec {
            pixels: e.pixels.unwrap_or(d.pixels),
            radius: e.radius.unwrap_or(d.radius),
            mode: e.mode.unwrap_or(d.mode),
            k: e.k.unwrap_or(d.k),
            alpha: e.alpha.unwrap_or(d.alpha),
            iters: e.iters.unwrap_or(d.iters),
            threshold: e.threshold.unwrap_or(d.threshold),
        }
    }

    /// ECG parameters with defaults taken from [`EcgParams::example`]
    /// except the event table, which must come from the document.
    pub fn ecg_params(&self) -> Result<EcgParams> {
        let d = EcgParams::example();
        let c = &self.ecg;
        let p = EcgParams {
            omega: c.omega.unwrap_or(d.omega),
            events: c.events.clone(),
            baseline_amplitude: c.amplitude.unwrap_or(d.baseline_amplitude),
            resp_freq: c.resp_freq.unwrap_or(d.resp_freq),
            form: c.form.unwrap_or(d.form),
            noise_sd: c.noise_sd.unwrap_or(d.noise_sd),
            noise_seed: c.noise_seed.unwrap_or(d.noise_seed),
        };
        p.validate()?;
        Ok(p)
    }

    /// Initial ECG state `(x, y, z)`, default `(1, 0, 0)`.
    pub fn ecg_start(&self) -> (f64, f64, f64) {
        let c = &self.ecg;
        (
            c.x0.unwrap_or(1.0),
            c.y0.unwrap_or(0.0),
            c.z0.unwrap_or(0.0),
        )
    }

    pub fn feature_config(&self) -> FeatureConfig {
        let d = FeatureConfig::default();
        let f = &self.features;
        FeatureConfig {
            kernel_len: f.kernel_len.unwrap_or(d.kernel_len),
            poly_order: f.poly_order.unwrap_or(d.poly_order),
            min_separation: f.min_separation.unwrap_or(d.min_separation),
            peak_quantile: f.peak_quantile.unwrap_or(d.peak_quantile),
            onset: OnsetWindow {
                offset: f.onset_offset.unwrap_or(d.onset.offset),
                length: f.onset_length.unwrap_or(d.onset.length),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmStyle {
    /// Bounded cells white (255), escaped black (0).
    Binary,
    /// Bounded white; escape index `m` maps linearly onto `0..=200`.
    Grayscale,
}

impl FromStr for PgmStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Self::Binary),
            "grayscale" | "greyscale" => Ok(Self::Grayscale),
            other => Err(Error::InvalidParameter(format!(
                "unknown style `{other}` (expected binary or grayscale)"
            ))),
        }
    }
}

pub fn pixel_value(code: u32, iters: u32, style: PgmStyle) -> u8 {
    match (code, style) {
        (0, _) => 255,
        (_, PgmStyle::Binary) => 0,
        (m, PgmStyle::Grayscale) => {
            let span = u64::from(iters.saturating_sub(1).max(1));
            (200 * u64::from(m - 1) / span).min(200) as u8
        }
    }
}

pub fn encode_pgm(grid: &EscapeGrid, style: PgmStyle) -> Vec<u8> {
    let w = grid.spec.pixels;
    let header = format!("P5\n{w} {w}\n255\n");
    let mut bytes = Vec::with_capacity(header.len() + grid.cells.len());
    bytes.extend_from_slice(header.as_bytes());
    bytes.extend(
        grid.cells
            .iter()
            .map(|&c| pixel_value(c, grid.spec.iters, style)),
    );
    bytes
}

pub fn write_pgm(grid: &EscapeGrid, style: PgmStyle, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(grid, style))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

/// Rendering used for every real CSV field.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Real(v) => out.push_str(&format_real(*v)),
                    Cell::Int(v) => {
                        let _ = write!(out, "{v}");
                    }
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Header `t,<channels...>`.
pub fn frame_table(frame: &SignalFrame) -> Table {
    let mut table = Table::new(std::iter::once("t").chain(frame.channel_names()));
    let cols: Vec<&[f64]> = frame.channels().map(|(_, d)| d).collect();
    for i in 0..frame.len() {
        let mut row = Vec::with_capacity(cols.len() + 1);
        row.push(Cell::Real(frame.time(i)));
        row.extend(cols.iter().map(|c| Cell::Real(c[i])));
        table.push(row);
    }
    table
}

pub const BEAT_HEADER: [&str; 6] = ["t_r_peak", "rr", "hr", "r_onset", "b_point", "pep"];

pub fn beats_table(beats: &[BeatFeatures]) -> Table {
    let mut table = Table::new(BEAT_HEADER);
    for b in beats {
        table.push(vec![
            b.r_peak_t.into(),
            b.rr.into(),
            b.hr.into(),
            b.r_onset_t.into(),
            b.b_point_t.into(),
            b.pep.into(),
        ]);
    }
    table
}

fn write_text(text: &str, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// Writes any non-empty table.
pub fn write_csv(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Csv("refusing to write an empty table".into()));
    }
    write_text(&table.to_csv(), path.as_ref())
}

/// Parses a numeric CSV document into header and columns. Empty fields
/// read as NaN.
pub fn read_csv_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Csv("no header row".into()))?;
    let header: Vec<String> = header.split(',').map(|h| h.trim().to_string()).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::Csv(format!(
                "line {}: expected {} fields, found {}",
                idx + 1,
                header.len(),
                fields.len()
            )));
        }
        for (col, f) in cols.iter_mut().zip(fields) {
            let f = f.trim();
            let v = if f.is_empty() {
                f64::NAN
            } else {
                f.parse()
                    .map_err(|_| Error::Csv(format!("line {}: bad number `{f}`", idx + 1)))?
            };
            col.push(v);
        }
    }
    Ok((header, cols))
}

/// Reads a frame written by [`frame_table`]. The first column must be `t`;
/// the sample rate is inferred from its span unless given.
pub fn read_frame_csv(text: &str, sample_rate: Option<f64>) -> Result<SignalFrame> {
    let (header, cols) = read_csv_columns(text)?;
    if header.first().map(String::as_str) != Some("t") {
        return Err(Error::Csv("first column must be `t`".into()));
    }
    let t = &cols[0];
    if t.is_empty() {
        return Err(Error::EmptySignal);
    }
    let rate = match sample_rate {
        Some(r) => r,
        None if t.len() >= 2 => (t.len() - 1) as f64 / (t[t.len() - 1] - t[0]),
        None => {
            return Err(Error::Csv(
                "cannot infer the sample rate from one row".into(),
            ))
        }
    };
    let mut frame = SignalFrame::new(rate, t[0])?;
    for (name, col) in header.iter().zip(&cols).skip(1) {
        frame.set_channel(name, col.clone())?;
    }
    Ok(frame)
}
