//! Escape-time rasters over the disk of initial values.
//!
//! Each pixel centre `(u, v)` is read as `r (cos theta, sin theta)`: the
//! orbit starts at `x[-1] = 0, x[0] = r` and `theta` picks the coefficients.
//! A cell stores the 1-based index of the first iterate whose magnitude
//! reaches the threshold, or 0 if the orbit stayed below it for the whole
//! budget.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{check_alpha, next_value, MapParams};
use crate::{Error, Result};

/// How a plane point's angle becomes the coefficient pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMode {
    /// `a = k cos(theta)`, `b = k sin(theta)`.
    Polar,
    /// `a = k |cos(theta)|`, `b = k |sin(theta)|`.
    AbsPolar,
    /// `a = sgn(cos(theta))`, `b = sgn(sin(theta))`, unit-magnitude coefficients.
    Sign,
}

impl FromStr for ParamMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(Self::Polar),
            "abs-polar" => Ok(Self::AbsPolar),
            "sign" => Ok(Self::Sign),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode `{other}` (expected polar, abs-polar or sign)"
            ))),
        }
    }
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Polar => "polar",
            Self::AbsPolar => "abs-polar",
            Self::Sign => "sign",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Side length of the square raster.
    pub pixels: usize,
    /// Half-width of the plotted square in plane units.
    pub radius: f64,
    pub mode: ParamMode,
    pub k: f64,
    pub alpha: f64,
    pub iters: u32,
    pub threshold: f64,
}

impl Default for GridSpec {
    /// The bounded-disk picture: 256 px over `[-2, 2]^2`, quadratic,
    /// `k = 1`, 30 iterations, threshold 2.
    fn default() -> Self {
        Self {
            pixels: 256,
            radius: 2.0,
            mode: ParamMode::Polar,
            k: 1.0,
            alpha: 2.0,
            iters: 30,
            threshold: 2.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.pixels < 2 {
            return Err(Error::InvalidParameter("pixels must be at least 2".into()));
        }
        if self.iters < 1 {
            return Err(Error::InvalidParameter("iters must be at least 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::InvalidParameter("threshold must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParameter("radius must be positive".into()));
        }
        if !self.k.is_finite() {
            return Err(Error::InvalidParameter("k must be finite".into()));
        }
        check_alpha(self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeGrid {
    pub spec: GridSpec,
    /// Row-major, `pixels * pixels` codes in `[0, iters]`.
    pub cells: Vec<u32>,
}

impl EscapeGrid {
    pub fn code(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.spec.pixels + col]
    }

    pub fn is_bounded(&self, row: usize, col: usize) -> bool {
        self.code(row, col) == 0
    }
}

/// Centre of raster cell `(row, col)`; row 0 is the top edge.
pub fn pixel_to_plane(spec: &GridSpec, row: usize, col: usize) -> Result<(f64, f64)> {
    if row >= spec.pixels || col >= spec.pixels {
        return Err(Error::IndexOutOfRange {
            row,
            col,
            pixels: spec.pixels,
        });
    }
    Ok(cell_center(spec, row, col))
}

#[inline]
fn cell_center(spec: &GridSpec, row: usize, col: usize) -> (f64, f64) {
    let step = 2.0 * spec.radius / spec.pixels as f64;
    let u = -spec.radius + (col as f64 + 0.5) * step;
    let v = spec.radius - (row as f64 + 0.5) * step;
    (u, v)
}

/// Coefficients for a plane point, with its polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub params: MapParams,
    pub r: f64,
    pub theta: f64,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `alpha` is carried through unchanged into the returned [`MapParams`].
pub fn params_for_point(mode: ParamMode, k: f64, alpha: f64, u: f64, v: f64) -> PointParams {
    let r = u.hypot(v);
    let theta = v.atan2(u);
    let (a, b) = match mode {
        ParamMode::Polar => (k * theta.cos(), k * theta.sin()),
        ParamMode::AbsPolar => (k * theta.cos().abs(), k * theta.sin().abs()),
        // Signs are read off the coordinates: cos(pi/2) evaluates to 6e-17 in
        // floating point, which would turn an axis point into sign +1.
        ParamMode::Sign if r == 0.0 => (1.0, 0.0),
        ParamMode::Sign => (sgn(u), sgn(v)),
    };
    PointParams {
        params: MapParams { a, b, alpha },
        r,
        theta,
    }
}

/// First 1-based iterate index with `|x| >= threshold` (non-finite counts),
/// starting from `x[-1] = 0, x[0] = r`; 0 when none within `iters`.
/// Only iterates are tested, never the initial values.
pub fn escape_code(p: &MapParams, r: f64, iters: u32, threshold: f64) -> u32 {
    let mut prev = 0.0;
    let mut curr = r;
    for m in 1..=iters {
        let next = next_value(p, prev, curr);
        if !(next.abs() < threshold) {
            return m;
        }
        prev = curr;
        curr = next;
    }
    0
}

fn render_rows(spec: &GridSpec, cells: &mut [u32]) {
    cells
        .par_chunks_mut(spec.pixels)
        .enumerate()
        .for_each(|(row, line)| {
            for (col, cell) in line.iter_mut().enumerate() {
                let (u, v) = cell_center(spec, row, col);
                let pp = params_for_point(spec.mode, spec.k, spec.alpha, u, v);
                *cell = escape_code(&pp.params, pp.r, spec.iters, spec.threshold);
            }
        });
}

/// Renders on the global rayon pool.
pub fn render_escape_grid(spec: &GridSpec) -> Result<EscapeGrid> {
    spec.validate()?;
    let mut cells = vec![0u32; spec.pixels * spec.pixels];
    render_rows(spec, &mut cells);
    Ok(EscapeGrid { spec: *spec, cells })
}

/// Renders on a dedicated pool of `threads` workers. The result does not
/// depend on `threads`.
pub fn render_escape_grid_with_threads(spec: &GridSpec, threads: usize) -> Result<EscapeGrid> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut cells = vec![0u32; spec.pixels * spec.pixels];
    pool.install(|| render_rows(spec, &mut cells));
    Ok(EscapeGrid { spec: *spec, cells })
}

/// Fraction of cells that never escaped.
pub fn white_fraction(g: &EscapeGrid) -> f64 {
    if g.cells.is_empty() {
        return 0.0;
    }
    let bounded = g.cells.iter().filter(|&&c| c == 0).count();
    bounded as f64 / g.cells.len() as f64
}

/// Fraction of cells whose bounded/escaped classification differs.
pub fn mask_diff(g1: &EscapeGrid, g2: &EscapeGrid) -> Result<f64> {
    if g1.spec.pixels != g2.spec.pixels
        || g1.spec.radius != g2.spec.radius
        || g1.cells.len() != g2.cells.len()
    {
        return Err(Error::DimensionMismatch(format!(
            "{}px/r={} vs {}px/r={}",
            g1.spec.pixels, g1.spec.radius, g2.spec.pixels, g2.spec.radius
        )));
    }
    if g1.cells.is_empty() {
        return Ok(0.0);
    }
    let differing = g1
        .cells
        .iter()
        .zip(&g2.cells)
        .filter(|(a, b)| (**a == 0) != (**b == 0))
        .count();
    Ok(differing as f64 / g1.cells.len() as f64)
}

/// Sufficient condition for boundedness of the `k = 1` polar quadratic
/// family: both starting values within `1/sqrt(2)`. Then every iterate
/// stays within `1/sqrt(2)` for every angle, since
/// `|cos t x^2 + sin t y^2| <= r^2 (|cos t| + |sin t|) <= r^2 sqrt(2)`.
pub fn analytic_bound_holds(x_prev: f64, x_curr: f64) -> bool {
    x_prev.abs() <= FRAC_1_SQRT_2 && x_curr.abs() <= FRAC_1_SQRT_2
}
