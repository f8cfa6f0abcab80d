//! Fixed points of the coupled quadratic map and their linear stability.
//!
//! Substituting `y = b x^2 - 1` into `x = a x^2 + sigma y + 1` gives
//! `(a + sigma b) x^2 - x + (1 - sigma) = 0`, so fixed points are available
//! in closed form. The Jacobian at `(x, y)` is `[[2ax, sigma], [2bx, 0]]`.
//!
//! All fixed points are reported, including trivial ones a symbolic tool
//! might leave out of its summary.

use std::fmt;

use num_complex::Complex64;

use crate::dynamics::{monic_quadratic_roots, step_system, SystemParams, SystemState};
use crate::{Error, Result};

/// `| |lambda| - 1 |` at or below this counts as on the unit circle.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// Relative residual accepted for a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    Sink,
    Source,
    Saddle,
    NonHyperbolic,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sink => "sink",
            Self::Source => "source",
            Self::Saddle => "saddle",
            Self::NonHyperbolic => "non-hyperbolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub location: (f64, f64),
    pub eigenvalues: (Complex64, Complex64),
    pub class: StabilityClass,
    /// Non-real eigenvalues, or a negative real one.
    pub oscillatory: bool,
}

impl FixedPointReport {
    /// `"oscillatory source"`, `"sink"`, ...
    pub fn label(&self) -> String {
        if self.oscillatory {
            format!("oscillatory {}", self.class)
        } else {
            self.class.to_string()
        }
    }
}

impl fmt::Display for FixedPointReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.12}, {:.12}): {}",
            self.location.0,
            self.location.1,
            self.label()
        )
    }
}

/// Real fixed points ordered by ascending `x`.
pub fn fixed_points(p: &SystemParams) -> Vec<(f64, f64)> {
    let quad = p.a + p.sigma * p.b;
    let constant = 1.0 - p.sigma;
    let mut xs: Vec<f64> = if quad == 0.0 {
        vec![constant]
    } else {
        let disc = 1.0 - 4.0 * quad * constant;
        if disc < 0.0 {
            Vec::new()
        } else if disc == 0.0 {
            vec![1.0 / (2.0 * quad)]
        } else {
            // q = -(B + sgn(B) sqrt(disc)) / 2 with B = -1.
            let q = 0.5 * (1.0 + disc.sqrt());
            vec![q / quad, constant / q]
        }
    };
    xs.sort_by(f64::total_cmp);
    xs.into_iter().map(|x| (x, p.b * x * x - 1.0)).collect()
}

/// Roots of `lambda^2 - 2ax lambda - 2b sigma x = 0`, larger modulus first.
pub fn jacobian_eigenvalues(p: &SystemParams, x: f64) -> (Complex64, Complex64) {
    let trace = 2.0 * p.a * x;
    let det = -2.0 * p.b * p.sigma * x;
    let (l1, l2) = monic_quadratic_roots(-trace, det);
    if l2.norm() > l1.norm() {
        (l2, l1)
    } else {
        (l1, l2)
    }
}

/// `max |F(pt) - pt|` over both coordinates.
pub fn fixed_point_residual(p: &SystemParams, pt: (f64, f64)) -> f64 {
    match step_system(p, SystemState::new(pt.0, pt.1)) {
        Ok(s) => (s.x - pt.0).abs().max((s.y - pt.1).abs()),
        Err(_) => f64::INFINITY,
    }
}

pub fn classify_eigenvalues(l1: Complex64, l2: Complex64) -> (StabilityClass, bool) {
    let (m1, m2) = (l1.norm(), l2.norm());
    let class = if (m1 - 1.0).abs() <= UNIT_CIRCLE_TOL || (m2 - 1.0).abs() <= UNIT_CIRCLE_TOL {
        StabilityClass::NonHyperbolic
    } else if m1 < 1.0 && m2 < 1.0 {
        StabilityClass::Sink
    } else if m1 > 1.0 && m2 > 1.0 {
        StabilityClass::Source
    } else {
        StabilityClass::Saddle
    };
    let swings = |z: Complex64| z.im != 0.0 || z.re < 0.0;
    (class, swings(l1) || swings(l2))
}

pub fn classify_fixed_point(p: &SystemParams, pt: (f64, f64)) -> Result<FixedPointReport> {
    let residual = fixed_point_residual(p, pt);
    let scale = 1f64.max(pt.0.abs().max(pt.1.abs()));
    if !(residual <= FIXED_POINT_TOL * scale) {
        return Err(Error::NotAFixedPoint { residual });
    }
    let eigenvalues = jacobian_eigenvalues(p, pt.0);
    let (class, oscillatory) = classify_eigenvalues(eigenvalues.0, eigenvalues.1);
    Ok(FixedPointReport {
        location: pt,
        eigenvalues,
        class,
        oscillatory,
    })
}

pub fn stability_report(p: &SystemParams) -> Vec<FixedPointReport> {
    fixed_points(p)
        .into_iter()
        .filter_map(|pt| classify_fixed_point(p, pt).ok())
        .collect()
}
