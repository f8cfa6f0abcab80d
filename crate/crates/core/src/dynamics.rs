//! The scalar recurrence `x[n+1] = a * x[n]^alpha + b * x[n-1]^alpha`, the
//! coupled quadratic map
//!
//! ```text
//! x(t+1) = a * x(t)^2 + sigma * y(t) + 1
//! y(t+1) = b * x(t)^2 - 1
//! ```
//!
//! and the characteristic analysis of the linear (`alpha = 1`) case.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Coefficients and exponent of the scalar recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    /// Multiplies the `x[n]` term.
    pub a: f64,
    /// Multiplies the `x[n-1]` term.
    pub b: f64,
    pub alpha: f64,
}

impl MapParams {
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coefficients must be finite (a = {a}, b = {b})"
            )));
        }
        check_alpha(alpha)?;
        Ok(Self { a, b, alpha })
    }

    /// The quadratic member of the family.
    pub fn quadratic(a: f64, b: f64) -> Self {
        Self { a, b, alpha: 2.0 }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub x_prev: f64,
    pub x_curr: f64,
    pub n: usize,
}

impl OrbitState {
    pub fn new(x_prev: f64, x_curr: f64) -> Self {
        Self {
            x_prev,
            x_curr,
            n: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    /// Coupling of `y` into the `x` update. `sigma = 1` is the uncoupled-toxin form.
    pub sigma: f64,
}

impl SystemParams {
    pub fn new(a: f64, b: f64, sigma: f64) -> Result<Self> {
        if [a, b, sigma].iter().all(|v| v.is_finite()) {
            Ok(Self { a, b, sigma })
        } else {
            Err(Error::InvalidParameter(
                "system coefficients must be finite".into(),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemState {
    pub x: f64,
    pub y: f64,
    pub t: usize,
}

impl SystemState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y, t: 0 }
    }
}

/// `sign(x) * |x|^alpha`, the odd extension of the power to negative bases.
///
/// Exponents 1 and 2 use the true power, so `signed_power(-3, 2) == 9`.
pub fn signed_power(x: f64, alpha: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    check_alpha(alpha)?;
    Ok(spow(x, alpha))
}

#[inline]
pub(crate) fn spow(x: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        x * x
    } else if alpha == 1.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(alpha)
    }
}

#[inline]
pub(crate) fn next_value(p: &MapParams, x_prev: f64, x_curr: f64) -> f64 {
    if p.alpha == 1.0 {
        p.a * x_curr + p.b * x_prev
    } else {
        p.a * spow(x_curr, p.alpha) + p.b * spow(x_prev, p.alpha)
    }
}

pub fn step_map(p: &MapParams, s: OrbitState) -> Result<OrbitState> {
    let next = next_value(p, s.x_prev, s.x_curr);
    if !next.is_finite() {
        return Err(Error::OrbitDiverged { step: s.n + 1 });
    }
    Ok(OrbitState {
        x_prev: s.x_curr,
        x_curr: next,
        n: s.n + 1,
    })
}

/// Iterates of a scalar orbit. When the orbit leaves the finite range,
/// `values` holds the finite prefix and `diverged_at` the 1-based index of
/// the first non-finite iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub values: Vec<f64>,
    pub diverged_at: Option<usize>,
}

/// Returns `[x1, ..., x_steps]` starting from `(x_prev0, x0)`.
pub fn iterate_orbit(p: &MapParams, x_prev0: f64, x0: f64, steps: usize) -> Result<Orbit> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let mut values = Vec::with_capacity(steps);
    let mut state = OrbitState::new(x_prev0, x0);
    for _ in 0..steps {
        match step_map(p, state) {
            Ok(next) => {
                values.push(next.x_curr);
                state = next;
            }
            Err(Error::OrbitDiverged { step }) => {
                return Ok(Orbit {
                    values,
                    diverged_at: Some(step),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Orbit {
        values,
        diverged_at: None,
    })
}

pub fn step_system(p: &SystemParams, s: SystemState) -> Result<SystemState> {
    let x2 = s.x * s.x;
    let x = p.a * x2 + p.sigma * s.y + 1.0;
    let y = p.b * x2 - 1.0;
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::SystemDiverged { step: s.t + 1 });
    }
    Ok(SystemState { x, y, t: s.t + 1 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemTrajectory {
    pub states: Vec<SystemState>,
    pub diverged_at: Option<usize>,
}

pub fn iterate_system(
    p: &SystemParams,
    x0: f64,
    y0: f64,
    steps: usize,
) -> Result<SystemTrajectory> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let mut states = Vec::with_capacity(steps);
    let mut state = SystemState::new(x0, y0);
    for _ in 0..steps {
        match step_system(p, state) {
            Ok(next) => {
                states.push(next);
                state = next;
            }
            Err(Error::SystemDiverged { step }) => {
                return Ok(SystemTrajectory {
                    states,
                    diverged_at: Some(step),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SystemTrajectory {
        states,
        diverged_at: None,
    })
}

/// Roots of `lambda^2 - b*lambda - a = 0`, the characteristic equation of
/// `x[n+1] = b*x[n] + a*x[n-1]`, ordered so that `|lambda1| >= |lambda2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAnalysis {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub spectral_radius: f64,
    pub converges_to_zero: bool,
    pub oscillates_about_zero: bool,
}

/// Both roots of the monic quadratic `z^2 + p*z + q = 0`, using the
/// cancellation-free form for real roots.
pub(crate) fn monic_quadratic_roots(p: f64, q: f64) -> (Complex64, Complex64) {
    let disc = p * p - 4.0 * q;
    if disc >= 0.0 {
        let sign = if p >= 0.0 { 1.0 } else { -1.0 };
        let big = -0.5 * (p + sign * disc.sqrt());
        if big == 0.0 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        (Complex64::new(big, 0.0), Complex64::new(q / big, 0.0))
    } else {
        let re = -0.5 * p;
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

pub fn linear_roots(a: f64, b: f64) -> LinearAnalysis {
    let (r1, r2) = monic_quadratic_roots(-b, -a);
    let (lambda1, lambda2) = if r2.norm() > r1.norm() {
        (r2, r1)
    } else {
        (r1, r2)
    };
    let spectral_radius = lambda1.norm().max(lambda2.norm());
    let positive_real = |z: Complex64| z.im == 0.0 && z.re > 0.0;
    LinearAnalysis {
        lambda1,
        lambda2,
        spectral_radius,
        converges_to_zero: spectral_radius < 1.0,
        oscillates_about_zero: !(positive_real(lambda1) || positive_real(lambda2)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearClass {
    pub oscillatory: bool,
    pub convergent: bool,
}

impl fmt::Display for LinearClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.oscillatory, self.convergent) {
            (false, true) => "convergent",
            (true, true) => "oscillatory convergent",
            (true, false) => "oscillatory non-convergent",
            (false, false) => "non-oscillatory non-convergent",
        };
        f.write_str(s)
    }
}

pub fn classify_linear(a: f64, b: f64) -> LinearClass {
    let la = linear_roots(a, b);
    LinearClass {
        oscillatory: la.oscillates_about_zero,
        convergent: la.converges_to_zero,
    }
}

/// One step of the sampled recurrence `x((n+1)T) = a x(nT)^2 - b x((n-1)T)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledState {
    pub state: OrbitState,
    /// `n * T`, for labelling the time axis.
    pub time: f64,
}

pub fn sampled_map_step(p: &MapParams, period: f64, s: OrbitState) -> Result<SampledState> {
    if !(period > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling period must be positive, got {period}"
        )));
    }
    let negated = MapParams::quadratic(p.a, -p.b);
    let state = step_map(&negated, s)?;
    Ok(SampledState {
        state,
        time: state.n as f64 * period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_power_examples() {
        assert_eq!(signed_power(4.0, 0.5).unwrap(), 2.0);
        assert_eq!(signed_power(-4.0, 0.5).unwrap(), -2.0);
        assert_eq!(signed_power(-3.0, 2.0).unwrap(), 9.0);
        assert_eq!(signed_power(0.0, 1.0 / 3.0).unwrap(), 0.0);
        assert!(matches!(
            signed_power(f64::NAN, 2.0),
            Err(Error::NonFiniteInput)
        ));
        assert!(signed_power(1.0, 2.5).is_err());
    }

    #[test]
    fn step_map_examples() {
        let s = OrbitState::new(0.3, 0.5);
        let out = step_map(&MapParams::quadratic(1.0, 0.0), s).unwrap();
        assert_eq!(out.x_curr, 0.25);
        assert_eq!(out.x_prev, 0.5);
        assert_eq!(out.n, 1);

        let out = step_map(&MapParams::quadratic(0.0, 0.0), s).unwrap();
        assert_eq!(out.x_curr, 0.0);

        let theta: f64 = 0.0;
        let p = MapParams::quadratic(theta.cos(), theta.sin());
        let out = step_map(&p, OrbitState::new(0.2, 0.1)).unwrap();
        assert!((out.x_curr - 0.01).abs() < 1e-17);
    }

    #[test]
    fn step_map_reports_divergence_step() {
        let p = MapParams::quadratic(1e200, 0.0);
        let s = OrbitState {
            x_prev: 0.0,
            x_curr: 1e200,
            n: 7,
        };
        assert!(matches!(
            step_map(&p, s),
            Err(Error::OrbitDiverged { step: 8 })
        ));
    }

    #[test]
    fn iterate_orbit_examples() {
        let o = iterate_orbit(&MapParams::quadratic(1.0, 0.0), 0.0, 0.5, 2).unwrap();
        assert_eq!(o.values, vec![0.25, 0.0625]);
        let p = MapParams::new(0.5, 0.5, 1.0).unwrap();
        assert_eq!(iterate_orbit(&p, 1.0, 1.0, 3).unwrap().values, vec![1.0; 3]);
        let o = iterate_orbit(&MapParams::quadratic(1.0, 1.0), 1.0, 1.0, 4).unwrap();
        assert_eq!(o.values, vec![2.0, 5.0, 29.0, 866.0]);
        assert!(o.diverged_at.is_none());
        assert!(iterate_orbit(&p, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn iterate_orbit_keeps_finite_prefix() {
        let o = iterate_orbit(&MapParams::quadratic(1.0, 1.0), 1.0, 1.0, 100).unwrap();
        let k = o.diverged_at.expect("doubly exponential growth overflows");
        assert_eq!(o.values.len(), k - 1);
        assert!(o.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn step_system_examples() {
        let p = SystemParams::new(2.0, 9.0, 1.0).unwrap();
        let s = step_system(&p, SystemState::new(1.0 / 11.0, -112.0 / 121.0)).unwrap();
        assert!((s.x - 1.0 / 11.0).abs() < 1e-15);
        assert!((s.y + 112.0 / 121.0).abs() < 1e-15);

        let p = SystemParams::new(0.0, 0.0, 0.0).unwrap();
        let s = step_system(&p, SystemState::new(5.0, 7.0)).unwrap();
        assert_eq!((s.x, s.y, s.t), (1.0, -1.0, 1));

        let p = SystemParams {
            a: 0.15,
            b: 0.45,
            sigma: -0.45,
        };
        let s = step_system(&p, SystemState::new(0.07, 0.08)).unwrap();
        assert!((s.x - 0.964735).abs() < 1e-15);
        assert!((s.y - (-0.997795)).abs() < 1e-15);
    }

    #[test]
    fn iterate_system_examples() {
        let p = SystemParams {
            a: 0.0,
            b: 0.0,
            sigma: 0.0,
        };
        let tr = iterate_system(&p, 3.0, 4.0, 3).unwrap();
        let xy: Vec<_> = tr.states.iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(xy, vec![(1.0, -1.0); 3]);

        let p = SystemParams {
            a: 2.0,
            b: 9.0,
            sigma: 1.0,
        };
        let tr = iterate_system(&p, 0.0, -1.0, 50).unwrap();
        assert!(tr.states.iter().all(|s| s.x == 0.0 && s.y == -1.0));

        let p = SystemParams {
            a: 0.15,
            b: 0.45,
            sigma: -0.45,
        };
        let tr = iterate_system(&p, 0.07, 0.08, 500).unwrap();
        assert_eq!(tr.states.len(), 500);
        assert!(tr.diverged_at.is_none());
    }

    #[test]
    fn sigma_one_is_uncoupled_form() {
        let p = SystemParams {
            a: 0.3,
            b: -0.7,
            sigma: 1.0,
        };
        let s = SystemState::new(0.4, -0.2);
        let out = step_system(&p, s).unwrap();
        assert_eq!(out.x, 0.3 * 0.4 * 0.4 + -0.2 + 1.0);
        assert_eq!(out.y, -0.7 * 0.4 * 0.4 - 1.0);
    }

    #[test]
    fn linear_roots_examples() {
        let la = linear_roots(1.0, 0.0);
        assert_eq!(la.lambda1.re.abs(), 1.0);
        assert_eq!((la.lambda1 + la.lambda2).re, 0.0);
        assert_eq!(la.spectral_radius, 1.0);
        assert!(!la.converges_to_zero);
        assert!(!la.oscillates_about_zero);

        let la = linear_roots(0.0, 0.5);
        assert_eq!(la.lambda1, Complex64::new(0.5, 0.0));
        assert_eq!(la.lambda2, Complex64::new(0.0, 0.0));
        assert!(la.converges_to_zero);

        let la = linear_roots(-1.0, 0.0);
        assert_eq!(la.lambda1.im.abs(), 1.0);
        assert_eq!(la.lambda1.re, 0.0);
        assert_eq!(la.spectral_radius, 1.0);
        assert!(la.oscillates_about_zero);
    }

    #[test]
    fn classify_linear_examples() {
        assert_eq!(classify_linear(0.0, 0.5).to_string(), "convergent");
        assert_eq!(
            classify_linear(-0.25, 0.0).to_string(),
            "oscillatory convergent"
        );
        assert_eq!(
            classify_linear(0.0, 2.0).to_string(),
            "non-oscillatory non-convergent"
        );
        assert_eq!(
            classify_linear(-4.0, 0.0).to_string(),
            "oscillatory non-convergent"
        );
    }

    #[test]
    fn sampled_step_negates_b() {
        let p = MapParams::quadratic(1.0, 1.0);
        let s = sampled_map_step(&p, 0.01, OrbitState::new(1.0, 1.0)).unwrap();
        assert_eq!(s.state.x_curr, 0.0);
        assert!((s.time - 0.01).abs() < 1e-18);

        let p = MapParams::quadratic(1.0, 0.0);
        let s = sampled_map_step(&p, 1.0, OrbitState::new(0.0, 0.5)).unwrap();
        assert_eq!(s.state.x_curr, 0.25);

        let p = MapParams::quadratic(0.15, 0.45);
        let s = sampled_map_step(&p, 0.004, OrbitState::new(0.07, 0.07)).unwrap();
        assert!((s.state.x_curr - (-0.00147)).abs() < 1e-15);

        assert!(sampled_map_step(&p, 0.0, OrbitState::new(0.0, 0.0)).is_err());
    }
}
