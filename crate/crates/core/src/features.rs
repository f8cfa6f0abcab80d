//! Savitzky-Golay differentiation and per-beat cardiac timing.
//!
//! The pipeline on an ECG channel (and optionally an impedance channel):
//!
//! 1. smooth the ECG and take its second derivative with SG kernels;
//! 2. R peaks: amplitude-ranked local maxima with a refractory distance;
//! 3. R onset: minimum of the second derivative in a window anchored at
//!    the R peak;
//! 4. B point: within the RR interval that starts at the beat, the minimum
//!    of `d3Z/dt3` before the maximum of `dZ/dt`;
//! 5. RR, HR = 60 / RR and PEP = B - R onset per beat.

use std::collections::BTreeSet;

use crate::signal::SignalFrame;
use crate::{Error, Result};

/// Least-squares polynomial derivative filter.
///
/// Weights are laid out over samples `0..window_len` of a window whose fit
/// is evaluated at `(window_len - 1) / 2`. For odd lengths that is the
/// middle sample. For even lengths the evaluation point falls half a sample
/// after the nominal output index, so the filtered series leads by `dt / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SgKernel {
    pub window_len: usize,
    pub poly_order: usize,
    pub deriv_order: usize,
    pub dt: f64,
    pub weights: Vec<f64>,
}

impl SgKernel {
    /// Index within the window that output sample `i` is aligned with.
    pub fn anchor(&self) -> usize {
        (self.window_len - 1) / 2
    }

    /// Centred abscissa of window sample `j`, in samples.
    pub fn offset(&self, j: usize) -> f64 {
        j as f64 - (self.window_len as f64 - 1.0) / 2.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Solves `g c = rhs` for a symmetric positive definite `g` (row-major, `n x n`).
fn cholesky_solve(mut g: Vec<f64>, n: usize, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    for j in 0..n {
        let mut d = g[j * n + j];
        for k in 0..j {
            d -= g[j * n + k] * g[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::InvalidParameter(
                "Savitzky-Golay normal equations are singular".into(),
            ));
        }
        let d = d.sqrt();
        g[j * n + j] = d;
        for i in j + 1..n {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= g[i * n + k] * g[j * n + k];
            }
            g[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= g[i * n + k] * rhs[k];
        }
        rhs[i] = s / g[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for k in i + 1..n {
            s -= g[k * n + i] * rhs[k];
        }
        rhs[i] = s / g[i * n + i];
    }
    Ok(rhs)
}

pub fn sg_kernel(
    window_len: usize,
    poly_order: usize,
    deriv_order: usize,
    dt: f64,
) -> Result<SgKernel> {
    if window_len == 0 {
        return Err(Error::InvalidParameter(
            "window length must be positive".into(),
        ));
    }
    if poly_order >= window_len {
        return Err(Error::InvalidParameter(format!(
            "polynomial order {poly_order} must be below window length {window_len}"
        )));
    }
    if deriv_order > poly_order {
        return Err(Error::InvalidParameter(format!(
            "derivative order {deriv_order} exceeds polynomial order {poly_order}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }

    // Abscissae are scaled into [-1, 1] to keep the normal equations well
    // conditioned for long windows.
    let centre = (window_len as f64 - 1.0) / 2.0;
    let scale = centre.max(1.0);
    let terms = poly_order + 1;
    let powers: Vec<Vec<f64>> = (0..window_len)
        .map(|j| {
            let s = (j as f64 - centre) / scale;
            let mut row = Vec::with_capacity(terms);
            let mut v = 1.0;
            for _ in 0..terms {
                row.push(v);
                v *= s;
            }
            row
        })
        .collect();

    let mut gram = vec![0.0; terms * terms];
    for row in &powers {
        for r in 0..terms {
            for c in 0..terms {
                gram[r * terms + c] += row[r] * row[c];
            }
        }
    }
    let mut unit = vec![0.0; terms];
    unit[deriv_order] = 1.0;
    let coef = cholesky_solve(gram, terms, unit)?;

    let factor = factorial(deriv_order) / (scale * dt).powi(deriv_order as i32);
    let weights = powers
        .iter()
        .map(|row| factor * row.iter().zip(&coef).map(|(p, c)| p * c).sum::<f64>())
        .collect();

    Ok(SgKernel {
        window_len,
        poly_order,
        deriv_order,
        dt,
        weights,
    })
}

/// Mirror-reflected index (`-1 -> 1`, `n -> n - 2`).
#[inline]
fn reflect(idx: isize, n: usize) -> usize {
    let n = n as isize;
    let mut i = idx;
    if i < 0 {
        i = -i;
    }
    if i >= n {
        i = 2 * (n - 1) - i;
    }
    i as usize
}

/// Same-length filtering with mirror padding. Output sample `i` is the
/// kernel applied to the window whose anchor sits at `i`, so odd kernels
/// introduce no lag.
pub fn convolve_same(signal: &[f64], k: &SgKernel) -> Result<Vec<f64>> {
    let n = signal.len();
    if n < k.window_len {
        return Err(Error::SignalTooShort {
            len: n,
            window: k.window_len,
        });
    }
    let anchor = k.anchor() as isize;
    let interior_lo = k.anchor();
    let interior_hi = n - (k.window_len - 1 - k.anchor());
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let start = i as isize - anchor;
        *o = if i >= interior_lo && i < interior_hi {
            let s = start as usize;
            signal[s..s + k.window_len]
                .iter()
                .zip(&k.weights)
                .map(|(x, w)| x * w)
                .sum()
        } else {
            k.weights
                .iter()
                .enumerate()
                .map(|(j, w)| w * signal[reflect(start + j as isize, n)])
                .sum()
        };
    }
    Ok(out)
}

/// Value at quantile `q` with linear interpolation between order statistics.
pub fn quantile(data: &[f64], q: f64) -> Option<f64> {
    if data.is_empty() {
        return None;
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Local maxima above the `threshold_quantile` amplitude, accepted in
/// descending amplitude order while keeping every pair at least
/// `min_separation` seconds apart. Returned in increasing index order.
pub fn detect_r_peaks(
    ecg: &[f64],
    sample_rate: f64,
    min_separation: f64,
    threshold_quantile: f64,
) -> Result<Vec<usize>> {
    if ecg.is_empty() {
        return Err(Error::EmptySignal);
    }
    if !(min_separation > 0.0) {
        return Err(Error::InvalidParameter(
            "min_separation must be positive".into(),
        ));
    }
    if !(threshold_quantile > 0.0 && threshold_quantile < 1.0) {
        return Err(Error::InvalidParameter(
            "peak threshold quantile must lie in (0, 1)".into(),
        ));
    }
    let level = quantile(ecg, threshold_quantile).unwrap_or(f64::INFINITY);
    let mut candidates: Vec<usize> = (1..ecg.len().saturating_sub(1))
        .filter(|&i| ecg[i] > ecg[i - 1] && ecg[i] >= ecg[i + 1] && ecg[i] > level)
        .collect();
    candidates.sort_by(|&i, &j| ecg[j].total_cmp(&ecg[i]).then(i.cmp(&j)));

    // Slack absorbs rounding of min_separation * sample_rate.
    let min_gap = min_separation * sample_rate - 1e-9;
    let mut accepted = BTreeSet::new();
    for i in candidates {
        let clear_before = accepted
            .range(..i)
            .next_back()
            .is_none_or(|&j| (i - j) as f64 >= min_gap);
        let clear_after = accepted
            .range(i..)
            .next()
            .is_none_or(|&j| (j - i) as f64 >= min_gap);
        if clear_before && clear_after {
            accepted.insert(i);
        }
    }
    Ok(accepted.into_iter().collect())
}

/// Search window for the R onset relative to the R peak, in seconds.
/// A negative offset looks before the peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsetWindow {
    pub offset: f64,
    pub length: f64,
}

impl Default for OnsetWindow {
    fn default() -> Self {
        Self {
            offset: 0.0,
            length: 0.1,
        }
    }
}

fn argmin(data: &[f64]) -> Option<usize> {
    data.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if !(v < b) => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}

fn argmax(data: &[f64]) -> Option<usize> {
    data.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if !(v > b) => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}

/// Index of the minimum of the ECG second derivative in
/// `[r_peak + offset, r_peak + offset + length]`; ties go to the earlier
/// sample. `beat` only labels the error.
pub fn detect_r_onset(
    ecg_d2: &[f64],
    r_peak: usize,
    window: OnsetWindow,
    sample_rate: f64,
    beat: usize,
) -> Result<usize> {
    let start = r_peak as i64 + (window.offset * sample_rate).round() as i64;
    let end = start + (window.length * sample_rate).round() as i64;
    if start < 0 || end < start || end as usize >= ecg_d2.len() {
        return Err(Error::WindowOutOfBounds { beat });
    }
    let (start, end) = (start as usize, end as usize);
    let rel = argmin(&ecg_d2[start..=end]).ok_or(Error::EmptyWindow)?;
    Ok(start + rel)
}

/// B point in the beat window `[start, end)`: the earliest minimum of
/// `icg_d3` on the samples strictly before the (first) maximum of `icg_d1`.
pub fn detect_b_point(icg_d1: &[f64], icg_d3: &[f64], start: usize, end: usize) -> Result<usize> {
    if icg_d1.len() != icg_d3.len() {
        return Err(Error::DimensionMismatch(format!(
            "dZ/dt has {} samples, d3Z/dt3 has {}",
            icg_d1.len(),
            icg_d3.len()
        )));
    }
    if start >= end || end > icg_d1.len() {
        return Err(Error::EmptyWindow);
    }
    let peak = start + argmax(&icg_d1[start..end]).ok_or(Error::EmptyWindow)?;
    if peak == start {
        return Err(Error::EmptyWindow);
    }
    Ok(start + argmin(&icg_d3[start..peak]).ok_or(Error::EmptyWindow)?)
}

/// Timing of one heartbeat. Times are in seconds from the start of the
/// analysed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatFeatures {
    pub r_peak_t: f64,
    pub r_onset_t: f64,
    pub b_point_t: Option<f64>,
    /// Interval from the previous R peak.
    pub rr: Option<f64>,
    /// Beats per minute, `60 / rr`.
    pub hr: Option<f64>,
    /// Pre-ejection period, `b_point_t - r_onset_t`.
    pub pep: Option<f64>,
}

pub fn compute_beats(
    r_peaks: &[usize],
    r_onsets: &[usize],
    b_points: &[Option<usize>],
    sample_rate: f64,
) -> Result<Vec<BeatFeatures>> {
    if r_peaks.len() != r_onsets.len() || r_peaks.len() != b_points.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} R peaks, {} onsets, {} B points",
            r_peaks.len(),
            r_onsets.len(),
            b_points.len()
        )));
    }
    let t = |i: usize| i as f64 / sample_rate;
    Ok(r_peaks
        .iter()
        .enumerate()
        .map(|(k, &rp)| {
            let rr = (k > 0).then(|| t(rp) - t(r_peaks[k - 1]));
            let r_onset_t = t(r_onsets[k]);
            let b_point_t = b_points[k].map(t);
            BeatFeatures {
                r_peak_t: t(rp),
                r_onset_t,
                b_point_t,
                rr,
                hr: rr.map(|rr| 60.0 / rr),
                pep: b_point_t.map(|b| b - r_onset_t),
            }
        })
        .collect())
}

/// Elementwise square, the nonlinear enhancer `y(nT) = x(nT)^2`.
pub fn square_enhance(signal: &[f64]) -> Vec<f64> {
    signal.iter().map(|x| x * x).collect()
}

/// Settings for [`extract_features`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub kernel_len: usize,
    pub poly_order: usize,
    /// Refractory distance between R peaks, seconds.
    pub min_separation: f64,
    pub peak_quantile: f64,
    pub onset: OnsetWindow,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            kernel_len: 101,
            poly_order: 3,
            min_separation: 0.4,
            peak_quantile: 0.95,
            onset: OnsetWindow::default(),
        }
    }
}

/// Impedance input for B-point detection: either the raw impedance `Z`,
/// or its first derivative as delivered by the acquisition hardware.
#[derive(Debug, Clone, Copy)]
pub enum Impedance<'a> {
    Z(&'a [f64]),
    DzDt(&'a [f64]),
}

/// Derivative channels used by the detectors.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub ecg_smooth: Vec<f64>,
    pub ecg_d2: Vec<f64>,
    pub icg_d1: Option<Vec<f64>>,
    pub icg_d3: Option<Vec<f64>>,
}

pub fn derivatives(
    ecg: &[f64],
    icg: Option<Impedance<'_>>,
    sample_rate: f64,
    cfg: &FeatureConfig,
) -> Result<Derivatives> {
    let dt = 1.0 / sample_rate;
    let kernel = |d| sg_kernel(cfg.kernel_len, cfg.poly_order, d, dt);
    let ecg_smooth = convolve_same(ecg, &kernel(0)?)?;
    let ecg_d2 = convolve_same(ecg, &kernel(2)?)?;
    let (icg_d1, icg_d3) = match icg {
        None => (None, None),
        Some(imp) => {
            let d1 = match imp {
                Impedance::Z(z) => convolve_same(z, &kernel(1)?)?,
                Impedance::DzDt(d) => d.to_vec(),
            };
            // The third derivative is taken from dZ/dt, not from Z.
            let d3 = convolve_same(&d1, &kernel(2)?)?;
            (Some(d1), Some(d3))
        }
    };
    Ok(Derivatives {
        ecg_smooth,
        ecg_d2,
        icg_d1,
        icg_d3,
    })
}

/// Runs the whole per-beat pipeline. Beats whose onset window runs off the
/// end of the record are dropped. The B-point window for a beat spans from
/// its R peak to the next R peak (or the end of the record).
pub fn extract_features(
    ecg: &[f64],
    icg: Option<Impedance<'_>>,
    sample_rate: f64,
    cfg: &FeatureConfig,
) -> Result<Vec<BeatFeatures>> {
    if let Some(Impedance::Z(d) | Impedance::DzDt(d)) = icg {
        if d.len() != ecg.len() {
            return Err(Error::DimensionMismatch(format!(
                "ECG has {} samples, impedance has {}",
                ecg.len(),
                d.len()
            )));
        }
    }
    let der = derivatives(ecg, icg, sample_rate, cfg)?;
    let peaks = detect_r_peaks(
        &der.ecg_smooth,
        sample_rate,
        cfg.min_separation,
        cfg.peak_quantile,
    )?;

    let mut kept = Vec::new();
    let mut onsets = Vec::new();
    let mut bs = Vec::new();
    for (k, &rp) in peaks.iter().enumerate() {
        let onset = match detect_r_onset(&der.ecg_d2, rp, cfg.onset, sample_rate, k) {
            Ok(i) => i,
            Err(Error::WindowOutOfBounds { .. }) => continue,
            Err(e) => return Err(e),
        };
        let b = match (&der.icg_d1, &der.icg_d3) {
            (Some(d1), Some(d3)) => {
                let end = peaks.get(k + 1).copied().unwrap_or(ecg.len());
                detect_b_point(d1, d3, rp, end).ok()
            }
            _ => None,
        };
        kept.push(rp);
        onsets.push(onset);
        bs.push(b);
    }
    compute_beats(&kept, &onsets, &bs, sample_rate)
}

/// [`extract_features`] on a frame. The ECG is read from channel `ecg`
/// or, failing that, `z`; impedance from `icg` (Z) or `dzdt`.
pub fn extract_frame_features(
    frame: &SignalFrame,
    cfg: &FeatureConfig,
) -> Result<Vec<BeatFeatures>> {
    let ecg = frame.channel("ecg").or_else(|_| frame.channel("z"))?;
    let icg = if let Ok(z) = frame.channel("icg") {
        Some(Impedance::Z(z))
    } else if let Ok(d) = frame.channel("dzdt") {
        Some(Impedance::DzDt(d))
    } else {
        None
    };
    extract_features(ecg, icg, frame.sample_rate, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn apply_at_centre(k: &SgKernel, f: impl Fn(f64) -> f64, centre: f64) -> f64 {
        k.weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * f(centre + k.offset(j) * k.dt))
            .sum()
    }

    #[test]
    fn kernel_examples() {
        let k = sg_kernel(5, 2, 0, 1.0).unwrap();
        assert!((apply_at_centre(&k, |t| t * t, 3.0) - 9.0).abs() < 1e-12);
        let k = sg_kernel(5, 2, 1, 1.0).unwrap();
        assert!((apply_at_centre(&k, |t| t * t, 3.0) - 6.0).abs() < 1e-12);
        let k = sg_kernel(7, 3, 2, 0.5).unwrap();
        assert!((apply_at_centre(&k, |t| t * t * t, 1.7) - 6.0 * 1.7).abs() < 1e-9);
    }

    #[test]
    fn classic_five_point_smoother() {
        // Tabulated quadratic smoothing weights (-3, 12, 17, 12, -3) / 35.
        let k = sg_kernel(5, 2, 0, 1.0).unwrap();
        let expected = [-3.0, 12.0, 17.0, 12.0, -3.0].map(|v| v / 35.0);
        for (w, e) in k.weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn kernel_argument_errors() {
        assert!(sg_kernel(3, 3, 0, 1.0).is_err());
        assert!(sg_kernel(5, 2, 3, 1.0).is_err());
        assert!(sg_kernel(5, 2, 0, 0.0).is_err());
        assert!(sg_kernel(0, 0, 0, 1.0).is_err());
    }

    #[test]
    fn even_window_evaluates_half_sample_late() {
        let k = sg_kernel(100, 3, 0, 1.0).unwrap();
        assert_eq!(k.anchor(), 49);
        assert_eq!(k.offset(49), -0.5);
        let sum: f64 = k.weights.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        // Exact on a line evaluated at the half-sample point.
        let ramp: Vec<f64> = (0..300).map(|i| 2.0 * i as f64).collect();
        let out = convolve_same(&ramp, &k).unwrap();
        assert!((out[150] - 2.0 * 150.5).abs() < 1e-9);
    }

    #[test]
    fn constant_signal() {
        let sig = vec![3.25; 50];
        let s = convolve_same(&sig, &sg_kernel(11, 3, 0, 0.01).unwrap()).unwrap();
        assert!(s.iter().all(|v| (v - 3.25).abs() < 1e-12));
        let d = convolve_same(&sig, &sg_kernel(11, 3, 1, 0.01).unwrap()).unwrap();
        assert!(d.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn sine_derivative_interior() {
        let fs = 2000.0;
        let sig: Vec<f64> = (0..4000)
            .map(|i| (2.0 * PI * 5.0 * i as f64 / fs).sin())
            .collect();
        let k = sg_kernel(101, 3, 1, 1.0 / fs).unwrap();
        let d = convolve_same(&sig, &k).unwrap();
        let amp = 2.0 * PI * 5.0;
        let err = (50..4000 - 50)
            .map(|i| (d[i] - amp * (2.0 * PI * 5.0 * i as f64 / fs).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 0.01 * amp, "max error {err}");
    }

    #[test]
    fn too_short_signal() {
        let k = sg_kernel(11, 3, 0, 1.0).unwrap();
        assert!(matches!(
            convolve_same(&[1.0; 5], &k),
            Err(Error::SignalTooShort { len: 5, window: 11 })
        ));
    }

    #[test]
    fn r_peak_examples() {
        let fs = 2000.0;
        let sig: Vec<f64> = (0..10_000)
            .map(|i| (2.0 * PI * i as f64 / fs).sin())
            .collect();
        let peaks = detect_r_peaks(&sig, fs, 0.5, 0.95).unwrap();
        assert_eq!(peaks.len(), 5);
        for w in peaks.windows(2) {
            assert!((w[1] as i64 - w[0] as i64 - 2000).abs() <= 1);
        }
        assert!(detect_r_peaks(&[0.0; 1000], fs, 0.5, 0.95)
            .unwrap()
            .is_empty());
        assert!(matches!(
            detect_r_peaks(&[], fs, 0.5, 0.95),
            Err(Error::EmptySignal)
        ));
        assert!(detect_r_peaks(&sig, fs, 0.0, 0.95).is_err());
    }

    #[test]
    fn refractory_distance_prefers_taller_peak() {
        let mut sig = vec![0.0; 100];
        sig[20] = 1.0;
        sig[25] = 2.0;
        sig[60] = 1.5;
        let peaks = detect_r_peaks(&sig, 100.0, 0.1, 0.5).unwrap();
        assert_eq!(peaks, vec![25, 60]);
    }

    #[test]
    fn r_onset_examples() {
        let mut d2 = vec![0.0; 400];
        for (i, v) in d2.iter_mut().enumerate() {
            let s = (i as f64 - 140.0) / 6.0;
            *v = -(-0.5 * s * s).exp();
        }
        let w = OnsetWindow {
            offset: 0.0,
            length: 0.1,
        };
        assert_eq!(detect_r_onset(&d2, 100, w, 1000.0, 0).unwrap(), 140);

        let mut flat = vec![0.0; 400];
        flat[120] = -1.0;
        flat[150] = -1.0;
        assert_eq!(detect_r_onset(&flat, 100, w, 1000.0, 0).unwrap(), 120);

        assert!(matches!(
            detect_r_onset(&flat, 350, w, 1000.0, 7),
            Err(Error::WindowOutOfBounds { beat: 7 })
        ));
        let before = OnsetWindow {
            offset: -0.05,
            length: 0.05,
        };
        assert!(detect_r_onset(&flat, 10, before, 1000.0, 0).is_err());
    }

    #[test]
    fn b_point_examples() {
        let n = 1000;
        let mut d1 = vec![0.0; n];
        d1[500] = 5.0;
        let mut d3 = vec![0.0; n];
        d3[430] = -2.0;
        d3[600] = -9.0;
        assert_eq!(detect_b_point(&d1, &d3, 300, 800).unwrap(), 430);

        let rising: Vec<f64> = (0..n).map(|i| i as f64).collect();
        assert_eq!(detect_b_point(&d1, &rising, 300, 800).unwrap(), 300);

        assert!(matches!(
            detect_b_point(&d1, &d3, 500, 800),
            Err(Error::EmptyWindow)
        ));
        assert!(detect_b_point(&d1, &d3[..10], 0, 10).is_err());
    }

    #[test]
    fn beat_table() {
        let beats = compute_beats(
            &[1000, 3000, 5000],
            &[1010, 3010, 5010],
            &[Some(1170), None, Some(5170)],
            2000.0,
        )
        .unwrap();
        assert_eq!(beats[0].rr, None);
        assert_eq!(beats[0].hr, None);
        assert_eq!(beats[1].hr, Some(60.0));
        assert_eq!(beats[2].rr, Some(1.0));
        assert!((beats[0].pep.unwrap() - 0.080).abs() < 1e-15);
        assert_eq!(beats[1].pep, None);
        assert!(compute_beats(&[1], &[], &[], 1.0).is_err());
    }

    #[test]
    fn square_examples() {
        assert_eq!(square_enhance(&[1.0, -2.0, 3.0]), vec![1.0, 4.0, 9.0]);
        assert_eq!(square_enhance(&[0.0; 4]), vec![0.0; 4]);
    }
}
