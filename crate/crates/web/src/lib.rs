//! Browser bindings: escape rasters, fixed-point reports and a synthetic
//! ECG with beat detection.
//!
//! The `*_impl` functions hold the logic and are plain Rust so they can be
//! tested on the host; the exported wrappers only translate errors.

use qdyn::dynamics::SystemParams;
use qdyn::ecg::{add_measurement_noise, integrate_ecg, EcgParams};
use qdyn::escape::{render_escape_grid, white_fraction, GridSpec};
use qdyn::features::{extract_frame_features, FeatureConfig};
use qdyn::io::{beats_table, pixel_value, PgmStyle};
use qdyn::stability::stability_report;
use wasm_bindgen::prelude::*;

/// Escape raster as RGBA bytes, row-major, `pixels * pixels * 4` long.
/// Bounded cells are white; escaped cells shade from black (fast) to grey.
pub fn escape_rgba_impl(
    mode: &str,
    k: f64,
    alpha: f64,
    pixels: usize,
    iters: u32,
) -> qdyn::Result<(Vec<u8>, f64)> {
    let spec = GridSpec {
        pixels,
        mode: mode.parse()?,
        k,
        alpha,
        iters,
        ..GridSpec::default()
    };
    let grid = render_escape_grid(&spec)?;
    let mut rgba = Vec::with_capacity(grid.cells.len() * 4);
    for &c in &grid.cells {
        let g = pixel_value(c, iters, PgmStyle::Grayscale);
        rgba.extend_from_slice(&[g, g, g, 255]);
    }
    Ok((rgba, white_fraction(&grid)))
}

pub fn stability_text_impl(a: f64, b: f64, sigma: f64) -> qdyn::Result<String> {
    let reports = stability_report(&SystemParams::new(a, b, sigma)?);
    if reports.is_empty() {
        return Ok("no real fixed points\n".into());
    }
    Ok(reports.iter().map(|r| format!("{r}\n")).collect())
}

/// Synthetic ECG run: the `z` channel at 2000 Hz and the detected beats.
#[wasm_bindgen]
pub struct EcgRun {
    samples: Vec<f64>,
    beats_csv: String,
    mean_hr: f64,
    beats: usize,
}

#[wasm_bindgen]
impl EcgRun {
    pub fn samples(&self) -> Vec<f64> {
        self.samples.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn beats_csv(&self) -> String {
        self.beats_csv.clone()
    }

    /// NaN when fewer than two beats were found.
    #[wasm_bindgen(getter)]
    pub fn mean_hr(&self) -> f64 {
        self.mean_hr
    }

    #[wasm_bindgen(getter)]
    pub fn beats(&self) -> usize {
        self.beats
    }
}

pub fn ecg_run_impl(bpm: f64, noise_sd: f64, seed: u64, duration: f64) -> qdyn::Result<EcgRun> {
    let params = EcgParams {
        omega: 2.0 * std::f64::consts::PI * bpm / 60.0,
        noise_sd,
        noise_seed: seed,
        ..EcgParams::example()
    };
    let frame = integrate_ecg(&params, 1.0, 0.0, 0.0, duration, 0.0005)?;
    let frame = add_measurement_noise(&frame, "z", noise_sd, seed)?;
    let beats = extract_frame_features(&frame, &FeatureConfig::default())?;
    let hr: Vec<f64> = beats.iter().filter_map(|b| b.hr).collect();
    let mean_hr = if hr.is_empty() {
        f64::NAN
    } else {
        hr.iter().sum::<f64>() / hr.len() as f64
    };
    Ok(EcgRun {
        samples: frame.channel("z")?.to_vec(),
        beats_csv: beats_table(&beats).to_csv(),
        mean_hr,
        beats: beats.len(),
    })
}

fn js(e: qdyn::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct EscapeImage {
    rgba: Vec<u8>,
    white_fraction: f64,
}

#[wasm_bindgen]
impl EscapeImage {
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn white_fraction(&self) -> f64 {
        self.white_fraction
    }
}

#[wasm_bindgen]
pub fn escape_image(
    mode: &str,
    k: f64,
    alpha: f64,
    pixels: usize,
    iters: u32,
) -> Result<EscapeImage, JsError> {
    let (rgba, white_fraction) = escape_rgba_impl(mode, k, alpha, pixels, iters).map_err(js)?;
    Ok(EscapeImage {
        rgba,
        white_fraction,
    })
}

#[wasm_bindgen]
pub fn stability_text(a: f64, b: f64, sigma: f64) -> Result<String, JsError> {
    stability_text_impl(a, b, sigma).map_err(js)
}

#[wasm_bindgen]
pub fn ecg_run(bpm: f64, noise_sd: f64, seed: u32, duration: f64) -> Result<EcgRun, JsError> {
    ecg_run_impl(bpm, noise_sd, seed.into(), duration).map_err(js)
}
