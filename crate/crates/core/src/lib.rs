//! Numerical toolkit for the quadratic difference-equation family
//! `x[n+1] = a * x[n]^alpha + b * x[n-1]^alpha`, its coupled 2D relative,
//! a synthetic ECG generator and a Savitzky-Golay based cardiac feature
//! pipeline.
//!
//! Modules:
//! - [`dynamics`]: scalar recurrence, coupled system, linear-case roots.
//! - [`escape`]: escape-time rasters over the initial-value/parameter disk.
//! - [`stability`]: fixed points and Jacobian classification of the coupled map.
//! - [`ecg`]: ODE ECG model, RK4 integration, measurement noise, resampling.
//! - [`features`]: Savitzky-Golay kernels, R-peak/R-onset/B-point detection.
//! - [`io`]: config format, PGM and CSV emitters.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < t)` keeps NaN on the failing side

pub mod dynamics;
pub mod ecg;
pub mod escape;
pub mod features;
pub mod io;
pub mod signal;
pub mod stability;

mod error;

pub use error::{Error, Result};
pub use signal::SignalFrame;
