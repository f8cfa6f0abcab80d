use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input")]
    NonFiniteInput,

    #[error("orbit diverged (non-finite) at step {step}")]
    OrbitDiverged { step: usize },

    #[error("system orbit diverged at step {step}")]
    SystemDiverged { step: usize },

    #[error("ECG integration produced a non-finite state at t = {t} s")]
    EcgDiverged { t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index ({row}, {col}) out of range for {pixels}x{pixels} grid")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        pixels: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a fixed point (residual {residual:e})")]
    NotAFixedPoint { residual: f64 },

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("empty signal")]
    EmptySignal,

    #[error("signal of length {len} is shorter than kernel window {window}")]
    SignalTooShort { len: usize, window: usize },

    #[error("search window out of bounds for beat {beat}")]
    WindowOutOfBounds { beat: usize },

    #[error("empty search window")]
    EmptyWindow,

    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
