use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid waveguide: {0}")]
    InvalidWaveguide(String),

    #[error("cross-section coordinate {xperp} outside [0, {height}]")]
    CrossSectionOutOfRange { xperp: f64, height: f64 },

    #[error("wavenumber {k} outside the open single-mode band ({lo}, {hi})")]
    OutsidePassband { k: f64, lo: f64, hi: f64 },

    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("invalid measurement configuration: {0}")]
    InvalidMeasurement(String),

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidQuadrature(String),

    #[error("dataset is missing the lattice sample at offset {0}")]
    MissingSample(i64),

    #[error("phase mismatch: dataset was synthesized with theta = {dataset}, assembly requested {requested}")]
    ThetaMismatch { dataset: f64, requested: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("retained spectrum is empty")]
    EmptySpectrum,

    #[error("indicator field is identically zero")]
    ZeroField,

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
