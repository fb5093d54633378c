//! Run configuration: one JSON document per experiment.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modal::{BoundaryKind, Point, Waveguide};
use crate::synth::{
    FrequencyGrid, GridMode, MeasurementConfig, QuadratureRule, Region, Shape, Side, SourceSpec,
};

pub const SCHEMA: &str = "wgfm-run/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub waveguide: WaveguideConfig,
    pub source: SourceConfig,
    pub measurement: MeasurementSection,
    pub grid: GridConfig,
    #[serde(default)]
    pub forward: ForwardConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub imaging: ImagingConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub psf: PsfConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideConfig {
    pub height: f64,
    pub boundary: BoundaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    Regions {
        #[serde(default)]
        theta: f64,
        regions: Vec<RegionConfig>,
    },
    /// Sound-soft wall across the whole cross-section at range `x1`.
    Block { x1: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub shape: ShapeConfig,
    /// `[re, im]`
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeConfig {
    Rectangle {
        x1: [f64; 2],
        xperp: [f64; 2],
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Rhombus {
        center: [f64; 2],
        half_range: f64,
        half_cross: f64,
    },
    Disc {
        center: [f64; 2],
        radius: f64,
    },
}

impl ShapeConfig {
    pub fn build(&self) -> Result<Shape> {
        match self {
            ShapeConfig::Rectangle { x1, xperp } => {
                Shape::rectangle((x1[0], x1[1]), (xperp[0], xperp[1]))
            }
            ShapeConfig::Polygon { vertices } => {
                Shape::polygon(vertices.iter().map(|v| Point::new(v[0], v[1])).collect())
            }
            ShapeConfig::Rhombus {
                center,
                half_range,
                half_cross,
            } => Shape::rhombus(Point::new(center[0], center[1]), *half_range, *half_cross),
            ShapeConfig::Disc { center, radius } => {
                Shape::disc(Point::new(center[0], center[1]), *radius)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSection {
    /// Range offset of the measurement point from the origin.
    pub a: f64,
    pub xperp: f64,
    #[serde(default = "left")]
    pub side: Side,
    /// Also measure at the mirrored point and use the two-sided operator.
    #[serde(default)]
    pub two_sided: bool,
    /// Receiver for block data; defaults to the transmitter.
    #[serde(default)]
    pub receiver: Option<ReceiverConfig>,
}

fn left() -> Side {
    Side::Left
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverConfig {
    pub a: f64,
    pub xperp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub k_minus: f64,
    /// Defaults to the full band, or `k_+(alpha)` with `alpha`.
    #[serde(default)]
    pub k_plus: Option<f64>,
    pub n: usize,
    #[serde(default = "vertex")]
    pub mode: GridMode,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub tau: f64,
}

fn vertex() -> GridMode {
    GridMode::Vertex
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForwardConfig {
    /// Midpoint cells of size `cell`, default `height / 40`.
    Quadrature {
        #[serde(default)]
        cell: Option<f64>,
    },
    Exact,
}

impl Default for ForwardConfig {
    fn default() -> Self {
        ForwardConfig::Quadrature { cell: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_delta() -> f64 {
    0.05
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            delta: default_delta(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorName {
    Fm,
    Fbsm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagingConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_range")]
    pub z1_range: [f64; 2],
    #[serde(default = "default_n1")]
    pub n1: usize,
    #[serde(default = "default_nperp")]
    pub nperp: usize,
    /// Doubled probe phase; defaults to true for block data.
    #[serde(default)]
    pub doubled: Option<bool>,
    #[serde(default = "both_indicators")]
    pub indicators: Vec<IndicatorName>,
}

fn default_epsilon() -> f64 {
    crate::imaging::DEFAULT_EPSILON
}
fn default_rho() -> f64 {
    crate::imaging::DEFAULT_RHO
}
fn default_range() -> [f64; 2] {
    [-2.0, 2.0]
}
fn default_n1() -> usize {
    161
}
fn default_nperp() -> usize {
    8
}
fn both_indicators() -> Vec<IndicatorName> {
    vec![IndicatorName::Fm, IndicatorName::Fbsm]
}

impl Default for ImagingConfig {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            rho: default_rho(),
            z1_range: default_range(),
            n1: default_n1(),
            nperp: default_nperp(),
            doubled: None,
            indicators: both_indicators(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Added to `theta` when building the factors; nonzero values are a negative control.
    #[serde(default)]
    pub theta_offset: f64,
    #[serde(default = "tol_dispersion")]
    pub dispersion_tol: f64,
    #[serde(default = "tol_hermiticity")]
    pub hermiticity_tol: f64,
    #[serde(default = "tol_factorization")]
    pub factorization_tol: f64,
    #[serde(default = "tol_psf")]
    pub psf_tol: f64,
    #[serde(default = "tol_eigen")]
    pub eigen_tol: f64,
}

fn tol_dispersion() -> f64 {
    1e-12
}
fn tol_hermiticity() -> f64 {
    1e-15
}
fn tol_factorization() -> f64 {
    2e-2
}
fn tol_psf() -> f64 {
    1e-8
}
fn tol_eigen() -> f64 {
    1e-10
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            theta_offset: 0.0,
            dispersion_tol: tol_dispersion(),
            hermiticity_tol: tol_hermiticity(),
            factorization_tol: tol_factorization(),
            psf_tol: tol_psf(),
            eigen_tol: tol_eigen(),
        }
    }
}

/// Profile of the point spread function; unset fields fall back to the run's grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsfConfig {
    #[serde(default)]
    pub k_minus: Option<f64>,
    #[serde(default)]
    pub k_plus: Option<f64>,
    /// `[y1, yperp]`; default `[0, height / 2]`.
    #[serde(default)]
    pub y: Option<[f64; 2]>,
    #[serde(default = "psf_range")]
    pub z1_range: [f64; 2],
    #[serde(default = "psf_points")]
    pub points: usize,
}

fn psf_range() -> [f64; 2] {
    [-5.0 * std::f64::consts::PI, 5.0 * std::f64::consts::PI]
}
fn psf_points() -> usize {
    2001
}

impl Default for PsfConfig {
    fn default() -> Self {
        Self {
            k_minus: None,
            k_plus: None,
            y: None,
            z1_range: psf_range(),
            points: psf_points(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Pgm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Pgm]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            formats: default_formats(),
        }
    }
}

/// Everything the commands need, built and checked from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub waveguide: Waveguide,
    pub source: Option<SourceSpec>,
    pub block_x1: Option<f64>,
    pub measurement: MeasurementConfig,
    pub receiver: MeasurementConfig,
    pub grid: FrequencyGrid,
    pub quadrature: QuadratureRule,
    pub exact: bool,
}

impl Resolved {
    /// Range interval the image should recover.
    pub fn truth(&self) -> (f64, f64) {
        match (&self.source, self.block_x1) {
            (Some(s), _) => s.range_support(),
            (None, Some(b)) => (b, b),
            (None, None) => unreachable!("resolve always sets a source or a block"),
        }
    }

    pub fn is_block(&self) -> bool {
        self.block_x1.is_some()
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
        if cfg.schema != SCHEMA {
            return Err(Error::Config(format!(
                "{origin}: schema '{}' is not supported, expected '{SCHEMA}'",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let ctx = |what: &str, e: Error| Error::Config(format!("{what}: {e}"));
        let wg = Waveguide::new(self.waveguide.height, self.waveguide.boundary)
            .map_err(|e| ctx("waveguide", e))?;
        let m = &self.measurement;
        let measurement =
            MeasurementConfig::new(m.a, m.xperp, m.side).map_err(|e| ctx("measurement", e))?;
        measurement
            .validate_for(&wg)
            .map_err(|e| ctx("measurement", e))?;
        let receiver = match &m.receiver {
            Some(r) => MeasurementConfig::new(r.a, r.xperp, m.side)
                .map_err(|e| ctx("measurement.receiver", e))?,
            None => measurement,
        };
        let (source, block_x1) = match &self.source {
            SourceConfig::Regions { theta, regions } => {
                let regions = regions
                    .iter()
                    .map(|r| {
                        Ok(Region::new(
                            r.shape.build()?,
                            Complex64::new(r.amplitude[0], r.amplitude[1]),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| ctx("source.regions", e))?;
                let src = if m.two_sided || self.grid.alpha.is_some() {
                    SourceSpec::with_positive_real_part(regions, self.grid.tau)
                } else {
                    SourceSpec::new(regions, *theta)
                }
                .map_err(|e| ctx("source", e))?;
                src.validate_for(&wg).map_err(|e| ctx("source", e))?;
                (Some(src), None)
            }
            SourceConfig::Block { x1 } => {
                if self.grid.alpha.is_some() || m.two_sided {
                    return Err(Error::Config(
                        "block data supports neither alpha nor two-sided operators".into(),
                    ));
                }
                (None, Some(*x1))
            }
        };
        if m.two_sided && (m.side != Side::Left || self.grid.alpha.is_some()) {
            return Err(Error::Config(
                "two-sided runs measure on the left first and cannot be combined with alpha".into(),
            ));
        }
        let g = &self.grid;
        let k_plus = match (g.k_plus, g.alpha) {
            (Some(k), _) => k,
            (None, Some(alpha)) => {
                crate::synth::check_alpha(alpha).map_err(|e| ctx("grid", e))?;
                wg.band_span() / alpha
            }
            (None, None) => wg.band_span(),
        };
        let grid =
            FrequencyGrid::new(g.k_minus, k_plus, g.n, g.mode).map_err(|e| ctx("grid", e))?;
        if g.alpha.is_none() {
            grid.validate_for(&wg).map_err(|e| ctx("grid", e))?;
        }
        let (quadrature, exact) = match self.forward {
            ForwardConfig::Quadrature { cell } => (
                QuadratureRule::new(cell.unwrap_or(wg.height() / 40.0))
                    .map_err(|e| ctx("forward", e))?,
                false,
            ),
            ForwardConfig::Exact => (QuadratureRule::new(wg.height() / 40.0)?, true),
        };
        let i = &self.imaging;
        if !(i.epsilon > 0.0 && (0.0..1.0).contains(&i.rho) && i.z1_range[0] < i.z1_range[1]) {
            return Err(Error::Config(
                "imaging: need epsilon > 0, rho in [0, 1) and an increasing z1_range".into(),
            ));
        }
        if !(self.noise.delta >= 0.0 && self.noise.delta.is_finite()) {
            return Err(Error::Config(
                "noise.delta must be a finite nonnegative number".into(),
            ));
        }
        Ok(Resolved {
            waveguide: wg,
            source,
            block_x1,
            measurement,
            receiver,
            grid,
            quadrature,
            exact,
        })
    }
}
