//! Range-support imaging: probes, the Picard indicator of the factorization
//! method and the factorization-based sampling indicator.
//!
//! Frequency functions are discretized on the grid points `sigma_i` and inner
//! products carry the weight `delta`. Operators are handled as `delta * F`, so a
//! vector `g` enters as `sqrt(delta) g` and eigenvectors are orthonormal in the
//! plain Euclidean sense.

mod eigen;
mod image;

use nalgebra::DVector;
use num_complex::Complex64;

pub use eigen::{hermitian_eigen, hermitian_sqrt, Eigensystem};
pub use image::{scan, support_metrics, ImageField, IndicatorKind, SamplingGrid, SupportMetrics};

use crate::error::{Error, Result};
use crate::mfop::FarFieldMatrix;
use crate::modal::{Point, Waveguide};
use crate::synth::{FrequencyGrid, MeasurementConfig, Side};

/// Default disc radius of the factorization-method probe.
pub const DEFAULT_EPSILON: f64 = 0.01;
/// Default relative spectral cutoff of the Picard sum.
pub const DEFAULT_RHO: f64 = 0.01;

/// Multiplier on the probe phase: `Doubled` matches reflection data whose path
/// runs out and back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseFactor {
    Single,
    Doubled,
}

impl PhaseFactor {
    pub fn value(self) -> f64 {
        match self {
            PhaseFactor::Single => 1.0,
            PhaseFactor::Doubled => 2.0,
        }
    }
}

/// Test function of the sampling point `z_1`.
///
/// `epsilon = 0` is the point probe `e^{i c sigma s (z_1 - x*_1)}`; `epsilon > 0`
/// averages it over a disc of that radius. `s` is `+1` when the measurement is on the
/// left of the sampling region and `-1` on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    z1: f64,
    epsilon: f64,
    x_star1: f64,
    side: Side,
    phase: PhaseFactor,
}

impl Probe {
    pub fn point(z1: f64, x: &MeasurementConfig) -> Self {
        Self {
            z1,
            epsilon: 0.0,
            x_star1: x.point.x1,
            side: x.side,
            phase: PhaseFactor::Single,
        }
    }

    pub fn disc(z1: f64, epsilon: f64, x: &MeasurementConfig) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidProbe(format!(
                "disc radius must be positive, got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            ..Self::point(z1, x)
        })
    }

    /// Same probe with the measurement reference at `x_star1`, e.g. the midpoint of a
    /// transmitter and receiver pair.
    pub fn with_reference(self, x_star1: f64) -> Self {
        Self { x_star1, ..self }
    }

    pub fn doubled(self) -> Self {
        Self {
            phase: PhaseFactor::Doubled,
            ..self
        }
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn phase_factor(&self) -> PhaseFactor {
        self.phase
    }

    fn travel(&self) -> f64 {
        match self.side {
            Side::Left => self.z1 - self.x_star1,
            Side::Right => self.x_star1 - self.z1,
        }
    }
}

/// `2 J_1(t) / t`, equal to 1 at `t = 0`.
pub fn jinc(t: f64) -> f64 {
    if t.abs() < 1e-6 {
        1.0 - t * t / 8.0
    } else {
        2.0 * puruspe::Jn(1, t) / t
    }
}

pub fn probe_eval(p: &Probe, sigma: f64) -> Complex64 {
    let c = p.phase.value();
    let carrier = Complex64::from_polar(1.0, c * sigma * p.travel());
    if p.epsilon > 0.0 {
        carrier * jinc(c * sigma * p.epsilon)
    } else {
        carrier
    }
}

/// Probe values on the grid points, unweighted.
pub fn probe_vector(p: &Probe, grid: &FrequencyGrid) -> DVector<Complex64> {
    DVector::from_iterator(
        grid.len(),
        grid.sigmas().into_iter().map(|s| probe_eval(p, s)),
    )
}

/// `sum_{alpha_j >= rho alpha_max} |<v, phi_j>|^2 / alpha_j^2` for an already weighted `v`.
pub fn picard_sum(es: &Eigensystem, v: &DVector<Complex64>, rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidProbe(format!(
            "cutoff must lie in [0, 1), got {rho}"
        )));
    }
    if v.len() != es.vectors.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "probe has {} entries, eigenvectors {}",
            v.len(),
            es.vectors.nrows()
        )));
    }
    let top = es.values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..es.len())
        .filter(|&j| es.values[j] > 0.0 && es.values[j] >= rho * top)
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(keep
        .into_iter()
        .map(|j| {
            let c = es.vectors.column(j).dotc(v);
            c.norm_sqr() / (es.values[j] * es.values[j])
        })
        .sum())
}

/// Reciprocal Picard sum of the disc probe; `0` when the sum is not representable.
pub fn picard_indicator(
    es: &Eigensystem,
    p: &Probe,
    grid: &FrequencyGrid,
    rho: f64,
) -> Result<f64> {
    if p.epsilon <= 0.0 {
        return Err(Error::InvalidProbe(
            "the Picard indicator needs a disc probe".into(),
        ));
    }
    let v = probe_vector(p, grid) * Complex64::new(grid.step().sqrt(), 0.0);
    let s = picard_sum(es, &v, rho)?;
    Ok(if s.is_finite() { 1.0 / s } else { 0.0 })
}

/// `|<F g, g>|` for the point probe `g`, i.e. `delta^2 |g^H F g|`.
pub fn fbsm_indicator(f: &FarFieldMatrix, p: &Probe) -> Result<f64> {
    if p.epsilon != 0.0 {
        return Err(Error::InvalidProbe(
            "the sampling indicator uses the point probe".into(),
        ));
    }
    let g = probe_vector(p, &f.grid);
    let q = g.dotc(&(&f.entries * &g));
    Ok(q.norm() * f.weight * f.weight)
}

/// Image of the point probe under `S`:
/// `sqrt(psi_1(y_perp)) (e^{i k_+ t} - e^{i k_- t}) / (i t)`, `t = z_1 - y_1`.
pub fn psf(wg: &Waveguide, grid: &FrequencyGrid, z1: f64, y: Point) -> Complex64 {
    let (lo, hi) = (grid.k_minus(), grid.k_plus());
    let t = z1 - y.x1;
    let half = 0.5 * (hi - lo) * t;
    let sinc = if half.abs() < 1e-8 {
        1.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(
        wg.psi1(y.xperp).sqrt() * (hi - lo) * sinc,
        0.5 * (hi + lo) * t,
    )
}
