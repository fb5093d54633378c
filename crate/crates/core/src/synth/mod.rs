//! Synthetic single-mode data.
//!
//! The field radiated by a piecewise-constant source is evaluated from the
//! propagating term of the modal Green function, either by midpoint quadrature
//! over the source cells or, for unions of rectangles, in closed form. Samples
//! are taken on the difference lattice of a uniform frequency grid: for grid
//! points `sigma_i` the operator only needs the wavenumbers
//! `omega_m = sqrt(lambda_1^2 + (m * delta)^2)`, `m = 1..N-1`.

mod geometry;
pub mod io;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use geometry::{QuadNode, QuadratureRule, Shape};

use crate::error::{Error, Result};
use crate::modal::{Point, Waveguide};

/// Remainder of the evanescent modes tolerated at the measurement point.
pub const FAR_FIELD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub shape: Shape,
    pub amplitude: Complex64,
}

impl Region {
    pub fn new(shape: Shape, amplitude: Complex64) -> Self {
        Self { shape, amplitude }
    }

    pub fn unit(shape: Shape) -> Self {
        Self::new(shape, Complex64::new(1.0, 0.0))
    }
}

/// Which sign condition the source satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceCondition {
    /// `e^{i theta} f` real and of one sign on the support.
    RealPhase,
    /// `Re(e^{i tau} f) > 0` on the support (two-sided and shifted-lattice operators).
    PositiveRealPart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    regions: Vec<Region>,
    theta: f64,
    condition: SourceCondition,
}

impl SourceSpec {
    /// Source with `e^{i theta} f_0` real and nonzero, with the same sign in every region.
    pub fn new(regions: Vec<Region>, theta: f64) -> Result<Self> {
        check_regions(&regions)?;
        if !(0.0..TAU).contains(&theta) {
            return Err(Error::InvalidSource(format!(
                "theta {theta} outside [0, 2pi)"
            )));
        }
        let rot = Complex64::from_polar(1.0, theta);
        let mut sign = 0.0;
        for r in &regions {
            let v = rot * r.amplitude;
            if v.im.abs() > 1e-12 * v.norm() {
                return Err(Error::InvalidSource(format!(
                    "e^(i theta) f0 = {v} is not real for theta = {theta}"
                )));
            }
            if sign == 0.0 {
                sign = v.re.signum();
            } else if v.re.signum() != sign {
                return Err(Error::InvalidSource(
                    "e^(i theta) f0 changes sign between regions".into(),
                ));
            }
        }
        Ok(Self {
            regions,
            theta,
            condition: SourceCondition::RealPhase,
        })
    }

    /// Source with `Re(e^{i tau} f_0) > 0` in every region.
    pub fn with_positive_real_part(regions: Vec<Region>, tau: f64) -> Result<Self> {
        check_regions(&regions)?;
        let rot = Complex64::from_polar(1.0, tau);
        if let Some(r) = regions.iter().find(|r| (rot * r.amplitude).re <= 0.0) {
            return Err(Error::InvalidSource(format!(
                "Re(e^(i tau) f0) <= 0 for amplitude {}",
                r.amplitude
            )));
        }
        Ok(Self {
            regions,
            theta: tau.rem_euclid(TAU),
            condition: SourceCondition::PositiveRealPart,
        })
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn condition(&self) -> SourceCondition {
        self.condition
    }

    /// Same geometry, amplitudes multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let regions = self
            .regions
            .iter()
            .map(|r| Region::new(r.shape.clone(), r.amplitude * s))
            .collect();
        match self.condition {
            SourceCondition::RealPhase => SourceSpec::new(regions, self.theta),
            SourceCondition::PositiveRealPart => {
                SourceSpec::with_positive_real_part(regions, self.theta)
            }
        }
    }

    /// Projection of the support on the axis, `[min y1, max y1]`.
    pub fn range_support(&self) -> (f64, f64) {
        self.regions
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
                let (lo, hi) = r.shape.range_extent();
                (a.min(lo), b.max(hi))
            })
    }

    /// Smallest and largest `|e^{i theta} f|` over the regions.
    pub fn amplitude_bounds(&self) -> (f64, f64) {
        self.regions
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                let a = r.amplitude.norm();
                (lo.min(a), hi.max(a))
            })
    }

    pub fn contains(&self, p: Point) -> bool {
        self.regions.iter().any(|r| r.shape.contains(p))
    }

    pub fn validate_for(&self, wg: &Waveguide) -> Result<()> {
        for r in &self.regions {
            let (_, _, lo, hi) = r.shape.bbox();
            if lo < 0.0 || hi > wg.height() {
                return Err(Error::InvalidSource(format!(
                    "region cross-section extent [{lo}, {hi}] leaves (0, {})",
                    wg.height()
                )));
            }
        }
        Ok(())
    }

    pub fn quadrature_nodes(&self, rule: &QuadratureRule) -> Vec<QuadNode> {
        let mut out = Vec::new();
        for r in &self.regions {
            geometry::shape_nodes(&r.shape, r.amplitude, rule, &mut out);
        }
        out
    }
}

fn check_regions(regions: &[Region]) -> Result<()> {
    if regions.is_empty() {
        return Err(Error::InvalidSource("no regions".into()));
    }
    if regions
        .iter()
        .any(|r| r.amplitude.norm() == 0.0 || !r.amplitude.is_finite())
    {
        return Err(Error::InvalidSource(
            "amplitude must be finite and nonzero".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Measurement point `x* = (x*_1, x*_perp)` at range offset `a` on one side of the source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementConfig {
    pub point: Point,
    pub side: Side,
}

impl MeasurementConfig {
    pub fn new(a: f64, xperp: f64, side: Side) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidMeasurement(format!(
                "range offset must be positive, got {a}"
            )));
        }
        let x1 = match side {
            Side::Left => -a,
            Side::Right => a,
        };
        Ok(Self {
            point: Point::new(x1, xperp),
            side,
        })
    }

    pub fn left(a: f64, xperp: f64) -> Result<Self> {
        Self::new(a, xperp, Side::Left)
    }

    pub fn right(a: f64, xperp: f64) -> Result<Self> {
        Self::new(a, xperp, Side::Right)
    }

    /// `(x*_1, x*_perp) -> (-x*_1, x*_perp)`
    pub fn mirrored(&self) -> Self {
        Self {
            point: Point::new(-self.point.x1, self.point.xperp),
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
        }
    }

    pub fn offset(&self) -> f64 {
        self.point.x1.abs()
    }

    pub fn validate_for(&self, wg: &Waveguide) -> Result<()> {
        let xp = self.point.xperp;
        if !(xp > 0.0 && xp < wg.height()) {
            return Err(Error::InvalidMeasurement(format!(
                "x*_perp = {xp} must lie in (0, {})",
                wg.height()
            )));
        }
        if wg.psi1(xp).abs() < 1e-12 {
            return Err(Error::InvalidMeasurement(format!(
                "psi_1 vanishes at x*_perp = {xp}; the data would be identically zero"
            )));
        }
        Ok(())
    }

    /// Distance from the measurement cross-section to the nearest point of `[lo, hi]`,
    /// or an error when the interval is not entirely on the source side.
    pub fn separation_from(&self, lo: f64, hi: f64) -> Result<f64> {
        let x = self.point.x1;
        let sep = match self.side {
            Side::Left => lo - x,
            Side::Right => x - hi,
        };
        if sep <= 0.0 {
            return Err(Error::InvalidMeasurement(format!(
                "measurement at x1 = {x} is not on the {:?} side of [{lo}, {hi}]",
                self.side
            )));
        }
        Ok(sep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// `sigma_i = k_- + (i + 1/2) delta`
    Midpoint,
    /// `sigma_i = k_- + i delta`
    Vertex,
}

/// Uniform grid of `n` points over `(k_-, k_+)` with spacing `delta = (k_+ - k_-)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    k_minus: f64,
    k_plus: f64,
    n: usize,
    mode: GridMode,
}

impl FrequencyGrid {
    pub fn new(k_minus: f64, k_plus: f64, n: usize, mode: GridMode) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {n}"
            )));
        }
        if !(k_minus.is_finite() && k_plus.is_finite() && k_plus > k_minus) {
            return Err(Error::InvalidGrid(format!(
                "bad interval ({k_minus}, {k_plus})"
            )));
        }
        Ok(Self {
            k_minus,
            k_plus,
            n,
            mode,
        })
    }

    /// `k_- = 0`, `k_+ = sqrt(lambda_2^2 - lambda_1^2)`.
    pub fn full_band(wg: &Waveguide, n: usize, mode: GridMode) -> Result<Self> {
        Self::new(0.0, wg.band_span(), n, mode)
    }

    /// `k_- = 0`, `k_+(alpha) = sqrt(lambda_2^2 - lambda_1^2) / alpha`.
    pub fn alpha_band(wg: &Waveguide, alpha: f64, n: usize, mode: GridMode) -> Result<Self> {
        check_alpha(alpha)?;
        Self::new(0.0, wg.band_span() / alpha, n, mode)
    }

    pub fn k_minus(&self) -> f64 {
        self.k_minus
    }

    pub fn k_plus(&self) -> f64 {
        self.k_plus
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    pub fn step(&self) -> f64 {
        (self.k_plus - self.k_minus) / self.n as f64
    }

    pub fn sigma(&self, i: usize) -> f64 {
        let shift = match self.mode {
            GridMode::Midpoint => 0.5,
            GridMode::Vertex => 0.0,
        };
        self.k_minus + (i as f64 + shift) * self.step()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.sigma(i)).collect()
    }

    /// Every difference-lattice wavenumber must be in the open single-mode band.
    pub fn validate_for(&self, wg: &Waveguide) -> Result<()> {
        let top = omega(wg.lambda1(), (self.n - 1) as f64 * self.step(), 0.0);
        if !wg.in_passband(top) {
            return Err(Error::InvalidGrid(format!(
                "largest lattice wavenumber {top} is outside the single-mode band {:?}",
                wg.passband()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 2.0 && alpha.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "alpha must be >= 2, got {alpha}"
        )));
    }
    Ok(())
}

/// `omega_{sigma gamma} = sqrt(lambda_1^2 + (sigma - gamma)^2)`
pub fn omega(lambda1: f64, sigma: f64, gamma: f64) -> f64 {
    lambda1.hypot(sigma - gamma)
}

/// `omega_{sigma gamma alpha} = sqrt(lambda_1^2 + (sigma - gamma + sqrt(lambda_2^2 - lambda_1^2)/alpha)^2)`
pub fn omega_alpha(lambda1: f64, lambda2: f64, alpha: f64, sigma: f64, gamma: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let shift = (lambda2 * lambda2 - lambda1 * lambda1).sqrt() / alpha;
    Ok(lambda1.hypot(sigma - gamma + shift))
}

/// Which wavenumbers a dataset holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lattice {
    /// `mu_1(omega_m) = m delta`, `m = 1..N-1`.
    Difference,
    /// `mu_1(omega_m) = m delta + k_+(alpha)`, `m = -(N-1)..N-1`.
    Alpha { alpha: f64 },
}

impl Lattice {
    pub fn offsets(&self, n: usize) -> Vec<i64> {
        let n = n as i64;
        match self {
            Lattice::Difference => (1..n).collect(),
            Lattice::Alpha { .. } => (-(n - 1)..n).collect(),
        }
    }

    /// Group wavenumber `mu_1` belonging to offset `m`.
    pub fn mu(&self, wg: &Waveguide, grid: &FrequencyGrid, m: i64) -> f64 {
        let d = m as f64 * grid.step();
        match self {
            Lattice::Difference => d,
            Lattice::Alpha { alpha } => d + wg.band_span() / alpha,
        }
    }

    pub fn omega(&self, wg: &Waveguide, grid: &FrequencyGrid, m: i64) -> f64 {
        wg.lambda1().hypot(self.mu(wg, grid, m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub m: i64,
    pub omega: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseInfo {
    pub level: f64,
    pub seed: u64,
}

/// Single-mode data at one measurement point, on the lattice of one frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub waveguide: Waveguide,
    pub grid: FrequencyGrid,
    pub lattice: Lattice,
    pub measurement: MeasurementConfig,
    /// Receiver for reflection data; `None` when source-generated.
    pub receiver: Option<MeasurementConfig>,
    pub theta: f64,
    pub doubled: bool,
    pub noise: Option<NoiseInfo>,
    pub samples: Vec<Sample>,
}

impl DataSet {
    pub fn sample(&self, m: i64) -> Result<&Sample> {
        let first = self
            .samples
            .first()
            .map(|s| s.m)
            .ok_or(Error::MissingSample(m))?;
        let idx = m - first;
        match self
            .samples
            .get(usize::try_from(idx).map_err(|_| Error::MissingSample(m))?)
        {
            Some(s) if s.m == m => Ok(s),
            _ => self
                .samples
                .iter()
                .find(|s| s.m == m)
                .ok_or(Error::MissingSample(m)),
        }
    }

    /// Every lattice offset present exactly once, in order.
    pub fn is_complete(&self) -> bool {
        let want = self.lattice.offsets(self.grid.len());
        want.len() == self.samples.len() && want.iter().zip(&self.samples).all(|(m, s)| *m == s.m)
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.omega).collect()
    }
}

/// How the volume integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForwardModel {
    Quadrature(QuadratureRule),
    /// Closed form; rectangles only.
    Exact,
}

/// Propagating part of the radiated field at `x` by midpoint quadrature.
pub fn forward_field(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    k: f64,
    quad: &QuadratureRule,
) -> Result<Complex64> {
    check_forward(wg, src, x, k)?;
    let nodes = src.quadrature_nodes(quad);
    Ok(field_from_nodes(wg, &nodes, x.point, k))
}

/// Propagating part of the radiated field for a union of rectangles, in closed form.
pub fn forward_field_exact(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    k: f64,
) -> Result<Complex64> {
    check_forward(wg, src, x, k)?;
    exact_field(wg, src, x.point, k)
}

fn check_forward(wg: &Waveguide, src: &SourceSpec, x: &MeasurementConfig, k: f64) -> Result<()> {
    wg.check_passband(k)?;
    src.validate_for(wg)?;
    x.validate_for(wg)?;
    if src.contains(x.point) {
        return Err(Error::InvalidMeasurement(
            "measurement point lies inside the source".into(),
        ));
    }
    Ok(())
}

fn field_from_nodes(wg: &Waveguide, nodes: &[QuadNode], x: Point, k: f64) -> Complex64 {
    let mu = wg.mu1(k);
    let sum: Complex64 = nodes
        .iter()
        .map(|n| {
            let w = n.weight * wg.psi1(n.y.xperp);
            n.amplitude * w * Complex64::from_polar(1.0, mu * (x.x1 - n.y.x1).abs())
        })
        .sum();
    Complex64::new(0.0, wg.psi1(x.xperp) / (2.0 * mu)) * sum
}

/// `int_lo^hi e^{i mu (t - x)} dt` for `x <= lo`, written without cancellation at small `mu`.
fn phase_integral(mu: f64, from: f64, width: f64) -> Complex64 {
    let half = 0.5 * mu * width;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(width * sinc, mu * from + half)
}

fn exact_field(wg: &Waveguide, src: &SourceSpec, x: Point, k: f64) -> Result<Complex64> {
    let mu = wg.mu1(k);
    let mut sum = Complex64::new(0.0, 0.0);
    for r in src.regions() {
        let Shape::Rectangle {
            x1: (a, b),
            xperp: (c, d),
        } = r.shape
        else {
            return Err(Error::Unsupported(
                "closed-form field needs rectangular regions".into(),
            ));
        };
        let cross = wg.psi1_integral(c, d);
        let range = if x.x1 <= a {
            phase_integral(mu, a - x.x1, b - a)
        } else if x.x1 >= b {
            phase_integral(mu, x.x1 - b, b - a)
        } else {
            phase_integral(mu, 0.0, x.x1 - a) + phase_integral(mu, 0.0, b - x.x1)
        };
        sum += r.amplitude * cross * range;
    }
    Ok(Complex64::new(0.0, wg.psi1(x.xperp) / (2.0 * mu)) * sum)
}

fn check_far_field(wg: &Waveguide, sep: f64, k_max: f64) -> Result<()> {
    let bound = wg.green_tail_bound(sep, k_max, 8);
    if bound > FAR_FIELD_TOL {
        return Err(Error::InvalidMeasurement(format!(
            "evanescent remainder bound {bound:.3e} exceeds {FAR_FIELD_TOL:e} at separation {sep}; \
             move the measurement to at least {:.4} from the source",
            wg.far_field_separation(k_max, FAR_FIELD_TOL)
        )));
    }
    Ok(())
}

/// Data on the difference lattice of `grid`.
pub fn synthesize_dataset(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    grid: &FrequencyGrid,
    model: &ForwardModel,
) -> Result<DataSet> {
    grid.validate_for(wg)?;
    synthesize_on(wg, src, x, grid, Lattice::Difference, model)
}

/// Data on the shifted lattice used by the `alpha` operator; `grid` should span `(0, k_+(alpha))`.
pub fn synthesize_alpha_dataset(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    grid: &FrequencyGrid,
    alpha: f64,
    model: &ForwardModel,
) -> Result<DataSet> {
    check_alpha(alpha)?;
    let lattice = Lattice::Alpha { alpha };
    let top = lattice.omega(wg, grid, grid.len() as i64 - 1);
    if !wg.in_passband(top) {
        return Err(Error::InvalidGrid(format!(
            "largest shifted-lattice wavenumber {top} is outside the single-mode band"
        )));
    }
    synthesize_on(wg, src, x, grid, lattice, model)
}

fn synthesize_on(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    grid: &FrequencyGrid,
    lattice: Lattice,
    model: &ForwardModel,
) -> Result<DataSet> {
    src.validate_for(wg)?;
    x.validate_for(wg)?;
    let (lo, hi) = src.range_support();
    let sep = x.separation_from(lo, hi)?;
    let offsets = lattice.offsets(grid.len());
    let omegas: Vec<f64> = offsets
        .iter()
        .map(|&m| lattice.omega(wg, grid, m))
        .collect();
    let k_max = omegas.iter().cloned().fold(0.0, f64::max);
    check_far_field(wg, sep, k_max)?;
    for &w in &omegas {
        wg.check_passband(w)?;
    }

    let values: Vec<Complex64> = match model {
        ForwardModel::Quadrature(rule) => {
            let nodes = src.quadrature_nodes(rule);
            omegas
                .par_iter()
                .map(|&k| field_from_nodes(wg, &nodes, x.point, k))
                .collect()
        }
        ForwardModel::Exact => omegas
            .par_iter()
            .map(|&k| exact_field(wg, src, x.point, k))
            .collect::<Result<_>>()?,
    };
    let samples = offsets
        .into_iter()
        .zip(omegas)
        .zip(values)
        .map(|((m, omega), value)| Sample { m, omega, value })
        .collect();
    Ok(DataSet {
        waveguide: *wg,
        grid: *grid,
        lattice,
        measurement: *x,
        receiver: None,
        theta: src.theta(),
        doubled: false,
        noise: None,
        samples,
    })
}

/// Multiplicative complex Gaussian noise: `u -> u (1 + delta (xi_1 + i xi_2)/sqrt 2)`.
pub fn add_noise(ds: &DataSet, delta: f64, seed: u64) -> Result<DataSet> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidMeasurement(format!(
            "noise level must be >= 0, got {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(ds.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ds.clone();
    for s in &mut out.samples {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        s.value *= Complex64::new(1.0, 0.0) + Complex64::new(a, b) * (delta / 2f64.sqrt());
    }
    out.noise = Some(NoiseInfo { level: delta, seed });
    Ok(out)
}

/// Mode-1 reflection data from a sound-soft wall spanning the cross-section at `block_x1`.
///
/// Mirror model with reflection coefficient `-1`: the sample at `k` is
/// `-(i / 2 mu_1) psi_1(x_s) psi_1(x_r) e^{i mu_1 (|b - x_s1| + |b - x_r1|)}`.
pub fn block_dataset(
    wg: &Waveguide,
    block_x1: f64,
    source: &MeasurementConfig,
    receiver: &MeasurementConfig,
    grid: &FrequencyGrid,
) -> Result<DataSet> {
    grid.validate_for(wg)?;
    source.validate_for(wg)?;
    receiver.validate_for(wg)?;
    if source.side != receiver.side {
        return Err(Error::InvalidMeasurement(
            "transmitter and receiver must be on the same side".into(),
        ));
    }
    let s_sep = source.separation_from(block_x1, block_x1)?;
    let r_sep = receiver.separation_from(block_x1, block_x1)?;
    let lattice = Lattice::Difference;
    let offsets = lattice.offsets(grid.len());
    let omegas: Vec<f64> = offsets
        .iter()
        .map(|&m| lattice.omega(wg, grid, m))
        .collect();
    check_far_field(
        wg,
        s_sep.min(r_sep),
        omegas.iter().cloned().fold(0.0, f64::max),
    )?;
    let amp = wg.psi1(source.point.xperp) * wg.psi1(receiver.point.xperp);
    let travel = s_sep + r_sep;
    let samples = offsets
        .into_iter()
        .zip(omegas)
        .map(|(m, omega)| {
            let mu = wg.mu1(omega);
            let value =
                Complex64::new(0.0, -amp / (2.0 * mu)) * Complex64::from_polar(1.0, mu * travel);
            Sample { m, omega, value }
        })
        .collect();
    Ok(DataSet {
        waveguide: *wg,
        grid: *grid,
        lattice,
        measurement: *source,
        receiver: Some(*receiver),
        theta: 0.0,
        doubled: true,
        noise: None,
        samples,
    })
}
