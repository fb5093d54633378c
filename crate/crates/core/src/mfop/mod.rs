//! Discrete multi-frequency far-field operators.
//!
//! On a uniform grid `sigma_i` every operator here is Toeplitz: entry `(i, j)` only
//! depends on `i - j` through the dataset sample on the matching lattice offset.
//! Assembly therefore builds a kernel `K(d)`, `d = -(N-1)..N-1`, and spreads it.
//!
//! Where the group wavenumber vanishes (`d = 0` on the difference lattice) no
//! sample exists. The kernel is continuous there; its value is obtained from
//! the three nearest offsets on each side after removing the linear phase
//! `e^{i d phi}` that the range offset to the source imprints, by quadratic
//! extrapolation in `d^2`.

mod factors;
pub mod io;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use factors::{alpha_sweep, discrete_factors, verify_factorization, DiscreteFactors};

use crate::error::{Error, Result};
use crate::synth::{DataSet, FrequencyGrid, Lattice, Side};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Phase agreement required between a dataset and the requested `theta`.
pub const THETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    /// One-sided source data rotated by `e^{i theta}`.
    Backscatter { theta: f64 },
    /// Reflection data from a sound-soft wall (doubled travel path).
    Block,
    /// Left data below the diagonal, phase-corrected right data above.
    TwoSided,
    /// Shifted lattice; `tau` is the rotation used for the Hermitian part.
    Alpha { alpha: f64, tau: f64 },
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Backscatter { .. } => "backscatter",
            OperatorKind::Block => "block",
            OperatorKind::TwoSided => "two_sided",
            OperatorKind::Alpha { .. } => "alpha",
        }
    }

    /// Rotation applied before taking the Hermitian part.
    pub fn rotation(&self) -> f64 {
        match self {
            OperatorKind::Alpha { tau, .. } => *tau,
            _ => 0.0,
        }
    }
}

/// `N x N` operator matrix; the frequency weight `delta` is kept separate.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldMatrix {
    pub entries: DMatrix<Complex64>,
    pub grid: FrequencyGrid,
    pub weight: f64,
    pub kind: OperatorKind,
}

impl FarFieldMatrix {
    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }

    /// `max |F - F^H|`
    pub fn hermiticity_defect(&self) -> f64 {
        let a = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..a.nrows() {
            for j in 0..=i {
                worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(e^{i r} F + (e^{i r} F)^H) / 2` with `r` from the kind, times the weight.
    pub fn weighted_hermitian_part(&self) -> DMatrix<Complex64> {
        let rot = Complex64::from_polar(self.weight, self.kind.rotation());
        let a = self.entries.map(|z| z * rot);
        (&a + a.adjoint()).map(|z| z * 0.5)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            entries: self.entries.map(|z| z * s),
            ..self.clone()
        }
    }
}

fn check_difference(ds: &DataSet) -> Result<()> {
    if ds.lattice != Lattice::Difference {
        return Err(Error::GridMismatch(
            "expected data on the difference lattice".into(),
        ));
    }
    if !ds.is_complete() {
        let missing = ds
            .lattice
            .offsets(ds.grid.len())
            .into_iter()
            .find(|&m| ds.sample(m).is_err())
            .unwrap_or(0);
        return Err(Error::MissingSample(missing));
    }
    Ok(())
}

fn mu(ds: &DataSet, m: i64) -> f64 {
    ds.lattice.mu(&ds.waveguide, &ds.grid, m)
}

/// `-i mu u` on the positive offsets of a difference-lattice dataset.
fn positive_kernel(ds: &DataSet, phase: Complex64) -> Result<Vec<Complex64>> {
    (1..ds.grid.len() as i64)
        .map(|m| Ok(-I * mu(ds, m) * phase * ds.sample(m)?.value))
        .collect()
}

/// Value at `d = 0` from a kernel known on `d = +-1, +-2, +-3`.
///
/// With a single offset (`N = 2`) the phase step is only known up to `pi`; the
/// branch giving a nonnegative real value is taken.
fn extrapolate_diagonal(k: &dyn Fn(i64) -> Complex64, n: usize) -> Complex64 {
    let reach = (n - 1).min(3);
    let phi = if reach >= 2 {
        (k(2) * k(1).conj()).arg()
    } else {
        let half = (k(1) * k(-1).conj()).arg() / 2.0;
        let turn = Complex64::from_polar(1.0, -half);
        if (k(1) * turn + k(-1) * turn.conj()).re < 0.0 {
            half + std::f64::consts::PI
        } else {
            half
        }
    };
    let weights: &[f64] = match reach {
        1 => &[1.0],
        2 => &[4.0 / 3.0, -1.0 / 3.0],
        _ => &[1.5, -0.6, 0.1],
    };
    weights
        .iter()
        .enumerate()
        .map(|(idx, w)| {
            let d = idx as i64 + 1;
            let turn = Complex64::from_polar(1.0, -(d as f64) * phi);
            let even = 0.5 * (k(d) * turn + k(-d) * turn.conj());
            *w * even
        })
        .sum()
}

fn toeplitz(n: usize, k: impl Fn(i64) -> Complex64) -> DMatrix<Complex64> {
    let kernel: Vec<Complex64> = (-(n as i64 - 1)..n as i64).map(&k).collect();
    let off = n as i64 - 1;
    DMatrix::from_fn(n, n, |i, j| kernel[(i as i64 - j as i64 + off) as usize])
}

/// Kernel from the lower-triangle values `lower[d-1]` and upper `upper[d-1]`, `d >= 1`.
fn from_triangles(n: usize, lower: &[Complex64], upper: &[Complex64]) -> DMatrix<Complex64> {
    let raw = |d: i64| match d {
        d if d > 0 => lower[d as usize - 1],
        d if d < 0 => upper[(-d) as usize - 1],
        _ => Complex64::new(0.0, 0.0),
    };
    let diag = extrapolate_diagonal(&raw, n);
    toeplitz(n, |d| if d == 0 { diag } else { raw(d) })
}

fn wrap_tau(x: f64) -> f64 {
    x.rem_euclid(std::f64::consts::TAU)
}

/// Backscatter operator from one-sided source data.
pub fn assemble_backscatter(ds: &DataSet, theta: f64) -> Result<FarFieldMatrix> {
    if ds.doubled {
        return Err(Error::Unsupported(
            "reflection data needs assemble_block".into(),
        ));
    }
    check_difference(ds)?;
    let gap = (wrap_tau(ds.theta - theta + std::f64::consts::PI) - std::f64::consts::PI).abs();
    if gap > THETA_TOL {
        return Err(Error::ThetaMismatch {
            dataset: ds.theta,
            requested: theta,
        });
    }
    let lower = positive_kernel(ds, Complex64::from_polar(1.0, theta))?;
    let upper: Vec<Complex64> = lower.iter().map(|z| z.conj()).collect();
    Ok(FarFieldMatrix {
        entries: from_triangles(ds.grid.len(), &lower, &upper),
        grid: ds.grid,
        weight: ds.grid.step(),
        kind: OperatorKind::Backscatter { theta },
    })
}

/// Operator from sound-soft wall reflection data.
pub fn assemble_block(ds: &DataSet) -> Result<FarFieldMatrix> {
    if !ds.doubled {
        return Err(Error::Unsupported(
            "assemble_block needs reflection data".into(),
        ));
    }
    check_difference(ds)?;
    let lower = positive_kernel(ds, Complex64::new(1.0, 0.0))?;
    let upper: Vec<Complex64> = lower.iter().map(|z| z.conj()).collect();
    Ok(FarFieldMatrix {
        entries: from_triangles(ds.grid.len(), &lower, &upper),
        grid: ds.grid,
        weight: ds.grid.step(),
        kind: OperatorKind::Block,
    })
}

/// Two-sided operator; `left` is measured at `(x*_1, x*_perp)` with `x*_1 < 0`,
/// `right` at `(-x*_1, x*_perp)`.
pub fn assemble_two_sided(left: &DataSet, right: &DataSet) -> Result<FarFieldMatrix> {
    if left.doubled || right.doubled {
        return Err(Error::Unsupported(
            "two-sided assembly needs source data".into(),
        ));
    }
    check_difference(left)?;
    check_difference(right)?;
    if left.grid != right.grid || left.waveguide != right.waveguide {
        return Err(Error::GridMismatch(
            "left and right datasets differ in grid or waveguide".into(),
        ));
    }
    if left.measurement.side != Side::Left || right.measurement != left.measurement.mirrored() {
        return Err(Error::InvalidMeasurement(
            "two-sided data needs x_l = (x*_1, x*_perp) on the left and x_r = (-x*_1, x*_perp)"
                .into(),
        ));
    }
    let x1 = left.measurement.point.x1;
    let lower = positive_kernel(left, Complex64::new(1.0, 0.0))?;
    let upper: Vec<Complex64> = (1..left.grid.len() as i64)
        .map(|m| {
            let mu = mu(right, m);
            Ok(-I * mu * Complex64::from_polar(1.0, 2.0 * mu * x1) * right.sample(m)?.value)
        })
        .collect::<Result<_>>()?;
    Ok(FarFieldMatrix {
        entries: from_triangles(left.grid.len(), &lower, &upper),
        grid: left.grid,
        weight: left.grid.step(),
        kind: OperatorKind::TwoSided,
    })
}

/// Operator on the shifted lattice: entry `(i, j)` is `-i mu u` at offset `i - j`.
pub fn assemble_alpha(ds: &DataSet, alpha: f64, tau: f64) -> Result<FarFieldMatrix> {
    let Lattice::Alpha { alpha: a } = ds.lattice else {
        return Err(Error::GridMismatch(
            "expected data on the shifted lattice".into(),
        ));
    };
    if a != alpha {
        return Err(Error::GridMismatch(format!(
            "dataset alpha {a}, requested {alpha}"
        )));
    }
    let n = ds.grid.len();
    let kernel: Vec<Complex64> = (-(n as i64 - 1)..n as i64)
        .map(|m| Ok(-I * mu(ds, m) * ds.sample(m)?.value))
        .collect::<Result<_>>()?;
    let off = n as i64 - 1;
    Ok(FarFieldMatrix {
        entries: toeplitz(n, |d| kernel[(d + off) as usize]),
        grid: ds.grid,
        weight: ds.grid.step(),
        kind: OperatorKind::Alpha { alpha, tau },
    })
}
