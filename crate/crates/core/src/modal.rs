//! Closed-form mode eigensystem of a 2-D strip waveguide `(-inf, inf) x (0, h)`.
//!
//! The cross-section is an interval, so every eigenpair `(psi_n, lambda_n^2)`
//! of the transverse Laplacian is known analytically. From those we get the
//! group wavenumber `mu_n(k) = sqrt(k^2 - lambda_n^2)`, the single-mode band
//! `(lambda_1, lambda_2)`, the propagating part of the Green function, and a
//! bound on the evanescent remainder that decides how far away a measurement
//! has to be for the propagating part to describe the field.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition on the two walls of the strip.
///
/// The mixed variants are Dirichlet on the named wall and Neumann on the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
    MixedDirichletTop,
    MixedDirichletBottom,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
            BoundaryKind::MixedDirichletTop => "mixed_dirichlet_top",
            BoundaryKind::MixedDirichletBottom => "mixed_dirichlet_bottom",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "neumann" => Ok(BoundaryKind::Neumann),
            "mixed_dirichlet_top" => Ok(BoundaryKind::MixedDirichletTop),
            "mixed_dirichlet_bottom" => Ok(BoundaryKind::MixedDirichletBottom),
            other => Err(Error::Parse(format!("unknown boundary kind '{other}'"))),
        }
    }
}

/// A point `(x1, x_perp)`: range coordinate along the axis, then cross-section coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub xperp: f64,
}

impl Point {
    pub const fn new(x1: f64, xperp: f64) -> Self {
        Self { x1, xperp }
    }
}

/// Mode number, starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(usize);

impl ModeIndex {
    pub const FIRST: ModeIndex = ModeIndex(1);

    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidWaveguide("mode index starts at 1".into()));
        }
        Ok(ModeIndex(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Propagating,
    Evanescent,
    Cutoff,
}

/// `mu_n(k)` on the branch with nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupWavenumber {
    pub value: Complex64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveguide {
    height: f64,
    boundary: BoundaryKind,
}

impl Waveguide {
    pub fn new(height: f64, boundary: BoundaryKind) -> Result<Self> {
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::InvalidWaveguide(format!(
                "height must be positive and finite, got {height}"
            )));
        }
        Ok(Self { height, boundary })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    /// Transverse eigenvalue `lambda_n` (square root of the eigenvalue of `-d^2/dx_perp^2`).
    pub fn lambda_n(&self, n: ModeIndex) -> f64 {
        let n = n.get() as f64;
        let scale = PI / self.height;
        match self.boundary {
            BoundaryKind::Dirichlet => n * scale,
            BoundaryKind::Neumann => (n - 1.0) * scale,
            BoundaryKind::MixedDirichletTop | BoundaryKind::MixedDirichletBottom => {
                (n - 0.5) * scale
            }
        }
    }

    /// L2-normalized real eigenfunction, nonnegative on the cross-section for `n = 1`.
    pub fn psi_n(&self, n: ModeIndex, xperp: f64) -> Result<f64> {
        if !(0.0..=self.height).contains(&xperp) {
            return Err(Error::CrossSectionOutOfRange {
                xperp,
                height: self.height,
            });
        }
        Ok(self.psi_n_unchecked(n, xperp))
    }

    pub(crate) fn psi_n_unchecked(&self, n: ModeIndex, xperp: f64) -> f64 {
        let h = self.height;
        let amp = (2.0 / h).sqrt();
        let arg = self.lambda_n(n) * xperp;
        match self.boundary {
            BoundaryKind::Dirichlet => amp * arg.sin(),
            BoundaryKind::Neumann if n.get() == 1 => (1.0 / h).sqrt(),
            BoundaryKind::Neumann => amp * arg.cos(),
            BoundaryKind::MixedDirichletTop => amp * arg.cos(),
            BoundaryKind::MixedDirichletBottom => amp * arg.sin(),
        }
    }

    /// First mode shorthand; clamps to the closed cross-section.
    pub fn psi1(&self, xperp: f64) -> f64 {
        self.psi_n_unchecked(ModeIndex::FIRST, xperp.clamp(0.0, self.height))
    }

    /// `int_c^d psi_1(t) dt`
    pub fn psi1_integral(&self, c: f64, d: f64) -> f64 {
        let l = self.lambda1();
        let amp = (2.0 / self.height).sqrt();
        match self.boundary {
            BoundaryKind::Neumann => (d - c) / self.height.sqrt(),
            BoundaryKind::Dirichlet | BoundaryKind::MixedDirichletBottom => {
                amp * ((l * c).cos() - (l * d).cos()) / l
            }
            BoundaryKind::MixedDirichletTop => amp * ((l * d).sin() - (l * c).sin()) / l,
        }
    }

    /// Sup norm squared of `psi_n` over the cross-section.
    pub fn psi_n_sup_sq(&self, n: ModeIndex) -> f64 {
        match (self.boundary, n.get()) {
            (BoundaryKind::Neumann, 1) => 1.0 / self.height,
            _ => 2.0 / self.height,
        }
    }

    pub fn mu_n(&self, n: ModeIndex, k: f64) -> GroupWavenumber {
        group_wavenumber(k, self.lambda_n(n))
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda_n(ModeIndex(1))
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda_n(ModeIndex(2))
    }

    /// Open single-mode band `(lambda_1, lambda_2)`.
    pub fn passband(&self) -> (f64, f64) {
        (self.lambda1(), self.lambda2())
    }

    /// `sqrt(lambda_2^2 - lambda_1^2)`, the widest admissible frequency-difference interval.
    pub fn band_span(&self) -> f64 {
        let (l1, l2) = self.passband();
        (l2 * l2 - l1 * l1).sqrt()
    }

    pub fn in_passband(&self, k: f64) -> bool {
        let (lo, hi) = self.passband();
        k > lo && k < hi
    }

    pub fn check_passband(&self, k: f64) -> Result<()> {
        if self.in_passband(k) {
            Ok(())
        } else {
            let (lo, hi) = self.passband();
            Err(Error::OutsidePassband { k, lo, hi })
        }
    }

    /// Real `mu_1(k)` for `k` inside the passband.
    pub fn mu1(&self, k: f64) -> f64 {
        let l1 = self.lambda1();
        ((k - l1) * (k + l1)).max(0.0).sqrt()
    }

    /// Propagating (mode 1) part of the Green function.
    pub fn green_p(&self, x: Point, y: Point, k: f64) -> Result<Complex64> {
        self.check_passband(k)?;
        let mu = self.mu1(k);
        let amp = self.psi1(x.xperp) * self.psi1(y.xperp) / (2.0 * mu);
        let phase = mu * (x.x1 - y.x1).abs();
        Ok(Complex64::new(0.0, amp) * Complex64::from_polar(1.0, phase))
    }

    /// Upper bound on the evanescent remainder `sum_{n>=2} |G_n|` at range separation `sep`.
    ///
    /// Modes `2..=n_terms+1` are summed explicitly; the rest is bounded by a
    /// geometric series, since `|mu_n|` grows by at least `pi/h` per mode.
    pub fn green_tail_bound(&self, sep: f64, k: f64, n_terms: usize) -> f64 {
        if k >= self.lambda2() {
            return f64::INFINITY;
        }
        let sep = sep.abs();
        let term = |n: usize| {
            let n = ModeIndex(n);
            let decay = self.mu_n(n, k).value.im;
            self.psi_n_sup_sq(n) / (2.0 * decay) * (-decay * sep).exp()
        };
        let explicit: f64 = (2..2 + n_terms).map(term).sum();
        let ratio = (-PI * sep / self.height).exp();
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        explicit + term(2 + n_terms) / (1.0 - ratio)
    }

    /// Smallest range separation at which `green_tail_bound` drops to `tol` for every
    /// wavenumber up to `k_max`.
    pub fn far_field_separation(&self, k_max: f64, tol: f64) -> f64 {
        // The bound grows with k, so the worst case is k_max.
        let f = |s: f64| self.green_tail_bound(s, k_max, 8);
        let mut hi = self.height;
        while f(hi) > tol {
            hi *= 2.0;
            if hi > 1e9 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

pub(crate) fn group_wavenumber(k: f64, lambda: f64) -> GroupWavenumber {
    let d = (k - lambda) * (k + lambda);
    if d > 0.0 {
        GroupWavenumber {
            value: Complex64::new(d.sqrt(), 0.0),
            regime: Regime::Propagating,
        }
    } else if d < 0.0 {
        GroupWavenumber {
            value: Complex64::new(0.0, (-d).sqrt()),
            regime: Regime::Evanescent,
        }
    } else {
        GroupWavenumber {
            value: Complex64::new(0.0, 0.0),
            regime: Regime::Cutoff,
        }
    }
}
