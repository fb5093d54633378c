//! The steps behind each command, usable without touching the file system.

use num_complex::Complex64;

use super::config::{IndicatorName, Resolved, RunConfig};
use crate::error::{Error, Result};
use crate::imaging::{
    fbsm_indicator, hermitian_eigen, hermitian_sqrt, picard_indicator, psf, scan, support_metrics,
    ImageField, IndicatorKind, Probe, SamplingGrid, SupportMetrics,
};
use crate::mfop::{
    assemble_alpha, assemble_backscatter, assemble_block, assemble_two_sided, discrete_factors,
    verify_factorization, FarFieldMatrix, OperatorKind,
};
use crate::modal::Point;
use crate::synth::{
    add_noise, block_dataset, omega, omega_alpha, synthesize_alpha_dataset, synthesize_dataset,
    DataSet, ForwardModel, FrequencyGrid, Lattice,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Measured {
    Single(DataSet),
    TwoSided { left: DataSet, right: DataSet },
}

impl Measured {
    pub fn datasets(&self) -> Vec<(&'static str, &DataSet)> {
        match self {
            Measured::Single(d) => vec![("data.csv", d)],
            Measured::TwoSided { left, right } => {
                vec![("data_left.csv", left), ("data_right.csv", right)]
            }
        }
    }
}

fn forward_model(r: &Resolved) -> ForwardModel {
    if r.exact {
        ForwardModel::Exact
    } else {
        ForwardModel::Quadrature(r.quadrature)
    }
}

/// Noise-free data for the configured experiment.
pub fn clean_data(cfg: &RunConfig, r: &Resolved) -> Result<Measured> {
    let model = forward_model(r);
    let wg = &r.waveguide;
    if let Some(b) = r.block_x1 {
        return Ok(Measured::Single(block_dataset(
            wg,
            b,
            &r.measurement,
            &r.receiver,
            &r.grid,
        )?));
    }
    let src = r.source.as_ref().expect("regions source");
    if let Some(alpha) = cfg.grid.alpha {
        return Ok(Measured::Single(synthesize_alpha_dataset(
            wg,
            src,
            &r.measurement,
            &r.grid,
            alpha,
            &model,
        )?));
    }
    let left = synthesize_dataset(wg, src, &r.measurement, &r.grid, &model)?;
    if cfg.measurement.two_sided {
        let right = synthesize_dataset(wg, src, &r.measurement.mirrored(), &r.grid, &model)?;
        return Ok(Measured::TwoSided { left, right });
    }
    Ok(Measured::Single(left))
}

/// Data with the configured noise; the right-hand set of a two-sided run uses `seed + 1`.
pub fn noisy(clean: &Measured, delta: f64, seed: u64) -> Result<Measured> {
    Ok(match clean {
        Measured::Single(d) => Measured::Single(add_noise(d, delta, seed)?),
        Measured::TwoSided { left, right } => Measured::TwoSided {
            left: add_noise(left, delta, seed)?,
            right: add_noise(right, delta, seed.wrapping_add(1))?,
        },
    })
}

pub fn operator_kind(cfg: &RunConfig, r: &Resolved) -> OperatorKind {
    if r.is_block() {
        OperatorKind::Block
    } else if let Some(alpha) = cfg.grid.alpha {
        OperatorKind::Alpha {
            alpha,
            tau: cfg.grid.tau,
        }
    } else if cfg.measurement.two_sided {
        OperatorKind::TwoSided
    } else {
        OperatorKind::Backscatter {
            theta: r.source.as_ref().map_or(0.0, |s| s.theta()),
        }
    }
}

pub fn assemble(kind: &OperatorKind, data: &Measured) -> Result<FarFieldMatrix> {
    match (kind, data) {
        (OperatorKind::Backscatter { theta }, Measured::Single(d)) => {
            assemble_backscatter(d, *theta)
        }
        (OperatorKind::Block, Measured::Single(d)) => assemble_block(d),
        (OperatorKind::Alpha { alpha, tau }, Measured::Single(d)) => {
            assemble_alpha(d, *alpha, *tau)
        }
        (OperatorKind::TwoSided, Measured::TwoSided { left, right }) => {
            assemble_two_sided(left, right)
        }
        (k, _) => Err(Error::Unsupported(format!(
            "data layout does not match the {} operator",
            k.name()
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct Images {
    pub fields: Vec<ImageField>,
    pub metrics: Vec<SupportMetrics>,
    /// Largest retained to smallest positive root eigenvalue.
    pub spectrum: Vec<f64>,
}

/// Both indicator images of `f` over the configured sampling rectangle.
pub fn image(cfg: &RunConfig, r: &Resolved, f: &FarFieldMatrix) -> Result<Images> {
    let im = &cfg.imaging;
    let grid = SamplingGrid::new(
        (im.z1_range[0], im.z1_range[1]),
        r.waveguide.height(),
        im.n1,
        im.nperp,
    )?;
    let doubled = im.doubled.unwrap_or(r.is_block());
    let reference = if r.is_block() {
        0.5 * (r.measurement.point.x1 + r.receiver.point.x1)
    } else {
        r.measurement.point.x1
    };
    let shape = |p: Probe| {
        let p = p.with_reference(reference);
        if doubled {
            p.doubled()
        } else {
            p
        }
    };
    let es = hermitian_sqrt(f)?;
    let truth = r.truth();
    let tol = 0.5 * grid.step1();
    let mut fields = Vec::new();
    for which in &im.indicators {
        let field = match which {
            IndicatorName::Fm => {
                let kind = IndicatorKind::Fm {
                    epsilon: im.epsilon,
                    rho: im.rho,
                };
                scan(&grid, kind, |z1, _| {
                    let p = shape(Probe::disc(z1, im.epsilon, &r.measurement)?);
                    picard_indicator(&es, &p, &f.grid, im.rho)
                })?
            }
            IndicatorName::Fbsm => scan(&grid, IndicatorKind::Fbsm, |z1, _| {
                fbsm_indicator(f, &shape(Probe::point(z1, &r.measurement)))
            })?,
        };
        fields.push(field);
    }
    let metrics = fields
        .iter()
        .map(|img| support_metrics(img, truth, tol))
        .collect();
    Ok(Images {
        fields,
        metrics,
        spectrum: es.values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
    /// `false` for checks that must exceed `tol`.
    pub below: bool,
    pub note: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.below {
            self.value <= self.tol
        } else {
            self.value > self.tol
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} value={:e} tol={:e} {} {}{}",
            self.name,
            self.value,
            self.tol,
            if self.below { "<=" } else { ">" },
            if self.passed() { "PASS" } else { "FAIL" },
            if self.note.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.note)
            }
        )
    }
}

/// Largest relative gap between the lattice wavenumbers and the pairwise ones they stand for.
fn lattice_gap(cfg: &RunConfig, r: &Resolved, lattice: Lattice) -> Result<f64> {
    let wg = &r.waveguide;
    let s = r.grid.sigmas();
    let mut worst = 0.0f64;
    for (i, si) in s.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let m = i as i64 - j as i64;
            let pair = match cfg.grid.alpha {
                Some(alpha) => omega_alpha(wg.lambda1(), wg.lambda2(), alpha, *si, *sj)?,
                None if m > 0 => omega(wg.lambda1(), *si, *sj),
                None => continue,
            };
            let lat = lattice.omega(wg, &r.grid, m);
            worst = worst.max((pair - lat).abs() / lat);
        }
    }
    Ok(worst)
}

/// Self-checks of one configuration on its noise-free data.
pub fn verify(cfg: &RunConfig, r: &Resolved) -> Result<Vec<Check>> {
    let tols = &cfg.verify;
    let clean = clean_data(cfg, r)?;
    let first = clean.datasets()[0].1.clone();
    let wg = &r.waveguide;
    let mut checks = Vec::new();

    let dispersion = first
        .samples
        .iter()
        .map(|s| {
            let want = first.lattice.mu(wg, &r.grid, s.m);
            (wg.mu1(s.omega) - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "dispersion",
        value: dispersion,
        tol: tols.dispersion_tol,
        below: true,
        note: String::new(),
    });
    checks.push(Check {
        name: if cfg.grid.alpha.is_some() {
            "alpha_linearization"
        } else {
            "difference_lattice"
        },
        value: lattice_gap(cfg, r, first.lattice)?,
        tol: tols.dispersion_tol,
        below: true,
        note: String::new(),
    });

    let kind = operator_kind(cfg, r);
    let f = assemble(&kind, &clean)?;
    if matches!(kind, OperatorKind::Backscatter { .. } | OperatorKind::Block) {
        let scale = f.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        checks.push(Check {
            name: "hermiticity",
            value: f.hermiticity_defect() / scale,
            tol: tols.hermiticity_tol,
            below: true,
            note: String::new(),
        });
    }

    let es = hermitian_eigen(&f.weighted_hermitian_part())?;
    checks.push(Check {
        name: "eigen_residual",
        value: es
            .residual(&f.weighted_hermitian_part())
            .max(es.orthonormality_defect()),
        tol: tols.eigen_tol,
        below: true,
        note: String::new(),
    });

    if let Some(src) = &r.source {
        let mut fac = discrete_factors(wg, src, &r.measurement, &r.grid, &r.quadrature, &kind)?;
        let rot = Complex64::from_polar(1.0, tols.theta_offset);
        for t in &mut fac.t {
            *t *= rot;
        }
        let residual = verify_factorization(&f, &fac)?;
        checks.push(Check {
            name: "factorization",
            value: residual,
            tol: tols.factorization_tol,
            below: true,
            note: if tols.theta_offset != 0.0 {
                format!("phase offset {}", tols.theta_offset)
            } else {
                String::new()
            },
        });
        if let OperatorKind::Alpha { tau, .. } = kind {
            checks.push(Check {
                name: "alpha_coercivity",
                value: fac.min_real_rotated(tau),
                tol: 0.0,
                below: false,
                note: "min Re(e^{i tau} T)".into(),
            });
        }
    }

    let y = Point::new(0.0, 0.5 * wg.height());
    let psf_err = [-7.0, -2.5, -0.3, 0.0, 0.4, 3.0, 11.0]
        .iter()
        .map(|&z| {
            (psf(wg, &r.grid, z, y) - psf_by_quadrature(wg.psi1(y.xperp), &r.grid, z - y.x1)).norm()
        })
        .fold(0.0, f64::max)
        / (wg.psi1(y.xperp).sqrt() * (r.grid.k_plus() - r.grid.k_minus()));
    checks.push(Check {
        name: "psf_closed_form",
        value: psf_err,
        tol: tols.psf_tol,
        below: true,
        note: String::new(),
    });
    Ok(checks)
}

/// Composite Simpson rule for `sqrt(psi) int e^{i sigma t} d sigma` over the grid's band.
fn psf_by_quadrature(psi: f64, grid: &FrequencyGrid, t: f64) -> Complex64 {
    let n = 4000;
    let (a, b) = (grid.k_minus(), grid.k_plus());
    let h = (b - a) / n as f64;
    let sum: Complex64 = (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            Complex64::from_polar(w, (a + i as f64 * h) * t)
        })
        .sum();
    sum * (psi.sqrt() * h / 3.0)
}

/// `(z_1, psf)` samples over the configured range.
pub fn psf_profile(
    cfg: &RunConfig,
    r: &Resolved,
) -> Result<(FrequencyGrid, Vec<(f64, Complex64)>)> {
    let p = &cfg.psf;
    let grid = FrequencyGrid::new(
        p.k_minus.unwrap_or(r.grid.k_minus()),
        p.k_plus.unwrap_or(r.grid.k_plus()),
        r.grid.len(),
        r.grid.mode(),
    )?;
    let y =
        p.y.map_or(Point::new(0.0, 0.5 * r.waveguide.height()), |y| {
            Point::new(y[0], y[1])
        });
    if p.points < 2 || p.z1_range[0] >= p.z1_range[1] {
        return Err(Error::Config(
            "psf needs at least 2 points over an increasing range".into(),
        ));
    }
    r.waveguide
        .psi_n(crate::modal::ModeIndex::new(1)?, y.xperp)?;
    let [lo, hi] = p.z1_range;
    let last = (p.points - 1) as f64;
    // mirror-exact samples when the range is symmetric
    let rows = (0..p.points)
        .map(|i| {
            let z = (lo * (last - i as f64) + hi * i as f64) / last;
            (z, psf(&r.waveguide, &grid, z, y))
        })
        .collect();
    Ok((grid, rows))
}
