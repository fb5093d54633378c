//! Discrete factors `S`, `T` of the operators and the factorization residual.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{FarFieldMatrix, OperatorKind};
use crate::error::{Error, Result};
use crate::modal::{Point, Waveguide};
use crate::synth::{FrequencyGrid, MeasurementConfig, QuadratureRule, Side, SourceSpec};

/// `S` is `Q x N` with `S[q][i] = sqrt(psi_1(y_perp)) e^{-i sigma_i |y_1 - x*_1|}`;
/// `T` is the diagonal of the middle factor, one value per quadrature node.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFactors {
    pub s: DMatrix<Complex64>,
    pub t: Vec<Complex64>,
    pub w_d: Vec<f64>,
    pub w_sigma: f64,
    pub nodes: Vec<Point>,
    pub grid: FrequencyGrid,
}

impl DiscreteFactors {
    /// `S^H diag(w_D T) S`
    pub fn gram(&self) -> DMatrix<Complex64> {
        let mut scaled = self.s.clone();
        for (q, mut row) in scaled.row_iter_mut().enumerate() {
            row *= self.t[q] * self.w_d[q];
        }
        self.s.ad_mul(&scaled)
    }

    /// `(S v)(y_q)` with the frequency weight applied.
    pub fn apply_s(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        (&self.s * v) * Complex64::new(self.w_sigma, 0.0)
    }

    /// `sum_q w_q |(S v)(y_q)|^2`
    pub fn s_norm_sq(&self, v: &DVector<Complex64>) -> f64 {
        self.apply_s(v)
            .iter()
            .zip(&self.w_d)
            .map(|(z, w)| w * z.norm_sqr())
            .sum()
    }

    pub fn min_abs_t(&self) -> f64 {
        self.t
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_t(&self) -> f64 {
        self.t.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `min_q Re(e^{i tau} T_q)`
    pub fn min_real_rotated(&self, tau: f64) -> f64 {
        let r = Complex64::from_polar(1.0, tau);
        self.t
            .iter()
            .map(|z| (r * z).re)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn discrete_factors(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    grid: &FrequencyGrid,
    quad: &QuadratureRule,
    kind: &OperatorKind,
) -> Result<DiscreteFactors> {
    src.validate_for(wg)?;
    x.validate_for(wg)?;
    let (lo, hi) = src.range_support();
    x.separation_from(lo, hi)?;
    let nodes = src.quadrature_nodes(quad);
    if nodes.is_empty() {
        return Err(Error::InvalidQuadrature(
            "no quadrature node falls inside the source".into(),
        ));
    }
    let psi_x = wg.psi1(x.point.xperp);
    let dist = |y: Point| (y.x1 - x.point.x1).abs();
    let t: Vec<Complex64> = match *kind {
        OperatorKind::Backscatter { theta } => {
            let rot = Complex64::from_polar(psi_x / 2.0, theta);
            nodes.iter().map(|n| rot * n.amplitude).collect()
        }
        OperatorKind::TwoSided => {
            if x.side != Side::Left {
                return Err(Error::InvalidMeasurement(
                    "two-sided factors are built from the left point".into(),
                ));
            }
            nodes.iter().map(|n| n.amplitude * (psi_x / 2.0)).collect()
        }
        OperatorKind::Alpha { alpha, .. } => {
            let kappa = wg.band_span() / alpha;
            nodes
                .iter()
                .map(|n| Complex64::from_polar(psi_x / 2.0, kappa * dist(n.y)) * n.amplitude)
                .collect()
        }
        OperatorKind::Block => {
            return Err(Error::Unsupported(
                "the wall reflection model has no volume factorization".into(),
            ));
        }
    };
    let sigmas = grid.sigmas();
    let s = DMatrix::from_fn(nodes.len(), sigmas.len(), |q, i| {
        let y = nodes[q].y;
        Complex64::from_polar(wg.psi1(y.xperp).sqrt(), -sigmas[i] * dist(y))
    });
    Ok(DiscreteFactors {
        s,
        t,
        w_d: nodes.iter().map(|n| n.weight).collect(),
        w_sigma: grid.step(),
        nodes: nodes.iter().map(|n| n.y).collect(),
        grid: *grid,
    })
}

/// Smallest `alpha` among `candidates` (in the given order) for which
/// `Re(e^{i tau} T_alpha)` is positive at every quadrature node.
pub fn alpha_sweep(
    wg: &Waveguide,
    src: &SourceSpec,
    x: &MeasurementConfig,
    quad: &QuadratureRule,
    tau: f64,
    candidates: impl IntoIterator<Item = f64>,
) -> Result<Option<f64>> {
    for alpha in candidates {
        crate::synth::check_alpha(alpha)?;
        let grid = FrequencyGrid::alpha_band(wg, alpha, 2, crate::synth::GridMode::Midpoint)?;
        let fac = discrete_factors(wg, src, x, &grid, quad, &OperatorKind::Alpha { alpha, tau })?;
        if fac.min_real_rotated(tau) > 0.0 {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

/// `||F - S^H diag(w_D T) S||_F / ||F||_F`; both sides carry the same frequency weight.
pub fn verify_factorization(f: &FarFieldMatrix, fac: &DiscreteFactors) -> Result<f64> {
    if fac.s.ncols() != f.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {n}x{n}, factors have {} columns",
            fac.s.ncols(),
            n = f.len()
        )));
    }
    if fac.grid != f.grid {
        return Err(Error::GridMismatch(
            "factors and operator use different grids".into(),
        ));
    }
    let norm = f.entries.norm();
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok((&f.entries - fac.gram()).norm() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfop::{assemble_alpha, assemble_backscatter, assemble_two_sided};
    use crate::modal::BoundaryKind;
    use crate::synth::*;
    use std::f64::consts::PI;

    const H: f64 = PI / 12.0;

    fn setup(
        theta: f64,
        f0: Complex64,
    ) -> (Waveguide, SourceSpec, MeasurementConfig, FrequencyGrid) {
        let wg = Waveguide::new(H, BoundaryKind::Neumann).unwrap();
        let s = Shape::rectangle((-0.5, 0.5), (0.2 * H, 0.7 * H)).unwrap();
        let src = SourceSpec::new(vec![Region::new(s, f0)], theta).unwrap();
        let x = MeasurementConfig::left(8.0, 0.3 * H).unwrap();
        let grid = FrequencyGrid::full_band(&wg, 48, GridMode::Vertex).unwrap();
        (wg, src, x, grid)
    }

    #[test]
    fn factor_entries() {
        let (wg, src, x, grid) = setup(0.0, Complex64::new(1.0, 0.0));
        let q = QuadratureRule::new(H / 10.0).unwrap();
        let fac = discrete_factors(
            &wg,
            &src,
            &x,
            &grid,
            &q,
            &OperatorKind::Backscatter { theta: 0.0 },
        )
        .unwrap();
        let adj = fac.s.adjoint();
        assert_eq!(adj[(3, 7)], fac.s[(7, 3)].conj());
        let want = wg.psi1(0.3 * H) / 2.0;
        for t in &fac.t {
            assert!((t - want).norm() < 1e-15);
        }
        assert!((fac.min_abs_t() - want).abs() < 1e-15);
        let g = fac.gram();
        let defect = (&g - g.adjoint()).norm();
        assert!(defect < 1e-13 * g.norm());
        assert!(discrete_factors(&wg, &src, &x, &grid, &q, &OperatorKind::Block).is_err());
    }

    #[test]
    fn backscatter_factorization_converges() {
        let theta = PI / 2.0;
        let (wg, src, x, grid) = setup(theta, Complex64::new(0.0, -1.0));
        let ds = synthesize_dataset(&wg, &src, &x, &grid, &ForwardModel::Exact).unwrap();
        let f = assemble_backscatter(&ds, theta).unwrap();
        let kind = OperatorKind::Backscatter { theta };
        let res = |cell: f64| {
            let q = QuadratureRule::new(cell).unwrap();
            verify_factorization(
                &f,
                &discrete_factors(&wg, &src, &x, &grid, &q, &kind).unwrap(),
            )
            .unwrap()
        };
        let (r1, r2) = (res(H / 10.0), res(H / 20.0));
        assert!(r1 < 2e-2 && r2 < r1 / 3.5, "{r1} {r2}");
        let q = QuadratureRule::new(H / 20.0).unwrap();
        let off = OperatorKind::Backscatter { theta: theta + 1.0 };
        let bad = verify_factorization(
            &f,
            &discrete_factors(&wg, &src, &x, &grid, &q, &off).unwrap(),
        )
        .unwrap();
        assert!(bad > 0.5, "{bad}");
    }

    #[test]
    fn two_sided_and_alpha_factorizations() {
        let (wg, src, x, grid) = setup(0.0, Complex64::new(1.0, 0.0));
        let q = QuadratureRule::new(H / 20.0).unwrap();
        let left = synthesize_dataset(&wg, &src, &x, &grid, &ForwardModel::Exact).unwrap();
        let right =
            synthesize_dataset(&wg, &src, &x.mirrored(), &grid, &ForwardModel::Exact).unwrap();
        let f2 = assemble_two_sided(&left, &right).unwrap();
        let fac2 = discrete_factors(&wg, &src, &x, &grid, &q, &OperatorKind::TwoSided).unwrap();
        assert!(verify_factorization(&f2, &fac2).unwrap() < 2e-2);

        let alpha = 4.0;
        let ag = FrequencyGrid::alpha_band(&wg, alpha, 24, GridMode::Midpoint).unwrap();
        let ds = synthesize_alpha_dataset(&wg, &src, &x, &ag, alpha, &ForwardModel::Exact).unwrap();
        let kind = OperatorKind::Alpha { alpha, tau: 0.3 };
        let fa = assemble_alpha(&ds, alpha, 0.3).unwrap();
        let faca = discrete_factors(&wg, &src, &x, &ag, &q, &kind).unwrap();
        assert!(verify_factorization(&fa, &faca).unwrap() < 2e-2);
        // Hermitian parts agree as well
        let rot = Complex64::from_polar(1.0, 0.3);
        let mut re_t = faca.clone();
        re_t.t = faca
            .t
            .iter()
            .map(|z| Complex64::new((rot * z).re, 0.0))
            .collect();
        let sharp = fa.weighted_hermitian_part().map(|z| z / fa.weight);
        let err = (&sharp - re_t.gram()).norm() / sharp.norm();
        assert!(err < 2e-2, "{err}");
        assert!(verify_factorization(&fa, &fac2).is_err());
    }

    #[test]
    fn sweep_finds_coercive_alpha() {
        let (wg, src, x, _) = setup(0.0, Complex64::new(1.0, 0.0));
        let q = QuadratureRule::new(H / 20.0).unwrap();
        let min_re = |alpha: f64| {
            let g = FrequencyGrid::alpha_band(&wg, alpha, 2, GridMode::Midpoint).unwrap();
            let k = OperatorKind::Alpha { alpha, tau: 0.0 };
            discrete_factors(&wg, &src, &x, &g, &q, &k)
                .unwrap()
                .min_real_rotated(0.0)
        };
        let a = alpha_sweep(&wg, &src, &x, &q, 0.0, (2..200).map(f64::from))
            .unwrap()
            .unwrap();
        assert!(min_re(a) > 0.0);
        assert!((2..a as i32).all(|b| min_re(f64::from(b)) <= 0.0));
        // beyond kappa * 8.5 < pi / 2 positivity holds for every alpha
        let bound = (12.0 * 8.5 * 2.0 / PI).ceil();
        assert!((0..20).all(|k| min_re(bound + f64::from(k)) > 0.0));
        assert_eq!(
            alpha_sweep(&wg, &src, &x, &q, 0.0, [2.0, 3.0]).unwrap(),
            None
        );
        assert!(alpha_sweep(&wg, &src, &x, &q, 0.0, [1.0]).is_err());
    }
}
