//! Sources that only have a positive real part: measurements on both sides, or
//! one side with the shifted-lattice operator.

use std::f64::consts::PI;

use num_complex::Complex64;
use wgfm::imaging::{
    fbsm_indicator, hermitian_sqrt, picard_indicator, scan, support_metrics, IndicatorKind, Probe,
    SamplingGrid,
};
use wgfm::mfop::{alpha_sweep, assemble_alpha, assemble_two_sided, FarFieldMatrix};
use wgfm::modal::{BoundaryKind, Waveguide};
use wgfm::synth::{
    add_noise, synthesize_alpha_dataset, synthesize_dataset, ForwardModel, FrequencyGrid, GridMode,
    MeasurementConfig, QuadratureRule, Region, Shape, SourceSpec,
};

fn report(label: &str, f: &FarFieldMatrix, x: &MeasurementConfig, h: f64) -> wgfm::Result<()> {
    let es = hermitian_sqrt(f)?;
    let sampling = SamplingGrid::new((-2.0, 2.0), h, 161, 4)?;
    let fm = scan(
        &sampling,
        IndicatorKind::Fm {
            epsilon: 0.01,
            rho: 0.01,
        },
        |z, _| picard_indicator(&es, &Probe::disc(z, 0.01, x)?, &f.grid, 0.01),
    )?;
    let fb = scan(&sampling, IndicatorKind::Fbsm, |z, _| {
        fbsm_indicator(f, &Probe::point(z, x))
    })?;
    let tol = 0.5 * sampling.step1();
    let (a, b) = (
        support_metrics(&fm, (-0.5, 0.5), tol),
        support_metrics(&fb, (-0.5, 0.5), tol),
    );
    println!(
        "{label:<10} FM ratio {:5.1} half-max ({:+.3}, {:+.3})  FBSM argmax {:+.3}",
        a.ratio, a.half_max.0, a.half_max.1, b.argmax_z1
    );
    Ok(())
}

fn main() -> wgfm::Result<()> {
    let h = PI / 12.0;
    let wg = Waveguide::new(h, BoundaryKind::Neumann)?;
    let rect = Shape::rectangle((-0.5, 0.5), (0.2 * h, 0.7 * h))?;
    let src = SourceSpec::with_positive_real_part(
        vec![Region::new(rect, Complex64::new(1.0, 0.8))],
        0.0,
    )?;
    let x = MeasurementConfig::left(8.0, 0.37 * h)?;
    let rule = QuadratureRule::new(h / 40.0)?;
    let model = ForwardModel::Quadrature(rule);

    let grid = FrequencyGrid::full_band(&wg, 48, GridMode::Vertex)?;
    let left = add_noise(&synthesize_dataset(&wg, &src, &x, &grid, &model)?, 0.05, 0)?;
    let right = add_noise(
        &synthesize_dataset(&wg, &src, &x.mirrored(), &grid, &model)?,
        0.05,
        1,
    )?;
    report("two-sided", &assemble_two_sided(&left, &right)?, &x, h)?;

    let tau = 0.0;
    let Some(alpha) = alpha_sweep(&wg, &src, &x, &rule, tau, (2..=80).map(f64::from))? else {
        println!("no coercive alpha up to 80");
        return Ok(());
    };
    println!("smallest coercive alpha: {alpha}");
    let grid = FrequencyGrid::alpha_band(&wg, alpha, 24, GridMode::Vertex)?;
    let ds = add_noise(
        &synthesize_alpha_dataset(&wg, &src, &x, &grid, alpha, &model)?,
        0.05,
        0,
    )?;
    report("alpha", &assemble_alpha(&ds, alpha, tau)?, &x, h)
}
