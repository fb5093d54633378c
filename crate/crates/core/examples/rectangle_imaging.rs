//! Range support of a rectangular source from 47, 23 and 11 frequencies with 5% noise.

use std::f64::consts::PI;

use wgfm::imaging::{
    fbsm_indicator, hermitian_sqrt, picard_indicator, scan, support_metrics, IndicatorKind, Probe,
    SamplingGrid,
};
use wgfm::mfop::assemble_backscatter;
use wgfm::modal::{BoundaryKind, Waveguide};
use wgfm::synth::{
    add_noise, synthesize_dataset, ForwardModel, FrequencyGrid, GridMode, MeasurementConfig,
    QuadratureRule, Region, Shape, SourceSpec,
};

fn main() -> wgfm::Result<()> {
    let h = PI / 12.0;
    let wg = Waveguide::new(h, BoundaryKind::Neumann)?;
    let src = SourceSpec::new(
        vec![Region::unit(Shape::rectangle(
            (-0.5, 0.5),
            (0.2 * h, 0.7 * h),
        )?)],
        0.0,
    )?;
    let x = MeasurementConfig::left(8.0, 0.37 * h)?;
    let model = ForwardModel::Quadrature(QuadratureRule::new(h / 40.0)?);
    let sampling = SamplingGrid::new((-2.0, 2.0), h, 161, 4)?;
    let (eps, rho) = (0.01, 0.01);

    for n in [48, 24, 12] {
        let grid = FrequencyGrid::full_band(&wg, n, GridMode::Vertex)?;
        let ds = add_noise(&synthesize_dataset(&wg, &src, &x, &grid, &model)?, 0.05, 1)?;
        let f = assemble_backscatter(&ds, 0.0)?;
        let es = hermitian_sqrt(&f)?;
        let fm = scan(
            &sampling,
            IndicatorKind::Fm { epsilon: eps, rho },
            |z, _| picard_indicator(&es, &Probe::disc(z, eps, &x)?, &grid, rho),
        )?;
        let fb = scan(&sampling, IndicatorKind::Fbsm, |z, _| {
            fbsm_indicator(&f, &Probe::point(z, &x))
        })?;
        let tol = 0.5 * sampling.step1();
        let (a, b) = (
            support_metrics(&fm, (-0.5, 0.5), tol),
            support_metrics(&fb, (-0.5, 0.5), tol),
        );
        println!(
            "{:2} frequencies: FM ratio {:6.1} half-max ({:+.3}, {:+.3})  FBSM argmax {:+.3} ratio {:5.1}",
            ds.samples.len(),
            a.ratio,
            a.half_max.0,
            a.half_max.1,
            b.argmax_z1,
            b.ratio
        );
    }
    Ok(())
}
