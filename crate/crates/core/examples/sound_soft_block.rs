//! Locating a sound-soft wall that closes the waveguide, from reflected data
//! with the doubled travel phase.

use std::f64::consts::PI;

use wgfm::imaging::{
    fbsm_indicator, hermitian_sqrt, picard_indicator, scan, support_metrics, IndicatorKind, Probe,
    SamplingGrid,
};
use wgfm::mfop::assemble_block;
use wgfm::modal::{BoundaryKind, Waveguide};
use wgfm::synth::{add_noise, block_dataset, FrequencyGrid, GridMode, MeasurementConfig};

fn main() -> wgfm::Result<()> {
    let h = PI / 12.0;
    let wg = Waveguide::new(h, BoundaryKind::Neumann)?;
    let wall = -0.5;
    let x = MeasurementConfig::left(10.0, 0.37 * h)?;
    let grid = FrequencyGrid::full_band(&wg, 48, GridMode::Vertex)?;
    let ds = add_noise(&block_dataset(&wg, wall, &x, &x, &grid)?, 0.05, 0)?;
    let f = assemble_block(&ds)?;
    let es = hermitian_sqrt(&f)?;
    let sampling = SamplingGrid::new((-2.0, 2.0), h, 161, 4)?;
    let fm = scan(
        &sampling,
        IndicatorKind::Fm {
            epsilon: 0.01,
            rho: 0.01,
        },
        |z, _| picard_indicator(&es, &Probe::disc(z, 0.01, &x)?.doubled(), &grid, 0.01),
    )?;
    let fb = scan(&sampling, IndicatorKind::Fbsm, |z, _| {
        fbsm_indicator(&f, &Probe::point(z, &x).doubled())
    })?;
    for img in [&fm, &fb] {
        let m = support_metrics(img, (wall, wall), 0.5 * sampling.step1());
        println!(
            "{:<4} argmax {:+.3} (wall at {wall})  peak/background {:.1}",
            img.kind.name(),
            m.argmax_z1,
            m.ratio
        );
    }
    Ok(())
}
