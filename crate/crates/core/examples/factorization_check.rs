//! Residual of the discrete factorization against closed-form data as the
//! source quadrature is refined.

use std::f64::consts::PI;

use wgfm::mfop::{assemble_backscatter, discrete_factors, verify_factorization, OperatorKind};
use wgfm::modal::{BoundaryKind, Waveguide};
use wgfm::synth::{
    synthesize_dataset, ForwardModel, FrequencyGrid, GridMode, MeasurementConfig, QuadratureRule,
    Region, Shape, SourceSpec,
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
    let x = MeasurementConfig::left(8.0, 0.3 * h)?;
    let grid = FrequencyGrid::full_band(&wg, 48, GridMode::Vertex)?;
    let ds = synthesize_dataset(&wg, &src, &x, &grid, &ForwardModel::Exact)?;
    let f = assemble_backscatter(&ds, 0.0)?;
    let kind = OperatorKind::Backscatter { theta: 0.0 };

    let mut previous: Option<f64> = None;
    for div in [10.0, 20.0, 40.0, 80.0, 160.0] {
        let fac = discrete_factors(&wg, &src, &x, &grid, &QuadratureRule::new(h / div)?, &kind)?;
        let r = verify_factorization(&f, &fac)?;
        match previous {
            Some(p) => println!("cell h/{div:<4} residual {r:.3e}  reduction {:.2}", p / r),
            None => println!("cell h/{div:<4} residual {r:.3e}"),
        }
        previous = Some(r);
    }
    Ok(())
}
