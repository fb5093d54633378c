//! Point spread function of the range probe in a Dirichlet strip of height pi,
//! frequencies `(0, sqrt 3)`.

use std::f64::consts::PI;

use wgfm::imaging::psf;
use wgfm::modal::{BoundaryKind, Point, Waveguide};
use wgfm::synth::{FrequencyGrid, GridMode};

fn main() -> wgfm::Result<()> {
    let wg = Waveguide::new(PI, BoundaryKind::Dirichlet)?;
    let grid = FrequencyGrid::full_band(&wg, 64, GridMode::Midpoint)?;
    let y = Point::new(0.0, PI / 2.0);
    let peak = psf(&wg, &grid, y.x1, y).norm();
    let n = 4001;
    let profile: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let z = -5.0 * PI + 10.0 * PI * i as f64 / (n - 1) as f64;
            (z, psf(&wg, &grid, z, y).norm() / peak)
        })
        .collect();
    let first_zero = profile
        .windows(3)
        .find(|w| w[1].0 > 0.0 && w[1].1 <= w[0].1 && w[1].1 <= w[2].1)
        .map(|w| w[1].0)
        .unwrap_or(f64::NAN);
    println!(
        "first zero at {first_zero:.4} (2 pi / sqrt 3 = {:.4})",
        2.0 * PI / 3f64.sqrt()
    );
    for &(z, v) in profile.iter().step_by(200) {
        println!(
            "{z:8.3} {:.3} {}",
            v,
            "#".repeat((v * 50.0).round() as usize)
        );
    }
    Ok(())
}
