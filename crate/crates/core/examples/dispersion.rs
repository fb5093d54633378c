//! Passbands and group wavenumbers of the first modes for each boundary kind.

use std::f64::consts::PI;

use wgfm::modal::{BoundaryKind, ModeIndex, Waveguide};

fn main() -> wgfm::Result<()> {
    for (boundary, height) in [
        (BoundaryKind::Dirichlet, PI),
        (BoundaryKind::Neumann, PI / 12.0),
        (BoundaryKind::MixedDirichletTop, PI / 12.0),
    ] {
        let wg = Waveguide::new(height, boundary)?;
        let (lo, hi) = wg.passband();
        println!(
            "{:<22} height {:.4}  single-mode band ({lo:.4}, {hi:.4})  difference band (0, {:.4})",
            boundary.name(),
            height,
            wg.band_span()
        );
    }

    let wg = Waveguide::new(PI, BoundaryKind::Dirichlet)?;
    println!("\n   k      mu_1(k)   mu_2(k)");
    for i in 0..=10 {
        let k = 1.0 + 0.1 * i as f64;
        let m2 = wg.mu_n(ModeIndex::new(2)?, k);
        println!(
            "{k:5.2}  {:9.5}  {:>8} {:?}",
            wg.mu1(k),
            format!("{:.4}", m2.value),
            m2.regime
        );
    }
    Ok(())
}
