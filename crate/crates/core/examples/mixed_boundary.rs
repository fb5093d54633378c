//! Rectangle and rhombus in a strip with one Dirichlet and one Neumann wall,
//! where the dispersion relation is not linear.

use wgfm::cli::pipeline;
use wgfm::cli::RunConfig;

fn run(text: &str, name: &str) -> wgfm::Result<()> {
    let cfg = RunConfig::parse(text, name)?;
    let r = cfg.resolve()?;
    let data = pipeline::noisy(
        &pipeline::clean_data(&cfg, &r)?,
        cfg.noise.delta,
        cfg.noise.seed,
    )?;
    let f = pipeline::assemble(&pipeline::operator_kind(&cfg, &r), &data)?;
    let images = pipeline::image(&cfg, &r, &f)?;
    let wavenumbers = data.datasets()[0].1.wavenumbers();
    println!(
        "{name}: {} wavenumbers in [{:.3}, {:.3}], truth {:?}",
        wavenumbers.len(),
        wavenumbers[0],
        wavenumbers[wavenumbers.len() - 1],
        r.truth()
    );
    for (img, m) in images.fields.iter().zip(&images.metrics) {
        println!(
            "  {:<4} argmax {:+.3}  half-max ({:+.3}, {:+.3})  jaccard {:.2}",
            img.kind.name(),
            m.argmax_z1,
            m.half_max.0,
            m.half_max.1,
            m.jaccard
        );
    }
    Ok(())
}

fn main() -> wgfm::Result<()> {
    run(
        include_str!("../presets/mixed_rectangle.json"),
        "mixed_rectangle",
    )?;
    run(
        include_str!("../presets/mixed_rhombus.json"),
        "mixed_rhombus",
    )
}
