//! L-shaped source that spans the whole cross-section over part of its range,
//! run from the shipped preset.

use wgfm::cli::pipeline;
use wgfm::cli::RunConfig;

fn main() -> wgfm::Result<()> {
    let cfg = RunConfig::parse(include_str!("../presets/lshape.json"), "lshape.json")?;
    let r = cfg.resolve()?;
    let data = pipeline::noisy(
        &pipeline::clean_data(&cfg, &r)?,
        cfg.noise.delta,
        cfg.noise.seed,
    )?;
    let f = pipeline::assemble(&pipeline::operator_kind(&cfg, &r), &data)?;
    let images = pipeline::image(&cfg, &r, &f)?;
    let (lo, hi) = r.truth();
    println!("true range support ({lo}, {hi})");
    for (img, m) in images.fields.iter().zip(&images.metrics) {
        println!("{}", img.kind.name());
        print!("{}", m.to_text("  "));
        let row = img.row(0);
        let line: String = row
            .iter()
            .step_by(2)
            .map(|v| match (v * 4.0) as u8 {
                0 => ' ',
                1 => '.',
                2 => ':',
                _ => '#',
            })
            .collect();
        println!("  |{line}|");
    }
    Ok(())
}
