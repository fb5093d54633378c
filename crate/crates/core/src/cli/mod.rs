//! Command-line front end: `synthesize`, `image`, `verify` and `psf`.
//!
//! Every command reads one JSON run configuration and writes its files plus a
//! `manifest.json` into the output directory.

pub mod config;
pub mod manifest;
pub mod pipeline;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{Resolved, RunConfig};
pub use manifest::RunManifest;

use crate::error::{Error, Result};
use crate::mfop;
use crate::synth;
use config::OutputFormat;
use pipeline::Measured;

#[derive(Debug, Parser)]
#[command(
    name = "wgfm",
    version,
    about = "Multi-frequency imaging of sources in a 2-D acoustic waveguide"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate single-mode data.
    Synthesize(CommonArgs),
    /// Assemble the operator from the datasets in the output directory (synthesizing
    /// them when absent) and write the indicator images.
    Image(CommonArgs),
    /// Run the self-checks on noise-free data; exits nonzero if one fails.
    Verify(CommonArgs),
    /// Sample the point spread function.
    Psf(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `outputs.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `noise.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Outcome of a command; `ok == false` maps to a nonzero exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub ok: bool,
    pub directory: PathBuf,
    pub summary: String,
}

struct Prepared {
    cfg: RunConfig,
    resolved: Resolved,
    text: String,
    dir: PathBuf,
}

fn prepare(args: &CommonArgs) -> Result<Prepared> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::parse(&text, &args.config.display().to_string())?;
    if let Some(seed) = args.seed {
        cfg.noise.seed = seed;
    }
    let resolved = cfg.resolve()?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| cfg.outputs.directory.clone());
    fs::create_dir_all(&dir)?;
    Ok(Prepared {
        cfg,
        resolved,
        text,
        dir,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Synthesize(a) => synthesize(a),
        Command::Image(a) => image(a),
        Command::Verify(a) => verify(a),
        Command::Psf(a) => psf(a),
    }
}

fn write_data(m: &mut RunManifest, dir: &Path, data: &Measured) -> Result<()> {
    for (name, ds) in data.datasets() {
        m.emit(dir, name, synth::io::to_csv(ds).as_bytes())?;
    }
    Ok(())
}

/// Datasets left in `dir` by an earlier `synthesize`, if all are there; they must
/// describe the same experiment as `expected`.
fn existing_data(dir: &Path, expected: &Measured) -> Result<Option<Measured>> {
    let wanted = expected.datasets();
    if !wanted.iter().all(|(name, _)| dir.join(name).is_file()) {
        return Ok(None);
    }
    let mut loaded = Vec::new();
    for (name, want) in wanted {
        let ds = synth::io::load(dir.join(name))?;
        let same = ds.waveguide == want.waveguide
            && ds.grid == want.grid
            && ds.lattice == want.lattice
            && ds.measurement == want.measurement
            && ds.receiver == want.receiver
            && ds.doubled == want.doubled
            && ds.noise == want.noise;
        if !same {
            return Err(Error::GridMismatch(format!(
                "{} does not match the configuration; rerun synthesize",
                dir.join(name).display()
            )));
        }
        loaded.push(ds);
    }
    Ok(Some(match expected {
        Measured::Single(_) => Measured::Single(loaded.remove(0)),
        Measured::TwoSided { .. } => {
            let right = loaded.pop().expect("two datasets");
            let left = loaded.pop().expect("two datasets");
            Measured::TwoSided { left, right }
        }
    }))
}

pub fn synthesize(args: &CommonArgs) -> Result<Outcome> {
    let p = prepare(args)?;
    let clean = pipeline::clean_data(&p.cfg, &p.resolved)?;
    let data = pipeline::noisy(&clean, p.cfg.noise.delta, p.cfg.noise.seed)?;
    let mut m = RunManifest::new("synthesize", &p.text, p.cfg.noise.seed);
    write_data(&mut m, &p.dir, &data)?;
    let first = data.datasets()[0].1;
    m.metric("samples", first.samples.len());
    m.metric("grid_step", first.grid.step());
    m.metric("noise_level", p.cfg.noise.delta);
    m.save(&p.dir)?;
    Ok(Outcome {
        ok: true,
        summary: format!(
            "wrote {} sample(s) per dataset to {}",
            first.samples.len(),
            p.dir.display()
        ),
        directory: p.dir,
    })
}

pub fn image(args: &CommonArgs) -> Result<Outcome> {
    let p = prepare(args)?;
    let (cfg, r) = (&p.cfg, &p.resolved);
    let clean = pipeline::clean_data(cfg, r)?;
    let expected = pipeline::noisy(&clean, cfg.noise.delta, cfg.noise.seed)?;
    let data = existing_data(&p.dir, &expected)?.unwrap_or(expected);
    let kind = pipeline::operator_kind(cfg, r);
    let f = pipeline::assemble(&kind, &data)?;
    let images = pipeline::image(cfg, r, &f)?;

    let mut m = RunManifest::new("image", &p.text, cfg.noise.seed);
    write_data(&mut m, &p.dir, &data)?;
    m.emit(&p.dir, "operator.csv", mfop::io::to_csv(&f).as_bytes())?;
    let mut metrics = String::new();
    let truth = r.truth();
    let _ = writeln!(metrics, "operator={}", kind.name());
    let _ = writeln!(metrics, "truth_lo={:?}\ntruth_hi={:?}", truth.0, truth.1);
    for (img, sm) in images.fields.iter().zip(&images.metrics) {
        let name = img.kind.name();
        for fmt in &cfg.outputs.formats {
            match fmt {
                OutputFormat::Csv => {
                    m.emit(&p.dir, &format!("{name}.csv"), img.to_csv().as_bytes())?
                }
                OutputFormat::Pgm => m.emit(&p.dir, &format!("{name}.pgm"), &img.to_pgm())?,
            }
        }
        metrics.push_str(&sm.to_text(&format!("{name}.")));
        m.metric(format!("{name}.argmax_z1"), sm.argmax_z1);
        m.metric(
            format!("{name}.ratio"),
            if sm.ratio.is_finite() {
                sm.ratio
            } else {
                f64::MAX
            },
        );
        m.metric(format!("{name}.jaccard"), sm.jaccard);
    }
    let top = images.spectrum.first().copied().unwrap_or(0.0);
    let kept = images
        .spectrum
        .iter()
        .filter(|&&a| a > 0.0 && a >= cfg.imaging.rho * top)
        .count();
    let _ = writeln!(metrics, "fm.retained={kept}");
    m.metric("fm.retained", kept);
    m.emit(&p.dir, "metrics.txt", metrics.as_bytes())?;
    m.save(&p.dir)?;
    Ok(Outcome {
        ok: true,
        summary: metrics,
        directory: p.dir,
    })
}

pub fn verify(args: &CommonArgs) -> Result<Outcome> {
    let p = prepare(args)?;
    let checks = pipeline::verify(&p.cfg, &p.resolved)?;
    let mut report = String::new();
    for c in &checks {
        let _ = writeln!(report, "{}", c.line());
    }
    let ok = checks.iter().all(|c| c.passed());
    let _ = writeln!(report, "overall {}", if ok { "PASS" } else { "FAIL" });
    let mut m = RunManifest::new("verify", &p.text, p.cfg.noise.seed);
    m.emit(&p.dir, "verify.txt", report.as_bytes())?;
    for c in &checks {
        m.metric(c.name, c.value);
    }
    m.metric("passed", ok);
    m.save(&p.dir)?;
    Ok(Outcome {
        ok,
        summary: report,
        directory: p.dir,
    })
}

pub fn psf(args: &CommonArgs) -> Result<Outcome> {
    let p = prepare(args)?;
    let (grid, rows) = pipeline::psf_profile(&p.cfg, &p.resolved)?;
    let peak = rows.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let mut csv = String::from("z1,re,im,abs,normalized\n");
    for (z, v) in &rows {
        let _ = writeln!(
            csv,
            "{z:?},{:?},{:?},{:?},{:?}",
            v.re,
            v.im,
            v.norm(),
            v.norm() / peak
        );
    }
    let first_zero = 2.0 * std::f64::consts::PI / (grid.k_plus() - grid.k_minus());
    let mut m = RunManifest::new("psf", &p.text, p.cfg.noise.seed);
    m.emit(&p.dir, "psf.csv", csv.as_bytes())?;
    m.metric("peak", peak);
    m.metric("first_zero", first_zero);
    m.save(&p.dir)?;
    Ok(Outcome {
        ok: true,
        summary: format!("peak={peak:?}\nfirst_zero={first_zero:?}\n"),
        directory: p.dir,
    })
}
