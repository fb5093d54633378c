//! Indicator fields over a sampling rectangle and what can be read off them.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `n1 x nperp` points: `z_1` runs over `[z1_min, z1_max]` including both ends,
/// `z_perp` over cell midpoints of `(0, height)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    z1: (f64, f64),
    height: f64,
    n1: usize,
    nperp: usize,
}

impl SamplingGrid {
    pub fn new(z1: (f64, f64), height: f64, n1: usize, nperp: usize) -> Result<Self> {
        if !(z1.0.is_finite() && z1.1.is_finite() && z1.0 < z1.1) {
            return Err(Error::InvalidGrid(format!("bad sampling range {z1:?}")));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "bad cross-section height {height}"
            )));
        }
        if n1 < 2 || nperp < 2 {
            return Err(Error::InvalidGrid(
                "sampling grid needs at least 2 points per axis".into(),
            ));
        }
        Ok(Self {
            z1,
            height,
            n1,
            nperp,
        })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn nperp(&self) -> usize {
        self.nperp
    }

    pub fn range(&self) -> (f64, f64) {
        self.z1
    }

    pub fn step1(&self) -> f64 {
        (self.z1.1 - self.z1.0) / (self.n1 - 1) as f64
    }

    pub fn z1_at(&self, i: usize) -> f64 {
        self.z1.0 + i as f64 * self.step1()
    }

    pub fn zperp_at(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.height / self.nperp as f64
    }

    pub fn len(&self) -> usize {
        self.n1 * self.nperp
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndicatorKind {
    Fm { epsilon: f64, rho: f64 },
    Fbsm,
}

impl IndicatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            IndicatorKind::Fm { .. } => "fm",
            IndicatorKind::Fbsm => "fbsm",
        }
    }
}

/// Normalized indicator values, row-major with `z_perp` rows and `z_1` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageField {
    pub grid: SamplingGrid,
    pub values: Vec<f64>,
    pub kind: IndicatorKind,
    /// Maximum before normalization.
    pub peak: f64,
}

impl ImageField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n1 + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.grid.n1..(j + 1) * self.grid.n1]
    }

    /// Whether every `z_perp` row equals the first one bit for bit.
    pub fn rows_identical(&self) -> bool {
        let first = self.row(0);
        (1..self.grid.nperp).all(|j| self.row(j) == first)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("z1,zperp,value\n");
        for j in 0..self.grid.nperp {
            for i in 0..self.grid.n1 {
                let _ = writeln!(
                    out,
                    "{:?},{:?},{:?}",
                    self.grid.z1_at(i),
                    self.grid.zperp_at(j),
                    self.at(i, j)
                );
            }
        }
        out
    }

    /// Binary 8-bit graymap, top row at the largest `z_perp`.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (w, h) = (self.grid.n1, self.grid.nperp);
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        for j in (0..h).rev() {
            out.extend(
                self.row(j)
                    .iter()
                    .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
            );
        }
        out
    }
}

/// Evaluate `indicator(z1, zperp)` at every grid point and scale the maximum to 1.
pub fn scan<F>(grid: &SamplingGrid, kind: IndicatorKind, indicator: F) -> Result<ImageField>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let raw: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|k| indicator(grid.z1_at(k % grid.n1), grid.zperp_at(k / grid.n1)))
        .collect::<Result<_>>()?;
    if let Some(bad) = raw.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidProbe(format!("indicator produced {bad}")));
    }
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(ImageField {
        grid: *grid,
        values: raw.into_iter().map(|v| v / peak).collect(),
        kind,
        peak,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportMetrics {
    pub argmax_z1: f64,
    pub argmax_inside: bool,
    pub inside_mean: f64,
    pub outside_mean: f64,
    /// `inside_mean / outside_mean`, infinite when nothing outside is lit.
    pub ratio: f64,
    /// Cells around the peak whose value is at least half the maximum.
    pub half_max: (f64, f64),
    pub jaccard: f64,
}

impl SupportMetrics {
    pub fn to_text(&self, prefix: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{prefix}argmax_z1={:?}", self.argmax_z1);
        let _ = writeln!(out, "{prefix}argmax_inside={}", self.argmax_inside);
        let _ = writeln!(out, "{prefix}inside_mean={:?}", self.inside_mean);
        let _ = writeln!(out, "{prefix}outside_mean={:?}", self.outside_mean);
        let _ = writeln!(out, "{prefix}ratio={:?}", self.ratio);
        let _ = writeln!(out, "{prefix}half_max_lo={:?}", self.half_max.0);
        let _ = writeln!(out, "{prefix}half_max_hi={:?}", self.half_max.1);
        let _ = writeln!(out, "{prefix}jaccard={:?}", self.jaccard);
        out
    }
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Compare the `z_1` profile (first row) with the true range support `truth`.
/// Points within `tol` of `truth` count as inside.
pub fn support_metrics(img: &ImageField, truth: (f64, f64), tol: f64) -> SupportMetrics {
    let g = &img.grid;
    let profile = img.row(0);
    let best = (0..g.n1).fold(0, |b, i| if profile[i] > profile[b] { i } else { b });
    let argmax_z1 = g.z1_at(best);
    let (mut sin, mut nin, mut sout, mut nout) = (0.0, 0usize, 0.0, 0usize);
    for (i, v) in profile.iter().enumerate() {
        let z = g.z1_at(i);
        if z >= truth.0 - tol && z <= truth.1 + tol {
            sin += v;
            nin += 1;
        } else {
            sout += v;
            nout += 1;
        }
    }
    let inside_mean = if nin > 0 { sin / nin as f64 } else { 0.0 };
    let outside_mean = if nout > 0 { sout / nout as f64 } else { 0.0 };
    let ratio = if outside_mean > 0.0 {
        inside_mean / outside_mean
    } else {
        f64::INFINITY
    };
    let half = 0.5 * profile[best];
    let (mut lo, mut hi) = (best, best);
    while lo > 0 && profile[lo - 1] >= half {
        lo -= 1;
    }
    while hi + 1 < g.n1 && profile[hi + 1] >= half {
        hi += 1;
    }
    let h = 0.5 * g.step1();
    let (r0, r1) = g.range();
    let half_max = ((g.z1_at(lo) - h).max(r0), (g.z1_at(hi) + h).min(r1));
    let inter = overlap(half_max, truth);
    let union = (half_max.1 - half_max.0) + (truth.1 - truth.0) - inter;
    SupportMetrics {
        argmax_z1,
        argmax_inside: argmax_z1 >= truth.0 && argmax_z1 <= truth.1,
        inside_mean,
        outside_mean,
        ratio,
        half_max,
        jaccard: if union > 0.0 { inter / union } else { 0.0 },
    }
}
