//! CSV form of [`DataSet`].
//!
//! Metadata goes in `# key,value` lines ahead of the column header, then one
//! `m,omega_m,re,im` row per lattice sample. Floats are written with Rust's
//! shortest round-trip formatting, so reading back reproduces every bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{
    DataSet, FrequencyGrid, GridMode, Lattice, MeasurementConfig, NoiseInfo, Sample, Side,
};
use crate::error::{Error, Result};
use crate::modal::{BoundaryKind, Point, Waveguide};

const MAGIC: &str = "# wgfm dataset v1";
const COLUMNS: &str = "m,omega_m,re,im";

pub(crate) fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

pub(crate) fn parse_side(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(Error::Parse(format!("unknown side '{other}'"))),
    }
}

pub(crate) fn mode_name(m: GridMode) -> &'static str {
    match m {
        GridMode::Midpoint => "midpoint",
        GridMode::Vertex => "vertex",
    }
}

pub(crate) fn parse_mode(s: &str) -> Result<GridMode> {
    match s {
        "midpoint" => Ok(GridMode::Midpoint),
        "vertex" => Ok(GridMode::Vertex),
        other => Err(Error::Parse(format!("unknown grid mode '{other}'"))),
    }
}

pub(crate) fn write_grid_header(out: &mut String, grid: &FrequencyGrid) {
    let _ = writeln!(out, "# k_minus,{:?}", grid.k_minus());
    let _ = writeln!(out, "# k_plus,{:?}", grid.k_plus());
    let _ = writeln!(out, "# n,{}", grid.len());
    let _ = writeln!(out, "# grid_mode,{}", mode_name(grid.mode()));
}

pub fn to_csv(ds: &DataSet) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "# boundary,{}", ds.waveguide.boundary().name());
    let _ = writeln!(out, "# height,{:?}", ds.waveguide.height());
    write_grid_header(&mut out, &ds.grid);
    match ds.lattice {
        Lattice::Difference => out.push_str("# lattice,difference\n"),
        Lattice::Alpha { alpha } => {
            out.push_str("# lattice,alpha\n");
            let _ = writeln!(out, "# alpha,{alpha:?}");
        }
    }
    let m = &ds.measurement;
    let _ = writeln!(out, "# xstar_1,{:?}", m.point.x1);
    let _ = writeln!(out, "# xstar_perp,{:?}", m.point.xperp);
    let _ = writeln!(out, "# side,{}", side_name(m.side));
    if let Some(r) = &ds.receiver {
        let _ = writeln!(out, "# receiver_1,{:?}", r.point.x1);
        let _ = writeln!(out, "# receiver_perp,{:?}", r.point.xperp);
        let _ = writeln!(out, "# receiver_side,{}", side_name(r.side));
    }
    let _ = writeln!(out, "# theta,{:?}", ds.theta);
    let _ = writeln!(out, "# doubled,{}", ds.doubled);
    if let Some(n) = &ds.noise {
        let _ = writeln!(out, "# noise_level,{:?}", n.level);
        let _ = writeln!(out, "# noise_seed,{}", n.seed);
    }
    out.push_str(COLUMNS);
    out.push('\n');
    for s in &ds.samples {
        let _ = writeln!(
            out,
            "{},{:?},{:?},{:?}",
            s.m, s.omega, s.value.re, s.value.im
        );
    }
    out
}

/// Header map plus the data rows that follow the column line.
pub(crate) struct Sections<'a> {
    pub header: HashMap<&'a str, &'a str>,
    pub rows: Vec<(usize, Vec<&'a str>)>,
}

pub(crate) fn split_sections<'a>(
    text: &'a str,
    magic: &str,
    columns: &str,
) -> Result<Sections<'a>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == magic => {}
        _ => return Err(Error::Parse(format!("line 1: expected '{magic}'"))),
    }
    let mut header = HashMap::new();
    let mut seen_columns = false;
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if !seen_columns {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv.split_once(',').ok_or_else(|| {
                    Error::Parse(format!("line {}: malformed header '{line}'", i + 1))
                })?;
                header.insert(k, v);
                continue;
            }
            if line == columns {
                seen_columns = true;
                continue;
            }
            return Err(Error::Parse(format!(
                "line {}: expected header or '{columns}'",
                i + 1
            )));
        }
        rows.push((i + 1, line.split(',').collect()));
    }
    if !seen_columns {
        return Err(Error::Parse(format!("missing column line '{columns}'")));
    }
    Ok(Sections { header, rows })
}

pub(crate) fn field<'a>(h: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str> {
    h.get(key)
        .copied()
        .ok_or_else(|| Error::Parse(format!("missing header '{key}'")))
}

pub(crate) fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
}

pub(crate) fn read_grid_header(h: &HashMap<&str, &str>) -> Result<FrequencyGrid> {
    FrequencyGrid::new(
        num(field(h, "k_minus")?, "k_minus")?,
        num(field(h, "k_plus")?, "k_plus")?,
        num(field(h, "n")?, "n")?,
        parse_mode(field(h, "grid_mode")?)?,
    )
}

pub fn from_csv(text: &str) -> Result<DataSet> {
    let Sections { header: h, rows } = split_sections(text, MAGIC, COLUMNS)?;
    let waveguide = Waveguide::new(
        num(field(&h, "height")?, "height")?,
        BoundaryKind::from_name(field(&h, "boundary")?)?,
    )?;
    let grid = read_grid_header(&h)?;
    let lattice = match field(&h, "lattice")? {
        "difference" => Lattice::Difference,
        "alpha" => Lattice::Alpha {
            alpha: num(field(&h, "alpha")?, "alpha")?,
        },
        other => return Err(Error::Parse(format!("unknown lattice '{other}'"))),
    };
    let measurement = MeasurementConfig {
        point: Point::new(
            num(field(&h, "xstar_1")?, "xstar_1")?,
            num(field(&h, "xstar_perp")?, "xstar_perp")?,
        ),
        side: parse_side(field(&h, "side")?)?,
    };
    let receiver = match h.get("receiver_1") {
        Some(x1) => Some(MeasurementConfig {
            point: Point::new(
                num(x1, "receiver_1")?,
                num(field(&h, "receiver_perp")?, "receiver_perp")?,
            ),
            side: parse_side(field(&h, "receiver_side")?)?,
        }),
        None => None,
    };
    let noise = match h.get("noise_level") {
        Some(l) => Some(NoiseInfo {
            level: num(l, "noise_level")?,
            seed: num(field(&h, "noise_seed")?, "noise_seed")?,
        }),
        None => None,
    };
    let doubled = match field(&h, "doubled")? {
        "true" => true,
        "false" => false,
        other => return Err(Error::Parse(format!("bad doubled flag '{other}'"))),
    };
    let mut samples = Vec::with_capacity(rows.len());
    for (line, cols) in rows {
        if cols.len() != 4 {
            return Err(Error::Parse(format!(
                "line {line}: expected 4 columns, got {}",
                cols.len()
            )));
        }
        samples.push(Sample {
            m: num(cols[0], "offset")?,
            omega: num(cols[1], "omega")?,
            value: Complex64::new(num(cols[2], "re")?, num(cols[3], "im")?),
        });
    }
    let ds = DataSet {
        waveguide,
        grid,
        lattice,
        measurement,
        receiver,
        theta: num(field(&h, "theta")?, "theta")?,
        doubled,
        noise,
        samples,
    };
    if !ds.is_complete() {
        return Err(Error::Parse(
            "dataset rows do not cover the lattice exactly once".into(),
        ));
    }
    Ok(ds)
}

pub fn save(ds: &DataSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_csv(ds))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<DataSet> {
    from_csv(&std::fs::read_to_string(path)?)
}
