//! CSV form of [`FarFieldMatrix`]: `# key,value` header lines, then `i,j,re,im` rows.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FarFieldMatrix, OperatorKind};
use crate::error::{Error, Result};
use crate::synth::io::{field, num, read_grid_header, split_sections, write_grid_header};

const MAGIC: &str = "# wgfm operator v1";
const COLUMNS: &str = "i,j,re,im";

pub fn to_csv(f: &FarFieldMatrix) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    write_grid_header(&mut out, &f.grid);
    let _ = writeln!(out, "# weight,{:?}", f.weight);
    let _ = writeln!(out, "# kind,{}", f.kind.name());
    match f.kind {
        OperatorKind::Backscatter { theta } => {
            let _ = writeln!(out, "# theta,{theta:?}");
        }
        OperatorKind::Alpha { alpha, tau } => {
            let _ = writeln!(out, "# alpha,{alpha:?}");
            let _ = writeln!(out, "# tau,{tau:?}");
        }
        OperatorKind::Block | OperatorKind::TwoSided => {}
    }
    out.push_str(COLUMNS);
    out.push('\n');
    let n = f.len();
    for i in 0..n {
        for j in 0..n {
            let z = f.entries[(i, j)];
            let _ = writeln!(out, "{i},{j},{:?},{:?}", z.re, z.im);
        }
    }
    out
}

pub fn from_csv(text: &str) -> Result<FarFieldMatrix> {
    let sec = split_sections(text, MAGIC, COLUMNS)?;
    let h = &sec.header;
    let grid = read_grid_header(h)?;
    let kind = match field(h, "kind")? {
        "backscatter" => OperatorKind::Backscatter {
            theta: num(field(h, "theta")?, "theta")?,
        },
        "block" => OperatorKind::Block,
        "two_sided" => OperatorKind::TwoSided,
        "alpha" => OperatorKind::Alpha {
            alpha: num(field(h, "alpha")?, "alpha")?,
            tau: num(field(h, "tau")?, "tau")?,
        },
        other => return Err(Error::Parse(format!("unknown operator kind '{other}'"))),
    };
    let n = grid.len();
    let mut entries = DMatrix::from_element(n, n, Complex64::new(f64::NAN, f64::NAN));
    let mut seen = 0usize;
    for (line, cols) in &sec.rows {
        if cols.len() != 4 {
            return Err(Error::Parse(format!("line {line}: expected 4 columns")));
        }
        let (i, j): (usize, usize) = (num(cols[0], "row")?, num(cols[1], "column")?);
        if i >= n || j >= n {
            return Err(Error::Parse(format!(
                "line {line}: index ({i},{j}) outside {n}x{n}"
            )));
        }
        entries[(i, j)] = Complex64::new(num(cols[2], "re")?, num(cols[3], "im")?);
        seen += 1;
    }
    if seen != n * n || entries.iter().any(|z| z.re.is_nan()) {
        return Err(Error::Parse(format!(
            "expected {} entries, each once",
            n * n
        )));
    }
    Ok(FarFieldMatrix {
        entries,
        grid,
        weight: num(field(h, "weight")?, "weight")?,
        kind,
    })
}

pub fn save(f: &FarFieldMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_csv(f))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<FarFieldMatrix> {
    from_csv(&std::fs::read_to_string(path)?)
}
