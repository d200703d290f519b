//! CSV and JSON file formats.
//!
//! Signals: `# grid n=... x_min=... x_max=... hbar=...` comment, `x,re,im`
//! header, one row per sample. Fields: same comment, `x,p,re,im` header,
//! row-major in `x` then `p`. Operators: `i,j,re,im`. All floating-point
//! values are rendered with 17 significant digits so a write/read round
//! trip is bit-identical.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use phaseq_core::grid::{GridSpec, PhasePoint, PhaseSpaceField, Signal};
use phaseq_core::quantize::{OperatorMatrix, SymbolSpec};

/// 17 significant digits; round-trips every finite f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn grid_comment(grid: &GridSpec) -> String {
    format!(
        "# grid n={} x_min={} x_max={} hbar={}",
        grid.n(),
        fmt_f64(grid.x_min()),
        fmt_f64(grid.x_max()),
        fmt_f64(grid.hbar())
    )
}

fn parse_grid_comment(line: &str) -> Result<GridSpec> {
    let mut fields: HashMap<&str, &str> = HashMap::new();
    for token in line.trim_start_matches('#').split_whitespace() {
        if let Some((k, v)) = token.split_once('=') {
            fields.insert(k, v);
        }
    }
    let get = |key: &str| -> Result<&str> {
        fields
            .get(key)
            .copied()
            .with_context(|| format!("grid comment is missing '{key}'"))
    };
    let n: usize = get("n")?.parse().context("bad n in grid comment")?;
    let x_min: f64 = get("x_min")?.parse().context("bad x_min")?;
    let x_max: f64 = get("x_max")?.parse().context("bad x_max")?;
    let hbar: f64 = get("hbar")?.parse().context("bad hbar")?;
    Ok(GridSpec::new(n, x_min, x_max, hbar)?)
}

pub fn write_signal(path: &Path, signal: &Signal) -> Result<()> {
    let g = signal.grid();
    let mut out = String::new();
    out.push_str(&grid_comment(g));
    out.push_str("\nx,re,im\n");
    for (i, c) in signal.samples().iter().enumerate() {
        out.push_str(&fmt_f64(g.x(i)));
        out.push(',');
        out.push_str(&fmt_f64(c.re));
        out.push(',');
        out.push_str(&fmt_f64(c.im));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_signal(path: &Path) -> Result<Signal> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let grid_line = lines.next().context("empty signal file")?;
    if !grid_line.starts_with('#') {
        bail!("signal file must start with a '# grid ...' comment");
    }
    let grid = parse_grid_comment(grid_line)?;
    let header = lines.next().context("missing header")?;
    if header.trim() != "x,re,im" {
        bail!("expected 'x,re,im' header, found '{header}'");
    }
    let mut samples = Vec::with_capacity(grid.n());
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let _x: f64 = parts
            .next()
            .context("missing x column")?
            .parse()
            .with_context(|| format!("row {}", ln + 3))?;
        let re: f64 = parts.next().context("missing re")?.parse()?;
        let im: f64 = parts.next().context("missing im")?.parse()?;
        samples.push(Complex64::new(re, im));
    }
    Ok(Signal::new(grid, samples)?)
}

pub fn write_field(path: &Path, field: &PhaseSpaceField) -> Result<()> {
    let g = field.grid();
    let n = g.n();
    let mut out = String::with_capacity(n * n * 64);
    out.push_str(&grid_comment(g));
    out.push_str("\nx,p,re,im\n");
    for i in 0..n {
        let x = fmt_f64(g.x(i));
        for k in 0..n {
            let c = field.at(i, k);
            out.push_str(&x);
            out.push(',');
            out.push_str(&fmt_f64(g.p(k)));
            out.push(',');
            out.push_str(&fmt_f64(c.re));
            out.push(',');
            out.push_str(&fmt_f64(c.im));
            out.push('\n');
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_field(path: &Path) -> Result<PhaseSpaceField> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let grid_line = lines.next().context("empty field file")?;
    if !grid_line.starts_with('#') {
        bail!("field file must start with a '# grid ...' comment");
    }
    let grid = parse_grid_comment(grid_line)?;
    let header = lines.next().context("missing header")?;
    if header.trim() != "x,p,re,im" {
        bail!("expected 'x,p,re,im' header, found '{header}'");
    }
    let mut samples = Vec::with_capacity(grid.n() * grid.n());
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let _x: f64 = parts.next().context("missing x")?.parse()?;
        let _p: f64 = parts.next().context("missing p")?.parse()?;
        let re: f64 = parts.next().context("missing re")?.parse()?;
        let im: f64 = parts.next().context("missing im")?.parse()?;
        samples.push(Complex64::new(re, im));
    }
    Ok(PhaseSpaceField::new(grid, samples)?)
}

pub fn write_operator(path: &Path, op: &OperatorMatrix) -> Result<()> {
    let g = op.grid();
    let n = g.n();
    let mut out = String::with_capacity(n * n * 48);
    out.push_str(&grid_comment(g));
    out.push_str("\ni,j,re,im\n");
    for i in 0..n {
        for j in 0..n {
            let c = op.at(i, j);
            out.push_str(&format!("{i},{j},{},{}\n", fmt_f64(c.re), fmt_f64(c.im)));
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// The symbol JSON schema; tags mirror the symbol kinds verbatim.
#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolFile {
    Monomial { m: u32, n: u32 },
    Quadratic { matrix: [[f64; 2]; 2] },
    KineticPotential { mass: f64, potential: String },
    Magnetic { mass: f64, vector_potential: String, potential: String },
    GridSymbol { path: String },
    PlaneWave { z1: PhasePointFile },
}

#[derive(Debug, Deserialize)]
pub struct PhasePointFile {
    pub x: f64,
    pub p: f64,
}


pub fn read_symbol(path: &Path) -> Result<SymbolSpec> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SymbolFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    Ok(match file {
        SymbolFile::Monomial { m, n } => SymbolSpec::Monomial { m, n },
        SymbolFile::Quadratic { matrix } => SymbolSpec::Quadratic { matrix },
        SymbolFile::KineticPotential { mass, potential } => SymbolSpec::KineticPotential {
            mass,
            potential: phaseq_core::expr::parse_expr(&potential)?,
        },
        SymbolFile::Magnetic { mass, vector_potential, potential } => SymbolSpec::Magnetic {
            mass,
            vector_potential: phaseq_core::expr::parse_expr(&vector_potential)?,
            potential: phaseq_core::expr::parse_expr(&potential)?,
        },
        SymbolFile::GridSymbol { path } => {
            let field = read_field(&base.join(path))?;
            SymbolSpec::GridSymbol { field }
        }
        SymbolFile::PlaneWave { z1 } => SymbolSpec::PlaneWave {
            z1: PhasePoint::new(z1.x, z1.p)
                .map_err(|e| anyhow::anyhow!("plane wave point: {e}"))?,
        },
    })
}
