//! Text inputs: point clouds, cone files and single points.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cone_quantile::{parse_rational, DataCloud, Rational};

/// Parses one comma-separated row of rationals or decimals.
pub fn parse_row(line: &str) -> Result<Vec<Rational>> {
    line.split(',')
        .map(|field| parse_rational(field).map_err(anyhow::Error::from))
        .collect()
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One point per row; lines starting with `#` are headers or comments.
pub fn parse_cloud(text: &str) -> Result<DataCloud> {
    let mut points = Vec::new();
    for (lineno, line) in data_lines(text) {
        points.push(parse_row(line).with_context(|| format!("line {lineno}"))?);
    }
    if points.is_empty() {
        bail!("no data points");
    }
    Ok(DataCloud::new(points)?)
}

/// Generator rows of `Y`, plus an optional `interior: c` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFile {
    pub generators: Vec<Vec<Rational>>,
    pub interior: Option<Vec<Rational>>,
}

pub fn parse_cone(text: &str) -> Result<ConeFile> {
    let mut generators = Vec::new();
    let mut interior = None;
    for (lineno, line) in data_lines(text) {
        if let Some(rest) = line.strip_prefix("interior:") {
            if interior.is_some() {
                bail!("line {lineno}: duplicate interior line");
            }
            interior = Some(parse_row(rest).with_context(|| format!("line {lineno}"))?);
        } else {
            generators.push(parse_row(line).with_context(|| format!("line {lineno}"))?);
        }
    }
    if generators.is_empty() {
        bail!("cone file has no generators");
    }
    Ok(ConeFile { generators, interior })
}

pub fn read_cloud(path: &Path) -> Result<DataCloud> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_cloud(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_cone(path: &Path) -> Result<ConeFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_cone(&text).with_context(|| format!("parsing {}", path.display()))
}
