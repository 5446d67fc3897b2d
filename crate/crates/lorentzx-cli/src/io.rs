//! File formats: matrices and point sets as headerless CSV or JSON.
//!
//! CSV floats are written with `Display`, which round-trips exactly, so a
//! generated file re-parses to the same bits. JSON matrix files carry their
//! own dimensions; CSV files need `--p` and `--q`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lorentzx::cone::{ConeDims, PointPQ};
use lorentzx::linalg::Mat;
use lorentzx::posop::Operator;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    p: usize,
    q: usize,
    matrix: Vec<Vec<f64>>,
}

fn resolve_dims(file_p: usize, file_q: usize, p: Option<usize>, q: Option<usize>) -> Result<ConeDims> {
    if let Some(p) = p {
        if p != file_p {
            bail!("--p {} disagrees with the file ({})", p, file_p);
        }
    }
    if let Some(q) = q {
        if q != file_q {
            bail!("--q {} disagrees with the file ({})", q, file_q);
        }
    }
    Ok(ConeDims::new(file_p, file_q)?)
}

fn required_dims(p: Option<usize>, q: Option<usize>) -> Result<ConeDims> {
    match (p, q) {
        (Some(p), Some(q)) => Ok(ConeDims::new(p, q)?),
        _ => bail!("CSV input carries no dimensions; pass --p and --q"),
    }
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .with_context(|| format!("line {}: bad number {:?}", lineno + 1, field.trim()))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_operator(path: &Path, p: Option<usize>, q: Option<usize>) -> Result<Operator> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let file: MatrixFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let dims = resolve_dims(file.p, file.q, p, q)?;
        let mat = Mat::from_rows(&file.matrix)?;
        Ok(Operator::new(dims, mat)?)
    } else {
        let dims = required_dims(p, q)?;
        let rows = parse_rows(&text)?;
        let mat = Mat::from_rows(&rows)?;
        Ok(Operator::new(dims, mat)?)
    }
}

pub fn operator_csv(op: &Operator) -> String {
    let mut out = String::new();
    for k in 0..op.mat().rows() {
        let line: Vec<String> = op.mat().row(k).iter().map(f64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn read_points(path: &Path, p: Option<usize>, q: Option<usize>) -> Result<Vec<PointPQ>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        let points: Vec<PointPQ> =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        for point in &points {
            resolve_dims(point.dims().p(), point.dims().q(), p, q)?;
        }
        Ok(points)
    } else {
        let dims = required_dims(p, q)?;
        parse_rows(&text)?
            .iter()
            .enumerate()
            .map(|(k, row)| {
                PointPQ::from_flat(dims, row)
                    .with_context(|| format!("point {} has the wrong length", k + 1))
            })
            .collect()
    }
}

pub fn points_csv(points: &[PointPQ]) -> String {
    let mut out = String::new();
    for point in points {
        let line: Vec<String> = point.to_flat().iter().map(f64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
