//! Plain-text field dumps.
//!
//! ```text
//! # dim=2
//! # M=80
//! # x=-1,1
//! # y=-1,1
//! # time=1
//! <M+1 rows of M+1 values, row j holds y_j>
//! ```
//!
//! The header lines start with `#`, so the body loads directly as a matrix
//! in most plotting tools. Values are written in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::{Dim, Field, Grid};

pub fn field_to_text(field: &Field, time: f64) -> String {
    let g = field.grid();
    let (x0, x1) = g.x_bounds();
    let (y0, y1) = g.y_bounds();
    let mut s = String::new();
    let dim = match g.dim() {
        Dim::One => 1,
        Dim::Two => 2,
    };
    let _ = writeln!(s, "# dim={dim}");
    let _ = writeln!(s, "# M={}", g.cells());
    let _ = writeln!(s, "# x={x0:?},{x1:?}");
    if g.dim() == Dim::Two {
        let _ = writeln!(s, "# y={y0:?},{y1:?}");
    }
    let _ = writeln!(s, "# time={time:?}");
    for row in field.values().chunks(g.nx()) {
        let cols: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        s.push_str(&cols.join(" "));
        s.push('\n');
    }
    s
}

/// Inverse of [`field_to_text`]; returns the field and its time.
pub fn field_from_text(text: &str, path: &Path) -> Result<(Field, f64)> {
    let bad = |message: String| Error::MalformedDump {
        path: path.to_path_buf(),
        message,
    };
    let mut header: Vec<(&str, &str)> = Vec::new();
    let mut body = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix('#') {
            let (k, v) = h
                .trim()
                .split_once('=')
                .ok_or_else(|| bad(format!("header line {line:?}")))?;
            header.push((k.trim(), v.trim()));
        } else if !line.trim().is_empty() {
            body.push(line);
        }
    }
    let key = |k: &str| {
        header
            .iter()
            .find(|(hk, _)| *hk == k)
            .map(|&(_, v)| v)
            .ok_or_else(|| bad(format!("missing header key {k}")))
    };
    let bounds = |k: &str| -> Result<(f64, f64)> {
        let v = key(k)?;
        let (a, b) = v.split_once(',').ok_or_else(|| bad(format!("{k}={v}")))?;
        match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(bad(format!("{k}={v}"))),
        }
    };
    let cells: usize = key("M")?.parse().map_err(|_| bad("M".into()))?;
    let time: f64 = key("time")?.parse().map_err(|_| bad("time".into()))?;
    let grid = match key("dim")? {
        "1" => Grid::line(bounds("x")?.0, bounds("x")?.1, cells),
        "2" => Grid::new(bounds("x")?, bounds("y")?, cells, Dim::Two),
        d => return Err(bad(format!("dim={d}"))),
    }
    .map_err(|e| bad(e.to_string()))?;
    if body.len() != grid.ny() {
        return Err(bad(format!("{} rows, expected {}", body.len(), grid.ny())));
    }
    let mut values = Vec::with_capacity(grid.len());
    for (j, row) in body.iter().enumerate() {
        let before = values.len();
        for tok in row.split_whitespace() {
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| bad(format!("row {j}: value {tok:?}")))?,
            );
        }
        if values.len() - before != grid.nx() {
            return Err(bad(format!(
                "row {j} has {} values, expected {}",
                values.len() - before,
                grid.nx()
            )));
        }
    }
    let field = Field::from_values(grid, values, 0).map_err(|e| bad(e.to_string()))?;
    Ok((field, time))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<stem>.txt` and, when given, `<stem>_exact.txt`. Returns the
/// paths written.
pub fn dump_field(
    field: &Field,
    time: f64,
    exact: Option<&Field>,
    stem: &Path,
) -> Result<Vec<PathBuf>> {
    field.check_finite()?;
    let with_suffix = |suffix: &str| {
        let mut name = stem.file_name().unwrap_or_default().to_os_string();
        name.push(suffix);
        stem.with_file_name(name)
    };
    let main = with_suffix(".txt");
    write(&main, &field_to_text(field, time))?;
    let mut written = vec![main];
    if let Some(e) = exact {
        let p = with_suffix("_exact.txt");
        write(&p, &field_to_text(e, time))?;
        written.push(p);
    }
    Ok(written)
}

pub fn read_field(path: &Path) -> Result<(Field, f64)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    field_from_text(&text, path)
}
