//! Plain-text point-set files.
//!
//! ```text
//! # comment
//! q=9 d=3
//! 0,0,0
//! 3,6,0
//! ```
//!
//! The header `q=<int> d=<int>` is the first non-blank, non-comment line.
//! Each following line is one point as comma-separated integers, reduced mod
//! `q` on read. Everything after a `#` is ignored.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use super::PointSet;
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<(u64, usize)> {
    let mut q = None;
    let mut d = None;
    for field in line.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else {
            return parse_err(line_no, format!("malformed header field {field:?}"));
        };
        let parsed: u64 = match value.parse() {
            Ok(v) => v,
            Err(_) => return parse_err(line_no, format!("bad value in {field:?}")),
        };
        match key {
            "q" => q = Some(parsed),
            "d" => d = Some(parsed as usize),
            _ => return parse_err(line_no, format!("unknown header key {key:?}")),
        }
    }
    match (q, d) {
        (Some(q), Some(d)) => Ok((q, d)),
        _ => parse_err(line_no, "header must be `q=<int> d=<int>`"),
    }
}

pub fn read_point_set<R: BufRead>(reader: R) -> Result<PointSet> {
    let mut header = None;
    let mut points: Vec<Vec<i64>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((_, d)) = header else {
            header = Some(parse_header(line_no, content)?);
            continue;
        };
        let coords: std::result::Result<Vec<i64>, _> = content
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect();
        let coords = match coords {
            Ok(c) => c,
            Err(e) => return parse_err(line_no, format!("bad coordinate: {e}")),
        };
        if coords.len() != d {
            return parse_err(
                line_no,
                format!("expected {d} coordinates, found {}", coords.len()),
            );
        }
        points.push(coords);
    }
    let Some((q, d)) = header else {
        return parse_err(0, "missing `q=<int> d=<int>` header");
    };
    PointSet::new(q, d, points)
}

pub fn write_point_set<W: Write>(set: &PointSet, mut out: W) -> Result<()> {
    writeln!(out, "q={} d={}", set.q(), set.d())?;
    for p in set.points() {
        let row: Vec<String> = p.iter().map(u64::to_string).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn load_point_set(path: &Path) -> Result<PointSet> {
    let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_point_set(std::io::BufReader::new(file))
}

pub fn save_point_set(set: &PointSet, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_point_set(set, &mut buf)?;
    fs::write(path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
