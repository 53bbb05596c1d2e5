//! The gridgauge text grid format.
//!
//! ```text
//! # comment lines start with '#'
//! <nnodes> <ncells>
//! x y              (nnodes lines)
//! n v1 ... vn      (ncells lines, 0-based, counter-clockwise)
//! ```

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use gridgauge_core::{Grid, GridError, Vec2};

use crate::error::{Error, ParseError};

/// Shortest-form decimal with 17 significant digits (`%.17g`), which
/// round-trips every finite `f64` exactly.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    if (-5..17).contains(&exp) {
        let body = if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                format!("{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// Parses a grid from text; errors carry 1-based line numbers.
pub fn parse_grid(reader: impl BufRead, name: &str) -> Result<Grid, ParseError> {
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ParseError::new(i + 1, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        lines.push((i + 1, line));
    }
    let mut it = lines.iter();
    let (hline, header) = it.next().ok_or_else(|| ParseError::new(0, "empty grid file"))?;
    let counts: Vec<&str> = header.split_whitespace().collect();
    let [nn, nc] = counts[..] else {
        return Err(ParseError::new(*hline, "header must be `<nnodes> <ncells>`"));
    };
    let parse_count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseError::new(*hline, format!("malformed header count `{s}`")))
    };
    let (nnodes, ncells) = (parse_count(nn)?, parse_count(nc)?);

    let mut nodes = Vec::with_capacity(nnodes);
    let mut node_lines = Vec::with_capacity(nnodes);
    for k in 0..nnodes {
        let (ln, text) = it
            .next()
            .ok_or_else(|| ParseError::new(0, format!("expected {nnodes} nodes, found {k}")))?;
        let tok: Vec<&str> = text.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(ParseError::new(*ln, format!("node line needs 2 tokens, found {}", tok.len())));
        }
        let coord = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| ParseError::new(*ln, format!("malformed coordinate `{s}`")))
        };
        nodes.push(Vec2::new(coord(tok[0])?, coord(tok[1])?));
        node_lines.push(*ln);
    }

    let mut cells = Vec::with_capacity(ncells);
    let mut cell_lines = Vec::with_capacity(ncells);
    for k in 0..ncells {
        let (ln, text) = it
            .next()
            .ok_or_else(|| ParseError::new(0, format!("expected {ncells} cells, found {k}")))?;
        let tok: Vec<&str> = text.split_whitespace().collect();
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ParseError::new(*ln, format!("malformed index `{s}`")))
        };
        let nverts = index(tok[0])?;
        if tok.len() != nverts + 1 {
            return Err(ParseError::new(
                *ln,
                format!("cell declares {nverts} vertices but has {} indices", tok.len() - 1),
            ));
        }
        let verts = tok[1..].iter().map(|s| index(s)).collect::<Result<Vec<_>, _>>()?;
        cells.push(verts);
        cell_lines.push(*ln);
    }
    if let Some((ln, _)) = it.next() {
        return Err(ParseError::new(*ln, "unexpected content after the last cell"));
    }

    Grid::new(name, nodes, cells).map_err(|e| {
        let line = match &e {
            GridError::VertexCount { cell, .. }
            | GridError::VertexOutOfRange { cell, .. }
            | GridError::RepeatedVertex { cell, .. }
            | GridError::NonPositiveArea { cell, .. } => cell_lines[*cell],
            GridError::NonFiniteCoordinate { node } => node_lines[*node],
            GridError::NoCells => *hline,
            GridError::FaceSharing { .. } => 0,
        };
        ParseError::new(line, e.to_string())
    })
}

pub fn write_grid(grid: &Grid, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "# {}", grid.name())?;
    writeln!(w, "{} {}", grid.nodes().len(), grid.ncells())?;
    for p in grid.nodes() {
        writeln!(w, "{} {}", fmt17(p.x), fmt17(p.y))?;
    }
    for verts in grid.connectivity() {
        write!(w, "{}", verts.len())?;
        for v in verts {
            write!(w, " {v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads a grid file; the grid is named after the file stem.
pub fn read_grid(path: &Path) -> Result<Grid, Error> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_grid(BufReader::new(file), &name).map_err(|source| Error::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn save_grid(grid: &Grid, path: &Path) -> Result<(), Error> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    write_grid(grid, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}
