//! The `t,x,u` grid format: one header line, then one row per node in t-major
//! order, `\n` line ends. Numbers are written in the shortest form that reads
//! back to the same `f64`, so a parse of an emitted file is bitwise exact.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use prabhakar_green::solver::SolutionField;

use crate::CliError;

pub const HEADER: &str = "t,x,u";

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn format_value(v: f64) -> String {
    let m = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&m) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_field<W: Write>(field: &SolutionField, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "{HEADER}")?;
    for (i, &t) in field.t_nodes.iter().enumerate() {
        let t = format_value(t);
        for (j, &x) in field.x_nodes.iter().enumerate() {
            writeln!(
                w,
                "{t},{},{}",
                format_value(x),
                format_value(field.value(i, j))
            )?;
        }
    }
    w.flush()
}

pub fn emit_csv(field: &SolutionField, path: &Path) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_field(field, file).map_err(io_err)
}

/// A parsed grid file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvGrid {
    pub t_nodes: Vec<f64>,
    pub x_nodes: Vec<f64>,
    /// t-major, as in [`SolutionField::values`].
    pub values: Vec<f64>,
}

impl CsvGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.x_nodes.len() + j]
    }
}

/// Reads a grid back, checking that the rows form a t-major tensor grid.
pub fn parse_csv(text: &str) -> Result<CsvGrid, CliError> {
    let mut lines = text.split_terminator('\n');
    if lines.next() != Some(HEADER) {
        return Err(CliError::Csv(format!("first line must be {HEADER:?}")));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let bad = || CliError::Csv(format!("row {}: {line:?}", n + 1));
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let mut row = [0.0; 3];
        for (slot, f) in row.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| bad())?;
        }
        rows.push(row);
    }
    let Some(first) = rows.first() else {
        return Err(CliError::Csv("no data rows".into()));
    };
    let nx = rows.iter().take_while(|r| r[0] == first[0]).count();
    let x_nodes: Vec<f64> = rows[..nx].iter().map(|r| r[1]).collect();
    if rows.len() % nx != 0 {
        return Err(CliError::Csv(format!(
            "{} rows do not fill rows of {nx} x nodes",
            rows.len()
        )));
    }
    let mut t_nodes = Vec::with_capacity(rows.len() / nx);
    for (i, block) in rows.chunks(nx).enumerate() {
        let t = block[0][0];
        let consistent = block
            .iter()
            .zip(&x_nodes)
            .all(|(r, x)| r[0] == t && r[1] == *x);
        if !consistent || t_nodes.last().is_some_and(|&prev| prev >= t) {
            return Err(CliError::Csv(format!(
                "time level {} is not a grid row",
                i + 1
            )));
        }
        t_nodes.push(t);
    }
    Ok(CsvGrid {
        t_nodes,
        x_nodes,
        values: rows.iter().map(|r| r[2]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for v in [
            0.0,
            -0.0,
            1.0,
            0.1 + 0.2,
            std::f64::consts::PI,
            -2.5e-9,
            1e-300,
            f64::MIN_POSITIVE,
            5e-324,
            1e17,
            -123456.789,
        ] {
            let s = format_value(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} as {s}");
        }
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(2.0), "2");
        assert_eq!(format_value(1.5e-7), "1.5e-7");
    }

    #[test]
    fn rejects_malformed_grids() {
        assert!(parse_csv("t,x,v\n1,0,0\n").is_err());
        assert!(parse_csv("t,x,u\n").is_err());
        assert!(parse_csv("t,x,u\n1,0,0\n1,1,0\n2,0,0\n").is_err());
        assert!(parse_csv("t,x,u\n1,0,0\n1,1,0\n2,1,0\n2,0,0\n").is_err());
        assert!(parse_csv("t,x,u\n2,0,0\n1,0,0\n").is_err());
        assert!(parse_csv("t,x,u\n1,0\n").is_err());
        let g = parse_csv("t,x,u\n1,0,0.5\n1,2,1.5\n2,0,2.5\n2,2,3.5\n").unwrap();
        assert_eq!(g.t_nodes, vec![1.0, 2.0]);
        assert_eq!(g.x_nodes, vec![0.0, 2.0]);
        assert_eq!(g.value(1, 0), 2.5);
    }
}
