//! Section files: a header `section <cells>`, then for each nonzero cell
//! either `cell re im` (1×1 coefficients) or the cell name alone followed by
//! `d` lines of `d` complex entries written `re im re im ..`. Absent cells
//! are zero.

use std::collections::HashMap;
use std::fmt::Write as _;

use hicat_core::convolution::Section;
use hicat_core::linalg::CMat;
use hicat_core::ncat::{CellId, MultiCategory};
use hicat_core::Complex64;

use crate::catfile::ParseError;

fn err(file: &str, line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { file: file.to_string(), line, message: msg.into() }
}

fn num(tok: &str, file: &str, line: usize) -> Result<f64, ParseError> {
    tok.parse::<f64>().map_err(|_| err(file, line, format!("`{tok}` is not a number")))
}

pub fn parse_section<B: MultiCategory>(text: &str, file: &str, base: &B, d: usize) -> Result<Section<CMat>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| err(file, 1, "missing `section <cells>` header"))?;
    let count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["section", n] => n.parse::<usize>().map_err(|_| err(file, hl, "bad cell count"))?,
        _ => return Err(err(file, hl, "header must read `section <cells>`")),
    };
    if count != base.cell_count() {
        return Err(err(file, hl, format!("section over {count} cells, base has {}", base.cell_count())));
    }
    let ids: HashMap<&str, CellId> = base.cells().map(|c| (base.cell_name(c), c)).collect();
    let mut values = vec![CMat::zeros(d, d); count];
    let mut seen = vec![false; count];
    while let Some((ln, line)) = lines.next() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let cell = *ids.get(toks[0]).ok_or_else(|| err(file, ln, format!("unknown cell `{}`", toks[0])))?;
        if std::mem::replace(&mut seen[cell.0], true) {
            return Err(err(file, ln, format!("cell `{}` given twice", toks[0])));
        }
        match toks.len() {
            3 if d == 1 => {
                values[cell.0] = CMat::scalar(Complex64::new(num(toks[1], file, ln)?, num(toks[2], file, ln)?));
            }
            1 => {
                let mut m = CMat::zeros(d, d);
                for r in 0..d {
                    let (rl, row) = lines.next().ok_or_else(|| err(file, ln, format!("cell `{}` needs {d} rows", toks[0])))?;
                    let row: Vec<&str> = row.split_whitespace().collect();
                    if row.len() != 2 * d {
                        return Err(err(file, rl, format!("a row holds {d} complex entries, {} numbers", 2 * d)));
                    }
                    for c in 0..d {
                        m[(r, c)] = Complex64::new(num(row[2 * c], file, rl)?, num(row[2 * c + 1], file, rl)?);
                    }
                }
                values[cell.0] = m;
            }
            _ => {
                let want = if d == 1 { "`cell re im`" } else { "the cell name alone, then its rows" };
                return Err(err(file, ln, format!("expected {want}")));
            }
        }
    }
    Ok(Section::new(values))
}

/// Writes the nonzero cells. Numbers use the shortest round-trip form, so
/// parsing the output reproduces the section exactly.
pub fn write_section<B: MultiCategory>(s: &Section<CMat>, base: &B) -> String {
    let mut out = format!("section {}\n", s.len());
    for c in base.cells() {
        let m = &s.values[c.0];
        if m.data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            continue;
        }
        let name = base.cell_name(c);
        if m.rows() == 1 {
            writeln!(out, "{name} {:?} {:?}", m[(0, 0)].re, m[(0, 0)].im).unwrap();
            continue;
        }
        writeln!(out, "{name}").unwrap();
        for r in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|c| format!("{:?} {:?}", m[(r, c)].re, m[(r, c)].im)).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}
