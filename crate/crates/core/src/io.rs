//! Plain-text matrix format.
//!
//! A matrix is a line holding `d` followed by `d` rows of `d` numbers.
//! Lines starting with `#` are comments; matrices are separated by blank
//! lines. A matrix may be preceded by `gen X` (a named generator) or a
//! `pivots: i1 i2 ...` line (a flag given by its frame columns).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::linalg::Matrix;
use crate::representation::Representation;
use crate::weyl::FaceType;

/// A parsed matrix with its optional header.
#[derive(Clone, Debug)]
pub struct Entry {
    pub header: Option<Header>,
    pub matrix: Matrix,
    /// 1-based line of the dimension line.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Header {
    Generator(char),
    Pivots(Vec<usize>),
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(text: &str, line: usize) -> Result<Option<Header>> {
    if let Some(rest) = text.strip_prefix("gen") {
        let name = rest.trim();
        let mut chars = name.chars();
        return match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => Ok(Some(Header::Generator(c))),
            _ => Err(parse_err(line, format!("generator name `{name}` must be one letter A-Z"))),
        };
    }
    if let Some(rest) = text.strip_prefix("pivots:") {
        let pivots = rest
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("bad pivot `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(Header::Pivots(pivots)));
    }
    Ok(None)
}

/// Parses every matrix in `text`.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.starts_with('#')).peekable();
    let mut out = Vec::new();
    let mut header = None;
    while let Some((no, l)) = lines.next() {
        if l.is_empty() {
            continue;
        }
        if let Some(h) = parse_header(l, no)? {
            if header.is_some() {
                return Err(parse_err(no, "two headers for one matrix"));
            }
            header = Some(h);
            continue;
        }
        let d: usize = l.parse().map_err(|_| parse_err(no, format!("expected a dimension, found `{l}`")))?;
        if d == 0 {
            return Err(parse_err(no, "dimension must be positive"));
        }
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            let Some((rno, row)) = lines.next() else {
                return Err(parse_err(no, format!("matrix ends after {r} of {d} rows")));
            };
            let values = row
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| parse_err(rno, format!("bad number `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != d {
                return Err(parse_err(rno, format!("expected {d} entries, found {}", values.len())));
            }
            data.extend(values);
        }
        let matrix = Matrix::from_row_major(d, d, data)?;
        out.push(Entry { header: header.take(), matrix, line: no });
    }
    if header.is_some() {
        return Err(parse_err(text.lines().count(), "header without a matrix"));
    }
    Ok(out)
}

pub fn parse_matrices(text: &str) -> Result<Vec<Matrix>> {
    Ok(parse_entries(text)?.into_iter().map(|e| e.matrix).collect())
}

/// Generators in order. With `gen` headers, names must be `A, B, ...`
/// without gaps (in any order); without headers, file order is used.
pub fn parse_generators(text: &str) -> Result<Vec<Matrix>> {
    let entries = parse_entries(text)?;
    if entries.is_empty() {
        return Err(parse_err(0, "no matrices"));
    }
    let named = entries.iter().filter(|e| matches!(e.header, Some(Header::Generator(_)))).count();
    if named == 0 {
        if let Some(e) = entries.iter().find(|e| e.header.is_some()) {
            return Err(parse_err(e.line, "unexpected header in a generator file"));
        }
        return Ok(entries.into_iter().map(|e| e.matrix).collect());
    }
    if named != entries.len() {
        let e = entries.iter().find(|e| !matches!(e.header, Some(Header::Generator(_)))).expect("some entry is unnamed");
        return Err(parse_err(e.line, "either every matrix or none has a `gen` header"));
    }
    let mut slots: Vec<Option<Matrix>> = vec![None; entries.len()];
    for e in entries {
        let Some(Header::Generator(c)) = e.header else { unreachable!() };
        let idx = (c as u8 - b'A') as usize;
        if idx >= slots.len() {
            return Err(parse_err(e.line, format!("generator {c} out of sequence")));
        }
        if slots[idx].is_some() {
            return Err(parse_err(e.line, format!("generator {c} given twice")));
        }
        slots[idx] = Some(e.matrix);
    }
    Ok(slots.into_iter().map(|m| m.expect("every slot filled")).collect())
}

pub fn parse_representation(text: &str) -> Result<Representation> {
    Representation::new(&parse_generators(text)?)
}

/// Flags from `pivots:` entries; the matrix columns span the flag.
pub fn parse_flags(text: &str) -> Result<Vec<Flag>> {
    parse_entries(text)?
        .into_iter()
        .map(|e| match e.header {
            Some(Header::Pivots(p)) => Flag::new(FaceType::new(e.matrix.dim(), p)?, &e.matrix),
            _ => Err(parse_err(e.line, "flag entries need a `pivots:` header")),
        })
        .collect()
}

/// Writes `m` with round-trip precision.
pub fn format_matrix(m: &Matrix) -> String {
    let mut s = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:?}")).collect();
        writeln!(s, "{}", row.join(" ")).expect("writing to a string");
    }
    s
}

pub fn format_generators(gens: &[Matrix]) -> String {
    gens.iter()
        .enumerate()
        .map(|(i, g)| format!("gen {}\n{}", char::from(b'A' + i as u8), format_matrix(g)))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn format_flag(f: &Flag) -> String {
    format!("pivots: {}\n{}", f.face().pivots().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "), format_matrix(f.frame()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::distance;

    #[test]
    fn single_matrix() {
        let m = parse_matrices("# golden\n2\n2 1\n1 1\n").unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].data(), &[2.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn named_generators_in_any_order() {
        let text = "gen B\n2\n1 1\n0 1\n\ngen A\n2\n2 0\n0 0.5\n";
        let g = parse_generators(text).unwrap();
        assert_eq!(g[0].data(), &[2.0, 0.0, 0.0, 0.5]);
        assert_eq!(g[1].data(), &[1.0, 1.0, 0.0, 1.0]);
        assert!(parse_representation(text).is_ok());
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_matrices("2\n1 0\n0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_matrices("2\n1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrices("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_generators("gen C\n1\n1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_generators("gen A\n1\n1\n\n1\n1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_generators("gen ab\n1\n1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_representation("2\n1 1\n1 1\n"), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn roundtrip() {
        let g = vec![
            Matrix::from_rows(&[vec![0.1, 1.0 / 3.0], vec![-2.5e-17, 1e300]]).unwrap(),
            Matrix::rotation(0.7),
        ];
        let back = parse_generators(&format_generators(&g)).unwrap();
        assert_eq!(back[0].data(), g[0].data());
        assert_eq!(back[1].data(), g[1].data());
    }

    #[test]
    fn flag_roundtrip() {
        let f = Flag::new(FaceType::new(3, vec![1]).unwrap(), &Matrix::givens(3, 0, 2, 0.3)).unwrap();
        let back = parse_flags(&format_flag(&f)).unwrap();
        assert!(distance(&back[0], &f).unwrap() < 1e-15);
        assert!(parse_flags("3\n1 0 0\n0 1 0\n0 0 1\n").is_err());
    }
}
