//! Frozen plain-text serialization of a bicomplex.
//!
//! Format (all tokens space-separated, lines LF-terminated):
//!
//! ```text
//! specseq v1 <modulus> <W> <H>
//! cell <m> <n> <dim>            -- W*H lines, m-major then n ascending
//! d0 <m> <n> <rows> <cols>      -- then <rows> lines of <cols> entries
//! ...                           -- one block per cell, same order
//! d1 <m> <n> <rows> <cols>
//! ...
//! ```
//!
//! Every `d0`/`d1` block is present, including empty ones, so the format
//! round-trips byte-for-byte and needs no lookahead.

use crate::error::{Error, Result};

use super::bicomplex::Bicomplex;
use super::matrix::Mat;

pub fn write_bicomplex(b: &Bicomplex) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "specseq v1 {} {} {}\n",
        b.modulus(),
        b.width(),
        b.height()
    ));
    for m in 0..b.width() {
        for n in 0..b.height() {
            out.push_str(&format!("cell {m} {n} {}\n", b.dim(m, n)));
        }
    }
    for (tag, pick) in [("d0", true), ("d1", false)] {
        for m in 0..b.width() {
            for n in 0..b.height() {
                let map = if pick { b.d0(m, n) } else { b.d1(m, n) };
                out.push_str(&format!("{tag} {m} {n} {} {}\n", map.rows(), map.cols()));
                if map.cols() == 0 {
                    continue; // no entry lines for empty rows
                }
                for i in 0..map.rows() {
                    let row: Vec<String> =
                        (0..map.cols()).map(|j| map.get(i, j).to_string()).collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
        }
    }
    out
}

fn bad(line_no: usize, msg: &str) -> Error {
    Error::InvalidInput(format!("specseq text line {}: {msg}", line_no + 1))
}

pub fn parse_bicomplex(text: &str) -> Result<Bicomplex> {
    let lines: Vec<&str> = text.lines().collect();
    let mut at = 0usize;
    let next = |at: &mut usize| -> Result<Vec<String>> {
        while *at < lines.len() && lines[*at].trim().is_empty() {
            *at += 1;
        }
        if *at >= lines.len() {
            return Err(Error::InvalidInput("specseq text: unexpected end".into()));
        }
        let toks = lines[*at].split_whitespace().map(str::to_string).collect();
        *at += 1;
        Ok(toks)
    };
    let header = next(&mut at)?;
    if header.len() != 5 || header[0] != "specseq" || header[1] != "v1" {
        return Err(bad(at - 1, "expected header `specseq v1 <modulus> <W> <H>`"));
    }
    let parse_num = |s: &str, what: &str, line: usize| -> Result<usize> {
        s.parse().map_err(|_| bad(line, &format!("bad {what} `{s}`")))
    };
    let modulus: u64 = header[2]
        .parse()
        .map_err(|_| bad(at - 1, "bad modulus"))?;
    let width = parse_num(&header[3], "width", at - 1)?;
    let height = parse_num(&header[4], "height", at - 1)?;
    let mut dims = vec![vec![0usize; height]; width];
    for m in 0..width {
        for n in 0..height {
            let t = next(&mut at)?;
            if t.len() != 4 || t[0] != "cell" {
                return Err(bad(at - 1, "expected `cell <m> <n> <dim>`"));
            }
            if parse_num(&t[1], "m", at - 1)? != m || parse_num(&t[2], "n", at - 1)? != n {
                return Err(bad(at - 1, "cells out of order"));
            }
            dims[m][n] = parse_num(&t[3], "dim", at - 1)?;
        }
    }
    let mut b = Bicomplex::new(width, height, modulus, dims)?;
    for tag in ["d0", "d1"] {
        for m in 0..width {
            for n in 0..height {
                let t = next(&mut at)?;
                if t.len() != 5 || t[0] != tag {
                    return Err(bad(at - 1, &format!("expected `{tag} <m> <n> <rows> <cols>`")));
                }
                let rows = parse_num(&t[3], "rows", at - 1)?;
                let cols = parse_num(&t[4], "cols", at - 1)?;
                let mut map = Mat::zeros(rows, cols, modulus);
                for i in 0..if cols == 0 { 0 } else { rows } {
                    let rt = next(&mut at)?;
                    if rt.len() != cols {
                        return Err(bad(at - 1, "wrong number of entries in matrix row"));
                    }
                    for (j, tok) in rt.iter().enumerate() {
                        let v: u64 =
                            tok.parse().map_err(|_| bad(at - 1, "bad matrix entry"))?;
                        map.set(i, j, v);
                    }
                }
                if tag == "d0" {
                    b.set_d0(m, n, map)?;
                } else {
                    b.set_d1(m, n, map)?;
                }
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::bicomplex::witness;
    use crate::specseq::generate::{random_bicomplex, GeneratorMode};

    #[test]
    fn round_trip_witness() {
        let b = witness(32003);
        let text = write_bicomplex(&b);
        let back = parse_bicomplex(&text).unwrap();
        assert_eq!(write_bicomplex(&back), text);
    }

    #[test]
    fn round_trip_random() {
        for seed in 0..5 {
            let b =
                random_bicomplex(GeneratorMode::Generic, 4, 3, 3, 32003, seed).unwrap();
            let text = write_bicomplex(&b);
            let back = parse_bicomplex(&text).unwrap();
            assert_eq!(write_bicomplex(&back), text);
            assert!(back.validate().is_empty());
        }
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(parse_bicomplex("nonsense").is_err());
        assert!(parse_bicomplex("specseq v2 7 1 1\ncell 0 0 1\n").is_err());
        let truncated = "specseq v1 32003 1 1\ncell 0 0 2\nd0 0 0 0 2\n";
        assert!(parse_bicomplex(truncated).is_err());
    }
}
