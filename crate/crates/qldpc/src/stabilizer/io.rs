//! Text formats: check matrices (`qldpc v1` header plus `n:k` tokens for
//! ζ^k entries), binary matrices, syndromes and error vectors.

use std::path::Path;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use crate::stabilizer::{BinaryMatrix, CheckMatrix};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Serializes a check matrix: header `qldpc v1 l=<l> M=<M> N=<N>`, then one
/// line per row of space-separated `n:k` tokens (column n holds ζ^k,
/// 1-indexed; zero entries are omitted).
pub fn format_check_matrix(tables: &FieldTables, matrix: &CheckMatrix) -> String {
    let mut out = format!(
        "qldpc v1 l={} M={} N={}\n",
        matrix.l(),
        matrix.num_checks(),
        matrix.num_symbols()
    );
    for m in 0..matrix.num_checks() {
        let tokens: Vec<String> = matrix
            .row(m)
            .iter()
            .map(|&(n, v)| {
                let k = tables.exponent(v).expect("stored entries are nonzero");
                format!("{}:{}", n + 1, k)
            })
            .collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_check_matrix(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, format_check_matrix(tables, matrix))?;
    Ok(())
}

pub fn parse_check_matrix(text: &str) -> Result<CheckMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut l = None;
    let mut m_count = None;
    let mut n_count = None;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("qldpc") || fields.next() != Some("v1") {
        return Err(parse_err(1, "expected header starting with 'qldpc v1'"));
    }
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("bad header field '{field}'")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_err(1, format!("bad header value '{field}'")))?;
        match key {
            "l" => l = Some(value),
            "M" => m_count = Some(value),
            "N" => n_count = Some(value),
            _ => return Err(parse_err(1, format!("unknown header key '{key}'"))),
        }
    }
    let l = l.ok_or_else(|| parse_err(1, "header missing l="))?;
    let m_count = m_count.ok_or_else(|| parse_err(1, "header missing M="))?;
    let n_count = n_count.ok_or_else(|| parse_err(1, "header missing N="))?;
    let tables = FieldTables::new(l)?;
    let q2 = tables.q2();

    let mut rows = Vec::with_capacity(m_count);
    for m in 0..m_count {
        let line_no = m + 2;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(line_no, format!("expected {m_count} rows")))?;
        let mut row: Vec<(usize, FieldElement)> = Vec::new();
        for token in line.split_whitespace() {
            let (col, exp) = token
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, format!("bad token '{token}'")))?;
            let n: usize = col
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad column in '{token}'")))?;
            if n == 0 || n > n_count {
                return Err(parse_err(
                    line_no,
                    format!("column {n} outside 1..={n_count}"),
                ));
            }
            if exp == "-" {
                continue;
            }
            let k: usize = exp
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad exponent in '{token}'")))?;
            if k >= q2 - 1 {
                return Err(parse_err(
                    line_no,
                    format!("exponent {k} outside 0..={}", q2 - 2),
                ));
            }
            if row.iter().any(|&(seen, _)| seen == n - 1) {
                return Err(parse_err(line_no, format!("column {n} repeated")));
            }
            row.push((n - 1, tables.pow(tables.omega(), k as i64)));
        }
        rows.push(row);
    }
    for (extra, line) in lines.enumerate() {
        if !line.trim().is_empty() {
            return Err(parse_err(
                m_count + 2 + extra,
                "unexpected content after last row",
            ));
        }
    }
    CheckMatrix::new(l, n_count, rows)
}

pub fn read_check_matrix(path: impl AsRef<Path>) -> Result<CheckMatrix> {
    parse_check_matrix(&std::fs::read_to_string(path)?)
}

/// Error vectors are whitespace-separated tokens, one per symbol: `-` for
/// zero, `z<k>` for ζ^k, and for l = 1 also the Pauli letters I, X, Y, Z
/// (X ↔ ω, Z ↔ ω², Y ↔ 1).
pub fn format_error_vector(tables: &FieldTables, v: &[FieldElement]) -> String {
    v.iter()
        .map(|&u| match tables.exponent(u) {
            None => "-".to_string(),
            Some(k) => format!("z{k}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_error_vector(tables: &FieldTables, text: &str) -> Result<Vec<FieldElement>> {
    let omega = tables.omega();
    text.split_whitespace()
        .enumerate()
        .map(|(i, token)| {
            let bad = |msg: String| parse_err(1, format!("token {}: {msg}", i + 1));
            if token == "-" {
                return Ok(FieldElement::ZERO);
            }
            if let Some(exp) = token.strip_prefix('z') {
                let k: usize = exp
                    .parse()
                    .map_err(|_| bad(format!("bad exponent '{token}'")))?;
                if k >= tables.q2() - 1 {
                    return Err(bad(format!("exponent {k} outside 0..={}", tables.q2() - 2)));
                }
                return Ok(tables.pow(omega, k as i64));
            }
            if tables.l() == 1 {
                match token {
                    "I" => return Ok(FieldElement::ZERO),
                    "X" => return Ok(omega),
                    "Y" => return Ok(FieldElement::ONE),
                    "Z" => return Ok(tables.conj(omega)),
                    _ => {}
                }
            }
            Err(bad(format!("unknown token '{token}'")))
        })
        .collect()
}

pub fn read_error_vector(tables: &FieldTables, path: impl AsRef<Path>) -> Result<Vec<FieldElement>> {
    parse_error_vector(tables, &std::fs::read_to_string(path)?)
}

/// Syndrome files hold one 0/1 character per check in row order; whitespace
/// is ignored.
pub fn parse_syndrome(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(parse_err(1, format!("bad syndrome character '{other}'"))),
        })
        .collect()
}

pub fn read_syndrome(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    parse_syndrome(&std::fs::read_to_string(path)?)
}

/// Binary matrices are lines of 0/1 characters, one row per line.
pub fn parse_binary_matrix(text: &str) -> Result<BinaryMatrix> {
    let rows: Vec<Vec<u8>> = text
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            line.trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(parse_err(i + 1, format!("bad matrix character '{other}'"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    BinaryMatrix::from_rows(&rows)
}

pub fn read_binary_matrix(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
    parse_binary_matrix(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn check_matrix_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for l in 1..=4 {
            let t = FieldTables::new(l).unwrap();
            let n = 11;
            let dense: Vec<Vec<FieldElement>> = (0..5)
                .map(|_| {
                    (0..n)
                        .map(|_| FieldElement(rng.random_range(0..t.q2()) as u8))
                        .collect()
                })
                .collect();
            let h = CheckMatrix::from_dense(l, &dense).unwrap();
            let text = format_check_matrix(&t, &h);
            let parsed = parse_check_matrix(&text).unwrap();
            assert_eq!(parsed.l(), l);
            assert_eq!(parsed.num_checks(), h.num_checks());
            for m in 0..h.num_checks() {
                assert_eq!(parsed.dense_row(m), h.dense_row(m));
            }
        }
    }

    #[test]
    fn two_by_three_example_parses_to_expected_adjacency() {
        let text = "qldpc v1 l=1 M=2 N=3\n1:0 2:1\n1:2 2:0 3:1\n";
        let h = parse_check_matrix(text).unwrap();
        let t = FieldTables::new(1).unwrap();
        let om = t.omega();
        assert_eq!(
            h.row(0).iter().map(|&(n, _)| n).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(
            h.row(1).iter().map(|&(n, _)| n).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(h.dense_row(0), vec![FieldElement::ONE, om, FieldElement::ZERO]);
        assert_eq!(h.dense_row(1), vec![t.mul(om, om), FieldElement::ONE, om]);
        // column adjacency
        assert_eq!(h.col(2).len(), 1);
        assert_eq!(h.col(0).len(), 2);
    }

    #[test]
    fn explicit_zero_token_is_skipped() {
        let h = parse_check_matrix("qldpc v1 l=1 M=1 N=3\n1:0 2:- 3:1\n").unwrap();
        assert_eq!(h.row(0).len(), 2);
    }

    #[test]
    fn malformed_exponent_reports_line() {
        let err = parse_check_matrix("qldpc v1 l=1 M=2 N=3\n1:0\n2:3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_header_and_columns_are_rejected() {
        assert!(parse_check_matrix("qldpc v2 l=1 M=0 N=0\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=0\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=1 N=3\n4:0\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=1 N=3\n0:0\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=1 N=3\n1:0 1:1\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=1 N=3\nx\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=2 N=3\n1:0\n").is_err());
        assert!(parse_check_matrix("qldpc v1 l=1 M=1 N=3\n1:0\n2:0\n").is_err());
    }

    #[test]
    fn error_vector_tokens_roundtrip() {
        let t = FieldTables::new(1).unwrap();
        let om = t.omega();
        let v = parse_error_vector(&t, "z0 - - - - - z1").unwrap();
        assert_eq!(v[0], FieldElement::ONE);
        assert_eq!(v[6], om);
        assert!(v[1..6].iter().all(|u| u.is_zero()));
        let text = format_error_vector(&t, &v);
        assert_eq!(parse_error_vector(&t, &text).unwrap(), v);
    }

    #[test]
    fn pauli_letters_map_per_basis_convention() {
        let t = FieldTables::new(1).unwrap();
        let v = parse_error_vector(&t, "Y I X Z").unwrap();
        let om = t.omega();
        assert_eq!(v, vec![FieldElement::ONE, FieldElement::ZERO, om, t.conj(om)]);
        // ω + ω² = 1
        assert_eq!(t.add(om, t.conj(om)), FieldElement::ONE);
        let t2 = FieldTables::new(2).unwrap();
        assert!(parse_error_vector(&t2, "X").is_err());
        assert!(parse_error_vector(&t, "z3").is_err());
        assert!(parse_error_vector(&t, "q").is_err());
    }

    #[test]
    fn syndrome_parsing() {
        assert_eq!(parse_syndrome("0110\n").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_syndrome("0 1\n1 0").unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_syndrome("012").is_err());
    }

    #[test]
    fn binary_matrix_parsing() {
        let m = parse_binary_matrix("101\n010\n\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert!(m.get(0, 0) && !m.get(1, 0));
        assert!(parse_binary_matrix("10\n1\n").is_err());
        assert!(parse_binary_matrix("102\n").is_err());
    }

    #[test]
    fn file_roundtrip_via_tempdir() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("code.txt");
        let t = FieldTables::new(2).unwrap();
        let h = CheckMatrix::new(
            2,
            4,
            vec![
                vec![(0, FieldElement(5)), (3, FieldElement(1))],
                vec![(1, FieldElement(9))],
            ],
        )
        .unwrap();
        write_check_matrix(&t, &h, &path).unwrap();
        let back = read_check_matrix(&path).unwrap();
        assert_eq!(back.dense_row(0), h.dense_row(0));
        assert_eq!(back.dense_row(1), h.dense_row(1));
    }
}
