//! Plain-text matrix files.
//!
//! ```text
//! # optional comments
//! 6 7
//! 1 2 3 x1 x2 y1 y2
//! ...
//! ```
//!
//! The header gives `p q`, followed by `p` lines of `q` whitespace-separated
//! tokens. Lines whose first non-blank character is `#` and blank lines are
//! ignored when parsing. Rendering uses single spaces and LF line endings.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::matrix::{ColourMatrix, MatrixError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing header line \"p q\"")]
    MissingHeader,
    #[error("line {line}: bad header {text:?}, expected two positive integers \"p q\"")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: expected {expected} tokens, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub fn parse_matrix(text: &str) -> Result<ColourMatrix, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let bad_header = || ParseError::BadHeader {
        line: hline,
        text: header.to_string(),
    };
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| bad_header()))
        .collect::<Result<_, _>>()?;
    let [p, q] = dims[..] else {
        return Err(bad_header());
    };
    if p == 0 || q == 0 {
        return Err(bad_header());
    }

    let mut rows: Vec<Vec<&str>> = Vec::with_capacity(p);
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != q {
            return Err(ParseError::Ragged {
                line: n,
                expected: q,
                found: toks.len(),
            });
        }
        rows.push(toks);
    }
    if rows.len() != p {
        return Err(ParseError::RowCount {
            expected: p,
            found: rows.len(),
        });
    }
    Ok(ColourMatrix::from_tokens(&rows)?)
}

pub fn render_matrix(m: &ColourMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    out.push_str(&m.to_string());
    out
}

pub fn read_matrix_file(path: &Path) -> Result<(ColourMatrix, Vec<u8>), ParseError> {
    let bytes = fs::read(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let m = parse_matrix(&text)?;
    Ok((m, bytes))
}

pub fn write_matrix_file(path: &Path, m: &ColourMatrix) -> std::io::Result<()> {
    fs::write(path, render_matrix(m))
}

/// `x12` becomes `x_{12}`; other tokens pass through.
fn latex_token(token: &str) -> String {
    let split = token.find(|c: char| c.is_ascii_digit());
    match split {
        Some(at) if at > 0 && token[at..].chars().all(|c| c.is_ascii_digit()) => {
            format!("{}_{{{}}}", &token[..at], &token[at..])
        }
        _ => token.to_string(),
    }
}

/// The matrix as a LaTeX `pmatrix`.
pub fn render_latex(m: &ColourMatrix) -> String {
    let mut out = String::from("\\begin{pmatrix}\n");
    for (i, row) in m.token_rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|t| latex_token(t)).collect();
        out.push_str(&cells.join(" & "));
        if i + 1 < m.rows() {
            out.push_str(" \\\\");
        }
        out.push('\n');
    }
    out.push_str("\\end{pmatrix}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_spacing() {
        let text = "# a comment\n2 2\n\na   b\n  # another\nb\ta\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.token_rows(), vec![vec!["a", "b"], vec!["b", "a"]]);
        assert_eq!(render_matrix(&m), "2 2\na b\nb a\n");
    }

    #[test]
    fn ragged_rows() {
        let err = parse_matrix("2 2\na b\nc\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Ragged {
                line: 3,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn header_and_row_count() {
        assert!(matches!(parse_matrix(""), Err(ParseError::MissingHeader)));
        assert!(matches!(parse_matrix("2\n"), Err(ParseError::BadHeader { .. })));
        assert!(matches!(parse_matrix("0 2\n"), Err(ParseError::BadHeader { .. })));
        assert!(matches!(parse_matrix("x y\n"), Err(ParseError::BadHeader { .. })));
        assert!(matches!(
            parse_matrix("2 1\na\n"),
            Err(ParseError::RowCount {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_matrix("1 1\na\nb\n"),
            Err(ParseError::RowCount { .. })
        ));
    }

    #[test]
    fn latex_layout() {
        let m = parse_matrix("2 2\n1 x1\nx12 1\n").unwrap();
        assert_eq!(
            render_latex(&m),
            "\\begin{pmatrix}\n1 & x_{1} \\\\\nx_{12} & 1\n\\end{pmatrix}\n"
        );
    }
}
