//! Explicit member matrices.
//!
//! [`odd_q_matrix`] builds the `6 × q` matrix with `2q + 3` colours for odd
//! `q ≥ 7`. With `s = (q − 3) / 2`, the palette consists of nine head colours
//! `1..9` and four blocks `x, y, z, t` of `s` colours each:
//!
//! ```text
//! 1 2 3 | x_1 .. x_s         | y_1 .. y_s
//! 4 5 6 | x_s x_1 .. x_{s-1} | z_1 .. z_s
//! 7 8 9 | t_1 .. t_s         | x_1 .. x_s
//! 3 1 2 | z_1 .. z_s         | t_1 .. t_s
//! 5 6 4 | t_s t_1 .. t_{s-1} | y_s y_1 .. y_{s-1}
//! 8 9 7 | y_1 .. y_s         | z_s z_1 .. z_{s-1}
//! ```

use thiserror::Error;

use crate::matrix::{ColourMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("q must be odd and at least 7, got {0}")]
    InvalidQ(usize),
    #[error("clique order must be at least 1")]
    EmptyClique,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Shape parameters of the odd-`q` construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionLayout {
    pub q: usize,
    pub block_size: usize,
}

impl ConstructionLayout {
    pub fn new(q: usize) -> Result<Self, ConstructionError> {
        if q < 7 || q % 2 == 0 {
            return Err(ConstructionError::InvalidQ(q));
        }
        Ok(ConstructionLayout {
            q,
            block_size: (q - 3) / 2,
        })
    }

    pub fn colour_count(&self) -> usize {
        4 * self.block_size + 9
    }

    /// Previous block position, cyclically: `j ↦ ((j − 2) mod s) + 1` (1-based).
    fn shifted(&self, j: usize) -> usize {
        (j + self.block_size - 2) % self.block_size + 1
    }
}

const HEAD: [[&str; 3]; 6] = [
    ["1", "2", "3"],
    ["4", "5", "6"],
    ["7", "8", "9"],
    ["3", "1", "2"],
    ["5", "6", "4"],
    ["8", "9", "7"],
];

/// Block letter and whether the index is cyclically shifted, per row, for the
/// first and second block of columns.
const FIRST_BLOCK: [(char, bool); 6] = [
    ('x', false),
    ('x', true),
    ('t', false),
    ('z', false),
    ('t', true),
    ('y', false),
];
const SECOND_BLOCK: [(char, bool); 6] = [
    ('y', false),
    ('z', false),
    ('x', false),
    ('t', false),
    ('y', true),
    ('z', true),
];

/// Token rows of the construction, before palette interning.
pub fn odd_q_tokens(q: usize) -> Result<Vec<Vec<String>>, ConstructionError> {
    let layout = ConstructionLayout::new(q)?;
    let s = layout.block_size;
    let rows = (0..6)
        .map(|i| {
            let mut row: Vec<String> = HEAD[i].iter().map(|t| t.to_string()).collect();
            for (letter, shift) in [FIRST_BLOCK[i], SECOND_BLOCK[i]] {
                for j in 1..=s {
                    let idx = if shift { layout.shifted(j) } else { j };
                    row.push(format!("{letter}{idx}"));
                }
            }
            row
        })
        .collect();
    Ok(rows)
}

/// The `6 × q` member matrix with `2q + 3` colours, for odd `q ≥ 7`.
pub fn odd_q_matrix(q: usize) -> Result<ColourMatrix, ConstructionError> {
    let rows = odd_q_tokens(q)?;
    Ok(ColourMatrix::from_tokens(&rows)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

/// `1 × n` or `n × 1` matrix with `n` distinct colours `c0 .. c{n-1}`.
pub fn single_clique(n: usize, orientation: Orientation) -> Result<ColourMatrix, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::EmptyClique);
    }
    let tokens: Vec<String> = (0..n).map(|c| format!("c{c}")).collect();
    let rows = match orientation {
        Orientation::Row => vec![tokens],
        Orientation::Column => tokens.into_iter().map(|t| vec![t]).collect(),
    };
    Ok(ColourMatrix::from_tokens(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::FrequencyTable;

    #[test]
    fn q7_matches_display() {
        let rows = odd_q_tokens(7).unwrap();
        let expect = [
            "1 2 3 x1 x2 y1 y2",
            "4 5 6 x2 x1 z1 z2",
            "7 8 9 t1 t2 x1 x2",
            "3 1 2 z1 z2 t1 t2",
            "5 6 4 t2 t1 y2 y1",
            "8 9 7 y1 y2 z2 z1",
        ];
        for (row, e) in rows.iter().zip(expect) {
            assert_eq!(row.join(" "), e);
        }
        let m = odd_q_matrix(7).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 7));
        assert_eq!(m.colour_count(), 17);
        assert!(m.is_member());
    }

    #[test]
    fn q9_frequencies() {
        let m = odd_q_matrix(9).unwrap();
        assert_eq!(m.colour_count(), 21);
        let f = FrequencyTable::new(&m);
        for h in 1..=9 {
            let c = m.colour_of(&h.to_string()).unwrap();
            assert_eq!(f.frequency(c), 2, "head colour {h}");
        }
        for letter in ["x", "y", "z", "t"] {
            for j in 1..=3 {
                let c = m.colour_of(&format!("{letter}{j}")).unwrap();
                assert_eq!(f.frequency(c), 3);
            }
        }
    }

    #[test]
    fn cyclic_shift_for_q11() {
        let rows = odd_q_tokens(11).unwrap();
        // s = 4: row 2 first block reads x4 x1 x2 x3.
        assert_eq!(rows[1][3..7], ["x4", "x1", "x2", "x3"]);
        assert_eq!(rows[5][7..11], ["z4", "z1", "z2", "z3"]);
    }

    #[test]
    fn rejects_bad_q() {
        for q in [0, 1, 5, 6, 8, 40] {
            assert_eq!(odd_q_matrix(q), Err(ConstructionError::InvalidQ(q)));
        }
    }

    #[test]
    fn cliques() {
        let one = single_clique(1, Orientation::Row).unwrap();
        assert_eq!(one.token_rows(), vec![vec!["c0"]]);
        let row = single_clique(3, Orientation::Row).unwrap();
        assert_eq!((row.rows(), row.cols(), row.colour_count()), (1, 3, 3));
        assert!(row.is_member());
        let col = single_clique(6, Orientation::Column).unwrap();
        assert_eq!((col.rows(), col.cols(), col.colour_count()), (6, 1, 6));
        assert!(col.is_member());
        assert_eq!(single_clique(0, Orientation::Row), Err(ConstructionError::EmptyClique));
    }
}
