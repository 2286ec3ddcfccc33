//! Colour matrices over the rook's graph `K_p □ K_q`.
//!
//! A colouring of `K_p □ K_q` is stored as a `p × q` grid of dense colour ids.
//! Two cells are adjacent iff they share a row or a column, so the colouring is
//! proper iff every line (row or column) holds pairwise distinct colours, and
//! complete iff every unordered pair of palette colours is witnessed on some
//! line.
//!
//! Coordinates are 0-based in the API. Everything rendered for humans
//! (`Display`, error messages, reports) uses 1-based rows and columns.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

/// Dense index into a matrix palette.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ColourId(pub u32);

impl ColourId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ColourId {
    fn from(v: usize) -> Self {
        ColourId(v as u32)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column (got {p}x{q})")]
    EmptyShape { p: usize, q: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} entries, got {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("invalid colour token {token:?} at row {row}, column {col}")]
    InvalidToken {
        row: usize,
        col: usize,
        token: String,
    },
    #[error("entry at row {row}, column {col} refers to colour id {id} outside a palette of {palette} colours")]
    IdOutOfRange {
        row: usize,
        col: usize,
        id: u32,
        palette: usize,
    },
    #[error("palette colour {token:?} never occurs in the matrix")]
    PhantomColour { token: String },
    #[error("palette token {token:?} is listed twice")]
    DuplicateToken { token: String },
    #[error("unknown colour {0:?}")]
    UnknownColour(String),
    #[error("a pair needs two distinct colours, got {0:?} twice")]
    SameColour(String),
    #[error("{what} map is not a bijection of [1, {size}]")]
    NotBijective { what: &'static str, size: usize },
}

/// Row or column of a matrix (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Line::Row(i) => write!(f, "row {}", i + 1),
            Line::Column(j) => write!(f, "column {}", j + 1),
        }
    }
}

/// First repeated colour found on a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineViolation {
    pub line: Line,
    pub colour: ColourId,
    /// Positions of the two clashing cells along the line (0-based).
    pub positions: (usize, usize),
}

/// Verdict for a single unordered colour pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub pair: (ColourId, ColourId),
    pub row_based: bool,
    pub column_based: bool,
}

impl PairVerdict {
    pub fn is_good(&self) -> bool {
        self.row_based || self.column_based
    }
}

/// A permutation of `[0, n)` given as the image list `map[i] = image of i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bijection(Vec<usize>);

impl Bijection {
    pub fn identity(n: usize) -> Self {
        Bijection((0..n).collect())
    }

    pub fn new(map: Vec<usize>) -> Option<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Bijection(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Triangular bitset over unordered colour pairs.
#[derive(Clone, Debug)]
struct PairSet {
    bits: FixedBitSet,
}

impl PairSet {
    fn new(colours: usize) -> Self {
        PairSet {
            bits: FixedBitSet::with_capacity(colours * colours.saturating_sub(1) / 2),
        }
    }

    #[inline]
    fn index(a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        hi * (hi - 1) / 2 + lo
    }

    #[inline]
    fn insert(&mut self, a: usize, b: usize) {
        self.bits.insert(Self::index(a, b));
    }

    #[inline]
    fn contains(&self, a: usize, b: usize) -> bool {
        self.bits.contains(Self::index(a, b))
    }
}

/// Row- and column-based good pairs of a matrix, one pass per line.
#[derive(Clone, Debug)]
pub struct PairCoverage {
    colours: usize,
    row_based: PairSet,
    column_based: PairSet,
}

impl PairCoverage {
    pub fn verdict(&self, a: ColourId, b: ColourId) -> PairVerdict {
        let (x, y) = (a.index(), b.index());
        PairVerdict {
            pair: (a.min(b), a.max(b)),
            row_based: self.row_based.contains(x, y),
            column_based: self.column_based.contains(x, y),
        }
    }

    pub fn is_good(&self, a: ColourId, b: ColourId) -> bool {
        let (x, y) = (a.index(), b.index());
        self.row_based.contains(x, y) || self.column_based.contains(x, y)
    }

    /// All bad pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn bad_pairs(&self) -> Vec<(ColourId, ColourId)> {
        let mut out = Vec::new();
        for b in 1..self.colours {
            for a in 0..b {
                if !self.row_based.contains(a, b) && !self.column_based.contains(a, b) {
                    out.push((ColourId::from(a), ColourId::from(b)));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Result of a completeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completeness {
    /// Every pair that is neither row- nor column-based, sorted.
    pub bad_pairs: Vec<(ColourId, ColourId)>,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        self.bad_pairs.is_empty()
    }
}

/// A `p × q` colour matrix with a palette of display tokens.
///
/// Invariants: every entry indexes the palette, every palette colour occurs,
/// and palette tokens are pairwise distinct. Values are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColourMatrix {
    p: usize,
    q: usize,
    entries: Vec<ColourId>,
    palette: Vec<String>,
}

fn check_token(token: &str, row: usize, col: usize) -> Result<(), MatrixError> {
    if token.is_empty() || token.starts_with('#') || token.chars().any(char::is_whitespace) {
        return Err(MatrixError::InvalidToken {
            row: row + 1,
            col: col + 1,
            token: token.to_string(),
        });
    }
    Ok(())
}

impl ColourMatrix {
    /// Builds a matrix from rows of tokens. The palette lists the distinct
    /// tokens in row-major first-appearance order.
    pub fn from_tokens<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, MatrixError> {
        let p = rows.len();
        let q = rows.first().map_or(0, Vec::len);
        if p == 0 || q == 0 {
            return Err(MatrixError::EmptyShape { p, q });
        }
        let mut palette: Vec<String> = Vec::new();
        let mut lookup = std::collections::HashMap::new();
        let mut entries = Vec::with_capacity(p * q);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(MatrixError::Ragged {
                    row: i + 1,
                    expected: q,
                    found: row.len(),
                });
            }
            for (j, tok) in row.iter().enumerate() {
                let tok = tok.as_ref();
                check_token(tok, i, j)?;
                let id = *lookup.entry(tok.to_string()).or_insert_with(|| {
                    palette.push(tok.to_string());
                    palette.len() - 1
                });
                entries.push(ColourId::from(id));
            }
        }
        Ok(ColourMatrix {
            p,
            q,
            entries,
            palette,
        })
    }

    /// Builds a matrix from raw ids (row-major) and an explicit palette.
    pub fn from_ids(
        p: usize,
        q: usize,
        entries: Vec<ColourId>,
        palette: Vec<String>,
    ) -> Result<Self, MatrixError> {
        if p == 0 || q == 0 {
            return Err(MatrixError::EmptyShape { p, q });
        }
        if entries.len() != p * q {
            return Err(MatrixError::EntryCount {
                expected: p * q,
                found: entries.len(),
            });
        }
        let mut seen_tok = std::collections::HashSet::new();
        for tok in &palette {
            if !seen_tok.insert(tok.as_str()) {
                return Err(MatrixError::DuplicateToken { token: tok.clone() });
            }
        }
        let mut occurs = vec![false; palette.len()];
        for (idx, c) in entries.iter().enumerate() {
            if c.index() >= palette.len() {
                return Err(MatrixError::IdOutOfRange {
                    row: idx / q + 1,
                    col: idx % q + 1,
                    id: c.0,
                    palette: palette.len(),
                });
            }
            occurs[c.index()] = true;
        }
        for (idx, tok) in palette.iter().enumerate() {
            check_token(tok, 0, 0).map_err(|_| MatrixError::InvalidToken {
                row: 0,
                col: 0,
                token: tok.clone(),
            })?;
            if !occurs[idx] {
                return Err(MatrixError::PhantomColour { token: tok.clone() });
            }
        }
        Ok(ColourMatrix {
            p,
            q,
            entries,
            palette,
        })
    }

    /// Like [`ColourMatrix::from_ids`] with tokens `c0, c1, ...`.
    pub fn from_ids_default_palette(
        p: usize,
        q: usize,
        entries: Vec<ColourId>,
    ) -> Result<Self, MatrixError> {
        let k = entries.iter().map(|c| c.index() + 1).max().unwrap_or(0);
        let palette = (0..k).map(|c| format!("c{c}")).collect();
        Self::from_ids(p, q, entries, palette)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn colour_count(&self) -> usize {
        self.palette.len()
    }

    pub fn palette(&self) -> &[String] {
        &self.palette
    }

    pub fn entries(&self) -> &[ColourId] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ColourId {
        self.entries[i * self.q + j]
    }

    pub fn row(&self, i: usize) -> &[ColourId] {
        &self.entries[i * self.q..(i + 1) * self.q]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = ColourId> + '_ {
        (0..self.p).map(move |i| self.get(i, j))
    }

    pub fn token(&self, c: ColourId) -> &str {
        &self.palette[c.index()]
    }

    pub fn colour_of(&self, token: &str) -> Option<ColourId> {
        self.palette
            .iter()
            .position(|t| t == token)
            .map(ColourId::from)
    }

    /// Rows of tokens, for rendering.
    pub fn token_rows(&self) -> Vec<Vec<&str>> {
        (0..self.p)
            .map(|i| self.row(i).iter().map(|&c| self.token(c)).collect())
            .collect()
    }

    /// Renumbers colours in row-major first-appearance order, keeping tokens.
    pub fn canonical(&self) -> ColourMatrix {
        let rows = self.token_rows();
        ColourMatrix::from_tokens(&rows).expect("tokens of a valid matrix are valid")
    }

    /// First line with a repeated colour, scanning rows then columns.
    pub fn first_proper_violation(&self) -> Option<LineViolation> {
        let k = self.colour_count();
        let mut last = vec![usize::MAX; k];
        for i in 0..self.p {
            for (j, &c) in self.row(i).iter().enumerate() {
                let slot = &mut last[c.index()];
                if *slot != usize::MAX && *slot / self.q == i {
                    return Some(LineViolation {
                        line: Line::Row(i),
                        colour: c,
                        positions: (*slot % self.q, j),
                    });
                }
                *slot = i * self.q + j;
            }
        }
        let mut last_row = vec![(usize::MAX, 0usize); k];
        for j in 0..self.q {
            for i in 0..self.p {
                let c = self.get(i, j);
                let slot = &mut last_row[c.index()];
                if slot.0 == j {
                    return Some(LineViolation {
                        line: Line::Column(j),
                        colour: c,
                        positions: (slot.1, i),
                    });
                }
                *slot = (j, i);
            }
        }
        None
    }

    pub fn is_proper(&self) -> bool {
        self.first_proper_violation().is_none()
    }

    /// Marks every pair sharing a line. `O(p·q² + q·p²)` insertions.
    pub fn pair_coverage(&self) -> PairCoverage {
        let k = self.colour_count();
        let mut row_based = PairSet::new(k);
        let mut column_based = PairSet::new(k);
        for i in 0..self.p {
            let row = self.row(i);
            for (a, &x) in row.iter().enumerate() {
                for &y in &row[a + 1..] {
                    if x != y {
                        row_based.insert(x.index(), y.index());
                    }
                }
            }
        }
        let mut col = Vec::with_capacity(self.p);
        for j in 0..self.q {
            col.clear();
            col.extend(self.column(j));
            for (a, &x) in col.iter().enumerate() {
                for &y in &col[a + 1..] {
                    if x != y {
                        column_based.insert(x.index(), y.index());
                    }
                }
            }
        }
        PairCoverage {
            colours: k,
            row_based,
            column_based,
        }
    }

    pub fn pair_verdict(&self, a: ColourId, b: ColourId) -> Result<PairVerdict, MatrixError> {
        let k = self.colour_count();
        for c in [a, b] {
            if c.index() >= k {
                return Err(MatrixError::UnknownColour(format!("#{}", c.0)));
            }
        }
        if a == b {
            return Err(MatrixError::SameColour(self.token(a).to_string()));
        }
        // Two lines' worth of work is enough for a single pair.
        let mut row_based = false;
        let mut column_based = false;
        for i in 0..self.p {
            let row = self.row(i);
            if row.contains(&a) && row.contains(&b) {
                row_based = true;
                break;
            }
        }
        for j in 0..self.q {
            let (mut has_a, mut has_b) = (false, false);
            for c in self.column(j) {
                has_a |= c == a;
                has_b |= c == b;
            }
            if has_a && has_b {
                column_based = true;
                break;
            }
        }
        Ok(PairVerdict {
            pair: (a.min(b), a.max(b)),
            row_based,
            column_based,
        })
    }

    /// Token-level convenience over [`ColourMatrix::pair_verdict`].
    pub fn pair_verdict_by_token(&self, a: &str, b: &str) -> Result<PairVerdict, MatrixError> {
        let ca = self
            .colour_of(a)
            .ok_or_else(|| MatrixError::UnknownColour(a.to_string()))?;
        let cb = self
            .colour_of(b)
            .ok_or_else(|| MatrixError::UnknownColour(b.to_string()))?;
        self.pair_verdict(ca, cb)
    }

    pub fn completeness(&self) -> Completeness {
        Completeness {
            bad_pairs: self.pair_coverage().bad_pairs(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.completeness().is_complete()
    }

    /// Proper and complete, i.e. the matrix encodes a proper complete
    /// colouring of `K_p □ K_q` with exactly `colour_count()` colours.
    pub fn is_member(&self) -> bool {
        self.is_proper() && self.is_complete()
    }

    /// `result[i][j] = colours(self[rows(i)][cols(j)])`. The palette keeps its
    /// order, so a non-identity colour map changes which token a cell shows.
    pub fn permute(
        &self,
        rows: &Bijection,
        cols: &Bijection,
        colours: &Bijection,
    ) -> Result<ColourMatrix, MatrixError> {
        if rows.len() != self.p {
            return Err(MatrixError::NotBijective {
                what: "row",
                size: self.p,
            });
        }
        if cols.len() != self.q {
            return Err(MatrixError::NotBijective {
                what: "column",
                size: self.q,
            });
        }
        if colours.len() != self.colour_count() {
            return Err(MatrixError::NotBijective {
                what: "colour",
                size: self.colour_count(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.p {
            for j in 0..self.q {
                let c = self.get(rows.apply(i), cols.apply(j));
                entries.push(ColourId::from(colours.apply(c.index())));
            }
        }
        Ok(ColourMatrix {
            p: self.p,
            q: self.q,
            entries,
            palette: self.palette.clone(),
        })
    }
}

impl fmt::Display for ColourMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.p {
            let line: Vec<&str> = self.row(i).iter().map(|&c| self.token(c)).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> ColourMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ColourMatrix::from_tokens(&rows).unwrap()
    }

    #[test]
    fn singleton() {
        let a = m(&[&["a"]]);
        assert_eq!(a.palette(), ["a"]);
        assert_eq!(a.get(0, 0), ColourId(0));
        assert!(a.is_proper());
        assert!(a.is_member());
    }

    #[test]
    fn two_by_two_latin() {
        let a = m(&[&["a", "b"], &["b", "a"]]);
        assert_eq!(a.colour_count(), 2);
        let v = a.pair_verdict_by_token("a", "b").unwrap();
        assert!(v.row_based && v.column_based);
        assert!(a.is_complete());
    }

    #[test]
    fn ragged_and_empty_tokens_rejected() {
        let rows = vec![vec!["a", "b"], vec!["c"]];
        assert!(matches!(
            ColourMatrix::from_tokens(&rows),
            Err(MatrixError::Ragged { row: 2, .. })
        ));
        let rows = vec![vec!["a", ""]];
        assert!(matches!(
            ColourMatrix::from_tokens(&rows),
            Err(MatrixError::InvalidToken { row: 1, col: 2, .. })
        ));
    }

    #[test]
    fn repeated_row_colour() {
        let a = m(&[&["a", "a"]]);
        let v = a.first_proper_violation().unwrap();
        assert_eq!(v.line, Line::Row(0));
        assert_eq!(a.token(v.colour), "a");
        assert_eq!(v.positions, (0, 1));
        assert!(!a.is_member());
        assert_eq!(v.line.to_string(), "row 1");
    }

    #[test]
    fn repeated_column_colour() {
        let a = m(&[&["a", "b"], &["c", "b"]]);
        let v = a.first_proper_violation().unwrap();
        assert_eq!(v.line, Line::Column(1));
        assert_eq!(a.token(v.colour), "b");
    }

    #[test]
    fn single_lines_are_complete() {
        assert!(m(&[&["a", "b", "c"]]).is_member());
        assert!(m(&[&["a"], &["b"], &["c"]]).is_member());
    }

    #[test]
    fn bad_pairs_sorted() {
        // a b / c d : {a,d} and {b,c} are never on a common line.
        let a = m(&[&["a", "b"], &["c", "d"]]);
        let bad = a.completeness().bad_pairs;
        assert_eq!(bad, vec![(ColourId(0), ColourId(3)), (ColourId(1), ColourId(2))]);
    }

    #[test]
    fn pair_verdict_errors() {
        let a = m(&[&["a", "b"], &["b", "a"]]);
        assert!(matches!(
            a.pair_verdict(ColourId(0), ColourId(0)),
            Err(MatrixError::SameColour(_))
        ));
        assert!(matches!(
            a.pair_verdict_by_token("a", "z"),
            Err(MatrixError::UnknownColour(_))
        ));
    }

    #[test]
    fn permute_swaps_rows() {
        let a = m(&[&["a", "b"], &["b", "a"]]);
        let swapped = a
            .permute(
                &Bijection::new(vec![1, 0]).unwrap(),
                &Bijection::identity(2),
                &Bijection::identity(2),
            )
            .unwrap();
        assert_eq!(swapped.token_rows(), vec![vec!["b", "a"], vec!["a", "b"]]);
        let same = a
            .permute(
                &Bijection::identity(2),
                &Bijection::identity(2),
                &Bijection::identity(2),
            )
            .unwrap();
        assert_eq!(same, a);
    }

    #[test]
    fn bijection_validation() {
        assert!(Bijection::new(vec![0, 0]).is_none());
        assert!(Bijection::new(vec![0, 2]).is_none());
        assert!(Bijection::new(vec![1, 2, 0]).is_some());
        let a = m(&[&["a", "b"]]);
        assert!(a
            .permute(
                &Bijection::identity(2),
                &Bijection::identity(2),
                &Bijection::identity(2)
            )
            .is_err());
    }

    #[test]
    fn from_ids_rejects_phantom_and_range() {
        let r = ColourMatrix::from_ids(1, 2, vec![ColourId(0), ColourId(0)], vec!["a".into(), "b".into()]);
        assert!(matches!(r, Err(MatrixError::PhantomColour { .. })));
        let r = ColourMatrix::from_ids(1, 1, vec![ColourId(3)], vec!["a".into()]);
        assert!(matches!(r, Err(MatrixError::IdOutOfRange { .. })));
        let r = ColourMatrix::from_ids(1, 2, vec![ColourId(0), ColourId(1)], vec!["a".into(), "a".into()]);
        assert!(matches!(r, Err(MatrixError::DuplicateToken { .. })));
    }
}
