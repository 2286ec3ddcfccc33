//! Frequency classes and row/column colour-set statistics of a colour matrix.
//!
//! Notation follows the usual one for `K_p □ K_q` colourings: a colour of
//! frequency `l` is an *l-colour*, `C_l` is the set of l-colours and `C_{l+}`
//! the set of colours with frequency at least `l`. `ro(i)` / `co(j)` are the
//! colour sets of row `i` / column `j`, and for a row set `A` with `|A| ≥ 2`,
//! `ro(A)` is the set of `|A|`-colours present in every row of `A`.
//!
//! Everything is computed eagerly by [`Stats::new`], so a `Stats` value is
//! immutable and freely shareable.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::matrix::{ColourId, ColourMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("row set must contain at least two rows, got {0}")]
    RowSetTooSmall(usize),
    #[error("ro*(B) needs 3 <= |B| <= p-2 = {max}, got |B| = {size}")]
    StarSetSize { size: usize, max: isize },
    #[error("row {row} out of range for a matrix with {p} rows")]
    RowOutOfRange { row: usize, p: usize },
    #[error("column {col} out of range for a matrix with {q} columns")]
    ColumnOutOfRange { col: usize, q: usize },
    #[error("row {0} is listed twice")]
    DuplicateRow(usize),
    #[error("colour set must be non-empty")]
    EmptyColourSet,
    #[error("colour id {0} is not in the palette")]
    UnknownColour(u32),
}

/// Selects `C_l` (exactly `l`) or `C_{l+}` (at least `l`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreqClass {
    Exactly(usize),
    AtLeast(usize),
}

impl FreqClass {
    #[inline]
    pub fn admits(self, frequency: usize) -> bool {
        match self {
            FreqClass::Exactly(l) => frequency == l,
            FreqClass::AtLeast(l) => frequency >= l,
        }
    }
}

/// Per-colour appearance counts and the frequency classes they induce.
#[derive(Clone, Debug)]
pub struct FrequencyTable {
    counts: Vec<usize>,
    classes: BTreeMap<usize, Vec<ColourId>>,
}

impl FrequencyTable {
    pub fn new(m: &ColourMatrix) -> Self {
        let mut counts = vec![0usize; m.colour_count()];
        for c in m.entries() {
            counts[c.index()] += 1;
        }
        let mut classes: BTreeMap<usize, Vec<ColourId>> = BTreeMap::new();
        for (c, &n) in counts.iter().enumerate() {
            classes.entry(n).or_default().push(ColourId::from(c));
        }
        FrequencyTable { counts, classes }
    }

    /// `frq(γ)`.
    pub fn frequency(&self, c: ColourId) -> usize {
        self.counts[c.index()]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `frq(M)`, the minimum colour frequency.
    pub fn min_frequency(&self) -> usize {
        self.counts.iter().copied().min().unwrap_or(0)
    }

    pub fn max_frequency(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `C_l`, sorted by id.
    pub fn class(&self, l: usize) -> &[ColourId] {
        self.classes.get(&l).map_or(&[], Vec::as_slice)
    }

    /// `c_l`.
    pub fn class_size(&self, l: usize) -> usize {
        self.class(l).len()
    }

    /// `C_{l+}`, sorted by id.
    pub fn class_at_least(&self, l: usize) -> Vec<ColourId> {
        let mut v: Vec<ColourId> = self.classes.range(l..).flat_map(|(_, c)| c.iter().copied()).collect();
        v.sort_unstable();
        v
    }

    /// `c_{l+}`.
    pub fn class_size_at_least(&self, l: usize) -> usize {
        self.classes.range(l..).map(|(_, c)| c.len()).sum()
    }

    /// Non-empty classes as `(l, c_l)`, ascending in `l`.
    pub fn class_sizes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes.iter().map(|(&l, c)| (l, c.len()))
    }

    pub fn members(&self, class: FreqClass) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.counts.len());
        for (c, &n) in self.counts.iter().enumerate() {
            if class.admits(n) {
                s.insert(c);
            }
        }
        s
    }
}

/// Row and column colour sets plus the derived set queries.
#[derive(Clone, Debug)]
pub struct RowColumnStats {
    p: usize,
    q: usize,
    colours: usize,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
    rows_of: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

fn count(s: &FixedBitSet) -> usize {
    s.count_ones(..)
}

impl RowColumnStats {
    pub fn new(m: &ColourMatrix, freq: &FrequencyTable) -> Self {
        let (p, q, k) = (m.rows(), m.cols(), m.colour_count());
        let mut rows = vec![FixedBitSet::with_capacity(k); p];
        let mut cols = vec![FixedBitSet::with_capacity(k); q];
        let mut rows_of = vec![Vec::new(); k];
        for i in 0..p {
            for j in 0..q {
                let c = m.get(i, j).index();
                rows[i].insert(c);
                cols[j].insert(c);
            }
        }
        for (i, r) in rows.iter().enumerate() {
            for c in r.ones() {
                rows_of[c].push(i);
            }
        }
        RowColumnStats {
            p,
            q,
            colours: k,
            rows,
            cols,
            rows_of,
            counts: freq.counts().to_vec(),
        }
    }

    fn check_row(&self, i: usize) -> Result<(), StatsError> {
        if i >= self.p {
            return Err(StatsError::RowOutOfRange { row: i, p: self.p });
        }
        Ok(())
    }

    fn check_rows(&self, rows: &[usize]) -> Result<(), StatsError> {
        let mut seen = vec![false; self.p];
        for &i in rows {
            self.check_row(i)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(StatsError::DuplicateRow(i));
            }
        }
        Ok(())
    }

    fn class_mask(&self, class: FreqClass) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.colours);
        for (c, &n) in self.counts.iter().enumerate() {
            if class.admits(n) {
                s.insert(c);
            }
        }
        s
    }

    /// `ro(i)`.
    pub fn row_set(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    /// `co(j)`.
    pub fn col_set(&self, j: usize) -> &FixedBitSet {
        &self.cols[j]
    }

    /// `ro_k(i) = C_k ∩ ro(i)` for `k ∈ {l, l+}`.
    pub fn row_class(&self, i: usize, class: FreqClass) -> FixedBitSet {
        let mut s = self.rows[i].clone();
        s.intersect_with(&self.class_mask(class));
        s
    }

    /// `r_k(i)`.
    pub fn r_class(&self, i: usize, class: FreqClass) -> usize {
        self.rows[i]
            .ones()
            .filter(|&c| class.admits(self.counts[c]))
            .count()
    }

    /// `co_k(j) = C_k ∩ co(j)`.
    pub fn col_class(&self, j: usize, class: FreqClass) -> FixedBitSet {
        let mut s = self.cols[j].clone();
        s.intersect_with(&self.class_mask(class));
        s
    }

    /// `c_k(j)`.
    pub fn c_class(&self, j: usize, class: FreqClass) -> usize {
        self.cols[j]
            .ones()
            .filter(|&c| class.admits(self.counts[c]))
            .count()
    }

    /// Rows whose colour set contains `γ`, ascending.
    pub fn rows_of(&self, c: ColourId) -> &[usize] {
        &self.rows_of[c.index()]
    }

    /// `ro(A)`: the `|A|`-colours present in every row of `A`.
    pub fn shared(&self, rows: &[usize]) -> Result<FixedBitSet, StatsError> {
        if rows.len() < 2 {
            return Err(StatsError::RowSetTooSmall(rows.len()));
        }
        self.check_rows(rows)?;
        let mut s = self.class_mask(FreqClass::Exactly(rows.len()));
        for &i in rows {
            s.intersect_with(&self.rows[i]);
        }
        Ok(s)
    }

    /// `r(A) = |ro(A)|`.
    pub fn r(&self, rows: &[usize]) -> Result<usize, StatsError> {
        self.shared(rows).map(|s| count(&s))
    }

    /// `ro_{l+}(i, j) = C_{l+} ∩ ro(i) ∩ ro(j)`; `l = 3` gives `ro_{3+}(i, j)`.
    pub fn shared_pair_at_least(&self, i: usize, j: usize, l: usize) -> Result<FixedBitSet, StatsError> {
        self.check_rows(&[i, j])?;
        let mut s = self.class_mask(FreqClass::AtLeast(l));
        s.intersect_with(&self.rows[i]);
        s.intersect_with(&self.rows[j]);
        Ok(s)
    }

    /// `r_{3+}(i, j)`.
    pub fn r_3plus(&self, i: usize, j: usize) -> Result<usize, StatsError> {
        self.shared_pair_at_least(i, j, 3).map(|s| count(&s))
    }

    /// `co(m, n) = C_2 ∩ co(m) ∩ co(n)`.
    pub fn col_pair_two(&self, m: usize, n: usize) -> Result<FixedBitSet, StatsError> {
        for j in [m, n] {
            if j >= self.q {
                return Err(StatsError::ColumnOutOfRange { col: j, q: self.q });
            }
        }
        let mut s = self.class_mask(FreqClass::Exactly(2));
        s.intersect_with(&self.cols[m]);
        s.intersect_with(&self.cols[n]);
        Ok(s)
    }

    /// `c(m, n)`.
    pub fn c_pair(&self, m: usize, n: usize) -> Result<usize, StatsError> {
        self.col_pair_two(m, n).map(|s| count(&s))
    }

    /// `ro*(B)`: union of `ro(A)` over all `A ⊆ B` with `|A| ≥ 2`.
    /// Defined for `3 ≤ |B| ≤ p − 2`.
    pub fn star(&self, rows: &[usize]) -> Result<FixedBitSet, StatsError> {
        let max = self.p as isize - 2;
        if rows.len() < 3 || rows.len() as isize > max {
            return Err(StatsError::StarSetSize {
                size: rows.len(),
                max,
            });
        }
        self.check_rows(rows)?;
        let mut out = FixedBitSet::with_capacity(self.colours);
        let b = rows.len();
        // Enumerate subsets of B through a bitmask; |B| <= p - 2 is small.
        for mask in 1u32..(1 << b) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<usize> = (0..b).filter(|t| mask >> t & 1 == 1).map(|t| rows[t]).collect();
            out.union_with(&self.shared(&subset)?);
        }
        Ok(out)
    }

    /// `r*(B)`.
    pub fn r_star(&self, rows: &[usize]) -> Result<usize, StatsError> {
        self.star(rows).map(|s| count(&s))
    }

    /// `Cov(A)`: columns containing at least one colour of `A`, ascending.
    pub fn covered_columns(&self, colours: &[ColourId]) -> Result<Vec<usize>, StatsError> {
        if colours.is_empty() {
            return Err(StatsError::EmptyColourSet);
        }
        let mut a = FixedBitSet::with_capacity(self.colours);
        for &c in colours {
            if c.index() >= self.colours {
                return Err(StatsError::UnknownColour(c.0));
            }
            a.insert(c.index());
        }
        Ok((0..self.q)
            .filter(|&j| !self.cols[j].is_disjoint(&a))
            .collect())
    }

    /// `cov(A)`.
    pub fn cov(&self, colours: &[ColourId]) -> Result<usize, StatsError> {
        self.covered_columns(colours).map(|v| v.len())
    }
}

/// Frequency table plus line statistics of one matrix.
#[derive(Clone, Debug)]
pub struct Stats {
    pub freq: FrequencyTable,
    pub lines: RowColumnStats,
}

impl Stats {
    pub fn new(m: &ColourMatrix) -> Self {
        let freq = FrequencyTable::new(m);
        let lines = RowColumnStats::new(m, &freq);
        Stats { freq, lines }
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
    fn frequency_classes() {
        // a b c / b a d : a,b twice; c,d once.
        let x = m(&[&["a", "b", "c"], &["b", "a", "d"]]);
        let f = FrequencyTable::new(&x);
        assert_eq!(f.total(), 6);
        assert_eq!(f.min_frequency(), 1);
        assert_eq!(f.class_size(2), 2);
        assert_eq!(f.class_size(1), 2);
        assert_eq!(f.class_size_at_least(1), 4);
        assert_eq!(f.class_at_least(2), vec![ColourId(0), ColourId(1)]);
        assert_eq!(f.class_size(7), 0);
    }

    #[test]
    fn row_queries() {
        let x = m(&[&["a", "b", "c"], &["b", "a", "d"]]);
        let s = Stats::new(&x);
        assert_eq!(s.lines.r(&[0, 1]).unwrap(), 2);
        assert_eq!(s.lines.r_class(0, FreqClass::Exactly(1)), 1);
        assert_eq!(s.lines.rows_of(ColourId(0)), &[0, 1]);
        assert_eq!(s.lines.cov(&[ColourId(0)]).unwrap(), 2);
        assert_eq!(s.lines.covered_columns(&[ColourId(2), ColourId(3)]).unwrap(), vec![2]);
        assert_eq!(s.lines.r_3plus(0, 1).unwrap(), 0);
    }

    #[test]
    fn query_preconditions() {
        let x = m(&[&["a", "b"], &["b", "a"]]);
        let s = Stats::new(&x);
        assert_eq!(s.lines.r(&[0]), Err(StatsError::RowSetTooSmall(1)));
        assert_eq!(s.lines.r(&[0, 0]), Err(StatsError::DuplicateRow(0)));
        assert!(matches!(s.lines.r(&[0, 5]), Err(StatsError::RowOutOfRange { .. })));
        assert!(matches!(s.lines.star(&[0, 1]), Err(StatsError::StarSetSize { .. })));
        assert_eq!(s.lines.cov(&[]), Err(StatsError::EmptyColourSet));
    }

    #[test]
    fn star_is_union_of_subsets() {
        // 5 rows: colour "u" sits in rows 0 and 1 only, "v" in rows 0,1,2.
        let x = m(&[
            &["u", "v", "a"],
            &["v", "u", "b"],
            &["c", "d", "v"],
            &["d", "c", "e"],
            &["e", "f", "c"],
        ]);
        let s = Stats::new(&x);
        // |B| must be in [3, p-2] = [3, 3].
        let star = s.lines.star(&[0, 1, 2]).unwrap();
        let u = x.colour_of("u").unwrap().index();
        let v = x.colour_of("v").unwrap().index();
        assert!(star.contains(u));
        assert!(star.contains(v));
        assert_eq!(s.lines.r(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(s.lines.r(&[0, 1]).unwrap(), 1);
    }
}
