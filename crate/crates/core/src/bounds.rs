//! Excess and counting upper bounds for proper complete colourings.
//!
//! For a colour `γ` of frequency `l` in a `p × q` member matrix with palette
//! `C`, the cells sharing a line with some occurrence of `γ` number at most
//! `l(p + q − l − 1)`, and each of the other `|C| − 1` colours must occupy one
//! of them. The slack is the *excess*
//!
//! ```text
//! exc(γ) = l(p + q − l − 1) − (|C| − 1)
//! ```
//!
//! which is never negative in a member matrix. Combined with `|C| ≤ ⌊pq/l⌋`
//! for the minimum frequency `l`, this gives the general bound
//! `max_l min(l(p + q − l − 1) + 1, ⌊pq/l⌋)` on the achromatic number.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{ColourId, ColourMatrix};
use crate::stats::FrequencyTable;

/// Largest side length the closed forms accept.
pub const MAX_SIDE: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("sizes must be at least 1 (got p = {p}, q = {q})")]
    Empty { p: usize, q: usize },
    #[error("expected p <= q, got p = {p}, q = {q}; swap the sides")]
    Orientation { p: usize, q: usize },
    #[error("side length {0} exceeds the supported maximum of {MAX_SIDE}")]
    TooLarge(usize),
    #[error("K6 bounds need q >= 7, got {0}")]
    SmallQ(usize),
}

/// `l(p + q − l − 1) − (|C| − 1)`. Negative values are returned as is.
pub fn excess(p: usize, q: usize, colours: usize, l: usize) -> i64 {
    let (p, q, c, l) = (p as i64, q as i64, colours as i64, l as i64);
    l * (p + q - l - 1) - (c - 1)
}

/// Smallest frequency `l ∈ [1, min(p, q)]` with non-negative excess for a
/// palette of `colours` colours. Every colour of a member matrix has at least
/// this frequency; `None` means no member matrix with that many colours exists.
pub fn forced_min_frequency(p: usize, q: usize, colours: usize) -> Option<usize> {
    (1..=p.min(q)).find(|&l| excess(p, q, colours, l) >= 0)
}

/// Per-colour excesses of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessReport {
    pub per_colour: Vec<i64>,
    /// `exc(M)`, the minimum over all colours.
    pub matrix_excess: i64,
    /// `frq(M)`.
    pub min_frequency: usize,
    /// Excess of any colour of frequency `frq(M)`. Equals `matrix_excess` on
    /// member matrices.
    pub excess_at_min_frequency: i64,
}

pub fn matrix_excess(m: &ColourMatrix) -> ExcessReport {
    let freq = FrequencyTable::new(m);
    let (p, q, k) = (m.rows(), m.cols(), m.colour_count());
    let per_colour: Vec<i64> = freq.counts().iter().map(|&l| excess(p, q, k, l)).collect();
    let matrix_excess = per_colour.iter().copied().min().unwrap_or(0);
    let min_frequency = freq.min_frequency();
    let excess_at_min_frequency = excess(p, q, k, min_frequency);
    debug_assert!(
        !m.is_member() || matrix_excess == excess_at_min_frequency,
        "minimum excess must sit at the minimum frequency"
    );
    ExcessReport {
        per_colour,
        matrix_excess,
        min_frequency,
        excess_at_min_frequency,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionViolation {
    /// A colour occurs more often than `min(p, q)`.
    FrequencyTooHigh {
        colour: ColourId,
        frequency: usize,
        limit: usize,
    },
    NegativeExcess { colour: ColourId, excess: i64 },
    /// `|C| > ⌊pq / frq(M)⌋`.
    PaletteTooLarge { colours: usize, limit: usize },
}

/// Checks the necessary conditions every member matrix satisfies. The
/// frequency cap is checked on any matrix; excess and palette size only on
/// members.
pub fn check_necessary_conditions(m: &ColourMatrix) -> Vec<ConditionViolation> {
    let freq = FrequencyTable::new(m);
    let (p, q, k) = (m.rows(), m.cols(), m.colour_count());
    let cap = p.min(q);
    let mut out = Vec::new();
    for (c, &l) in freq.counts().iter().enumerate() {
        if l > cap {
            out.push(ConditionViolation::FrequencyTooHigh {
                colour: ColourId::from(c),
                frequency: l,
                limit: cap,
            });
        }
    }
    if m.is_member() {
        for (c, &l) in freq.counts().iter().enumerate() {
            let e = excess(p, q, k, l);
            if e < 0 {
                out.push(ConditionViolation::NegativeExcess {
                    colour: ColourId::from(c),
                    excess: e,
                });
            }
        }
        let limit = p * q / freq.min_frequency();
        if k > limit {
            out.push(ConditionViolation::PaletteTooLarge { colours: k, limit });
        }
    }
    out
}

/// One term of the general bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTerm {
    pub l: usize,
    /// `l(p + q − l − 1) + 1`.
    pub pair_bound: u64,
    /// `⌊pq / l⌋`.
    pub count_bound: u64,
    pub value: u64,
}

fn check_sides(p: usize, q: usize) -> Result<(), BoundsError> {
    if p == 0 || q == 0 {
        return Err(BoundsError::Empty { p, q });
    }
    if q > MAX_SIDE {
        return Err(BoundsError::TooLarge(q));
    }
    if p > q {
        return Err(BoundsError::Orientation { p, q });
    }
    Ok(())
}

pub fn general_bound_terms(p: usize, q: usize) -> Result<Vec<BoundTerm>, BoundsError> {
    check_sides(p, q)?;
    let (pp, qq) = (p as u64, q as u64);
    Ok((1..=pp)
        .map(|l| {
            let pair_bound = l * (pp + qq - l - 1) + 1;
            let count_bound = pp * qq / l;
            BoundTerm {
                l: l as usize,
                pair_bound,
                count_bound,
                value: pair_bound.min(count_bound),
            }
        })
        .collect())
}

/// `max_{l ∈ [1, p]} min(l(p + q − l − 1) + 1, ⌊pq/l⌋)` for `p ≤ q`.
pub fn general_upper_bound(p: usize, q: usize) -> Result<u64, BoundsError> {
    Ok(general_bound_terms(p, q)?
        .into_iter()
        .map(|t| t.value)
        .max()
        .expect("p >= 1"))
}

/// Known window for the achromatic number of `K_6 □ K_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct K6Bounds {
    /// `2q + 3` from the explicit construction (odd `q` only).
    pub lower: Option<u64>,
    /// `2q + 7`.
    pub upper: u64,
    /// `2q + 3` where that value is known to be exact (odd `q ≥ 41`).
    pub exact: Option<u64>,
}

pub fn k6_bounds(q: usize) -> Result<K6Bounds, BoundsError> {
    if q < 7 {
        return Err(BoundsError::SmallQ(q));
    }
    if q > MAX_SIDE {
        return Err(BoundsError::TooLarge(q));
    }
    let q = q as u64;
    let odd = q % 2 == 1;
    Ok(K6Bounds {
        lower: odd.then_some(2 * q + 3),
        upper: 2 * q + 7,
        exact: (odd && q >= 41).then_some(2 * q + 3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{odd_q_matrix, single_clique, Orientation};

    #[test]
    fn excess_values() {
        for q in [7, 41, 99] {
            assert_eq!(excess(6, q, 2 * q + 4, 2), 3);
        }
        assert_eq!(excess(6, 41, 85, 2), 4);
        assert_eq!(excess(6, 41, 85, 1), -39);
        // 5 - q - s with q = 41, s = 3.
        assert_eq!(excess(6, 41, 85, 1), 5 - 41 - 3);
    }

    #[test]
    fn matrix_excess_examples() {
        let m = odd_q_matrix(7).unwrap();
        let r = matrix_excess(&m);
        assert_eq!(r.matrix_excess, 4);
        assert_eq!(r.min_frequency, 2);
        for n in 1..=6 {
            let c = single_clique(n, Orientation::Row).unwrap();
            assert_eq!(matrix_excess(&c).matrix_excess, 0);
        }
        let rows = vec![vec!["a", "b"], vec!["b", "a"]];
        let two = ColourMatrix::from_tokens(&rows).unwrap();
        assert_eq!(matrix_excess(&two).matrix_excess, 1);
    }

    #[test]
    fn necessary_conditions_on_construction_and_overfull_colour() {
        let m = odd_q_matrix(7).unwrap();
        assert!(check_necessary_conditions(&m).is_empty());
        assert!(17 <= 6 * 7 / 2);
        // 2x2 with "a" three times: not proper, and l = 3 > min(2, 2).
        let rows = vec![vec!["a", "a"], vec!["a", "b"]];
        let bad = ColourMatrix::from_tokens(&rows).unwrap();
        assert!(!bad.is_proper());
        assert_eq!(
            check_necessary_conditions(&bad),
            vec![ConditionViolation::FrequencyTooHigh {
                colour: ColourId(0),
                frequency: 3,
                limit: 2
            }]
        );
    }

    #[test]
    fn general_bound_examples() {
        assert_eq!(general_upper_bound(6, 7).unwrap(), 21);
        assert_eq!(general_upper_bound(6, 41).unwrap(), 89);
        for q in 1..30 {
            assert_eq!(general_upper_bound(1, q).unwrap(), q as u64);
        }
        assert_eq!(
            general_upper_bound(7, 6),
            Err(BoundsError::Orientation { p: 7, q: 6 })
        );
        assert!(general_upper_bound(1, MAX_SIDE + 1).is_err());
    }

    #[test]
    fn k6_window() {
        assert_eq!(
            k6_bounds(41).unwrap(),
            K6Bounds {
                lower: Some(85),
                upper: 89,
                exact: Some(85)
            }
        );
        assert_eq!(
            k6_bounds(7).unwrap(),
            K6Bounds {
                lower: Some(17),
                upper: 21,
                exact: None
            }
        );
        assert_eq!(
            k6_bounds(8).unwrap(),
            K6Bounds {
                lower: None,
                upper: 23,
                exact: None
            }
        );
        assert_eq!(k6_bounds(6), Err(BoundsError::SmallQ(6)));
    }

    #[test]
    fn excess_increasing_below_midpoint() {
        for p in 1..8 {
            for q in p..12 {
                for c in 1..40 {
                    let top = (p + q - 1) / 2;
                    for l in 1..top {
                        assert!(excess(p, q, c, l) < excess(p, q, c, l + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn forced_frequency() {
        // 2x3 with 5 colours: l = 1 gives 1*3 - 4 < 0, l = 2 gives 2*2 - 4 = 0.
        assert_eq!(forced_min_frequency(2, 3, 5), Some(2));
        assert_eq!(forced_min_frequency(2, 3, 4), Some(1));
        assert_eq!(forced_min_frequency(2, 2, 4), None);
    }
}
