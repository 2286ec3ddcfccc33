//! Searching for proper complete colourings with a prescribed number of
//! colours.
//!
//! [`exists_colouring`] is an exact depth-first branch-and-bound that either
//! finds a witness or proves that none exists. [`heuristic_search`] is a
//! seeded local search that can only ever report success or running out of
//! budget. [`achromatic_number`] drives the exact search downward from the
//! general counting bound.
//!
//! Both searches are deterministic for a fixed configuration, independent of
//! the number of worker threads.

mod exact;
mod heuristic;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::general_upper_bound;
use crate::matrix::{ColourId, ColourMatrix};

pub use exact::MAX_EXACT_COLOURS;

/// Largest `p · q` for which [`achromatic_number`] runs by default.
pub const EXACT_CELL_LIMIT: usize = 16;

/// Default length of one heuristic restart, in nodes.
pub const DEFAULT_RESTART_NODES: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("sizes must be at least 1 (got p = {p}, q = {q})")]
    Empty { p: usize, q: usize },
    #[error("expected p <= q, got p = {p}, q = {q}")]
    Orientation { p: usize, q: usize },
    #[error("colour count k must be at least 1")]
    NoColours,
    #[error("exact search supports at most {max} colours, got {k}")]
    TooManyColours { k: usize, max: usize },
    #[error("exact achromatic search is limited to p*q <= {max} cells, got {cells}")]
    SizeLimit { cells: usize, max: usize },
    #[error("heuristic search needs a positive node budget")]
    NeedsBudget,
    #[error("node budget exhausted while deciding k = {k} after {nodes} nodes")]
    BudgetExhausted { k: usize, nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub p: usize,
    pub q: usize,
    /// Target colour count.
    pub k: usize,
    /// Maximum nodes to expand; 0 means unlimited (exact mode only).
    pub node_budget: u64,
    pub seed: u64,
    /// Exact mode: require the first column to increase downwards.
    pub symmetry_breaking: bool,
    /// Worker threads; results do not depend on this.
    pub threads: usize,
    /// Heuristic mode: nodes per restart.
    pub restart_nodes: u64,
}

impl SearchConfig {
    pub fn new(p: usize, q: usize, k: usize) -> Self {
        SearchConfig {
            p,
            q,
            k,
            node_budget: 0,
            seed: 0,
            symmetry_breaking: true,
            threads: 1,
            restart_nodes: DEFAULT_RESTART_NODES,
        }
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }

    pub fn restart_nodes(mut self, nodes: u64) -> Self {
        self.restart_nodes = nodes.max(1);
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.p == 0 || self.q == 0 {
            return Err(SearchError::Empty {
                p: self.p,
                q: self.q,
            });
        }
        if self.p > self.q {
            return Err(SearchError::Orientation {
                p: self.p,
                q: self.q,
            });
        }
        if self.k == 0 {
            return Err(SearchError::NoColours);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found,
    /// Exact mode only: no member matrix with `k` colours exists.
    Exhausted,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub witness: Option<ColourMatrix>,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// Relabels a grid of colour ids in row-major first-use order and wraps it as
/// a matrix with tokens `c0, c1, ...`.
pub(crate) fn witness_from_grid(p: usize, q: usize, grid: &[u32]) -> ColourMatrix {
    let k = grid.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut relabel = vec![u32::MAX; k];
    let mut next = 0u32;
    let entries = grid
        .iter()
        .map(|&c| {
            let slot = &mut relabel[c as usize];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            ColourId(*slot)
        })
        .collect();
    ColourMatrix::from_ids_default_palette(p, q, entries).expect("search grids are dense")
}

/// Exact decision procedure: is there a proper complete colouring of
/// `K_p □ K_q` with exactly `k` colours?
pub fn exists_colouring(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    exact::run(config)
}

/// Seeded restart local search for a `k`-colour member matrix.
pub fn heuristic_search(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    if config.node_budget == 0 {
        return Err(SearchError::NeedsBudget);
    }
    Ok(heuristic::run(config))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustedTarget {
    pub k: usize,
    pub nodes: u64,
}

/// Why no larger colour count works: either the value meets the counting
/// bound, or every `k` above it up to the bound was exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub upper_bound: u64,
    /// Descending in `k`.
    pub exhausted: Vec<ExhaustedTarget>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Achromatic {
    pub value: usize,
    pub witness: ColourMatrix,
    pub certificate: Certificate,
    pub nodes_expanded: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_cells: usize,
    /// Per-`k` node budget; 0 means unlimited.
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_cells: EXACT_CELL_LIMIT,
            node_budget: 0,
            threads: 1,
        }
    }
}

/// Largest `k` admitting a member matrix, found by exact search from the
/// counting bound downwards.
pub fn achromatic_number(p: usize, q: usize, limits: ExactLimits) -> Result<Achromatic, SearchError> {
    SearchConfig::new(p, q, 1).validate()?;
    if p * q > limits.max_cells {
        return Err(SearchError::SizeLimit {
            cells: p * q,
            max: limits.max_cells,
        });
    }
    let upper = general_upper_bound(p, q).expect("validated sides") as usize;
    let mut certificate = Certificate {
        upper_bound: upper as u64,
        exhausted: Vec::new(),
    };
    let mut total = 0u64;
    // A Latin rectangle with q colours is always a member, so this terminates
    // at k = q at the latest.
    for k in (q..=upper).rev() {
        let cfg = SearchConfig::new(p, q, k)
            .budget(limits.node_budget)
            .threads(limits.threads);
        let res = exists_colouring(&cfg)?;
        total += res.nodes_expanded;
        match res.outcome {
            SearchOutcome::Found => {
                return Ok(Achromatic {
                    value: k,
                    witness: res.witness.expect("found carries a witness"),
                    certificate,
                    nodes_expanded: total,
                })
            }
            SearchOutcome::Exhausted => certificate.exhausted.push(ExhaustedTarget {
                k,
                nodes: res.nodes_expanded,
            }),
            SearchOutcome::BudgetExhausted => {
                return Err(SearchError::BudgetExhausted {
                    k,
                    nodes: res.nodes_expanded,
                })
            }
        }
    }
    unreachable!("k = q always admits a Latin rectangle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert_eq!(
            exists_colouring(&SearchConfig::new(3, 2, 3)),
            Err(SearchError::Orientation { p: 3, q: 2 })
        );
        assert_eq!(
            exists_colouring(&SearchConfig::new(2, 2, 0)),
            Err(SearchError::NoColours)
        );
        assert_eq!(
            heuristic_search(&SearchConfig::new(2, 2, 2)),
            Err(SearchError::NeedsBudget)
        );
        assert!(matches!(
            achromatic_number(4, 5, ExactLimits::default()),
            Err(SearchError::SizeLimit { cells: 20, max: 16 })
        ));
    }

    #[test]
    fn witness_relabelling() {
        let w = witness_from_grid(2, 2, &[3, 1, 1, 3]);
        assert_eq!(w.token_rows(), vec![vec!["c0", "c1"], vec!["c1", "c0"]]);
    }
}
