//! Proper complete vertex colourings of the rook's graph `K_p □ K_q`, modelled
//! as `p × q` colour matrices.
//!
//! - [`matrix`]: the matrix type, properness, good pairs, completeness and
//!   row/column/colour permutations.
//! - [`stats`]: frequency classes and row/column colour-set statistics.
//! - [`construction`]: the `6 × q` matrix with `2q + 3` colours for odd
//!   `q ≥ 7`, and single cliques.
//! - [`bounds`]: excess, necessary conditions and the general upper bound.
//! - [`diagnostics`]: the auxiliary row graph and structural checks for six
//!   rows.
//! - [`search`]: exact branch-and-bound and seeded local search.
//! - [`io`] and [`report`]: the text matrix format and JSON reports.

pub mod bounds;
pub mod construction;
pub mod diagnostics;
pub mod io;
pub mod matrix;
pub mod report;
pub mod search;
pub mod stats;

pub use matrix::{Bijection, ColourId, ColourMatrix, Line, MatrixError, PairVerdict};
pub use search::{
    achromatic_number, exists_colouring, heuristic_search, ExactLimits, SearchConfig, SearchOutcome,
    SearchResult,
};
pub use stats::Stats;
