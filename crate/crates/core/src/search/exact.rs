//! Depth-first branch-and-bound over partial colour matrices.
//!
//! Cells are filled in row-major order. At each cell the candidates are the
//! already used colours in id order followed by one fresh colour, so every
//! colouring is generated once up to renaming colours. Since rows 2..p may be
//! reordered freely, the first column is additionally required to increase
//! downwards when symmetry breaking is on.
//!
//! Pruning, all admissible:
//! - properness: a colour already present in the row or column is skipped;
//! - pair coverage: a cell only witnesses pairs with earlier cells in its row
//!   and column, so the pairs still missing must not exceed the number of
//!   line-adjacent cell pairs whose later cell is still empty;
//! - frequency: every colour of a member matrix has non-negative excess, which
//!   forces a minimum frequency `l`. The cells still needed to lift every
//!   colour to `l` must fit into the empty cells.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use smallvec::SmallVec;

use super::{witness_from_grid, SearchConfig, SearchError, SearchOutcome, SearchResult};
use crate::bounds::forced_min_frequency;

/// Colour sets are `u128` masks.
pub const MAX_EXACT_COLOURS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flow {
    Found,
    Exhausted,
    Aborted,
}

#[derive(Clone)]
struct Solver<'a> {
    q: usize,
    k: usize,
    cells: usize,
    min_freq: usize,
    total_pairs: usize,
    symmetry: bool,

    grid: Vec<u32>,
    row_used: Vec<u128>,
    col_used: Vec<u128>,
    freq: Vec<u32>,
    used: usize,
    pair_count: Vec<u16>,
    covered: usize,
    /// Cells still needed to lift every colour to `min_freq`.
    deficit: usize,
    /// `capacity[pos]`: line-adjacent cell pairs whose later cell is `>= pos`.
    capacity: Vec<usize>,

    nodes: u64,
    budget: u64,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Solver<'a> {
    fn new(cfg: &SearchConfig, min_freq: usize) -> Self {
        let (p, q, k) = (cfg.p, cfg.q, cfg.k);
        let cells = p * q;
        let mut capacity = vec![0usize; cells + 1];
        for pos in (0..cells).rev() {
            capacity[pos] = capacity[pos + 1] + pos / q + pos % q;
        }
        Solver {
            q,
            k,
            cells,
            min_freq,
            total_pairs: k * (k - 1) / 2,
            symmetry: cfg.symmetry_breaking,
            grid: vec![u32::MAX; cells],
            row_used: vec![0; p],
            col_used: vec![0; q],
            freq: vec![0; k],
            used: 0,
            pair_count: vec![0; k * k],
            covered: 0,
            deficit: k * min_freq,
            capacity,
            nodes: 0,
            budget: cfg.node_budget,
            cancel: None,
        }
    }

    #[inline]
    fn bump_pair(&mut self, a: usize, b: usize) {
        let idx = if a < b { a * self.k + b } else { b * self.k + a };
        self.pair_count[idx] += 1;
        if self.pair_count[idx] == 1 {
            self.covered += 1;
        }
    }

    #[inline]
    fn drop_pair(&mut self, a: usize, b: usize) {
        let idx = if a < b { a * self.k + b } else { b * self.k + a };
        self.pair_count[idx] -= 1;
        if self.pair_count[idx] == 0 {
            self.covered -= 1;
        }
    }

    fn place(&mut self, pos: usize, c: usize) {
        let (i, j) = (pos / self.q, pos % self.q);
        self.grid[pos] = c as u32;
        self.row_used[i] |= 1 << c;
        self.col_used[j] |= 1 << c;
        for jj in 0..j {
            let d = self.grid[i * self.q + jj] as usize;
            self.bump_pair(c, d);
        }
        for ii in 0..i {
            let d = self.grid[ii * self.q + j] as usize;
            self.bump_pair(c, d);
        }
        if (self.freq[c] as usize) < self.min_freq {
            self.deficit -= 1;
        }
        self.freq[c] += 1;
        if c == self.used {
            self.used += 1;
        }
    }

    fn unplace(&mut self, pos: usize, c: usize) {
        let (i, j) = (pos / self.q, pos % self.q);
        self.freq[c] -= 1;
        if self.freq[c] == 0 {
            debug_assert_eq!(c + 1, self.used);
            self.used -= 1;
        }
        if (self.freq[c] as usize) < self.min_freq {
            self.deficit += 1;
        }
        for jj in 0..j {
            let d = self.grid[i * self.q + jj] as usize;
            self.drop_pair(c, d);
        }
        for ii in 0..i {
            let d = self.grid[ii * self.q + j] as usize;
            self.drop_pair(c, d);
        }
        self.row_used[i] &= !(1 << c);
        self.col_used[j] &= !(1 << c);
        self.grid[pos] = u32::MAX;
    }

    /// Counts the node; `false` when the budget or a cancellation stops us.
    #[inline]
    fn enter(&mut self) -> bool {
        if self.budget != 0 && self.nodes >= self.budget {
            return false;
        }
        if let Some((flag, me)) = self.cancel {
            if self.nodes & 0x3ff == 0 && flag.load(Ordering::Relaxed) < me {
                return false;
            }
        }
        self.nodes += 1;
        true
    }

    /// `false` if the node cannot be extended to a member matrix.
    #[inline]
    fn viable(&self, pos: usize) -> bool {
        self.total_pairs - self.covered <= self.capacity[pos] && self.deficit <= self.cells - pos
    }

    fn candidates(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = (pos / self.q, pos % self.q);
        let forbidden = self.row_used[i] | self.col_used[j];
        let floor = if self.symmetry && j == 0 && i > 0 {
            self.grid[(i - 1) * self.q] as usize + 1
        } else {
            0
        };
        let fresh = (self.used < self.k).then_some(self.used);
        (floor..self.used)
            .filter(move |&c| forbidden >> c & 1 == 0)
            .chain(fresh)
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        if !self.enter() {
            return Flow::Aborted;
        }
        if pos == self.cells {
            return if self.covered == self.total_pairs && self.used == self.k {
                Flow::Found
            } else {
                Flow::Exhausted
            };
        }
        if !self.viable(pos) {
            return Flow::Exhausted;
        }
        let cands: Cands = self.candidates(pos).map(|c| c as u8).collect();
        for c in cands.into_iter().map(usize::from) {
            self.place(pos, c);
            let r = self.dfs(pos + 1);
            if r != Flow::Exhausted {
                // Keep the grid as is on success so the witness can be read.
                if r == Flow::Aborted {
                    self.unplace(pos, c);
                }
                return r;
            }
            self.unplace(pos, c);
        }
        Flow::Exhausted
    }
}

type Cands = SmallVec<[u8; 32]>;

struct BranchResult {
    flow: Flow,
    nodes: u64,
    grid: Option<Vec<u32>>,
}

pub(super) fn run(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    if cfg.k > MAX_EXACT_COLOURS {
        return Err(SearchError::TooManyColours {
            k: cfg.k,
            max: MAX_EXACT_COLOURS,
        });
    }
    let start = Instant::now();
    let finish = |outcome, grid: Option<&[u32]>, nodes| SearchResult {
        outcome,
        witness: grid.map(|g| witness_from_grid(cfg.p, cfg.q, g)),
        nodes_expanded: nodes,
        elapsed: start.elapsed(),
    };

    let Some(min_freq) = forced_min_frequency(cfg.p, cfg.q, cfg.k) else {
        // The root is the only node: no frequency is large enough.
        return Ok(finish(SearchOutcome::Exhausted, None, 1));
    };

    let mut solver = Solver::new(cfg, min_freq);
    if cfg.threads <= 1 {
        let flow = solver.dfs(0);
        return Ok(match flow {
            Flow::Found => finish(SearchOutcome::Found, Some(&solver.grid), solver.nodes),
            Flow::Exhausted => finish(SearchOutcome::Exhausted, None, solver.nodes),
            Flow::Aborted => finish(SearchOutcome::BudgetExhausted, None, solver.nodes),
        });
    }

    // Walk the forced prefix exactly as the sequential search would, then fan
    // out over the children of the first node with a real choice.
    let mut pos = 0;
    let branches: Vec<usize> = loop {
        if !solver.enter() {
            return Ok(finish(SearchOutcome::BudgetExhausted, None, solver.nodes));
        }
        if pos == solver.cells {
            let found = solver.covered == solver.total_pairs && solver.used == solver.k;
            return Ok(if found {
                finish(SearchOutcome::Found, Some(&solver.grid), solver.nodes)
            } else {
                finish(SearchOutcome::Exhausted, None, solver.nodes)
            });
        }
        if !solver.viable(pos) {
            return Ok(finish(SearchOutcome::Exhausted, None, solver.nodes));
        }
        let cands: Cands = solver.candidates(pos).map(|c| c as u8).collect();
        match cands.len() {
            0 => return Ok(finish(SearchOutcome::Exhausted, None, solver.nodes)),
            1 => {
                let c = usize::from(cands[0]);
                solver.place(pos, c);
                pos += 1;
            }
            _ => break cands.iter().map(|&c| usize::from(c)).collect(),
        }
    };
    let prefix_nodes = solver.nodes;
    let branch_budget = if cfg.node_budget == 0 {
        0
    } else {
        cfg.node_budget - prefix_nodes
    };

    let next = AtomicUsize::new(0);
    let first_found = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<BranchResult>>> =
        Mutex::new((0..branches.len()).map(|_| None).collect());
    let workers = cfg.threads.min(branches.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let b = next.fetch_add(1, Ordering::SeqCst);
                if b >= branches.len() {
                    break;
                }
                if first_found.load(Ordering::SeqCst) < b {
                    continue;
                }
                let mut s = solver.clone();
                s.nodes = 0;
                s.budget = branch_budget;
                s.cancel = Some((&first_found, b));
                s.place(pos, branches[b]);
                let flow = s.dfs(pos + 1);
                if flow == Flow::Found {
                    first_found.fetch_min(b, Ordering::SeqCst);
                }
                let grid = (flow == Flow::Found).then(|| s.grid.clone());
                results.lock().expect("no panics while holding the lock")[b] = Some(BranchResult {
                    flow,
                    nodes: s.nodes,
                    grid,
                });
            });
        }
    });

    // Replay the branches in canonical order with the sequential budget.
    let results = results.into_inner().expect("workers finished");
    let mut total = prefix_nodes;
    for r in results {
        let Some(r) = r else {
            // Skipped only after an earlier branch found a witness.
            unreachable!("branches before the first witness are always run");
        };
        let over = cfg.node_budget != 0 && total + r.nodes > cfg.node_budget;
        if r.flow == Flow::Aborted || over {
            return Ok(finish(SearchOutcome::BudgetExhausted, None, cfg.node_budget));
        }
        total += r.nodes;
        if r.flow == Flow::Found {
            return Ok(finish(SearchOutcome::Found, r.grid.as_deref(), total));
        }
    }
    Ok(finish(SearchOutcome::Exhausted, None, total))
}
