//! Restarted tabu hill climbing over proper `k`-colour matrices.
//!
//! The state is always a proper matrix over colours `0..k`; the objective is
//! the number of bad colour pairs, where a colour that does not occur is bad
//! with every other colour. Each node recolours one cell. Most moves target a
//! random bad pair `{a, b}`: some cell on a line through an occurrence of `b`
//! is recoloured to `a` (or the other way round), picking the move with the
//! best objective change, then the rarer target colour, then at random.
//!
//! The budget is cut into fixed-length restarts. Restart `r` draws from stream
//! `r` of a ChaCha generator keyed by the seed, so restarts are independent and
//! the result does not depend on how they are spread over threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{witness_from_grid, SearchConfig, SearchOutcome, SearchResult};

/// One in `NOISE` nodes is a uniformly random recolouring.
const NOISE: u32 = 50;
const TABU_BASE: u64 = 7;
const TABU_SPREAD: u64 = 8;

struct Climber {
    p: usize,
    q: usize,
    k: usize,
    grid: Vec<u32>,
    row_has: Vec<bool>,
    col_has: Vec<bool>,
    freq: Vec<u32>,
    cells_of: Vec<Vec<usize>>,
    pair: Vec<u32>,
    bad: Vec<u32>,
    bad_pos: Vec<u32>,
    tabu_until: Vec<u64>,
    // scratch for move evaluation
    mult: Vec<u8>,
    seen: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Move {
    cell: usize,
    colour: usize,
}

impl Climber {
    fn new(p: usize, q: usize, k: usize, rng: &mut ChaCha8Rng) -> Self {
        // Start from a shuffled Latin rectangle on q of the k colours.
        let mut palette: Vec<u32> = (0..k as u32).collect();
        palette.shuffle(rng);
        let mut rows: Vec<usize> = (0..q).collect();
        rows.shuffle(rng);
        let mut cols: Vec<usize> = (0..q).collect();
        cols.shuffle(rng);
        let mut grid = vec![0u32; p * q];
        for i in 0..p {
            for j in 0..q {
                grid[i * q + j] = palette[(rows[i] + cols[j]) % q];
            }
        }
        let mut c = Climber {
            p,
            q,
            k,
            grid: Vec::new(),
            row_has: vec![false; p * k],
            col_has: vec![false; q * k],
            freq: vec![0; k],
            cells_of: vec![Vec::new(); k],
            pair: vec![0; k * k],
            bad: Vec::new(),
            bad_pos: vec![u32::MAX; k * k],
            tabu_until: vec![0; p * q * k],
            mult: vec![0; k],
            seen: Vec::with_capacity(p + q),
        };
        for (pos, &col) in grid.iter().enumerate() {
            let (i, j) = (pos / q, pos % q);
            c.row_has[i * k + col as usize] = true;
            c.col_has[j * k + col as usize] = true;
            c.freq[col as usize] += 1;
            c.cells_of[col as usize].push(pos);
        }
        for pos in 0..p * q {
            for nb in c.neighbours(pos) {
                if nb > pos {
                    let (a, b) = (grid[pos] as usize, grid[nb] as usize);
                    c.pair[a * k + b] += 1;
                    c.pair[b * k + a] += 1;
                }
            }
        }
        for b in 1..k {
            for a in 0..b {
                if c.pair[a * k + b] == 0 {
                    c.mark_bad(a, b);
                }
            }
        }
        c.grid = grid;
        c
    }

    fn neighbours(&self, pos: usize) -> impl Iterator<Item = usize> {
        let (p, q) = (self.p, self.q);
        let (i, j) = (pos / q, pos % q);
        (0..q)
            .filter(move |&jj| jj != j)
            .map(move |jj| i * q + jj)
            .chain((0..p).filter(move |&ii| ii != i).map(move |ii| ii * q + j))
    }

    #[inline]
    fn pair_index(&self, a: usize, b: usize) -> usize {
        if a < b {
            a * self.k + b
        } else {
            b * self.k + a
        }
    }

    fn mark_bad(&mut self, a: usize, b: usize) {
        let idx = self.pair_index(a, b);
        debug_assert_eq!(self.bad_pos[idx], u32::MAX);
        self.bad_pos[idx] = self.bad.len() as u32;
        self.bad.push(idx as u32);
    }

    fn unmark_bad(&mut self, a: usize, b: usize) {
        let idx = self.pair_index(a, b);
        let at = self.bad_pos[idx] as usize;
        let last = *self.bad.last().expect("pair is listed");
        self.bad.swap_remove(at);
        if last as usize != idx {
            self.bad_pos[last as usize] = at as u32;
        }
        self.bad_pos[idx] = u32::MAX;
    }

    #[inline]
    fn allowed(&self, pos: usize, colour: usize) -> bool {
        let (i, j) = (pos / self.q, pos % self.q);
        !self.row_has[i * self.k + colour] && !self.col_has[j * self.k + colour]
    }

    /// Change in the number of bad pairs if `pos` is recoloured to `colour`.
    fn delta(&mut self, pos: usize, colour: usize) -> i64 {
        let old = self.grid[pos] as usize;
        let k = self.k;
        self.seen.clear();
        let (p, q) = (self.p, self.q);
        let (i, j) = (pos / q, pos % q);
        for nb in (0..q)
            .filter(|&jj| jj != j)
            .map(|jj| i * q + jj)
            .chain((0..p).filter(|&ii| ii != i).map(|ii| ii * q + j))
        {
            let d = self.grid[nb] as usize;
            if self.mult[d] == 0 {
                self.seen.push(d as u32);
            }
            self.mult[d] += 1;
        }
        let mut delta = 0i64;
        for &d in &self.seen {
            let d = d as usize;
            if self.pair[old * k + d] == self.mult[d] as u32 {
                delta += 1;
            }
            if self.pair[colour * k + d] == 0 {
                delta -= 1;
            }
            self.mult[d] = 0;
        }
        delta
    }

    fn apply(&mut self, pos: usize, colour: usize, step: u64, rng: &mut ChaCha8Rng) {
        let old = self.grid[pos] as usize;
        let k = self.k;
        let nbs: Vec<usize> = self.neighbours(pos).collect();
        for nb in nbs {
            let d = self.grid[nb] as usize;
            self.pair[old * k + d] -= 1;
            self.pair[d * k + old] -= 1;
            if self.pair[old * k + d] == 0 {
                self.mark_bad(old, d);
            }
            if self.pair[colour * k + d] == 0 {
                self.unmark_bad(colour, d);
            }
            self.pair[colour * k + d] += 1;
            self.pair[d * k + colour] += 1;
        }
        let (i, j) = (pos / self.q, pos % self.q);
        self.row_has[i * k + old] = false;
        self.col_has[j * k + old] = false;
        self.row_has[i * k + colour] = true;
        self.col_has[j * k + colour] = true;
        self.freq[old] -= 1;
        self.freq[colour] += 1;
        self.cells_of[old].retain(|&c| c != pos);
        self.cells_of[colour].push(pos);
        self.grid[pos] = colour as u32;
        self.tabu_until[pos * k + old] = step + TABU_BASE + rng.gen_range(0..TABU_SPREAD);
    }

    fn random_move(&self, rng: &mut ChaCha8Rng) -> Option<Move> {
        let cell = rng.gen_range(0..self.p * self.q);
        let options: Vec<usize> = (0..self.k).filter(|&c| self.allowed(cell, c)).collect();
        options.choose(rng).map(|&colour| Move { cell, colour })
    }

    /// Best non-tabu move that could repair a random bad pair.
    fn targeted_move(&mut self, step: u64, best_bad: usize, rng: &mut ChaCha8Rng) -> Option<Move> {
        let idx = self.bad[rng.gen_range(0..self.bad.len())] as usize;
        let (a, b) = (idx / self.k, idx % self.k);
        let mut cands: Vec<Move> = Vec::new();
        for (target, anchor) in [(a, b), (b, a)] {
            for &cell in &self.cells_of[anchor] {
                for nb in self.neighbours(cell) {
                    if self.allowed(nb, target) {
                        cands.push(Move { cell: nb, colour: target });
                    }
                }
            }
        }
        if self.freq[a] == 0 && self.freq[b] == 0 {
            for cell in 0..self.p * self.q {
                if self.allowed(cell, a) {
                    cands.push(Move { cell, colour: a });
                }
            }
        }
        let current = self.bad.len() as i64;
        let mut best: Option<(i64, u32, Move)> = None;
        let mut ties = 0u32;
        for mv in cands {
            let d = self.delta(mv.cell, mv.colour);
            let tabu = self.tabu_until[mv.cell * self.k + mv.colour] > step;
            if tabu && current + d >= best_bad as i64 {
                continue;
            }
            let key = (d, self.freq[mv.colour]);
            match best {
                Some((bd, bf, _)) if (bd, bf) < key => {}
                Some((bd, bf, _)) if (bd, bf) == key => {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        best = Some((d, self.freq[mv.colour], mv));
                    }
                }
                _ => {
                    ties = 1;
                    best = Some((d, self.freq[mv.colour], mv));
                }
            }
        }
        best.map(|(_, _, mv)| mv)
    }
}

struct RestartResult {
    nodes: u64,
    grid: Option<Vec<u32>>,
}

fn run_restart(cfg: &SearchConfig, index: u64, cap: u64, cancel: &AtomicUsize) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut c = Climber::new(cfg.p, cfg.q, cfg.k, &mut rng);
    let mut best_bad = c.bad.len();
    let mut nodes = 0u64;
    while nodes < cap {
        if nodes & 0xfff == 0 && cancel.load(Ordering::Relaxed) < index as usize {
            break;
        }
        nodes += 1;
        if c.bad.is_empty() {
            return RestartResult {
                nodes,
                grid: Some(c.grid),
            };
        }
        let mv = if rng.gen_range(0..NOISE) == 0 {
            c.random_move(&mut rng)
        } else {
            c.targeted_move(nodes, best_bad, &mut rng)
                .or_else(|| c.random_move(&mut rng))
        };
        if let Some(mv) = mv {
            c.apply(mv.cell, mv.colour, nodes, &mut rng);
            best_bad = best_bad.min(c.bad.len());
        }
    }
    RestartResult { nodes, grid: None }
}

pub(super) fn run(cfg: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    // Fewer than q colours cannot fill a row properly.
    if cfg.k < cfg.q {
        return SearchResult {
            outcome: SearchOutcome::BudgetExhausted,
            witness: None,
            nodes_expanded: 0,
            elapsed: start.elapsed(),
        };
    }
    let len = cfg.restart_nodes.max(1);
    let restarts = cfg.node_budget.div_ceil(len);
    let cap_of = |r: u64| len.min(cfg.node_budget - r * len);

    let next = AtomicUsize::new(0);
    let first_found = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<RestartResult>>> = Mutex::new((0..restarts).map(|_| None).collect());
    let workers = cfg.threads.max(1).min(restarts as usize);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let r = next.fetch_add(1, Ordering::SeqCst);
                if r as u64 >= restarts || first_found.load(Ordering::SeqCst) < r {
                    break;
                }
                let res = run_restart(cfg, r as u64, cap_of(r as u64), &first_found);
                if res.grid.is_some() {
                    first_found.fetch_min(r, Ordering::SeqCst);
                }
                results.lock().expect("no panics while holding the lock")[r] = Some(res);
            });
        }
    });

    let mut total = 0u64;
    for res in results.into_inner().expect("workers finished").into_iter().flatten() {
        total += res.nodes;
        if let Some(grid) = res.grid {
            return SearchResult {
                outcome: SearchOutcome::Found,
                witness: Some(witness_from_grid(cfg.p, cfg.q, &grid)),
                nodes_expanded: total,
                elapsed: start.elapsed(),
            };
        }
    }
    SearchResult {
        outcome: SearchOutcome::BudgetExhausted,
        witness: None,
        nodes_expanded: total,
        elapsed: start.elapsed(),
    }
}
