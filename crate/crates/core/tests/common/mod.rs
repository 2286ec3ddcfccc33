//! Oracles written directly from the definitions, sharing no code with the
//! library beyond reading entries out of a matrix.

#![allow(dead_code)]

use achrolab::ColourMatrix;

/// Plain grid view of a matrix: `grid[i][j]` is a colour index.
pub fn grid_of(m: &ColourMatrix) -> Vec<Vec<usize>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| c.index()).collect())
        .collect()
}

pub fn naive_proper(g: &[Vec<usize>]) -> bool {
    let (p, q) = (g.len(), g[0].len());
    for i in 0..p {
        for j in 0..q {
            for jj in j + 1..q {
                if g[i][j] == g[i][jj] {
                    return false;
                }
            }
            for ii in i + 1..p {
                if g[i][j] == g[ii][j] {
                    return false;
                }
            }
        }
    }
    true
}

/// Every pair of distinct colours meets on some row or column.
pub fn naive_complete(g: &[Vec<usize>], k: usize) -> bool {
    let (p, q) = (g.len(), g[0].len());
    let mut seen = vec![vec![false; k]; k];
    for i in 0..p {
        for j in 0..q {
            for ii in 0..p {
                for jj in 0..q {
                    if (ii == i) != (jj == j) {
                        seen[g[i][j]][g[ii][jj]] = true;
                    }
                }
            }
        }
    }
    (0..k).all(|a| (0..k).all(|b| a == b || seen[a][b]))
}

pub fn naive_member(g: &[Vec<usize>], k: usize) -> bool {
    naive_proper(g) && naive_complete(g, k)
}

/// Colour counts `k` admitting a proper complete colouring of the `p x q`
/// grid, found by enumerating every set partition of the cells as a
/// restricted growth string. `result[k]` is true iff `k` is feasible.
pub fn feasible_counts(p: usize, q: usize) -> Vec<bool> {
    let n = p * q;
    let mut feasible = vec![false; n + 1];
    let mut rgs = vec![0usize; n];
    loop {
        let k = rgs.iter().max().unwrap() + 1;
        if !feasible[k] {
            let g: Vec<Vec<usize>> = rgs.chunks(q).map(|r| r.to_vec()).collect();
            if naive_member(&g, k) {
                feasible[k] = true;
            }
        }
        // Next restricted growth string: bump the last position that may grow.
        let mut t = n;
        loop {
            if t == 1 {
                return feasible;
            }
            t -= 1;
            let max_before = rgs[..t].iter().max().copied().unwrap_or(0);
            if rgs[t] <= max_before {
                rgs[t] += 1;
                for x in &mut rgs[t + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Random bijection on `0..n` from a caller-supplied stream of numbers.
pub fn shuffled(n: usize, mut next: impl FnMut(usize) -> usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, next(i + 1));
    }
    v
}
