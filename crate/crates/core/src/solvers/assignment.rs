//! Maximum-weight perfect matching in `K_{n,n}`.
//!
//! Shortest augmenting paths with dual potentials on the negated weights
//! (O(n³)), followed by a pass that moves to the lexicographically smallest
//! optimal assignment inside the graph of tight edges.

use std::collections::VecDeque;

use super::{Solution, WeightedInstance};
use crate::structures::FamilyTag;
use crate::{Error, Result};

/// Relative slack under which a reduced cost counts as zero.
const TIGHT_EPS: f64 = 1e-10;

pub fn max_matching(inst: &WeightedInstance) -> Result<Solution> {
    if !inst.is_bipartite() {
        return Err(Error::invalid("matching needs a bipartite instance"));
    }
    let n = inst.n();
    if n == 0 {
        return Err(Error::invalid("matching needs n ≥ 1"));
    }
    let cost = |i: usize, j: usize| -inst.weight(i, j);
    let (mut col_of, u, v) = hungarian(n, cost);

    let scale = inst.weights().iter().fold(1.0f64, |m, w| m.max(w.abs()));
    let eps = TIGHT_EPS * scale;
    let tight = |i: usize, j: usize| cost(i, j) - u[i] - v[j] <= eps;
    lexicographic_refine(n, &mut col_of, tight);

    let edges = col_of.iter().enumerate().map(|(i, &j)| (i, j)).collect();
    Ok(Solution::from_edges(FamilyTag::Matching, inst, edges))
}

/// Minimum-cost assignment. Returns `(col_of_row, u, v)` with reduced
/// costs `c(i,j) − u[i] − v[j] ≥ 0`, zero on the assignment.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    // 1-based internally; index 0 is the virtual column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[row_of[j] - 1] = j - 1;
    }
    (col_of, u[1..].to_vec(), v[1..].to_vec())
}

/// Every perfect matching of the tight graph is optimal; pick the
/// lexicographically smallest by fixing rows in order, each to the
/// smallest column that still admits a perfect completion.
fn lexicographic_refine(n: usize, col_of: &mut [usize], tight: impl Fn(usize, usize) -> bool) {
    let mut row_of = vec![0usize; n];
    for (i, &j) in col_of.iter().enumerate() {
        row_of[j] = i;
    }
    let mut parent_col = vec![usize::MAX; n];
    let mut seen_row = vec![false; n];
    for i in 0..n {
        let target = col_of[i];
        for j in 0..target {
            // columns of earlier rows are fixed
            if row_of[j] < i || !tight(i, j) {
                continue;
            }
            // Alternating path from row_of[j] to the freed column `target`,
            // never touching row i or fixed rows.
            let start = row_of[j];
            seen_row.fill(false);
            seen_row[start] = true;
            parent_col.fill(usize::MAX);
            let mut queue = VecDeque::from([start]);
            let mut found = false;
            'bfs: while let Some(r) = queue.pop_front() {
                for c in 0..n {
                    if c == j || parent_col[c] != usize::MAX || row_of[c] < i || !tight(r, c) {
                        continue;
                    }
                    if c == target {
                        parent_col[c] = r;
                        found = true;
                        break 'bfs;
                    }
                    let next = row_of[c];
                    if next == i || seen_row[next] {
                        continue;
                    }
                    parent_col[c] = r;
                    seen_row[next] = true;
                    queue.push_back(next);
                }
            }
            if !found {
                continue;
            }
            // Shift along the path: each row on it takes the column that
            // led to the next one.
            let mut c = target;
            loop {
                let r = parent_col[c];
                let prev = col_of[r];
                col_of[r] = c;
                row_of[c] = r;
                if r == start {
                    break;
                }
                c = prev;
            }
            col_of[i] = j;
            row_of[j] = i;
            break;
        }
    }
}
