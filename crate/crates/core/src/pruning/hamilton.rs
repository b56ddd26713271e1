//! Hamilton cycles and 1–2 paths in an unweighted graph: exact bitmask
//! reachability for small `n`, Pósa rotation–extension beyond.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest `n` the bitmask routines accept (endpoint sets are `u32`).
pub const EXACT_MAX_N: usize = 25;

/// Some Hamilton cycle as a vertex sequence from 0, if one exists.
pub fn exact_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    assert!((3..=EXACT_MAX_N).contains(&n));
    // vertices 1..n ↔ bits 0..m
    let m = n - 1;
    let nbr = masks(adj, 1, m);
    let at0 = start_mask(adj, 0, 1, m);
    let reach = reachability(&nbr, at0, m);
    let full = (1usize << m) - 1;
    let end = lowest(reach[full] & at0)?;
    let mut walk = vec![0];
    walk.extend(trace(&reach, &nbr, full, end).into_iter().map(|b| b + 1));
    Some(walk)
}

/// The longest simple path from 0 to 1 as a vertex sequence, if any.
pub fn exact_longest_path(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    assert!((2..=EXACT_MAX_N).contains(&n));
    // intermediates 2..n ↔ bits 0..m
    let m = n - 2;
    let nbr = masks(adj, 2, m);
    let from0 = start_mask(adj, 0, 2, m);
    let into1 = start_mask(adj, 1, 2, m);
    let reach = reachability(&nbr, from0, m);
    let mut best: Option<(u32, usize, usize)> = None;
    for (mask, &ends) in reach.iter().enumerate() {
        if let Some(end) = lowest(ends & into1) {
            let len = mask.count_ones();
            if best.map_or(true, |b| len > b.0) {
                best = Some((len, mask, end));
            }
        }
    }
    match best {
        Some((_, mask, end)) => {
            let mut walk = vec![0];
            walk.extend(trace(&reach, &nbr, mask, end).into_iter().map(|b| b + 2));
            walk.push(1);
            Some(walk)
        }
        None if adj[0].contains(&1) => Some(vec![0, 1]),
        None => None,
    }
}

fn masks(adj: &[Vec<usize>], offset: usize, m: usize) -> Vec<u32> {
    (0..m)
        .map(|b| {
            adj[b + offset]
                .iter()
                .filter(|&&w| w >= offset && w < offset + m)
                .fold(0u32, |acc, &w| acc | 1 << (w - offset))
        })
        .collect()
}

fn start_mask(adj: &[Vec<usize>], s: usize, offset: usize, m: usize) -> u32 {
    adj[s]
        .iter()
        .filter(|&&w| w >= offset && w < offset + m)
        .fold(0u32, |acc, &w| acc | 1 << (w - offset))
}

/// `reach[mask]`: endpoints `e ∈ mask` of some path from the source that
/// visits exactly `mask`.
fn reachability(nbr: &[u32], first: u32, m: usize) -> Vec<u32> {
    let mut reach = vec![0u32; 1 << m];
    for b in 0..m {
        if first >> b & 1 == 1 {
            reach[1 << b] |= 1 << b;
        }
    }
    for mask in 1..reach.len() {
        let mut ends = reach[mask];
        while ends != 0 {
            let e = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = nbr[e] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    reach
}

fn trace(reach: &[u32], nbr: &[u32], mut mask: usize, mut end: usize) -> Vec<usize> {
    let mut rev = vec![end];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << end);
        let prev = lowest(reach[prev_mask] & nbr[end]).expect("reachable state has a predecessor");
        rev.push(prev);
        mask = prev_mask;
        end = prev;
    }
    rev.reverse();
    rev
}

fn lowest(bits: u32) -> Option<usize> {
    (bits != 0).then(|| bits.trailing_zeros() as usize)
}

/// Rotation–extension search for a Hamilton cycle.
///
/// Each restart grows a path from a random vertex, extending at the free
/// end when possible and otherwise rotating it; a miss is not a proof of
/// non-Hamiltonicity.
pub fn posa_cycle(adj: &[Vec<usize>], restarts: usize, seed: u64) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let start = rng.next_u64() as usize % n;
        if let Some(walk) = posa_run(adj, start, start, None, &mut rng) {
            // report from vertex 0
            let at = walk.iter().position(|&v| v == 0).expect("cycle covers 0");
            let mut out = walk[at..].to_vec();
            out.extend_from_slice(&walk[..at]);
            return Some(out);
        }
    }
    None
}

/// Rotation–extension search for a Hamilton path from 0 to 1.
pub fn posa_path(adj: &[Vec<usize>], restarts: usize, seed: u64) -> Option<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        if let Some(mut walk) = posa_run(adj, 0, 1, Some(1), &mut rng) {
            walk.push(1);
            return Some(walk);
        }
    }
    None
}

/// One restart: a path from `start` covering every vertex except
/// `excluded`, whose free end is adjacent to `close`.
fn posa_run(
    adj: &[Vec<usize>],
    start: usize,
    close: usize,
    excluded: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<usize>> {
    let n = adj.len();
    let target = n - excluded.map_or(0, |_| 1);
    let budget = 10 * n;
    let mut pos = vec![usize::MAX; n];
    let mut path = vec![start];
    pos[start] = 0;
    let mut stale = 0;
    while stale < budget {
        let end = *path.last().expect("path is nonempty");
        let nbrs = &adj[end];
        if nbrs.is_empty() {
            return None;
        }
        if path.len() == target {
            if path.len() > 1 && nbrs.contains(&close) {
                return Some(path);
            }
        } else {
            // extend through a random unused neighbour
            let offset = rng.next_u64() as usize % nbrs.len();
            let fresh = (0..nbrs.len())
                .map(|k| nbrs[(k + offset) % nbrs.len()])
                .find(|&w| pos[w] == usize::MAX && Some(w) != excluded);
            if let Some(w) = fresh {
                pos[w] = path.len();
                path.push(w);
                stale = 0;
                continue;
            }
        }
        // rotate at a random neighbour on the path
        let w = nbrs[rng.next_u64() as usize % nbrs.len()];
        let i = pos[w];
        stale += 1;
        if i == usize::MAX || i + 1 >= path.len() - 1 {
            continue;
        }
        path[i + 1..].reverse();
        for (k, &v) in path.iter().enumerate().skip(i + 1) {
            pos[v] = k;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect()
    }

    fn is_cycle(adj: &[Vec<usize>], walk: &[usize]) -> bool {
        let n = adj.len();
        let mut seen = walk.to_vec();
        seen.sort();
        seen.dedup();
        seen.len() == n && walk.len() == n && (0..n).all(|i| adj[walk[i]].contains(&walk[(i + 1) % n]))
    }

    fn random_graph(n: usize, p_num: u64, seed: u64) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.next_u64() % 100 < p_num {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    #[test]
    fn exact_on_small_graphs() {
        assert!(is_cycle(&complete(6), &exact_cycle(&complete(6)).unwrap()));
        // a path graph has no cycle, and its only 0–1 path is the direct edge
        let line: Vec<Vec<usize>> = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        assert!(exact_cycle(&line).is_none());
        assert_eq!(exact_longest_path(&line).unwrap(), vec![0, 1]);
        let p = exact_longest_path(&complete(7)).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!((p[0], p[6]), (0, 1));
        let apart: Vec<Vec<usize>> = vec![vec![2], vec![3], vec![0], vec![1]];
        assert!(exact_longest_path(&apart).is_none());
    }

    #[test]
    fn exact_cycle_agrees_with_enumeration() {
        use itertools::Itertools;
        for seed in 0..60 {
            let n = 4 + seed as usize % 4;
            let adj = random_graph(n, 55, seed);
            let any = (1..n)
                .permutations(n - 1)
                .any(|p| is_cycle(&adj, &std::iter::once(0).chain(p).collect::<Vec<_>>()));
            let found = exact_cycle(&adj);
            assert_eq!(found.is_some(), any, "seed {seed}");
            if let Some(w) = found {
                assert!(is_cycle(&adj, &w));
            }
        }
    }

    #[test]
    fn posa_finds_cycles_in_dense_graphs() {
        for seed in 0..5 {
            let adj = random_graph(200, 15, seed);
            let walk = posa_cycle(&adj, 50 * 200, seed).expect("dense random graph is Hamiltonian");
            assert!(is_cycle(&adj, &walk));
            assert_eq!(walk[0], 0);
        }
        let path = posa_path(&random_graph(150, 20, 9), 50 * 150, 1).unwrap();
        assert_eq!(path.len(), 150);
        assert_eq!((path[0], path[149]), (0, 1));
    }

    #[test]
    fn posa_reports_absence() {
        let line: Vec<Vec<usize>> = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        assert!(posa_cycle(&line, 20, 0).is_none());
    }
}
