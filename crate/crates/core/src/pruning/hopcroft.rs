//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

/// A matching of the left side `[n_left]` into the right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteMatching {
    /// Right partner of each left vertex.
    pub mate: Vec<Option<usize>>,
    pub size: usize,
    n_right: usize,
}

impl BipartiteMatching {
    /// Every vertex on both sides is covered.
    pub fn is_perfect(&self) -> bool {
        self.size == self.mate.len() && self.size == self.n_right
    }

    /// `(left, right)` pairs ordered by left vertex.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|j| (i, j)))
            .collect()
    }
}

/// Maximum matching of the bipartite graph whose left vertex `i` is
/// adjacent to the right vertices `adj[i]` (all `< n_right`).
pub fn hopcroft_matching(adj: &[Vec<usize>], n_right: usize) -> BipartiteMatching {
    const NIL: usize = usize::MAX;
    let n_left = adj.len();
    let mut mate_l = vec![NIL; n_left];
    let mut mate_r = vec![NIL; n_right];
    let mut dist = vec![usize::MAX; n_left];
    let mut size = 0;

    loop {
        // layer the free left vertices
        let mut queue = VecDeque::new();
        for i in 0..n_left {
            if mate_l[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = mate_r[j];
                if k == NIL {
                    reachable_free = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !reachable_free {
            break;
        }
        // vertex-disjoint shortest augmenting paths, iterative DFS
        let mut next_edge = vec![0usize; n_left];
        for root in 0..n_left {
            if mate_l[root] != NIL {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&i) = stack.last() {
                if next_edge[i] == adj[i].len() {
                    dist[i] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let j = adj[i][next_edge[i]];
                next_edge[i] += 1;
                let k = mate_r[j];
                if k == NIL {
                    // flip the path held on the stack
                    let mut right = j;
                    while let Some(l) = stack.pop() {
                        let prev = mate_l[l];
                        mate_l[l] = right;
                        mate_r[right] = l;
                        right = prev;
                    }
                    size += 1;
                    break;
                }
                if dist[k] == dist[i] + 1 {
                    stack.push(k);
                }
            }
        }
    }

    BipartiteMatching {
        mate: mate_l.into_iter().map(|j| (j != NIL).then_some(j)).collect(),
        size,
        n_right,
    }
}
