//! Heaviest copy of a small pattern in a weighted `K_n`.

use itertools::Itertools;

use super::{Solution, WeightedInstance};
use crate::structures::{FamilyTag, GraphPattern};
use crate::{Error, Result};

pub const COPY_MAX_V: usize = 6;
pub const COPY_MAX_N: usize = 64;

/// Exact maximum over injections of the pattern's vertices into `[n]`.
///
/// Branch and bound: a partial embedding is dropped once its weight plus an
/// optimistic completion cannot beat the incumbent. Of the embeddings that
/// differ by a pattern automorphism only the lexicographically smallest is
/// accepted, so each copy is counted once.
pub fn max_copy(inst: &WeightedInstance, p: &GraphPattern) -> Result<Solution> {
    if inst.is_bipartite() {
        return Err(Error::invalid("copy search needs a complete instance"));
    }
    let v = p.vertex_count();
    let n = inst.n();
    if v > COPY_MAX_V {
        return Err(Error::PatternTooLarge { v, max: COPY_MAX_V });
    }
    if n > COPY_MAX_N {
        return Err(Error::InstanceTooLarge { n, cap: COPY_MAX_N });
    }
    if n < v {
        return Err(Error::invalid(format!("K_{n} has no copy of a {v}-vertex pattern")));
    }
    let mut search = Search::new(inst, p);
    search.descend(0, 0.0);
    let phi = search.best_map.expect("n ≥ v admits an embedding");
    let edges = p.edges().iter().map(|&(a, b)| (phi[a], phi[b])).collect();
    Ok(Solution::from_edges(FamilyTag::CopyOf, inst, edges))
}

/// Automorphisms of the pattern as vertex permutations (identity included).
pub(crate) fn automorphisms(p: &GraphPattern) -> Vec<Vec<usize>> {
    let adj = p.adjacency_masks();
    let v = p.vertex_count();
    (0..v)
        .permutations(v)
        .filter(|s| p.edges().iter().all(|&(a, b)| adj[s[a]] >> s[b] & 1 == 1))
        .collect()
}

struct Search<'a> {
    inst: &'a WeightedInstance,
    v: usize,
    /// Pattern vertices in assignment order.
    order: Vec<usize>,
    /// For depth `k`: pattern vertices already placed that `order[k]` is adjacent to.
    back: Vec<Vec<usize>>,
    /// For depth `k`: per placed pattern vertex, pattern edges to still-unplaced vertices.
    pending: Vec<Vec<(usize, usize)>>,
    /// For depth `k`: pattern edges with neither end placed.
    free_edges: Vec<usize>,
    /// Per host vertex, prefix sums of its incident weights sorted descending.
    row_top: Vec<Vec<f64>>,
    /// Prefix sums of all weights sorted descending.
    global_top: Vec<f64>,
    auts: Vec<Vec<usize>>,
    phi: Vec<usize>,
    used: Vec<bool>,
    best: f64,
    best_map: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a WeightedInstance, p: &GraphPattern) -> Self {
        let v = p.vertex_count();
        let n = inst.n();
        let adj = p.adjacency_masks();

        // Greedy order: highest degree first, then most links into the placed set.
        let mut order = Vec::with_capacity(v);
        let mut placed = 0u32;
        while order.len() < v {
            let next = (0..v)
                .filter(|&u| placed >> u & 1 == 0)
                .max_by_key(|&u| {
                    let links = (adj[u] & placed).count_ones();
                    (links, adj[u].count_ones(), std::cmp::Reverse(u))
                })
                .expect("unplaced vertex remains");
            order.push(next);
            placed |= 1 << next;
        }

        let mut back = Vec::with_capacity(v);
        let mut pending = Vec::with_capacity(v + 1);
        let mut free_edges = Vec::with_capacity(v + 1);
        for k in 0..=v {
            let placed: u32 = order[..k].iter().map(|&u| 1u32 << u).sum();
            if k < v {
                let u = order[k];
                back.push(order[..k].iter().copied().filter(|&a| adj[u] >> a & 1 == 1).collect());
            }
            pending.push(
                order[..k]
                    .iter()
                    .map(|&a| (a, (adj[a] & !placed).count_ones() as usize))
                    .filter(|&(_, c)| c > 0)
                    .collect(),
            );
            free_edges.push(
                p.edges()
                    .iter()
                    .filter(|&&(a, b)| placed >> a & 1 == 0 && placed >> b & 1 == 0)
                    .count(),
            );
        }

        let prefix = |mut w: Vec<f64>| {
            w.sort_by(|a, b| b.total_cmp(a));
            let mut acc = 0.0;
            let mut out = vec![0.0];
            out.extend(w.into_iter().map(|x| {
                acc += x;
                acc
            }));
            out
        };
        let row_top = (0..n)
            .map(|i| prefix((0..n).filter(|&j| j != i).map(|j| inst.weight(i, j)).collect()))
            .collect();
        let global_top = prefix(inst.weights().to_vec());

        Search {
            inst,
            v,
            order,
            back,
            pending,
            free_edges,
            row_top,
            global_top,
            auts: automorphisms(p),
            phi: vec![usize::MAX; v],
            used: vec![false; n],
            best: f64::NEG_INFINITY,
            best_map: None,
        }
    }

    /// Largest weight the unplaced pattern edges could still add at depth `k`.
    fn optimistic(&self, k: usize) -> f64 {
        let rows: f64 = self.pending[k]
            .iter()
            .map(|&(a, c)| self.row_top[self.phi[a]][c])
            .sum();
        rows + self.global_top[self.free_edges[k]]
    }

    fn descend(&mut self, k: usize, partial: f64) {
        if k == self.v {
            if partial > self.best && self.is_canonical() {
                self.best = partial;
                self.best_map = Some(self.phi.clone());
            }
            return;
        }
        let u = self.order[k];
        for h in 0..self.inst.n() {
            if self.used[h] {
                continue;
            }
            let gain: f64 = self.back[k].iter().map(|&a| self.inst.weight(self.phi[a], h)).sum();
            self.phi[u] = h;
            let next = partial + gain;
            if self.best_map.is_some() && next + self.optimistic(k + 1) <= self.best {
                continue;
            }
            self.used[h] = true;
            self.descend(k + 1, next);
            self.used[h] = false;
        }
        self.phi[u] = usize::MAX;
    }

    fn is_canonical(&self) -> bool {
        self.auts.iter().all(|s| {
            let image = s.iter().map(|&a| self.phi[a]);
            image.cmp(self.phi.iter().copied()) != std::cmp::Ordering::Less
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testutil::{integer_instance, real_instance};
    use crate::solvers::{brute_force, validate, Shape};
    use crate::structures::StructureFamily;

    #[test]
    fn automorphism_group_sizes() {
        assert_eq!(automorphisms(&GraphPattern::triangle()).len(), 6);
        assert_eq!(automorphisms(&GraphPattern::cycle(4)).len(), 8);
        assert_eq!(automorphisms(&GraphPattern::clique(4)).len(), 24);
        assert_eq!(automorphisms(&GraphPattern::single_edge()).len(), 2);
    }

    #[test]
    fn triangle_in_k3() {
        let inst = WeightedInstance::complete_from_fn(3, |i, j| (i + 2 * j) as f64);
        let s = max_copy(&inst, &GraphPattern::triangle()).unwrap();
        assert_eq!(s.weight, inst.weights().iter().sum::<f64>());
    }

    #[test]
    fn single_edge_is_max_weight() {
        let inst = real_instance(Shape::Complete(20), 3);
        let s = max_copy(&inst, &GraphPattern::single_edge()).unwrap();
        let top = inst.weights().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s.weight, top);
        assert!(s.edges[0].0 < s.edges[0].1);
    }

    #[test]
    fn against_enumeration() {
        let patterns = [GraphPattern::triangle(), GraphPattern::cycle(4), GraphPattern::clique(4)];
        for seed in 0..120 {
            let n = 4 + seed as usize % 4;
            let inst = if seed % 2 == 0 {
                integer_instance(Shape::Complete(n), seed, 2)
            } else {
                real_instance(Shape::Complete(n), seed)
            };
            for p in &patterns {
                let fam = StructureFamily::copy_of(p.clone(), n).unwrap();
                let s = max_copy(&inst, p).unwrap();
                validate(&fam, &inst, &s).unwrap();
                assert!((s.weight - brute_force(&fam, &inst).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn deterministic_under_ties() {
        let inst = WeightedInstance::complete_from_fn(8, |_, _| 1.0);
        let s = max_copy(&inst, &GraphPattern::triangle()).unwrap();
        assert_eq!(s.edges, vec![(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn full_scale_triangle() {
        let inst = real_instance(Shape::Complete(COPY_MAX_N), 11);
        let s = max_copy(&inst, &GraphPattern::triangle()).unwrap();
        let mut best = f64::NEG_INFINITY;
        for a in 0..COPY_MAX_N {
            for b in a + 1..COPY_MAX_N {
                for c in b + 1..COPY_MAX_N {
                    best = best.max(inst.weight(a, b) + inst.weight(b, c) + inst.weight(a, c));
                }
            }
        }
        assert!((s.weight - best).abs() < 1e-9);
    }

    #[test]
    fn rejects_oversize() {
        let inst = WeightedInstance::complete_from_fn(5, |_, _| 0.0);
        assert!(matches!(
            max_copy(&inst, &GraphPattern::clique(7)),
            Err(Error::PatternTooLarge { v: 7, max: 6 })
        ));
        assert!(max_copy(&inst, &GraphPattern::cycle(6)).is_err());
    }
}
