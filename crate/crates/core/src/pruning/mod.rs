//! Lower-bound certificates by pruning.
//!
//! Keep only the edges heavier than a level just below the threshold `x_n`;
//! the survivors form a binomial random graph, and any copy of the target
//! structure inside it weighs at least `size × level`.

mod hamilton;
mod hopcroft;

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::ratefn::threshold_xn;
use crate::solvers::{validate, Solution, WeightedInstance, DEFAULT_DP_CAP};
use crate::structures::{FamilyKind, FamilyTag, GraphPattern, StructureFamily};
use crate::{Error, Result};

pub use hamilton::EXACT_MAX_N;
pub use hopcroft::{hopcroft_matching, BipartiteMatching};

/// The edges of an instance strictly above a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdGraph {
    pub n: usize,
    pub bipartite: bool,
    /// Bipartite: row → columns. Complete: symmetric neighbour lists.
    pub adj: Vec<Vec<usize>>,
    pub edge_count: usize,
}

impl ThresholdGraph {
    /// Fraction of the instance's edges that survived.
    pub fn density(&self) -> f64 {
        let total = if self.bipartite {
            self.n * self.n
        } else {
            self.n * self.n.saturating_sub(1) / 2
        };
        if total == 0 {
            0.0
        } else {
            self.edge_count as f64 / total as f64
        }
    }
}

pub fn threshold_graph(inst: &WeightedInstance, level: f64) -> ThresholdGraph {
    let n = inst.n();
    let mut adj = vec![Vec::new(); n];
    let mut edge_count = 0;
    for (idx, &w) in inst.weights().iter().enumerate() {
        if w > level {
            let (i, j) = inst.edge_endpoints(idx);
            adj[i].push(j);
            if !inst.is_bipartite() {
                adj[j].push(i);
            }
            edge_count += 1;
        }
    }
    if !inst.is_bipartite() {
        // keep neighbour lists sorted so searches are order-stable
        adj.iter_mut().for_each(|a| a.sort_unstable());
    }
    ThresholdGraph {
        n,
        bipartite: inst.is_bipartite(),
        adj,
        edge_count,
    }
}

/// How the structure was sought; only an exhaustive miss proves absence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Search {
    Exhaustive,
    Heuristic,
}

/// A witnessed lower bound on the optimum, or an honest miss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: FamilyTag,
    pub level: f64,
    /// Edges of the witness, in the solver's edge conventions.
    pub structure: Option<Vec<(usize, usize)>>,
    /// `size × level`; `None` when nothing was found.
    pub certified_bound: Option<f64>,
    pub threshold_edges: usize,
    /// `P(X > level)`, the survival probability of each edge.
    pub edge_probability: f64,
    /// Edge count of a 1–2 path witness.
    pub path_length: Option<usize>,
    pub search: Search,
}

impl Certificate {
    pub fn found(&self) -> bool {
        self.structure.is_some()
    }

    /// Re-check the witness: a member of the family whose every edge lies
    /// strictly above the level.
    pub fn verify(&self, family: &StructureFamily, inst: &WeightedInstance) -> Result<()> {
        let Some(edges) = &self.structure else {
            return match self.certified_bound {
                None => Ok(()),
                Some(_) => Err(Error::invalid("bound claimed without a witness")),
            };
        };
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| !(inst.weight(i, j) > self.level)) {
            return Err(Error::invalid(format!("edge ({i}, {j}) is not above the level")));
        }
        let sol = Solution::from_edges(family.tag(), inst, edges.clone());
        validate(family, inst, &sol)?;
        let bound = self.certified_bound.ok_or_else(|| Error::invalid("witness without a bound"))?;
        if bound != edges.len() as f64 * self.level {
            return Err(Error::invalid("bound is not size × level"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Largest `n` searched exhaustively for cycles and paths.
    pub dp_cap: usize,
    /// Rotation–extension restarts per vertex beyond the cap.
    pub restarts_per_vertex: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            dp_cap: DEFAULT_DP_CAP,
            restarts_per_vertex: 50,
            seed: 0,
        }
    }
}

/// `δ = 1 / log n`.
pub fn default_delta(n: usize) -> f64 {
    1.0 / (n as f64).ln()
}

/// `(1 − δ) x_n`, with `(α, ω) = (1, 2 log n)`, or `(1/d, log n)` for a
/// pattern of density `d`.
pub fn pruning_level(family: &StructureFamily, dist: &Distribution, delta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidDelta(delta));
    }
    let n = family.n;
    let ln_n = (n as f64).ln();
    let (alpha, omega) = match &family.kind {
        FamilyKind::CopyOf(p) => {
            let d = p.density();
            (*d.denom() as f64 / *d.numer() as f64, ln_n)
        }
        _ => (1.0, 2.0 * ln_n),
    };
    Ok((1.0 - delta) * threshold_xn(dist, alpha, omega, n as u64)?)
}

pub fn certify_lower_bound(
    family: &StructureFamily,
    inst: &WeightedInstance,
    delta: f64,
    dist: &Distribution,
) -> Result<Certificate> {
    certify_with(family, inst, delta, dist, CertifyOptions::default())
}

pub fn certify_with(
    family: &StructureFamily,
    inst: &WeightedInstance,
    delta: f64,
    dist: &Distribution,
    opts: CertifyOptions,
) -> Result<Certificate> {
    if family.n != inst.n() || family.is_bipartite() != inst.is_bipartite() {
        return Err(Error::invalid(format!(
            "instance {:?} does not match family {family}",
            inst.shape()
        )));
    }
    let level = pruning_level(family, dist, delta)?;
    let g = threshold_graph(inst, level);
    let n = g.n;
    let exact_ok = n <= opts.dp_cap.min(EXACT_MAX_N);
    let restarts = opts.restarts_per_vertex * n;
    let mut search = Search::Exhaustive;

    let structure: Option<Vec<(usize, usize)>> = match &family.kind {
        FamilyKind::Matching => {
            let m = hopcroft_matching(&g.adj, n);
            m.is_perfect().then(|| m.pairs())
        }
        FamilyKind::SpanningTree => bfs_tree(&g.adj),
        FamilyKind::HamiltonCycle => {
            let walk = if exact_ok {
                hamilton::exact_cycle(&g.adj)
            } else {
                search = Search::Heuristic;
                hamilton::posa_cycle(&g.adj, restarts, opts.seed)
            };
            walk.map(|w| (0..n).map(|i| (w[i], w[(i + 1) % n])).collect())
        }
        FamilyKind::PathOneTwo => {
            let walk = if exact_ok {
                hamilton::exact_longest_path(&g.adj)
            } else {
                // fall back to a shortest path if no Hamilton path turns up
                search = Search::Heuristic;
                hamilton::posa_path(&g.adj, restarts, opts.seed).or_else(|| bfs_path(&g.adj, 0, 1))
            };
            walk.map(|w| w.windows(2).map(|p| (p[0], p[1])).collect())
        }
        FamilyKind::CopyOf(p) => find_embedding(&g.adj, p.pattern())
            .map(|phi| p.edges().iter().map(|&(a, b)| (phi[a], phi[b])).collect()),
    };

    let certified_bound = structure.as_ref().map(|s: &Vec<_>| s.len() as f64 * level);
    let path_length = match family.kind {
        FamilyKind::PathOneTwo => structure.as_ref().map(|s| s.len()),
        _ => None,
    };
    Ok(Certificate {
        family: family.tag(),
        level,
        structure,
        certified_bound,
        threshold_edges: g.edge_count,
        edge_probability: dist.tail(level),
        path_length,
        search,
    })
}

/// Breadth-first spanning tree from vertex 0, if the graph is connected.
fn bfs_tree(adj: &[Vec<usize>]) -> Option<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = std::collections::VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    (edges.len() + 1 == n).then_some(edges)
}

/// Shortest path between two vertices as a vertex sequence.
fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut walk = vec![to];
            let mut v = to;
            while v != from {
                v = parent[v];
                walk.push(v);
            }
            walk.reverse();
            return Some(walk);
        }
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Some injection of the pattern into the graph preserving its edges.
fn find_embedding(adj: &[Vec<usize>], p: &GraphPattern) -> Option<Vec<usize>> {
    let n = adj.len();
    let v = p.vertex_count();
    if n < v {
        return None;
    }
    let mut matrix = vec![false; n * n];
    for (i, nbrs) in adj.iter().enumerate() {
        for &j in nbrs {
            matrix[i * n + j] = true;
        }
    }
    let pat = p.adjacency_masks();
    // place vertices with the most already-placed neighbours first
    let mut order: Vec<usize> = Vec::with_capacity(v);
    while order.len() < v {
        let placed: u32 = order.iter().map(|&u| 1u32 << u).sum();
        let next = (0..v)
            .filter(|&u| placed >> u & 1 == 0)
            .max_by_key(|&u| ((pat[u] & placed).count_ones(), pat[u].count_ones(), std::cmp::Reverse(u)))
            .expect("unplaced vertex remains");
        order.push(next);
    }

    fn place(
        k: usize,
        order: &[usize],
        pat: &[u32],
        matrix: &[bool],
        n: usize,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let u = order[k];
        for h in 0..n {
            if used[h] {
                continue;
            }
            let fits = order[..k]
                .iter()
                .filter(|&&a| pat[u] >> a & 1 == 1)
                .all(|&a| matrix[phi[a] * n + h]);
            if !fits {
                continue;
            }
            phi[u] = h;
            used[h] = true;
            if place(k + 1, order, pat, matrix, n, phi, used) {
                return true;
            }
            used[h] = false;
        }
        false
    }

    let mut phi = vec![usize::MAX; v];
    let mut used = vec![false; n];
    place(0, &order, &pat, &matrix, n, &mut phi, &mut used).then_some(phi)
}
