//! Exact maximum-weight solvers over a realised weighted instance.
//!
//! Vertices are 0-indexed here; the CLI shifts to 1-indexed on output.
//! Every solver breaks ties deterministically so that runs are
//! bit-reproducible even when weights repeat.

mod assignment;
mod brute;
mod copy;
mod held_karp;
mod tree;
mod validate;

use serde::{Deserialize, Serialize};

use crate::structures::{FamilyKind, FamilyTag, StructureFamily};
use crate::{Error, Result};

pub use assignment::max_matching;
pub use brute::brute_force;
pub use copy::{max_copy, COPY_MAX_N, COPY_MAX_V};
pub use held_karp::{max_hamilton_cycle, max_path_1_2, DEFAULT_DP_CAP};
pub use tree::max_spanning_tree;
pub use validate::validate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// `K_{n,n}`; weights indexed `row * n + col`.
    BipartiteComplete(usize),
    /// `K_n`; weights indexed by the canonical order of pairs `i < j`.
    Complete(usize),
}

/// Where an instance came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub dist: String,
    pub seed: u64,
    pub trial: u64,
}

/// A complete (bipartite) graph with one real weight per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedInstance {
    shape: Shape,
    weights: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl WeightedInstance {
    pub fn new(shape: Shape, weights: Vec<f64>) -> Result<Self> {
        let expect = edge_count(shape);
        if weights.len() != expect {
            return Err(Error::invalid(format!(
                "{shape:?} needs {expect} weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        Ok(WeightedInstance {
            shape,
            weights,
            provenance: None,
        })
    }

    /// Bipartite instance from a square matrix, `rows[i][j] = w(i, j)`.
    pub fn bipartite_from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("weight matrix must be square"));
        }
        Self::new(Shape::BipartiteComplete(n), rows.concat())
    }

    /// Complete instance from a weight function on pairs `i < j`.
    pub fn complete_from_fn(n: usize, mut w: impl FnMut(usize, usize) -> f64) -> Self {
        let weights = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| w(i, j))
            .collect();
        Self::new(Shape::Complete(n), weights).expect("sized by construction")
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        match self.shape {
            Shape::BipartiteComplete(n) | Shape::Complete(n) => n,
        }
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.shape, Shape::BipartiteComplete(_))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of edge `(i, j)`: row/column for bipartite, unordered pair
    /// otherwise.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[self.edge_index(i, j)]
    }

    #[inline]
    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        match self.shape {
            Shape::BipartiteComplete(n) => {
                debug_assert!(i < n && j < n);
                i * n + j
            }
            Shape::Complete(n) => {
                debug_assert!(i != j && i < n && j < n);
                pair_index(n, i.min(j), i.max(j))
            }
        }
    }

    /// The endpoints of edge number `idx`.
    pub fn edge_endpoints(&self, idx: usize) -> (usize, usize) {
        match self.shape {
            Shape::BipartiteComplete(n) => (idx / n, idx % n),
            Shape::Complete(n) => {
                // invert start(i) = i(2n−i−1)/2 ≤ idx, then correct rounding
                let m = (2 * n - 1) as f64;
                let guess = ((m - (m * m - 8.0 * idx as f64).max(0.0).sqrt()) / 2.0).floor();
                let mut i = (guess.max(0.0) as usize).min(n.saturating_sub(2));
                while i > 0 && pair_index(n, i, i + 1) > idx {
                    i -= 1;
                }
                while i + 2 < n && pair_index(n, i + 1, i + 2) <= idx {
                    i += 1;
                }
                (i, i + 1 + idx - pair_index(n, i, i + 1))
            }
        }
    }

    /// Same instance with every weight transformed.
    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Self {
        WeightedInstance {
            shape: self.shape,
            weights: self.weights.iter().map(|&w| f(w)).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Sum of weights over an edge list, in list order.
    pub fn total(&self, edges: &[(usize, usize)]) -> f64 {
        edges.iter().map(|&(i, j)| self.weight(i, j)).sum()
    }
}

/// Number of edges of a shape.
pub fn edge_count(shape: Shape) -> usize {
    match shape {
        Shape::BipartiteComplete(n) => n * n,
        Shape::Complete(n) => n * n.saturating_sub(1) / 2,
    }
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// An optimal structure and its weight.
///
/// Edge order carries structure: matchings list `(row, col)` by row;
/// cycles and paths list consecutive vertex pairs along the walk; copies
/// list the images of the pattern's edges in pattern order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub family: FamilyTag,
    pub edges: Vec<(usize, usize)>,
    pub weight: f64,
}

impl Solution {
    pub(crate) fn from_edges(
        family: FamilyTag,
        inst: &WeightedInstance,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        let weight = inst.total(&edges);
        Solution {
            family,
            edges,
            weight,
        }
    }

    /// Vertex sequence of a cycle or path solution.
    pub fn walk(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().map(|e| e.0).collect();
        if let Some(last) = self.edges.last() {
            if self.family == FamilyTag::PathOneTwo {
                out.push(last.1);
            }
        }
        out
    }
}

/// Solver knobs.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Largest `n` for the subset dynamic programs.
    pub dp_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dp_cap: DEFAULT_DP_CAP,
        }
    }
}

/// Checks that `inst` has the shape `family` optimises over and that the
/// exact solver can handle its size, without solving anything.
pub fn check_solvable(family: &StructureFamily, opts: SolveOptions) -> Result<()> {
    let n = family.n;
    match &family.kind {
        FamilyKind::Matching => {
            if n == 0 {
                return Err(Error::invalid("matching needs n ≥ 1"));
            }
        }
        FamilyKind::SpanningTree => {
            if n < 2 {
                return Err(Error::invalid("spanning tree needs n ≥ 2"));
            }
        }
        FamilyKind::HamiltonCycle => {
            if n < 3 {
                return Err(Error::invalid("Hamilton cycle needs n ≥ 3"));
            }
            if n > opts.dp_cap {
                return Err(Error::InstanceTooLarge { n, cap: opts.dp_cap });
            }
        }
        FamilyKind::PathOneTwo => {
            if n < 2 {
                return Err(Error::invalid("1–2 path needs n ≥ 2"));
            }
            if n > opts.dp_cap {
                return Err(Error::InstanceTooLarge { n, cap: opts.dp_cap });
            }
        }
        FamilyKind::CopyOf(p) => {
            if p.vertex_count() > COPY_MAX_V {
                return Err(Error::PatternTooLarge {
                    v: p.vertex_count(),
                    max: COPY_MAX_V,
                });
            }
            if n > COPY_MAX_N {
                return Err(Error::InstanceTooLarge { n, cap: COPY_MAX_N });
            }
            if n < p.vertex_count() {
                return Err(Error::invalid(format!(
                    "K_{n} has no copy of a {}-vertex pattern",
                    p.vertex_count()
                )));
            }
        }
    }
    Ok(())
}

/// Solve `family` exactly on `inst`.
pub fn solve(
    family: &StructureFamily,
    inst: &WeightedInstance,
    opts: SolveOptions,
) -> Result<Solution> {
    check_solvable(family, opts)?;
    if family.is_bipartite() != inst.is_bipartite() || family.n != inst.n() {
        return Err(Error::invalid(format!(
            "instance {:?} does not match family {family}",
            inst.shape()
        )));
    }
    match &family.kind {
        FamilyKind::Matching => max_matching(inst),
        FamilyKind::SpanningTree => max_spanning_tree(inst),
        FamilyKind::HamiltonCycle => max_hamilton_cycle(inst, opts.dp_cap),
        FamilyKind::PathOneTwo => max_path_1_2(inst, opts.dp_cap),
        FamilyKind::CopyOf(p) => max_copy(inst, p.pattern()),
    }
}
