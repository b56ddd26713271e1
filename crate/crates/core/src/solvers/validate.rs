//! Structure checks that share no code with the solvers.

use itertools::Itertools;

use super::{Solution, WeightedInstance};
use crate::structures::{FamilyKind, StructureFamily};
use crate::{Error, Result};

/// Confirms that `sol` is a member of `family` on `inst` and that its
/// reported weight is the sum of its edge weights.
pub fn validate(family: &StructureFamily, inst: &WeightedInstance, sol: &Solution) -> Result<()> {
    let n = inst.n();
    let bad = |msg: String| Err(Error::invalid(format!("invalid {}: {msg}", family.tag())));
    if sol.family != family.tag() {
        return bad(format!("solution tagged {}", sol.family));
    }
    if family.n != n || family.is_bipartite() != inst.is_bipartite() {
        return bad("instance does not match family".into());
    }
    if let Some((i, j)) = sol.edges.iter().copied().find(|&(i, j)| i >= n || j >= n) {
        return bad(format!("edge ({i}, {j}) out of range"));
    }
    if !inst.is_bipartite() {
        if let Some(&(i, _)) = sol.edges.iter().find(|e| e.0 == e.1) {
            return bad(format!("loop at {i}"));
        }
        let distinct = sol.edges.iter().map(|&(i, j)| (i.min(j), i.max(j))).unique().count();
        if distinct != sol.edges.len() {
            return bad("repeated edge".into());
        }
    }

    match &family.kind {
        FamilyKind::Matching => {
            let rows = sol.edges.iter().map(|e| e.0).unique().count();
            let cols = sol.edges.iter().map(|e| e.1).unique().count();
            if sol.edges.len() != n || rows != n || cols != n {
                return bad("not a perfect matching".into());
            }
        }
        FamilyKind::SpanningTree => {
            if sol.edges.len() + 1 != n || component_size(n, &sol.edges, 0) != n {
                return bad("not a spanning tree".into());
            }
        }
        FamilyKind::HamiltonCycle => {
            let deg = degrees(n, &sol.edges);
            if sol.edges.len() != n || deg.iter().any(|&d| d != 2) {
                return bad("degree sequence is not 2-regular".into());
            }
            if component_size(n, &sol.edges, 0) != n {
                return bad("cycle is not connected".into());
            }
        }
        FamilyKind::PathOneTwo => {
            let deg = degrees(n, &sol.edges);
            let ok_deg = (0..n).all(|u| match u {
                0 | 1 => deg[u] == 1,
                _ => deg[u] == 0 || deg[u] == 2,
            });
            let touched = deg.iter().filter(|&&d| d > 0).count();
            if !ok_deg || sol.edges.len() + 1 != touched {
                return bad("not a simple path from 1 to 2".into());
            }
            if component_size(n, &sol.edges, 0) != touched {
                return bad("path is not connected".into());
            }
        }
        FamilyKind::CopyOf(p) => {
            if sol.edges.len() != p.edge_count() {
                return bad("wrong edge count".into());
            }
            let verts: Vec<usize> = sol.edges.iter().flat_map(|&(i, j)| [i, j]).unique().collect();
            if verts.len() > p.vertex_count() {
                return bad("too many vertices".into());
            }
            let host: std::collections::HashSet<(usize, usize)> =
                sol.edges.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
            // isolated pattern vertices may land anywhere; only edges need to match
            let spare = (0..n).filter(|u| !verts.contains(u));
            let pool: Vec<usize> = verts.iter().copied().chain(spare).take(p.vertex_count()).collect();
            let iso = pool.iter().copied().permutations(p.vertex_count()).any(|phi| {
                p.edges()
                    .iter()
                    .all(|&(a, b)| host.contains(&(phi[a].min(phi[b]), phi[a].max(phi[b]))))
            });
            if !iso {
                return bad("not isomorphic to the pattern".into());
            }
        }
    }

    let total: f64 = sol.edges.iter().map(|&(i, j)| inst.weight(i, j)).sum();
    if (total - sol.weight).abs() > 1e-9 * (1.0 + total.abs()) {
        return bad(format!("reported weight {} but edges sum to {total}", sol.weight));
    }
    Ok(())
}

fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0; n];
    for &(i, j) in edges {
        deg[i] += 1;
        deg[j] += 1;
    }
    deg
}

/// Vertices reachable from `start` along `edges`.
fn component_size(n: usize, edges: &[(usize, usize)], start: usize) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}
