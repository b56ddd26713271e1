//! Exhaustive enumeration of `C_n` for tiny instances; the test oracle.

use itertools::Itertools;

use super::WeightedInstance;
use crate::structures::{FamilyKind, StructureFamily};
use crate::{Error, Result};

const MAX_N: usize = 8;
const MAX_N_MATCHING: usize = 7;
const MAX_PATTERN_V: usize = 4;

/// Maximum weight over every member of the family.
pub fn brute_force(family: &StructureFamily, inst: &WeightedInstance) -> Result<f64> {
    let n = inst.n();
    if family.n != n || family.is_bipartite() != inst.is_bipartite() {
        return Err(Error::invalid("instance does not match family"));
    }
    let cap = match family.kind {
        FamilyKind::Matching => MAX_N_MATCHING,
        _ => MAX_N,
    };
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let best = match &family.kind {
        FamilyKind::Matching => (0..n)
            .permutations(n)
            .map(|p| p.iter().enumerate().map(|(i, &j)| inst.weight(i, j)).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        FamilyKind::SpanningTree => {
            if n < 2 {
                return Err(Error::invalid("spanning tree needs n ≥ 2"));
            }
            std::iter::repeat(0..n)
                .take(n - 2)
                .multi_cartesian_product()
                .map(|code| inst.total(&prufer_decode(&code, n)))
                .fold(if n == 2 { inst.weight(0, 1) } else { f64::NEG_INFINITY }, f64::max)
        }
        FamilyKind::HamiltonCycle => {
            if n < 3 {
                return Err(Error::invalid("Hamilton cycle needs n ≥ 3"));
            }
            (1..n)
                .permutations(n - 1)
                .filter(|p| p[0] < p[n - 2])
                .map(|p| {
                    let walk: Vec<usize> = std::iter::once(0).chain(p).collect();
                    (0..n).map(|i| inst.weight(walk[i], walk[(i + 1) % n])).sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
        FamilyKind::PathOneTwo => {
            if n < 2 {
                return Err(Error::invalid("1–2 path needs n ≥ 2"));
            }
            (0..=n - 2)
                .flat_map(|len| (2..n).permutations(len))
                .map(|mid| {
                    let walk: Vec<usize> = std::iter::once(0).chain(mid).chain([1]).collect();
                    walk.windows(2).map(|w| inst.weight(w[0], w[1])).sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
        FamilyKind::CopyOf(p) => {
            let v = p.vertex_count();
            if v > MAX_PATTERN_V {
                return Err(Error::PatternTooLarge { v, max: MAX_PATTERN_V });
            }
            if n < v {
                return Err(Error::invalid("pattern larger than host"));
            }
            (0..n)
                .permutations(v)
                .map(|phi| p.edges().iter().map(|&(a, b)| inst.weight(phi[a], phi[b])).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
        }
    };
    Ok(best)
}

/// Tree on `[n]` encoded by a Prüfer sequence of length `n − 2`.
fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
