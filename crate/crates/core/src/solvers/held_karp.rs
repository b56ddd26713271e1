//! Subset dynamic programs over `(visited set, endpoint)` states.
//!
//! Both programs store one `f64` per state; at `n = 20` the cycle table
//! holds `2^19 · 19` entries (~80 MB), which is why the size is capped.

use super::{Solution, WeightedInstance};
use crate::structures::FamilyTag;
use crate::{Error, Result};

pub const DEFAULT_DP_CAP: usize = 20;

/// Exact maximum-weight Hamilton cycle.
///
/// The cycle is reported from vertex 0, oriented so that the second
/// vertex has the smaller index of vertex 0's two neighbours.
pub fn max_hamilton_cycle(inst: &WeightedInstance, cap: usize) -> Result<Solution> {
    let n = complete_size(inst)?;
    if n < 3 {
        return Err(Error::invalid("Hamilton cycle needs n ≥ 3"));
    }
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    // vertices 1..n map to bits 0..m
    let m = n - 1;
    let dp = paths_from(inst, 0, 1, m);
    let full = (1usize << m) - 1;
    let mut best = f64::NEG_INFINITY;
    let mut end = 0;
    for k in 0..m {
        let v = dp[full * m + k] + inst.weight(k + 1, 0);
        if v > best {
            best = v;
            end = k;
        }
    }
    let mut walk = vec![0];
    walk.extend(trace_back(inst, &dp, 0, 1, m, full, end));
    if walk[1] > walk[n - 1] {
        walk[1..].reverse();
    }
    let edges = (0..n).map(|i| (walk[i], walk[(i + 1) % n])).collect();
    Ok(Solution::from_edges(FamilyTag::HamiltonCycle, inst, edges))
}

/// Exact maximum-weight simple path from vertex 0 to vertex 1, over all
/// lengths (the direct edge included).
pub fn max_path_1_2(inst: &WeightedInstance, cap: usize) -> Result<Solution> {
    let n = complete_size(inst)?;
    if n < 2 {
        return Err(Error::invalid("1–2 path needs n ≥ 2"));
    }
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    // intermediate vertices 2..n map to bits 0..m
    let m = n - 2;
    let dp = paths_from(inst, 0, 2, m);
    let mut best = inst.weight(0, 1);
    let mut arg: Option<(usize, usize)> = None;
    for mask in 1..(1usize << m) {
        for k in 0..m {
            if mask >> k & 1 == 0 {
                continue;
            }
            let v = dp[mask * m + k] + inst.weight(k + 2, 1);
            if v > best {
                best = v;
                arg = Some((mask, k));
            }
        }
    }
    let mut walk = vec![0];
    if let Some((mask, end)) = arg {
        walk.extend(trace_back(inst, &dp, 0, 2, m, mask, end));
    }
    walk.push(1);
    let edges = walk.windows(2).map(|w| (w[0], w[1])).collect();
    Ok(Solution::from_edges(FamilyTag::PathOneTwo, inst, edges))
}

fn complete_size(inst: &WeightedInstance) -> Result<usize> {
    if inst.is_bipartite() {
        return Err(Error::invalid("subset DP needs a complete instance"));
    }
    Ok(inst.n())
}

/// `dp[mask * m + k]`: heaviest path from `start` through exactly the
/// vertices in `mask` (bit `b` ↔ vertex `b + offset`) ending at bit `k`.
fn paths_from(inst: &WeightedInstance, start: usize, offset: usize, m: usize) -> Vec<f64> {
    let states = 1usize << m;
    let mut dp = vec![f64::NEG_INFINITY; states * m];
    for k in 0..m {
        dp[(1 << k) * m + k] = inst.weight(start, k + offset);
    }
    // neighbour weights between intermediate vertices, row-major
    let mut w = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                w[a * m + b] = inst.weight(a + offset, b + offset);
            }
        }
    }
    for mask in 1..states {
        for end in 0..m {
            let cur = dp[mask * m + end];
            if mask >> end & 1 == 0 || cur == f64::NEG_INFINITY {
                continue;
            }
            let row = &w[end * m..end * m + m];
            let mut free = !mask & (states - 1);
            while free != 0 {
                let nxt = free.trailing_zeros() as usize;
                free &= free - 1;
                let slot = &mut dp[(mask | 1 << nxt) * m + nxt];
                let cand = cur + row[nxt];
                if cand > *slot {
                    *slot = cand;
                }
            }
        }
    }
    dp
}

/// Vertex sequence (excluding `start`) realising `dp[mask][end]`.
fn trace_back(
    inst: &WeightedInstance,
    dp: &[f64],
    start: usize,
    offset: usize,
    m: usize,
    mut mask: usize,
    mut end: usize,
) -> Vec<usize> {
    let mut rev = vec![end + offset];
    while mask.count_ones() > 1 {
        let target = dp[mask * m + end];
        let prev_mask = mask & !(1 << end);
        let prev = (0..m)
            .filter(|&p| prev_mask >> p & 1 == 1)
            .find(|&p| dp[prev_mask * m + p] + inst.weight(p + offset, end + offset) == target)
            .expect("dp value has a predecessor");
        rev.push(prev + offset);
        mask = prev_mask;
        end = prev;
    }
    debug_assert_eq!(dp[mask * m + end], inst.weight(start, end + offset));
    rev.reverse();
    rev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testutil::{integer_instance, real_instance};
    use crate::solvers::{brute_force, validate, Shape};
    use crate::structures::StructureFamily;

    fn k3(w01: f64, w02: f64, w12: f64) -> WeightedInstance {
        WeightedInstance::complete_from_fn(3, |i, j| match (i, j) {
            (0, 1) => w01,
            (0, 2) => w02,
            _ => w12,
        })
    }

    #[test]
    fn small_cycles() {
        let ones = WeightedInstance::complete_from_fn(4, |_, _| 1.0);
        assert_eq!(max_hamilton_cycle(&ones, 20).unwrap().weight, 4.0);
        let tri = k3(1.0, 2.0, 4.0);
        let s = max_hamilton_cycle(&tri, 20).unwrap();
        assert_eq!(s.weight, 7.0);
        assert_eq!(s.walk(), vec![0, 1, 2]);
    }

    #[test]
    fn cycle_orientation_and_cap() {
        for seed in 0..20 {
            let inst = real_instance(Shape::Complete(7), seed);
            let walk = max_hamilton_cycle(&inst, 20).unwrap().walk();
            assert_eq!(walk[0], 0);
            assert!(walk[1] < walk[6]);
        }
        let inst = WeightedInstance::complete_from_fn(6, |_, _| 0.0);
        assert!(matches!(
            max_hamilton_cycle(&inst, 5),
            Err(Error::InstanceTooLarge { n: 6, cap: 5 })
        ));
    }

    #[test]
    fn small_paths() {
        let s = max_path_1_2(&k3(5.0, 1.0, 1.0), 20).unwrap();
        assert_eq!(s.edges, vec![(0, 1)]);
        assert_eq!(s.weight, 5.0);
        let s = max_path_1_2(&k3(1.0, 3.0, 3.0), 20).unwrap();
        assert_eq!(s.walk(), vec![0, 2, 1]);
        assert_eq!(s.weight, 6.0);
        let two = WeightedInstance::complete_from_fn(2, |_, _| -4.0);
        assert_eq!(max_path_1_2(&two, 20).unwrap().weight, -4.0);
    }

    #[test]
    fn against_enumeration() {
        for seed in 0..120 {
            let n = 3 + seed as usize % 6;
            let inst = if seed % 3 == 0 {
                integer_instance(Shape::Complete(n), seed, 2)
            } else {
                real_instance(Shape::Complete(n), seed)
            };
            let cyc = StructureFamily::hamilton_cycle(n);
            let s = max_hamilton_cycle(&inst, 20).unwrap();
            validate(&cyc, &inst, &s).unwrap();
            assert!((s.weight - brute_force(&cyc, &inst).unwrap()).abs() < 1e-9);

            let path = StructureFamily::path_one_two(n);
            let s = max_path_1_2(&inst, 20).unwrap();
            validate(&path, &inst, &s).unwrap();
            assert!((s.weight - brute_force(&path, &inst).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_shift_for_cycles() {
        let inst = real_instance(Shape::Complete(10), 4);
        let a = max_hamilton_cycle(&inst, 20).unwrap();
        let b = max_hamilton_cycle(&inst.map_weights(|w| w + 1.25), 20).unwrap();
        assert_eq!(a.edges, b.edges);
        assert!((b.weight - a.weight - 10.0 * 1.25).abs() < 1e-9);
    }
}
