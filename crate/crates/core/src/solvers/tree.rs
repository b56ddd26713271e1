use petgraph::unionfind::UnionFind;

use super::{Solution, WeightedInstance};
use crate::structures::FamilyTag;
use crate::{Error, Result};

/// Maximum spanning tree of `K_n` by Kruskal's rule: edges in decreasing
/// weight, ties by canonical edge index, skipping any that closes a cycle.
pub fn max_spanning_tree(inst: &WeightedInstance) -> Result<Solution> {
    if inst.is_bipartite() {
        return Err(Error::invalid("spanning tree needs a complete instance"));
    }
    let n = inst.n();
    if n < 2 {
        return Err(Error::invalid("spanning tree needs n ≥ 2"));
    }
    let w = inst.weights();
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));

    let mut dsu = UnionFind::<usize>::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for idx in order {
        let (i, j) = inst.edge_endpoints(idx);
        if dsu.union(i, j) {
            edges.push((i, j));
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    Ok(Solution::from_edges(FamilyTag::SpanningTree, inst, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testutil::{integer_instance, real_instance};
    use crate::solvers::{brute_force, validate, Shape};
    use crate::structures::StructureFamily;

    #[test]
    fn triangle_example() {
        let inst = WeightedInstance::complete_from_fn(3, |i, j| match (i, j) {
            (0, 1) => 3.0,
            (0, 2) => 1.0,
            _ => 2.0,
        });
        let s = max_spanning_tree(&inst).unwrap();
        assert_eq!(s.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(s.weight, 5.0);
    }

    #[test]
    fn equal_weights() {
        let inst = WeightedInstance::complete_from_fn(9, |_, _| 1.5);
        let s = max_spanning_tree(&inst).unwrap();
        assert_eq!(s.weight, 8.0 * 1.5);
        // ties resolved by canonical index: the star at vertex 0
        assert!(s.edges.iter().all(|e| e.0 == 0));
    }

    #[test]
    fn against_prufer_enumeration() {
        for seed in 0..150 {
            let n = 2 + seed as usize % 5;
            let inst = if seed % 2 == 0 {
                integer_instance(Shape::Complete(n), seed, 3)
            } else {
                real_instance(Shape::Complete(n), seed)
            };
            let fam = StructureFamily::spanning_tree(n);
            let s = max_spanning_tree(&inst).unwrap();
            validate(&fam, &inst, &s).unwrap();
            assert!((s.weight - brute_force(&fam, &inst).unwrap()).abs() < 1e-9);
        }
    }
}
