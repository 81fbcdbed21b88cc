use super::{ColoredGraph, VertexSet};

/// A cluster deletion set and whether it is known to be minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterDeletion {
    pub set: VertexSet,
    pub minimum: bool,
}

const BRANCH_BUDGET: usize = 2_000_000;

/// Finds an induced path `a - b - c` (with `a`, `c` non-adjacent) avoiding `deleted`.
fn find_p3(graph: &ColoredGraph, deleted: &[bool]) -> Option<[usize; 3]> {
    for b in 0..graph.n() {
        if deleted[b] {
            continue;
        }
        let nbrs: Vec<usize> = graph
            .neighbors(b)
            .iter()
            .copied()
            .filter(|&w| !deleted[w])
            .collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                if !graph.has_edge(a, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

pub fn is_cluster_deletion_set(graph: &ColoredGraph, set: &VertexSet) -> bool {
    let mut deleted = vec![false; graph.n()];
    for &v in set {
        if v >= graph.n() {
            return false;
        }
        deleted[v] = true;
    }
    find_p3(graph, &deleted).is_none()
}

fn branch(
    graph: &ColoredGraph,
    deleted: &mut Vec<bool>,
    picked: &mut Vec<usize>,
    bound: usize,
    steps: &mut usize,
) -> Option<bool> {
    *steps += 1;
    if *steps > BRANCH_BUDGET {
        return None;
    }
    let Some(p3) = find_p3(graph, deleted) else {
        return Some(true);
    };
    if picked.len() == bound {
        return Some(false);
    }
    for v in p3 {
        deleted[v] = true;
        picked.push(v);
        let found = branch(graph, deleted, picked, bound, steps)?;
        if found {
            return Some(true);
        }
        picked.pop();
        deleted[v] = false;
    }
    Some(false)
}

/// Minimum cluster deletion set by branching on induced `P₃`s (every such path
/// forces one of its vertices into the set), with iterative deepening on the
/// solution size. Falls back to a greedy choice once the branching budget is
/// spent.
pub fn cluster_deletion_set(graph: &ColoredGraph) -> ClusterDeletion {
    let n = graph.n();
    let mut steps = 0;
    for bound in 0..=n {
        let mut deleted = vec![false; n];
        let mut picked = Vec::new();
        match branch(graph, &mut deleted, &mut picked, bound, &mut steps) {
            Some(true) => {
                return ClusterDeletion {
                    set: picked.into_iter().collect(),
                    minimum: true,
                }
            }
            Some(false) => continue,
            None => break,
        }
    }
    // greedy: delete the highest-degree vertex of each remaining P3
    let mut deleted = vec![false; n];
    let mut set = VertexSet::new();
    while let Some(p3) = find_p3(graph, &deleted) {
        let v = *p3.iter().max_by_key(|&&v| (graph.degree(v), v)).unwrap();
        deleted[v] = true;
        set.insert(v);
    }
    ClusterDeletion {
        set,
        minimum: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_sizes() {
        let triangles = ColoredGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
        )
        .unwrap();
        assert!(cluster_deletion_set(&triangles).set.is_empty());

        let p3 = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let d = cluster_deletion_set(&p3);
        assert_eq!(d.set.len(), 1);
        assert!(is_cluster_deletion_set(&p3, &d.set));

        let c5 =
            ColoredGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let d = cluster_deletion_set(&c5);
        assert_eq!(d.set.len(), 2);
        assert!(d.minimum);
        assert!(is_cluster_deletion_set(&c5, &d.set));
    }
}
