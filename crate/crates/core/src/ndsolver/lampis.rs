use crate::graph::{type_partition, ColoredGraph};

/// One round of type shrinking: for every type with more than `q` members,
/// the largest ids beyond the `q` smallest. Empty when no type is too big.
pub fn shrink_round(graph: &ColoredGraph, q: usize) -> Vec<usize> {
    let parts = type_partition(graph);
    let mut drop: Vec<usize> = parts
        .classes()
        .iter()
        .filter(|c| c.len() > q)
        .flat_map(|c| c[q..].iter().copied())
        .collect();
    drop.sort_unstable();
    drop
}

/// Deletes vertices from types with more than `q` members until every type
/// has at most `q` members. Returns the reduced graph and, for each of its
/// vertices, the id it had in `graph`.
pub fn lampis_reduce(graph: &ColoredGraph, q: usize) -> (ColoredGraph, Vec<usize>) {
    assert!(q >= 1, "q must be positive");
    let mut g = graph.clone();
    let mut ids: Vec<usize> = (0..graph.n()).collect();
    loop {
        let drop = shrink_round(&g, q);
        if drop.is_empty() {
            return (g, ids);
        }
        let (h, kept) = g.without_vertices(&drop.into_iter().collect());
        ids = kept.iter().map(|&v| ids[v]).collect();
        g = h;
    }
}

/// The same reduction one vertex at a time: the original ids in deletion
/// order. Each deletion removes the largest member of the first type (in
/// class order) that still has more than `q` members.
pub fn lampis_steps(graph: &ColoredGraph, q: usize) -> Vec<usize> {
    assert!(q >= 1, "q must be positive");
    let mut g = graph.clone();
    let mut ids: Vec<usize> = (0..graph.n()).collect();
    let mut out = Vec::new();
    loop {
        let parts = type_partition(&g);
        let Some(class) = parts.classes().iter().find(|c| c.len() > q) else {
            return out;
        };
        let v = *class.last().expect("class is nonempty");
        out.push(ids[v]);
        let (h, kept) = g.without_vertices(&[v].into());
        ids = kept.iter().map(|&u| ids[u]).collect();
        g = h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_shrinks_to_q() {
        let mut edges = Vec::new();
        for u in 0..7 {
            for v in u + 1..7 {
                edges.push((u, v));
            }
        }
        let k7 = ColoredGraph::from_edges(7, &edges).unwrap();
        let (g, ids) = lampis_reduce(&k7, 2);
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(ids, vec![0, 1]);
        assert_eq!(lampis_steps(&k7, 2), vec![6, 5, 4, 3, 2]);
    }

    #[test]
    fn small_types_are_a_fixpoint() {
        let p4 = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (g, ids) = lampis_reduce(&p4, 1);
        assert_eq!(g, p4);
        assert_eq!(ids, vec![0, 1, 2, 3]);
        assert!(lampis_steps(&p4, 1).is_empty());
    }
}
