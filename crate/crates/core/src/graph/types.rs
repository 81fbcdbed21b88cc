use super::ColoredGraph;

/// Partition of the vertices into types: maximal classes of twins
/// (`N(u) = N(v)` or `N[u] = N[v]`) carrying identical color sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypePartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl TypePartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Number of types `t`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `|V_i ∩ X|` for every type.
    pub fn signature<'a, I>(&self, set: I) -> Vec<usize>
    where
        I: IntoIterator<Item = &'a usize>,
    {
        let mut sig = vec![0; self.classes.len()];
        for &v in set {
            sig[self.class_of[v]] += 1;
        }
        sig
    }
}

/// `N(u) \ {v} = N(v) \ {u}`, which covers both the open and the closed case.
pub(crate) fn are_twins(graph: &ColoredGraph, u: usize, v: usize) -> bool {
    if graph.degree(u) != graph.degree(v) {
        return false;
    }
    let mut a = graph.adjacency(u).clone();
    let mut b = graph.adjacency(v).clone();
    a.set(v, false);
    b.set(u, false);
    a == b
}

/// Coarsest twin-and-color partition; classes ordered by smallest member.
pub fn type_partition(graph: &ColoredGraph) -> TypePartition {
    let n = graph.n();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; n];
    for v in 0..n {
        // the twin+color relation is an equivalence, so one representative suffices
        let found = classes
            .iter()
            .position(|c| graph.same_colors(c[0], v) && are_twins(graph, c[0], v));
        match found {
            Some(i) => {
                classes[i].push(v);
                class_of[v] = i;
            }
            None => {
                class_of[v] = classes.len();
                classes.push(vec![v]);
            }
        }
    }
    TypePartition { classes, class_of }
}

/// Number of twin classes, ignoring colors.
pub fn neighborhood_diversity(graph: &ColoredGraph) -> usize {
    let plain = ColoredGraph::from_edges(graph.n(), &graph.edges()).expect("copy of a valid graph");
    type_partition(&plain).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let k3 = ColoredGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(type_partition(&k3).len(), 1);
        let star = ColoredGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = type_partition(&star);
        assert_eq!(p.classes(), &[vec![0], vec![1, 2, 3]]);
        let p4 = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(type_partition(&p4).len(), 4);
    }

    #[test]
    fn colors_split_types() {
        let mut k3 = ColoredGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        k3.add_color("red", [1]).unwrap();
        assert_eq!(type_partition(&k3).classes(), &[vec![0, 2], vec![1]]);
        assert_eq!(neighborhood_diversity(&k3), 1);
    }
}
