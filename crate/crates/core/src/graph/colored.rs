use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Vertex sets are kept as ordered id sets throughout the public API.
pub type VertexSet = BTreeSet<usize>;

/// Reserved color realizing the source set.
pub const SRC_COLOR: &str = "_src";
/// Reserved color realizing the target set.
pub const DST_COLOR: &str = "_dst";

/// A simple undirected graph on vertices `0..n` with named vertex colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Vec<FixedBitSet>,
    nbrs: Vec<Vec<usize>>,
    colors: BTreeMap<String, FixedBitSet>,
    edge_count: usize,
}

pub fn valid_color_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            nbrs: vec![Vec::new(); n],
            colors: BTreeMap::new(),
            edge_count: 0,
        }
    }

    /// Builds an uncolored graph from an edge list, rejecting loops and repeats.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ColoredGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge {u}-{v} out of range (n = {n})")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if self.adj[u].contains(v) {
            return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        let pos = self.nbrs[u].binary_search(&v).unwrap_err();
        self.nbrs[u].insert(pos, v);
        let pos = self.nbrs[v].binary_search(&u).unwrap_err();
        self.nbrs[v].insert(pos, u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn add_color<I>(&mut self, name: &str, members: I) -> Result<()>
    where
        I: IntoIterator<Item = usize>,
    {
        if !valid_color_name(name) || name == "E" || name == "I" {
            return Err(Error::InvalidGraph(format!("invalid color name `{name}`")));
        }
        if self.colors.contains_key(name) {
            return Err(Error::InvalidGraph(format!("duplicate color `{name}`")));
        }
        let n = self.n();
        let mut bits = FixedBitSet::with_capacity(n);
        for v in members {
            if v >= n {
                return Err(Error::InvalidGraph(format!(
                    "color `{name}` names vertex {v} out of range (n = {n})"
                )));
            }
            bits.insert(v);
        }
        self.colors.insert(name.to_string(), bits);
        Ok(())
    }

    /// Installs `S` and `S'` as the reserved colors `_src` and `_dst`.
    pub fn add_solution_colors(&self, source: &VertexSet, target: &VertexSet) -> Result<Self> {
        for name in [SRC_COLOR, DST_COLOR] {
            if self.colors.contains_key(name) {
                return Err(Error::ReservedColor(name.to_string()));
            }
        }
        let mut g = self.clone();
        g.add_color(SRC_COLOR, source.iter().copied())?;
        g.add_color(DST_COLOR, target.iter().copied())?;
        Ok(g)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn adjacency(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order. Edge ids used by
    /// MSO₂ evaluation are positions in this list.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() {
            for &v in &self.nbrs[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn colors(&self) -> impl Iterator<Item = (&str, &FixedBitSet)> {
        self.colors.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, name: &str) -> Option<&FixedBitSet> {
        self.colors.get(name)
    }

    pub fn has_color(&self, name: &str) -> bool {
        self.colors.contains_key(name)
    }

    /// Names of the colors containing `v`, in name order.
    pub fn colors_of(&self, v: usize) -> Vec<&str> {
        self.colors
            .iter()
            .filter(|(_, bits)| bits.contains(v))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub(crate) fn same_colors(&self, u: usize, v: usize) -> bool {
        self.colors.values().all(|bits| bits.contains(u) == bits.contains(v))
    }

    /// Subgraph induced by `keep` (any order; duplicates ignored). Returns the
    /// graph and, for each new vertex id, the original id.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (ColoredGraph, Vec<usize>) {
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = ColoredGraph::new(kept.len());
        for (i, &v) in kept.iter().enumerate() {
            for &w in &self.nbrs[v] {
                let j = new_id[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j).expect("induced edge is valid");
                }
            }
        }
        for (name, bits) in &self.colors {
            let members = kept
                .iter()
                .enumerate()
                .filter(|(_, &v)| bits.contains(v))
                .map(|(i, _)| i);
            g.add_color(name, members).expect("color copy is valid");
        }
        (g, kept)
    }

    /// Removes `drop` and returns the remaining graph with the old-id map.
    pub fn without_vertices(&self, drop: &VertexSet) -> (ColoredGraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n()).filter(|v| !drop.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Edge subdivision: every edge `{u,v}` becomes a path `u - w - v` with a
    /// new vertex `w` (ids `n..n+m` in [`ColoredGraph::edges`] order) put into
    /// color `sub_color`.
    pub fn subdivide(&self, sub_color: &str) -> Result<ColoredGraph> {
        if self.colors.contains_key(sub_color) {
            return Err(Error::ReservedColor(sub_color.to_string()));
        }
        let edges = self.edges();
        let n = self.n();
        let mut g = ColoredGraph::new(n + edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            g.add_edge(u, n + i)?;
            g.add_edge(v, n + i)?;
        }
        for (name, bits) in &self.colors {
            g.add_color(name, bits.ones())?;
        }
        g.add_color(sub_color, n..n + edges.len())?;
        Ok(g)
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.nbrs[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = ColoredGraph::new(3);
        assert!(g.add_edge(0, 0).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
    }

    #[test]
    fn solution_colors_add_exactly_two() {
        let mut g = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        g.add_color("red", [2]).unwrap();
        let s: VertexSet = [0].into();
        let t: VertexSet = [1].into();
        let h = g.add_solution_colors(&s, &t).unwrap();
        assert_eq!(h.color_count(), g.color_count() + 2);
        assert_eq!(h.color(SRC_COLOR).unwrap().ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(h.color(DST_COLOR).unwrap().ones().collect::<Vec<_>>(), vec![1]);
        assert!(matches!(
            h.add_solution_colors(&s, &t),
            Err(Error::ReservedColor(_))
        ));
        // identical sets give two identical colors
        let h = g.add_solution_colors(&s, &s).unwrap();
        assert_eq!(h.color(SRC_COLOR), h.color(DST_COLOR));
    }

    #[test]
    fn subdivision_shape() {
        let g = ColoredGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = g.subdivide("_sub").unwrap();
        assert_eq!(h.n(), 6);
        assert_eq!(h.m(), 6);
        assert!(h.has_edge(0, 3) && h.has_edge(1, 3));
        assert_eq!(h.color("_sub").unwrap().count_ones(..), 3);
    }
}
