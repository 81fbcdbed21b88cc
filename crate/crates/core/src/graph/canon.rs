//! Canonical codes for subtrees of a treedepth decomposition.
//!
//! The code of a node records, for every vertex of its subtree, the color set
//! and the adjacency to each ancestor position on the root path, and combines
//! the children's codes as a sorted multiset. Two sibling subtrees with equal
//! codes can therefore be exchanged by a color-preserving automorphism that
//! fixes every other vertex: the code fixes a depth-preserving bijection
//! between the subtrees, and all edges leaving a subtree go to the shared
//! ancestors.

use std::fmt::Write as _;

use super::{ColoredGraph, TreedepthDecomposition};

/// Children lists and levels for a decomposition forest.
#[derive(Clone, Debug)]
pub struct DecompositionView {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// 1 for roots.
    pub level: Vec<usize>,
}

impl DecompositionView {
    pub fn new(td: &TreedepthDecomposition) -> Self {
        let n = td.parents().len();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = td.parent(v) {
                children[p].push(v);
            }
        }
        let mut level = vec![0; n];
        let mut stack: Vec<usize> = td.roots();
        for &r in &stack {
            level[r] = 1;
        }
        while let Some(u) = stack.pop() {
            for &c in &children[u] {
                level[c] = level[u] + 1;
                stack.push(c);
            }
        }
        DecompositionView {
            parent: td.parents().to_vec(),
            children,
            level,
        }
    }

    /// Ancestors of `v` from the root down to its parent.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Vertices of the subtree rooted at `v`, preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Height of every node (leaves have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let n = self.parent.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.level[v]));
        let mut height = vec![0; n];
        for v in order {
            if let Some(p) = self.parent[v] {
                height[p] = height[p].max(height[v] + 1);
            }
        }
        height
    }
}

/// Code of a single vertex given the codes of its children.
pub(crate) fn node_code(
    graph: &ColoredGraph,
    view: &DecompositionView,
    v: usize,
    mut child_codes: Vec<String>,
) -> String {
    let mut code = String::from("(");
    code.push_str(&graph.colors_of(v).join(","));
    code.push('|');
    for a in view.ancestors(v) {
        code.push(if graph.has_edge(a, v) { '1' } else { '0' });
    }
    code.push('|');
    child_codes.sort();
    for c in &child_codes {
        code.push_str(c);
    }
    let _ = write!(code, ")");
    code
}

/// Canonical code of the decomposition subtree rooted at `node`.
pub fn subtree_canonical_code(
    graph: &ColoredGraph,
    td: &TreedepthDecomposition,
    node: usize,
) -> String {
    let view = DecompositionView::new(td);
    code_rec(graph, &view, node)
}

fn code_rec(graph: &ColoredGraph, view: &DecompositionView, v: usize) -> String {
    let child_codes = view.children[v]
        .iter()
        .map(|&c| code_rec(graph, view, c))
        .collect();
    node_code(graph, view, v, child_codes)
}
