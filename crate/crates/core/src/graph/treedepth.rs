use std::collections::HashMap;

use super::ColoredGraph;
use crate::error::{Error, Result};

/// A rooted forest on the vertex set in which every edge of the graph joins
/// an ancestor and a descendant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreedepthDecomposition {
    parent: Vec<Option<usize>>,
    depth: usize,
    optimal: bool,
}

impl TreedepthDecomposition {
    /// Checks that the parent map is a forest and records its depth.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let mut level = vec![0usize; n];
        for start in 0..n {
            if level[start] != 0 {
                continue;
            }
            let mut path = vec![start];
            let mut cur = start;
            let base = loop {
                match parent[cur] {
                    None => break 0,
                    Some(p) if p >= n => {
                        return Err(Error::InvalidDecomposition(format!("parent {p} out of range")))
                    }
                    Some(p) => {
                        if level[p] != 0 {
                            break level[p];
                        }
                        if path.contains(&p) {
                            return Err(Error::InvalidDecomposition(format!(
                                "cycle through vertex {p}"
                            )));
                        }
                        path.push(p);
                        cur = p;
                    }
                }
            };
            for (i, &v) in path.iter().rev().enumerate() {
                level[v] = base + i + 1;
            }
        }
        let depth = level.iter().copied().max().unwrap_or(0);
        Ok(TreedepthDecomposition {
            parent,
            depth,
            optimal: false,
        })
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Maximum number of vertices on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Whether this decomposition is known to have minimum depth.
    pub fn is_optimal(&self) -> bool {
        self.optimal
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn is_ancestor(&self, anc: usize, mut v: usize) -> bool {
        while let Some(p) = self.parent[v] {
            if p == anc {
                return true;
            }
            v = p;
        }
        false
    }
}

/// Ancestor–descendant test for every edge.
pub fn validate_td(graph: &ColoredGraph, td: &TreedepthDecomposition) -> bool {
    if td.parent.len() != graph.n() {
        return false;
    }
    graph
        .edges()
        .into_iter()
        .all(|(u, v)| td.is_ancestor(u, v) || td.is_ancestor(v, u))
}

const EXACT_COMPONENT_LIMIT: usize = 20;
const MEMO_LIMIT: usize = 4_000_000;

struct ExactSearch<'a> {
    /// adjacency restricted to the component, as bitmasks over local ids
    adj: &'a [u32],
    memo: HashMap<u32, (u8, u8)>,
}

impl ExactSearch<'_> {
    fn components(&self, mask: u32) -> Vec<u32> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & mask & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// Minimum depth of a connected vertex mask; `None` once the memo limit hits.
    fn connected(&mut self, mask: u32) -> Option<u8> {
        if mask.count_ones() == 1 {
            return Some(1);
        }
        if let Some(&(d, _)) = self.memo.get(&mask) {
            return Some(d);
        }
        if self.memo.len() >= MEMO_LIMIT {
            return None;
        }
        let mut best = u8::MAX;
        let mut best_root = 0u8;
        // high-degree roots first tighten the bound early
        let mut order: Vec<usize> = (0..32).filter(|&v| mask >> v & 1 == 1).collect();
        order.sort_by_key(|&v| std::cmp::Reverse((self.adj[v] & mask).count_ones()));
        for v in order {
            let rest = mask & !(1 << v);
            let mut worst = 0u8;
            for comp in self.components(rest) {
                let d = self.connected(comp)?;
                worst = worst.max(d);
                if worst + 1 >= best {
                    break;
                }
            }
            if worst + 1 < best {
                best = worst + 1;
                best_root = v as u8;
            }
            if best as u32 == 2 {
                break;
            }
        }
        self.memo.insert(mask, (best, best_root));
        Some(best)
    }

    fn build(&self, mask: u32, parent: Option<usize>, local: &[usize], out: &mut [Option<usize>]) {
        if mask.count_ones() == 1 {
            out[local[mask.trailing_zeros() as usize]] = parent;
            return;
        }
        let (_, root) = self.memo[&mask];
        let root_global = local[root as usize];
        out[root_global] = parent;
        for comp in self.components(mask & !(1 << root)) {
            self.build(comp, Some(root_global), local, out);
        }
    }
}

fn dfs_forest(graph: &ColoredGraph, comp: &[usize], out: &mut [Option<usize>]) {
    let mut seen = vec![false; graph.n()];
    let root = comp[0];
    seen[root] = true;
    out[root] = None;
    let mut stack = vec![(root, 0usize)];
    while let Some(&mut (u, ref mut idx)) = stack.last_mut() {
        let nbrs = graph.neighbors(u);
        if *idx < nbrs.len() {
            let w = nbrs[*idx];
            *idx += 1;
            if !seen[w] {
                seen[w] = true;
                out[w] = Some(u);
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
}

/// Minimum-depth decomposition for components of at most 20 vertices;
/// larger components (or exhausted search budgets) get a DFS forest and the
/// result is flagged non-optimal.
pub fn compute_td(graph: &ColoredGraph) -> TreedepthDecomposition {
    let n = graph.n();
    let mut parent = vec![None; n];
    let mut optimal = true;
    for comp in graph.connected_components() {
        if comp.len() > EXACT_COMPONENT_LIMIT {
            dfs_forest(graph, &comp, &mut parent);
            optimal = false;
            continue;
        }
        let mut local_of = HashMap::new();
        for (i, &v) in comp.iter().enumerate() {
            local_of.insert(v, i);
        }
        let adj: Vec<u32> = comp
            .iter()
            .map(|&v| {
                graph
                    .neighbors(v)
                    .iter()
                    .fold(0u32, |m, w| m | 1 << local_of[w])
            })
            .collect();
        let mut search = ExactSearch {
            adj: &adj,
            memo: HashMap::new(),
        };
        let full = if comp.len() == 32 { u32::MAX } else { (1u32 << comp.len()) - 1 };
        match search.connected(full) {
            Some(_) => search.build(full, None, &comp, &mut parent),
            None => {
                dfs_forest(graph, &comp, &mut parent);
                optimal = false;
            }
        }
    }
    let mut td = TreedepthDecomposition::from_parents(parent).expect("constructed forest");
    td.optimal = optimal;
    td
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_exact_values() {
        let p4 = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let td = compute_td(&p4);
        assert_eq!(td.depth(), 3);
        assert!(validate_td(&p4, &td));
        assert!(td.is_optimal());

        let empty = ColoredGraph::new(5);
        assert_eq!(compute_td(&empty).depth(), 1);

        let star_edges: Vec<_> = (1..10).map(|v| (0, v)).collect();
        let star = ColoredGraph::from_edges(10, &star_edges).unwrap();
        let td = compute_td(&star);
        assert_eq!(td.depth(), 2);
        assert_eq!(td.roots(), vec![0]);
    }

    #[test]
    fn validation_rejects_bad_forest() {
        let p3 = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        // 0 and 2 siblings under 1 is valid; 1 and 2 siblings under 0 is not
        let good = TreedepthDecomposition::from_parents(vec![Some(1), None, Some(1)]).unwrap();
        let bad = TreedepthDecomposition::from_parents(vec![None, Some(0), Some(0)]).unwrap();
        assert!(validate_td(&p3, &good));
        assert!(!validate_td(&p3, &bad));
        assert!(TreedepthDecomposition::from_parents(vec![Some(1), Some(0)]).is_err());
    }

    #[test]
    fn large_component_falls_back() {
        let edges: Vec<_> = (0..29).map(|v| (v, v + 1)).collect();
        let path = ColoredGraph::from_edges(30, &edges).unwrap();
        let td = compute_td(&path);
        assert!(!td.is_optimal());
        assert!(validate_td(&path, &td));
    }
}
