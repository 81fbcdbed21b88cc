use super::xcr::XcrInstance;
use crate::error::Result;
use crate::formula::builtin_formula;
use crate::graph::{ColoredGraph, ReconfInstance, Rule, TreedepthDecomposition, VertexSet};
use crate::oracle::{Feasibility, TokenSet};

/// Number of isolated vertices holding the marking tokens.
pub const ISOLATED: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarLayout {
    pub element: u32,
    pub center: usize,
    pub leaves: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLayout {
    pub root: usize,
    pub antennae: [usize; 2],
    pub stars: Vec<StarLayout>,
}

impl TreeLayout {
    pub fn star_leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.stars.iter().flat_map(|s| s.leaves.iter().copied())
    }

    pub fn vertex_count(&self) -> usize {
        3 + self.stars.iter().map(|s| 1 + s.leaves.len()).sum::<usize>()
    }
}

/// Vertex ids of the forest built from an exact cover instance: one tree per
/// family set in input order, then the isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestLayout {
    pub trees: Vec<TreeLayout>,
    pub isolated: Vec<usize>,
    pub n: usize,
}

impl ForestLayout {
    pub fn new(xcr: &XcrInstance) -> Self {
        let mut next = 0usize;
        let mut take = || {
            next += 1;
            next - 1
        };
        let mut trees = Vec::new();
        for set in &xcr.family {
            let root = take();
            let antennae = [take(), take()];
            let stars = set
                .iter()
                .map(|&element| {
                    let center = take();
                    let leaves = (0..element).map(|_| take()).collect();
                    StarLayout { element, center, leaves }
                })
                .collect();
            trees.push(TreeLayout { root, antennae, stars });
        }
        let isolated = (0..ISOLATED).map(|_| take()).collect();
        ForestLayout { trees, isolated, n: next }
    }

    pub fn graph(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.n);
        for t in &self.trees {
            for &a in &t.antennae {
                g.add_edge(t.root, a).expect("valid edge");
            }
            for s in &t.stars {
                g.add_edge(t.root, s.center).expect("valid edge");
                for &l in &s.leaves {
                    g.add_edge(s.center, l).expect("valid edge");
                }
            }
        }
        g
    }

    /// Roots on top, antennae and star centers below them, star leaves at the
    /// bottom; isolated vertices are roots of their own.
    pub fn decomposition(&self) -> TreedepthDecomposition {
        let mut parent = vec![None; self.n];
        for t in &self.trees {
            for &a in &t.antennae {
                parent[a] = Some(t.root);
            }
            for s in &t.stars {
                parent[s.center] = Some(t.root);
                for &l in &s.leaves {
                    parent[l] = Some(s.center);
                }
            }
        }
        TreedepthDecomposition::from_parents(parent).expect("forest parents are acyclic")
    }

    /// The isolated vertices plus every star leaf of the trees in `cover`.
    pub fn cover_set(&self, cover: &[usize]) -> VertexSet {
        let mut set: VertexSet = self.isolated.iter().copied().collect();
        for &i in cover {
            set.extend(self.trees[i].star_leaves());
        }
        set
    }
}

/// The reconfiguration instance of the forest: token jumping under the
/// built-in hardness formula, from the cover set of the start cover to that
/// of the goal cover.
pub fn build_instance(xcr: &XcrInstance) -> Result<(ReconfInstance, ForestLayout)> {
    let layout = ForestLayout::new(xcr);
    let phi = builtin_formula("hardness-phi")?;
    let source = layout.cover_set(&xcr.start);
    let target = layout.cover_set(&xcr.goal);
    let inst = ReconfInstance::new_unchecked(layout.graph(), phi, source, target, Rule::Jump)?
        .with_decomposition(layout.decomposition())?;
    let checker = DirectChecker::new(&layout);
    inst.validate_with(|x| Ok(checker.check(|v| x.contains(&v))))?;
    Ok((inst, layout))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fill {
    Full,
    Empty,
    Mixed,
}

impl Fill {
    fn of(mut members: impl Iterator<Item = bool>) -> Fill {
        let Some(first) = members.next() else {
            return Fill::Full;
        };
        if members.all(|m| m == first) {
            if first {
                Fill::Full
            } else {
                Fill::Empty
            }
        } else {
            Fill::Mixed
        }
    }

    fn clean(self) -> bool {
        self != Fill::Mixed
    }
}

/// Decides the hardness formula on the built forest from the layout alone.
#[derive(Clone, Debug)]
pub struct DirectChecker {
    layout: ForestLayout,
}

impl DirectChecker {
    pub fn new(layout: &ForestLayout) -> Self {
        DirectChecker { layout: layout.clone() }
    }

    /// `X` is clean or almost clean, with membership given by `contains`.
    pub fn check(&self, contains: impl Fn(usize) -> bool) -> bool {
        let l = &self.layout;
        let mut non_star = l.isolated.iter().filter(|&&v| contains(v)).count();
        for t in &l.trees {
            non_star += usize::from(contains(t.root));
            non_star += t.antennae.iter().filter(|&&a| contains(a)).count();
            non_star += t.stars.iter().filter(|s| contains(s.center)).count();
        }
        if non_star != ISOLATED {
            return false;
        }
        let star_fill: Vec<Vec<Fill>> = l
            .trees
            .iter()
            .map(|t| t.stars.iter().map(|s| Fill::of(s.leaves.iter().map(|&v| contains(v)))).collect())
            .collect();
        let tree_clean: Vec<bool> =
            l.trees.iter().map(|t| Fill::of(t.star_leaves().map(|v| contains(v))).clean()).collect();
        if tree_clean.iter().all(|&c| c) {
            return true;
        }
        let marked: Vec<usize> =
            (0..l.trees.len()).filter(|&i| l.trees[i].antennae.iter().all(|&a| contains(a))).collect();
        let unclean: Vec<usize> = (0..l.trees.len()).filter(|&i| !tree_clean[i]).collect();
        let unclean_stars: Vec<(usize, usize)> = star_fill
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.iter().enumerate().filter(|(_, f)| !f.clean()).map(move |(j, _)| (i, j)))
            .collect();
        if unclean.len() > 2 || marked.len() < 3 {
            return false;
        }
        for &r1 in unclean.iter().filter(|r| marked.contains(r)) {
            for &r2 in marked.iter().filter(|&&r| r != r1) {
                if unclean.iter().any(|&r| r != r1 && r != r2) {
                    continue;
                }
                if !marked.iter().any(|&r| r != r1 && r != r2) {
                    continue;
                }
                let centers = |r: usize| -> Vec<usize> {
                    (0..l.trees[r].stars.len()).filter(|&j| contains(l.trees[r].stars[j].center)).collect()
                };
                for c1 in centers(r1) {
                    for c2 in centers(r2) {
                        let covered = unclean_stars.iter().all(|&s| s == (r1, c1) || s == (r2, c2));
                        if covered && star_fill[r1][c1].clean() == star_fill[r2][c2].clean() {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

impl Feasibility for DirectChecker {
    fn is_feasible(&self, set: &TokenSet) -> Result<bool> {
        Ok(self.check(|v| set.contains(v)))
    }
}

pub fn direct_feasible(layout: &ForestLayout, x: &VertexSet) -> bool {
    DirectChecker::new(layout).check(|v| x.contains(&v))
}
