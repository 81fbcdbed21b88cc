use std::collections::BTreeMap;

use serde::Serialize;

use super::budget::KernelBudget;
use crate::error::{Error, Result};
use crate::graph::{
    is_cluster_deletion_set, validate_td, ColoredGraph, DecompositionView, ReconfInstance, TreedepthDecomposition,
    VertexSet,
};

/// One application of the deletion rule: a class of more than `threshold`
/// pairwise disjoint, interchangeable vertex sets of size `p`, all outside
/// `S ∪ S'`, loses the set `removed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelStep {
    /// Decomposition node whose children formed the class; `None` for the
    /// virtual root above a disconnected forest, and for clique steps.
    pub node: Option<usize>,
    pub code: String,
    pub p: usize,
    pub class_size: usize,
    pub threshold: usize,
    /// Ids in the input instance.
    pub removed: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassStat {
    pub node: Option<usize>,
    pub p: usize,
    pub size: usize,
    pub kept: usize,
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub steps: Vec<KernelStep>,
    pub classes: Vec<ClassStat>,
    pub budget: Option<KernelBudget>,
    /// For each vertex of the reduced instance, its id in the input.
    pub kept: Vec<usize>,
}

impl KernelReport {
    pub fn deleted(&self) -> VertexSet {
        self.steps.iter().flat_map(|s| s.removed.iter().copied()).collect()
    }
}

/// `k + 2^e`, saturating.
fn threshold(k: usize, e: usize) -> usize {
    if e >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        k.saturating_add(1usize << e)
    }
}

/// Restriction of a decomposition to the vertices in `kept` (old ids, in new
/// id order): each vertex hangs below its nearest kept ancestor.
pub fn restrict_decomposition(td: &TreedepthDecomposition, kept: &[usize]) -> Result<TreedepthDecomposition> {
    let mut new_id = vec![None; td.parents().len()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = Some(i);
    }
    let parents = kept
        .iter()
        .map(|&v| {
            let mut cur = td.parent(v);
            while let Some(p) = cur {
                if let Some(id) = new_id[p] {
                    return Some(id);
                }
                cur = td.parent(p);
            }
            None
        })
        .collect();
    TreedepthDecomposition::from_parents(parents)
}

/// Removes `drop` from the instance, carrying the source, target,
/// decomposition and cluster deletion set over to the new ids.
pub fn delete_from_instance(inst: &ReconfInstance, drop: &VertexSet) -> Result<(ReconfInstance, Vec<usize>)> {
    if drop.iter().any(|v| inst.source.contains(v) || inst.target.contains(v)) {
        return Err(Error::Precondition("cannot delete a vertex of S or S'".into()));
    }
    let (graph, kept) = inst.graph.without_vertices(drop);
    let mut new_id = vec![usize::MAX; inst.graph.n()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let map = |x: &VertexSet| x.iter().map(|&v| new_id[v]).collect::<VertexSet>();
    let mut out = ReconfInstance::new_unchecked(graph, inst.formula.clone(), map(&inst.source), map(&inst.target), inst.rule)?;
    if let Some(td) = &inst.decomposition {
        out.decomposition = Some(restrict_decomposition(td, &kept)?);
    }
    if let Some(d) = &inst.cluster_deletion {
        out.cluster_deletion = Some(d.iter().filter(|v| !drop.contains(v)).map(|&v| new_id[v]).collect());
    }
    Ok((out, kept))
}

struct Kernelizer<'a> {
    graph: &'a ColoredGraph,
    view: DecompositionView,
    alive: Vec<bool>,
    solution: Vec<bool>,
}

impl Kernelizer<'_> {
    fn code(&self, v: usize) -> String {
        let children = self.view.children[v]
            .iter()
            .filter(|&&c| self.alive[c])
            .map(|&c| self.code(c))
            .collect();
        crate::graph::node_code(self.graph, &self.view, v, children)
    }

    fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.alive[u] {
                out.push(u);
                stack.extend(self.view.children[u].iter().copied());
            }
        }
        out.sort_unstable();
        out
    }
}

/// Bottom-up kernelization over the decomposition: at every node (and at a
/// virtual root joining the trees), child subtrees that avoid `S ∪ S'` are
/// grouped by canonical code, and while a group of size-`p` subtrees has
/// more than `k + 2^{p·q}` members, the one with the largest root id is
/// deleted. Nodes are handled by increasing height, groups by code.
pub fn kernelize(inst: &ReconfInstance, td: &TreedepthDecomposition) -> Result<(ReconfInstance, KernelReport)> {
    if inst.formula.is_mso2() {
        return Err(Error::NotMso1("kernelization needs an MSO1 formula; translate first".into()));
    }
    if td.parents().len() != inst.graph.n() || !validate_td(&inst.graph, td) {
        return Err(Error::InvalidDecomposition("decomposition does not fit the graph".into()));
    }
    let n = inst.graph.n();
    let profile = inst.formula.profile();
    let (q, k) = (profile.q, inst.k());
    let mut solution = vec![false; n];
    for &v in inst.source.iter().chain(inst.target.iter()) {
        solution[v] = true;
    }
    let view = DecompositionView::new(td);
    let kz = Kernelizer { graph: &inst.graph, view, alive: vec![true; n], solution };
    let mut kz = kz;

    let heights = kz.view.heights();
    let roots = td.roots();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (heights[v], v));
    let mut nodes: Vec<Option<usize>> = order.into_iter().map(Some).collect();
    nodes.push(None);

    let mut steps = Vec::new();
    let mut classes = Vec::new();
    for node in nodes {
        if let Some(v) = node {
            if !kz.alive[v] || kz.view.children[v].is_empty() {
                continue;
            }
        }
        let children: Vec<usize> = match node {
            Some(v) => kz.view.children[v].clone(),
            None => roots.clone(),
        };
        let mut groups: BTreeMap<String, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
        for c in children.into_iter().filter(|&c| kz.alive[c]) {
            let members = kz.subtree(c);
            if members.iter().any(|&u| kz.solution[u]) {
                continue;
            }
            groups.entry(kz.code(c)).or_default().push((c, members));
        }
        for (code, mut group) in groups {
            group.sort_by_key(|(c, _)| *c);
            let p = group[0].1.len();
            let limit = threshold(k, p.saturating_mul(q));
            let size = group.len();
            while group.len() > limit {
                let (_, members) = group.pop().unwrap();
                for &u in &members {
                    kz.alive[u] = false;
                }
                steps.push(KernelStep {
                    node,
                    code: code.clone(),
                    p,
                    class_size: group.len() + 1,
                    threshold: limit,
                    removed: members,
                });
            }
            classes.push(ClassStat { node, p, size, kept: group.len() });
        }
    }

    let d = td.depth() + usize::from(roots.len() > 1);
    let phi_len = profile.formula_length.max(inst.graph.color_count());
    let budget = KernelBudget::new(d, k, q, phi_len);
    let drop: VertexSet = (0..n).filter(|&v| !kz.alive[v]).collect();
    let mut with_td = inst.clone();
    with_td.decomposition = Some(td.clone());
    let (reduced, kept) = delete_from_instance(&with_td, &drop)?;
    Ok((reduced, KernelReport { steps, classes, budget: Some(budget), kept }))
}

/// Shrinks the cliques of `G − D`: inside each clique, vertices outside
/// `S ∪ S'` are grouped by color set and neighborhood in `D`, and while a
/// group has more than `k + 2^q` members its largest vertex is deleted.
pub fn reduce_cliques(inst: &ReconfInstance, d: &VertexSet) -> Result<(ReconfInstance, KernelReport)> {
    if inst.formula.is_mso2() {
        return Err(Error::NotMso1("clique reduction needs an MSO1 formula".into()));
    }
    if !is_cluster_deletion_set(&inst.graph, d) {
        return Err(Error::Precondition("not a cluster deletion set".into()));
    }
    let g = &inst.graph;
    let q = inst.formula.profile().q;
    let k = inst.k();
    let limit = threshold(k, q);
    let rest: Vec<usize> = (0..g.n()).filter(|v| !d.contains(v)).collect();
    let (sub, ids) = g.induced_subgraph(&rest);
    let mut steps = Vec::new();
    let mut classes = Vec::new();
    let mut components = sub.connected_components();
    for comp in &mut components {
        for v in comp.iter_mut() {
            *v = ids[*v];
        }
        comp.sort_unstable();
    }
    components.sort();
    for comp in components {
        let mut groups: BTreeMap<(Vec<&str>, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for &v in &comp {
            if inst.source.contains(&v) || inst.target.contains(&v) {
                continue;
            }
            let nd: Vec<usize> = d.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            groups.entry((g.colors_of(v), nd)).or_default().push(v);
        }
        for ((colors, nd), mut group) in groups {
            let size = group.len();
            let code = format!("{}|{:?}", colors.join(","), nd);
            while group.len() > limit {
                let v = group.pop().unwrap();
                steps.push(KernelStep {
                    node: None,
                    code: code.clone(),
                    p: 1,
                    class_size: group.len() + 1,
                    threshold: limit,
                    removed: vec![v],
                });
            }
            classes.push(ClassStat { node: None, p: 1, size, kept: group.len() });
        }
    }
    let drop: VertexSet = steps.iter().map(|s| s.removed[0]).collect();
    let mut with_d = inst.clone();
    with_d.cluster_deletion = Some(d.clone());
    let (reduced, kept) = delete_from_instance(&with_d, &drop)?;
    Ok((reduced, KernelReport { steps, classes, budget: None, kept }))
}
