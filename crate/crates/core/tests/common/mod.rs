#![allow(dead_code)]

use std::collections::BTreeSet;

use msor::formula::{parse_formula, Evaluator};
use msor::graph::{ColoredGraph, ReconfInstance, Rule, VertexSet};
use msor::FormulaAst;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const FORMULA_POOL: &[&str] = &[
    "free X; forall u forall v ((X(u) & X(v)) -> !E(u,v))",
    "free X; true",
    "free X; forall v (X(v) | exists u (X(u) & E(u,v)))",
    "free X; forall v (X(v) -> exists u (E(u,v) & !X(u)))",
    "free X; forall v ((X(v) & red(v)) -> forall u (X(u) -> (u = v | !E(u,v))))",
];

pub fn formula(i: usize) -> FormulaAst {
    parse_formula(FORMULA_POOL[i]).unwrap()
}

/// Random graph on `n` vertices with colors `red` and `blue`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> ColoredGraph {
    let mut g = ColoredGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    for name in ["red", "blue"] {
        let members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        g.add_color(name, members).unwrap();
    }
    g
}

/// Random graph made of a few structured blocks (cliques, independent
/// sets, joins) so that types are large.
pub fn random_blocky_graph(rng: &mut impl Rng, n: usize) -> ColoredGraph {
    let mut block = vec![0usize; n];
    let blocks = rng.gen_range(1..=3usize);
    for b in block.iter_mut() {
        *b = rng.gen_range(0..blocks);
    }
    let inner: Vec<bool> = (0..blocks).map(|_| rng.gen_bool(0.5)).collect();
    let mut cross = vec![vec![false; blocks]; blocks];
    for a in 0..blocks {
        for b in a + 1..blocks {
            let j = rng.gen_bool(0.5);
            cross[a][b] = j;
            cross[b][a] = j;
        }
    }
    let mut g = ColoredGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (block[u], block[v]);
            if (a == b && inner[a]) || (a != b && cross[a][b]) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    let red: Vec<usize> = (0..n).filter(|&v| block[v] == 0 && rng.gen_bool(0.5)).collect();
    g.add_color("red", red).unwrap();
    g.add_color("blue", Vec::<usize>::new()).unwrap();
    g
}

pub fn k_subsets(n: usize, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<VertexSet>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn feasible_sets(g: &ColoredGraph, phi: &FormulaAst, k: usize) -> Vec<VertexSet> {
    let eval = Evaluator::new(g, phi).unwrap();
    k_subsets(g.n(), k).into_iter().filter(|x| eval.eval(x).unwrap()).collect()
}

/// Picks two feasible size-k sets of `g`; `None` when there are none.
pub fn instance_on(
    rng: &mut impl Rng,
    g: ColoredGraph,
    phi: FormulaAst,
    k: usize,
    rule: Rule,
) -> Option<ReconfInstance> {
    let sets = feasible_sets(&g, &phi, k);
    let s = sets.choose(rng)?.clone();
    let t = sets.choose(rng)?.clone();
    Some(ReconfInstance::new(g, phi, s, t, rule).unwrap())
}

/// Random instance with `n ≤ 10`, `k ≤ 3` and a formula from the pool.
pub fn random_instance(rng: &mut impl Rng, rule: Rule) -> ReconfInstance {
    loop {
        let n = rng.gen_range(2..=10);
        let g = if rng.gen_bool(0.5) {
            let p = rng.gen_range(0.1..0.6);
            random_graph(rng, n, p)
        } else {
            random_blocky_graph(rng, n)
        };
        let k = rng.gen_range(1..=3.min(n));
        let phi = formula(rng.gen_range(0..FORMULA_POOL.len()));
        if let Some(inst) = instance_on(rng, g, phi, k, rule) {
            return inst;
        }
    }
}

pub fn set(items: &[usize]) -> VertexSet {
    items.iter().copied().collect::<BTreeSet<_>>()
}

/// Random rooted forest with at most `depth` levels together with a graph
/// whose edges all join ancestor–descendant pairs of the forest. With
/// `tree_only`, the graph is the forest itself.
pub fn random_low_td(
    rng: &mut impl Rng,
    n: usize,
    depth: usize,
    tree_only: bool,
) -> (ColoredGraph, msor::graph::TreedepthDecomposition) {
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut level = Vec::with_capacity(n);
    for v in 0..n {
        let candidates: Vec<usize> = (0..v).filter(|&u| level[u] < depth).collect();
        if candidates.is_empty() || rng.gen_bool(0.15) {
            parent.push(None);
            level.push(1);
        } else {
            let p = *candidates.choose(rng).unwrap();
            parent.push(Some(p));
            level.push(level[p] + 1);
        }
    }
    let mut g = ColoredGraph::new(n);
    for v in 0..n {
        let mut cur = parent[v];
        let mut first = true;
        while let Some(a) = cur {
            if first || (!tree_only && rng.gen_bool(0.3)) {
                g.add_edge(a, v).unwrap();
            }
            first = false;
            cur = parent[a];
        }
    }
    let red: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
    g.add_color("red", red).unwrap();
    g.add_color("blue", Vec::<usize>::new()).unwrap();
    let td = msor::graph::TreedepthDecomposition::from_parents(parent).unwrap();
    (g, td)
}

/// Like [`random_low_td`] but with many identical leaves hanging off a few
/// hubs, so that kernelization has something to delete.
pub fn random_bushy_forest(rng: &mut impl Rng, n: usize) -> (ColoredGraph, msor::graph::TreedepthDecomposition) {
    let hubs = rng.gen_range(1..=3usize).min(n);
    let mut parent: Vec<Option<usize>> = vec![None; hubs];
    for v in hubs..n {
        parent.push(Some(if v < 2 * hubs || rng.gen_bool(0.8) { rng.gen_range(0..hubs) } else { rng.gen_range(hubs..v) }));
    }
    let mut g = ColoredGraph::new(n);
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            g.add_edge(*p, v).unwrap();
        }
    }
    g.add_color("red", Vec::<usize>::new()).unwrap();
    g.add_color("blue", Vec::<usize>::new()).unwrap();
    let td = msor::graph::TreedepthDecomposition::from_parents(parent).unwrap();
    (g, td)
}

/// Random instance on a low-treedepth graph (`n ≤ 25`, `k ≤ 3`) carrying
/// its decomposition.
pub fn random_td_instance(rng: &mut impl Rng, rule: Rule) -> ReconfInstance {
    loop {
        let n = rng.gen_range(4..=25);
        let (g, td) = match rng.gen_range(0..3) {
            0 => random_low_td(rng, n, 3, true),
            1 => random_low_td(rng, n, 3, false),
            _ => random_bushy_forest(rng, n),
        };
        let k = rng.gen_range(1..=3);
        let phi = formula(rng.gen_range(0..FORMULA_POOL.len()));
        if let Some(inst) = instance_on(rng, g, phi, k, rule) {
            return inst.with_decomposition(td).unwrap();
        }
    }
}
