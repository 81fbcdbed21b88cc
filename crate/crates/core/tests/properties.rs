mod common;

use common::*;
use msor::circulation::{min_cost_circulation, FlowNetwork};
use msor::formula::{parse_formula, quantifier_profile};
use msor::graph::{
    cluster_deletion_set, compute_td, is_cluster_deletion_set, neighborhood_diversity, parse_graph, subtree_canonical_code,
    type_partition, validate_td, write_graph, ColoredGraph, Rule, TreedepthDecomposition,
};
use msor::ndsolver::{lampis_reduce, shrink_round};
use msor::oracle::{solve_instance, symmetry_classes, Oracle, DEFAULT_BUDGET};
use msor::reductions::{build_instance, random_xcr, XcrInstance};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn graph_from_seed(seed: u64) -> ColoredGraph {
    let mut r = rng(seed);
    let n = r.gen_range(1..=9);
    if r.gen_bool(0.5) {
        let p = r.gen_range(0.0..0.8);
        random_graph(&mut r, n, p)
    } else {
        random_blocky_graph(&mut r, n)
    }
}

fn is_vertex_cover(g: &ColoredGraph, mask: u32) -> bool {
    g.edges().iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
}

fn brute_vc(g: &ColoredGraph) -> usize {
    (0u32..1 << g.n()).filter(|&m| is_vertex_cover(g, m)).map(u32::count_ones).min().unwrap() as usize
}

/// Treedepth by the recursion td(G) = 1 + min_v td(G - v) on connected graphs.
fn brute_td(g: &ColoredGraph, alive: u32) -> usize {
    if alive == 0 {
        return 0;
    }
    let mut comps = Vec::new();
    let mut left = alive;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u32 << start;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if alive >> w & 1 == 1 && comp >> w & 1 == 0 {
                    comp |= 1 << w;
                    stack.push(w);
                }
            }
        }
        left &= !comp;
        comps.push(comp);
    }
    if comps.len() > 1 {
        return comps.iter().map(|&c| brute_td(g, c)).max().unwrap();
    }
    (0..g.n()).filter(|&v| alive >> v & 1 == 1).map(|v| 1 + brute_td(g, alive & !(1 << v))).min().unwrap()
}

fn brute_cluster_deletion(g: &ColoredGraph) -> usize {
    (0u32..1 << g.n())
        .filter(|&m| is_cluster_deletion_set(g, &(0..g.n()).filter(|&v| m >> v & 1 == 1).collect()))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trips(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let h = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(h.n(), g.n());
        prop_assert_eq!(h.edges(), g.edges());
        let cg: Vec<_> = g.colors().map(|(c, s)| (c.to_string(), s.clone())).collect();
        let ch: Vec<_> = h.colors().map(|(c, s)| (c.to_string(), s.clone())).collect();
        prop_assert_eq!(cg, ch);
    }

    #[test]
    fn types_are_twin_classes(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let p = type_partition(&g);
        prop_assert_eq!(p.sizes().iter().sum::<usize>(), g.n());
        for u in 0..g.n() {
            for v in 0..g.n() {
                let mut nu = g.adjacency(u).clone();
                let mut nv = g.adjacency(v).clone();
                nu.set(v, false);
                nv.set(u, false);
                let twins = nu == nv && g.colors_of(u) == g.colors_of(v);
                prop_assert_eq!(p.class_of(u) == p.class_of(v), twins, "{} {}", u, v);
            }
        }
    }

    #[test]
    fn neighborhood_diversity_is_bounded_by_vertex_cover(seed in any::<u64>()) {
        let colored = graph_from_seed(seed);
        let mut g = ColoredGraph::new(colored.n());
        for (u, v) in colored.edges() {
            g.add_edge(u, v).unwrap();
        }
        let vc = brute_vc(&g);
        prop_assert!(neighborhood_diversity(&g) <= (1 << vc) + vc);
    }

    #[test]
    fn computed_treedepth_is_valid_and_exact_when_flagged(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let td = compute_td(&g);
        prop_assert!(validate_td(&g, &td));
        let exact = brute_td(&g, (1u32 << g.n()) - 1);
        prop_assert!(td.depth() >= exact);
        if td.is_optimal() {
            prop_assert_eq!(td.depth(), exact);
        }
    }

    #[test]
    fn cluster_deletion_sets_are_valid_and_minimum(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let d = cluster_deletion_set(&g);
        prop_assert!(is_cluster_deletion_set(&g, &d.set));
        if d.minimum {
            prop_assert_eq!(d.set.len(), brute_cluster_deletion(&g));
        }
    }

    #[test]
    fn lampis_reduction_caps_type_sizes(seed in any::<u64>(), q in 1usize..4) {
        let g = graph_from_seed(seed);
        let (small, ids) = lampis_reduce(&g, q);
        prop_assert_eq!(small.n(), ids.len());
        prop_assert!(type_partition(&small).sizes().iter().all(|&s| s <= q));
        // one round keeps the q smallest ids of every type
        let dropped = shrink_round(&g, q);
        for class in type_partition(&g).classes() {
            let kept: Vec<usize> = class.iter().copied().filter(|v| !dropped.contains(v)).collect();
            prop_assert_eq!(kept.len(), class.len().min(q));
            prop_assert!(kept.iter().all(|v| class.iter().filter(|&w| w < v).count() < q));
        }
    }

    #[test]
    fn pool_formulas_print_and_parse_back(i in 0usize..FORMULA_POOL.len()) {
        let phi = formula(i);
        let again = parse_formula(&phi.to_string()).unwrap();
        prop_assert_eq!(&again, &phi);
        prop_assert_eq!(quantifier_profile(&again), quantifier_profile(&phi));
    }

    #[test]
    fn orbit_search_matches_plain_search(seed in any::<u64>(), slide in any::<bool>()) {
        let mut r = rng(seed);
        let rule = if slide { Rule::Slide } else { Rule::Jump };
        let inst = random_instance(&mut r, rule);
        let plain = solve_instance(&inst, DEFAULT_BUDGET, false).unwrap().distance();
        let classes = symmetry_classes(&inst.graph, &inst.source, &inst.target).unwrap();
        let out = Oracle::for_instance(&inst).unwrap().with_symmetry(classes).bfs(&inst.source, &inst.target, true).unwrap();
        prop_assert_eq!(out.distance(), plain);
        if let msor::oracle::SearchOutcome::Reachable { sequence: Some(seq), .. } = out {
            let eval = msor::formula::Evaluator::new(&inst.graph, &inst.formula).unwrap();
            msor::oracle::validate_sequence(&inst.graph, rule, &eval, &inst.source, &inst.target, &seq).unwrap();
        }
    }

    #[test]
    fn circulation_is_feasible_and_no_worse_than_a_known_one(seed in any::<u64>()) {
        // a circulation built from random cycles is feasible for bounds around it
        let mut r = rng(seed);
        let nodes = r.gen_range(2..=7);
        let mut flows: Vec<((usize, usize), i64)> = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let mut cycle: Vec<usize> = (0..nodes).collect();
            cycle.shuffle(&mut r);
            cycle.truncate(r.gen_range(2..=nodes));
            let amount = r.gen_range(1..=3);
            for w in 0..cycle.len() {
                flows.push(((cycle[w], cycle[(w + 1) % cycle.len()]), amount));
            }
        }
        let mut net = FlowNetwork::new(nodes);
        let mut known = 0;
        for &((u, v), f) in &flows {
            let demand = if r.gen_bool(0.3) { f } else { 0 };
            let capacity = f + r.gen_range(0..=2);
            let cost = r.gen_range(0..=4);
            net.add_arc(u, v, demand, capacity, cost).unwrap();
            known += f * cost;
        }
        let best = min_cost_circulation(&net).unwrap().expect("the cycle flow is feasible");
        prop_assert_eq!(net.check(&best.flow).unwrap(), best.cost);
        prop_assert!(best.cost <= known);
    }

    #[test]
    fn exact_cover_text_round_trips(seed in any::<u64>()) {
        let xcr = random_xcr(&mut rng(seed), 6, 6);
        prop_assert_eq!(XcrInstance::parse(&xcr.to_text()).unwrap(), xcr.clone());
        let (inst, layout) = build_instance(&xcr).unwrap();
        // the isolated vertices plus, per element e, the e leaves of its star
        prop_assert_eq!(inst.k(), 8 + xcr.universe.iter().map(|&e| e as usize).sum::<usize>());
        prop_assert_eq!(layout.n, inst.graph.n());
        prop_assert_eq!(inst.decomposition.as_ref().unwrap().depth(), 3);
    }

    #[test]
    fn subtree_codes_ignore_labels(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=14);
        let tree_only = r.gen_bool(0.5);
        let (g, td) = random_low_td(&mut r, n, 3, tree_only);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let mut h = ColoredGraph::new(n);
        for (u, v) in g.edges() {
            h.add_edge(perm[u], perm[v]).unwrap();
        }
        for (name, members) in g.colors() {
            h.add_color(name, members.ones().map(|v| perm[v])).unwrap();
        }
        let mut parent = vec![None; n];
        for v in 0..n {
            parent[perm[v]] = td.parent(v).map(|p| perm[p]);
        }
        let td2 = TreedepthDecomposition::from_parents(parent).unwrap();
        for v in 0..n {
            prop_assert_eq!(subtree_canonical_code(&g, &td, v), subtree_canonical_code(&h, &td2, perm[v]));
        }
    }
}
