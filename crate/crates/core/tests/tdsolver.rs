mod common;

use common::*;
use msor::formula::{builtin_formula, parse_formula};
use msor::graph::{compute_td, ColoredGraph, ReconfInstance, Rule, TreedepthDecomposition, VertexSet};
use msor::oracle::{solve_instance, validate_sequence, DEFAULT_BUDGET};
use msor::formula::Evaluator;
use msor::tdsolver::{delete_from_instance, kernelize, reduce_cliques, solve_via_kernel};

fn star(leaves: usize) -> (ColoredGraph, TreedepthDecomposition) {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    let g = ColoredGraph::from_edges(leaves + 1, &edges).unwrap();
    let parents = std::iter::once(None).chain((1..=leaves).map(|_| Some(0))).collect();
    (g, TreedepthDecomposition::from_parents(parents).unwrap())
}

fn distance(inst: &ReconfInstance) -> Option<usize> {
    solve_instance(inst, DEFAULT_BUDGET, false).unwrap().distance()
}

#[test]
fn star_leaves_shrink_to_threshold() {
    let (g, td) = star(200);
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[1]), set(&[2]), Rule::Jump).unwrap();
    let (kernel, report) = kernelize(&inst, &td).unwrap();
    // center, the two solution leaves and k + 2^q = 5 others
    assert_eq!(kernel.graph.n(), 1 + 2 + 5);
    assert_eq!(report.steps.len(), 198 - 5);
    assert!(report.steps.iter().all(|s| s.threshold == 5 && s.p == 1));
    assert_eq!(distance(&kernel), Some(1));
    assert_eq!(distance(&inst), Some(1));
}

#[test]
fn no_twin_subtrees_means_no_change() {
    let g = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let td = compute_td(&g);
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[3]), Rule::Jump).unwrap();
    let (kernel, report) = kernelize(&inst, &td).unwrap();
    assert!(report.steps.is_empty());
    assert_eq!(kernel.graph, inst.graph);
}

#[test]
fn single_large_clique_is_trimmed() {
    let mut edges = Vec::new();
    for u in 0..100 {
        for v in u + 1..100 {
            edges.push((u, v));
        }
    }
    let g = ColoredGraph::from_edges(100, &edges).unwrap();
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[99]), Rule::Jump).unwrap();
    let (reduced, report) = reduce_cliques(&inst, &VertexSet::new()).unwrap();
    assert_eq!(reduced.graph.n(), 2 + 5);
    assert_eq!(report.steps.len(), 93);
    assert_eq!(distance(&reduced), Some(1));
}

#[test]
fn small_cliques_are_untouched() {
    let g = ColoredGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[3]), Rule::Jump).unwrap();
    let (reduced, report) = reduce_cliques(&inst, &VertexSet::new()).unwrap();
    assert!(report.steps.is_empty());
    assert_eq!(reduced.graph, inst.graph);
}

#[test]
fn rejects_non_cluster_deletion_sets() {
    let g = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[2]), Rule::Jump).unwrap();
    assert!(reduce_cliques(&inst, &VertexSet::new()).is_err());
    assert!(reduce_cliques(&inst, &set(&[1])).is_ok());
}

#[test]
fn rejects_a_bad_decomposition() {
    let g = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let td = TreedepthDecomposition::from_parents(vec![None, None, None]).unwrap();
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[2]), Rule::Jump).unwrap();
    assert!(kernelize(&inst, &td).is_err());
}

#[test]
fn identical_endpoints() {
    let (g, td) = star(6);
    let phi = builtin_formula("independent-set").unwrap();
    let inst = ReconfInstance::new(g, phi, set(&[1, 2]), set(&[1, 2]), Rule::Slide)
        .unwrap()
        .with_decomposition(td)
        .unwrap();
    assert_eq!(solve_via_kernel(&inst, DEFAULT_BUDGET, false).unwrap().outcome.distance(), Some(0));
}

#[test]
fn mso2_formula_goes_through_subdivision() {
    let phi = parse_formula("free X; forall v (X(v) | exists edge e exists u (X(u) & I(e,u) & I(e,v) & u != v))").unwrap();
    let (g, td) = star(12);
    let inst = ReconfInstance::new(g, phi, set(&[0]), set(&[0]), Rule::Jump).unwrap().with_decomposition(td).unwrap();
    let res = solve_via_kernel(&inst, DEFAULT_BUDGET, false).unwrap();
    assert_eq!(res.outcome.distance(), Some(0));

    let mut r = rng(3);
    let phi = parse_formula("free X; forall v (X(v) | exists edge e exists u (X(u) & I(e,u) & I(e,v) & u != v))").unwrap();
    let mut checked = 0;
    while checked < 10 {
        let n = r.gen_range(4..=8);
        let (g, td) = random_low_td(&mut r, n, 3, false);
        let k = 2;
        let Some(inst) = instance_on(&mut r, g, phi.clone(), k, Rule::Jump) else { continue };
        let inst = inst.with_decomposition(td).unwrap();
        let res = solve_via_kernel(&inst, DEFAULT_BUDGET, false).unwrap();
        assert_eq!(res.outcome.distance(), distance(&inst));
        let slide = ReconfInstance { rule: Rule::Slide, ..inst };
        assert!(solve_via_kernel(&slide, DEFAULT_BUDGET, false).is_err());
        checked += 1;
    }
}

use rand::Rng;

#[test]
fn kernel_distances_match_the_oracle() {
    let mut r = rng(11);
    for i in 0..40 {
        let rule = if i % 2 == 0 { Rule::Jump } else { Rule::Slide };
        let inst = random_td_instance(&mut r, rule);
        let res = solve_via_kernel(&inst, DEFAULT_BUDGET, true).unwrap();
        assert_eq!(res.outcome.distance(), distance(&inst));
        if let msor::oracle::SearchOutcome::Reachable { sequence: Some(seq), .. } = &res.outcome {
            let eval = Evaluator::new(&inst.graph, &inst.formula).unwrap();
            validate_sequence(&inst.graph, rule, &eval, &inst.source, &inst.target, seq).unwrap();
        }
    }
}

#[test]
fn every_deletion_step_preserves_distance() {
    let mut r = rng(12);
    let mut steps = 0;
    for i in 0..30 {
        let rule = if i % 2 == 0 { Rule::Jump } else { Rule::Slide };
        let inst = random_td_instance(&mut r, rule);
        let want = distance(&inst);
        let td = inst.decomposition.clone().unwrap();
        let (_, report) = kernelize(&inst, &td).unwrap();
        let mut removed = VertexSet::new();
        for step in &report.steps {
            removed.extend(step.removed.iter().copied());
            let (partial, _) = delete_from_instance(&inst, &removed).unwrap();
            assert_eq!(distance(&partial), want);
            steps += 1;
        }
    }
    assert!(steps > 0);
}
