mod common;

use common::*;
use msor::formula::Evaluator;
use msor::graph::{Rule, VertexSet};
use msor::oracle::{symmetry_classes, validate_sequence, Oracle, SearchOutcome, TokenSet};
use msor::reductions::{build_instance, direct_feasible, random_xcr, xcr_brute, DirectChecker, ForestLayout, XcrInstance};

fn split_instance() -> XcrInstance {
    XcrInstance::parse("u 3 4\nd 3\nd 4\nd 3 4\nstart 2\ngoal 0 1\n").unwrap()
}

fn forest_oracle(xcr: &XcrInstance, want_sequence: bool) -> SearchOutcome {
    let (inst, layout) = build_instance(xcr).unwrap();
    let sym = symmetry_classes(&inst.graph, &inst.source, &inst.target).unwrap();
    let out = Oracle::new(&inst.graph, Rule::Jump, DirectChecker::new(&layout))
        .with_symmetry(sym)
        .bfs(&inst.source, &inst.target, want_sequence)
        .unwrap();
    out
}

#[test]
fn forest_sizes() {
    let (inst, layout) = build_instance(&split_instance()).unwrap();
    assert_eq!(layout.n, 27 + 8);
    assert_eq!(layout.trees[2].vertex_count(), 12);
    // the eight isolated vertices and all 3 + 4 star leaves
    assert_eq!(inst.k(), 8 + 3 + 4);
    assert_eq!(inst.decomposition.as_ref().unwrap().depth(), 3);
    assert_eq!(inst.graph.color_count(), 0);
}

#[test]
fn equal_covers_give_equal_sets() {
    let x = XcrInstance::parse("u 3 4\nd 3\nd 4\nd 3 4\nstart 0 1\ngoal 0 1\n").unwrap();
    let (inst, _) = build_instance(&x).unwrap();
    assert_eq!(inst.source, inst.target);
}

#[test]
fn checker_examples() {
    let xcr = split_instance();
    let (inst, layout) = build_instance(&xcr).unwrap();
    assert!(direct_feasible(&layout, &inst.source));
    assert!(direct_feasible(&layout, &inst.target));

    // one star leaf moved to another tree, nothing marked
    let mut moved = inst.source.clone();
    let leaf = layout.trees[2].stars[0].leaves[0];
    moved.remove(&leaf);
    moved.insert(layout.trees[0].stars[0].leaves[0]);
    assert!(!direct_feasible(&layout, &moved));

    // seven tokens on the isolated vertices and one on an antenna is fine,
    // but removing an isolated token without a replacement breaks the count
    let mut seven = inst.source.clone();
    seven.remove(&layout.isolated[0]);
    seven.insert(layout.trees[0].antennae[0]);
    assert!(direct_feasible(&layout, &seven));
    let mut short = seven.clone();
    short.remove(&layout.trees[0].antennae[0]);
    short.insert(layout.trees[1].stars[0].leaves[0]);
    assert!(!direct_feasible(&layout, &short));
}

#[test]
fn split_walkthrough_is_found() {
    assert_eq!(xcr_brute(&split_instance(), 1000).unwrap(), Some(1));
    let out = forest_oracle(&split_instance(), true);
    let SearchOutcome::Reachable { sequence: Some(seq), .. } = out else {
        panic!("expected a sequence, got {out:?}");
    };
    let (inst, layout) = build_instance(&split_instance()).unwrap();
    let checker = DirectChecker::new(&layout);
    validate_sequence(&inst.graph, Rule::Jump, &checker, &inst.source, &inst.target, &seq).unwrap();
}

#[test]
fn reduction_agrees_with_exact_cover_search() {
    let mut r = rng(21);
    for _ in 0..10 {
        let xcr = random_xcr(&mut r, 3, 3);
        let want = xcr_brute(&xcr, 100_000).unwrap().is_some();
        let got = forest_oracle(&xcr, false).distance().is_some();
        assert_eq!(got, want, "{}", xcr.to_text());
    }
}

#[test]
fn checker_matches_the_formula_on_a_single_tree() {
    let xcr = XcrInstance::parse("u 3\nd 3\nstart 0\ngoal 0\n").unwrap();
    let (inst, layout) = build_instance(&xcr).unwrap();
    let eval = Evaluator::new(&inst.graph, &inst.formula).unwrap();
    let checker = DirectChecker::new(&layout);
    let oracle = Oracle::new(&inst.graph, Rule::Jump, checker.clone());
    let visited = oracle.explore(&inst.source, 300).unwrap();
    let mut checked = 0;
    for x in &visited {
        let t = TokenSet::from(x);
        for c in oracle_candidates(&t, inst.graph.n()) {
            let v = c.to_vertex_set();
            assert_eq!(direct_feasible(&layout, &v), eval.eval(&v).unwrap(), "{v:?}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

fn oracle_candidates(x: &TokenSet, n: usize) -> Vec<TokenSet> {
    let mut out = Vec::new();
    for u in x.iter() {
        for v in (0..n).filter(|&v| !x.contains(v)) {
            out.push(x.exchange(u, v));
        }
    }
    out
}

#[test]
fn layout_is_deterministic() {
    let a = ForestLayout::new(&split_instance());
    let b = ForestLayout::new(&split_instance());
    assert_eq!(a, b);
    assert_eq!(a.isolated, (27..35).collect::<Vec<_>>());
    let s: VertexSet = a.cover_set(&[2]);
    assert_eq!(s.len(), 15);
}

#[test]
fn checker_matches_the_formula_along_a_split() {
    let xcr = split_instance();
    let (inst, layout) = build_instance(&xcr).unwrap();
    let SearchOutcome::Reachable { sequence: Some(seq), .. } = forest_oracle(&xcr, true) else {
        panic!("split instance is reachable");
    };
    let eval = Evaluator::new(&inst.graph, &inst.formula).unwrap();
    let mut almost_clean = 0;
    for x in &seq {
        assert!(eval.eval(x).unwrap());
        let t = TokenSet::from(x);
        for c in oracle_candidates(&t, inst.graph.n()).into_iter().step_by(7) {
            let v = c.to_vertex_set();
            assert_eq!(direct_feasible(&layout, &v), eval.eval(&v).unwrap(), "{v:?}");
        }
        let marked = layout.trees.iter().filter(|t| t.antennae.iter().all(|a| x.contains(a))).count();
        almost_clean += usize::from(marked == 3);
    }
    assert!(almost_clean > 0);
}
