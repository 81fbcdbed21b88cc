//! The MSO₁/MSO₂ formula language.
//!
//! Formulas have at most one free set variable, declared as `free X;`.
//! Quantifiers range over vertices, vertex sets, edges and edge sets;
//! `existsd`/`foralld` quantify pairwise distinct objects.
//!
//! ```
//! use msor::formula::{parse_formula, evaluate};
//! use msor::graph::parse_graph;
//!
//! let g = parse_graph("n 3\ne 0 1\ne 1 2\n").unwrap();
//! let is = parse_formula("free X; forall u forall v ((X(u) & X(v)) -> !E(u,v))").unwrap();
//! assert!(evaluate(&g, &is, &[0, 2].into()).unwrap());
//! assert!(!evaluate(&g, &is, &[0, 1].into()).unwrap());
//! ```

mod ast;
mod builtins;
mod eval;
mod parser;
mod translate;

pub use ast::{build, Formula, FormulaAst, Quantifier, QuantifierProfile, Sort};
pub use builtins::{builtin_formula, hardness, BUILTIN_NAMES};
pub use eval::{evaluate, Evaluator, DEFAULT_EVAL_BUDGET};
pub use parser::parse_formula;
pub use translate::{subdivide_decomposition, translate_mso2_to_mso1, SUB_COLOR};

/// Replaces dotted quantifiers by guarded ordinary quantifiers.
pub fn desugar_distinct(ast: &FormulaAst) -> FormulaAst {
    ast.desugar()
}

pub fn quantifier_profile(ast: &FormulaAst) -> QuantifierProfile {
    ast.profile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::{parse_graph, ColoredGraph};

    const IS: &str = "free X; forall u forall v ((X(u) & X(v)) -> !E(u,v))";

    fn k3() -> ColoredGraph {
        ColoredGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn parses_independent_set() {
        let ast = parse_formula(IS).unwrap();
        assert!(ast.is_mso1());
        assert_eq!(ast.free_var(), Some("X"));
        assert_eq!(ast, builtin_formula("independent-set").unwrap());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_formula("free X; X(u)"), Err(Error::UnboundVariable("u".into())));
        assert!(matches!(
            parse_formula("free X; free Y; true"),
            Err(Error::DuplicateFreeVariable(_))
        ));
        match parse_formula("free X;\n  exists u (E(u,)") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 17)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_formula("exists set x true"), Err(Error::SortMismatch(_))));
        assert!(matches!(parse_formula("exists edge e exists u (e = u)"), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn dotted_quantifiers() {
        let ast = parse_formula("free X; existsd a,b,c (E(a,b))").unwrap();
        assert!(ast.has_distinct());
        let plain = ast.desugar();
        assert!(!plain.has_distinct());
        let expect = parse_formula("free X; exists a,b,c ((a != b) & (a != c) & (b != c) & E(a,b))").unwrap();
        assert_eq!(plain, expect);
        let dual = parse_formula("foralld a,b E(a,b)").unwrap().desugar();
        assert_eq!(dual, parse_formula("forall a,b (a != b -> E(a,b))").unwrap());
        let none = parse_formula(IS).unwrap();
        assert_eq!(none.desugar(), none);
        assert_eq!((ast.profile().q_v, ast.profile().q), (plain.profile().q_v, plain.profile().q));
    }

    #[test]
    fn profiles() {
        let p = parse_formula(IS).unwrap().profile();
        assert_eq!((p.q_s, p.q_v, p.q), (0, 2, 2));
        assert_eq!(parse_formula("free X; true").unwrap().profile().q, 1);
        let p = parse_formula("exists set A exists set B exists a,b,c (A(a) & B(b) & a = c)")
            .unwrap()
            .profile();
        assert_eq!((p.q_s, p.q_v, p.q), (2, 3, 12));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            IS,
            "free X; existsd a,b (X(a) <-> !X(b)) | false",
            "exists set Y forall u (Y(u) -> (exists v (E(u,v) & !Y(v))))",
            "exists edge e exists u (I(e,u) & red(u))",
            "free Z; forall u (Z(u) -> u != u) -> true",
        ] {
            let ast = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&ast.to_string()).unwrap(), ast, "{ast}");
        }
    }

    #[test]
    fn evaluates_small_examples() {
        let is = parse_formula(IS).unwrap();
        assert!(evaluate(&k3(), &is, &[0].into()).unwrap());
        assert!(!evaluate(&k3(), &is, &[0, 1].into()).unwrap());
        let p3 = parse_graph("n 3\ne 0 1\ne 1 2\n").unwrap();
        assert!(evaluate(&p3, &is, &[0, 2].into()).unwrap());
        let bad = parse_formula("free X; exists u blue(u)").unwrap();
        assert_eq!(evaluate(&p3, &bad, &[].into()), Err(Error::UnknownColor("blue".into())));
    }

    #[test]
    fn set_quantifiers() {
        // Two-colorability of C4 and C5.
        let bip = parse_formula("exists set A forall u,v (E(u,v) -> (A(u) <-> !A(v)))").unwrap();
        let c4 = ColoredGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c5 = ColoredGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(evaluate(&c4, &bip, &[].into()).unwrap());
        assert!(!evaluate(&c5, &bip, &[].into()).unwrap());
    }

    #[test]
    fn budget_is_reported() {
        let f = parse_formula("exists a,b,c,d E(a,d)").unwrap();
        let g = ColoredGraph::new(10);
        let ev = Evaluator::new(&g, &f).unwrap().with_budget(100);
        assert!(matches!(ev.eval(&[].into()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn free_variable_as_color() {
        let is = parse_formula(IS).unwrap();
        let sentence = is.bind_free_as_color("_X");
        assert_eq!(sentence.free_var(), None);
        let mut g = k3();
        g.add_color("_X", [1]).unwrap();
        assert!(evaluate(&g, &sentence, &[].into()).unwrap());
    }

    #[test]
    fn mso2_translation_examples() {
        let k3 = k3();
        let adj = parse_formula("free X; exists u,v (X(u) & X(v) & E(u,v))").unwrap();
        let (g2, f2) = translate_mso2_to_mso1(&k3, &adj).unwrap();
        assert_eq!(g2.n(), 6);
        assert!(f2.is_mso1());
        for x in [vec![0], vec![0, 1], vec![0, 1, 2]] {
            let x = x.into_iter().collect();
            assert_eq!(evaluate(&k3, &adj, &x).unwrap(), evaluate(&g2, &f2, &x).unwrap());
        }
        let p3 = ColoredGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let deg2 = parse_formula("free X; exists u (X(u) & existsd edge e,f (I(e,u) & I(f,u)))").unwrap();
        assert!(deg2.is_mso2());
        let (g2, f2) = translate_mso2_to_mso1(&p3, &deg2).unwrap();
        for v in 0..3 {
            let x = [v].into();
            assert_eq!(evaluate(&p3, &deg2, &x).unwrap(), v == 1);
            assert_eq!(evaluate(&g2, &f2, &x).unwrap(), v == 1);
        }
        let mut clash = p3.clone();
        clash.add_color(SUB_COLOR, [0]).unwrap();
        assert!(matches!(translate_mso2_to_mso1(&clash, &deg2), Err(Error::ReservedColor(_))));
    }

    #[test]
    fn hardness_root_needs_two_leaves() {
        let f = FormulaAst::new(None, build::exists(&["r"], hardness::root("r"))).unwrap();
        let cherry = ColoredGraph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let claw = ColoredGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(evaluate(&cherry, &f, &[].into()).unwrap());
        assert!(!evaluate(&claw, &f, &[].into()).unwrap());
        let phi = builtin_formula("hardness-phi").unwrap();
        assert!(phi.is_mso1());
        assert_eq!(phi, builtin_formula("hardness-phi").unwrap());
        assert!(matches!(builtin_formula("nope"), Err(Error::UnknownBuiltin(_))));
    }
}
