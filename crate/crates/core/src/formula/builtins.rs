//! Formulas shipped with the toolkit.

use std::cell::Cell;

use super::ast::{build::*, Formula, FormulaAst};
use super::parse_formula;
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: &[&str] = &["independent-set", "hardness-phi"];

/// Looks up a built-in formula by name.
pub fn builtin_formula(name: &str) -> Result<FormulaAst> {
    match name {
        "independent-set" => parse_formula("free X; forall u forall v ((X(u) & X(v)) -> !E(u,v))"),
        "hardness-phi" => FormulaAst::new(Some(hardness::SET), hardness::phi()),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Building blocks of the feasibility formula of the depth-3 forest
/// construction. Every predicate takes the names of its free element
/// variables and introduces fresh names for the variables it binds.
pub mod hardness {
    use super::*;

    /// Name of the free set variable.
    pub const SET: &str = "X";

    thread_local! {
        static NEXT: Cell<usize> = const { Cell::new(0) };
    }

    fn fresh(stem: &str) -> String {
        NEXT.with(|n| {
            let i = n.get();
            n.set(i + 1);
            format!("{stem}_{i}")
        })
    }

    fn x(v: &str) -> Formula {
        member(SET, v)
    }

    /// `v` is a degree-one vertex attached to `u`.
    pub fn leaf_of(u: &str, v: &str) -> Formula {
        let w = fresh("w");
        and(vec![adj(u, v), forall(&[&w], implies(adj(&w, v), eq(&w, u)))])
    }

    /// `r` and `s` are at distance exactly two.
    pub fn dist2(r: &str, s: &str) -> Formula {
        let u = fresh("u");
        and(vec![
            neq(r, s),
            not(adj(r, s)),
            exists(&[&u], and(vec![adj(r, &u), adj(&u, s)])),
        ])
    }

    /// `r` has exactly two leaves attached.
    pub fn root(r: &str) -> Formula {
        let (u, v, w) = (fresh("u"), fresh("v"), fresh("w"));
        exists_distinct(
            &[&u, &v],
            and(vec![
                leaf_of(r, &u),
                leaf_of(r, &v),
                forall(&[&w], implies(leaf_of(r, &w), or(vec![eq(&w, &u), eq(&w, &v)]))),
            ]),
        )
    }

    /// `c` is a non-leaf neighbor of a root.
    pub fn center(c: &str) -> Formula {
        let r = fresh("r");
        exists(&[&r], and(vec![root(&r), adj(&r, c), not(leaf_of(&r, c))]))
    }

    /// `v` is at distance two from a root.
    pub fn star_leaf(v: &str) -> Formula {
        let r = fresh("r");
        exists(&[&r], and(vec![root(&r), dist2(&r, v)]))
    }

    pub fn full_tree(r: &str) -> Formula {
        let s = fresh("s");
        forall(&[&s], implies(dist2(r, &s), x(&s)))
    }

    pub fn empty_tree(r: &str) -> Formula {
        let s = fresh("s");
        forall(&[&s], implies(dist2(r, &s), not(x(&s))))
    }

    pub fn clean_tree(r: &str) -> Formula {
        or(vec![full_tree(r), empty_tree(r)])
    }

    pub fn full_star(c: &str) -> Formula {
        let s = fresh("s");
        forall(&[&s], implies(leaf_of(c, &s), x(&s)))
    }

    pub fn empty_star(c: &str) -> Formula {
        let s = fresh("s");
        forall(&[&s], implies(leaf_of(c, &s), not(x(&s))))
    }

    pub fn clean_star(c: &str) -> Formula {
        or(vec![full_star(c), empty_star(c)])
    }

    /// Both leaves attached to the root `r` are in `X`.
    pub fn marked(r: &str) -> Formula {
        let (u, v) = (fresh("u"), fresh("v"));
        exists_distinct(&[&u, &v], and(vec![x(&u), x(&v), leaf_of(r, &u), leaf_of(r, &v)]))
    }

    /// Exactly eight members of `X` are not star leaves.
    pub fn eight_non_star_leaves() -> Formula {
        let vs: Vec<String> = (0..8).map(|_| fresh("v")).collect();
        let refs: Vec<&str> = vs.iter().map(String::as_str).collect();
        let v = fresh("v");
        let mut parts: Vec<Formula> = refs.iter().map(|vi| x(vi)).collect();
        parts.extend(refs.iter().map(|vi| not(star_leaf(vi))));
        parts.push(forall(
            &[&v],
            implies(
                and(vec![x(&v), not(star_leaf(&v))]),
                or(refs.iter().map(|vi| eq(&v, vi)).collect()),
            ),
        ));
        exists_distinct(&refs, and(parts))
    }

    pub fn clean() -> Formula {
        let r = fresh("r");
        and(vec![
            eight_non_star_leaves(),
            forall(&[&r], implies(root(&r), clean_tree(&r))),
        ])
    }

    pub fn almost_clean() -> Formula {
        let (r1, r2, r3) = (fresh("r"), fresh("r"), fresh("r"));
        let (r, c1, c2, c) = (fresh("r"), fresh("c"), fresh("c"), fresh("c"));
        let mut parts = Vec::new();
        for ri in [&r1, &r2, &r3] {
            parts.push(root(ri));
            parts.push(marked(ri));
        }
        parts.push(not(clean_tree(&r1)));
        parts.push(forall(
            &[&r],
            implies(
                and(vec![root(&r), not(clean_tree(&r))]),
                or(vec![eq(&r, &r1), eq(&r, &r2)]),
            ),
        ));
        parts.push(exists_distinct(
            &[&c1, &c2],
            and(vec![
                x(&c1),
                x(&c2),
                center(&c1),
                center(&c2),
                adj(&c1, &r1),
                adj(&c2, &r2),
                forall(
                    &[&c],
                    implies(and(vec![center(&c), neq(&c, &c1), neq(&c, &c2)]), clean_star(&c)),
                ),
                iff(clean_star(&c1), clean_star(&c2)),
            ]),
        ));
        and(vec![
            eight_non_star_leaves(),
            exists_distinct(&[&r1, &r2, &r3], and(parts)),
        ])
    }

    /// `clean(X) ∨ almost-clean(X)`.
    pub fn phi() -> Formula {
        NEXT.with(|n| n.set(0));
        or(vec![clean(), almost_clean()])
    }
}
