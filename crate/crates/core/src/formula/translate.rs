//! MSO₂ to MSO₁ by edge subdivision.

use std::collections::BTreeSet;

use super::ast::{build, Formula, FormulaAst, Quantifier, Sort};
use crate::error::Result;
use crate::graph::{ColoredGraph, TreedepthDecomposition};

/// Color of the subdivision vertices.
pub const SUB_COLOR: &str = "_sub";

struct Fresh {
    used: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn new(f: &Formula, free: Option<&str>) -> Self {
        let mut used = BTreeSet::new();
        collect_names(f, &mut used);
        if let Some(x) = free {
            used.insert(x.to_string());
        }
        Fresh { used, next: 0 }
    }

    fn name(&mut self, stem: &str) -> String {
        loop {
            let cand = format!("{stem}{}", self.next);
            self.next += 1;
            if self.used.insert(cand.clone()) {
                return cand;
            }
        }
    }
}

fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Eq(a, b) | Formula::Adj(a, b) | Formula::Inc(a, b) | Formula::Member(a, b) => {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        Formula::Color(_, x) => {
            out.insert(x.clone());
        }
        Formula::Not(a) => collect_names(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Formula::Quant { vars, body, .. } => {
            out.extend(vars.iter().cloned());
            collect_names(body, out);
        }
    }
}

/// `∀z (Y(z) → [¬]_sub(z))`: every member of `set` is an original vertex
/// (or a subdivision vertex when `edges` is set).
fn set_guard(set: &str, edges: bool, fresh: &mut Fresh) -> Formula {
    let z = fresh.name("z");
    let sub = build::color(SUB_COLOR, &z);
    build::forall(
        &[&z],
        build::implies(build::member(set, &z), if edges { sub } else { build::not(sub) }),
    )
}

fn relativize(f: Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Adj(u, v) => {
            let w = fresh.name("w");
            build::and(vec![
                build::neq(&u, &v),
                build::exists(
                    &[&w],
                    build::and(vec![build::color(SUB_COLOR, &w), build::adj(&w, &u), build::adj(&w, &v)]),
                ),
            ])
        }
        Formula::Inc(e, x) => build::adj(&e, &x),
        Formula::Not(a) => build::not(relativize(*a, fresh)),
        Formula::And(a, b) => Formula::And(Box::new(relativize(*a, fresh)), Box::new(relativize(*b, fresh))),
        Formula::Or(a, b) => Formula::Or(Box::new(relativize(*a, fresh)), Box::new(relativize(*b, fresh))),
        Formula::Implies(a, b) => {
            Formula::Implies(Box::new(relativize(*a, fresh)), Box::new(relativize(*b, fresh)))
        }
        Formula::Iff(a, b) => Formula::Iff(Box::new(relativize(*a, fresh)), Box::new(relativize(*b, fresh))),
        Formula::Quant {
            kind,
            distinct,
            sort,
            vars,
            body,
        } => {
            let body = relativize(*body, fresh);
            let guards: Vec<Formula> = vars
                .iter()
                .map(|v| match sort {
                    Sort::Vertex => build::not(build::color(SUB_COLOR, v)),
                    Sort::Edge => build::color(SUB_COLOR, v),
                    Sort::VertexSet => set_guard(v, false, fresh),
                    Sort::EdgeSet => set_guard(v, true, fresh),
                })
                .collect();
            let guard = build::and(guards);
            let body = match kind {
                Quantifier::Exists => build::and(vec![guard, body]),
                Quantifier::Forall => build::implies(guard, body),
            };
            let sort = match sort {
                Sort::Edge => Sort::Vertex,
                Sort::EdgeSet => Sort::VertexSet,
                s => s,
            };
            Formula::Quant {
                kind,
                distinct,
                sort,
                vars,
                body: Box::new(body),
            }
        }
        atom => atom,
    }
}

/// Subdivides every edge of `graph` into a vertex of color `_sub` and
/// rewrites `ast` so that, for every `X` over the original vertices,
/// `graph ⊨ φ(X)` iff `subdivided ⊨ φ'(X)`. Subdivision vertices have ids
/// `n..n+m` in [`ColoredGraph::edges`] order.
pub fn translate_mso2_to_mso1(graph: &ColoredGraph, ast: &FormulaAst) -> Result<(ColoredGraph, FormulaAst)> {
    let sub = graph.subdivide(SUB_COLOR)?;
    let ast = ast.desugar();
    let mut fresh = Fresh::new(ast.body(), ast.free_var());
    let mut body = relativize(ast.body().clone(), &mut fresh);
    if let Some(x) = ast.free_var() {
        body = build::and(vec![set_guard(x, false, &mut fresh), body]);
    }
    let out = FormulaAst::new(ast.free_var(), body)?;
    debug_assert!(out.is_mso1());
    Ok((sub, out))
}

/// Extends a decomposition of `graph` to its subdivision: the vertex of an
/// edge becomes a child of the deeper endpoint, so the depth grows by at most
/// one.
pub fn subdivide_decomposition(graph: &ColoredGraph, td: &TreedepthDecomposition) -> Result<TreedepthDecomposition> {
    let mut parent: Vec<Option<usize>> = td.parents().to_vec();
    for &(u, v) in &graph.edges() {
        let lower = if td.is_ancestor(u, v) { v } else { u };
        parent.push(Some(lower));
    }
    TreedepthDecomposition::from_parents(parent)
}
