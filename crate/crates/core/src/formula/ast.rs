use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Sort of a quantified variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Vertex,
    VertexSet,
    Edge,
    EdgeSet,
}

impl Sort {
    pub fn is_set(self) -> bool {
        matches!(self, Sort::VertexSet | Sort::EdgeSet)
    }

    pub fn is_mso2(self) -> bool {
        matches!(self, Sort::Edge | Sort::EdgeSet)
    }

    /// Sort of the members of a set sort.
    pub fn element(self) -> Sort {
        match self {
            Sort::VertexSet => Sort::Vertex,
            Sort::EdgeSet => Sort::Edge,
            s => s,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Sort::Vertex => "",
            Sort::VertexSet => "set ",
            Sort::Edge => "edge ",
            Sort::EdgeSet => "edgeset ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Formula syntax tree. Variables are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `x = y` over vertices or over edges.
    Eq(String, String),
    /// `E(x, y)`.
    Adj(String, String),
    /// `I(e, x)`: edge `e` is incident to vertex `x`.
    Inc(String, String),
    /// `C(x)` for a named color `C`.
    Color(String, String),
    /// `X(x)` for a set variable `X`.
    Member(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        /// Dotted quantifier: the bound variables take pairwise distinct values.
        distinct: bool,
        sort: Sort,
        vars: Vec<String>,
        body: Box<Formula>,
    },
}

/// Small constructors used by the built-in formulas and by tests.
pub mod build {
    use super::{Formula, Quantifier, Sort};

    fn names(vars: &[&str]) -> Vec<String> {
        vars.iter().map(|s| s.to_string()).collect()
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: &str, b: &str) -> Formula {
        not(eq(a, b))
    }

    pub fn adj(a: &str, b: &str) -> Formula {
        Formula::Adj(a.into(), b.into())
    }

    pub fn inc(e: &str, x: &str) -> Formula {
        Formula::Inc(e.into(), x.into())
    }

    pub fn color(c: &str, x: &str) -> Formula {
        Formula::Color(c.into(), x.into())
    }

    pub fn member(set: &str, x: &str) -> Formula {
        Formula::Member(set.into(), x.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn and(fs: Vec<Formula>) -> Formula {
        fs.into_iter()
            .reduce(|a, b| Formula::And(Box::new(a), Box::new(b)))
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn or(fs: Vec<Formula>) -> Formula {
        fs.into_iter()
            .reduce(|a, b| Formula::Or(Box::new(a), Box::new(b)))
            .unwrap_or(Formula::False)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn quant(kind: Quantifier, distinct: bool, sort: Sort, vars: &[&str], body: Formula) -> Formula {
        Formula::Quant {
            kind,
            distinct,
            sort,
            vars: names(vars),
            body: Box::new(body),
        }
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Exists, false, Sort::Vertex, vars, body)
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Forall, false, Sort::Vertex, vars, body)
    }

    pub fn exists_distinct(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Exists, true, Sort::Vertex, vars, body)
    }

    pub fn forall_distinct(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Forall, true, Sort::Vertex, vars, body)
    }

    pub fn exists_set(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Exists, false, Sort::VertexSet, vars, body)
    }

    pub fn forall_set(vars: &[&str], body: Formula) -> Formula {
        quant(Quantifier::Forall, false, Sort::VertexSet, vars, body)
    }
}

impl Formula {
    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Eq(..)
            | Formula::Adj(..)
            | Formula::Inc(..)
            | Formula::Color(..)
            | Formula::Member(..) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Quant { body, .. } => 1 + body.size(),
        }
    }

    fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Quant { body, .. } => body.visit(f),
            _ => {}
        }
    }

    /// Applies `f` bottom-up to every node.
    pub fn map(self, f: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Not(a) => Formula::Not(Box::new(a.map(f))),
            Formula::And(a, b) => Formula::And(Box::new(a.map(f)), Box::new(b.map(f))),
            Formula::Or(a, b) => Formula::Or(Box::new(a.map(f)), Box::new(b.map(f))),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.map(f)), Box::new(b.map(f))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map(f)), Box::new(b.map(f))),
            Formula::Quant {
                kind,
                distinct,
                sort,
                vars,
                body,
            } => Formula::Quant {
                kind,
                distinct,
                sort,
                vars,
                body: Box::new(body.map(f)),
            },
            atom => atom,
        };
        f(rebuilt)
    }

    pub fn has_distinct(&self) -> bool {
        let mut found = false;
        self.visit(&mut |node| {
            if let Formula::Quant { distinct: true, .. } = node {
                found = true;
            }
        });
        found
    }

    /// Color names used by the formula.
    pub fn colors(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |node| {
            if let Formula::Color(c, _) = node {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }
}

/// Quantifier accounting of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantifierProfile {
    /// Quantified set variables.
    pub q_s: usize,
    /// Quantified element variables.
    pub q_v: usize,
    /// `max(1, 2^q_s · q_v)`, saturating.
    pub q: usize,
    /// Node count of the syntax tree.
    pub formula_length: usize,
}

/// A validated formula `φ(X)` with at most one free set variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormulaAst {
    free: Option<String>,
    body: Formula,
    mso2: bool,
}

fn is_set_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

struct Scope {
    vars: HashMap<String, Vec<Sort>>,
    mso2: bool,
}

impl Scope {
    fn lookup(&self, name: &str) -> Option<Sort> {
        self.vars.get(name).and_then(|s| s.last().copied())
    }

    fn expect(&self, name: &str, sorts: &[Sort], what: &str) -> Result<Sort> {
        match self.lookup(name) {
            None => Err(Error::UnboundVariable(name.to_string())),
            Some(s) if sorts.contains(&s) => Ok(s),
            Some(s) => Err(Error::SortMismatch(format!(
                "`{name}` is a {s:?} variable, expected {what}"
            ))),
        }
    }

    fn check(&mut self, f: &Formula) -> Result<()> {
        use Sort::*;
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Eq(a, b) => {
                let sa = self.expect(a, &[Vertex, Edge], "a vertex or edge")?;
                let sb = self.expect(b, &[Vertex, Edge], "a vertex or edge")?;
                if sa != sb {
                    return Err(Error::SortMismatch(format!("`{a} = {b}` compares {sa:?} with {sb:?}")));
                }
                Ok(())
            }
            Formula::Adj(a, b) => {
                self.expect(a, &[Vertex], "a vertex")?;
                self.expect(b, &[Vertex], "a vertex")?;
                Ok(())
            }
            Formula::Inc(e, x) => {
                self.mso2 = true;
                self.expect(e, &[Edge], "an edge")?;
                self.expect(x, &[Vertex], "a vertex")?;
                Ok(())
            }
            Formula::Color(c, x) => {
                if !crate::graph::valid_color_name(c) {
                    return Err(Error::UnknownColor(c.clone()));
                }
                self.expect(x, &[Vertex], "a vertex")?;
                Ok(())
            }
            Formula::Member(s, x) => {
                let ss = self.expect(s, &[VertexSet, EdgeSet], "a set")?;
                self.expect(x, &[ss.element()], if ss == VertexSet { "a vertex" } else { "an edge" })?;
                Ok(())
            }
            Formula::Not(a) => self.check(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check(a)?;
                self.check(b)
            }
            Formula::Quant { sort, vars, body, .. } => {
                if vars.is_empty() {
                    return Err(Error::SortMismatch("quantifier without variables".into()));
                }
                if sort.is_mso2() {
                    self.mso2 = true;
                }
                for v in vars {
                    if is_set_name(v) != sort.is_set() {
                        return Err(Error::SortMismatch(format!(
                            "`{v}` cannot name a {sort:?} variable (set variables are uppercase)"
                        )));
                    }
                }
                for (i, v) in vars.iter().enumerate() {
                    if vars[..i].contains(v) {
                        return Err(Error::SortMismatch(format!("`{v}` bound twice in one quantifier")));
                    }
                }
                for v in vars {
                    self.vars.entry(v.clone()).or_default().push(*sort);
                }
                let res = self.check(body);
                for v in vars {
                    self.vars.get_mut(v).map(|s| s.pop());
                }
                res
            }
        }
    }
}

impl FormulaAst {
    /// Validates scoping and sorts. `free` names the free set variable.
    pub fn new(free: Option<&str>, body: Formula) -> Result<Self> {
        let mut scope = Scope {
            vars: HashMap::new(),
            mso2: false,
        };
        if let Some(x) = free {
            if !is_set_name(x) {
                return Err(Error::SortMismatch(format!(
                    "free variable `{x}` must be an uppercase set name"
                )));
            }
            scope.vars.insert(x.to_string(), vec![Sort::VertexSet]);
        }
        scope.check(&body)?;
        Ok(FormulaAst {
            free: free.map(str::to_string),
            body,
            mso2: scope.mso2,
        })
    }

    pub fn free_var(&self) -> Option<&str> {
        self.free.as_deref()
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn into_body(self) -> Formula {
        self.body
    }

    pub fn is_mso2(&self) -> bool {
        self.mso2
    }

    pub fn is_mso1(&self) -> bool {
        !self.mso2
    }

    pub fn has_distinct(&self) -> bool {
        self.body.has_distinct()
    }

    /// Replaces dotted quantifiers by ordinary ones guarded with pairwise
    /// inequalities.
    pub fn desugar(&self) -> FormulaAst {
        if !self.has_distinct() {
            return self.clone();
        }
        let body = self.body.clone().map(&mut |node| match node {
            Formula::Quant {
                kind,
                distinct: true,
                sort,
                vars,
                body,
            } => {
                let mut neqs = Vec::new();
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        neqs.push(build::neq(&vars[i], &vars[j]));
                    }
                }
                let inner = if neqs.is_empty() {
                    *body
                } else {
                    match kind {
                        Quantifier::Exists => {
                            neqs.push(*body);
                            build::and(neqs)
                        }
                        Quantifier::Forall => build::implies(build::and(neqs), *body),
                    }
                };
                Formula::Quant {
                    kind,
                    distinct: false,
                    sort,
                    vars,
                    body: Box::new(inner),
                }
            }
            other => other,
        });
        FormulaAst {
            free: self.free.clone(),
            body,
            mso2: self.mso2,
        }
    }

    pub fn profile(&self) -> QuantifierProfile {
        let mut q_s = 0usize;
        let mut q_v = 0usize;
        self.body.visit(&mut |node| {
            if let Formula::Quant { sort, vars, .. } = node {
                if sort.is_set() {
                    q_s += vars.len();
                } else {
                    q_v += vars.len();
                }
            }
        });
        let scaled = u32::try_from(q_s)
            .ok()
            .and_then(|s| 1usize.checked_shl(s))
            .and_then(|p| p.checked_mul(q_v))
            .unwrap_or(usize::MAX);
        QuantifierProfile {
            q_s,
            q_v,
            q: scaled.max(1),
            formula_length: self.body.size(),
        }
    }

    /// The sentence obtained by reading the free variable as a color.
    pub fn bind_free_as_color(&self, color: &str) -> FormulaAst {
        let Some(free) = self.free.clone() else {
            return self.clone();
        };
        FormulaAst {
            free: None,
            body: replace_free(self.body.clone(), &free, color),
            mso2: self.mso2,
        }
    }
}

fn replace_free(f: Formula, free: &str, color: &str) -> Formula {
    match f {
        Formula::Member(s, x) if s == free => Formula::Color(color.to_string(), x),
        Formula::Not(a) => Formula::Not(Box::new(replace_free(*a, free, color))),
        Formula::And(a, b) => Formula::And(
            Box::new(replace_free(*a, free, color)),
            Box::new(replace_free(*b, free, color)),
        ),
        Formula::Or(a, b) => Formula::Or(
            Box::new(replace_free(*a, free, color)),
            Box::new(replace_free(*b, free, color)),
        ),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(replace_free(*a, free, color)),
            Box::new(replace_free(*b, free, color)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(replace_free(*a, free, color)),
            Box::new(replace_free(*b, free, color)),
        ),
        Formula::Quant {
            kind,
            distinct,
            sort,
            vars,
            body,
        } => {
            // A rebinding of the name shadows the free variable.
            let body = if vars.iter().any(|v| v == free) {
                *body
            } else {
                replace_free(*body, free, color)
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

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Adj(a, b) => write!(f, "E({a}, {b})"),
            Formula::Inc(e, x) => write!(f, "I({e}, {x})"),
            Formula::Color(c, x) | Formula::Member(c, x) => write!(f, "{c}({x})"),
            Formula::Not(a) => match a.as_ref() {
                Formula::Eq(x, y) => write!(f, "{x} != {y}"),
                Formula::Quant { .. } => write!(f, "!({a})"),
                _ if is_atomic(a) => write!(f, "!{a}"),
                _ => write!(f, "!({a})"),
            },
            Formula::And(a, b) => binary(f, a, "&", b),
            Formula::Or(a, b) => binary(f, a, "|", b),
            Formula::Implies(a, b) => binary(f, a, "->", b),
            Formula::Iff(a, b) => binary(f, a, "<->", b),
            Formula::Quant {
                kind,
                distinct,
                sort,
                vars,
                body,
            } => {
                let kw = match kind {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                let d = if *distinct { "d" } else { "" };
                write!(f, "{kw}{d} {}{} ({body})", sort.keyword(), vars.join(", "))
            }
        }
    }
}

fn is_atomic(f: &Formula) -> bool {
    !matches!(
        f,
        Formula::Not(_)
            | Formula::And(..)
            | Formula::Or(..)
            | Formula::Implies(..)
            | Formula::Iff(..)
            | Formula::Quant { .. }
            | Formula::Eq(..)
    )
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula) -> fmt::Result {
    let side = |f: &mut fmt::Formatter<'_>, x: &Formula| {
        if is_atomic(x) || matches!(x, Formula::Not(_)) {
            write!(f, "{x}")
        } else {
            write!(f, "({x})")
        }
    };
    side(f, a)?;
    write!(f, " {op} ")?;
    side(f, b)
}

impl fmt::Display for FormulaAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = &self.free {
            write!(f, "free {x}; ")?;
        }
        write!(f, "{}", self.body)
    }
}
