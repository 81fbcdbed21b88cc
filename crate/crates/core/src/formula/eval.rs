//! Backtracking model checker.
//!
//! The formula is compiled into an arena of nodes over numbered variable
//! slots. Runs of quantifiers of the same sort become one block whose body is
//! split into conjuncts; each conjunct is tested as soon as the last block
//! variable it mentions is assigned. Blocks whose conjunct multiset is
//! invariant under permuting the block variables only enumerate
//! nondecreasing tuples, and blocks with at most three free element slots
//! are memoized for the duration of one evaluation.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use smallvec::SmallVec;

use super::ast::{Formula, FormulaAst, Quantifier, Sort};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, VertexSet};

type NodeId = u32;
type Slot = u32;
type Slots = SmallVec<[Slot; 4]>;

/// Default cap on the number of quantifier assignments per evaluation.
pub const DEFAULT_EVAL_BUDGET: u64 = 2_000_000_000;

const MEMO_SLOTS: usize = 3;
const FREE_SET_SLOT: Slot = 0;

#[derive(Clone, Debug)]
struct Block {
    sort: Sort,
    slots: Vec<Slot>,
    pre: Vec<NodeId>,
    levels: Vec<Vec<NodeId>>,
    symmetric: bool,
    /// Free element slots used as memo key, if the block is memoizable.
    memo_key: Option<Slots>,
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Eq(Slot, Slot),
    Adj(Slot, Slot),
    Inc(Slot, Slot),
    Color(usize, Slot),
    Member(Slot, Slot),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Iff(NodeId, NodeId),
    Exists(Box<Block>),
}

#[derive(Clone, Debug, Default)]
struct FreeSlots {
    elems: Slots,
    sets: Slots,
}

impl FreeSlots {
    fn merge(&mut self, other: &FreeSlots) {
        for &s in &other.elems {
            if !self.elems.contains(&s) {
                self.elems.push(s);
            }
        }
        for &s in &other.sets {
            if !self.sets.contains(&s) {
                self.sets.push(s);
            }
        }
    }
}

struct Compiler<'a> {
    graph: &'a ColoredGraph,
    nodes: Vec<Node>,
    free: Vec<FreeSlots>,
    quantified: Vec<bool>,
    scope: HashMap<String, Vec<(Sort, Slot)>>,
    colors: Vec<String>,
    has_free: bool,
    elem_slots: u32,
    set_slots: u32,
}

fn conjuncts<'f>(f: &'f Formula, pol: bool, out: &mut Vec<(&'f Formula, bool)>) {
    match (f, pol) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            conjuncts(a, pol, out);
            conjuncts(b, pol, out);
        }
        (Formula::Implies(a, b), false) => {
            conjuncts(a, true, out);
            conjuncts(b, false, out);
        }
        (Formula::Not(a), p) => conjuncts(a, !p, out),
        (Formula::True, true) | (Formula::False, false) => {}
        _ => out.push((f, pol)),
    }
}

fn disjuncts<'f>(f: &'f Formula, pol: bool, out: &mut Vec<(&'f Formula, bool)>) {
    match (f, pol) {
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            disjuncts(a, pol, out);
            disjuncts(b, pol, out);
        }
        (Formula::Implies(a, b), true) => {
            disjuncts(a, false, out);
            disjuncts(b, true, out);
        }
        (Formula::Not(a), p) => disjuncts(a, !p, out),
        (Formula::False, true) | (Formula::True, false) => {}
        _ => out.push((f, pol)),
    }
}

impl<'a> Compiler<'a> {
    fn push(&mut self, node: Node, free: FreeSlots, quantified: bool) -> NodeId {
        self.nodes.push(node);
        self.free.push(free);
        self.quantified.push(quantified);
        (self.nodes.len() - 1) as NodeId
    }

    fn slot(&self, name: &str) -> Result<(Sort, Slot)> {
        self.scope
            .get(name)
            .and_then(|v| v.last().copied())
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    fn elem_atom(&mut self, node: Node, vars: &[&str]) -> Result<NodeId> {
        let mut free = FreeSlots::default();
        for v in vars {
            let (_, s) = self.slot(v)?;
            if !free.elems.contains(&s) {
                free.elems.push(s);
            }
        }
        Ok(self.push(node, free, false))
    }

    fn negate(&mut self, id: NodeId, pol: bool) -> NodeId {
        if pol {
            return id;
        }
        if let Node::Const(b) = self.nodes[id as usize] {
            return self.push(Node::Const(!b), FreeSlots::default(), false);
        }
        let free = self.free[id as usize].clone();
        let q = self.quantified[id as usize];
        self.push(Node::Not(id), free, q)
    }

    fn junction(&mut self, parts: Vec<(&Formula, bool)>, conj: bool) -> Result<NodeId> {
        let mut kids = Vec::with_capacity(parts.len());
        for (f, p) in parts {
            let id = self.compile(f, p)?;
            match (&self.nodes[id as usize], conj) {
                (Node::Const(true), true) | (Node::Const(false), false) => continue,
                (Node::Const(false), true) => return Ok(self.push(Node::Const(false), FreeSlots::default(), false)),
                (Node::Const(true), false) => return Ok(self.push(Node::Const(true), FreeSlots::default(), false)),
                _ => kids.push(id),
            }
        }
        if kids.len() == 1 {
            return Ok(kids[0]);
        }
        if kids.is_empty() {
            return Ok(self.push(Node::Const(conj), FreeSlots::default(), false));
        }
        // Cheap children first; the sort is stable so source order breaks ties.
        kids.sort_by_key(|&k| self.quantified[k as usize]);
        let mut free = FreeSlots::default();
        let mut q = false;
        for &k in &kids {
            free.merge(&self.free[k as usize]);
            q |= self.quantified[k as usize];
        }
        let node = if conj { Node::And(kids) } else { Node::Or(kids) };
        Ok(self.push(node, free, q))
    }

    fn compile(&mut self, f: &Formula, pol: bool) -> Result<NodeId> {
        let id = match f {
            Formula::True => self.push(Node::Const(pol), FreeSlots::default(), false),
            Formula::False => self.push(Node::Const(!pol), FreeSlots::default(), false),
            Formula::Eq(a, b) => {
                let (sa, x) = self.slot(a)?;
                let (sb, y) = self.slot(b)?;
                if sa != sb {
                    return Err(Error::SortMismatch(format!("`{a} = {b}`")));
                }
                let id = self.elem_atom(Node::Eq(x, y), &[a, b])?;
                self.negate(id, pol)
            }
            Formula::Adj(a, b) => {
                let (_, x) = self.slot(a)?;
                let (_, y) = self.slot(b)?;
                let id = self.elem_atom(Node::Adj(x, y), &[a, b])?;
                self.negate(id, pol)
            }
            Formula::Inc(e, v) => {
                let (_, x) = self.slot(e)?;
                let (_, y) = self.slot(v)?;
                let id = self.elem_atom(Node::Inc(x, y), &[e, v])?;
                self.negate(id, pol)
            }
            Formula::Color(c, v) => {
                if !self.graph.has_color(c) {
                    return Err(Error::UnknownColor(c.clone()));
                }
                let ci = match self.colors.iter().position(|x| x == c) {
                    Some(i) => i,
                    None => {
                        self.colors.push(c.clone());
                        self.colors.len() - 1
                    }
                };
                let (_, x) = self.slot(v)?;
                let id = self.elem_atom(Node::Color(ci, x), &[v])?;
                self.negate(id, pol)
            }
            Formula::Member(s, v) => {
                let (_, set) = self.slot(s)?;
                let (_, x) = self.slot(v)?;
                let mut free = FreeSlots::default();
                free.elems.push(x);
                free.sets.push(set);
                let id = self.push(Node::Member(set, x), free, false);
                self.negate(id, pol)
            }
            Formula::Not(a) => self.compile(a, !pol)?,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) => {
                let mut parts = Vec::new();
                let conj = matches!((f, pol), (Formula::And(..), true) | (Formula::Or(..), false) | (Formula::Implies(..), false));
                if conj {
                    conjuncts(f, pol, &mut parts);
                } else {
                    disjuncts(f, pol, &mut parts);
                }
                self.junction(parts, conj)?
            }
            Formula::Iff(a, b) => {
                let x = self.compile(a, true)?;
                let y = self.compile(b, true)?;
                let mut free = self.free[x as usize].clone();
                free.merge(&self.free[y as usize]);
                let q = self.quantified[x as usize] || self.quantified[y as usize];
                let id = self.push(Node::Iff(x, y), free, q);
                self.negate(id, pol)
            }
            Formula::Quant { kind, sort, .. } => {
                // ∀ is compiled as ¬∃¬.
                let existential = (*kind == Quantifier::Exists) == pol;
                let body_pol = *kind == Quantifier::Exists;
                let block = self.block(f, *sort, body_pol)?;
                self.negate(block, existential)
            }
        };
        Ok(id)
    }

    /// Compiles `∃ vars body` (or `∃ vars ¬body` when `!body_pol`), merging
    /// directly nested quantifiers of the same sort and effective kind.
    fn block(&mut self, f: &Formula, sort: Sort, body_pol: bool) -> Result<NodeId> {
        let mut names: Vec<&str> = Vec::new();
        let mut cur = f;
        let want = if body_pol { Quantifier::Exists } else { Quantifier::Forall };
        loop {
            match cur {
                Formula::Quant {
                    kind,
                    sort: s,
                    vars,
                    body,
                    distinct,
                } if *kind == want && *s == sort && (!distinct || names.is_empty()) => {
                    if *distinct {
                        return Err(Error::Internal("dotted quantifier reached the evaluator".into()));
                    }
                    names.extend(vars.iter().map(String::as_str));
                    cur = body;
                }
                _ => break,
            }
        }
        let mut slots = Vec::with_capacity(names.len());
        for name in &names {
            let slot = if sort.is_set() {
                self.set_slots += 1;
                self.set_slots - 1
            } else {
                self.elem_slots += 1;
                self.elem_slots - 1
            };
            self.scope.entry(name.to_string()).or_default().push((sort, slot));
            slots.push(slot);
        }
        let mut parts = Vec::new();
        conjuncts(cur, body_pol, &mut parts);
        let mut kids = Vec::new();
        let mut result = Ok(());
        for (g, p) in parts {
            match self.compile(g, p) {
                Ok(id) => kids.push(id),
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        for name in &names {
            self.scope.get_mut(*name).map(|v| v.pop());
        }
        result?;

        if kids.iter().any(|&k| matches!(self.nodes[k as usize], Node::Const(false))) {
            return Ok(self.push(Node::Const(false), FreeSlots::default(), false));
        }
        kids.retain(|&k| !matches!(self.nodes[k as usize], Node::Const(true)));

        let mut free = FreeSlots::default();
        for &k in &kids {
            free.merge(&self.free[k as usize]);
        }
        let bound = |s: &Slot| slots.contains(s);
        if sort.is_set() {
            free.sets.retain(|s| !bound(s));
        } else {
            free.elems.retain(|s| !bound(s));
        }

        let mut pre = Vec::new();
        let mut levels = vec![Vec::new(); slots.len()];
        for &k in &kids {
            let fs = &self.free[k as usize];
            let mentioned = if sort.is_set() { &fs.sets } else { &fs.elems };
            let level = slots.iter().rposition(|s| mentioned.contains(s));
            match level {
                Some(l) => levels[l].push(k),
                None => pre.push(k),
            }
        }
        for l in levels.iter_mut() {
            l.sort_by_key(|&k| self.quantified[k as usize]);
        }
        pre.sort_by_key(|&k| self.quantified[k as usize]);

        let symmetric = slots.len() > 1 && self.is_symmetric(&kids, &slots, sort);
        let memo_key = if free.elems.len() <= MEMO_SLOTS
            && free.sets.iter().all(|&s| s == FREE_SET_SLOT && self.has_free)
        {
            let mut key = free.elems.clone();
            key.sort_unstable();
            Some(key)
        } else {
            None
        };
        let block = Block {
            sort,
            slots,
            pre,
            levels,
            symmetric,
            memo_key,
        };
        Ok(self.push(Node::Exists(Box::new(block)), free, true))
    }

    fn is_symmetric(&self, kids: &[NodeId], slots: &[Slot], sort: Sort) -> bool {
        let signature = |rename: &HashMap<Slot, Slot>| {
            let mut v: Vec<String> = kids.iter().map(|&k| self.canon(k, rename, sort.is_set())).collect();
            v.sort();
            v
        };
        let base = signature(&HashMap::new());
        (0..slots.len() - 1).all(|i| {
            let rename: HashMap<Slot, Slot> = [(slots[i], slots[i + 1]), (slots[i + 1], slots[i])].into();
            signature(&rename) == base
        })
    }

    /// Canonical text of a node: commutative operators are normalized and
    /// variables bound inside the node are named by binding position, so
    /// alpha-equivalent subformulas print alike.
    fn canon(&self, id: NodeId, rename: &HashMap<Slot, Slot>, set_sort: bool) -> String {
        self.canon_in(id, rename, set_sort, &mut Vec::new())
    }

    fn canon_in(&self, id: NodeId, rename: &HashMap<Slot, Slot>, set_sort: bool, bound: &mut Vec<(bool, Slot)>) -> String {
        let name = |s: Slot, is_set: bool, bound: &[(bool, Slot)]| match bound.iter().rposition(|&b| b == (is_set, s)) {
            Some(pos) => format!("b{pos}"),
            None if is_set == set_sort => format!("f{}", rename.get(&s).unwrap_or(&s)),
            None => format!("f{s}"),
        };
        let e = |s: Slot, bound: &[(bool, Slot)]| name(s, false, bound);
        let pair = |a: String, b: String| if a <= b { format!("{a},{b}") } else { format!("{b},{a}") };
        match &self.nodes[id as usize] {
            Node::Const(b) => format!("{b}"),
            Node::Eq(a, b) => format!("eq{}", pair(e(*a, bound), e(*b, bound))),
            Node::Adj(a, b) => format!("adj{}", pair(e(*a, bound), e(*b, bound))),
            Node::Inc(a, b) => format!("inc{},{}", e(*a, bound), e(*b, bound)),
            Node::Color(c, x) => format!("c{c}:{}", e(*x, bound)),
            Node::Member(st, x) => format!("m{}:{}", name(*st, true, bound), e(*x, bound)),
            Node::Not(a) => format!("!{}", self.canon_in(*a, rename, set_sort, bound)),
            Node::And(kids) | Node::Or(kids) => {
                let mut parts: Vec<String> = kids.iter().map(|&k| self.canon_in(k, rename, set_sort, bound)).collect();
                parts.sort();
                let op = if matches!(self.nodes[id as usize], Node::And(_)) { "&" } else { "|" };
                format!("{op}[{}]", parts.join(";"))
            }
            Node::Iff(a, b) => {
                let mut parts = [self.canon_in(*a, rename, set_sort, bound), self.canon_in(*b, rename, set_sort, bound)];
                parts.sort();
                format!("iff[{};{}]", parts[0], parts[1])
            }
            Node::Exists(block) => {
                let depth = bound.len();
                bound.extend(block.slots.iter().map(|&s| (block.sort.is_set(), s)));
                let mut parts: Vec<String> = block
                    .pre
                    .iter()
                    .chain(block.levels.iter().flatten())
                    .map(|&k| self.canon_in(k, rename, set_sort, bound))
                    .collect();
                bound.truncate(depth);
                parts.sort();
                format!("ex{:?}{}[{}]", block.sort, block.slots.len(), parts.join(";"))
            }
        }
    }
}

/// A formula compiled against one graph, ready to be evaluated for many
/// assignments of the free set variable.
#[derive(Clone, Debug)]
pub struct Evaluator {
    n: usize,
    adj: Vec<FixedBitSet>,
    edges: Vec<(usize, usize)>,
    colors: Vec<FixedBitSet>,
    nodes: Vec<Node>,
    root: NodeId,
    elem_slots: usize,
    set_slots: usize,
    has_free: bool,
    budget: u64,
}

struct State {
    elems: Vec<usize>,
    sets: Vec<FixedBitSet>,
    memo: HashMap<(NodeId, [u32; MEMO_SLOTS]), bool>,
    expansions: u64,
}

impl Evaluator {
    /// Compiles `ast` (desugared on the fly) for `graph`. Fails on colors the
    /// graph does not define.
    pub fn new(graph: &ColoredGraph, ast: &FormulaAst) -> Result<Self> {
        let ast = ast.desugar();
        let mut c = Compiler {
            graph,
            nodes: Vec::new(),
            free: Vec::new(),
            quantified: Vec::new(),
            scope: HashMap::new(),
            colors: Vec::new(),
            has_free: ast.free_var().is_some(),
            elem_slots: 0,
            set_slots: 0,
        };
        let has_free = ast.free_var().is_some();
        if let Some(x) = ast.free_var() {
            c.scope.insert(x.to_string(), vec![(Sort::VertexSet, FREE_SET_SLOT)]);
            c.set_slots = 1;
        }
        let root = c.compile(ast.body(), true)?;
        let colors = c
            .colors
            .iter()
            .map(|name| graph.color(name).cloned().expect("checked during compilation"))
            .collect();
        let n = graph.n();
        Ok(Evaluator {
            n,
            adj: (0..n).map(|v| graph.adjacency(v).clone()).collect(),
            edges: if ast.is_mso2() { graph.edges() } else { Vec::new() },
            colors,
            elem_slots: c.elem_slots as usize,
            set_slots: c.set_slots as usize,
            nodes: c.nodes,
            root,
            has_free,
            budget: DEFAULT_EVAL_BUDGET,
        })
    }

    /// Sets the cap on quantifier assignments tried per evaluation.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Decides `G ⊨ φ(X)`. For sentences `x` is ignored.
    pub fn eval(&self, x: &VertexSet) -> Result<bool> {
        let mut bits = FixedBitSet::with_capacity(self.n);
        for &v in x {
            if v >= self.n {
                return Err(Error::Precondition(format!("vertex {v} out of range (n = {})", self.n)));
            }
            bits.insert(v);
        }
        self.eval_bits(bits)
    }

    /// Like [`Evaluator::eval`] with the assignment given as a bit set.
    pub fn eval_bits(&self, x: FixedBitSet) -> Result<bool> {
        let mut sets = vec![FixedBitSet::new(); self.set_slots];
        if self.has_free {
            sets[FREE_SET_SLOT as usize] = x;
        }
        let mut st = State {
            elems: vec![0; self.elem_slots],
            sets,
            memo: HashMap::new(),
            expansions: 0,
        };
        self.node(self.root, &mut st)
    }

    fn node(&self, id: NodeId, st: &mut State) -> Result<bool> {
        Ok(match &self.nodes[id as usize] {
            Node::Const(b) => *b,
            Node::Eq(a, b) => st.elems[*a as usize] == st.elems[*b as usize],
            Node::Adj(a, b) => self.adj[st.elems[*a as usize]].contains(st.elems[*b as usize]),
            Node::Inc(e, x) => {
                let (u, v) = self.edges[st.elems[*e as usize]];
                let x = st.elems[*x as usize];
                u == x || v == x
            }
            Node::Color(c, x) => self.colors[*c].contains(st.elems[*x as usize]),
            Node::Member(s, x) => st.sets[*s as usize].contains(st.elems[*x as usize]),
            Node::Not(a) => !self.node(*a, st)?,
            Node::And(kids) => {
                for &k in kids {
                    if !self.node(k, st)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(kids) => {
                for &k in kids {
                    if self.node(k, st)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Iff(a, b) => self.node(*a, st)? == self.node(*b, st)?,
            Node::Exists(block) => self.exists(id, block, st)?,
        })
    }

    fn exists(&self, id: NodeId, block: &Block, st: &mut State) -> Result<bool> {
        let key = block.memo_key.as_ref().map(|slots| {
            let mut k = [u32::MAX; MEMO_SLOTS];
            for (i, &s) in slots.iter().enumerate() {
                k[i] = st.elems[s as usize] as u32;
            }
            (id, k)
        });
        if let Some(k) = &key {
            if let Some(&v) = st.memo.get(k) {
                return Ok(v);
            }
        }
        let mut res = true;
        for &p in &block.pre {
            if !self.node(p, st)? {
                res = false;
                break;
            }
        }
        if res {
            res = self.assign(block, 0, 0, st)?;
        }
        if let Some(k) = key {
            st.memo.insert(k, res);
        }
        Ok(res)
    }

    fn domain(&self, sort: Sort) -> Result<u64> {
        Ok(match sort {
            Sort::Vertex => self.n as u64,
            Sort::Edge => self.edges.len() as u64,
            Sort::VertexSet | Sort::EdgeSet => {
                let base = if sort == Sort::VertexSet { self.n } else { self.edges.len() };
                if base > 40 {
                    return Err(Error::BudgetExceeded(format!(
                        "set quantifier over {base} elements"
                    )));
                }
                1u64 << base
            }
        })
    }

    fn assign(&self, block: &Block, level: usize, start: u64, st: &mut State) -> Result<bool> {
        if level == block.slots.len() {
            return Ok(true);
        }
        let slot = block.slots[level] as usize;
        let size = self.domain(block.sort)?;
        let width = if block.sort == Sort::VertexSet { self.n } else { self.edges.len() };
        for value in start..size {
            st.expansions += 1;
            if st.expansions > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} quantifier assignments",
                    self.budget
                )));
            }
            if block.sort.is_set() {
                let mut bits = FixedBitSet::with_capacity(width);
                for b in 0..width {
                    if value >> b & 1 == 1 {
                        bits.insert(b);
                    }
                }
                st.sets[slot] = bits;
            } else {
                st.elems[slot] = value as usize;
            }
            let mut ok = true;
            for &k in &block.levels[level] {
                if !self.node(k, st)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                let next = if block.symmetric { value } else { 0 };
                if self.assign(block, level + 1, next, st)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Decides `G ⊨ φ(X)`.
pub fn evaluate(graph: &ColoredGraph, ast: &FormulaAst, x: &VertexSet) -> Result<bool> {
    Evaluator::new(graph, ast)?.eval(x)
}
