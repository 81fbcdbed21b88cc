//! Breadth-first search over feasible size-`k` sets: the ground truth every
//! other solver is checked against.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::formula::Evaluator;
use crate::graph::{type_partition, ColoredGraph, ReconfInstance, Rule, TypePartition, VertexSet};

/// Default cap on expanded states.
pub const DEFAULT_BUDGET: usize = 2_000_000;

const INFEASIBLE_MEMO_CAP: usize = 1 << 22;

/// A vertex set stored as a bit vector; used as the visited-set key.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenSet {
    words: SmallVec<[u64; 4]>,
}

impl TokenSet {
    pub fn new() -> Self {
        TokenSet::default()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words.get(v / 64).is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn insert(&mut self, v: usize) {
        let i = v / 64;
        if self.words.len() <= i {
            self.words.resize(i + 1, 0);
        }
        self.words[i] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(w) = self.words.get_mut(v / 64) {
            *w &= !(1 << (v % 64));
        }
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// `self − out + inn`.
    pub fn exchange(&self, out: usize, inn: usize) -> TokenSet {
        let mut t = self.clone();
        t.remove(out);
        t.insert(inn);
        t
    }

    pub fn to_vertex_set(&self) -> VertexSet {
        self.iter().collect()
    }

    pub fn to_bits(&self, n: usize) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        for v in self.iter() {
            b.insert(v);
        }
        b
    }
}

impl FromIterator<usize> for TokenSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut t = TokenSet::new();
        for v in iter {
            t.insert(v);
        }
        t
    }
}

impl From<&VertexSet> for TokenSet {
    fn from(set: &VertexSet) -> Self {
        set.iter().copied().collect()
    }
}

/// Decides whether a vertex set is feasible.
pub trait Feasibility {
    fn is_feasible(&self, set: &TokenSet) -> Result<bool>;
}

impl<F> Feasibility for F
where
    F: Fn(&TokenSet) -> Result<bool>,
{
    fn is_feasible(&self, set: &TokenSet) -> Result<bool> {
        self(set)
    }
}

impl Feasibility for Evaluator {
    fn is_feasible(&self, set: &TokenSet) -> Result<bool> {
        self.eval_bits(set.to_bits(self.n()))
    }
}

/// One token move: `from` leaves the set and `to` enters it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: usize,
    pub to: usize,
}

/// Moves between consecutive sets; fails if two consecutive sets are not
/// one exchange apart.
pub fn moves_of(sets: &[VertexSet]) -> Result<Vec<Move>> {
    sets.windows(2)
        .map(|w| {
            let out: Vec<usize> = w[0].difference(&w[1]).copied().collect();
            let inn: Vec<usize> = w[1].difference(&w[0]).copied().collect();
            match (out.as_slice(), inn.as_slice()) {
                ([from], [to]) => Ok(Move { from: *from, to: *to }),
                _ => Err(Error::Internal(format!("{:?} -> {:?} is not a single exchange", w[0], w[1]))),
            }
        })
        .collect()
}

/// Applies `moves` to `start`, failing on moves that do not fit.
pub fn apply_moves(start: &VertexSet, moves: &[Move]) -> Result<Vec<VertexSet>> {
    let mut cur = start.clone();
    let mut out = vec![cur.clone()];
    for m in moves {
        if !cur.contains(&m.from) || cur.contains(&m.to) {
            return Err(Error::Internal(format!("move {} -> {} does not apply to {cur:?}", m.from, m.to)));
        }
        cur.remove(&m.from);
        cur.insert(m.to);
        out.push(cur.clone());
    }
    Ok(out)
}

/// Checks that `sets` is a reconfiguration sequence from `source` to
/// `target`: every set feasible, consecutive sets one exchange apart, and the
/// exchanged vertices adjacent under the slide rule.
pub fn validate_sequence<P: Feasibility + ?Sized>(
    graph: &ColoredGraph,
    rule: Rule,
    predicate: &P,
    source: &VertexSet,
    target: &VertexSet,
    sets: &[VertexSet],
) -> Result<()> {
    if sets.first() != Some(source) || sets.last() != Some(target) {
        return Err(Error::Internal("sequence endpoints differ from source/target".into()));
    }
    for m in moves_of(sets)? {
        if rule == Rule::Slide && !graph.has_edge(m.from, m.to) {
            return Err(Error::Internal(format!("slide {} -> {} is not along an edge", m.from, m.to)));
        }
    }
    for s in sets {
        if !predicate.is_feasible(&TokenSet::from(s))? {
            return Err(Error::Internal(format!("set {s:?} in the sequence is infeasible")));
        }
    }
    Ok(())
}

/// Result of a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Reachable {
        distance: usize,
        /// `S = sets[0], …, sets[distance] = S'` when requested.
        sequence: Option<Vec<VertexSet>>,
    },
    Unreachable,
    /// The expansion budget ran out.
    Unknown { expanded: usize },
}

impl SearchOutcome {
    pub fn distance(&self) -> Option<usize> {
        match self {
            SearchOutcome::Reachable { distance, .. } => Some(*distance),
            _ => None,
        }
    }
}

/// BFS over feasible sets under the jump or slide rule.
pub struct Oracle<'a> {
    graph: &'a ColoredGraph,
    rule: Rule,
    predicate: Box<dyn Feasibility + 'a>,
    budget: usize,
    symmetry: Option<TypePartition>,
}

impl<'a> Oracle<'a> {
    pub fn new<P: Feasibility + 'a>(graph: &'a ColoredGraph, rule: Rule, predicate: P) -> Self {
        Oracle {
            graph,
            rule,
            predicate: Box::new(predicate),
            budget: DEFAULT_BUDGET,
            symmetry: None,
        }
    }

    /// Oracle using the MSO evaluator for the instance formula.
    pub fn for_instance(inst: &'a ReconfInstance) -> Result<Self> {
        let eval = Evaluator::new(&inst.graph, &inst.formula)?;
        Ok(Oracle::new(&inst.graph, inst.rule, eval))
    }

    /// Replaces the feasibility predicate.
    pub fn with_predicate<P: Feasibility + 'a>(mut self, predicate: P) -> Self {
        self.predicate = Box::new(predicate);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Searches over orbits instead of sets. Every class of `classes` must be
    /// a set of pairwise twins that agree on colors, on the predicate, and on
    /// membership in the source and the target (see [`symmetry_classes`]).
    /// Swapping two members of a class is then an automorphism fixing both
    /// endpoints, so distances are unchanged.
    pub fn with_symmetry(mut self, classes: TypePartition) -> Self {
        self.symmetry = Some(classes);
        self
    }

    /// The member of the orbit of `x` whose tokens sit on the smallest ids of
    /// every class.
    pub fn canonical(&self, x: &TokenSet) -> TokenSet {
        let Some(sym) = &self.symmetry else {
            return x.clone();
        };
        let counts = sym.signature(x.iter().collect::<Vec<_>>().iter());
        let mut out = TokenSet::new();
        for (class, &c) in sym.classes().iter().zip(&counts) {
            for &v in &class[..c] {
                out.insert(v);
            }
        }
        out
    }

    /// Moves between classes of a canonical set; the results are canonical
    /// because the last token of a class leaves and the first free slot of
    /// another class fills.
    fn quotient_candidates(&self, sym: &TypePartition, x: &TokenSet) -> Vec<TokenSet> {
        let counts = sym.signature(x.iter().collect::<Vec<_>>().iter());
        let mut out = Vec::new();
        for (a, ca) in sym.classes().iter().enumerate() {
            if counts[a] == 0 {
                continue;
            }
            let u = ca[counts[a] - 1];
            for (b, cb) in sym.classes().iter().enumerate() {
                if a == b || counts[b] == cb.len() {
                    continue;
                }
                let v = cb[counts[b]];
                if self.rule == Rule::Slide && !self.graph.has_edge(u, v) {
                    continue;
                }
                out.push(x.exchange(u, v));
            }
        }
        out
    }

    pub fn is_feasible(&self, set: &TokenSet) -> Result<bool> {
        self.predicate.is_feasible(set)
    }

    fn candidates(&self, x: &TokenSet) -> Vec<TokenSet> {
        let n = self.graph.n();
        let mut out = Vec::new();
        for u in x.iter() {
            match self.rule {
                Rule::Jump => {
                    for v in (0..n).filter(|&v| !x.contains(v)) {
                        out.push(x.exchange(u, v));
                    }
                }
                Rule::Slide => {
                    for &v in self.graph.neighbors(u) {
                        if !x.contains(v) {
                            out.push(x.exchange(u, v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Feasible sets one move away from `x`, in a fixed order (departing
    /// vertex ascending, then arriving vertex ascending).
    pub fn neighbors(&self, x: &TokenSet) -> Result<Vec<TokenSet>> {
        let mut out = Vec::new();
        for c in self.candidates(x) {
            if self.predicate.is_feasible(&c)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Shortest reconfiguration distance from `source` to `target`.
    pub fn bfs(&self, source: &VertexSet, target: &VertexSet, want_sequence: bool) -> Result<SearchOutcome> {
        if source.len() != target.len() {
            return Err(Error::Precondition(format!(
                "|S| = {} but |S'| = {}",
                source.len(),
                target.len()
            )));
        }
        let s = TokenSet::from(source);
        let t = TokenSet::from(target);
        if let Some(sym) = &self.symmetry {
            let split = sym.classes().iter().any(|class| {
                [source, target].iter().any(|x| {
                    let inside = class.iter().filter(|v| x.contains(v)).count();
                    inside != 0 && inside != class.len()
                })
            });
            if split || sym.sizes().iter().sum::<usize>() != self.graph.n() {
                return Err(Error::Precondition("symmetry classes split the source or the target".into()));
            }
        }
        if let Some(&v) = source.iter().chain(target).find(|&&v| v >= self.graph.n()) {
            return Err(Error::Precondition(format!("vertex {v} out of range")));
        }
        if !self.predicate.is_feasible(&s)? || !self.predicate.is_feasible(&t)? {
            return Err(Error::Precondition("source or target set is infeasible".into()));
        }
        if s == t {
            return Ok(SearchOutcome::Reachable {
                distance: 0,
                sequence: want_sequence.then(|| vec![source.clone()]),
            });
        }
        let mut states: Vec<TokenSet> = vec![s.clone()];
        let mut parent: Vec<u32> = vec![u32::MAX];
        let mut depth: Vec<u32> = vec![0];
        let mut index: HashMap<TokenSet, u32> = HashMap::new();
        index.insert(s, 0);
        let mut infeasible: HashMap<TokenSet, ()> = HashMap::new();
        let mut queue = VecDeque::from([0u32]);
        let mut expanded = 0usize;
        while let Some(i) = queue.pop_front() {
            if expanded >= self.budget {
                return Ok(SearchOutcome::Unknown { expanded });
            }
            expanded += 1;
            let cur = states[i as usize].clone();
            let candidates = match &self.symmetry {
                Some(sym) => self.quotient_candidates(sym, &cur),
                None => self.candidates(&cur),
            };
            for c in candidates {
                if index.contains_key(&c) || infeasible.contains_key(&c) {
                    continue;
                }
                if !self.predicate.is_feasible(&c)? {
                    if infeasible.len() < INFEASIBLE_MEMO_CAP {
                        infeasible.insert(c, ());
                    }
                    continue;
                }
                let j = states.len() as u32;
                let found = c == t;
                match index.entry(c.clone()) {
                    Entry::Occupied(_) => continue,
                    Entry::Vacant(e) => {
                        e.insert(j);
                    }
                }
                states.push(c);
                parent.push(i);
                depth.push(depth[i as usize] + 1);
                if found {
                    let distance = depth[j as usize] as usize;
                    let sequence = if want_sequence {
                        let mut path = Vec::with_capacity(distance + 1);
                        let mut k = j;
                        while k != u32::MAX {
                            path.push(states[k as usize].clone());
                            k = parent[k as usize];
                        }
                        path.reverse();
                        Some(self.unfold(path)?)
                    } else {
                        None
                    };
                    return Ok(SearchOutcome::Reachable { distance, sequence });
                }
                queue.push_back(j);
            }
        }
        Ok(SearchOutcome::Unreachable)
    }

    /// Turns a path of orbit representatives into a path of actual sets: each
    /// step picks a neighbor of the current set lying in the next orbit.
    fn unfold(&self, path: Vec<TokenSet>) -> Result<Vec<VertexSet>> {
        if self.symmetry.is_none() {
            return Ok(path.iter().map(TokenSet::to_vertex_set).collect());
        }
        let mut cur = path[0].clone();
        let mut out = vec![cur.to_vertex_set()];
        for next in &path[1..] {
            let step = self
                .candidates(&cur)
                .into_iter()
                .find(|c| self.canonical(c) == *next)
                .ok_or_else(|| Error::Internal("orbit path cannot be unfolded".into()))?;
            cur = step;
            out.push(cur.to_vertex_set());
        }
        let last = path.last().unwrap();
        if cur != *last {
            return Err(Error::Internal("unfolded path misses the target".into()));
        }
        Ok(out)
    }

    /// All feasible sets reachable from `source`, in BFS order, stopping after
    /// `limit` sets.
    pub fn explore(&self, source: &VertexSet, limit: usize) -> Result<Vec<VertexSet>> {
        let s = TokenSet::from(source);
        if !self.predicate.is_feasible(&s)? {
            return Err(Error::Precondition("source set is infeasible".into()));
        }
        let mut seen: HashMap<TokenSet, ()> = HashMap::new();
        seen.insert(s.clone(), ());
        let mut order = vec![s];
        let mut head = 0;
        while head < order.len() && order.len() < limit {
            let cur = order[head].clone();
            head += 1;
            for c in self.neighbors(&cur)? {
                if order.len() >= limit {
                    break;
                }
                if seen.insert(c.clone(), ()).is_none() {
                    order.push(c);
                }
            }
        }
        Ok(order.iter().map(TokenSet::to_vertex_set).collect())
    }
}

/// Classes of interchangeable vertices for [`Oracle::with_symmetry`]:
/// vertex types after installing the source and the target as colors.
pub fn symmetry_classes(graph: &ColoredGraph, source: &VertexSet, target: &VertexSet) -> Result<TypePartition> {
    Ok(type_partition(&graph.add_solution_colors(source, target)?))
}

/// Oracle distance for an instance, using the MSO evaluator.
pub fn solve_instance(inst: &ReconfInstance, budget: usize, want_sequence: bool) -> Result<SearchOutcome> {
    Oracle::for_instance(inst)?
        .with_budget(budget)
        .bfs(&inst.source, &inst.target, want_sequence)
}
