use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::lampis::lampis_reduce;
use super::shape::{representative_set, shape_of_set, Shape, ShapeSpace};
use crate::circulation::{build_network, min_cost_circulation, realize_moves};
use crate::error::{Error, Result};
use crate::formula::{Evaluator, FormulaAst};
use crate::graph::{type_partition, ColoredGraph, ReconfInstance, Rule, TypePartition, VertexSet};
use crate::oracle::{apply_moves, Move};

/// Color carrying the representative set during feasibility checks.
pub const REP_COLOR: &str = "_X";

#[derive(Clone, Debug)]
pub struct NdConfig {
    /// Upper bound on the number of candidate shapes.
    pub shape_cap: u128,
    /// Upper bound on the number of complete shape paths priced.
    pub path_cap: usize,
    /// Re-evaluate the formula on every set of a realized sequence.
    pub verify: bool,
}

impl Default for NdConfig {
    fn default() -> Self {
        NdConfig { shape_cap: 1_000_000, path_cap: 1_000_000, verify: true }
    }
}

/// The size-k shape graph: k-feasible shapes and their adjacency.
#[derive(Clone, Debug)]
pub struct ShapeGraph {
    pub k: usize,
    pub shapes: Vec<Shape>,
    pub adj: Vec<Vec<usize>>,
    /// Number of candidate shapes enumerated before filtering.
    pub candidates: u128,
    index: HashMap<Shape, usize>,
}

impl ShapeGraph {
    pub fn index_of(&self, shape: &Shape) -> Option<usize> {
        self.index.get(shape).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Hop distances from `from`; `usize::MAX` where unreachable.
    pub fn distances(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.shapes.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// One line per node, then one line per edge.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.shapes {
            let _ = writeln!(out, "shape {s} feasible");
        }
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs.iter().filter(|&&v| v > u) {
                let _ = writeln!(out, "edge {} {}", self.shapes[u], self.shapes[v]);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdShortest {
    /// `None` when the target is unreachable.
    pub distance: Option<usize>,
    pub moves: Vec<Move>,
    pub sequence: Vec<VertexSet>,
    /// False when the path cap cut the search short.
    pub optimal: bool,
    pub paths: usize,
}

/// Token-jumping solver working on shapes of the type partition of the
/// graph with the source and target installed as colors.
pub struct NdSolver<'a> {
    inst: &'a ReconfInstance,
    graph: ColoredGraph,
    partition: TypePartition,
    space: ShapeSpace,
    sentence: FormulaAst,
    config: NdConfig,
    cache: RefCell<HashMap<Shape, bool>>,
}

impl<'a> NdSolver<'a> {
    pub fn new(inst: &'a ReconfInstance) -> Result<Self> {
        Self::with_config(inst, NdConfig::default())
    }

    pub fn with_config(inst: &'a ReconfInstance, config: NdConfig) -> Result<Self> {
        if inst.formula.is_mso2() {
            return Err(Error::NotMso1("the shape solver needs an MSO1 formula".into()));
        }
        let graph = inst.graph.add_solution_colors(&inst.source, &inst.target)?;
        let partition = type_partition(&graph);
        let q = inst.formula.profile().q;
        let space = ShapeSpace::from_partition(&partition, q);
        let sentence = inst.formula.bind_free_as_color(REP_COLOR);
        Ok(NdSolver { inst, graph, partition, space, sentence, config, cache: RefCell::new(HashMap::new()) })
    }

    pub fn partition(&self) -> &TypePartition {
        &self.partition
    }

    pub fn space(&self) -> &ShapeSpace {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.inst.k()
    }

    pub fn shape_of(&self, x: &VertexSet) -> Shape {
        shape_of_set(&self.partition, self.space.q(), x)
    }

    pub fn representative(&self, shape: &Shape) -> Option<VertexSet> {
        representative_set(&self.partition, &self.space, shape, self.k())
    }

    /// Whether some feasible size-k set has this shape. The formula is
    /// evaluated on one representative, inside a copy of the graph where the
    /// representative is a color and every type is shrunk to `q` members.
    pub fn is_k_feasible(&self, shape: &Shape) -> Result<bool> {
        if let Some(&known) = self.cache.borrow().get(shape) {
            return Ok(known);
        }
        let verdict = match self.representative(shape) {
            None => false,
            Some(rep) => {
                let mut g = self.graph.clone();
                g.add_color(REP_COLOR, rep.iter().copied())?;
                let (small, _) = lampis_reduce(&g, self.space.q());
                Evaluator::new(&small, &self.sentence)?.eval(&VertexSet::new())?
            }
        };
        self.cache.borrow_mut().insert(shape.clone(), verdict);
        Ok(verdict)
    }

    pub fn build_shape_graph(&self) -> Result<ShapeGraph> {
        let candidates = self.space.candidate_count();
        if candidates > self.config.shape_cap {
            return Err(Error::BudgetExceeded(format!(
                "{candidates} candidate shapes exceed the cap of {}",
                self.config.shape_cap
            )));
        }
        let k = self.k();
        let options: Vec<_> = (0..self.space.types()).map(|i| self.space.entries_for(i)).collect();
        let mut shapes = Vec::new();
        let mut pick = vec![0usize; options.len()];
        'outer: loop {
            let shape = Shape(pick.iter().enumerate().map(|(i, &p)| options[i][p]).collect());
            if self.space.has_set_of_size(&shape, k) && self.is_k_feasible(&shape)? {
                shapes.push(shape);
            }
            for i in (0..pick.len()).rev() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    continue 'outer;
                }
                pick[i] = 0;
            }
            break;
        }
        let index: HashMap<Shape, usize> = shapes.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut adj = vec![Vec::new(); shapes.len()];
        for (u, s) in shapes.iter().enumerate() {
            for (i, j) in index_pairs(options.len()) {
                for &ei in &options[i] {
                    if ei == s.0[i] {
                        continue;
                    }
                    let second: &[_] = if j == i { &[ei] } else { &options[j] };
                    for &ej in second {
                        if j != i && ej == s.0[j] {
                            continue;
                        }
                        let mut t = s.clone();
                        t.0[i] = ei;
                        t.0[j] = ej;
                        if let Some(&v) = index.get(&t) {
                            if v > u && self.space.adjacent(s, &t, k) {
                                adj[u].push(v);
                                adj[v].push(u);
                            }
                        }
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ShapeGraph { k, shapes, adj, candidates, index })
    }

    fn require_jump(&self) -> Result<()> {
        if self.inst.rule != Rule::Jump {
            return Err(Error::Unsupported("the shape solver handles token jumping only".into()));
        }
        Ok(())
    }

    fn endpoints(&self, sg: &ShapeGraph) -> Result<(usize, usize)> {
        let find = |x: &VertexSet| {
            sg.index_of(&self.shape_of(x))
                .ok_or_else(|| Error::Internal("endpoint shape missing from the shape graph".into()))
        };
        Ok((find(&self.inst.source)?, find(&self.inst.target)?))
    }

    pub fn solve_reachability(&self) -> Result<bool> {
        self.require_jump()?;
        if self.inst.source == self.inst.target {
            return Ok(true);
        }
        let sg = self.build_shape_graph()?;
        let (s, t) = self.endpoints(&sg)?;
        Ok(sg.distances(s)[t] != usize::MAX)
    }

    /// Cost of moving along a path of shape indices, if it can be priced.
    fn price(&self, sg: &ShapeGraph, path: &[usize]) -> Result<Option<i64>> {
        let shapes: Vec<Shape> = path.iter().map(|&i| sg.shapes[i].clone()).collect();
        let net = build_network(&shapes, &self.space, self.k())?;
        Ok(min_cost_circulation(&net.network)?.map(|c| c.cost))
    }

    pub fn solve_shortest(&self) -> Result<NdShortest> {
        self.require_jump()?;
        let (source, target) = (&self.inst.source, &self.inst.target);
        if source == target {
            return Ok(NdShortest {
                distance: Some(0),
                moves: Vec::new(),
                sequence: vec![source.clone()],
                optimal: true,
                paths: 0,
            });
        }
        let sg = self.build_shape_graph()?;
        let (s, t) = self.endpoints(&sg)?;
        let to_target = sg.distances(t);
        if to_target[s] == usize::MAX {
            return Ok(NdShortest { distance: None, moves: Vec::new(), sequence: Vec::new(), optimal: true, paths: 0 });
        }

        let mut seed = vec![s];
        while *seed.last().unwrap() != t {
            let u = *seed.last().unwrap();
            let next = sg.adj[u].iter().copied().find(|&v| to_target[v] + 1 == to_target[u]).unwrap();
            seed.push(next);
        }
        let mut best: Option<(i64, Vec<usize>)> = self.price(&sg, &seed)?.map(|c| (c, seed));

        let mut paths = 0usize;
        let mut optimal = true;
        let mut on_path = vec![false; sg.shapes.len()];
        let mut path = vec![s];
        on_path[s] = true;
        let mut stack: Vec<usize> = vec![0];
        while let Some(cursor) = stack.last_mut() {
            let u = *path.last().unwrap();
            let edges = path.len() - 1;
            if u == t {
                paths += 1;
                if let Some(c) = self.price(&sg, &path)? {
                    if best.as_ref().map_or(true, |(b, _)| c < *b) {
                        best = Some((c, path.clone()));
                    }
                }
                if paths >= self.config.path_cap {
                    optimal = false;
                    break;
                }
                stack.pop();
                on_path[path.pop().unwrap()] = false;
                continue;
            }
            let limit = best.as_ref().map_or(i64::MAX, |(b, _)| *b);
            let mut advanced = false;
            while *cursor < sg.adj[u].len() {
                let v = sg.adj[u][*cursor];
                *cursor += 1;
                if on_path[v] || to_target[v] == usize::MAX {
                    continue;
                }
                if (edges + 1 + to_target[v]) as i64 >= limit {
                    continue;
                }
                on_path[v] = true;
                path.push(v);
                advanced = true;
                break;
            }
            if advanced {
                stack.push(0);
            } else {
                stack.pop();
                on_path[path.pop().unwrap()] = false;
            }
        }

        let Some((cost, best_path)) = best else {
            return Err(Error::Internal("no shape path could be priced".into()));
        };
        let shapes: Vec<Shape> = best_path.iter().map(|&i| sg.shapes[i].clone()).collect();
        let net = build_network(&shapes, &self.space, self.k())?;
        let circ = min_cost_circulation(&net.network)?
            .ok_or_else(|| Error::Internal("best path lost its circulation".into()))?;
        let moves = realize_moves(&net, &circ, &shapes, &self.space, &self.partition, source, target, self.k())?;
        if moves.len() as i64 != cost {
            return Err(Error::Internal(format!("realized {} moves for cost {cost}", moves.len())));
        }
        let sequence = apply_moves(source, &moves)?;
        if self.config.verify {
            let eval = Evaluator::new(&self.inst.graph, &self.inst.formula)?;
            for (i, x) in sequence.iter().enumerate() {
                if !eval.eval(x)? {
                    return Err(Error::Internal(format!("realized set {i} is infeasible")));
                }
            }
        }
        Ok(NdShortest { distance: Some(moves.len()), moves, sequence, optimal, paths })
    }
}

/// Pairs `(i, j)` with `i ≤ j`; `(i, i)` stands for a single changed index.
fn index_pairs(t: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..t).flat_map(move |i| (i..t).map(move |j| (i, j)))
}

pub fn solve_reachability(inst: &ReconfInstance) -> Result<bool> {
    NdSolver::new(inst)?.solve_reachability()
}

pub fn solve_shortest(inst: &ReconfInstance) -> Result<NdShortest> {
    NdSolver::new(inst)?.solve_shortest()
}
