use anyhow::{bail, Result};
use msor::graph::type_partition;
use msor::ndsolver::{NdConfig, NdSolver};
use msor::oracle::{symmetry_classes, Oracle, SearchOutcome};
use msor::reductions::DirectChecker;
use msor::tdsolver::solve_via_kernel;
use msor::{Error, ReconfInstance, Rule, VertexSet};

use crate::{Algo, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes {
        distance: Option<usize>,
        sequence: Option<Vec<VertexSet>>,
    },
    No,
    Unknown(String),
}

impl Answer {
    fn from_outcome(outcome: SearchOutcome) -> Self {
        match outcome {
            SearchOutcome::Reachable { distance, sequence } => Answer::Yes { distance: Some(distance), sequence },
            SearchOutcome::Unreachable => Answer::No,
            SearchOutcome::Unknown { expanded } => Answer::Unknown(format!("search stopped after {expanded} sets")),
        }
    }

    fn reachable(&self) -> Option<bool> {
        match self {
            Answer::Yes { .. } => Some(true),
            Answer::No => Some(false),
            Answer::Unknown(_) => None,
        }
    }
}

/// A loaded instance. Forests built from an exact cover instance carry the
/// direct checker, which replaces the evaluator in the BFS.
pub struct Problem {
    pub inst: ReconfInstance,
    pub checker: Option<DirectChecker>,
}

/// BFS over orbits of the twin classes that fix `S` and `S'`.
pub fn bfs(problem: &Problem, budget: usize, want_sequence: bool) -> Result<SearchOutcome> {
    let inst = &problem.inst;
    let classes = symmetry_classes(&inst.graph, &inst.source, &inst.target)?;
    let oracle = match &problem.checker {
        Some(c) => Oracle::new(&inst.graph, inst.rule, c.clone()),
        None => Oracle::for_instance(inst)?,
    };
    Ok(oracle.with_budget(budget).with_symmetry(classes).bfs(&inst.source, &inst.target, want_sequence)?)
}

/// Number of vertex types once `S` and `S'` are installed as colors.
pub fn type_count(inst: &ReconfInstance) -> Result<usize> {
    Ok(type_partition(&inst.graph.add_solution_colors(&inst.source, &inst.target)?).len())
}

pub fn pick(problem: &Problem, config: &RunConfig) -> Result<Algo> {
    let inst = &problem.inst;
    Ok(match config.algo {
        Algo::Auto if problem.checker.is_some() => Algo::Oracle,
        Algo::Auto => {
            let nd_ok = inst.formula.is_mso1() && inst.rule == Rule::Jump;
            if nd_ok && type_count(inst)? <= config.nd_threshold {
                Algo::Nd
            } else if inst.decomposition.is_some() || inst.cluster_deletion.is_some() {
                Algo::Td
            } else {
                Algo::Oracle
            }
        }
        other => other,
    })
}

fn run(problem: &Problem, config: &RunConfig, algo: Algo, shortest: bool) -> Result<Answer> {
    let inst = &problem.inst;
    let nd_config = NdConfig { shape_cap: config.shape_cap, path_cap: config.path_cap, ..NdConfig::default() };
    let budget_hit = |e: &Error| matches!(e, Error::BudgetExceeded(_));
    let answer = match algo {
        Algo::Nd => {
            let solver = NdSolver::with_config(inst, nd_config)?;
            if shortest {
                match solver.solve_shortest() {
                    Ok(r) if !r.optimal => Answer::Unknown("path cap reached".into()),
                    Ok(r) => match r.distance {
                        Some(d) => Answer::Yes { distance: Some(d), sequence: Some(r.sequence) },
                        None => Answer::No,
                    },
                    Err(e) if budget_hit(&e) => Answer::Unknown(e.to_string()),
                    Err(e) => return Err(e.into()),
                }
            } else {
                match solver.solve_reachability() {
                    Ok(true) => Answer::Yes { distance: None, sequence: None },
                    Ok(false) => Answer::No,
                    Err(e) if budget_hit(&e) => Answer::Unknown(e.to_string()),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Algo::Td => Answer::from_outcome(solve_via_kernel(inst, config.budget, shortest)?.outcome),
        Algo::Oracle | Algo::Auto => Answer::from_outcome(bfs(problem, config.budget, shortest)?),
    };
    Ok(answer)
}

/// Solves with the configured algorithm and, when asked, cross-checks the
/// answer against the BFS.
pub fn solve(problem: &Problem, config: &RunConfig, shortest: bool) -> Result<Answer> {
    let algo = pick(problem, config)?;
    let answer = run(problem, config, algo, shortest)?;
    if config.verify && algo != Algo::Oracle {
        let check = Answer::from_outcome(bfs(problem, config.budget, false)?);
        let mismatch = match (&answer, &check) {
            (Answer::Yes { distance: Some(a), .. }, Answer::Yes { distance: Some(b), .. }) => a != b,
            _ => matches!((answer.reachable(), check.reachable()), (Some(a), Some(b)) if a != b),
        };
        if mismatch {
            bail!(Error::Internal(format!("{algo:?} answered {answer:?} but the BFS answered {check:?}")));
        }
    }
    Ok(answer)
}
