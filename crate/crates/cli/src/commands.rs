use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use msor::formula::{builtin_formula, parse_formula, quantifier_profile, Evaluator, BUILTIN_NAMES};
use msor::graph::{
    compute_td, neighborhood_diversity, parse_graph, write_instance_files, InstanceFile, VertexSet,
};
use msor::ndsolver::{NdConfig, NdSolver};
use msor::oracle::{moves_of, validate_sequence};
use msor::reductions::{build_instance, random_xcr, DirectChecker, XcrInstance};
use msor::tdsolver::{kernelize, reduce_cliques, restrict_decomposition, KernelStep};
use msor::{Error, FormulaAst};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::solve::{solve, type_count, Answer, Problem};
use crate::{RuleArg, RunConfig, EXIT_NO, EXIT_UNKNOWN, EXIT_YES};

fn load(path: &Path, rule: Option<RuleArg>) -> Result<Problem> {
    let mut file = InstanceFile::read(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(r) = rule {
        file.rule = Some(r.into());
    }
    let ctx = || format!("loading {}", path.display());
    let Some(xcr_path) = file.xcr.clone() else {
        let inst = file.into_instance(true).with_context(ctx)?;
        return Ok(Problem { inst, checker: None });
    };
    let inst = file.into_instance(false).with_context(ctx)?;
    let xcr = XcrInstance::read(&xcr_path).with_context(|| format!("reading {}", xcr_path.display()))?;
    let (built, layout) = build_instance(&xcr)?;
    if built.graph.n() != inst.graph.n() || built.graph.edges() != inst.graph.edges() {
        bail!(Error::InvalidInstance(format!("graph does not match the forest of {}", xcr_path.display())));
    }
    let checker = DirectChecker::new(&layout);
    inst.validate_with(|x| Ok(checker.check(|v| x.contains(&v)))).with_context(ctx)?;
    Ok(Problem { inst, checker: Some(checker) })
}

fn verdict(answer: &Answer) -> u8 {
    match answer {
        Answer::Yes { .. } => EXIT_YES,
        Answer::No => EXIT_NO,
        Answer::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn print_unknown(why: &str) {
    println!("unknown");
    eprintln!("note: {why}");
}

pub fn check(path: &Path, config: &RunConfig) -> Result<u8> {
    let problem = load(path, config.rule)?;
    let answer = solve(&problem, config, false)?;
    match &answer {
        Answer::Yes { .. } => println!("yes"),
        Answer::No => println!("no"),
        Answer::Unknown(why) => print_unknown(why),
    }
    Ok(verdict(&answer))
}

pub fn shortest(path: &Path, config: &RunConfig) -> Result<u8> {
    let problem = load(path, config.rule)?;
    let answer = solve(&problem, config, true)?;
    let inst = &problem.inst;
    match &answer {
        Answer::Yes { distance, sequence } => {
            let sets = sequence.as_ref().context("solver returned no sequence")?;
            let (g, s, t) = (&inst.graph, &inst.source, &inst.target);
            match &problem.checker {
                Some(c) => validate_sequence(g, inst.rule, c, s, t, sets)?,
                None => validate_sequence(g, inst.rule, &Evaluator::new(g, &inst.formula)?, s, t, sets)?,
            }
            if *distance != Some(sets.len() - 1) {
                bail!(Error::Internal(format!("distance {distance:?} but {} sets", sets.len())));
            }
            let mut out = format!("{}\n", sets.len() - 1);
            for m in moves_of(sets)? {
                writeln!(out, "move {} {}", m.from, m.to)?;
            }
            print!("{out}");
        }
        Answer::No => println!("no"),
        Answer::Unknown(why) => print_unknown(why),
    }
    Ok(verdict(&answer))
}

fn step_line(stage: &str, step: &KernelStep) -> Result<String> {
    let mut value = serde_json::to_value(step)?;
    value["stage"] = stage.into();
    Ok(serde_json::to_string(&value)?)
}

pub fn kernel(path: &Path, out: &Path, rule: Option<RuleArg>) -> Result<u8> {
    let inst = load(path, rule)?.inst;
    let mut report = String::new();
    let (work, clique_kept) = match &inst.cluster_deletion {
        Some(d) => {
            let (mut reduced, cliques) = reduce_cliques(&inst, d)?;
            if let Some(td) = &inst.decomposition {
                reduced.decomposition = Some(restrict_decomposition(td, &cliques.kept)?);
            }
            for step in &cliques.steps {
                writeln!(report, "{}", step_line("cliques", step)?)?;
            }
            (reduced, Some(cliques.kept))
        }
        None => (inst.clone(), None),
    };
    let td = match &work.decomposition {
        Some(td) => td.clone(),
        None => compute_td(&work.graph),
    };
    let (kernel_inst, mut kernel) = kernelize(&work, &td)?;
    if let Some(kept) = &clique_kept {
        for step in &mut kernel.steps {
            step.removed = step.removed.iter().map(|&v| kept[v]).collect();
        }
    }
    for step in &kernel.steps {
        writeln!(report, "{}", step_line("subtrees", step)?)?;
    }
    let written = write_instance_files(&kernel_inst, out, &[])?;
    std::fs::write(out.join("report.jsonl"), report)?;
    println!("input {}", inst.graph.n());
    println!("kernel {}", kernel_inst.graph.n());
    if let Some(budget) = &kernel.budget {
        println!("bound {}", budget.kernel_size());
    }
    println!("instance {}", written.display());
    Ok(EXIT_YES)
}

pub fn shapes(path: &Path, out: Option<&Path>, shape_cap: u128) -> Result<u8> {
    let inst = load(path, None)?.inst;
    let solver = NdSolver::with_config(&inst, NdConfig { shape_cap, ..NdConfig::default() })?;
    let space = solver.space();
    println!("types {}", space.types());
    println!("q {}", space.q());
    println!("nominal {}", space.nominal_count());
    println!("candidates {}", space.candidate_count());
    let sg = solver.build_shape_graph()?;
    println!("feasible {}", sg.shapes.len());
    println!("edges {}", sg.edge_count());
    if let Some(out) = out {
        std::fs::write(out, sg.dump())?;
    }
    Ok(EXIT_YES)
}

fn read_formula(arg: &str) -> Result<FormulaAst> {
    let path = Path::new(arg);
    if !path.exists() && BUILTIN_NAMES.contains(&arg) {
        return Ok(builtin_formula(arg)?);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
    Ok(parse_formula(&text)?)
}

pub fn mc(graph: &Path, formula: &str, set: &[usize]) -> Result<u8> {
    let g = parse_graph(&std::fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?)?;
    let ast = read_formula(formula)?;
    let x: VertexSet = set.iter().copied().collect();
    if let Some(&v) = x.iter().find(|&&v| v >= g.n()) {
        bail!(Error::InvalidInstance(format!("vertex {v} out of range")));
    }
    let truth = Evaluator::new(&g, &ast)?.eval(&x)?;
    println!("{truth}");
    Ok(if truth { EXIT_YES } else { EXIT_NO })
}

pub fn gen_xcr(xcr: Option<&Path>, out: &Path, seed: u64, universe: usize, family: usize) -> Result<u8> {
    let xcr = match xcr {
        Some(p) => XcrInstance::read(p).with_context(|| format!("reading {}", p.display()))?,
        None => random_xcr(&mut ChaCha8Rng::seed_from_u64(seed), universe, family),
    };
    let (inst, layout) = build_instance(&xcr)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("xcr.txt"), xcr.to_text())?;
    let written = write_instance_files(&inst, out, &["xcr xcr.txt".to_string()])?;
    println!("vertices {}", layout.n);
    println!("k {}", inst.k());
    println!("instance {}", written.display());
    Ok(EXIT_YES)
}

pub fn info(path: &Path, rule: Option<RuleArg>) -> Result<u8> {
    let inst = load(path, rule)?.inst;
    let g = &inst.graph;
    println!("n {}", g.n());
    println!("m {}", g.m());
    println!("colors {}", g.color_count());
    println!("t {}", type_count(&inst)?);
    println!("nd {}", neighborhood_diversity(g));
    match &inst.decomposition {
        Some(td) => println!("td {} given", td.depth()),
        None => {
            let td = compute_td(g);
            println!("td {} {}", td.depth(), if td.is_optimal() { "exact" } else { "upper-bound" });
        }
    }
    let profile = quantifier_profile(&inst.formula);
    println!("q {}", profile.q);
    println!("k {}", inst.k());
    println!("rule {}", inst.rule);
    Ok(EXIT_YES)
}
