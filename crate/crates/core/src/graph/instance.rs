use std::fmt;
use std::path::{Path, PathBuf};

use super::{parse_graph, parse_treedepth, ColoredGraph, TreedepthDecomposition, VertexSet};
use crate::error::{Error, Result};
use crate::formula::{self, FormulaAst};

/// Reconfiguration rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Any vertex of the set may be exchanged for any vertex outside it.
    Jump,
    /// The exchanged vertices must be adjacent.
    Slide,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Jump => "jump",
            Rule::Slide => "slide",
        })
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jump" => Ok(Rule::Jump),
            "slide" => Ok(Rule::Slide),
            other => Err(Error::InvalidInstance(format!("unknown rule `{other}`"))),
        }
    }
}

/// `⟨φ, G, S, S'⟩` together with the move rule and optional structural hints.
#[derive(Clone, Debug)]
pub struct ReconfInstance {
    pub graph: ColoredGraph,
    pub formula: FormulaAst,
    pub source: VertexSet,
    pub target: VertexSet,
    pub rule: Rule,
    pub decomposition: Option<TreedepthDecomposition>,
    pub cluster_deletion: Option<VertexSet>,
}

impl ReconfInstance {
    /// Builds an instance and checks `|S| = |S'|`, `G ⊨ φ(S)` and `G ⊨ φ(S')`.
    pub fn new(
        graph: ColoredGraph,
        formula: FormulaAst,
        source: VertexSet,
        target: VertexSet,
        rule: Rule,
    ) -> Result<Self> {
        let inst = Self::new_unchecked(graph, formula, source, target, rule)?;
        let eval = formula::Evaluator::new(&inst.graph, &inst.formula)?;
        inst.validate_with(|set| eval.eval(set))?;
        Ok(inst)
    }

    /// Like [`ReconfInstance::new`] but only checks sizes and ranges; the
    /// caller validates feasibility with its own predicate.
    pub fn new_unchecked(
        graph: ColoredGraph,
        formula: FormulaAst,
        source: VertexSet,
        target: VertexSet,
        rule: Rule,
    ) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::InvalidInstance(format!(
                "|S| = {} but |S'| = {}",
                source.len(),
                target.len()
            )));
        }
        let n = graph.n();
        if let Some(&v) = source.iter().chain(target.iter()).find(|&&v| v >= n) {
            return Err(Error::InvalidInstance(format!("vertex {v} out of range")));
        }
        Ok(ReconfInstance {
            graph,
            formula,
            source,
            target,
            rule,
            decomposition: None,
            cluster_deletion: None,
        })
    }

    pub fn validate_with<F>(&self, mut feasible: F) -> Result<()>
    where
        F: FnMut(&VertexSet) -> Result<bool>,
    {
        if !feasible(&self.source)? {
            return Err(Error::InvalidInstance("source set is not feasible".into()));
        }
        if !feasible(&self.target)? {
            return Err(Error::InvalidInstance("target set is not feasible".into()));
        }
        Ok(())
    }

    pub fn with_decomposition(mut self, td: TreedepthDecomposition) -> Result<Self> {
        if !super::validate_td(&self.graph, &td) {
            return Err(Error::InvalidDecomposition(
                "some edge does not join an ancestor and a descendant".into(),
            ));
        }
        self.decomposition = Some(td);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.source.len()
    }

    /// Loads an instance file and validates it with the MSO evaluator.
    pub fn load(path: &Path) -> Result<Self> {
        let file = InstanceFile::read(path)?;
        file.into_instance(true)
    }
}

/// Parsed contents of an instance file.
#[derive(Clone, Debug, Default)]
pub struct InstanceFile {
    pub graph: PathBuf,
    pub formula: PathBuf,
    pub source: VertexSet,
    pub target: VertexSet,
    pub rule: Option<Rule>,
    pub tdfile: Option<PathBuf>,
    pub cds: Option<VertexSet>,
    /// Exact cover instance the graph was generated from, if any.
    pub xcr: Option<PathBuf>,
}

fn parse_ids(toks: &[&str], line: usize) -> Result<VertexSet> {
    toks.iter()
        .map(|t| {
            t.parse::<usize>().map_err(|_| {
                Error::InvalidInstance(format!("line {line}: expected vertex id, found `{t}`"))
            })
        })
        .collect()
}

impl InstanceFile {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut out = InstanceFile::default();
        let mut seen_graph = false;
        let mut seen_formula = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            let Some((&key, rest)) = toks.split_first() else {
                continue;
            };
            let one_path = |rest: &[&str]| -> Result<PathBuf> {
                match rest {
                    [p] => Ok(base.join(p)),
                    _ => Err(Error::InvalidInstance(format!("line {line}: expected one path"))),
                }
            };
            match key {
                "graph" => {
                    out.graph = one_path(rest)?;
                    seen_graph = true;
                }
                "formula" => {
                    out.formula = one_path(rest)?;
                    seen_formula = true;
                }
                "source" => out.source = parse_ids(rest, line)?,
                "target" => out.target = parse_ids(rest, line)?,
                "rule" => match rest {
                    [r] => out.rule = Some(r.parse()?),
                    _ => return Err(Error::InvalidInstance(format!("line {line}: expected rule"))),
                },
                "tdfile" => out.tdfile = Some(one_path(rest)?),
                "cds" => out.cds = Some(parse_ids(rest, line)?),
                "xcr" => out.xcr = Some(one_path(rest)?),
                other => {
                    return Err(Error::InvalidInstance(format!(
                        "line {line}: unknown key `{other}`"
                    )))
                }
            }
        }
        if !seen_graph || !seen_formula {
            return Err(Error::InvalidInstance("missing `graph` or `formula` line".into()));
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Reads the referenced files. Feasibility of `S` and `S'` is checked with
    /// the evaluator only when `validate` is set.
    pub fn into_instance(self, validate: bool) -> Result<ReconfInstance> {
        let graph = parse_graph(&std::fs::read_to_string(&self.graph)?)?;
        let formula = formula::parse_formula(&std::fs::read_to_string(&self.formula)?)?;
        let rule = self.rule.unwrap_or(Rule::Jump);
        let mut inst = if validate {
            ReconfInstance::new(graph, formula, self.source, self.target, rule)?
        } else {
            ReconfInstance::new_unchecked(graph, formula, self.source, self.target, rule)?
        };
        if let Some(td_path) = &self.tdfile {
            let td = parse_treedepth(&std::fs::read_to_string(td_path)?, inst.graph.n())?;
            inst = inst.with_decomposition(td)?;
        }
        if let Some(cds) = self.cds {
            if !super::is_cluster_deletion_set(&inst.graph, &cds) {
                return Err(Error::InvalidInstance("`cds` is not a cluster deletion set".into()));
            }
            inst.cluster_deletion = Some(cds);
        }
        Ok(inst)
    }
}

fn join_ids(set: &VertexSet) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes `graph.txt`, `formula.txt`, an optional `td.txt` and `instance.txt`
/// into `dir`, returning the instance file path.
pub fn write_instance_files(inst: &ReconfInstance, dir: &Path, extra: &[String]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("graph.txt"), super::write_graph(&inst.graph))?;
    std::fs::write(dir.join("formula.txt"), format!("{}\n", inst.formula))?;
    let mut text = String::from("graph graph.txt\nformula formula.txt\n");
    text.push_str(&format!("source {}\n", join_ids(&inst.source)));
    text.push_str(&format!("target {}\n", join_ids(&inst.target)));
    text.push_str(&format!("rule {}\n", inst.rule));
    if let Some(td) = &inst.decomposition {
        std::fs::write(dir.join("td.txt"), super::write_treedepth(td))?;
        text.push_str("tdfile td.txt\n");
    }
    if let Some(cds) = &inst.cluster_deletion {
        text.push_str(&format!("cds {}\n", join_ids(cds)));
    }
    for line in extra {
        text.push_str(line);
        text.push('\n');
    }
    let path = dir.join("instance.txt");
    std::fs::write(&path, text)?;
    Ok(path)
}
