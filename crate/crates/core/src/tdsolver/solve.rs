use super::kernel::{kernelize, reduce_cliques, restrict_decomposition, KernelReport};
use crate::error::{Error, Result};
use crate::formula::{subdivide_decomposition, translate_mso2_to_mso1};
use crate::graph::{compute_td, ReconfInstance, Rule, VertexSet};
use crate::oracle::{symmetry_classes, Oracle, SearchOutcome};

#[derive(Clone, Debug)]
pub struct TdResult {
    /// Oracle answer on the kernel; a returned sequence uses the ids of the
    /// input instance.
    pub outcome: SearchOutcome,
    /// Clique reduction report, when a cluster deletion set was supplied.
    pub cliques: Option<KernelReport>,
    pub kernel: KernelReport,
    pub kernel_vertices: usize,
    pub input_vertices: usize,
}

/// Kernelizes (after clique reduction when the instance carries a cluster
/// deletion set) and runs the oracle on the kernel. MSO2 formulas are first
/// rewritten over the edge subdivision, which supports token jumping only.
pub fn solve_via_kernel(inst: &ReconfInstance, budget: usize, want_sequence: bool) -> Result<TdResult> {
    let input_vertices = inst.graph.n();
    let (work, cliques) = if inst.formula.is_mso2() {
        if inst.rule == Rule::Slide {
            return Err(Error::Unsupported("token sliding with an MSO2 formula".into()));
        }
        let td = match &inst.decomposition {
            Some(td) => td.clone(),
            None => compute_td(&inst.graph),
        };
        let (graph, formula) = translate_mso2_to_mso1(&inst.graph, &inst.formula)?;
        let td = subdivide_decomposition(&inst.graph, &td)?;
        let mut work =
            ReconfInstance::new_unchecked(graph, formula, inst.source.clone(), inst.target.clone(), inst.rule)?;
        work.decomposition = Some(td);
        (work, None)
    } else {
        match &inst.cluster_deletion {
            Some(d) => {
                let (mut reduced, report) = reduce_cliques(inst, d)?;
                if let Some(td) = &inst.decomposition {
                    reduced.decomposition = Some(restrict_decomposition(td, &report.kept)?);
                }
                (reduced, Some(report))
            }
            None => (inst.clone(), None),
        }
    };
    let td = match &work.decomposition {
        Some(td) => td.clone(),
        None => compute_td(&work.graph),
    };
    let (kernel_inst, mut kernel) = kernelize(&work, &td)?;
    // express kernel ids in terms of the input instance
    if let Some(c) = &cliques {
        kernel.kept = kernel.kept.iter().map(|&v| c.kept[v]).collect();
        for step in &mut kernel.steps {
            step.removed = step.removed.iter().map(|&v| c.kept[v]).collect();
        }
    }
    let classes = symmetry_classes(&kernel_inst.graph, &kernel_inst.source, &kernel_inst.target)?;
    let outcome = Oracle::for_instance(&kernel_inst)?
        .with_budget(budget)
        .with_symmetry(classes)
        .bfs(&kernel_inst.source, &kernel_inst.target, want_sequence)?;
    let outcome = match outcome {
        SearchOutcome::Reachable { distance, sequence } => SearchOutcome::Reachable {
            distance,
            sequence: sequence.map(|seq| {
                seq.iter()
                    .map(|x| x.iter().map(|&v| kernel.kept[v]).collect::<VertexSet>())
                    .collect()
            }),
        },
        other => other,
    };
    let kernel_vertices = kernel_inst.graph.n();
    Ok(TdResult { outcome, cliques, kernel, kernel_vertices, input_vertices })
}
