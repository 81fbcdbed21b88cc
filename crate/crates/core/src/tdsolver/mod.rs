//! Kernelization along a treedepth decomposition, clique shrinking for
//! cluster graphs, and solving on the kernel.

mod budget;
mod kernel;
mod solve;

pub use budget::{Bound, KernelBudget, MAX_EXACT_BITS};
pub use kernel::{
    delete_from_instance, kernelize, reduce_cliques, restrict_decomposition, ClassStat, KernelReport, KernelStep,
};
pub use solve::{solve_via_kernel, TdResult};
