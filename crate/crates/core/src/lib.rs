//! Reconfiguration of vertex sets defined by monadic second-order formulas.
//!
//! Given a colored graph `G`, a formula `φ(X)` with one free set variable and
//! two feasible sets `S`, `S'` of equal size `k`, the question is whether `S`
//! can be transformed into `S'` by exchanging one vertex at a time while every
//! intermediate set stays feasible (token jumping), optionally requiring the
//! exchanged vertices to be adjacent (token sliding).
//!
//! The crate is organised as follows:
//!
//! - [`formula`]: the MSO₁/MSO₂ language, parser, model checker and the
//!   edge-subdivision translation from MSO₂ to MSO₁.
//! - [`graph`]: colored graphs, type partitions, treedepth decompositions,
//!   canonical subtree codes, cluster deletion sets and problem instances.
//! - [`ndsolver`]: the shape-graph algorithm, exact on every input and
//!   efficient when the number of vertex types is small.
//! - [`circulation`]: the layered min-cost circulation that turns a path of
//!   shapes into a shortest move sequence.
//! - [`tdsolver`]: distance-preserving kernelization along a treedepth
//!   decomposition, plus the cluster-deletion variant.
//! - [`oracle`]: breadth-first search over feasible sets, the ground truth.
//! - [`reductions`]: exact cover reconfiguration and the depth-3 forest
//!   construction with its feasibility formula.

pub mod circulation;
pub mod error;
pub mod formula;
pub mod graph;
pub mod ndsolver;
pub mod oracle;
pub mod reductions;
pub mod tdsolver;

pub use error::{Error, Result};
pub use formula::{FormulaAst, QuantifierProfile};
pub use graph::{ColoredGraph, ReconfInstance, Rule, TypePartition, VertexSet};
