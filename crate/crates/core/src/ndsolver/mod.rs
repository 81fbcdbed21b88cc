//! Shapes of vertex sets, the size-k shape graph, and the token-jumping
//! solver built on them.

mod lampis;
mod shape;
mod solver;
mod walk;

pub use lampis::{lampis_reduce, lampis_steps, shrink_round};
pub use shape::{representative_set, shape_of_set, shapes_adjacent, signature, Entry, MoveTypes, Shape, ShapeSpace};
pub use solver::{solve_reachability, solve_shortest, NdConfig, NdShortest, NdSolver, ShapeGraph, REP_COLOR};
pub use walk::same_shape_walk;
