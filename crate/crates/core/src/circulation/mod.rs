//! Min-cost circulation and the layered network that prices a path of
//! shapes.

mod layered;
mod network;
mod realize;

pub use layered::{build_network, LayeredNetwork, SINK, SOURCE};
pub use network::{min_cost_circulation, Arc, Circulation, FlowNetwork};
pub use realize::{realize_moves, remove_transit};
