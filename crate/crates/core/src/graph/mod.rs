//! Colored graphs and the structures computed from them.

mod canon;
mod cluster;
mod colored;
mod instance;
mod io;
mod treedepth;
mod types;

pub(crate) use canon::node_code;
pub use canon::{subtree_canonical_code, DecompositionView};
pub use cluster::{cluster_deletion_set, is_cluster_deletion_set, ClusterDeletion};
pub use colored::{valid_color_name, ColoredGraph, VertexSet, DST_COLOR, SRC_COLOR};
pub use instance::{write_instance_files, InstanceFile, ReconfInstance, Rule};
pub use io::{parse_graph, parse_treedepth, write_graph, write_treedepth};
pub use treedepth::{compute_td, validate_td, TreedepthDecomposition};
pub use types::{neighborhood_diversity, type_partition, TypePartition};
