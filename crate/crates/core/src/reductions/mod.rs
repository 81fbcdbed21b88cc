//! Exact Cover Reconfiguration and its reduction to reconfiguration on
//! forests of depth three.

mod forest;
mod xcr;

pub use forest::{build_instance, direct_feasible, DirectChecker, ForestLayout, StarLayout, TreeLayout, ISOLATED};
pub use xcr::{random_xcr, xcr_brute, XcrDistance, XcrInstance};
