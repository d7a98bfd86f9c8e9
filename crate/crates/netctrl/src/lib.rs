//! Controllability, non-fragility under agent loss, and partial
//! controllability of leader-follower networks on weighted undirected
//! graphs. See the `cli` module (and the `netctrl` binary) for the
//! file-based front end.

pub mod cli;
pub mod cuts;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod graph;
pub mod groups;
pub mod linalg;
pub mod nonfragility;
pub mod preservation;
pub mod report;
pub mod steering;
pub mod system;

pub use error::{Error, Result};
pub use graph::{DistancePartition, WeightedGraph};
pub use system::MasSystem;
