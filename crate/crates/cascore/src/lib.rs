//! Community association strength (CAS) scores and post-processing tools
//! for graph partitions: ensemble-clustering reweighting, outlier detection
//! and overlapping-community refinement, with evaluation metrics and a
//! synthetic benchmark generator.

pub mod benchgen;
pub mod ecg;
pub mod error;
pub mod graph;
pub mod io;
pub mod louvain;
pub mod metrics;
pub mod overlap;
pub mod scores;
pub mod testkit;

pub use error::{Error, Result};
pub use graph::{CommunityId, Cover, Graph, NodeId, Partition};
pub use scores::{ScoreKind, ScoreTable};
