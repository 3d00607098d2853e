//! Network topologies and the static precomputations that every other part
//! of the stack builds on: candidate path tables, distance-dependent
//! modulation lookup, line graphs and Laplacian spectral bases.
//!
//! Everything here is immutable after construction and safe to share across
//! worker threads behind an `Arc`.

mod error;
mod graph;
mod linegraph;
mod modulation;
mod paths;
mod spectral;
mod stats;

pub use error::TopologyError;
pub use graph::{Edge, Topology};
pub use linegraph::{build_line_graph, LineGraph};
pub use modulation::{required_fsus, ModulationFormat, ModulationTable};
pub use paths::{yen_k_shortest_paths, CandidatePath, PathTable, SortBy};
pub use spectral::{node_spectral_basis, spectral_basis, SpectralBasis};
pub use stats::{topology_stats, TopologyStats};
