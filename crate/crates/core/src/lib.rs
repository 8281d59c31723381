//! Exact-distance and interval colorings of regular trees.
//!
//! The crate builds the greedy block coloring that keeps vertices at
//! distance exactly `d` apart on distinct colors, the edge-lifted coloring
//! for the distance band `[d, cd]`, the graph families used for lower
//! bounds, every closed-form bound, the clique witnesses behind the lower
//! bounds, and an exact chromatic-number solver used as an oracle on small
//! instances.

pub mod bounds;
pub mod chi;
pub mod coloring;
pub mod energy;
pub mod error;
pub mod exact;
pub mod graph;
pub mod interval;
pub mod sweep;
pub mod tree;
pub mod verify;
pub mod witness;

pub use coloring::{ColorAssignment, ColorDomain, Provenance};
pub use error::{Error, Result};
pub use graph::FiniteGraph;
pub use tree::{Node, TreeParams, VertexAddr};

/// Size guards for everything that materializes vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Vertices of an explicit [`FiniteGraph`].
    pub max_graph_vertices: u64,
    /// Vertices for an all-pairs distance matrix.
    pub max_all_pairs: u64,
    /// Vertices of a tree truncation colored through a flat color array.
    pub max_tree_vertices: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_graph_vertices: 2_000_000,
            max_all_pairs: 20_000,
            max_tree_vertices: 60_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check(&self, what: &'static str, needed: u64, limit: u64) -> Result<()> {
        if needed > limit {
            return Err(Error::SizeGuard { what, needed, limit });
        }
        Ok(())
    }
}
