//! Exact and proof-derived `r`-partitioning of `K_{r+1}`-free graphs.
//!
//! The crate answers one question at desk scale: how many edges must be
//! deleted from a `K_{r+1}`-free graph to make it `r`-partite? It provides
//!
//! - [`graph`]: a bit-matrix graph with clique, blow-up and join primitives,
//! - [`exact`]: a branch-and-bound solver for the minimum deletion count `D_r(G)`
//!   plus a brute-force oracle,
//! - [`pipeline`]: the stability partitioning procedure (degree majorization,
//!   anchor clique, common-neighbourhood classes, exceptional-vertex assignment),
//! - [`constructions`]: Turán graphs, `C_5` blow-ups, the sharpness construction
//!   and seeded near-extremal instances,
//! - [`bounds`]: closed-form evaluators with exact rational cross-checks,
//! - [`sweep`] and [`verify`]: the experiment harness and acceptance suites
//!   behind the `rpartite` CLI.

pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod rational;
pub mod sweep;
pub mod verify;

pub use bitset::VertexSet;
pub use error::{ConstructionError, GraphError, ParseError, PipelineError, SolveError};
pub use graph::{Graph, Partition};
