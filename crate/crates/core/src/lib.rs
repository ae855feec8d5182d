//! Compact routing tables for random graphs.
//!
//! Builders for shortest-path and bounded-stretch routing schemes with exact
//! per-node bit accounting, a hop-by-hop simulator checked against BFS, and
//! checkers for the structural graph properties the constructions rely on.

pub mod bitcodec;
pub mod graphs;
pub mod harness;
pub mod schemes;
pub mod simulator;
