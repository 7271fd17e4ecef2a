//! Tools around fully blocked digraphs (FBD-graphs): oriented graphs
//! without directed 1-, 2- or 3-cycles in which flipping any edge creates
//! a 3-cycle.
//!
//! The crate builds such graphs by a recursive multi-pyramid construction,
//! verifies them with the four trace conditions, glues copies into a graph
//! on which no flip sequence can monotonically remove the last 3-cycle,
//! and searches small orientation spaces for monotone flip sequences.

pub mod glue;
pub mod graph;
pub mod io;
pub mod pyramid;
pub mod search;
pub mod verify;

pub use glue::{glue_copies, is_stuck, Copies, GluedGraph};
pub use graph::{DirectedGraph, Edge, MergePlan};
pub use pyramid::{
    build_fbd, build_tree, distance5_minimize, fold_plan, trim_levels01, validate_plan,
    validate_plan_anchored, PlanMode, PlanViolation, PyramidGraph,
};
pub use search::{monotone_sequence_bfs, random_probe, scan_tournaments, Mode};
pub use verify::{metrics, verify_fbd, VerificationReport};
