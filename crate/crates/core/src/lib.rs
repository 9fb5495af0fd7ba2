//! Fully dynamic graph coloring under edge insertions and deletions.
//!
//! The toolkit maintains, per update:
//! - a level hierarchy inducing an edge orientation whose maximum
//!   outdegree tracks the graph's current arboricity ([`level_structure`]);
//! - a partition of the edges into forests driven by that orientation
//!   ([`arb_decomp`]);
//! - an explicit proper coloring with per-level palettes
//!   ([`explicit_coloring`]);
//! - two implicit colorings answered at query time: root-distance
//!   parities over dynamic forests ([`implicit_parity`]) and lazy
//!   subgroup recoloring ([`implicit_subgroup`]).
//!
//! Brute-force oracles ([`oracles`]) verify every invariant at desk scale,
//! and [`runner`] drives text streams end to end.

pub mod arb_decomp;
pub mod dyn_forest;
pub mod explicit_coloring;
pub mod implicit_parity;
pub mod implicit_subgroup;
pub mod level_structure;
pub mod oracles;
pub mod pipeline;
pub mod runner;
pub mod stats;
pub mod stream;

pub use arb_decomp::{ForestAssignment, ForestEdgeEvent, ForestEventKind};
pub use dyn_forest::DynForest;
pub use explicit_coloring::{ColorId, ExplicitColoring};
pub use implicit_parity::{ParityColoring, ParityVector};
pub use implicit_subgroup::{ColorRecord, CombinedColor, SubgroupColoring, SubgroupLayout};
pub use level_structure::{Hierarchy, OrientationEvent};
pub use oracles::SnapshotGraph;
pub use pipeline::Pipeline;
pub use runner::{run, Algorithm, RunConfig, RunOutcome};
pub use stats::RunStats;
pub use stream::{generate, parse_stream, GenKind, Stream, StreamCommand};
