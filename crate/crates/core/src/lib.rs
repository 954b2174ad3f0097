//! Strong edge-coloring of 2-degenerate graphs.
//!
//! [`reducer::strong_color`] colors any graph accepted by
//! [`class::class_check`] using at most `5D - D^(1/2-eps) + 2` colors when
//! every extension step succeeds, and records a replayable trace of the
//! reduction. [`oracle`] computes exact strong chromatic indices of small
//! graphs and [`genlab`] builds seeded test graphs.

pub mod class;
pub mod coloring;
pub mod digest;
pub mod genlab;
pub mod graph;
pub mod oracle;
pub mod params;
pub mod reducer;
pub mod report;
pub mod structure;

pub use class::{class_check, ClassReport};
pub use coloring::{verify_strong, Color, Coloring};
pub use graph::{Edge, Graph, VertexId};
pub use params::{Params, Ratio};
pub use reducer::{replay_run, replay_trace, strong_color, RunResult};
