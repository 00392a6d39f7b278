//! Prime path and test path generation for control-flow graphs.
//!
//! A prime path is a maximal simple path: no other simple path of the graph
//! contains it as a contiguous subsequence. Simple here permits equal first
//! and last vertices, so cycles contribute one prime path per rotation.
//!
//! The crate offers two interchangeable pipelines:
//!
//! * **direct**: one fixed-point run over the whole graph. Every vertex owns
//!   a grow-only list of paths ending at that vertex and repeatedly extends
//!   its predecessors' paths; the scheduler may interleave vertex updates in
//!   any order, including in parallel, and always converges to the same set.
//! * **compositional**: decompose into strongly connected components, run
//!   the same machinery on each component subgraph and on the condensation,
//!   then splice the per-component results back together.
//!
//! Both return the paths partitioned into four endpoint classes (complete,
//! internal, exit, entry) and agree with a brute-force oracle on small
//! graphs. On top of that sit test-path tours that cover every prime path,
//! structural metrics, deterministic benchmark graph generators, and a
//! stable JSON report layer used by the `ppforge` binary.
//!
//! ```
//! use ppforge::cfg::Cfg;
//! use ppforge::compose::{generate_pps, Mode};
//! use ppforge::vertexgen::Schedule;
//!
//! let cfg = Cfg::from_parts(
//!     &["Start", "a", "b", "End"],
//!     &[("Start", "a"), ("a", "b"), ("b", "a"), ("a", "End")],
//!     "Start",
//!     &["End"],
//! )
//! .unwrap();
//! let (report, _) = generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
//! assert_eq!(report.total(), 5);
//! ```

pub mod benchgen;
pub mod cfg;
pub mod compose;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod path;
pub mod pathstore;
pub mod report;
pub mod scc;
pub mod tp;
pub mod trace;
pub mod vertexgen;

#[cfg(test)]
pub(crate) mod testutil;

pub use cfg::{parse_cfg, validate_cfg, Cfg, ParseError};
pub use compose::{generate_pps, Mode, PipelineStats, PpReport};
pub use path::{Path, VertexId};
pub use tp::{generate_test_paths, verify_coverage, TpReport};
pub use vertexgen::{RunError, Schedule};
