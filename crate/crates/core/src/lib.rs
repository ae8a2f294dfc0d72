//! Actor-runtime heat-equation benchmark library.
//!
//! Three layers: [`runtime`] is a minimal shared-memory actor engine built
//! around message-ownership transfer and quiescence-based termination;
//! [`heat`] implements a Gauss-Seidel heat-equation kernel with a sequential
//! oracle, an actor wavefront solver, and an even/odd data-parallel
//! reference solver; [`harness`], [`stats`] and [`report`] drive timed
//! benchmark series, cross-variant verification, and report emission.

pub mod harness;
pub mod heat;
pub mod report;
pub mod runtime;
pub mod stats;

pub use harness::{
    init_field, time_variant, verify_all, BenchConfig, ConfigError, PairCheck, RunStats, Variant,
    VariantCheck, VerifyReport,
};
pub use heat::{
    dataparallel_solve, dep_ready, fields_equal, first_difference, seq_solve, stencil_op,
    wavefront_solve, wavefront_solve_traced, Field, WavefrontReport,
};
pub use report::{emit_report, EfficiencyRow, Report, ReportFormat, ReportMeta, ReportRow};
pub use runtime::{ActorId, Engine, EngineError, EngineStats, MessageId};
pub use stats::{relative_efficiency, round_to_decimals, summarize, Summary};
