//! Benchmarks, the end-to-end pipeline and mode sweeps.

pub mod builtins;
mod pipeline;
mod report;
mod svg;
mod sweep;

pub use builtins::{builtin_benchmark, BUILTIN_BENCHMARKS};
pub use pipeline::{prepare, run_pipeline, PipelineResult, PreparedCircuit, Speedups};
pub use report::{emit_csv, read_csv, read_rows, write_report, write_rows, ROW_COLUMNS};
pub use svg::render_svg;
pub use sweep::{
    run_sweep, AverageRow, BenchmarkSource, CellFailure, EventRow, ReportRow, SpeedupReport,
    SweepConfig,
};
