//! Built-in examples, batch runs and table-shaped reports.

mod bench;
mod registry;
mod report;

pub use bench::{run_benchmark, solve_problem, solve_row, BenchRow, Solution};
pub use registry::{builtin_example, builtin_source, ExampleId, BOX_LOWER, BOX_UPPER};
pub use report::{
    emit_report, emit_report_with, format_sig, format_vector, ReportFormat, ReportOptions,
    CSV_HEADER,
};
