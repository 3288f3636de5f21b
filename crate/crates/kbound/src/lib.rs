//! CLI companion to `kbound-core`: graph file formats (graph6, edge list,
//! DIMACS), report rows with table/CSV/JSON encodings, polynomial
//! specifications, and the command runner used by the `kbound` binary.

pub mod formats;
pub mod poly;
pub mod report;
pub mod runner;

pub use formats::{emit_graph6, parse_graph, parse_graph6, parse_graph6_corpus, GraphFormat};
pub use report::{BatchSummary, Document, OutputFormat, ReportRow};
pub use runner::{run, CliError, CommandKind, MethodSel, RunConfig};
