//! Text formats, parsers and printers.

mod problem;
mod render;
pub mod sexpr;
mod text;

pub use problem::{parse_problem, ProblemFile};
pub use render::{render_report, render_table};
pub use text::{parse_circuit, parse_dtree, parse_dtree_declaring, print_circuit, print_dtree};
