//! Field-data records, screening reports and descendant-tree graphs.

mod dot;
mod records;
mod report;

pub use dot::{emit_tree_dot, DotError, MAX_DOT_LOG_ORDER};
pub use records::{parse_records, Discriminant, FieldRecord};
pub use report::{report, Mode, Report};
