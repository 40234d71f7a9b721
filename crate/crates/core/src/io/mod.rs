//! Run configuration, CSV tables and field dumps.

pub mod config;
pub mod dump;
pub mod table;

pub use config::{parse_config, RunConfig};
pub use dump::{dump_field, read_field};
pub use table::{emit_stability, emit_table, StabilityRow};
