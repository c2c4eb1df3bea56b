//! File formats, Graphviz rendering and the `cftgen` command line on top of
//! [`cftgen_core`].

pub mod cftdoc;
pub mod cli;
pub mod dot;
pub mod error;
pub mod project;
pub mod report;
pub mod rulefile;
pub mod trace;

pub use cftdoc::{export_cft, import_cft, Metadata};
pub use dot::{project_to_dot, tree_to_dot};
pub use error::FormatError;
pub use project::{parse_cfc_project, write_cfc_project, CfcProject};
pub use rulefile::{parse_rule_library, write_rule_library};
