//! Compiles Continuous Function Chart (CFC) software programs into
//! Component Fault Trees (CFTs) and analyses the result.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, rendering and
//! the command line live in the `cftgen` crate.
//!
//! * [`cfc`]: the input model and its validation
//! * [`connector`], [`rules`]: connector-type mapping and rule library
//! * [`generate`]: the three-stage CFT generator
//! * [`cft`]: the CFT model, validation and flattening
//! * [`analysis`]: minimal cut sets and CFT comparison

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod cfc;
pub mod cft;
pub mod connector;
pub mod failure;
pub mod generate;
pub mod report;
pub mod rules;

pub use analysis::{diff, minimal_cut_sets, CutSet, DiffReport, Verdict};
pub use cfc::{topological_block_order, validate_system, System};
pub use cft::{flatten, validate_cft, CftProject, ClassicFaultTree, FailureModeRef};
pub use connector::{map_connector_type, ConnectorTypeTable};
pub use failure::{FailureType, FailureTypeSet};
pub use generate::{generate, GenerationOptions, GenerationTrace};
pub use report::{Finding, FindingKind, Severity, ValidationReport};
pub use rules::{lookup_rules, synthesize_worst_case, validate_rule_set, RuleLibrary, RuleSet};
