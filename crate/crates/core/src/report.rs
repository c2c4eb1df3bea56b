//! Validation findings shared by the CFC, rule and CFT validators.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// Machine-readable classification of a finding. Each invariant checked by a
/// validator maps to exactly one kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    // CFC projects
    DuplicateComponent,
    DuplicatePort,
    UnknownConnectorType,
    DiagramInterfaceMismatch,
    DuplicateBlock,
    DuplicateParameter,
    DanglingEndpoint,
    SelfConnection,
    TypeMismatch,
    FanIn,
    UndrivenOutput,
    UndrivenInput,
    Cycle,
    // rule sets
    UnknownOutputParameter,
    UnknownInputParameter,
    FailureTypeOutOfMap,
    IncompleteCoverage,
    // CFT projects
    DuplicateElement,
    DuplicateNodeId,
    DuplicateFailureMode,
    UnknownPort,
    DanglingNodeRef,
    EdgeShape,
    GateArity,
    MultipleDrivers,
    CftCycle,
    InvalidLink,
}

impl FindingKind {
    pub fn code(self) -> &'static str {
        use FindingKind::*;
        match self {
            DuplicateComponent => "duplicate-component",
            DuplicatePort => "duplicate-port",
            UnknownConnectorType => "unknown-connector-type",
            DiagramInterfaceMismatch => "diagram-interface-mismatch",
            DuplicateBlock => "duplicate-block",
            DuplicateParameter => "duplicate-parameter",
            DanglingEndpoint => "dangling-endpoint",
            SelfConnection => "self-connection",
            TypeMismatch => "connector-type-mismatch",
            FanIn => "fan-in",
            UndrivenOutput => "undriven-output",
            UndrivenInput => "undriven-input",
            Cycle => "cycle",
            UnknownOutputParameter => "unknown-output-parameter",
            UnknownInputParameter => "unknown-input-parameter",
            FailureTypeOutOfMap => "failure-type-out-of-map",
            IncompleteCoverage => "incomplete-coverage",
            DuplicateElement => "duplicate-element",
            DuplicateNodeId => "duplicate-node-id",
            DuplicateFailureMode => "duplicate-failure-mode",
            UnknownPort => "unknown-port",
            DanglingNodeRef => "dangling-node-ref",
            EdgeShape => "edge-shape",
            GateArity => "gate-arity",
            MultipleDrivers => "multiple-drivers",
            CftCycle => "cft-cycle",
            InvalidLink => "invalid-link",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
    /// `/`-separated path of the offending item.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] {}: {}",
            self.severity.as_str(),
            self.kind.code(),
            self.location,
            self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(
        &mut self,
        kind: FindingKind,
        location: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.push(Severity::Error, kind, location.into(), message.into());
    }

    pub fn warning(
        &mut self,
        kind: FindingKind,
        location: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.push(Severity::Warning, kind, location.into(), message.into());
    }

    fn push(&mut self, severity: Severity, kind: FindingKind, location: String, message: String) {
        self.findings.push(Finding {
            severity,
            kind,
            location,
            message,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }

    /// True iff the report holds no errors; warnings are allowed.
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    pub fn error_count(&self) -> usize {
        self.errors().count()
    }

    pub fn warning_count(&self) -> usize {
        self.warnings().count()
    }
}
