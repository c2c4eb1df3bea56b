//! Command reports in text and JSON. The JSON shape is described by
//! `schema/report.schema.json`.

use std::fmt::Write as _;

use serde::Serialize;

use cftgen_core::analysis::{StructuralDelta, TopComparison};
use cftgen_core::{CutSet, Finding, ValidationReport};

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FindingDoc {
    pub severity: &'static str,
    pub code: &'static str,
    pub location: String,
    pub message: String,
}

impl From<&Finding> for FindingDoc {
    fn from(f: &Finding) -> Self {
        FindingDoc {
            severity: f.severity.as_str(),
            code: f.kind.code(),
            location: f.location.clone(),
            message: f.message.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ErrorDoc {
    /// `io`, `syntax`, `schema`, `duplicate-rule`, `generation`, `analysis`
    /// or `usage`.
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GenerationDoc {
    pub elements: usize,
    pub gates: usize,
    pub worst_case: Vec<String>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TopDoc {
    pub top: String,
    pub cut_sets: Vec<CutSet>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComparisonDoc {
    pub top: String,
    pub verdict: &'static str,
    pub cut_sets_a: usize,
    pub cut_sets_b: usize,
    pub only_in_a: Vec<CutSet>,
    pub only_in_b: Vec<CutSet>,
}

impl From<&TopComparison> for ComparisonDoc {
    fn from(c: &TopComparison) -> Self {
        ComparisonDoc {
            top: c.top.to_string(),
            verdict: c.verdict.as_str(),
            cut_sets_a: c.cut_sets_a.len(),
            cut_sets_b: c.cut_sets_b.len(),
            only_in_a: c.only_in_a.clone(),
            only_in_b: c.only_in_b.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StructureDoc {
    pub elements_only_in_a: Vec<String>,
    pub elements_only_in_b: Vec<String>,
    pub ports_only_in_a: Vec<String>,
    pub ports_only_in_b: Vec<String>,
    pub failure_modes_only_in_a: Vec<String>,
    pub failure_modes_only_in_b: Vec<String>,
}

impl From<&StructuralDelta> for StructureDoc {
    fn from(d: &StructuralDelta) -> Self {
        StructureDoc {
            elements_only_in_a: d.elements_only_in_a.clone(),
            elements_only_in_b: d.elements_only_in_b.clone(),
            ports_only_in_a: d.ports_only_in_a.clone(),
            ports_only_in_b: d.ports_only_in_b.clone(),
            failure_modes_only_in_a: d.failure_modes_only_in_a.clone(),
            failure_modes_only_in_b: d.failure_modes_only_in_b.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DiffDoc {
    pub tops: Vec<ComparisonDoc>,
    pub structure: StructureDoc,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Report {
    pub command: &'static str,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
    pub findings: Vec<FindingDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenerationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Vec<TopDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffDoc>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            exit_code: 0,
            error: None,
            findings: Vec::new(),
            generation: None,
            analysis: None,
            diff: None,
        }
    }

    pub fn add_findings(&mut self, r: &ValidationReport) {
        self.findings
            .extend(r.findings.iter().map(FindingDoc::from));
    }

    pub fn error_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == "error")
            .count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            writeln!(
                out,
                "{}[{}] {}: {}",
                f.severity, f.code, f.location, f.message
            )
            .unwrap();
        }
        if (self.command == "validate" && self.error.is_none()) || !self.findings.is_empty() {
            let errors = self.error_count();
            let warnings = self.findings.len() - errors;
            writeln!(
                out,
                "{errors} {}, {warnings} {}",
                plural(errors, "error"),
                plural(warnings, "warning")
            )
            .unwrap();
        }
        if let Some(g) = &self.generation {
            writeln!(
                out,
                "generated {} elements with {} gates",
                g.elements, g.gates
            )
            .unwrap();
            for w in &g.worst_case {
                writeln!(out, "worst-case rule applied to {w}").unwrap();
            }
            if let Some(o) = &g.output {
                writeln!(out, "wrote {o}").unwrap();
            }
        }
        if let Some(tops) = &self.analysis {
            for t in tops {
                writeln!(
                    out,
                    "{}: {} minimal cut {}",
                    t.top,
                    t.cut_sets.len(),
                    if t.cut_sets.len() == 1 { "set" } else { "sets" }
                )
                .unwrap();
                for cs in &t.cut_sets {
                    writeln!(out, "  {}", cut_set(cs)).unwrap();
                }
            }
        }
        if let Some(d) = &self.diff {
            for t in &d.tops {
                writeln!(out, "{}: {}", t.top, t.verdict).unwrap();
                for cs in &t.only_in_a {
                    writeln!(out, "  only in A: {}", cut_set(cs)).unwrap();
                }
                for cs in &t.only_in_b {
                    writeln!(out, "  only in B: {}", cut_set(cs)).unwrap();
                }
            }
            let s = &d.structure;
            for (what, items) in [
                ("element only in A", &s.elements_only_in_a),
                ("element only in B", &s.elements_only_in_b),
                ("port only in A", &s.ports_only_in_a),
                ("port only in B", &s.ports_only_in_b),
                ("failure mode only in A", &s.failure_modes_only_in_a),
                ("failure mode only in B", &s.failure_modes_only_in_b),
            ] {
                for i in items {
                    writeln!(out, "{what}: {i}").unwrap();
                }
            }
        }
        out
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        word.to_string()
    } else {
        format!("{word}s")
    }
}

pub fn cut_set(cs: &CutSet) -> String {
    let items: Vec<&str> = cs.iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(", "))
}
