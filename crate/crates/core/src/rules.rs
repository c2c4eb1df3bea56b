//! Failure propagation rules per function block type, the worst-case
//! fallback, and checks of a rule set against a block signature.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cfc::FunctionBlockInstance;
use crate::connector::{ConnectorTypeTable, UnknownConnectorType};
use crate::failure::FailureType;
use crate::report::{FindingKind, ValidationReport};

/// `<param>.<failure-type>`: a failure of one type at one block parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub param: String,
    pub failure_type: FailureType,
}

impl Term {
    pub fn new(param: impl Into<String>, failure_type: FailureType) -> Self {
        Self {
            param: param.into(),
            failure_type,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.param, self.failure_type)
    }
}

/// Boolean formula over input terms. The n-ary operators always hold at
/// least two operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleExpr {
    Term(Term),
    Not(Box<RuleExpr>),
    And(Vec<RuleExpr>),
    Or(Vec<RuleExpr>),
    Xor(Vec<RuleExpr>),
}

impl RuleExpr {
    pub fn term(param: impl Into<String>, failure_type: FailureType) -> Self {
        RuleExpr::Term(Term::new(param, failure_type))
    }

    /// All terms in left-to-right order.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            RuleExpr::Term(t) => out.push(t),
            RuleExpr::Not(e) => e.collect_terms(out),
            RuleExpr::And(es) | RuleExpr::Or(es) | RuleExpr::Xor(es) => {
                for e in es {
                    e.collect_terms(out);
                }
            }
        }
    }

    /// Evaluates the formula with `value` supplying each term.
    pub fn eval(&self, value: &mut impl FnMut(&Term) -> bool) -> bool {
        match self {
            RuleExpr::Term(t) => value(t),
            RuleExpr::Not(e) => !e.eval(value),
            RuleExpr::And(es) => es.iter().all(|e| e.eval(value)),
            RuleExpr::Or(es) => es.iter().any(|e| e.eval(value)),
            RuleExpr::Xor(es) => es.iter().fold(false, |acc, e| acc ^ e.eval(value)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RuleExpr::Or(_) | RuleExpr::Xor(_) => 1,
            RuleExpr::And(_) => 2,
            RuleExpr::Not(_) | RuleExpr::Term(_) => 3,
        }
    }
}

impl fmt::Display for RuleExpr {
    /// Writes the formula in the rule-library syntax. Nested n-ary operands
    /// are parenthesized whenever reparsing would otherwise regroup them.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, e: &RuleExpr, parent: u8) -> fmt::Result {
            if e.precedence() <= parent {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let (op, es) = match self {
            RuleExpr::Term(t) => return write!(f, "{t}"),
            RuleExpr::Not(e) => {
                f.write_str("NOT ")?;
                return operand(f, e, 2);
            }
            RuleExpr::And(es) => ("AND", es),
            RuleExpr::Or(es) => ("OR", es),
            RuleExpr::Xor(es) => ("XOR", es),
        };
        for (i, e) in es.iter().enumerate() {
            if i > 0 {
                write!(f, " {op} ")?;
            }
            operand(f, e, self.precedence())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub output: String,
    pub failure_type: FailureType,
    pub expr: RuleExpr,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{} = {}", self.output, self.failure_type, self.expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("block type `{block_type}` has two rules for `{output}.{failure_type}`")]
pub struct DuplicateRuleKey {
    pub block_type: String,
    pub output: String,
    pub failure_type: FailureType,
}

/// The rules of one block type, in declaration order, with at most one rule
/// per (output parameter, failure type).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub block_type: String,
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(block_type: impl Into<String>) -> Self {
        Self {
            block_type: block_type.into(),
            rules: Vec::new(),
        }
    }

    pub fn insert(
        &mut self,
        output: impl Into<String>,
        failure_type: FailureType,
        expr: RuleExpr,
    ) -> Result<(), DuplicateRuleKey> {
        let output = output.into();
        if self.get(&output, failure_type).is_some() {
            return Err(DuplicateRuleKey {
                block_type: self.block_type.clone(),
                output,
                failure_type,
            });
        }
        self.rules.push(Rule {
            output,
            failure_type,
            expr,
        });
        Ok(())
    }

    pub fn get(&self, output: &str, failure_type: FailureType) -> Option<&RuleExpr> {
        self.rules
            .iter()
            .find(|r| r.output == output && r.failure_type == failure_type)
            .map(|r| &r.expr)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Removes the rule for a key, returning it.
    pub fn remove(&mut self, output: &str, failure_type: FailureType) -> Option<RuleExpr> {
        let pos = self
            .rules
            .iter()
            .position(|r| r.output == output && r.failure_type == failure_type)?;
        Some(self.rules.remove(pos).expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule set for block type `{0}` is defined twice")]
pub struct DuplicateBlockType(pub String);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleLibrary {
    rule_sets: BTreeMap<String, RuleSet>,
    pub connector_types: ConnectorTypeTable,
}

impl RuleLibrary {
    pub fn new(connector_types: ConnectorTypeTable) -> Self {
        Self {
            rule_sets: BTreeMap::new(),
            connector_types,
        }
    }

    pub fn add(&mut self, rule_set: RuleSet) -> Result<(), DuplicateBlockType> {
        if self.rule_sets.contains_key(&rule_set.block_type) {
            return Err(DuplicateBlockType(rule_set.block_type));
        }
        self.rule_sets.insert(rule_set.block_type.clone(), rule_set);
        Ok(())
    }

    pub fn get(&self, block_type: &str) -> Option<&RuleSet> {
        self.rule_sets.get(block_type)
    }

    pub fn get_mut(&mut self, block_type: &str) -> Option<&mut RuleSet> {
        self.rule_sets.get_mut(block_type)
    }

    pub fn rule_sets(&self) -> impl Iterator<Item = &RuleSet> {
        self.rule_sets.values()
    }

    pub fn len(&self) -> usize {
        self.rule_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule_sets.is_empty()
    }
}

/// Exact-name lookup; `None` tells the caller to fall back to the worst case.
pub fn lookup_rules<'a>(lib: &'a RuleLibrary, block_type: &str) -> Option<&'a RuleSet> {
    lib.get(block_type)
}

/// Builds the worst-case rule set for a block: every output failure type is
/// the disjunction of every failure type of every input parameter.
pub fn synthesize_worst_case(
    block: &FunctionBlockInstance,
    table: &ConnectorTypeTable,
) -> Result<RuleSet, UnknownConnectorType> {
    let mut operands = Vec::new();
    for p in &block.inputs {
        for t in table.map(&p.connector_type)?.iter() {
            operands.push(RuleExpr::term(p.name.clone(), t));
        }
    }
    let mut rs = RuleSet::new(block.block_type.clone());
    for out in &block.outputs {
        let out_types = table.map(&out.connector_type)?;
        if operands.is_empty() {
            continue;
        }
        for t in out_types.iter() {
            let expr = if operands.len() == 1 {
                operands[0].clone()
            } else {
                RuleExpr::Or(operands.clone())
            };
            // keys are distinct: parameter names are unique per block
            let _ = rs.insert(out.name.clone(), t, expr);
        }
    }
    Ok(rs)
}

/// Checks a rule set against the signature of a concrete block instance.
pub fn validate_rule_set(
    rs: &RuleSet,
    signature: &FunctionBlockInstance,
    table: &ConnectorTypeTable,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let base = format!("{}@{}", rs.block_type, signature.name);

    for r in rs.rules() {
        let loc = format!("{base}/{}.{}", r.output, r.failure_type);
        match signature.output(&r.output) {
            None => report.error(
                FindingKind::UnknownOutputParameter,
                loc.clone(),
                format!(
                    "block `{}` has no output parameter `{}`",
                    signature.name, r.output
                ),
            ),
            Some(p) => {
                if let Ok(set) = table.map(&p.connector_type) {
                    if !set.contains(r.failure_type) {
                        report.error(
                            FindingKind::FailureTypeOutOfMap,
                            loc.clone(),
                            format!(
                                "{} is not a failure type of connector type `{}`",
                                r.failure_type, p.connector_type
                            ),
                        );
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for term in r.expr.terms() {
            if !seen.insert(term) {
                continue;
            }
            match signature.input(&term.param) {
                None => report.error(
                    FindingKind::UnknownInputParameter,
                    loc.clone(),
                    format!(
                        "term `{term}`: block `{}` has no input parameter `{}`",
                        signature.name, term.param
                    ),
                ),
                Some(p) => {
                    if let Ok(set) = table.map(&p.connector_type) {
                        if !set.contains(term.failure_type) {
                            report.error(
                                FindingKind::FailureTypeOutOfMap,
                                loc.clone(),
                                format!(
                                    "term `{term}`: {} is not a failure type of connector type `{}`",
                                    term.failure_type, p.connector_type
                                ),
                            );
                        }
                    }
                }
            }
        }
    }

    for out in &signature.outputs {
        let Ok(set) = table.map(&out.connector_type) else {
            report.error(
                FindingKind::UnknownConnectorType,
                format!("{base}/{}", out.name),
                format!("connector type `{}` is not declared", out.connector_type),
            );
            continue;
        };
        for t in set.iter() {
            if rs.get(&out.name, t).is_none() {
                report.warning(
                    FindingKind::IncompleteCoverage,
                    format!("{base}/{}.{t}", out.name),
                    "incomplete coverage: no rule, the failure type does not propagate",
                );
            }
        }
    }
    for p in &signature.inputs {
        if !table.contains(&p.connector_type) {
            report.error(
                FindingKind::UnknownConnectorType,
                format!("{base}/{}", p.name),
                format!("connector type `{}` is not declared", p.connector_type),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfc::Port;
    use crate::connector::{ConnectorCategory, ConnectorTypeDef};
    use alloc::string::ToString;
    use alloc::vec;
    use FailureType::*;

    fn table() -> ConnectorTypeTable {
        let mut t = ConnectorTypeTable::new();
        t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
            .unwrap();
        t.declare("GN", ConnectorTypeDef::Category(ConnectorCategory::Numeric))
            .unwrap();
        t
    }

    fn block(ins: &[(&str, &str)], outs: &[(&str, &str)]) -> FunctionBlockInstance {
        FunctionBlockInstance {
            name: "fb".into(),
            block_type: "X".into(),
            inputs: ins.iter().map(|(n, t)| Port::new(*n, *t)).collect(),
            outputs: outs.iter().map(|(n, t)| Port::new(*n, *t)).collect(),
        }
    }

    #[test]
    fn worst_case_two_boolean_inputs() {
        let b = block(&[("IN1", "Bl"), ("IN2", "Bl")], &[("OUT", "Bl")]);
        let rs = synthesize_worst_case(&b, &table()).unwrap();
        assert_eq!(rs.len(), 6);
        // hand expansion: IN1 x 6 followed by IN2 x 6
        let mut expected = Vec::new();
        for p in ["IN1", "IN2"] {
            for t in [
                FalsePositive,
                FalseNegative,
                Omission,
                Commission,
                TooEarly,
                TooLate,
            ] {
                expected.push(RuleExpr::term(p, t));
            }
        }
        for r in rs.rules() {
            assert_eq!(r.expr, RuleExpr::Or(expected.clone()));
        }
    }

    #[test]
    fn worst_case_single_input_same_type() {
        let b = block(&[("IN", "GN")], &[("OUT", "GN")]);
        let rs = synthesize_worst_case(&b, &table()).unwrap();
        assert_eq!(rs.len(), 6);
        for r in rs.rules() {
            let RuleExpr::Or(terms) = &r.expr else {
                panic!("expected OR")
            };
            assert_eq!(terms.len(), 6);
        }
    }

    #[test]
    fn worst_case_without_inputs_is_empty() {
        let b = block(&[], &[("OUT", "Bl")]);
        assert!(synthesize_worst_case(&b, &table()).unwrap().is_empty());
    }

    #[test]
    fn worst_case_unknown_type() {
        let b = block(&[("IN", "ZZ")], &[("OUT", "Bl")]);
        assert!(synthesize_worst_case(&b, &table()).is_err());
    }

    #[test]
    fn duplicate_rule_key_rejected() {
        let mut rs = RuleSet::new("T");
        rs.insert("OUT", FalsePositive, RuleExpr::term("IN", TooLow))
            .unwrap();
        assert!(rs
            .insert("OUT", FalsePositive, RuleExpr::term("IN", TooHigh))
            .is_err());
    }

    #[test]
    fn too_high_on_boolean_output_is_error() {
        let b = block(&[("IN", "GN")], &[("OUT", "Bl")]);
        let mut rs = RuleSet::new("X");
        rs.insert("OUT", TooHigh, RuleExpr::term("IN", TooHigh))
            .unwrap();
        let r = validate_rule_set(&rs, &b, &table());
        let errs: Vec<_> = r.errors().map(|f| f.kind).collect();
        assert_eq!(errs, [FindingKind::FailureTypeOutOfMap]);
    }

    #[test]
    fn unknown_term_parameter_is_error() {
        let b = block(&[("IN", "GN")], &[("OUT", "Bl")]);
        let mut rs = RuleSet::new("X");
        rs.insert("OUT", Omission, RuleExpr::term("NOPE", Omission))
            .unwrap();
        rs.insert("NOUT", Omission, RuleExpr::term("IN", Omission))
            .unwrap();
        let r = validate_rule_set(&rs, &b, &table());
        let errs: Vec<_> = r.errors().map(|f| f.kind).collect();
        assert_eq!(
            errs,
            [
                FindingKind::UnknownInputParameter,
                FindingKind::UnknownOutputParameter
            ]
        );
        assert_eq!(r.warning_count(), 5);
    }

    #[test]
    fn display_keeps_grouping() {
        let e = RuleExpr::And(vec![
            RuleExpr::Or(vec![
                RuleExpr::term("A", Omission),
                RuleExpr::term("B", Omission),
            ]),
            RuleExpr::Not(Box::new(RuleExpr::term("C", TooLate))),
            RuleExpr::And(vec![
                RuleExpr::term("D", TooLate),
                RuleExpr::term("E", TooLate),
            ]),
        ]);
        assert_eq!(
            e.to_string(),
            "(A.omission OR B.omission) AND NOT C.too-late AND (D.too-late AND E.too-late)"
        );
    }

    #[test]
    fn eval_follows_operators() {
        let e = RuleExpr::Xor(vec![
            RuleExpr::term("A", Omission),
            RuleExpr::term("B", Omission),
            RuleExpr::term("C", Omission),
        ]);
        let v = |on: &[&str]| {
            let on: Vec<String> = on.iter().map(|s| s.to_string()).collect();
            e.eval(&mut |t: &Term| on.contains(&t.param))
        };
        assert!(v(&["A"]));
        assert!(!v(&["A", "B"]));
        assert!(v(&["A", "B", "C"]));
    }
}
