//! Reference semantics that never build gates.
//!
//! [`Interpreter`] evaluates an output failure mode by substituting rule
//! formulas through linkages and connections, 64 assignments at a time.
//! [`minimal_satisfying_sets`] enumerates the full truth table of a
//! monotone function and keeps its minimal satisfying assignments.

use std::collections::{BTreeMap, BTreeSet};

use cftgen_core::cfc::{Component, LinkSource, LinkTarget};
use cftgen_core::rules::RuleExpr;
use cftgen_core::{CutSet, FailureType, RuleLibrary, System};

/// Values of a basic event across 64 assignments, one per bit.
pub type Lanes = u64;

pub struct Interpreter<'a> {
    pub system: &'a System,
    pub lib: &'a RuleLibrary,
}

impl<'a> Interpreter<'a> {
    pub fn new(system: &'a System, lib: &'a RuleLibrary) -> Self {
        Self { system, lib }
    }

    fn types(&self, connector_type: &str) -> Vec<FailureType> {
        self.lib
            .connector_types
            .map(connector_type)
            .unwrap()
            .iter()
            .collect()
    }

    fn component(&self, name: &str) -> &'a Component {
        self.system.component(name).unwrap()
    }

    /// Every basic-event name the interpreter can ask for, sorted.
    pub fn boundary_events(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for c in &self.system.components {
            for p in &c.inports {
                let (comp, port) = match self
                    .system
                    .connections
                    .iter()
                    .find(|k| k.to.component == c.name && k.to.port == p.name)
                {
                    Some(k) if self.component(&k.from.component).inports.is_empty() => {
                        (k.from.component.as_str(), k.from.port.as_str())
                    }
                    Some(_) => continue,
                    None => (c.name.as_str(), p.name.as_str()),
                };
                for t in self.types(&p.connector_type) {
                    out.insert(format!("{comp}.{port}.{t}"));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn output(
        &self,
        component: &str,
        port: &str,
        t: FailureType,
        env: &dyn Fn(&str) -> Lanes,
    ) -> Lanes {
        let c = self.component(component);
        let target = LinkTarget::DiagramOutput(port.into());
        match c.diagram.linkages.iter().find(|l| l.target == target) {
            None => 0,
            Some(l) => self.source(c, &l.source, t, env),
        }
    }

    fn inport(
        &self,
        c: &Component,
        port: &str,
        t: FailureType,
        env: &dyn Fn(&str) -> Lanes,
    ) -> Lanes {
        let upstream = self
            .system
            .connections
            .iter()
            .find(|k| k.to.component == c.name && k.to.port == port);
        match upstream {
            None => env(&format!("{}.{port}.{t}", c.name)),
            Some(k) if self.component(&k.from.component).inports.is_empty() => {
                env(&format!("{}.{}.{t}", k.from.component, k.from.port))
            }
            Some(k) => self.output(&k.from.component, &k.from.port, t, env),
        }
    }

    fn source(
        &self,
        c: &Component,
        s: &LinkSource,
        t: FailureType,
        env: &dyn Fn(&str) -> Lanes,
    ) -> Lanes {
        match s {
            LinkSource::DiagramInput(n) => self.inport(c, n, t, env),
            LinkSource::BlockOutput { block, param } => self.block_output(c, block, param, t, env),
        }
    }

    fn block_output(
        &self,
        c: &Component,
        block: &str,
        out: &str,
        t: FailureType,
        env: &dyn Fn(&str) -> Lanes,
    ) -> Lanes {
        let b = c.diagram.block(block).unwrap();
        if b.inputs.is_empty() || b.outputs.is_empty() {
            return 0;
        }
        let term = |param: &str, ft: FailureType| -> Lanes {
            let target = LinkTarget::BlockInput {
                block: block.into(),
                param: param.into(),
            };
            match c.diagram.linkages.iter().find(|l| l.target == target) {
                None => 0,
                Some(l) => self.source(c, &l.source, ft, env),
            }
        };
        match self.lib.get(&b.block_type) {
            Some(rs) => match rs.get(out, t) {
                None => 0,
                Some(expr) => eval(expr, &term),
            },
            // worst case: any failure of any input
            None => b
                .inputs
                .iter()
                .flat_map(|p| {
                    self.types(&p.connector_type)
                        .into_iter()
                        .map(move |ft| (p, ft))
                })
                .fold(0, |acc, (p, ft)| acc | term(&p.name, ft)),
        }
    }
}

fn eval(expr: &RuleExpr, term: &dyn Fn(&str, FailureType) -> Lanes) -> Lanes {
    match expr {
        RuleExpr::Term(t) => term(&t.param, t.failure_type),
        RuleExpr::Not(e) => !eval(e, term),
        RuleExpr::And(es) => es.iter().fold(!0, |a, e| a & eval(e, term)),
        RuleExpr::Or(es) => es.iter().fold(0, |a, e| a | eval(e, term)),
        RuleExpr::Xor(es) => es.iter().fold(0, |a, e| a ^ eval(e, term)),
    }
}

/// Truth table of `f` over `vars`: bit `j` of word `w` is the value at the
/// assignment `64 * w + j`, where variable `i` is true iff bit `i` of the
/// assignment index is set.
pub fn truth_table(vars: &[String], f: impl Fn(&dyn Fn(&str) -> Lanes) -> Lanes) -> Vec<Lanes> {
    assert!(vars.len() <= 20, "truth table too large");
    let rows = 1usize << vars.len();
    let words = rows.div_ceil(64);
    let index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut table = Vec::with_capacity(words);
    for w in 0..words {
        let lanes = |name: &str| -> Lanes {
            let i = *index
                .get(name)
                .unwrap_or_else(|| panic!("basic event `{name}` outside the variable set"));
            let mut m = 0;
            for j in 0..64 {
                if ((w * 64 + j) >> i) & 1 == 1 {
                    m |= 1 << j;
                }
            }
            m
        };
        let mut v = f(&lanes);
        if rows < 64 {
            v &= (1 << rows) - 1;
        }
        table.push(v);
    }
    table
}

pub fn table_get(table: &[Lanes], row: usize) -> bool {
    (table[row / 64] >> (row % 64)) & 1 == 1
}

/// Minimal satisfying assignments of a monotone function given by its
/// truth table: satisfying rows from which no single variable can be
/// dropped.
pub fn minimal_satisfying_sets(vars: &[String], table: &[Lanes]) -> Vec<CutSet> {
    let rows = 1usize << vars.len();
    let mut out = Vec::new();
    for row in 0..rows {
        if !table_get(table, row) {
            continue;
        }
        let minimal = (0..vars.len())
            .filter(|i| (row >> i) & 1 == 1)
            .all(|i| !table_get(table, row & !(1 << i)));
        if minimal {
            out.push(
                (0..vars.len())
                    .filter(|i| (row >> i) & 1 == 1)
                    .map(|i| vars[i].clone())
                    .collect::<CutSet>(),
            );
        }
    }
    cftgen_core::analysis::sort_cut_sets(&mut out);
    out
}

/// Evaluates `f` at a single assignment given as the set of true events.
pub fn at(assignment: &BTreeSet<String>) -> impl Fn(&str) -> Lanes + '_ {
    move |name| if assignment.contains(name) { !0 } else { 0 }
}

/// Evaluates a flattened tree over 64 assignments at once.
pub fn tree_lanes(tree: &cftgen_core::ClassicFaultTree, env: &dyn Fn(&str) -> Lanes) -> Lanes {
    use cftgen_core::cft::{GateKind, TreeNode};
    let mut values: Vec<Lanes> = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let v = match node {
            TreeNode::BasicEvent(name) => env(name),
            TreeNode::False => 0,
            TreeNode::Gate { kind, inputs } => {
                let mut it = inputs.iter().map(|&i| values[i]);
                match kind {
                    GateKind::And => it.fold(!0, |a, b| a & b),
                    GateKind::Or => it.fold(0, |a, b| a | b),
                    GateKind::Xor => it.fold(0, |a, b| a ^ b),
                    GateKind::Not => !it.next().unwrap(),
                }
            }
        };
        values.push(v);
    }
    values[tree.top]
}
