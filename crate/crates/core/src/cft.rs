//! Component fault trees: per-component elements with input/output failure
//! modes, gates and edges, plus flattening into a classic fault tree.
//!
//! Gate inputs are stored on the gate itself; [`CftElement::edges`] holds only
//! the edges that drive output failure modes. [`CftElement::all_edges`]
//! yields the complete edge relation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cfc::{Port, PortRef};
use crate::failure::FailureType;
use crate::report::{FindingKind, ValidationReport};

/// Identifier of a node inside one CFT element.
pub type NodeId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureMode {
    pub id: NodeId,
    pub port: String,
    pub failure_type: FailureType,
    pub direction: Direction,
}

/// Canonical failure-mode identifier, `<component>/<port>/<failure-type>`.
pub fn failure_mode_id(component: &str, port: &str, failure_type: FailureType) -> NodeId {
    format!("{component}/{port}/{failure_type}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Not => "NOT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "AND" => Some(GateKind::And),
            "OR" => Some(GateKind::Or),
            "XOR" => Some(GateKind::Xor),
            "NOT" => Some(GateKind::Not),
            _ => None,
        }
    }

    fn apply(self, mut values: impl Iterator<Item = bool>) -> bool {
        match self {
            GateKind::And => values.all(|v| v),
            GateKind::Or => values.any(|v| v),
            GateKind::Xor => values.fold(false, |a, v| a ^ v),
            GateKind::Not => !values.next().unwrap_or(false),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: NodeId,
    pub kind: GateKind,
    pub inputs: Vec<NodeId>,
}

/// Directed edge `from -> to` inside one element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CftElement {
    pub component: String,
    pub inports: Vec<Port>,
    pub outports: Vec<Port>,
    pub input_failure_modes: Vec<FailureMode>,
    pub output_failure_modes: Vec<FailureMode>,
    /// Internal basic events. Only present when undriven block inputs are
    /// modelled as corruptible parameters.
    pub basic_events: Vec<NodeId>,
    pub gates: Vec<Gate>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    InputFailureMode,
    OutputFailureMode,
    BasicEvent,
    Gate,
}

impl CftElement {
    pub fn new(component: impl Into<String>, inports: Vec<Port>, outports: Vec<Port>) -> Self {
        Self {
            component: component.into(),
            inports,
            outports,
            input_failure_modes: Vec::new(),
            output_failure_modes: Vec::new(),
            basic_events: Vec::new(),
            gates: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node_kind(&self, id: &str) -> Option<NodeKind> {
        if self.input_failure_modes.iter().any(|f| f.id == id) {
            Some(NodeKind::InputFailureMode)
        } else if self.output_failure_modes.iter().any(|f| f.id == id) {
            Some(NodeKind::OutputFailureMode)
        } else if self.gates.iter().any(|g| g.id == id) {
            Some(NodeKind::Gate)
        } else if self.basic_events.iter().any(|b| b == id) {
            Some(NodeKind::BasicEvent)
        } else {
            None
        }
    }

    pub fn gate(&self, id: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.id == id)
    }

    pub fn failure_mode(
        &self,
        direction: Direction,
        port: &str,
        t: FailureType,
    ) -> Option<&FailureMode> {
        let list = match direction {
            Direction::Input => &self.input_failure_modes,
            Direction::Output => &self.output_failure_modes,
        };
        list.iter().find(|f| f.port == port && f.failure_type == t)
    }

    /// The node driving an output failure mode, if any.
    pub fn driver(&self, ofm: &str) -> Option<&NodeId> {
        self.edges.iter().find(|e| e.to == ofm).map(|e| &e.from)
    }

    /// Every edge, gate inputs included, in a deterministic order.
    pub fn all_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.gates
            .iter()
            .flat_map(|g| {
                g.inputs.iter().map(move |i| Edge {
                    from: i.clone(),
                    to: g.id.clone(),
                })
            })
            .chain(self.edges.iter().cloned())
    }

    pub fn gate_count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

/// Failure-mode-level link between elements: an output failure mode of one
/// component feeds the input failure mode of the same type downstream.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FailureModeLink {
    pub from: FailureModeRef,
    pub to: FailureModeRef,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailureModeRef {
    pub component: String,
    pub port: String,
    pub failure_type: FailureType,
}

impl FailureModeRef {
    pub fn new(
        component: impl Into<String>,
        port: impl Into<String>,
        failure_type: FailureType,
    ) -> Self {
        Self {
            component: component.into(),
            port: port.into(),
            failure_type,
        }
    }
}

impl fmt::Display for FailureModeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.component, self.port, self.failure_type)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortLink {
    pub from: PortRef,
    pub to: PortRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CftProject {
    pub elements: Vec<CftElement>,
    pub port_links: Vec<PortLink>,
    pub links: Vec<FailureModeLink>,
}

impl CftProject {
    pub fn element(&self, component: &str) -> Option<&CftElement> {
        self.elements.iter().find(|e| e.component == component)
    }

    pub fn element_mut(&mut self, component: &str) -> Option<&mut CftElement> {
        self.elements.iter_mut().find(|e| e.component == component)
    }

    /// All output failure modes, as top-event candidates.
    pub fn output_failure_modes(&self) -> impl Iterator<Item = FailureModeRef> + '_ {
        self.elements.iter().flat_map(|e| {
            e.output_failure_modes
                .iter()
                .map(|f| FailureModeRef::new(e.component.clone(), f.port.clone(), f.failure_type))
        })
    }

    /// Evaluates a top event directly on the component network, with
    /// `basic` supplying the value of each basic event (named as in
    /// [`flatten`]).
    pub fn evaluate(
        &self,
        top: &FailureModeRef,
        basic: &mut dyn FnMut(&str) -> bool,
    ) -> Result<bool, FlattenError> {
        let view = View::new(self);
        let (comp, ofm) = view.top(top)?;
        let mut stack = BTreeSet::new();
        view.eval_ofm(comp, ofm, basic, &mut stack)
    }
}

/// Name of the basic event standing for a failure mode at a system boundary.
pub fn basic_event_name(component: &str, port: &str, failure_type: FailureType) -> String {
    format!("{component}.{port}.{failure_type}")
}

/// Checks the structural invariants of a CFT project.
pub fn validate_cft(project: &CftProject) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut components = BTreeSet::new();
    for e in &project.elements {
        if !components.insert(e.component.as_str()) {
            report.error(
                FindingKind::DuplicateElement,
                e.component.clone(),
                format!("element for component `{}` appears twice", e.component),
            );
        }
        validate_element(e, &mut report);
    }

    let connected: BTreeSet<(&PortRef, &PortRef)> = project
        .port_links
        .iter()
        .map(|l| (&l.from, &l.to))
        .collect();
    for (i, l) in project.port_links.iter().enumerate() {
        let from = project
            .element(&l.from.component)
            .and_then(|e| e.outports.iter().find(|p| p.name == l.from.port));
        let to = project
            .element(&l.to.component)
            .and_then(|e| e.inports.iter().find(|p| p.name == l.to.port));
        match (from, to) {
            (Some(f), Some(t)) if f.connector_type != t.connector_type => report.error(
                FindingKind::InvalidLink,
                format!("port_links[{i}]"),
                format!("`{}` and `{}` have different connector types", l.from, l.to),
            ),
            (Some(_), Some(_)) => {}
            _ => report.error(
                FindingKind::InvalidLink,
                format!("port_links[{i}]"),
                format!(
                    "`{}` -> `{}` does not join an outport to an inport",
                    l.from, l.to
                ),
            ),
        }
    }

    let mut linked_inputs = BTreeSet::new();
    for (i, l) in project.links.iter().enumerate() {
        let loc = format!("links[{i}]");
        let from_ok = project
            .element(&l.from.component)
            .and_then(|e| e.failure_mode(Direction::Output, &l.from.port, l.from.failure_type))
            .is_some();
        let to_ok = project
            .element(&l.to.component)
            .and_then(|e| e.failure_mode(Direction::Input, &l.to.port, l.to.failure_type))
            .is_some();
        if !from_ok || !to_ok {
            report.error(
                FindingKind::InvalidLink,
                loc,
                format!(
                    "`{}` -> `{}` does not join an output to an input failure mode",
                    l.from, l.to
                ),
            );
            continue;
        }
        if l.from.failure_type != l.to.failure_type {
            report.error(
                FindingKind::InvalidLink,
                loc,
                format!("`{}` -> `{}` joins different failure types", l.from, l.to),
            );
            continue;
        }
        let from = PortRef::new(l.from.component.clone(), l.from.port.clone());
        let to = PortRef::new(l.to.component.clone(), l.to.port.clone());
        if !connected.contains(&(&from, &to)) {
            report.error(
                FindingKind::InvalidLink,
                loc,
                format!("ports `{from}` and `{to}` are not connected"),
            );
            continue;
        }
        if !linked_inputs.insert(&l.to) {
            report.error(
                FindingKind::MultipleDrivers,
                loc,
                format!("input failure mode `{}` is fed by more than one link", l.to),
            );
        }
    }
    report
}

fn validate_element(e: &CftElement, report: &mut ValidationReport) {
    let c = &e.component;
    let mut ids: BTreeMap<&str, NodeKind> = BTreeMap::new();
    fn declare<'a>(
        ids: &mut BTreeMap<&'a str, NodeKind>,
        c: &str,
        id: &'a str,
        kind: NodeKind,
        report: &mut ValidationReport,
    ) {
        if ids.insert(id, kind).is_some() {
            report.error(
                FindingKind::DuplicateNodeId,
                format!("{c}:{id}"),
                format!("node id `{id}` is declared more than once"),
            );
        }
    }
    for (dir, list, ports) in [
        (Direction::Input, &e.input_failure_modes, &e.inports),
        (Direction::Output, &e.output_failure_modes, &e.outports),
    ] {
        let kind = match dir {
            Direction::Input => NodeKind::InputFailureMode,
            Direction::Output => NodeKind::OutputFailureMode,
        };
        let mut keys = BTreeSet::new();
        for fm in list {
            declare(&mut ids, c, &fm.id, kind, report);
            if fm.direction != dir {
                report.error(
                    FindingKind::EdgeShape,
                    format!("{c}:{}", fm.id),
                    "failure mode listed under the wrong direction",
                );
            }
            if !ports.iter().any(|p| p.name == fm.port) {
                report.error(
                    FindingKind::UnknownPort,
                    format!("{c}:{}", fm.id),
                    format!("failure mode refers to unknown port `{}`", fm.port),
                );
            }
            if !keys.insert((fm.port.as_str(), fm.failure_type)) {
                report.error(
                    FindingKind::DuplicateFailureMode,
                    format!("{c}:{}", fm.id),
                    format!("two failure modes for `{}.{}`", fm.port, fm.failure_type),
                );
            }
        }
    }
    for b in &e.basic_events {
        declare(&mut ids, c, b, NodeKind::BasicEvent, report);
    }
    for g in &e.gates {
        declare(&mut ids, c, &g.id, NodeKind::Gate, report);
    }

    for g in &e.gates {
        let arity_ok = match g.kind {
            GateKind::Not => g.inputs.len() == 1,
            _ => g.inputs.len() >= 2,
        };
        if !arity_ok {
            report.error(
                FindingKind::GateArity,
                format!("{c}:{}", g.id),
                format!("{} gate with {} inputs", g.kind, g.inputs.len()),
            );
        }
        for i in &g.inputs {
            check_source(c, i, &g.id, &ids, report);
        }
    }
    let mut driven = BTreeSet::new();
    for edge in &e.edges {
        check_source(c, &edge.from, &edge.to, &ids, report);
        match ids.get(edge.to.as_str()) {
            None => report.error(
                FindingKind::DanglingNodeRef,
                format!("{c}:{}", edge.to),
                format!("edge target `{}` does not exist", edge.to),
            ),
            Some(NodeKind::OutputFailureMode) => {
                if !driven.insert(edge.to.as_str()) {
                    report.error(
                        FindingKind::MultipleDrivers,
                        format!("{c}:{}", edge.to),
                        "output failure mode has more than one incoming edge",
                    );
                }
            }
            Some(_) => report.error(
                FindingKind::EdgeShape,
                format!("{c}:{}", edge.to),
                "edge target must be an output failure mode (gate inputs belong to the gate)",
            ),
        }
    }

    // gate graph acyclicity
    let gates: BTreeMap<&str, &Gate> = e.gates.iter().map(|g| (g.id.as_str(), g)).collect();
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    for g in &e.gates {
        if let Some(id) = find_cycle(g.id.as_str(), &gates, &mut state) {
            report.error(
                FindingKind::CftCycle,
                format!("{c}:{id}"),
                "gate graph contains a cycle",
            );
            break;
        }
    }
}

fn find_cycle<'a>(
    id: &'a str,
    gates: &BTreeMap<&'a str, &'a Gate>,
    state: &mut BTreeMap<&'a str, u8>,
) -> Option<&'a str> {
    match state.get(id) {
        Some(1) => return Some(id),
        Some(_) => return None,
        None => {}
    }
    let g = gates.get(id)?;
    state.insert(id, 1);
    for i in &g.inputs {
        if let Some(c) = find_cycle(i.as_str(), gates, state) {
            return Some(c);
        }
    }
    state.insert(id, 2);
    None
}

fn check_source(
    c: &str,
    from: &str,
    to: &str,
    ids: &BTreeMap<&str, NodeKind>,
    report: &mut ValidationReport,
) {
    match ids.get(from) {
        None => report.error(
            FindingKind::DanglingNodeRef,
            format!("{c}:{to}"),
            format!("`{from}` does not exist"),
        ),
        Some(NodeKind::OutputFailureMode) => report.error(
            FindingKind::EdgeShape,
            format!("{c}:{to}"),
            format!("edge source `{from}` is an output failure mode"),
        ),
        Some(_) => {}
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("unknown top event `{0}`")]
    UnknownTop(FailureModeRef),
    #[error("failure propagation model is cyclic at `{0}`")]
    CyclicModel(String),
    #[error("`{0}` refers to a node that does not exist")]
    DanglingNode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    BasicEvent(String),
    /// Constant "no failure".
    False,
    Gate {
        kind: GateKind,
        inputs: Vec<usize>,
    },
}

/// A fault tree without component boundaries. Nodes are stored children
/// before parents; `top` indexes the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicFaultTree {
    pub nodes: Vec<TreeNode>,
    pub top: usize,
}

impl ClassicFaultTree {
    pub fn basic_events(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::BasicEvent(b) => Some(b.as_str()),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn gate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Gate { .. }))
            .count()
    }

    pub fn is_coherent(&self) -> bool {
        !self.nodes.iter().any(|n| {
            matches!(
                n,
                TreeNode::Gate {
                    kind: GateKind::Not | GateKind::Xor,
                    ..
                }
            )
        })
    }

    pub fn evaluate(&self, basic: &mut dyn FnMut(&str) -> bool) -> bool {
        // children precede parents, so one forward pass suffices
        let mut values = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match n {
                TreeNode::BasicEvent(b) => basic(b),
                TreeNode::False => false,
                TreeNode::Gate { kind, inputs } => kind.apply(inputs.iter().map(|&i| values[i])),
            };
            values.push(v);
        }
        values[self.top]
    }
}

/// Resolves failure modes and links across a project.
struct View<'a> {
    elements: BTreeMap<&'a str, &'a CftElement>,
    links_into: BTreeMap<(&'a str, &'a str, FailureType), &'a FailureModeRef>,
}

enum Resolved<'a> {
    Node(&'a str, &'a str),
    Basic(String),
    False,
}

impl<'a> View<'a> {
    fn new(project: &'a CftProject) -> Self {
        Self {
            elements: project
                .elements
                .iter()
                .map(|e| (e.component.as_str(), e))
                .collect(),
            links_into: project
                .links
                .iter()
                .map(|l| {
                    (
                        (
                            l.to.component.as_str(),
                            l.to.port.as_str(),
                            l.to.failure_type,
                        ),
                        &l.from,
                    )
                })
                .collect(),
        }
    }

    fn top(&self, top: &FailureModeRef) -> Result<(&'a str, &'a str), FlattenError> {
        let e = self
            .elements
            .get(top.component.as_str())
            .ok_or_else(|| FlattenError::UnknownTop(top.clone()))?;
        let fm = e
            .failure_mode(Direction::Output, &top.port, top.failure_type)
            .ok_or_else(|| FlattenError::UnknownTop(top.clone()))?;
        Ok((e.component.as_str(), fm.id.as_str()))
    }

    /// What an input failure mode stands for once component boundaries are
    /// removed. A linked input follows its upstream output failure mode's
    /// driver. An upstream output failure mode without a driver is constant
    /// false, unless its element has no input failure modes at all: such a
    /// source component's outputs fail for reasons the model does not
    /// resolve, so they stay basic events.
    fn resolve_input(
        &self,
        comp: &'a str,
        fm: &'a FailureMode,
    ) -> Result<Resolved<'a>, FlattenError> {
        let Some(up) = self
            .links_into
            .get(&(comp, fm.port.as_str(), fm.failure_type))
        else {
            return Ok(Resolved::Basic(basic_event_name(
                comp,
                &fm.port,
                fm.failure_type,
            )));
        };
        let ue = self
            .elements
            .get(up.component.as_str())
            .ok_or_else(|| FlattenError::DanglingNode(up.to_string()))?;
        let ofm = ue
            .failure_mode(Direction::Output, &up.port, up.failure_type)
            .ok_or_else(|| FlattenError::DanglingNode(up.to_string()))?;
        match ue.driver(&ofm.id) {
            Some(_) => Ok(Resolved::Node(ue.component.as_str(), ofm.id.as_str())),
            None if ue.input_failure_modes.is_empty() => Ok(Resolved::Basic(basic_event_name(
                &up.component,
                &up.port,
                up.failure_type,
            ))),
            None => Ok(Resolved::False),
        }
    }

    fn eval_ofm(
        &self,
        comp: &'a str,
        ofm: &'a str,
        basic: &mut dyn FnMut(&str) -> bool,
        stack: &mut BTreeSet<(&'a str, &'a str)>,
    ) -> Result<bool, FlattenError> {
        let e = self.elements[comp];
        match e.driver(ofm) {
            None => Ok(false),
            Some(src) => self.eval_node(comp, src, basic, stack),
        }
    }

    fn eval_node(
        &self,
        comp: &'a str,
        id: &'a str,
        basic: &mut dyn FnMut(&str) -> bool,
        stack: &mut BTreeSet<(&'a str, &'a str)>,
    ) -> Result<bool, FlattenError> {
        let e = self.elements[comp];
        if !stack.insert((comp, id)) {
            return Err(FlattenError::CyclicModel(format!("{comp}:{id}")));
        }
        let v = if let Some(g) = e.gate(id) {
            let mut vals = Vec::with_capacity(g.inputs.len());
            for i in &g.inputs {
                vals.push(self.eval_node(comp, i, basic, stack)?);
            }
            g.kind.apply(vals.into_iter())
        } else if let Some(fm) = e.input_failure_modes.iter().find(|f| f.id == id) {
            match self.resolve_input(comp, fm)? {
                Resolved::Basic(name) => basic(&name),
                Resolved::False => false,
                Resolved::Node(uc, uofm) => self.eval_ofm(uc, uofm, basic, stack)?,
            }
        } else if e.basic_events.iter().any(|b| b == id) {
            basic(&internal_event_name(comp, id))
        } else {
            return Err(FlattenError::DanglingNode(format!("{comp}:{id}")));
        };
        stack.remove(&(comp, id));
        Ok(v)
    }
}

fn internal_event_name(comp: &str, id: &str) -> String {
    let local = id
        .strip_prefix(comp)
        .and_then(|s| s.strip_prefix('/'))
        .unwrap_or(id);
    format!("{comp}.{}", local.replace('/', "."))
}

struct Flattener<'a> {
    view: View<'a>,
    nodes: Vec<TreeNode>,
    memo: BTreeMap<(&'a str, &'a str), usize>,
    basic: BTreeMap<String, usize>,
    false_node: Option<usize>,
    stack: BTreeSet<(&'a str, &'a str)>,
}

impl<'a> Flattener<'a> {
    fn push(&mut self, n: TreeNode) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn constant_false(&mut self) -> usize {
        if let Some(i) = self.false_node {
            return i;
        }
        let i = self.push(TreeNode::False);
        self.false_node = Some(i);
        i
    }

    fn basic_event(&mut self, name: String) -> usize {
        if let Some(&i) = self.basic.get(&name) {
            return i;
        }
        let i = self.push(TreeNode::BasicEvent(name.clone()));
        self.basic.insert(name, i);
        i
    }

    fn ofm(&mut self, comp: &'a str, ofm: &'a str) -> Result<usize, FlattenError> {
        let e = self.view.elements[comp];
        match e.driver(ofm) {
            None => Ok(self.constant_false()),
            Some(src) => self.node(comp, src),
        }
    }

    fn node(&mut self, comp: &'a str, id: &'a str) -> Result<usize, FlattenError> {
        if let Some(&i) = self.memo.get(&(comp, id)) {
            return Ok(i);
        }
        if !self.stack.insert((comp, id)) {
            return Err(FlattenError::CyclicModel(format!("{comp}:{id}")));
        }
        let e = self.view.elements[comp];
        let idx = if let Some(g) = e.gate(id) {
            let mut inputs = Vec::with_capacity(g.inputs.len());
            for i in &g.inputs {
                inputs.push(self.node(comp, i)?);
            }
            self.push(TreeNode::Gate {
                kind: g.kind,
                inputs,
            })
        } else if let Some(fm) = e.input_failure_modes.iter().find(|f| f.id == id) {
            match self.view.resolve_input(comp, fm)? {
                Resolved::Basic(name) => self.basic_event(name),
                Resolved::False => self.constant_false(),
                Resolved::Node(uc, uofm) => self.ofm(uc, uofm)?,
            }
        } else if e.basic_events.iter().any(|b| b == id) {
            self.basic_event(internal_event_name(comp, id))
        } else {
            return Err(FlattenError::DanglingNode(format!("{comp}:{id}")));
        };
        self.stack.remove(&(comp, id));
        self.memo.insert((comp, id), idx);
        Ok(idx)
    }
}

/// Removes failure modes and component boundaries below `top`, leaving a
/// tree (a DAG where subtrees are shared) of gates and basic events.
///
/// Unlinked input failure modes become basic events named
/// `component.port.failure-type`. An output failure mode without an
/// incoming edge is constant false.
pub fn flatten(
    project: &CftProject,
    top: &FailureModeRef,
) -> Result<ClassicFaultTree, FlattenError> {
    let view = View::new(project);
    let (comp, ofm) = view.top(top)?;
    let mut f = Flattener {
        view,
        nodes: Vec::new(),
        memo: BTreeMap::new(),
        basic: BTreeMap::new(),
        false_node: None,
        stack: BTreeSet::new(),
    };
    let top = f.ofm(comp, ofm)?;
    Ok(ClassicFaultTree {
        nodes: f.nodes,
        top,
    })
}
