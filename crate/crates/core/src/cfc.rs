//! Continuous Function Chart projects: components, ports, connections and
//! the per-component function block diagrams, with well-formedness checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::connector::ConnectorTypeTable;
use crate::report::{FindingKind, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub connector_type: String,
}

impl Port {
    pub fn new(name: impl Into<String>, connector_type: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            connector_type: connector_type.into(),
        }
    }
}

/// Reference to a port of a component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortRef {
    pub component: String,
    pub port: String,
}

impl PortRef {
    pub fn new(component: impl Into<String>, port: impl Into<String>) -> Self {
        Self {
            component: component.into(),
            port: port.into(),
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.component, self.port)
    }
}

/// Directed connection from an outport of one component to an inport of another.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Connection {
    pub from: PortRef,
    pub to: PortRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionBlockInstance {
    pub name: String,
    pub block_type: String,
    pub inputs: Vec<Port>,
    pub outputs: Vec<Port>,
}

impl FunctionBlockInstance {
    pub fn input(&self, name: &str) -> Option<&Port> {
        self.inputs.iter().find(|p| p.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&Port> {
        self.outputs.iter().find(|p| p.name == name)
    }
}

/// Where a linkage takes its value from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkSource {
    DiagramInput(String),
    BlockOutput { block: String, param: String },
}

/// Where a linkage delivers its value to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkTarget {
    BlockInput { block: String, param: String },
    DiagramOutput(String),
}

impl fmt::Display for LinkSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkSource::DiagramInput(n) => f.write_str(n),
            LinkSource::BlockOutput { block, param } => write!(f, "{block}/{param}"),
        }
    }
}

impl fmt::Display for LinkTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkTarget::DiagramOutput(n) => f.write_str(n),
            LinkTarget::BlockInput { block, param } => write!(f, "{block}/{param}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linkage {
    pub source: LinkSource,
    pub target: LinkTarget,
}

impl Linkage {
    pub fn new(source: LinkSource, target: LinkTarget) -> Self {
        Self { source, target }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CfcDiagram {
    pub inputs: Vec<Port>,
    pub outputs: Vec<Port>,
    pub blocks: Vec<FunctionBlockInstance>,
    pub linkages: Vec<Linkage>,
}

impl CfcDiagram {
    pub fn block(&self, name: &str) -> Option<&FunctionBlockInstance> {
        self.blocks.iter().find(|b| b.name == name)
    }

    /// The unique linkage driving `target`, if there is exactly one.
    pub fn driver(&self, target: &LinkTarget) -> Option<&LinkSource> {
        let mut it = self.linkages.iter().filter(|l| &l.target == target);
        match (it.next(), it.next()) {
            (Some(l), None) => Some(&l.source),
            _ => None,
        }
    }

    fn source_type(&self, source: &LinkSource) -> Option<&str> {
        match source {
            LinkSource::DiagramInput(n) => self.inputs.iter().find(|p| &p.name == n),
            LinkSource::BlockOutput { block, param } => {
                self.block(block).and_then(|b| b.output(param))
            }
        }
        .map(|p| p.connector_type.as_str())
    }

    fn target_type(&self, target: &LinkTarget) -> Option<&str> {
        match target {
            LinkTarget::DiagramOutput(n) => self.outputs.iter().find(|p| &p.name == n),
            LinkTarget::BlockInput { block, param } => {
                self.block(block).and_then(|b| b.input(param))
            }
        }
        .map(|p| p.connector_type.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub inports: Vec<Port>,
    pub outports: Vec<Port>,
    pub diagram: CfcDiagram,
}

impl Component {
    /// A component whose diagram interface mirrors its ports.
    pub fn new(name: impl Into<String>, inports: Vec<Port>, outports: Vec<Port>) -> Self {
        let diagram = CfcDiagram {
            inputs: inports.clone(),
            outputs: outports.clone(),
            ..CfcDiagram::default()
        };
        Self {
            name: name.into(),
            inports,
            outports,
            diagram,
        }
    }

    pub fn inport(&self, name: &str) -> Option<&Port> {
        self.inports.iter().find(|p| p.name == name)
    }

    pub fn outport(&self, name: &str) -> Option<&Port> {
        self.outports.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct System {
    pub name: String,
    pub components: Vec<Component>,
    pub connections: Vec<Connection>,
}

impl System {
    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("linkage cycle through blocks {}", .blocks.join(" -> "))]
pub struct CycleError {
    /// Blocks on one cycle, in linkage order.
    pub blocks: Vec<String>,
}

/// Orders the diagram's blocks so that every linkage source block precedes its
/// target block. Ties are broken by declaration order.
pub fn topological_block_order(
    diagram: &CfcDiagram,
) -> Result<Vec<&FunctionBlockInstance>, CycleError> {
    let index: BTreeMap<&str, usize> = diagram
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.name.as_str(), i))
        .collect();
    let n = diagram.blocks.len();
    let mut succ: Vec<BTreeSet<usize>> = (0..n).map(|_| BTreeSet::new()).collect();
    let mut pred: Vec<BTreeSet<usize>> = (0..n).map(|_| BTreeSet::new()).collect();
    for l in &diagram.linkages {
        if let (LinkSource::BlockOutput { block: s, .. }, LinkTarget::BlockInput { block: t, .. }) =
            (&l.source, &l.target)
        {
            if let (Some(&s), Some(&t)) = (index.get(s.as_str()), index.get(t.as_str())) {
                succ[s].insert(t);
                pred[t].insert(s);
            }
        }
    }

    let mut indegree: Vec<usize> = pred.iter().map(BTreeSet::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if order.len() == n {
        return Ok(order.into_iter().map(|i| &diagram.blocks[i]).collect());
    }

    // Every unordered block has an unordered predecessor, so walking
    // predecessors from any of them must revisit a block.
    let start = (0..n).find(|&i| indegree[i] > 0).expect("unordered block");
    let mut path = Vec::new();
    let mut seen = BTreeMap::new();
    let mut cur = start;
    while !seen.contains_key(&cur) {
        seen.insert(cur, path.len());
        path.push(cur);
        cur = *pred[cur]
            .iter()
            .find(|&&p| indegree[p] > 0)
            .expect("unordered predecessor");
    }
    let mut cycle: Vec<usize> = path[seen[&cur]..].to_vec();
    cycle.reverse();
    Err(CycleError {
        blocks: cycle
            .into_iter()
            .map(|i| diagram.blocks[i].name.clone())
            .collect(),
    })
}

/// Checks every structural invariant of a CFC project. Problems become
/// findings; nothing here fails.
pub fn validate_system(system: &System, types: &ConnectorTypeTable) -> ValidationReport {
    let mut report = ValidationReport::new();

    let mut names = BTreeSet::new();
    for c in &system.components {
        if !names.insert(c.name.as_str()) {
            report.error(
                FindingKind::DuplicateComponent,
                c.name.clone(),
                format!("component name `{}` is declared more than once", c.name),
            );
        }
    }

    for c in &system.components {
        validate_component(c, types, &mut report);
    }
    validate_connections(system, &mut report);
    report
}

fn check_type(
    port: &Port,
    location: &str,
    types: &ConnectorTypeTable,
    report: &mut ValidationReport,
) {
    if !types.contains(&port.connector_type) {
        report.error(
            FindingKind::UnknownConnectorType,
            location,
            format!("connector type `{}` is not declared", port.connector_type),
        );
    }
}

fn validate_component(c: &Component, types: &ConnectorTypeTable, report: &mut ValidationReport) {
    let mut ports = BTreeSet::new();
    for p in c.inports.iter().chain(&c.outports) {
        let loc = format!("{}/{}", c.name, p.name);
        if !ports.insert(p.name.as_str()) {
            report.error(
                FindingKind::DuplicatePort,
                loc.clone(),
                format!("port name `{}` is used more than once", p.name),
            );
        }
        check_type(p, &loc, types, report);
    }

    let d = &c.diagram;
    for (side, ports, diagram_ports) in [
        ("inputs", &c.inports, &d.inputs),
        ("outputs", &c.outports, &d.outputs),
    ] {
        let a: BTreeSet<(&str, &str)> = ports
            .iter()
            .map(|p| (p.name.as_str(), p.connector_type.as_str()))
            .collect();
        let b: BTreeSet<(&str, &str)> = diagram_ports
            .iter()
            .map(|p| (p.name.as_str(), p.connector_type.as_str()))
            .collect();
        if a != b {
            report.error(
                FindingKind::DiagramInterfaceMismatch,
                format!("{}/diagram/{side}", c.name),
                format!("diagram {side} differ from the component's ports"),
            );
        }
    }

    let mut blocks = BTreeSet::new();
    for b in &d.blocks {
        let loc = format!("{}/{}", c.name, b.name);
        if !blocks.insert(b.name.as_str()) {
            report.error(
                FindingKind::DuplicateBlock,
                loc.clone(),
                format!("block name `{}` is used more than once", b.name),
            );
        }
        let mut params = BTreeSet::new();
        for p in b.inputs.iter().chain(&b.outputs) {
            let ploc = format!("{loc}/{}", p.name);
            if !params.insert(p.name.as_str()) {
                report.error(
                    FindingKind::DuplicateParameter,
                    ploc.clone(),
                    format!("parameter name `{}` is used more than once", p.name),
                );
            }
            check_type(p, &ploc, types, report);
        }
    }

    let mut drivers: BTreeMap<&LinkTarget, usize> = BTreeMap::new();
    for (i, l) in d.linkages.iter().enumerate() {
        let loc = format!("{}/linkages[{i}]", c.name);
        let src = d.source_type(&l.source);
        let dst = d.target_type(&l.target);
        if src.is_none() {
            report.error(
                FindingKind::DanglingEndpoint,
                loc.clone(),
                format!("linkage source `{}` does not exist", l.source),
            );
        }
        if dst.is_none() {
            report.error(
                FindingKind::DanglingEndpoint,
                loc.clone(),
                format!("linkage target `{}` does not exist", l.target),
            );
            continue;
        }
        *drivers.entry(&l.target).or_default() += 1;
        if let (Some(s), Some(t)) = (src, dst) {
            if s != t {
                report.error(
                    FindingKind::TypeMismatch,
                    loc,
                    format!(
                        "connector type mismatch: `{}` is {s} but `{}` is {t}",
                        l.source, l.target
                    ),
                );
            }
        }
    }
    for (target, n) in &drivers {
        if *n > 1 {
            report.error(
                FindingKind::FanIn,
                format!("{}/{target}", c.name),
                format!("`{target}` is driven by {n} linkages"),
            );
        }
    }
    for o in &d.outputs {
        let t = LinkTarget::DiagramOutput(o.name.clone());
        if !drivers.contains_key(&t) {
            report.error(
                FindingKind::UndrivenOutput,
                format!("{}/{}", c.name, o.name),
                format!("diagram output `{}` has no incoming linkage", o.name),
            );
        }
    }
    for b in &d.blocks {
        for p in &b.inputs {
            let t = LinkTarget::BlockInput {
                block: b.name.clone(),
                param: p.name.clone(),
            };
            if !drivers.contains_key(&t) {
                report.warning(
                    FindingKind::UndrivenInput,
                    format!("{}/{}/{}", c.name, b.name, p.name),
                    "block input parameter has no incoming linkage",
                );
            }
        }
    }

    if let Err(e) = topological_block_order(d) {
        report.error(
            FindingKind::Cycle,
            format!("{}/diagram", c.name),
            format!("{e}"),
        );
    }
}

fn validate_connections(system: &System, report: &mut ValidationReport) {
    let mut destinations: BTreeMap<&PortRef, usize> = BTreeMap::new();
    for (i, con) in system.connections.iter().enumerate() {
        let loc = format!("connections[{i}]");
        let from = system
            .component(&con.from.component)
            .and_then(|c| c.outport(&con.from.port));
        let to = system
            .component(&con.to.component)
            .and_then(|c| c.inport(&con.to.port));
        if from.is_none() {
            report.error(
                FindingKind::DanglingEndpoint,
                loc.clone(),
                format!("`{}` is not an outport of an existing component", con.from),
            );
        }
        if to.is_none() {
            report.error(
                FindingKind::DanglingEndpoint,
                loc.clone(),
                format!("`{}` is not an inport of an existing component", con.to),
            );
        }
        if con.from.component == con.to.component {
            report.error(
                FindingKind::SelfConnection,
                loc.clone(),
                format!("component `{}` is connected to itself", con.from.component),
            );
        }
        if let (Some(f), Some(t)) = (from, to) {
            if f.connector_type != t.connector_type {
                report.error(
                    FindingKind::TypeMismatch,
                    loc.clone(),
                    format!(
                        "connector type mismatch: `{}` is {} but `{}` is {}",
                        con.from, f.connector_type, con.to, t.connector_type
                    ),
                );
            }
        }
        if to.is_some() {
            *destinations.entry(&con.to).or_default() += 1;
        }
    }
    for (dest, n) in destinations {
        if n > 1 {
            report.error(
                FindingKind::FanIn,
                format!("{dest}"),
                format!("inport `{dest}` is the destination of {n} connections"),
            );
        }
    }
}
