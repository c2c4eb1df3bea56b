//! Generation of a CFT project from a CFC project.
//!
//! The pipeline runs in three stages: one CFT element per component with
//! wired ports, failure modes from the connector-type mapping, and finally
//! the propagation gates instantiated from each block's rule set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::cfc::{
    topological_block_order, CfcDiagram, Component, CycleError, FunctionBlockInstance, LinkSource,
    LinkTarget, Port, PortRef, System,
};
use crate::cft::{
    failure_mode_id, CftElement, CftProject, Direction, Edge, FailureMode, FailureModeLink,
    FailureModeRef, Gate, GateKind, NodeId, PortLink,
};
use crate::connector::{ConnectorTypeTable, UnknownConnectorType};
use crate::failure::FailureType;
use crate::rules::{
    synthesize_worst_case, validate_rule_set, RuleExpr, RuleLibrary, RuleSet, Term,
};

/// How terms over block inputs without an incoming linkage are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UndrivenInputPolicy {
    /// The term is constant false: `FALSE OR x = x`, `FALSE AND x = FALSE`.
    #[default]
    EliminateAsFalse,
    /// The term becomes an internal basic event of the element.
    SynthesizeBasicEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossWiring {
    #[default]
    ExplicitConnections,
    NameMatching,
    Both,
}

impl CrossWiring {
    fn explicit(self) -> bool {
        matches!(self, CrossWiring::ExplicitConnections | CrossWiring::Both)
    }

    fn by_name(self) -> bool {
        matches!(self, CrossWiring::NameMatching | CrossWiring::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationOptions {
    pub worst_case_fallback: bool,
    pub undriven_input_policy: UndrivenInputPolicy,
    pub cross_wiring: CrossWiring,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        Self {
            worst_case_fallback: true,
            undriven_input_policy: UndrivenInputPolicy::default(),
            cross_wiring: CrossWiring::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    ElementCreated {
        component: String,
        inports: Vec<Port>,
        outports: Vec<Port>,
    },
    PortLinkCreated(PortLink),
    FailureModeCreated {
        component: String,
        failure_mode: FailureMode,
    },
    FailureModeLinkCreated(FailureModeLink),
    RuleApplied {
        component: String,
        block: String,
        output: String,
        failure_type: FailureType,
        rule: String,
    },
    WorstCaseApplied {
        component: String,
        block: String,
        block_type: String,
    },
    TermEliminated {
        component: String,
        block: String,
        term: Term,
    },
    BasicEventCreated {
        component: String,
        id: NodeId,
    },
    GateCreated {
        component: String,
        gate: Gate,
    },
    EdgeCreated {
        component: String,
        edge: Edge,
    },
}

/// Ordered record of every generation step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationTrace {
    pub events: Vec<TraceEvent>,
}

impl GenerationTrace {
    fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    /// Rebuilds the project from the structural events of the trace.
    pub fn replay(&self) -> CftProject {
        let mut p = CftProject::default();
        for ev in &self.events {
            match ev {
                TraceEvent::ElementCreated {
                    component,
                    inports,
                    outports,
                } => p.elements.push(CftElement::new(
                    component.clone(),
                    inports.clone(),
                    outports.clone(),
                )),
                TraceEvent::PortLinkCreated(l) => p.port_links.push(l.clone()),
                TraceEvent::FailureModeCreated {
                    component,
                    failure_mode,
                } => {
                    if let Some(e) = p.element_mut(component) {
                        match failure_mode.direction {
                            Direction::Input => e.input_failure_modes.push(failure_mode.clone()),
                            Direction::Output => e.output_failure_modes.push(failure_mode.clone()),
                        }
                    }
                }
                TraceEvent::FailureModeLinkCreated(l) => p.links.push(l.clone()),
                TraceEvent::BasicEventCreated { component, id } => {
                    if let Some(e) = p.element_mut(component) {
                        e.basic_events.push(id.clone());
                    }
                }
                TraceEvent::GateCreated { component, gate } => {
                    if let Some(e) = p.element_mut(component) {
                        e.gates.push(gate.clone());
                    }
                }
                TraceEvent::EdgeCreated { component, edge } => {
                    if let Some(e) = p.element_mut(component) {
                        e.edges.push(edge.clone());
                    }
                }
                TraceEvent::RuleApplied { .. }
                | TraceEvent::WorstCaseApplied { .. }
                | TraceEvent::TermEliminated { .. } => {}
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("inport `{inport}` matches outports of several components by name: {}", .candidates.join(", "))]
    AmbiguousNameMatch {
        inport: PortRef,
        candidates: Vec<String>,
    },
    #[error(transparent)]
    UnknownConnectorType(#[from] UnknownConnectorType),
    #[error("no rule set for block `{component}/{block}` of type `{block_type}`")]
    NoRuleAvailable {
        component: String,
        block: String,
        block_type: String,
    },
    #[error("rule set `{block_type}` does not fit block `{component}/{block}`: {detail}")]
    InvalidRuleSet {
        component: String,
        block: String,
        block_type: String,
        detail: String,
    },
    #[error(
        "{operator} over eliminated term in rule for `{component}/{block}/{output}.{failure_type}`"
    )]
    NonMonotoneOverEliminated {
        component: String,
        block: String,
        output: String,
        failure_type: FailureType,
        operator: &'static str,
    },
    #[error("component `{component}`: {source}")]
    Cycle {
        component: String,
        source: CycleError,
    },
    #[error("component `{component}`: {detail}")]
    Malformed { component: String, detail: String },
}

/// Creates one element per component and the port-level links between them.
pub fn generate_elements(
    system: &System,
    opts: &GenerationOptions,
    trace: &mut GenerationTrace,
) -> Result<CftProject, GenerationError> {
    let mut project = CftProject::default();
    for c in &system.components {
        let e = CftElement::new(c.name.clone(), c.inports.clone(), c.outports.clone());
        trace.push(TraceEvent::ElementCreated {
            component: c.name.clone(),
            inports: c.inports.clone(),
            outports: c.outports.clone(),
        });
        project.elements.push(e);
    }

    let mut links: BTreeMap<PortRef, PortRef> = BTreeMap::new();
    if opts.cross_wiring.explicit() {
        for con in &system.connections {
            links.insert(con.to.clone(), con.from.clone());
        }
    }
    if opts.cross_wiring.by_name() {
        for target in &system.components {
            for inport in &target.inports {
                let to = PortRef::new(target.name.clone(), inport.name.clone());
                if links.contains_key(&to) {
                    continue;
                }
                let candidates: Vec<&Component> = system
                    .components
                    .iter()
                    .filter(|c| c.name != target.name)
                    .filter(|c| {
                        c.outport(&inport.name)
                            .is_some_and(|p| p.connector_type == inport.connector_type)
                    })
                    .collect();
                match candidates.as_slice() {
                    [] => {}
                    [one] => {
                        links.insert(to, PortRef::new(one.name.clone(), inport.name.clone()));
                    }
                    many => {
                        return Err(GenerationError::AmbiguousNameMatch {
                            inport: to,
                            candidates: many.iter().map(|c| c.name.clone()).collect(),
                        })
                    }
                }
            }
        }
    }

    let mut port_links: Vec<PortLink> = links
        .into_iter()
        .map(|(to, from)| PortLink { from, to })
        .collect();
    port_links.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    for l in port_links {
        trace.push(TraceEvent::PortLinkCreated(l.clone()));
        project.port_links.push(l);
    }
    Ok(project)
}

/// Adds input and output failure modes per port and expands port links into
/// failure-mode links of equal type.
pub fn generate_failure_modes(
    project: &mut CftProject,
    table: &ConnectorTypeTable,
    trace: &mut GenerationTrace,
) -> Result<(), GenerationError> {
    for e in &mut project.elements {
        for (dir, ports) in [
            (Direction::Input, e.inports.clone()),
            (Direction::Output, e.outports.clone()),
        ] {
            for p in &ports {
                for t in table.map(&p.connector_type)?.iter() {
                    let fm = FailureMode {
                        id: failure_mode_id(&e.component, &p.name, t),
                        port: p.name.clone(),
                        failure_type: t,
                        direction: dir,
                    };
                    trace.push(TraceEvent::FailureModeCreated {
                        component: e.component.clone(),
                        failure_mode: fm.clone(),
                    });
                    match dir {
                        Direction::Input => e.input_failure_modes.push(fm),
                        Direction::Output => e.output_failure_modes.push(fm),
                    }
                }
            }
        }
    }

    let mut links = Vec::new();
    for l in &project.port_links {
        let ty = project
            .element(&l.from.component)
            .and_then(|e| e.outports.iter().find(|p| p.name == l.from.port))
            .map(|p| p.connector_type.clone())
            .ok_or_else(|| GenerationError::Malformed {
                component: l.from.component.clone(),
                detail: format!("no outport `{}`", l.from.port),
            })?;
        for t in table.map(&ty)?.iter() {
            let link = FailureModeLink {
                from: FailureModeRef::new(l.from.component.clone(), l.from.port.clone(), t),
                to: FailureModeRef::new(l.to.component.clone(), l.to.port.clone(), t),
            };
            trace.push(TraceEvent::FailureModeLinkCreated(link.clone()));
            links.push(link);
        }
    }
    project.links = links;
    Ok(())
}

/// Result of instantiating a formula before any gate exists.
enum Plan {
    False,
    Node(NodeId),
    Gate(GateKind, Vec<Plan>),
}

struct ElementBuilder<'a> {
    component: &'a Component,
    table: &'a ConnectorTypeTable,
    opts: &'a GenerationOptions,
    element: &'a mut CftElement,
    trace: &'a mut GenerationTrace,
    /// Instantiated node per (block, output parameter, failure type); `None`
    /// means the failure type does not propagate.
    roots: BTreeMap<(String, String, FailureType), Option<NodeId>>,
    basic_events: BTreeSet<NodeId>,
}

struct RuleCtx<'r> {
    block: &'r FunctionBlockInstance,
    output: &'r str,
    failure_type: FailureType,
}

impl ElementBuilder<'_> {
    fn diagram(&self) -> &CfcDiagram {
        &self.component.diagram
    }

    fn source_node(&self, source: &LinkSource, t: FailureType) -> Option<NodeId> {
        match source {
            LinkSource::DiagramInput(name) => Some(failure_mode_id(&self.component.name, name, t)),
            LinkSource::BlockOutput { block, param } => self
                .roots
                .get(&(block.clone(), param.clone(), t))
                .cloned()
                .flatten(),
        }
    }

    fn plan(&mut self, expr: &RuleExpr, ctx: &RuleCtx<'_>) -> Result<Plan, GenerationError> {
        let component = self.component;
        let non_monotone = |op: &'static str| GenerationError::NonMonotoneOverEliminated {
            component: component.name.clone(),
            block: ctx.block.name.clone(),
            output: ctx.output.into(),
            failure_type: ctx.failure_type,
            operator: op,
        };
        Ok(match expr {
            RuleExpr::Term(term) => self.plan_term(term, ctx),
            RuleExpr::Not(e) => match self.plan(e, ctx)? {
                Plan::False => return Err(non_monotone("NOT")),
                p => Plan::Gate(GateKind::Not, alloc::vec![p]),
            },
            RuleExpr::And(es) => {
                let mut ops = Vec::with_capacity(es.len());
                for e in es {
                    match self.plan(e, ctx)? {
                        Plan::False => return Ok(Plan::False),
                        p => ops.push(p),
                    }
                }
                collapse(GateKind::And, ops)
            }
            RuleExpr::Or(es) => {
                let mut ops = Vec::with_capacity(es.len());
                for e in es {
                    match self.plan(e, ctx)? {
                        Plan::False => {}
                        p => ops.push(p),
                    }
                }
                collapse(GateKind::Or, ops)
            }
            RuleExpr::Xor(es) => {
                let mut ops = Vec::with_capacity(es.len());
                for e in es {
                    match self.plan(e, ctx)? {
                        Plan::False => return Err(non_monotone("XOR")),
                        p => ops.push(p),
                    }
                }
                collapse(GateKind::Xor, ops)
            }
        })
    }

    fn plan_term(&mut self, term: &Term, ctx: &RuleCtx<'_>) -> Plan {
        let target = LinkTarget::BlockInput {
            block: ctx.block.name.clone(),
            param: term.param.clone(),
        };
        match self.diagram().driver(&target).cloned() {
            Some(source) => match self.source_node(&source, term.failure_type) {
                Some(id) => Plan::Node(id),
                None => Plan::False,
            },
            None => match self.opts.undriven_input_policy {
                UndrivenInputPolicy::EliminateAsFalse => {
                    self.trace.push(TraceEvent::TermEliminated {
                        component: self.component.name.clone(),
                        block: ctx.block.name.clone(),
                        term: term.clone(),
                    });
                    Plan::False
                }
                UndrivenInputPolicy::SynthesizeBasicEvent => {
                    let id = format!(
                        "{}/{}/{}/{}",
                        self.component.name, ctx.block.name, term.param, term.failure_type
                    );
                    if self.basic_events.insert(id.clone()) {
                        self.trace.push(TraceEvent::BasicEventCreated {
                            component: self.component.name.clone(),
                            id: id.clone(),
                        });
                        self.element.basic_events.push(id.clone());
                    }
                    Plan::Node(id)
                }
            },
        }
    }

    /// Creates the gates of a plan in post-order and returns its root node.
    fn materialize(&mut self, plan: Plan, prefix: &str, counter: &mut usize) -> Option<NodeId> {
        match plan {
            Plan::False => None,
            Plan::Node(id) => Some(id),
            Plan::Gate(kind, ops) => {
                let inputs: Vec<NodeId> = ops
                    .into_iter()
                    .map(|p| {
                        self.materialize(p, prefix, counter)
                            .expect("planned operands are nodes")
                    })
                    .collect();
                let gate = Gate {
                    id: format!("{prefix}/g{counter}"),
                    kind,
                    inputs,
                };
                *counter += 1;
                self.trace.push(TraceEvent::GateCreated {
                    component: self.component.name.clone(),
                    gate: gate.clone(),
                });
                let id = gate.id.clone();
                self.element.gates.push(gate);
                Some(id)
            }
        }
    }

    fn apply_rule_set(
        &mut self,
        block: &FunctionBlockInstance,
        rs: &RuleSet,
    ) -> Result<(), GenerationError> {
        for out in &block.outputs {
            for t in self.table.map(&out.connector_type)?.iter() {
                let root = match rs.get(&out.name, t) {
                    None => None,
                    Some(expr) => {
                        self.trace.push(TraceEvent::RuleApplied {
                            component: self.component.name.clone(),
                            block: block.name.clone(),
                            output: out.name.clone(),
                            failure_type: t,
                            rule: expr.to_string(),
                        });
                        let ctx = RuleCtx {
                            block,
                            output: &out.name,
                            failure_type: t,
                        };
                        let plan = self.plan(expr, &ctx)?;
                        let prefix =
                            format!("{}/{}/{}/{}", self.component.name, block.name, out.name, t);
                        let mut counter = 0;
                        self.materialize(plan, &prefix, &mut counter)
                    }
                };
                self.roots
                    .insert((block.name.clone(), out.name.clone(), t), root);
            }
        }
        Ok(())
    }
}

fn collapse(kind: GateKind, mut ops: Vec<Plan>) -> Plan {
    match ops.len() {
        0 => Plan::False,
        1 => ops.pop().expect("one operand"),
        _ => Plan::Gate(kind, ops),
    }
}

fn rule_set_for<'l>(
    c: &Component,
    block: &FunctionBlockInstance,
    lib: &'l RuleLibrary,
    opts: &GenerationOptions,
    trace: &mut GenerationTrace,
) -> Result<Option<alloc::borrow::Cow<'l, RuleSet>>, GenerationError> {
    // nothing can propagate through a block without inputs or outputs
    if block.inputs.is_empty() || block.outputs.is_empty() {
        return Ok(None);
    }
    if let Some(rs) = lib.get(&block.block_type) {
        let report = validate_rule_set(rs, block, &lib.connector_types);
        if let Some(f) = report.errors().next() {
            return Err(GenerationError::InvalidRuleSet {
                component: c.name.clone(),
                block: block.name.clone(),
                block_type: block.block_type.clone(),
                detail: f.message.clone(),
            });
        }
        return Ok(Some(alloc::borrow::Cow::Borrowed(rs)));
    }
    if !opts.worst_case_fallback {
        return Err(GenerationError::NoRuleAvailable {
            component: c.name.clone(),
            block: block.name.clone(),
            block_type: block.block_type.clone(),
        });
    }
    trace.push(TraceEvent::WorstCaseApplied {
        component: c.name.clone(),
        block: block.name.clone(),
        block_type: block.block_type.clone(),
    });
    Ok(Some(alloc::borrow::Cow::Owned(synthesize_worst_case(
        block,
        &lib.connector_types,
    )?)))
}

/// Instantiates every block's rules as gates and connects the output
/// failure modes, element by element in system order and block by block in
/// topological order.
pub fn generate_propagation(
    project: &mut CftProject,
    system: &System,
    lib: &RuleLibrary,
    opts: &GenerationOptions,
    trace: &mut GenerationTrace,
) -> Result<(), GenerationError> {
    for c in &system.components {
        let element = project
            .elements
            .iter_mut()
            .find(|e| e.component == c.name)
            .ok_or_else(|| GenerationError::Malformed {
                component: c.name.clone(),
                detail: "no CFT element".into(),
            })?;
        let order =
            topological_block_order(&c.diagram).map_err(|source| GenerationError::Cycle {
                component: c.name.clone(),
                source,
            })?;
        let mut b = ElementBuilder {
            component: c,
            table: &lib.connector_types,
            opts,
            element,
            trace,
            roots: BTreeMap::new(),
            basic_events: BTreeSet::new(),
        };
        for block in order {
            if let Some(rs) = rule_set_for(c, block, lib, opts, b.trace)? {
                b.apply_rule_set(block, &rs)?;
            } else {
                for out in &block.outputs {
                    for t in lib.connector_types.map(&out.connector_type)?.iter() {
                        b.roots
                            .insert((block.name.clone(), out.name.clone(), t), None);
                    }
                }
            }
        }
        for out in &c.diagram.outputs {
            let Some(source) = c
                .diagram
                .driver(&LinkTarget::DiagramOutput(out.name.clone()))
                .cloned()
            else {
                continue;
            };
            for t in lib.connector_types.map(&out.connector_type)?.iter() {
                if let Some(from) = b.source_node(&source, t) {
                    let edge = Edge {
                        from,
                        to: failure_mode_id(&c.name, &out.name, t),
                    };
                    b.trace.push(TraceEvent::EdgeCreated {
                        component: c.name.clone(),
                        edge: edge.clone(),
                    });
                    b.element.edges.push(edge);
                }
            }
        }
    }
    Ok(())
}

/// Runs all three stages. Output depends only on the inputs.
pub fn generate(
    system: &System,
    lib: &RuleLibrary,
    opts: &GenerationOptions,
) -> Result<(CftProject, GenerationTrace), GenerationError> {
    let mut trace = GenerationTrace::default();
    let mut project = generate_elements(system, opts, &mut trace)?;
    generate_failure_modes(&mut project, &lib.connector_types, &mut trace)?;
    generate_propagation(&mut project, system, lib, opts, &mut trace)?;
    Ok((project, trace))
}

/// Number of gates instantiating `expr` when every term resolves to a node:
/// one per NOT and one per n-ary operator.
pub fn expected_gate_count(expr: &RuleExpr) -> usize {
    match expr {
        RuleExpr::Term(_) => 0,
        RuleExpr::Not(e) => 1 + expected_gate_count(e),
        RuleExpr::And(es) | RuleExpr::Or(es) | RuleExpr::Xor(es) => {
            1 + es.iter().map(expected_gate_count).sum::<usize>()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfc::{Connection, Linkage};
    use crate::connector::{ConnectorCategory, ConnectorTypeDef};
    use crate::failure::FailureTypeSet;
    use alloc::boxed::Box;
    use alloc::vec;
    use FailureType::*;

    fn lib() -> RuleLibrary {
        let mut t = ConnectorTypeTable::new();
        t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
            .unwrap();
        t.declare(
            "P2",
            ConnectorTypeDef::Custom(FailureTypeSet::from_types([Omission, Commission])),
        )
        .unwrap();
        RuleLibrary::new(t)
    }

    fn single_component(ty: &str) -> System {
        let mut c = Component::new("a", vec![Port::new("I", ty)], vec![Port::new("O", ty)]);
        c.diagram.blocks.push(FunctionBlockInstance {
            name: "fb".into(),
            block_type: "PASS".into(),
            inputs: vec![Port::new("IN", ty)],
            outputs: vec![Port::new("OUT", ty)],
        });
        c.diagram.linkages = vec![
            Linkage::new(
                LinkSource::DiagramInput("I".into()),
                LinkTarget::BlockInput {
                    block: "fb".into(),
                    param: "IN".into(),
                },
            ),
            Linkage::new(
                LinkSource::BlockOutput {
                    block: "fb".into(),
                    param: "OUT".into(),
                },
                LinkTarget::DiagramOutput("O".into()),
            ),
        ];
        System {
            name: "s".into(),
            components: vec![c],
            connections: vec![],
        }
    }

    #[test]
    fn empty_system_gives_empty_project() {
        let (p, trace) =
            generate(&System::default(), &lib(), &GenerationOptions::default()).unwrap();
        assert_eq!(p, CftProject::default());
        assert!(trace.events.is_empty());
    }

    #[test]
    fn pass_through_rule_gives_direct_edges() {
        let mut l = lib();
        let mut rs = RuleSet::new("PASS");
        for t in FailureTypeSet::BOOLEAN.iter() {
            rs.insert("OUT", t, RuleExpr::term("IN", t)).unwrap();
        }
        l.add(rs).unwrap();
        let (p, _) = generate(&single_component("Bl"), &l, &GenerationOptions::default()).unwrap();
        let e = &p.elements[0];
        assert!(e.gates.is_empty());
        assert_eq!(e.edges.len(), 6);
        for edge in &e.edges {
            assert_eq!(edge.from.replace("/I/", "/O/"), edge.to);
        }
    }

    #[test]
    fn custom_connector_type_gives_two_failure_modes() {
        let (p, _) = generate(
            &single_component("P2"),
            &lib(),
            &GenerationOptions::default(),
        )
        .unwrap();
        assert_eq!(p.elements[0].input_failure_modes.len(), 2);
        assert_eq!(p.elements[0].output_failure_modes.len(), 2);
    }

    #[test]
    fn component_without_ports_has_no_failure_modes() {
        let s = System {
            name: "s".into(),
            components: vec![Component::new("lonely", vec![], vec![])],
            connections: vec![],
        };
        let (p, _) = generate(&s, &lib(), &GenerationOptions::default()).unwrap();
        assert_eq!(p.elements.len(), 1);
        assert!(p.elements[0].input_failure_modes.is_empty());
        assert!(p.links.is_empty());
    }

    #[test]
    fn missing_rules_without_fallback() {
        let opts = GenerationOptions {
            worst_case_fallback: false,
            ..Default::default()
        };
        let err = generate(&single_component("Bl"), &lib(), &opts).unwrap_err();
        assert!(matches!(err, GenerationError::NoRuleAvailable { ref block, .. } if block == "fb"));
    }

    #[test]
    fn not_over_eliminated_term_is_error() {
        let mut s = single_component("Bl");
        s.components[0].diagram.linkages.remove(0);
        let mut l = lib();
        let mut rs = RuleSet::new("PASS");
        rs.insert(
            "OUT",
            Omission,
            RuleExpr::Not(Box::new(RuleExpr::term("IN", Omission))),
        )
        .unwrap();
        l.add(rs).unwrap();
        let err = generate(&s, &l, &GenerationOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            GenerationError::NonMonotoneOverEliminated {
                operator: "NOT",
                ..
            }
        ));

        // a corruptible parameter keeps NOT well defined
        let opts = GenerationOptions {
            undriven_input_policy: UndrivenInputPolicy::SynthesizeBasicEvent,
            ..Default::default()
        };
        let (p, _) = generate(&s, &l, &opts).unwrap();
        assert_eq!(p.elements[0].basic_events, ["a/fb/IN/omission"]);
        assert_eq!(p.elements[0].gates.len(), 1);
    }

    fn two_exporters() -> System {
        let src = |n: &str| {
            let mut c = Component::new(
                n,
                vec![Port::new("X", "Bl")],
                vec![Port::new("X_out", "Bl")],
            );
            c.outports = vec![Port::new("X", "Bl")];
            c.inports.clear();
            c.diagram.inputs.clear();
            c.diagram.outputs = c.outports.clone();
            c
        };
        System {
            name: "s".into(),
            components: vec![
                src("p"),
                src("q"),
                Component::new("r", vec![Port::new("X", "Bl")], vec![]),
            ],
            connections: vec![],
        }
    }

    #[test]
    fn ambiguous_name_match() {
        let opts = GenerationOptions {
            cross_wiring: CrossWiring::NameMatching,
            ..Default::default()
        };
        let mut t = GenerationTrace::default();
        let err = generate_elements(&two_exporters(), &opts, &mut t).unwrap_err();
        assert!(matches!(err, GenerationError::AmbiguousNameMatch { .. }));
    }

    #[test]
    fn explicit_connection_wins_over_name_matching() {
        let mut s = two_exporters();
        s.connections.push(Connection {
            from: PortRef::new("q", "X"),
            to: PortRef::new("r", "X"),
        });
        let opts = GenerationOptions {
            cross_wiring: CrossWiring::Both,
            ..Default::default()
        };
        let mut t = GenerationTrace::default();
        let p = generate_elements(&s, &opts, &mut t).unwrap();
        assert_eq!(p.port_links.len(), 1);
        assert_eq!(p.port_links[0].from, PortRef::new("q", "X"));
    }

    #[test]
    fn gate_count_of_nested_expression() {
        let e = RuleExpr::Or(vec![
            RuleExpr::And(vec![
                RuleExpr::term("A", Omission),
                RuleExpr::term("B", Omission),
            ]),
            RuleExpr::Not(Box::new(RuleExpr::term("C", Omission))),
        ]);
        assert_eq!(expected_gate_count(&e), 3);
    }
}
