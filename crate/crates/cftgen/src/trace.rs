//! JSON rendering of a generation trace, one object per event.

use serde_json::{json, Value};

use cftgen_core::cfc::Port;
use cftgen_core::generate::TraceEvent;
use cftgen_core::GenerationTrace;

fn ports(ps: &[Port]) -> Value {
    ps.iter()
        .map(|p| json!({ "name": p.name, "type": p.connector_type }))
        .collect()
}

fn event(e: &TraceEvent) -> Value {
    match e {
        TraceEvent::ElementCreated {
            component,
            inports,
            outports,
        } => json!({
            "event": "element-created",
            "component": component,
            "inports": ports(inports),
            "outports": ports(outports),
        }),
        TraceEvent::PortLinkCreated(l) => json!({
            "event": "port-link-created",
            "from": l.from.to_string(),
            "to": l.to.to_string(),
        }),
        TraceEvent::FailureModeCreated {
            component,
            failure_mode,
        } => json!({
            "event": "failure-mode-created",
            "component": component,
            "id": failure_mode.id,
            "direction": match failure_mode.direction {
                cftgen_core::cft::Direction::Input => "input",
                cftgen_core::cft::Direction::Output => "output",
            },
        }),
        TraceEvent::FailureModeLinkCreated(l) => json!({
            "event": "failure-mode-link-created",
            "from": l.from.to_string(),
            "to": l.to.to_string(),
        }),
        TraceEvent::RuleApplied {
            component,
            block,
            output,
            failure_type,
            rule,
        } => json!({
            "event": "rule-applied",
            "component": component,
            "block": block,
            "output": format!("{output}.{failure_type}"),
            "rule": rule,
        }),
        TraceEvent::WorstCaseApplied {
            component,
            block,
            block_type,
        } => json!({
            "event": "worst-case-applied",
            "component": component,
            "block": block,
            "block_type": block_type,
        }),
        TraceEvent::TermEliminated {
            component,
            block,
            term,
        } => json!({
            "event": "term-eliminated",
            "component": component,
            "block": block,
            "term": term.to_string(),
        }),
        TraceEvent::BasicEventCreated { component, id } => json!({
            "event": "basic-event-created",
            "component": component,
            "id": id,
        }),
        TraceEvent::GateCreated { component, gate } => json!({
            "event": "gate-created",
            "component": component,
            "id": gate.id,
            "kind": gate.kind.as_str(),
            "inputs": gate.inputs,
        }),
        TraceEvent::EdgeCreated { component, edge } => json!({
            "event": "edge-created",
            "component": component,
            "from": edge.from,
            "to": edge.to,
        }),
    }
}

pub fn trace_to_json(trace: &GenerationTrace) -> String {
    let v: Vec<Value> = trace.events.iter().map(event).collect();
    let mut s = serde_json::to_string_pretty(&v).expect("traces serialize");
    s.push('\n');
    s
}
