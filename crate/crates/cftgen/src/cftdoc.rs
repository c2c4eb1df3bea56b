//! The `.cft.json` document: a serialized [`CftProject`] plus metadata.
//!
//! Export is byte-deterministic: fields are written in a fixed order,
//! elements and lists keep the project's order, and the text ends with a
//! newline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cftgen_core::cfc::{Port, PortRef};
use cftgen_core::cft::{
    CftElement, Direction, Edge, FailureMode, FailureModeLink, Gate, GateKind, PortLink,
};
use cftgen_core::{CftProject, FailureModeRef, FailureType};

use crate::error::FormatError;

pub const FORMAT: &str = "cftgen-cft";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool: String,
    /// Input role (e.g. `project`, `rules`) to `sha256:<hex>` digest.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

impl Metadata {
    pub fn for_tool() -> Self {
        Metadata {
            tool: format!("cftgen {}", env!("CARGO_PKG_VERSION")),
            inputs: BTreeMap::new(),
        }
    }

    pub fn with_input(mut self, role: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(role.into(), digest(bytes));
        self
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: String,
    version: u32,
    metadata: Metadata,
    elements: Vec<ElementDoc>,
    port_links: Vec<LinkDoc>,
    links: Vec<LinkDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PortDoc {
    name: String,
    #[serde(rename = "type")]
    connector_type: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FailureModeDoc {
    id: String,
    port: String,
    failure_type: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    id: String,
    kind: String,
    inputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    component: String,
    inports: Vec<PortDoc>,
    outports: Vec<PortDoc>,
    input_failure_modes: Vec<FailureModeDoc>,
    output_failure_modes: Vec<FailureModeDoc>,
    basic_events: Vec<String>,
    gates: Vec<GateDoc>,
    edges: Vec<LinkDoc>,
}

fn port_docs(ports: &[Port]) -> Vec<PortDoc> {
    ports
        .iter()
        .map(|p| PortDoc {
            name: p.name.clone(),
            connector_type: p.connector_type.clone(),
        })
        .collect()
}

fn fm_docs(modes: &[FailureMode]) -> Vec<FailureModeDoc> {
    modes
        .iter()
        .map(|m| FailureModeDoc {
            id: m.id.clone(),
            port: m.port.clone(),
            failure_type: m.failure_type.to_string(),
        })
        .collect()
}

pub fn export_cft(project: &CftProject, metadata: &Metadata) -> String {
    let doc = Doc {
        format: FORMAT.into(),
        version: VERSION,
        metadata: metadata.clone(),
        elements: project
            .elements
            .iter()
            .map(|e| ElementDoc {
                component: e.component.clone(),
                inports: port_docs(&e.inports),
                outports: port_docs(&e.outports),
                input_failure_modes: fm_docs(&e.input_failure_modes),
                output_failure_modes: fm_docs(&e.output_failure_modes),
                basic_events: e.basic_events.clone(),
                gates: e
                    .gates
                    .iter()
                    .map(|g| GateDoc {
                        id: g.id.clone(),
                        kind: g.kind.as_str().into(),
                        inputs: g.inputs.clone(),
                    })
                    .collect(),
                edges: e
                    .edges
                    .iter()
                    .map(|x| LinkDoc {
                        from: x.from.clone(),
                        to: x.to.clone(),
                    })
                    .collect(),
            })
            .collect(),
        port_links: project
            .port_links
            .iter()
            .map(|l| LinkDoc {
                from: l.from.to_string(),
                to: l.to.to_string(),
            })
            .collect(),
        links: project
            .links
            .iter()
            .map(|l| LinkDoc {
                from: l.from.to_string(),
                to: l.to.to_string(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("documents serialize");
    out.push('\n');
    out
}

fn failure_type(s: &str, location: &str) -> Result<FailureType, FormatError> {
    s.parse()
        .map_err(|e| FormatError::schema(location, format!("{e}")))
}

fn ports(docs: Vec<PortDoc>) -> Vec<Port> {
    docs.into_iter()
        .map(|p| Port::new(p.name, p.connector_type))
        .collect()
}

fn modes(
    docs: Vec<FailureModeDoc>,
    direction: Direction,
    location: &str,
) -> Result<Vec<FailureMode>, FormatError> {
    docs.into_iter()
        .enumerate()
        .map(|(i, m)| {
            Ok(FailureMode {
                failure_type: failure_type(
                    &m.failure_type,
                    &format!("{location}[{i}].failure_type"),
                )?,
                id: m.id,
                port: m.port,
                direction,
            })
        })
        .collect()
}

fn port_ref(s: &str, location: &str) -> Result<PortRef, FormatError> {
    match s.split('/').collect::<Vec<_>>()[..] {
        [c, p] => Ok(PortRef::new(c, p)),
        _ => Err(FormatError::schema(
            location,
            format!("`{s}` is not of the form component/port"),
        )),
    }
}

/// Parses a `component/port/failure-type` reference.
pub fn parse_failure_mode_ref(s: &str) -> Option<FailureModeRef> {
    match s.split('/').collect::<Vec<_>>()[..] {
        [c, p, t] if !c.is_empty() && !p.is_empty() => {
            Some(FailureModeRef::new(c, p, t.parse().ok()?))
        }
        _ => None,
    }
}

fn fm_ref(s: &str, location: &str) -> Result<FailureModeRef, FormatError> {
    parse_failure_mode_ref(s).ok_or_else(|| {
        FormatError::schema(
            location,
            format!("`{s}` is not of the form component/port/failure-type"),
        )
    })
}

pub fn import_cft(text: &str) -> Result<(CftProject, Metadata), FormatError> {
    let doc: Doc = serde_json::from_str(text).map_err(FormatError::from_json)?;
    if doc.format != FORMAT {
        return Err(FormatError::schema(
            "format",
            format!("expected `{FORMAT}`, found `{}`", doc.format),
        ));
    }
    if doc.version != VERSION {
        return Err(FormatError::schema(
            "version",
            format!("unsupported version {}", doc.version),
        ));
    }
    let mut project = CftProject::default();
    for (ei, e) in doc.elements.into_iter().enumerate() {
        let loc = format!("elements[{ei}]");
        let mut el = CftElement::new(e.component, ports(e.inports), ports(e.outports));
        el.input_failure_modes = modes(
            e.input_failure_modes,
            Direction::Input,
            &format!("{loc}.input_failure_modes"),
        )?;
        el.output_failure_modes = modes(
            e.output_failure_modes,
            Direction::Output,
            &format!("{loc}.output_failure_modes"),
        )?;
        el.basic_events = e.basic_events;
        for (gi, g) in e.gates.into_iter().enumerate() {
            let kind = GateKind::parse(&g.kind).ok_or_else(|| {
                FormatError::schema(
                    format!("{loc}.gates[{gi}].kind"),
                    format!("unknown gate kind `{}`", g.kind),
                )
            })?;
            el.gates.push(Gate {
                id: g.id,
                kind,
                inputs: g.inputs,
            });
        }
        el.edges = e
            .edges
            .into_iter()
            .map(|x| Edge {
                from: x.from,
                to: x.to,
            })
            .collect();
        project.elements.push(el);
    }
    for (i, l) in doc.port_links.iter().enumerate() {
        project.port_links.push(PortLink {
            from: port_ref(&l.from, &format!("port_links[{i}].from"))?,
            to: port_ref(&l.to, &format!("port_links[{i}].to"))?,
        });
    }
    for (i, l) in doc.links.iter().enumerate() {
        project.links.push(FailureModeLink {
            from: fm_ref(&l.from, &format!("links[{i}].from"))?,
            to: fm_ref(&l.to, &format!("links[{i}].to"))?,
        });
    }
    Ok((project, doc.metadata))
}
