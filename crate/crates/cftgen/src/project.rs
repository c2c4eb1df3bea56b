//! The `.cfc.json` project document.
//!
//! Endpoint paths in linkages are either a bare diagram port name or
//! `block/param`; connection endpoints are `component/port`. A path naming
//! a missing block or component is a schema error. Missing ports and
//! parameters are reported by validation instead, so that a document with
//! wiring mistakes can still be loaded and diagnosed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use cftgen_core::cfc::{
    CfcDiagram, Component, Connection, FunctionBlockInstance, LinkSource, LinkTarget, Linkage,
    Port, PortRef,
};
use cftgen_core::connector::{ConnectorCategory, ConnectorTypeDef};
use cftgen_core::{ConnectorTypeTable, FailureType, FailureTypeSet, System};

use crate::error::{is_identifier, FormatError};

/// A parsed project: the system plus the connector types it declares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfcProject {
    pub system: System,
    /// Declarations made by the document itself, without the built-ins.
    pub declared_types: ConnectorTypeTable,
}

impl CfcProject {
    /// Built-in connector types merged with the declared ones.
    pub fn connector_types(&self) -> ConnectorTypeTable {
        let mut t = ConnectorTypeTable::with_builtins();
        for (name, def) in self.declared_types.iter() {
            // declarations that shadow a built-in were rejected on parse
            let _ = t.declare(name, def);
        }
        t
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectDoc {
    system: String,
    #[serde(default)]
    connector_types: BTreeMap<String, TypeDecl>,
    #[serde(default)]
    components: Vec<ComponentDoc>,
    #[serde(default)]
    connections: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TypeDecl {
    Category(String),
    FailureTypes(Vec<String>),
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
struct ComponentDoc {
    name: String,
    #[serde(default)]
    inports: Vec<PortDoc>,
    #[serde(default)]
    outports: Vec<PortDoc>,
    #[serde(default)]
    diagram: DiagramDoc,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    #[serde(default)]
    blocks: Vec<BlockDoc>,
    #[serde(default)]
    linkages: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    name: String,
    block_type: String,
    #[serde(default)]
    inputs: Vec<PortDoc>,
    #[serde(default)]
    outputs: Vec<PortDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
}

fn ident(s: &str, location: &str) -> Result<String, FormatError> {
    if is_identifier(s) {
        Ok(s.to_string())
    } else {
        Err(FormatError::schema(
            location,
            format!("`{s}` is not an identifier"),
        ))
    }
}

fn ports(docs: &[PortDoc], location: &str) -> Result<Vec<Port>, FormatError> {
    docs.iter()
        .enumerate()
        .map(|(i, p)| {
            let loc = format!("{location}[{i}]");
            Ok(Port::new(
                ident(&p.name, &format!("{loc}.name"))?,
                ident(&p.connector_type, &format!("{loc}.type"))?,
            ))
        })
        .collect()
}

/// Splits `a/b`; a bare `a` yields `None` for the second part.
fn split_path<'s>(
    path: &'s str,
    location: &str,
) -> Result<(&'s str, Option<&'s str>), FormatError> {
    let mut parts = path.split('/');
    let first = parts.next().unwrap_or_default();
    let second = parts.next();
    if parts.next().is_some() || !is_identifier(first) || second.is_some_and(|s| !is_identifier(s))
    {
        return Err(FormatError::schema(
            location,
            format!("malformed endpoint path `{path}`"),
        ));
    }
    Ok((first, second))
}

fn link_endpoint(
    path: &str,
    blocks: &[FunctionBlockInstance],
    location: &str,
) -> Result<Result<(String, String), String>, FormatError> {
    match split_path(path, location)? {
        (name, None) => Ok(Err(name.to_string())),
        (block, Some(param)) => {
            if !blocks.iter().any(|b| b.name == block) {
                return Err(FormatError::schema(
                    location,
                    format!("`{path}` names unknown block `{block}`"),
                ));
            }
            Ok(Ok((block.to_string(), param.to_string())))
        }
    }
}

fn parse_type_decl(
    name: &str,
    decl: &TypeDecl,
    location: &str,
) -> Result<ConnectorTypeDef, FormatError> {
    match decl {
        TypeDecl::Category(c) => c
            .parse::<ConnectorCategory>()
            .map(ConnectorTypeDef::Category)
            .map_err(|()| {
                FormatError::schema(
                    location,
                    format!("unknown connector category `{c}` for `{name}`"),
                )
            }),
        TypeDecl::FailureTypes(list) => {
            let mut set = FailureTypeSet::EMPTY;
            for (i, t) in list.iter().enumerate() {
                let ft: FailureType = t
                    .parse()
                    .map_err(|e| FormatError::schema(format!("{location}[{i}]"), format!("{e}")))?;
                set = set.with(ft);
            }
            Ok(ConnectorTypeDef::Custom(set))
        }
    }
}

pub fn parse_cfc_project(text: &str) -> Result<CfcProject, FormatError> {
    let doc: ProjectDoc = serde_json::from_str(text).map_err(FormatError::from_json)?;

    let builtins = ConnectorTypeTable::with_builtins();
    let mut declared = ConnectorTypeTable::new();
    for (name, decl) in &doc.connector_types {
        let loc = format!("connector_types.{name}");
        ident(name, &loc)?;
        let def = parse_type_decl(name, decl, &loc)?;
        if builtins.get(name).is_some_and(|b| b != def) {
            return Err(FormatError::schema(
                loc,
                format!("`{name}` redefines a built-in connector type"),
            ));
        }
        declared
            .declare(name.clone(), def)
            .map_err(|e| FormatError::schema(&loc, e.to_string()))?;
    }

    let mut components = Vec::with_capacity(doc.components.len());
    for (ci, c) in doc.components.iter().enumerate() {
        let loc = format!("components[{ci}]");
        let name = ident(&c.name, &format!("{loc}.name"))?;
        let mut component = Component::new(
            name,
            ports(&c.inports, &format!("{loc}.inports"))?,
            ports(&c.outports, &format!("{loc}.outports"))?,
        );
        let mut blocks = Vec::with_capacity(c.diagram.blocks.len());
        for (bi, b) in c.diagram.blocks.iter().enumerate() {
            let bl = format!("{loc}.diagram.blocks[{bi}]");
            blocks.push(FunctionBlockInstance {
                name: ident(&b.name, &format!("{bl}.name"))?,
                block_type: ident(&b.block_type, &format!("{bl}.block_type"))?,
                inputs: ports(&b.inputs, &format!("{bl}.inputs"))?,
                outputs: ports(&b.outputs, &format!("{bl}.outputs"))?,
            });
        }
        let mut linkages = Vec::with_capacity(c.diagram.linkages.len());
        for (li, l) in c.diagram.linkages.iter().enumerate() {
            let ll = format!("{loc}.diagram.linkages[{li}]");
            let source = match link_endpoint(&l.from, &blocks, &format!("{ll}.from"))? {
                Ok((block, param)) => LinkSource::BlockOutput { block, param },
                Err(name) => LinkSource::DiagramInput(name),
            };
            let target = match link_endpoint(&l.to, &blocks, &format!("{ll}.to"))? {
                Ok((block, param)) => LinkTarget::BlockInput { block, param },
                Err(name) => LinkTarget::DiagramOutput(name),
            };
            linkages.push(Linkage::new(source, target));
        }
        component.diagram = CfcDiagram {
            blocks,
            linkages,
            ..component.diagram
        };
        components.push(component);
    }

    let mut connections = Vec::with_capacity(doc.connections.len());
    for (i, k) in doc.connections.iter().enumerate() {
        let endpoint = |path: &str, field: &str| -> Result<PortRef, FormatError> {
            let loc = format!("connections[{i}].{field}");
            match split_path(path, &loc)? {
                (comp, Some(port)) => {
                    if !components.iter().any(|c: &Component| c.name == comp) {
                        return Err(FormatError::schema(
                            loc,
                            format!("`{path}` names unknown component `{comp}`"),
                        ));
                    }
                    Ok(PortRef::new(comp, port))
                }
                (_, None) => Err(FormatError::schema(
                    loc,
                    format!("`{path}` is not of the form component/port"),
                )),
            }
        };
        connections.push(Connection {
            from: endpoint(&k.from, "from")?,
            to: endpoint(&k.to, "to")?,
        });
    }

    Ok(CfcProject {
        system: System {
            name: doc.system,
            components,
            connections,
        },
        declared_types: declared,
    })
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

/// Writes a project document. Parsing the result gives back `project`.
pub fn write_cfc_project(project: &CfcProject) -> String {
    let doc = ProjectDoc {
        system: project.system.name.clone(),
        connector_types: project
            .declared_types
            .iter()
            .map(|(name, def)| {
                let decl = match def {
                    ConnectorTypeDef::Category(c) => TypeDecl::Category(c.as_str().into()),
                    ConnectorTypeDef::Custom(set) => {
                        TypeDecl::FailureTypes(set.iter().map(|t| t.as_str().into()).collect())
                    }
                };
                (name.to_string(), decl)
            })
            .collect(),
        components: project
            .system
            .components
            .iter()
            .map(|c| ComponentDoc {
                name: c.name.clone(),
                inports: port_docs(&c.inports),
                outports: port_docs(&c.outports),
                diagram: DiagramDoc {
                    blocks: c
                        .diagram
                        .blocks
                        .iter()
                        .map(|b| BlockDoc {
                            name: b.name.clone(),
                            block_type: b.block_type.clone(),
                            inputs: port_docs(&b.inputs),
                            outputs: port_docs(&b.outputs),
                        })
                        .collect(),
                    linkages: c
                        .diagram
                        .linkages
                        .iter()
                        .map(|l| EdgeDoc {
                            from: l.source.to_string(),
                            to: l.target.to_string(),
                        })
                        .collect(),
                },
            })
            .collect(),
        connections: project
            .system
            .connections
            .iter()
            .map(|k| EdgeDoc {
                from: k.from.to_string(),
                to: k.to.to_string(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("documents serialize");
    out.push('\n');
    out
}
