//! Seeded generators for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use cftgen_core::cfc::{
    Component, Connection, FunctionBlockInstance, LinkSource, LinkTarget, Linkage, Port, PortRef,
};
use cftgen_core::cft::{GateKind, TreeNode};
use cftgen_core::connector::{ConnectorCategory, ConnectorTypeDef};
use cftgen_core::rules::RuleExpr;
use cftgen_core::{
    ClassicFaultTree, ConnectorTypeTable, FailureType, FailureTypeSet, RuleLibrary, RuleSet, System,
};

use crate::oracle::Interpreter;

/// A random coherent tree over at most `max_events` basic events named
/// `e0`, `e1`, ...
pub fn coherent_tree(rng: &mut impl Rng, max_events: usize) -> ClassicFaultTree {
    let events = rng.gen_range(1..=max_events);
    let mut nodes: Vec<TreeNode> = (0..events)
        .map(|i| TreeNode::BasicEvent(format!("e{i}")))
        .collect();
    if rng.gen_bool(0.2) {
        nodes.push(TreeNode::False);
    }
    let gates = rng.gen_range(1..=12);
    for _ in 0..gates {
        let kind = if rng.gen_bool(0.5) {
            GateKind::And
        } else {
            GateKind::Or
        };
        let arity = rng.gen_range(2..=4).min(nodes.len().max(2));
        let inputs = (0..arity).map(|_| rng.gen_range(0..nodes.len())).collect();
        nodes.push(TreeNode::Gate { kind, inputs });
    }
    let top = nodes.len() - 1;
    ClassicFaultTree { nodes, top }
}

/// Which rule operators and defects a random instance may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// AND/OR rules only; undriven block inputs, missing rule keys and
    /// missing rule sets (worst case) are allowed.
    Monotone,
    /// Every operator including NOT and XOR; every input is driven and
    /// every rule set is complete.
    Full,
}

const TYPES: [&str; 4] = ["B", "N2", "C3", "B2"];

pub fn connector_types() -> ConnectorTypeTable {
    use FailureType::*;
    let mut t = ConnectorTypeTable::new();
    t.declare("B", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
        .unwrap();
    t.declare(
        "N2",
        ConnectorTypeDef::Custom(FailureTypeSet::from_types([TooHigh, TooLow])),
    )
    .unwrap();
    t.declare(
        "C3",
        ConnectorTypeDef::Custom(FailureTypeSet::from_types([Omission, Commission, TooLate])),
    )
    .unwrap();
    t.declare(
        "B2",
        ConnectorTypeDef::Custom(FailureTypeSet::from_types([FalsePositive, FalseNegative])),
    )
    .unwrap();
    t
}

fn pick_type(rng: &mut impl Rng) -> String {
    // the six-valued type is rare so boundary sets stay small
    if rng.gen_bool(0.1) {
        "B".into()
    } else {
        TYPES[rng.gen_range(1..TYPES.len())].into()
    }
}

struct Builder<'r, R: Rng> {
    rng: &'r mut R,
    regime: Regime,
    table: ConnectorTypeTable,
    lib_sets: Vec<RuleSet>,
}

impl<R: Rng> Builder<'_, R> {
    fn source_component(&mut self, name: &str) -> Component {
        let n = self.rng.gen_range(2..=3);
        let outports: Vec<Port> = (0..n)
            .map(|i| Port::new(format!("o{i}"), pick_type(self.rng)))
            .collect();
        let mut c = Component::new(name, vec![], outports.clone());
        for (i, p) in outports.iter().enumerate() {
            let b = format!("src{i}");
            c.diagram.blocks.push(FunctionBlockInstance {
                name: b.clone(),
                block_type: "SRC".into(),
                inputs: vec![],
                outputs: vec![Port::new("OUT", p.connector_type.clone())],
            });
            c.diagram.linkages.push(Linkage::new(
                LinkSource::BlockOutput {
                    block: b,
                    param: "OUT".into(),
                },
                LinkTarget::DiagramOutput(p.name.clone()),
            ));
        }
        c
    }

    /// A component whose inports carry the given types.
    fn inner_component(&mut self, name: &str, inport_types: Vec<String>) -> Component {
        let inports: Vec<Port> = inport_types
            .into_iter()
            .enumerate()
            .map(|(i, t)| Port::new(format!("i{i}"), t))
            .collect();
        // available linkage sources with their connector types
        let mut sources: Vec<(LinkSource, String)> = inports
            .iter()
            .map(|p| {
                (
                    LinkSource::DiagramInput(p.name.clone()),
                    p.connector_type.clone(),
                )
            })
            .collect();
        let mut blocks = Vec::new();
        let mut linkages = Vec::new();
        for k in 0..self.rng.gen_range(1..=3) {
            let bname = format!("fb_{k}");
            let mut inputs = Vec::new();
            for j in 0..self.rng.gen_range(1..=3) {
                let pname = format!("IN{j}");
                let undriven = self.regime == Regime::Monotone && self.rng.gen_bool(0.15);
                let ty = if undriven || sources.is_empty() {
                    pick_type(self.rng)
                } else {
                    let (src, ty) = sources.choose(self.rng).unwrap().clone();
                    linkages.push(Linkage::new(
                        src,
                        LinkTarget::BlockInput {
                            block: bname.clone(),
                            param: pname.clone(),
                        },
                    ));
                    ty
                };
                inputs.push(Port::new(pname, ty));
            }
            let outputs: Vec<Port> = (0..self.rng.gen_range(1..=2))
                .map(|j| Port::new(format!("OUT{j}"), pick_type(self.rng)))
                .collect();
            let block_type = format!("{name}_T{k}");
            let block = FunctionBlockInstance {
                name: bname.clone(),
                block_type: block_type.clone(),
                inputs,
                outputs: outputs.clone(),
            };
            let missing = self.regime == Regime::Monotone && self.rng.gen_bool(0.2);
            if !missing {
                let rs = self.rule_set(&block);
                self.lib_sets.push(rs);
            }
            blocks.push(block);
            for o in outputs {
                sources.push((
                    LinkSource::BlockOutput {
                        block: bname.clone(),
                        param: o.name.clone(),
                    },
                    o.connector_type,
                ));
            }
        }
        let block_sources: Vec<_> = sources
            .iter()
            .filter(|(s, _)| matches!(s, LinkSource::BlockOutput { .. }))
            .cloned()
            .collect();
        let mut outports = Vec::new();
        for j in 0..self.rng.gen_range(1..=2) {
            let pool = if self.regime == Regime::Monotone && self.rng.gen_bool(0.2) {
                &sources
            } else {
                &block_sources
            };
            let (src, ty) = pool.choose(self.rng).unwrap().clone();
            let oname = format!("o{j}");
            linkages.push(Linkage::new(src, LinkTarget::DiagramOutput(oname.clone())));
            outports.push(Port::new(oname, ty));
        }
        let mut c = Component::new(name, inports, outports);
        c.diagram.blocks = blocks;
        c.diagram.linkages = linkages;
        c
    }

    fn rule_set(&mut self, block: &FunctionBlockInstance) -> RuleSet {
        let terms: Vec<RuleExpr> = block
            .inputs
            .iter()
            .flat_map(|p| {
                self.table
                    .map(&p.connector_type)
                    .unwrap()
                    .iter()
                    .map(|t| RuleExpr::term(p.name.clone(), t))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut rs = RuleSet::new(block.block_type.clone());
        for o in &block.outputs {
            for t in self.table.map(&o.connector_type).unwrap().iter() {
                if self.regime == Regime::Monotone && self.rng.gen_bool(0.15) {
                    continue;
                }
                let e = self.expr(&terms, 2);
                rs.insert(o.name.clone(), t, e).unwrap();
            }
        }
        rs
    }

    fn expr(&mut self, terms: &[RuleExpr], depth: u32) -> RuleExpr {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return terms.choose(self.rng).unwrap().clone();
        }
        let ops = if self.regime == Regime::Full { 4 } else { 2 };
        match self.rng.gen_range(0..ops) {
            3 => RuleExpr::Not(Box::new(self.expr(terms, depth - 1))),
            op => {
                let n = self.rng.gen_range(2..=3);
                let args = (0..n).map(|_| self.expr(terms, depth - 1)).collect();
                match op {
                    0 => RuleExpr::And(args),
                    1 => RuleExpr::Or(args),
                    _ => RuleExpr::Xor(args),
                }
            }
        }
    }
}

/// A random valid system and a library validated against it. At most
/// `max_boundary` distinct basic events can influence any output.
pub fn system_and_library(
    rng: &mut impl Rng,
    regime: Regime,
    max_boundary: usize,
) -> (System, RuleLibrary) {
    loop {
        let (system, lib) = attempt(rng, regime);
        if Interpreter::new(&system, &lib).boundary_events().len() <= max_boundary {
            return (system, lib);
        }
    }
}

fn attempt(rng: &mut impl Rng, regime: Regime) -> (System, RuleLibrary) {
    let mut b = Builder {
        rng,
        regime,
        table: connector_types(),
        lib_sets: Vec::new(),
    };
    let mut components = vec![b.source_component("c_0")];
    let mut connections = Vec::new();
    for i in 1..b.rng.gen_range(2..=4) {
        let name = format!("c_{i}");
        let mut types = Vec::new();
        for j in 0..b.rng.gen_range(1..=2) {
            let upstream: Vec<(String, Port)> = components
                .iter()
                .flat_map(|c: &Component| c.outports.iter().map(|p| (c.name.clone(), p.clone())))
                .collect();
            if b.rng.gen_bool(0.8) {
                let (comp, port) = upstream.choose(b.rng).unwrap().clone();
                connections.push(Connection {
                    from: PortRef::new(comp, port.name),
                    to: PortRef::new(name.clone(), format!("i{j}")),
                });
                types.push(port.connector_type);
            } else {
                types.push(pick_type(b.rng));
            }
        }
        let c = b.inner_component(&name, types);
        components.push(c);
    }
    let mut lib = RuleLibrary::new(b.table);
    for rs in b.lib_sets {
        lib.add(rs).unwrap();
    }
    let system = System {
        name: "random".into(),
        components,
        connections,
    };
    (system, lib)
}
