//! The three-component example system and its rule library, built in code.

use cftgen_core::cfc::{
    Component, Connection, FunctionBlockInstance, LinkSource, LinkTarget, Linkage, Port, PortRef,
};
use cftgen_core::connector::{ConnectorCategory, ConnectorTypeDef};
use cftgen_core::rules::RuleExpr;
use cftgen_core::{ConnectorTypeTable, FailureType, RuleLibrary, RuleSet, System};

use FailureType::*;

pub fn block(
    name: &str,
    block_type: &str,
    inputs: &[(&str, &str)],
    outputs: &[(&str, &str)],
) -> FunctionBlockInstance {
    FunctionBlockInstance {
        name: name.into(),
        block_type: block_type.into(),
        inputs: inputs.iter().map(|(n, t)| Port::new(*n, *t)).collect(),
        outputs: outputs.iter().map(|(n, t)| Port::new(*n, *t)).collect(),
    }
}

pub fn from_input(name: &str) -> LinkSource {
    LinkSource::DiagramInput(name.into())
}

pub fn from_block(block: &str, param: &str) -> LinkSource {
    LinkSource::BlockOutput {
        block: block.into(),
        param: param.into(),
    }
}

pub fn to_block(block: &str, param: &str) -> LinkTarget {
    LinkTarget::BlockInput {
        block: block.into(),
        param: param.into(),
    }
}

pub fn to_output(name: &str) -> LinkTarget {
    LinkTarget::DiagramOutput(name.into())
}

pub fn connector_types() -> ConnectorTypeTable {
    let mut t = ConnectorTypeTable::with_builtins();
    t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
        .unwrap();
    t.declare("GN", ConnectorTypeDef::Category(ConnectorCategory::Numeric))
        .unwrap();
    t
}

/// The CFC diagram of component c_2.
pub fn c2() -> Component {
    let mut c = Component::new(
        "c_2",
        vec![
            Port::new("FloatValue", "GN"),
            Port::new("BoolValue1", "Bl"),
            Port::new("BoolValue2", "Bl"),
        ],
        vec![Port::new("BoolValue4", "Bl")],
    );
    c.diagram.blocks = vec![
        block(
            "fb_1",
            "CMPLE_GN",
            &[("IN", "GN"), ("SV", "GN")],
            &[("OUT", "Bl")],
        ),
        block(
            "fb_2",
            "OR2_Bl",
            &[("IN1", "Bl"), ("IN2", "Bl")],
            &[("OUT", "Bl")],
        ),
        block(
            "fb_3",
            "AND3_Bl",
            &[("IN1", "Bl"), ("IN2", "Bl")],
            &[("OUT", "Bl")],
        ),
    ];
    c.diagram.linkages = vec![
        Linkage::new(from_input("FloatValue"), to_block("fb_1", "IN")),
        Linkage::new(from_input("BoolValue1"), to_block("fb_2", "IN1")),
        Linkage::new(from_input("BoolValue2"), to_block("fb_2", "IN2")),
        Linkage::new(from_block("fb_1", "OUT"), to_block("fb_3", "IN1")),
        Linkage::new(from_block("fb_2", "OUT"), to_block("fb_3", "IN2")),
        Linkage::new(from_block("fb_3", "OUT"), to_output("BoolValue4")),
    ];
    c
}

pub fn system() -> System {
    let mut c1 = Component::new(
        "c_1",
        vec![],
        vec![
            Port::new("FloatValue", "GN"),
            Port::new("BoolValue1", "Bl"),
            Port::new("BoolValue2", "Bl"),
        ],
    );
    c1.diagram.blocks = vec![
        block("fb_1", "AI_GN", &[], &[("OUT", "GN")]),
        block("fb_2", "DI_Bl", &[], &[("OUT", "Bl")]),
        block("fb_3", "DI_Bl", &[], &[("OUT", "Bl")]),
    ];
    c1.diagram.linkages = vec![
        Linkage::new(from_block("fb_1", "OUT"), to_output("FloatValue")),
        Linkage::new(from_block("fb_2", "OUT"), to_output("BoolValue1")),
        Linkage::new(from_block("fb_3", "OUT"), to_output("BoolValue2")),
    ];

    let mut c3 = Component::new("c_3", vec![Port::new("BoolValue4", "Bl")], vec![]);
    c3.diagram.blocks = vec![block("fb_1", "DO_Bl", &[("IN", "Bl")], &[])];
    c3.diagram.linkages = vec![Linkage::new(
        from_input("BoolValue4"),
        to_block("fb_1", "IN"),
    )];

    let con = |from: (&str, &str), to: (&str, &str)| Connection {
        from: PortRef::new(from.0, from.1),
        to: PortRef::new(to.0, to.1),
    };
    System {
        name: "example".into(),
        components: vec![c1, c2(), c3],
        connections: vec![
            con(("c_1", "FloatValue"), ("c_2", "FloatValue")),
            con(("c_1", "BoolValue1"), ("c_2", "BoolValue1")),
            con(("c_1", "BoolValue2"), ("c_2", "BoolValue2")),
            con(("c_2", "BoolValue4"), ("c_3", "BoolValue4")),
        ],
    }
}

fn t(param: &str, ft: FailureType) -> RuleExpr {
    RuleExpr::term(param, ft)
}

fn and(a: RuleExpr, b: RuleExpr) -> RuleExpr {
    RuleExpr::And(vec![a, b])
}

fn or(a: RuleExpr, b: RuleExpr) -> RuleExpr {
    RuleExpr::Or(vec![a, b])
}

pub fn cmple_gn() -> RuleSet {
    let mut rs = RuleSet::new("CMPLE_GN");
    rs.insert("OUT", FalsePositive, t("IN", TooLow)).unwrap();
    rs.insert("OUT", FalseNegative, t("IN", TooHigh)).unwrap();
    rs.insert("OUT", Omission, t("IN", Omission)).unwrap();
    rs.insert("OUT", Commission, t("IN", Commission)).unwrap();
    rs.insert("OUT", TooEarly, t("IN", TooEarly)).unwrap();
    rs.insert("OUT", TooLate, t("IN", TooLate)).unwrap();
    rs
}

pub fn or2_bl() -> RuleSet {
    let mut rs = RuleSet::new("OR2_Bl");
    rs.insert(
        "OUT",
        FalsePositive,
        or(t("IN1", FalsePositive), t("IN2", FalsePositive)),
    )
    .unwrap();
    rs.insert(
        "OUT",
        FalseNegative,
        and(t("IN1", FalseNegative), t("IN2", FalseNegative)),
    )
    .unwrap();
    rs.insert("OUT", Omission, and(t("IN1", Omission), t("IN2", Omission)))
        .unwrap();
    rs.insert(
        "OUT",
        Commission,
        or(t("IN1", Commission), t("IN2", Commission)),
    )
    .unwrap();
    rs.insert("OUT", TooEarly, or(t("IN1", TooEarly), t("IN2", TooEarly)))
        .unwrap();
    // corrected from IN2.false-late, which is not a failure type
    rs.insert("OUT", TooLate, and(t("IN1", TooLate), t("IN2", TooLate)))
        .unwrap();
    rs
}

pub fn and3_bl() -> RuleSet {
    let mut rs = RuleSet::new("AND3_Bl");
    rs.insert(
        "OUT",
        FalsePositive,
        and(t("IN1", FalsePositive), t("IN2", FalsePositive)),
    )
    .unwrap();
    // over the false-negative inputs, mirroring OR2_Bl (a false-positive typo otherwise)
    rs.insert(
        "OUT",
        FalseNegative,
        or(t("IN1", FalseNegative), t("IN2", FalseNegative)),
    )
    .unwrap();
    rs.insert("OUT", Omission, and(t("IN1", Omission), t("IN2", Omission)))
        .unwrap();
    rs.insert(
        "OUT",
        Commission,
        or(t("IN1", Commission), t("IN2", Commission)),
    )
    .unwrap();
    rs.insert("OUT", TooEarly, or(t("IN1", TooEarly), t("IN2", TooEarly)))
        .unwrap();
    rs.insert("OUT", TooLate, and(t("IN1", TooLate), t("IN2", TooLate)))
        .unwrap();
    rs
}

pub fn library() -> RuleLibrary {
    let mut t = ConnectorTypeTable::new();
    t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
        .unwrap();
    t.declare("GN", ConnectorTypeDef::Category(ConnectorCategory::Numeric))
        .unwrap();
    let mut lib = RuleLibrary::new(t);
    lib.add(cmple_gn()).unwrap();
    lib.add(or2_bl()).unwrap();
    lib.add(and3_bl()).unwrap();
    lib
}
