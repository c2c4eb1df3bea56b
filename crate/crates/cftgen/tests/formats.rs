use std::path::PathBuf;

use cftgen::cftdoc::{export_cft, import_cft, Metadata};
use cftgen::project::{parse_cfc_project, write_cfc_project, CfcProject};
use cftgen::rulefile::{parse_rule_library, write_rule_library};
use cftgen::{project_to_dot, tree_to_dot, FormatError};
use cftgen_core::cfc::{LinkSource, LinkTarget};
use cftgen_core::connector::ConnectorTypeDef;
use cftgen_core::*;
use cftgen_testkit::fixture;
use cftgen_testkit::random::{self, Regime};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn project_fixture_matches_the_example() {
    let p = parse_cfc_project(&fixture("example.cfc.json")).unwrap();
    assert_eq!(p.system.components.len(), 3);
    assert_eq!(p.system.connections.len(), 4);
    let c2 = p.system.component("c_2").unwrap();
    assert_eq!(c2.diagram.blocks.len(), 3);
    assert_eq!(c2.diagram.linkages.len(), 6);
    assert_eq!(p.system, fixture::system());
    assert_eq!(p.connector_types(), fixture::connector_types());
}

#[test]
fn empty_project() {
    let p = parse_cfc_project(r#"{ "system": "s", "components": [] }"#).unwrap();
    assert!(p.system.components.is_empty());
    assert!(validate_system(&p.system, &p.connector_types()).is_valid());
}

#[test]
fn missing_block_in_path_is_schema_error() {
    let err = parse_cfc_project(&fixture("mutants/missing_block.cfc.json")).unwrap_err();
    match err {
        FormatError::Schema { location, message } => {
            assert_eq!(location, "components[1].diagram.linkages[3].from");
            assert!(message.contains("fb_9"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn json_syntax_errors_carry_positions() {
    let err = parse_cfc_project("{\n  \"system\": \"s\",\n  \"components\": [,]\n}").unwrap_err();
    assert!(
        matches!(
            err,
            FormatError::Syntax {
                line: 3,
                column: 18,
                ..
            }
        ),
        "{err:?}"
    );
    let err = parse_cfc_project("{ \"system\": \"s\" } x").unwrap_err();
    assert!(
        matches!(err, FormatError::Syntax { line: 1, .. }),
        "{err:?}"
    );
    let err = parse_cfc_project("{ \"system\": \"s\", \"extra\": 1 }").unwrap_err();
    assert!(matches!(err, FormatError::Schema { .. }), "{err:?}");
}

#[test]
fn custom_connector_types() {
    let p = parse_cfc_project(
        r#"{ "system": "s", "connector_types": { "Msg": ["omission", "too-late"] } }"#,
    )
    .unwrap();
    let set = p.connector_types().map("Msg").unwrap();
    assert_eq!(
        set,
        FailureTypeSet::from_types([FailureType::Omission, FailureType::TooLate])
    );
    assert_eq!(parse_cfc_project(&write_cfc_project(&p)).unwrap(), p);

    let err = parse_cfc_project(r#"{ "system": "s", "connector_types": { "Msg": ["late"] } }"#)
        .unwrap_err();
    assert!(
        matches!(err, FormatError::Schema { location, .. } if location == "connector_types.Msg[0]")
    );
    let err =
        parse_cfc_project(r#"{ "system": "s", "connector_types": { "Boolean": "numeric" } }"#)
            .unwrap_err();
    assert!(matches!(err, FormatError::Schema { .. }));
}

#[test]
fn endpoint_paths() {
    let p = parse_cfc_project(&fixture("example.cfc.json")).unwrap();
    let c2 = p.system.component("c_2").unwrap();
    assert_eq!(
        c2.diagram.linkages[0].source,
        LinkSource::DiagramInput("FloatValue".into())
    );
    assert_eq!(
        c2.diagram.linkages[0].target,
        LinkTarget::BlockInput {
            block: "fb_1".into(),
            param: "IN".into()
        }
    );
    let err = parse_cfc_project(
        r#"{ "system": "s", "components": [{ "name": "a" }], "connections": [{ "from": "a/x/y", "to": "a/z" }] }"#,
    )
    .unwrap_err();
    assert!(
        matches!(err, FormatError::Schema { location, .. } if location == "connections[0].from")
    );
}

#[test]
fn project_round_trip_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (system, lib) = random::system_and_library(&mut rng, Regime::Monotone, 12);
        let p = CfcProject {
            system,
            declared_types: lib.connector_types.clone(),
        };
        assert_eq!(parse_cfc_project(&write_cfc_project(&p)).unwrap(), p);
        assert_eq!(parse_rule_library(&write_rule_library(&lib)).unwrap(), lib);
    }
}

#[test]
fn rule_fixture_matches_the_example() {
    let lib = parse_rule_library(&fixture("example_rules.cftr")).unwrap();
    assert_eq!(lib.len(), 3);
    let cmple = lib.get("CMPLE_GN").unwrap();
    assert_eq!(cmple.len(), 6);
    let first = &cmple.rules()[0];
    assert_eq!(
        format!("{}.{} = {}", first.output, first.failure_type, first.expr),
        "OUT.false-positive = IN.too-low"
    );
    assert_eq!(lib, fixture::library());
    assert_eq!(
        lib.connector_types.get("GN"),
        Some(ConnectorTypeDef::Category(
            cftgen_core::connector::ConnectorCategory::Numeric
        ))
    );
}

#[test]
fn cft_document_of_the_example() {
    let (project, _) = generate(
        &fixture::system(),
        &fixture::library(),
        &GenerationOptions::default(),
    )
    .unwrap();
    let text = export_cft(&project, &Metadata::for_tool());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 3);
    assert_eq!(v["elements"][1]["gates"].as_array().unwrap().len(), 12);
    assert!(text.ends_with("}\n"));
    let (back, meta) = import_cft(&text).unwrap();
    assert_eq!(back, project);
    assert_eq!(meta, Metadata::for_tool());
    assert_eq!(export_cft(&back, &meta), text);
}

#[test]
fn empty_cft_document() {
    let text = export_cft(&CftProject::default(), &Metadata::for_tool());
    assert_eq!(import_cft(&text).unwrap().0, CftProject::default());
    assert_eq!(text, fixture("empty.cft.json"));
}

#[test]
fn cft_import_rejects_bad_documents() {
    let good = fixture("example.cft.json");
    let bad_kind = good.replacen("\"kind\": \"OR\"", "\"kind\": \"NAND\"", 1);
    assert!(matches!(
        import_cft(&bad_kind),
        Err(FormatError::Schema { location, .. }) if location == "elements[1].gates[0].kind"
    ));
    let bad_version = good.replacen("\"version\": 1", "\"version\": 7", 1);
    assert!(matches!(
        import_cft(&bad_version),
        Err(FormatError::Schema { .. })
    ));
    assert!(matches!(
        import_cft(&format!("{good}]")),
        Err(FormatError::Syntax { .. })
    ));
}

#[test]
fn cft_round_trip_on_random_projects() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..240 {
        let regime = if round % 2 == 0 {
            Regime::Monotone
        } else {
            Regime::Full
        };
        let (system, lib) = random::system_and_library(&mut rng, regime, 12);
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        let text = export_cft(&project, &Metadata::for_tool());
        assert_eq!(import_cft(&text).unwrap().0, project, "round {round}");
    }
}

fn count(haystack: &str, needle: &str) -> usize {
    haystack.matches(needle).count()
}

#[test]
fn dot_of_the_example() {
    let (project, _) = generate(
        &fixture::system(),
        &fixture::library(),
        &GenerationOptions::default(),
    )
    .unwrap();
    let c2_only = CftProject {
        elements: vec![project.element("c_2").unwrap().clone()],
        ..CftProject::default()
    };
    let dot = project_to_dot(&c2_only);
    assert!(dot.starts_with("digraph cft {\n"));
    assert_eq!(count(&dot, "shape=triangle"), 18);
    assert_eq!(count(&dot, "shape=invtriangle"), 6);
    assert_eq!(count(&dot, "shape=box"), 6);
    assert_eq!(count(&dot, "shape=ellipse"), 6);
    assert_eq!(project_to_dot(&c2_only), dot);

    assert_eq!(project_to_dot(&CftProject::default()), "digraph cft {\n}\n");

    let top = FailureModeRef::new("c_2", "BoolValue4", FailureType::FalsePositive);
    let tree = flatten(&project, &top).unwrap();
    let dot = tree_to_dot(&tree, &top.to_string());
    assert_eq!(count(&dot, "shape=circle"), 3);
    assert_eq!(count(&dot, "shape=box"), 1);
    assert_eq!(count(&dot, "shape=ellipse"), 1);
    assert_eq!(count(&dot, " -> "), 4);
}
