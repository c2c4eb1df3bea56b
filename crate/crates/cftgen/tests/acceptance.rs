//! Acceptance suite. Prints one line per criterion and fails the target if
//! any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cftgen::cftdoc::{export_cft, import_cft, Metadata};
use cftgen::project::parse_cfc_project;
use cftgen::rulefile::parse_rule_library;
use cftgen_core::analysis::sort_cut_sets;
use cftgen_core::cft::GateKind;
use cftgen_core::*;
use cftgen_testkit::fixture;
use cftgen_testkit::oracle::{minimal_satisfying_sets, tree_lanes, truth_table, Interpreter};
use cftgen_testkit::random::{self, Regime};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use FailureType::*;

const BUDGET: Duration = Duration::from_secs(5);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap()
}

/// Project and library loaded from the shipped documents.
fn example() -> (System, RuleLibrary) {
    let p = parse_cfc_project(&read("example.cfc.json")).unwrap();
    let lib = parse_rule_library(&read("example_rules.cftr")).unwrap();
    (p.system, lib)
}

fn cli(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cftgen::cli::run(
        std::iter::once("cftgen").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

fn top_cut_sets(project: &CftProject, t: FailureType) -> Vec<CutSet> {
    let tree = flatten(project, &FailureModeRef::new("c_2", "BoolValue4", t)).unwrap();
    minimal_cut_sets(&tree).unwrap()
}

fn c1_sets(raw: &[&[&str]]) -> Vec<CutSet> {
    let mut v: Vec<CutSet> = raw
        .iter()
        .map(|s| s.iter().map(|e| format!("c_1.{e}")).collect())
        .collect();
    sort_cut_sets(&mut v);
    v
}

fn criterion_1() {
    let (system, lib) = example();
    let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
    assert_eq!(project.elements.len(), 3);
    let c2 = project.element("c_2").unwrap();
    assert_eq!(c2.input_failure_modes.len(), 18);
    assert_eq!(c2.output_failure_modes.len(), 6);
    assert_eq!(c2.gate_count(GateKind::And), 6);
    assert_eq!(c2.gate_count(GateKind::Or), 6);
}

fn criterion_2() {
    let (system, lib) = example();
    let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
    let expected = [
        (
            FalsePositive,
            c1_sets(&[
                &["FloatValue.too-low", "BoolValue1.false-positive"],
                &["FloatValue.too-low", "BoolValue2.false-positive"],
            ]),
        ),
        (
            Commission,
            c1_sets(&[
                &["BoolValue1.commission"],
                &["BoolValue2.commission"],
                &["FloatValue.commission"],
            ]),
        ),
        (
            TooLate,
            c1_sets(&[&[
                "BoolValue1.too-late",
                "BoolValue2.too-late",
                "FloatValue.too-late",
            ]]),
        ),
    ];
    let it = Interpreter::new(&system, &lib);
    let vars = it.boundary_events();
    for (t, want) in expected {
        assert_eq!(top_cut_sets(&project, t), want, "{t}");
        let table = truth_table(&vars, |env| it.output("c_2", "BoolValue4", t, env));
        assert_eq!(minimal_satisfying_sets(&vars, &table), want, "{t} oracle");
    }
}

fn criterion_3() {
    let (mut system, lib) = example();
    let c2 = system
        .components
        .iter_mut()
        .find(|c| c.name == "c_2")
        .unwrap();
    c2.diagram
        .blocks
        .iter_mut()
        .find(|b| b.name == "fb_2")
        .unwrap()
        .block_type = "MYSTERY_Bl".into();
    let (project, trace) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
    assert!(trace.events.iter().any(
        |e| matches!(e, generate::TraceEvent::WorstCaseApplied { block, .. } if block == "fb_2")
    ));
    let c2 = project.element("c_2").unwrap();
    let it = Interpreter::new(&system, &lib);
    let vars = it.boundary_events();
    for t in FailureTypeSet::BOOLEAN.iter() {
        let g = c2.gate(&format!("c_2/fb_2/OUT/{t}/g0")).unwrap();
        assert_eq!(g.kind, GateKind::Or, "{t}");
        assert_eq!(g.inputs.iter().collect::<BTreeSet<_>>().len(), 12, "{t}");
        let table = truth_table(&vars, |env| it.output("c_2", "BoolValue4", t, env));
        assert_eq!(
            top_cut_sets(&project, t),
            minimal_satisfying_sets(&vars, &table),
            "{t}"
        );
    }
}

fn criterion_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for round in 0..500 {
        let tree = random::coherent_tree(&mut rng, 12);
        let vars: Vec<String> = tree.basic_events().into_iter().map(String::from).collect();
        assert!(vars.len() <= 12);
        let table = truth_table(&vars, |env| tree_lanes(&tree, env));
        assert_eq!(
            minimal_cut_sets(&tree).unwrap(),
            minimal_satisfying_sets(&vars, &table),
            "round {round}"
        );
    }
}

fn random_pairs() -> impl Iterator<Item = (System, RuleLibrary)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..200).map(move |round| {
        let regime = if round % 2 == 0 {
            Regime::Monotone
        } else {
            Regime::Full
        };
        random::system_and_library(&mut rng, regime, 12)
    })
}

fn criterion_5() {
    for (round, (system, lib)) in random_pairs().enumerate() {
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        let it = Interpreter::new(&system, &lib);
        let vars = it.boundary_events();
        assert!(vars.len() <= 12, "round {round}");
        for top in project.output_failure_modes() {
            let tree = flatten(&project, &top).unwrap();
            let got = truth_table(&vars, |env| tree_lanes(&tree, env));
            let want = truth_table(&vars, |env| {
                it.output(&top.component, &top.port, top.failure_type, env)
            });
            assert_eq!(got, want, "round {round}: {top}");
        }
    }
}

fn criterion_6() {
    let dir = tempfile::tempdir().unwrap();
    let (cft, dot) = (dir.path().join("run.cft.json"), dir.path().join("run.dot"));
    let (cft_s, dot_s) = (cft.display().to_string(), dot.display().to_string());
    let args = [
        "-q",
        "generate",
        &fx("example.cfc.json"),
        "--rules",
        &fx("example_rules.cftr"),
        "-o",
        &cft_s,
        "--dot",
        &dot_s,
    ];
    let mut first: Option<(Vec<u8>, Vec<u8>)> = None;
    for run in 0..100 {
        assert_eq!(cli(&args).0, 0);
        let bytes = (std::fs::read(&cft).unwrap(), std::fs::read(&dot).unwrap());
        match &first {
            None => first = Some(bytes),
            Some(f) => assert!(f == &bytes, "run {run} differs"),
        }
    }
    let (code, out) = cli(&["--format", "json", "diff", &cft_s, &cft_s]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let tops = v["diff"]["tops"].as_array().unwrap();
    assert_eq!(tops.len(), 6);
    assert!(tops.iter().all(|t| t["verdict"] == "equivalent"));
}

fn criterion_7() {
    let mutants = [
        ("mutants/type_mismatch.cfc.json", FindingKind::TypeMismatch),
        ("mutants/cycle.cfc.json", FindingKind::Cycle),
        ("mutants/fan_in.cfc.json", FindingKind::FanIn),
        (
            "mutants/dangling_endpoint.cfc.json",
            FindingKind::DanglingEndpoint,
        ),
    ];
    for (file, kind) in mutants {
        let p = parse_cfc_project(&read(file)).unwrap();
        let report = validate_system(&p.system, &p.connector_types());
        let kinds: Vec<FindingKind> = report.errors().map(|f| f.kind).collect();
        assert_eq!(kinds, [kind], "{file}");
    }

    let (system, _) = example();
    let lib = parse_rule_library(&read("mutants/out_of_map.cftr")).unwrap();
    let mut kinds = Vec::new();
    for c in &system.components {
        for b in &c.diagram.blocks {
            if let Some(rs) = lib.get(&b.block_type) {
                kinds.extend(
                    validate_rule_set(rs, b, &fixture::connector_types())
                        .errors()
                        .map(|f| f.kind),
                );
            }
        }
    }
    assert_eq!(kinds, [FindingKind::FailureTypeOutOfMap]);
}

fn criterion_8() {
    let (system, lib) = example();
    let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
    let meta = Metadata::for_tool();
    assert_eq!(
        import_cft(&export_cft(&project, &meta)).unwrap(),
        (project, meta.clone())
    );
    for (round, (system, lib)) in random_pairs().enumerate() {
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        assert_eq!(
            import_cft(&export_cft(&project, &meta)).unwrap().0,
            project,
            "round {round}"
        );
    }
}

fn main() {
    let criteria: [(&str, fn()); 8] = [
        (
            "example yields 3 elements; c_2 has 18 IFMs, 6 OFMs, 6 AND, 6 OR",
            criterion_1,
        ),
        (
            "example cut sets for false-positive, commission and too-late",
            criterion_2,
        ),
        (
            "worst-case rule for an unknown fb_2 composes through fb_3",
            criterion_3,
        ),
        (
            "minimal cut sets of 500 random coherent trees match brute force",
            criterion_4,
        ),
        (
            "200 random systems: generated CFT equals direct interpretation",
            criterion_5,
        ),
        (
            "100 generate runs are byte-identical; self diff is equivalent",
            criterion_6,
        ),
        (
            "each mutation fixture yields exactly its expected error",
            criterion_7,
        ),
        (
            "CFT documents round trip through export and import",
            criterion_8,
        ),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (what, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(()) if elapsed <= BUDGET => "PASS".to_string(),
            Ok(()) => format!("FAIL (took {elapsed:.2?}, budget {BUDGET:?})"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| e.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                format!("FAIL ({msg})")
            }
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {verdict} - {what} [{elapsed:.2?}]", i + 1);
    }
    let _ = std::panic::take_hook();
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
