use cftgen_core::generate::UndrivenInputPolicy;
use cftgen_core::*;
use cftgen_testkit::oracle::{
    minimal_satisfying_sets, table_get, tree_lanes, truth_table, Interpreter,
};
use cftgen_testkit::random::{self, Regime};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn events_of(tree: &ClassicFaultTree) -> Vec<String> {
    tree.basic_events().into_iter().map(String::from).collect()
}

#[test]
fn cut_sets_match_brute_force_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for round in 0..600 {
        let tree = random::coherent_tree(&mut rng, 12);
        let vars = events_of(&tree);
        let table = truth_table(&vars, |env| tree_lanes(&tree, env));
        let want = minimal_satisfying_sets(&vars, &table);
        assert_eq!(
            minimal_cut_sets(&tree).unwrap(),
            want,
            "round {round}: {tree:?}"
        );
    }
}

fn check_against_interpreter(system: &System, lib: &RuleLibrary, round: usize) {
    let (project, trace) = generate(system, lib, &GenerationOptions::default())
        .unwrap_or_else(|e| panic!("round {round}: {e}"));
    assert!(validate_cft(&project).is_valid(), "round {round}");
    assert_eq!(trace.replay(), project, "round {round}");
    let it = Interpreter::new(system, lib);
    let vars = it.boundary_events();
    for top in project.output_failure_modes() {
        let tree = flatten(&project, &top).unwrap();
        for e in tree.basic_events() {
            assert!(
                vars.iter().any(|v| v == e),
                "round {round}: stray event {e}"
            );
        }
        let got = truth_table(&vars, |env| tree_lanes(&tree, env));
        let want = truth_table(&vars, |env| {
            it.output(&top.component, &top.port, top.failure_type, env)
        });
        assert_eq!(got, want, "round {round}: top {top}");
        if tree.is_coherent() {
            assert_eq!(
                minimal_cut_sets(&tree).unwrap(),
                minimal_satisfying_sets(&vars, &want),
                "round {round}: top {top}"
            );
        }
    }
}

#[test]
fn generation_matches_direct_interpretation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..240 {
        let regime = if round % 2 == 0 {
            Regime::Monotone
        } else {
            Regime::Full
        };
        let (system, lib) = random::system_and_library(&mut rng, regime, 12);
        let report = validate_system(&system, &lib.connector_types);
        assert!(report.is_valid(), "round {round}: {:?}", report.findings);
        check_against_interpreter(&system, &lib, round);
    }
}

#[test]
fn monotone_rules_give_coherent_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let (system, lib) = random::system_and_library(&mut rng, Regime::Monotone, 12);
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        for top in project.output_failure_modes() {
            assert!(flatten(&project, &top).unwrap().is_coherent());
        }
    }
}

#[test]
fn flattened_size_is_bounded_by_the_project() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (system, lib) = random::system_and_library(&mut rng, Regime::Full, 12);
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        let bound: usize = project
            .elements
            .iter()
            .map(|e| {
                e.gates.len()
                    + e.basic_events.len()
                    + e.input_failure_modes.len()
                    + e.output_failure_modes.len()
            })
            .sum::<usize>()
            + 1;
        for top in project.output_failure_modes() {
            assert!(flatten(&project, &top).unwrap().nodes.len() <= bound);
        }
    }
}

#[test]
fn synthesized_basic_events_keep_trees_analysable() {
    let opts = GenerationOptions {
        undriven_input_policy: UndrivenInputPolicy::SynthesizeBasicEvent,
        ..GenerationOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..60 {
        let (system, lib) = random::system_and_library(&mut rng, Regime::Monotone, 12);
        let (project, _) = generate(&system, &lib, &opts).unwrap();
        assert!(validate_cft(&project).is_valid());
        for top in project.output_failure_modes() {
            let tree = flatten(&project, &top).unwrap();
            let vars = events_of(&tree);
            if vars.len() > 16 {
                continue;
            }
            let table = truth_table(&vars, |env| tree_lanes(&tree, env));
            assert_eq!(
                minimal_cut_sets(&tree).unwrap(),
                minimal_satisfying_sets(&vars, &table)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Declaration order of blocks and linkages does not change semantics.
    #[test]
    fn block_declaration_order_is_irrelevant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (system, lib) = random::system_and_library(&mut rng, Regime::Full, 10);
        let mut shuffled = system.clone();
        for c in &mut shuffled.components {
            c.diagram.blocks.shuffle(&mut rng);
            c.diagram.linkages.shuffle(&mut rng);
        }
        let (a, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        let (b, _) = generate(&shuffled, &lib, &GenerationOptions::default()).unwrap();
        let vars = Interpreter::new(&system, &lib).boundary_events();
        for top in a.output_failure_modes() {
            let ta = flatten(&a, &top).unwrap();
            let tb = flatten(&b, &top).unwrap();
            prop_assert_eq!(
                truth_table(&vars, |env| tree_lanes(&ta, env)),
                truth_table(&vars, |env| tree_lanes(&tb, env))
            );
        }
    }

    /// Network evaluation of the project agrees with the flattened tree.
    #[test]
    fn project_evaluation_matches_flattened_tree(seed in any::<u64>(), row in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (system, lib) = random::system_and_library(&mut rng, Regime::Full, 12);
        let (project, _) = generate(&system, &lib, &GenerationOptions::default()).unwrap();
        let vars = Interpreter::new(&system, &lib).boundary_events();
        let row = row as usize % (1 << vars.len());
        let mut f = |e: &str| vars.iter().position(|v| v == e).is_some_and(|i| (row >> i) & 1 == 1);
        for top in project.output_failure_modes() {
            let tree = flatten(&project, &top).unwrap();
            let table = truth_table(&vars, |env| tree_lanes(&tree, env));
            prop_assert_eq!(project.evaluate(&top, &mut f).unwrap(), table_get(&table, row));
            prop_assert_eq!(tree.evaluate(&mut f), table_get(&table, row));
        }
    }
}
