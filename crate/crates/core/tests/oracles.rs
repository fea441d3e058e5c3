mod common;

use std::sync::Arc;

use nspoly_core::bellize::{bellize_model, bellize_scenario};
use nspoly_core::contextuality::{is_realizable, is_strongly_contextual};
use nspoly_core::format;
use nspoly_core::lattice::{enumerate_vertices, support_lattice_from_vertices};
use nspoly_core::linalg::{lp_solve, LinearSystem, LpProblem, LpResult, RationalMatrix, Sense};
use nspoly_core::polytope::ConstraintSystem;
use nspoly_core::{PossibilisticModel, ProbabilisticModel, Rational, Scenario, SupportVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

/// Binary scenarios on up to three variables with distinct nonempty contexts.
fn scenarios() -> impl Strategy<Value = Arc<Scenario>> {
    (2usize..=3)
        .prop_flat_map(|nv| {
            (
                Just(nv),
                proptest::collection::btree_set(1u8..(1 << nv), 1..=3),
            )
        })
        .prop_map(|(nv, masks)| {
            let vars: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let contexts: Vec<Vec<&str>> = masks
                .iter()
                .map(|m| {
                    (0..nv)
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| vars[i].as_str())
                        .collect()
                })
                .collect();
            Arc::new(Scenario::new(vars.iter().map(String::as_str), ["0", "1"], contexts).unwrap())
        })
}

/// Complete pairwise scenarios on three variables with two or three outcomes.
fn pairwise_scenarios() -> impl Strategy<Value = Arc<Scenario>> {
    (2usize..=3).prop_map(|k| {
        let outcomes: Vec<String> = (0..k).map(|o| o.to_string()).collect();
        Arc::new(
            Scenario::new(
                ["x", "y", "z"],
                outcomes.iter().map(String::as_str),
                vec![vec!["x", "y"], vec!["x", "z"], vec!["y", "z"]],
            )
            .unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn vertices_match_exhaustive_bases(s in scenarios()) {
        let system = ConstraintSystem::no_signalling(&s);
        let pruned: Vec<Vec<Rational>> =
            enumerate_vertices(&system).unwrap().into_iter().map(|v| v.point).collect();
        prop_assert_eq!(pruned, exhaustive_vertices(&system));
    }

    #[test]
    fn support_lattice_nodes_are_achievable(s in scenarios()) {
        let system = ConstraintSystem::no_signalling(&s);
        let verts = enumerate_vertices(&system).unwrap();
        let lat = support_lattice_from_vertices(&system, &verts).unwrap();
        for node in lat.nodes().iter().skip(1) {
            let w = node.witness.as_ref().unwrap();
            let sup = node.key.support().unwrap();
            prop_assert_eq!(&SupportVector::of(w), sup);
            prop_assert_eq!(system.support_closure(sup).support, sup.clone());
        }
    }

    #[test]
    fn simplex_matches_brute_force(seed in any::<u64>(), rows in 1usize..=3, vars in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = random_bounded_lp(&mut rng, rows, vars);
        let brute = brute_force_min(&a, &b, &c);
        let res = lp_solve(&LpProblem::new(LinearSystem::new(RationalMatrix::from_rows(a), b), c, Sense::Minimize));
        match (brute, res) {
            (None, LpResult::Infeasible) => {}
            (Some(v), LpResult::Optimal { value, .. }) => prop_assert_eq!(v, value),
            (b, r) => prop_assert!(false, "brute force {:?}, simplex {:?}", b, r),
        }
    }

    #[test]
    fn scenario_and_model_documents_round_trip(s in scenarios(), seed in any::<u64>()) {
        let text = format::to_canonical_string(&format::scenario_value(&s));
        let back = format::parse_scenario(&text).unwrap();
        prop_assert_eq!(&back, &*s);
        let system = ConstraintSystem::no_signalling(&s);
        let verts = enumerate_vertices(&system).unwrap();
        let v = &verts[(seed as usize) % verts.len()];
        let m = ProbabilisticModel::from_vector(s.clone(), v.point.clone()).unwrap();
        let doc = format::to_canonical_string(&format::probabilistic_value(&m));
        let parsed = format::parse_model(&doc).unwrap();
        prop_assert_eq!(format::to_canonical_string(&format::model_value(&parsed)), doc);
    }

    #[test]
    fn bellize_doubles_the_scenario(s in pairwise_scenarios(), bits in any::<u64>()) {
        let b = bellize_scenario(&s).unwrap();
        let n = s.variables().len();
        prop_assert_eq!(b.variables().len(), 2 * n);
        prop_assert_eq!(b.num_contexts(), n * n);
        // realizable model: the union of a random set of deterministic supports
        let globals: Vec<_> = s.global_assignments().collect();
        let chosen: Vec<_> = globals
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << (i % 64)) != 0)
            .map(|(_, g)| g)
            .collect();
        prop_assume!(!chosen.is_empty());
        let mut sup = SupportVector::empty(s.num_cells());
        for g in chosen {
            sup = sup.join(&ProbabilisticModel::deterministic(s.clone(), g).unwrap().support());
        }
        let m = PossibilisticModel::from_support(s.clone(), &sup).unwrap();
        prop_assert!(m.is_no_signalling());
        let bm = bellize_model(&m).unwrap();
        prop_assert!(bm.is_no_signalling());
        prop_assert_eq!(is_strongly_contextual(&m), is_strongly_contextual(&bm));
        // realizable models stay realizable
        prop_assert!(is_realizable(&m).unwrap().is_realizable());
        prop_assert!(is_realizable(&bm).unwrap().is_realizable());
    }
}

#[test]
fn bellized_odd_cycle_stays_strongly_contextual() {
    let s = scenario(
        &["x", "y", "z"],
        &["0", "1"],
        &[&["x", "y"], &["x", "z"], &["y", "z"]],
    );
    let mut sup = SupportVector::empty(s.num_cells());
    for c in s.context_ids() {
        for g in s.global_assignments() {
            let local = g.restrict(s.context(c)).unwrap();
            if local.values()[0] != local.values()[1] {
                sup.insert(s.cell_index(c, &local).unwrap());
            }
        }
    }
    let m = PossibilisticModel::from_support(s, &sup).unwrap();
    let b = bellize_model(&m).unwrap();
    assert!(is_strongly_contextual(&m) && is_strongly_contextual(&b));
    assert!(exhaustive_strongly_contextual(&b));
    assert!(is_realizable(&b).unwrap().is_realizable());
}

#[test]
fn strong_contextuality_matches_exhaustive_on_bell_vertices() {
    let s = nspoly_core::corpus::bell_scenario();
    let system = ConstraintSystem::no_signalling(&s);
    for v in enumerate_vertices(&system).unwrap() {
        let m = PossibilisticModel::from_support(s.clone(), &v.support).unwrap();
        assert_eq!(
            is_strongly_contextual(&m),
            exhaustive_strongly_contextual(&m)
        );
    }
}
