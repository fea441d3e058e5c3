//! Randomized property checks over small generated scenarios.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nspoly_core::format::Report;
use nspoly_core::lattice::enumerate_vertices;
use nspoly_core::polytope::ConstraintSystem;
use nspoly_core::{ProbabilisticModel, Rational, Scenario, SupportVector};

pub fn random_scenario(rng: &mut impl Rng) -> Scenario {
    let nv = rng.gen_range(2..=3);
    let vars: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut contexts: BTreeSet<Vec<usize>> = BTreeSet::new();
    let want = rng.gen_range(1..=3);
    while contexts.len() < want {
        let mut c: Vec<usize> = (0..nv).filter(|_| rng.gen_bool(0.5)).collect();
        if c.is_empty() {
            c.push(rng.gen_range(0..nv));
        }
        contexts.insert(c);
    }
    let contexts: Vec<Vec<&str>> = contexts
        .iter()
        .map(|c| c.iter().map(|&i| vars[i].as_str()).collect())
        .collect();
    Scenario::new(vars.iter().map(String::as_str), ["0", "1"], contexts)
        .expect("generated scenario is valid")
}

fn mix(x: &[Rational], y: &[Rational], lambda: &Rational) -> Vec<Rational> {
    let mu = Rational::ONE - lambda;
    x.iter().zip(y).map(|(a, b)| a * lambda + b * &mu).collect()
}

pub fn run(seed: u64, cases: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut mixtures = 0;
    for case in 0..cases {
        let scenario = Arc::new(random_scenario(&mut rng));
        let system = ConstraintSystem::no_signalling(&scenario);
        let vertices = match enumerate_vertices(&system) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let points: Vec<&Vec<Rational>> = vertices.iter().map(|v| &v.point).collect();
        for _ in 0..10 {
            let x = points.choose(&mut rng).expect("a polytope has vertices");
            let y = points.choose(&mut rng).expect("a polytope has vertices");
            let lambda = Rational::new(rng.gen_range(1..8), 8);
            let z = mix(x, y, &lambda);
            mixtures += 1;
            if SupportVector::of(&z) != SupportVector::of(x).join(&SupportVector::of(y)) {
                failures.push(format!("case {case}: support of a mixture is not the join"));
            }
            let model = ProbabilisticModel::from_vector(scenario.clone(), z.clone())
                .expect("mixture is normalized");
            if !model
                .possibilistic_collapse()
                .expect("nonnegative")
                .is_no_signalling()
            {
                failures.push(format!("case {case}: collapse of a mixture signals"));
            }
            let closure = system.support_closure(&SupportVector::of(&z));
            let w = closure.witness.expect("achievable");
            let owned: Vec<Vec<Rational>> = points.iter().map(|p| (*p).clone()).collect();
            if !system
                .relint_membership_among(&w, &closure.support, &owned)
                .unwrap_or(false)
            {
                failures.push(format!(
                    "case {case}: closure witness not in the relative interior"
                ));
            }
        }
    }
    let mut r = Report::new("selftest", failures.is_empty())
        .line(format!(
            "seed {seed}: {cases} scenarios, {mixtures} mixtures"
        ))
        .line(format!("{} failure(s)", failures.len()));
    for f in failures {
        r = r.line(f);
    }
    r
}
