//! Fixtures shared by the benchmarks.

use nspoly_core::polytope::ConstraintSystem;
use nspoly_core::{corpus, AnyModel, PossibilisticModel};

pub fn bell_system() -> ConstraintSystem {
    ConstraintSystem::no_signalling(&corpus::bell_scenario())
}

pub fn possibilistic(name: &str) -> PossibilisticModel {
    match corpus::get(name)
        .expect("corpus entry")
        .model
        .expect("entry has a model")
    {
        AnyModel::Possibilistic(m) => m,
        AnyModel::Probabilistic(m) => m.possibilistic_collapse().expect("nonnegative"),
    }
}
