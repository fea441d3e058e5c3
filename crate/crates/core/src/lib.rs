//! Exact no-signalling polytopes and their face lattices.
//!
//! The crate builds the standard-form constraint system of the no-signalling
//! polytope of a finite measurement scenario, enumerates its vertices and
//! faces in exact rational arithmetic, and computes the face lattice as the
//! lattice of achievable supports. Contextuality checks (local
//! decompositions, strong and logical contextuality, realizability of
//! possibilistic models) and the bipartite doubling of pairwise scenarios are
//! built on top.

pub mod bellize;
pub mod contextuality;
pub mod corpus;
pub mod error;
pub mod format;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod polytope;
pub mod rational;
pub mod scenario;
pub mod semiring;
pub mod support;

pub use error::{ContextualityError, FormatError, ModelError, PolytopeError, ScenarioError};
pub use model::{AnyModel, EmpiricalModel, PossibilisticModel, ProbabilisticModel};
pub use rational::Rational;
pub use scenario::{Assignment, ContextId, Scenario, VarId};
pub use semiring::Semiring;
pub use support::SupportVector;
