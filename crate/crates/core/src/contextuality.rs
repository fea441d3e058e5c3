//! Local and contextual models: local deterministic models, membership in
//! the local polytope, strong and logical contextuality, the classification
//! of no-signalling vertices, realizability of possibilistic models and
//! minimality among boolean no-signalling models.
//!
//! Logical contextuality follows the usual definition from the literature on
//! the contextuality hierarchy: some possible section extends to no global
//! assignment consistent with the support.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::ContextualityError;
use crate::lattice::{enumerate_vertices, Vertex};
use crate::linalg::{lp_solve, LinearSystem, LpProblem, LpResult, RationalMatrix};
use crate::model::{PossibilisticModel, ProbabilisticModel};
use crate::polytope::{Closure, ConstraintSystem};
use crate::rational::Rational;
use crate::scenario::{Assignment, ContextId, Scenario, VarId};

/// Default bound on `|O|^|X|` for anything that enumerates global
/// assignments.
pub const DEFAULT_ASSIGNMENT_LIMIT: usize = 65536;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexClass {
    LocalDeterministic(Assignment),
    MinimalStronglyContextual,
}

impl VertexClass {
    pub fn tag(&self) -> &'static str {
        match self {
            VertexClass::LocalDeterministic(_) => "LD",
            VertexClass::MinimalStronglyContextual => "MSC",
        }
    }
}

/// A deterministic model together with every global assignment inducing it.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDeterministic {
    pub witnesses: Vec<Assignment>,
    pub model: ProbabilisticModel,
}

/// Convex weights on global assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub weights: Vec<(Assignment, Rational)>,
}

impl LocalDecomposition {
    /// `Σ λ_g · det(g)`.
    pub fn reconstruct(
        &self,
        scenario: &Arc<Scenario>,
    ) -> Result<ProbabilisticModel, ContextualityError> {
        let models = self
            .weights
            .iter()
            .map(|(g, _)| ProbabilisticModel::deterministic(scenario.clone(), g))
            .collect::<Result<Vec<_>, _>>()?;
        let w: Vec<Rational> = self.weights.iter().map(|(_, w)| w.clone()).collect();
        Ok(ProbabilisticModel::convex_combination(&models, &w)?)
    }
}

fn check_assignment_limit(scenario: &Scenario, limit: usize) -> Result<(), ContextualityError> {
    match scenario.global_assignment_count() {
        Some(c) if c <= limit as u128 => Ok(()),
        other => Err(ContextualityError::TooManyAssignments {
            count: other.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()),
            limit,
        }),
    }
}

/// One model per distinct deterministic table; global assignments that
/// differ only on unmeasured variables share a model.
pub fn local_deterministic_models(
    scenario: &Arc<Scenario>,
    limit: usize,
) -> Result<Vec<LocalDeterministic>, ContextualityError> {
    check_assignment_limit(scenario, limit)?;
    let measured = scenario.measured_variables();
    let mut by_key: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut out: Vec<LocalDeterministic> = Vec::new();
    for g in scenario.global_assignments() {
        let key: Vec<usize> = measured
            .iter()
            .map(|&v| g.get(v).expect("global"))
            .collect();
        if let Some(&i) = by_key.get(&key) {
            out[i].witnesses.push(g);
            continue;
        }
        by_key.insert(key, out.len());
        out.push(LocalDeterministic {
            model: ProbabilisticModel::deterministic(scenario.clone(), &g)?,
            witnesses: vec![g],
        });
    }
    Ok(out)
}

fn require_no_signalling(model: &ProbabilisticModel) -> Result<(), ContextualityError> {
    if let Some(v) = model.check_no_signalling().into_iter().next() {
        return Err(ContextualityError::Signalling(v.describe(model.scenario())));
    }
    Ok(())
}

/// Decides membership in the local polytope by an LP whose columns are the
/// deterministic models. Returns an exact decomposition, or `None` when the
/// model is nonlocal.
pub fn is_local(
    model: &ProbabilisticModel,
    limit: usize,
) -> Result<Option<LocalDecomposition>, ContextualityError> {
    require_no_signalling(model)?;
    let scenario = model.scenario();
    let lds = local_deterministic_models(scenario, limit)?;
    let n = scenario.num_cells();
    let k = lds.len();
    let mut rows = vec![vec![Rational::ZERO; k]; n + 1];
    for (j, ld) in lds.iter().enumerate() {
        for (i, v) in ld.model.values().iter().enumerate() {
            rows[i][j] = v.clone();
        }
        rows[n][j] = Rational::ONE;
    }
    let mut b = model.values().to_vec();
    b.push(Rational::ONE);
    let system = LinearSystem::new(RationalMatrix::from_rows_with_cols(k, rows), b);
    match lp_solve(&LpProblem::feasibility(system)) {
        LpResult::Optimal { solution, .. } => {
            let weights = lds
                .iter()
                .zip(solution)
                .filter(|(_, w)| !w.is_zero())
                .map(|(ld, w)| (ld.witnesses[0].clone(), w))
                .collect();
            Ok(Some(LocalDecomposition { weights }))
        }
        _ => Ok(None),
    }
}

/// Backtracking search for a global assignment whose restriction to every
/// context is a possible section. Variables are assigned in scenario order,
/// with `fixed` values forced.
fn consistent_extension(model: &PossibilisticModel, fixed: &[Option<usize>]) -> Option<Assignment> {
    let scenario = model.scenario();
    let nv = scenario.variables().len();
    let k = scenario.num_outcomes();
    // possible sections per context, as outcome vectors in context order
    let sections: Vec<Vec<Vec<usize>>> = scenario
        .context_ids()
        .map(|c| {
            model
                .possible_sections(c)
                .into_iter()
                .map(|a| a.values().to_vec())
                .collect()
        })
        .collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for c in scenario.context_ids() {
        for v in scenario.context(c) {
            touching[v.0].push(c.0);
        }
    }
    let mut values: Vec<Option<usize>> = fixed.to_vec();

    fn compatible(ctx: &[VarId], sections: &[Vec<usize>], values: &[Option<usize>]) -> bool {
        sections.iter().any(|s| {
            ctx.iter()
                .zip(s)
                .all(|(v, &o)| values[v.0].is_none_or(|x| x == o))
        })
    }

    fn search(
        var: usize,
        scenario: &Scenario,
        k: usize,
        fixed: &[Option<usize>],
        sections: &[Vec<Vec<usize>>],
        touching: &[Vec<usize>],
        values: &mut Vec<Option<usize>>,
    ) -> bool {
        if var == values.len() {
            return true;
        }
        let choices: Vec<usize> = match fixed[var] {
            Some(o) => vec![o],
            None if touching[var].is_empty() => vec![0],
            None => (0..k).collect(),
        };
        for o in choices {
            values[var] = Some(o);
            let ok = touching[var]
                .iter()
                .all(|&c| compatible(scenario.context(ContextId(c)), &sections[c], values));
            if ok && search(var + 1, scenario, k, fixed, sections, touching, values) {
                return true;
            }
        }
        values[var] = fixed[var];
        false
    }

    // contexts must be compatible with the forced values before any choice
    for c in scenario.context_ids() {
        if !compatible(scenario.context(c), &sections[c.0], fixed) {
            return None;
        }
    }
    if search(0, scenario, k, fixed, &sections, &touching, &mut values) {
        Some(Assignment::new(
            (0..nv).map(VarId).collect(),
            values
                .into_iter()
                .map(|v| v.expect("all assigned"))
                .collect(),
        ))
    } else {
        None
    }
}

/// A global assignment consistent with the support, if one exists.
pub fn consistent_global_assignment(model: &PossibilisticModel) -> Option<Assignment> {
    if !model.is_no_signalling() {
        log::warn!("strong contextuality checked on a signalling model");
    }
    let nv = model.scenario().variables().len();
    consistent_extension(model, &vec![None; nv])
}

/// No global assignment is consistent with the support.
pub fn is_strongly_contextual(model: &PossibilisticModel) -> bool {
    consistent_global_assignment(model).is_none()
}

/// A possible section that extends to no consistent global assignment, if
/// any.
pub fn logical_contextuality_witness(
    model: &PossibilisticModel,
) -> Option<(ContextId, Assignment)> {
    let scenario = model.scenario();
    let nv = scenario.variables().len();
    for c in scenario.context_ids() {
        for s in model.possible_sections(c) {
            let mut fixed = vec![None; nv];
            for (v, &o) in s.domain().iter().zip(s.values()) {
                fixed[v.0] = Some(o);
            }
            if consistent_extension(model, &fixed).is_none() {
                return Some((c, s));
            }
        }
    }
    None
}

pub fn is_logically_contextual(model: &PossibilisticModel) -> bool {
    logical_contextuality_witness(model).is_some()
}

/// Tags every vertex of the no-signalling polytope as local deterministic or
/// strongly contextual.
///
/// # Panics
///
/// If a vertex is neither deterministic nor strongly contextual, or both.
pub fn classify_vertices(
    scenario: &Arc<Scenario>,
    limit: usize,
) -> Result<Vec<(Vertex, VertexClass)>, ContextualityError> {
    let system = ConstraintSystem::no_signalling(scenario);
    let vertices = enumerate_vertices(&system)?;
    classify(scenario, vertices, limit)
}

pub fn classify(
    scenario: &Arc<Scenario>,
    vertices: Vec<Vertex>,
    limit: usize,
) -> Result<Vec<(Vertex, VertexClass)>, ContextualityError> {
    let lds = local_deterministic_models(scenario, limit)?;
    let table: HashMap<&[Rational], &Assignment> = lds
        .iter()
        .map(|ld| (ld.model.values(), &ld.witnesses[0]))
        .collect();
    let mut out = Vec::with_capacity(vertices.len());
    for v in vertices {
        let model = ProbabilisticModel::from_vector(scenario.clone(), v.point.clone())?;
        let sc = is_strongly_contextual(&model.possibilistic_collapse()?);
        let class = match table.get(v.point.as_slice()) {
            Some(g) => {
                assert!(!sc, "a deterministic vertex cannot be strongly contextual");
                VertexClass::LocalDeterministic((*g).clone())
            }
            None => {
                assert!(
                    sc,
                    "non-deterministic vertex {} is not strongly contextual",
                    v.support
                );
                VertexClass::MinimalStronglyContextual
            }
        };
        out.push((v, class));
    }
    Ok(out)
}

/// Outcome of [`is_realizable`].
#[derive(Debug, Clone)]
pub struct Realizability {
    /// A probabilistic model whose support is exactly the input, if any.
    pub witness: Option<ProbabilisticModel>,
    /// Per-coordinate maxima backing the answer.
    pub closure: Closure,
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides whether some no-signalling probabilistic model has support exactly
/// the given boolean model.
pub fn is_realizable(model: &PossibilisticModel) -> Result<Realizability, ContextualityError> {
    if let Some(v) = model.check_no_signalling().into_iter().next() {
        return Err(ContextualityError::Signalling(v.describe(model.scenario())));
    }
    let scenario = model.scenario();
    let system = ConstraintSystem::no_signalling(scenario);
    let support = model.support();
    let closure = system.support_closure(&support);
    let witness = match &closure.witness {
        Some(w) if closure.support == support => Some(ProbabilisticModel::from_vector(
            scenario.clone(),
            w.clone(),
        )?),
        _ => None,
    };
    debug_assert_eq!(witness.is_some(), system.is_achievable(&support));
    Ok(Realizability { witness, closure })
}

/// Greatest boolean no-signalling model below `alive`: repeatedly removes
/// sections whose marginal on some overlap is impossible on the other side.
fn propagate(scenario: &Scenario, alive: &mut [bool]) {
    let pairs: Vec<(ContextId, ContextId, Vec<VarId>)> = scenario
        .context_ids()
        .flat_map(|a| scenario.context_ids().map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a, b, scenario.overlap(a, b)))
        .filter(|(_, _, u)| !u.is_empty())
        .collect();
    let cells: Vec<Vec<(usize, Assignment)>> = scenario
        .context_ids()
        .map(|c| {
            scenario
                .context_cells(c)
                .map(|i| (i, scenario.index_cell(i).expect("in range").1))
                .collect()
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for (a, b, shared) in &pairs {
            let possible_b: Vec<Assignment> = cells[b.0]
                .iter()
                .filter(|(i, _)| alive[*i])
                .map(|(_, s)| s.restrict(shared).expect("overlap"))
                .collect();
            for (i, s) in &cells[a.0] {
                if alive[*i] && !possible_b.contains(&s.restrict(shared).expect("overlap")) {
                    alive[*i] = false;
                    changed = true;
                }
            }
        }
    }
}

/// True iff no boolean no-signalling model lies strictly below `model`.
///
/// Unions of no-signalling boolean families are no-signalling, so removing a
/// cell and propagating to a fixed point yields the greatest candidate below
/// the model that avoids that cell. The model is minimal iff every such
/// candidate leaves some context without a possible section.
pub fn is_minimal_boolean_ns(model: &PossibilisticModel) -> Result<bool, ContextualityError> {
    if let Some(v) = model.check_no_signalling().into_iter().next() {
        return Err(ContextualityError::Signalling(v.describe(model.scenario())));
    }
    let scenario = model.scenario();
    for cell in model.support().iter() {
        let mut alive = model.values().to_vec();
        alive[cell] = false;
        propagate(scenario, &mut alive);
        let normalized = scenario
            .context_ids()
            .all(|c| scenario.context_cells(c).any(|i| alive[i]));
        if normalized {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::possibilistic_from_sections;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn bell() -> Arc<Scenario> {
        Arc::new(
            Scenario::new(
                ["a", "a'", "b", "b'"],
                ["0", "1"],
                [
                    vec!["a", "b"],
                    vec!["a'", "b"],
                    vec!["a", "b'"],
                    vec!["a'", "b'"],
                ],
            )
            .unwrap(),
        )
    }

    fn bell_table() -> ProbabilisticModel {
        let mut v = vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)];
        for _ in 0..3 {
            v.extend([q(3, 8), q(1, 8), q(1, 8), q(3, 8)]);
        }
        ProbabilisticModel::from_vector(bell(), v).unwrap()
    }

    fn model_s() -> PossibilisticModel {
        let s = Arc::new(
            Scenario::new(
                ["A", "B", "C", "D"],
                ["0", "1", "2"],
                [
                    ["A", "B"],
                    ["A", "C"],
                    ["A", "D"],
                    ["B", "C"],
                    ["B", "D"],
                    ["C", "D"],
                ],
            )
            .unwrap(),
        );
        possibilistic_from_sections(
            s,
            &[
                (&["A", "B"], &["00", "10", "21"]),
                (&["A", "C"], &["00", "11", "21"]),
                (&["A", "D"], &["01", "10", "21"]),
                (&["B", "C"], &["00", "11"]),
                (&["B", "D"], &["00", "11"]),
                (&["C", "D"], &["01", "10"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bell_ld_models() {
        let lds = local_deterministic_models(&bell(), DEFAULT_ASSIGNMENT_LIMIT).unwrap();
        assert_eq!(lds.len(), 16);
        assert!(lds.iter().all(|ld| ld.witnesses.len() == 1));
    }

    #[test]
    fn unused_variable_is_invisible() {
        let s = Arc::new(Scenario::new(["a", "b", "z"], ["0", "1"], [vec!["a", "b"]]).unwrap());
        let lds = local_deterministic_models(&s, DEFAULT_ASSIGNMENT_LIMIT).unwrap();
        assert_eq!(lds.len(), 4);
        assert!(lds.iter().all(|ld| ld.witnesses.len() == 2));
    }

    #[test]
    fn bell_table_is_nonlocal() {
        assert_eq!(
            is_local(&bell_table(), DEFAULT_ASSIGNMENT_LIMIT).unwrap(),
            None
        );
    }

    #[test]
    fn uniform_and_deterministic_are_local() {
        let s = bell();
        let u = ProbabilisticModel::uniform(s.clone());
        let d = is_local(&u, DEFAULT_ASSIGNMENT_LIMIT).unwrap().unwrap();
        assert_eq!(d.reconstruct(&s).unwrap(), u);

        let g = s
            .global_assignment(&[("a", "1"), ("a'", "0"), ("b", "1"), ("b'", "1")])
            .unwrap();
        let det = ProbabilisticModel::deterministic(s.clone(), &g).unwrap();
        let d = is_local(&det, DEFAULT_ASSIGNMENT_LIMIT).unwrap().unwrap();
        assert_eq!(d.weights, vec![(g, Rational::ONE)]);
    }

    #[test]
    fn signalling_rejected() {
        let mut v = vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)];
        for _ in 0..3 {
            v.extend([q(3, 8), q(1, 8), q(1, 8), q(3, 8)]);
        }
        let m = ProbabilisticModel::from_vector(bell(), v).unwrap();
        assert!(matches!(
            is_local(&m, DEFAULT_ASSIGNMENT_LIMIT),
            Err(ContextualityError::Signalling(_))
        ));
    }

    #[test]
    fn assignment_guard() {
        let s = bell();
        assert!(matches!(
            local_deterministic_models(&s, 15),
            Err(ContextualityError::TooManyAssignments { .. })
        ));
    }

    #[test]
    fn bell_collapse_is_not_contextual() {
        let m = bell_table().possibilistic_collapse().unwrap();
        let g = consistent_global_assignment(&m).unwrap();
        let det = ProbabilisticModel::deterministic(bell(), &g).unwrap();
        assert!(det.possibilistic_collapse().unwrap().is_below(&m));
        assert!(!is_logically_contextual(&m));
    }

    #[test]
    fn model_s_properties() {
        let s = model_s();
        assert!(s.is_no_signalling());
        assert!(is_strongly_contextual(&s));
        assert!(is_logically_contextual(&s));
        assert!(is_minimal_boolean_ns(&s).unwrap());
        let r = is_realizable(&s).unwrap();
        assert!(!r.is_realizable());
        assert!(r.closure.maxima.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn bell_table_collapse_is_realizable() {
        let m = bell_table().possibilistic_collapse().unwrap();
        let r = is_realizable(&m).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.support(), m.support());
        assert!(w.is_no_signalling());
    }

    #[test]
    fn full_support_not_minimal() {
        let s = bell();
        let full = PossibilisticModel::from_vector_unchecked(s.clone(), vec![true; s.num_cells()])
            .unwrap();
        assert!(!is_minimal_boolean_ns(&full).unwrap());
    }

    #[test]
    fn bell_classification() {
        let classes = classify_vertices(&bell(), DEFAULT_ASSIGNMENT_LIMIT).unwrap();
        assert_eq!(classes.len(), 24);
        let msc: Vec<&Vertex> = classes
            .iter()
            .filter(|(_, c)| *c == VertexClass::MinimalStronglyContextual)
            .map(|(v, _)| v)
            .collect();
        assert_eq!(msc.len(), 8);
        for v in msc {
            assert_eq!(v.support.count(), 8);
            assert!(v.point.iter().all(|x| x.is_zero() || *x == q(1, 2)));
            let m = PossibilisticModel::from_support(bell(), &v.support).unwrap();
            assert!(is_minimal_boolean_ns(&m).unwrap());
        }
    }
}
