//! Empirical models over a semiring, stored as flat vectors in cell order.

use std::fmt;
use std::sync::Arc;

use crate::error::ModelError;
use crate::rational::Rational;
use crate::scenario::{Assignment, ContextId, Scenario, VarId};
use crate::semiring::{possibility, Semiring};
use crate::support::SupportVector;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel<S> {
    scenario: Arc<Scenario>,
    values: Vec<S>,
}

pub type ProbabilisticModel = EmpiricalModel<Rational>;
pub type PossibilisticModel = EmpiricalModel<bool>;

/// A distribution on `O^U` for an ordered variable list `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<S> {
    pub domain: Vec<VarId>,
    /// One entry per assignment of `domain`, lexicographic.
    pub values: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationViolation<S> {
    pub context: ContextId,
    pub sum: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignallingViolation<S> {
    pub left: ContextId,
    pub right: ContextId,
    pub shared: Assignment,
    pub left_marginal: S,
    pub right_marginal: S,
}

impl<S: fmt::Display> SignallingViolation<S> {
    pub fn describe(&self, scenario: &Scenario) -> String {
        format!(
            "contexts ({}) and ({}) disagree at {}: {} != {}",
            scenario.context_label(self.left),
            scenario.context_label(self.right),
            scenario.describe_assignment(&self.shared),
            self.left_marginal,
            self.right_marginal
        )
    }
}

/// A model of either kind, as read from a document or the corpus.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Probabilistic(ProbabilisticModel),
    Possibilistic(PossibilisticModel),
}

impl AnyModel {
    pub fn scenario(&self) -> &Arc<Scenario> {
        match self {
            AnyModel::Probabilistic(m) => m.scenario(),
            AnyModel::Possibilistic(m) => m.scenario(),
        }
    }

    /// The possibilistic model itself, or the collapse of a probabilistic one.
    pub fn to_possibilistic(&self) -> Result<PossibilisticModel, ModelError> {
        match self {
            AnyModel::Probabilistic(m) => m.possibilistic_collapse(),
            AnyModel::Possibilistic(m) => Ok(m.clone()),
        }
    }

    pub fn support(&self) -> SupportVector {
        match self {
            AnyModel::Probabilistic(m) => m.support(),
            AnyModel::Possibilistic(m) => m.support(),
        }
    }
}

pub(crate) fn same_scenario(a: &Arc<Scenario>, b: &Arc<Scenario>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<S: Semiring> EmpiricalModel<S> {
    /// Builds a model without checking normalization; only the length is
    /// validated. Diagnostics such as [`Self::check_normalization`] operate
    /// on models built this way.
    pub fn from_vector_unchecked(
        scenario: Arc<Scenario>,
        values: Vec<S>,
    ) -> Result<Self, ModelError> {
        if values.len() != scenario.num_cells() {
            return Err(ModelError::WrongLength {
                expected: scenario.num_cells(),
                actual: values.len(),
            });
        }
        Ok(EmpiricalModel { scenario, values })
    }

    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scenario
    }

    /// The flat vector representation, in cell order.
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn table(&self, ctx: ContextId) -> &[S] {
        &self.values[self.scenario.context_cells(ctx)]
    }

    pub fn get(&self, ctx: ContextId, section: &Assignment) -> Option<&S> {
        let i = self.scenario.cell_index(ctx, section).ok()?;
        Some(&self.values[i])
    }

    pub fn support(&self) -> SupportVector {
        SupportVector::from_indices(
            self.values.len(),
            self.values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, _)| i),
        )
    }

    /// Possible sections of one context.
    pub fn possible_sections(&self, ctx: ContextId) -> Vec<Assignment> {
        let range = self.scenario.context_cells(ctx);
        let start = range.start;
        range
            .filter(|&i| !self.values[i].is_zero())
            .map(|i| {
                debug_assert!(i >= start);
                self.scenario.index_cell(i).expect("cell in range").1
            })
            .collect()
    }

    /// Marginal of `e_C` on `U ⊆ C`, with `U` ordered as given.
    pub fn marginalize(
        &self,
        ctx: ContextId,
        onto: &[VarId],
    ) -> Result<Distribution<S>, ModelError> {
        let vars = self.scenario.context(ctx);
        let positions = onto
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect::<Option<Vec<_>>>();
        let Some(positions) = positions else {
            let missing = onto
                .iter()
                .filter(|v| !vars.contains(v))
                .map(|&v| self.scenario.var_name(v).to_string())
                .collect();
            return Err(crate::error::ScenarioError::NotInDomain(missing).into());
        };
        let k = self.scenario.num_outcomes();
        let mut out = vec![S::zero(); k.pow(onto.len() as u32)];
        let range = self.scenario.context_cells(ctx);
        let base = range.start;
        let arity = vars.len();
        let mut digits = vec![0usize; arity];
        for cell in range {
            let mut r = cell - base;
            for d in digits.iter_mut().rev() {
                *d = r % k;
                r /= k;
            }
            let target = positions.iter().fold(0, |acc, &p| acc * k + digits[p]);
            out[target] = out[target].plus(&self.values[cell]);
        }
        Ok(Distribution {
            domain: onto.to_vec(),
            values: out,
        })
    }

    pub fn check_normalization(&self) -> Vec<NormalizationViolation<S>> {
        self.scenario
            .context_ids()
            .filter_map(|c| {
                let sum = S::sum(self.table(c));
                (sum != S::one()).then_some(NormalizationViolation { context: c, sum })
            })
            .collect()
    }

    /// Compares marginals on the overlap of every unordered pair of contexts.
    /// Pairs with an empty overlap are skipped.
    pub fn check_no_signalling(&self) -> Vec<SignallingViolation<S>> {
        let sc = &self.scenario;
        let mut out = Vec::new();
        for i in 0..sc.num_contexts() {
            for j in i + 1..sc.num_contexts() {
                let (ci, cj) = (ContextId(i), ContextId(j));
                let shared = sc.overlap(ci, cj);
                if shared.is_empty() {
                    continue;
                }
                let left = self.marginalize(ci, &shared).expect("overlap is a subset");
                let right = self.marginalize(cj, &shared).expect("overlap is a subset");
                for (rank, (l, r)) in left.values.iter().zip(&right.values).enumerate() {
                    if l != r {
                        out.push(SignallingViolation {
                            left: ci,
                            right: cj,
                            shared: sc.assignments_on(&shared).swap_remove(rank),
                            left_marginal: l.clone(),
                            right_marginal: r.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_normalized(&self) -> bool {
        self.check_normalization().is_empty()
    }

    pub fn is_no_signalling(&self) -> bool {
        self.check_no_signalling().is_empty()
    }
}

impl ProbabilisticModel {
    /// Builds a model from its vector representation, checking that entries
    /// are nonnegative and every context is normalized.
    pub fn from_vector(scenario: Arc<Scenario>, values: Vec<Rational>) -> Result<Self, ModelError> {
        let m = Self::from_vector_unchecked(scenario, values)?;
        if let Some((cell, v)) = m.values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(ModelError::NegativeEntry {
                cell,
                value: v.to_string(),
            });
        }
        if let Some(v) = m.check_normalization().into_iter().next() {
            return Err(ModelError::NotNormalized {
                context: v.context.0,
                sum: v.sum.to_string(),
            });
        }
        Ok(m)
    }

    /// Pointwise image under the homomorphism to the booleans.
    pub fn possibilistic_collapse(&self) -> Result<PossibilisticModel, ModelError> {
        if let Some((cell, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| v.is_negative())
        {
            return Err(ModelError::NegativeEntry {
                cell,
                value: v.to_string(),
            });
        }
        Ok(EmpiricalModel {
            scenario: self.scenario.clone(),
            values: self.values.iter().map(possibility).collect(),
        })
    }

    /// The model with `e_C(s) = 1` iff `s = g|_C`.
    pub fn deterministic(scenario: Arc<Scenario>, global: &Assignment) -> Result<Self, ModelError> {
        let all: Vec<VarId> = (0..scenario.variables().len()).map(VarId).collect();
        if global.restrict(&all).is_none() {
            return Err(crate::error::ScenarioError::PartialGlobalAssignment(all.len()).into());
        }
        let mut values = vec![Rational::ZERO; scenario.num_cells()];
        for c in scenario.context_ids() {
            let local = global
                .restrict(scenario.context(c))
                .expect("global covers every context");
            let idx = scenario.cell_index(c, &local)?;
            values[idx] = Rational::ONE;
        }
        Ok(EmpiricalModel { scenario, values })
    }

    /// Uniform distribution on every context.
    pub fn uniform(scenario: Arc<Scenario>) -> Self {
        let k = scenario.num_outcomes() as i64;
        let mut values = Vec::with_capacity(scenario.num_cells());
        for c in scenario.context_ids() {
            let size = k.pow(scenario.context(c).len() as u32);
            let p = Rational::new(1, size);
            values.extend(std::iter::repeat_n(p, size as usize));
        }
        EmpiricalModel { scenario, values }
    }

    /// Cellwise `Σ w_i · model_i` for nonnegative weights summing to one.
    pub fn convex_combination(
        models: &[ProbabilisticModel],
        weights: &[Rational],
    ) -> Result<Self, ModelError> {
        let first = models.first().ok_or(ModelError::EmptyCombination)?;
        if models.len() != weights.len() {
            return Err(ModelError::WeightCount {
                models: models.len(),
                weights: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(ModelError::NegativeWeight(w.to_string()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(ModelError::WeightSum(total.to_string()));
        }
        if models
            .iter()
            .any(|m| !same_scenario(&m.scenario, &first.scenario))
        {
            return Err(ModelError::ScenarioMismatch);
        }
        let mut values = vec![Rational::ZERO; first.values.len()];
        for (m, w) in models.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (acc, v) in values.iter_mut().zip(&m.values) {
                if !v.is_zero() {
                    *acc += &(w * v);
                }
            }
        }
        Ok(EmpiricalModel {
            scenario: first.scenario.clone(),
            values,
        })
    }
}

impl PossibilisticModel {
    pub fn from_support(
        scenario: Arc<Scenario>,
        support: &SupportVector,
    ) -> Result<Self, ModelError> {
        let values = (0..support.len()).map(|i| support.contains(i)).collect();
        Self::from_vector_unchecked(scenario, values)
    }

    /// True iff every section allowed by `self` is allowed by `other`.
    pub fn is_below(&self, other: &PossibilisticModel) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| !a || *b)
    }
}

/// Convenience for building a possibilistic model from section labels such as
/// `("AB", ["00", "10", "21"])`, with contexts named by their variables.
pub fn possibilistic_from_sections<S: AsRef<str>>(
    scenario: Arc<Scenario>,
    sections: &[(&[S], &[&str])],
) -> Result<PossibilisticModel, ModelError> {
    let mut values = vec![false; scenario.num_cells()];
    for (ctx_vars, labels) in sections {
        let ctx = scenario
            .find_context_by_names(ctx_vars)
            .ok_or(crate::error::ScenarioError::UnknownContext)?;
        let vars: Vec<VarId> = ctx_vars
            .iter()
            .map(|n| {
                scenario
                    .var_id(n.as_ref())
                    .expect("context lookup succeeded")
            })
            .collect();
        for label in labels.iter() {
            let outs = scenario.parse_section(label, vars.len())?;
            let a = Assignment::new(vars.clone(), outs);
            values[scenario.cell_index(ctx, &a)?] = true;
        }
    }
    PossibilisticModel::from_vector_unchecked(scenario, values)
}
