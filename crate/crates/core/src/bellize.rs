//! Bipartite doubling of a complete pairwise scenario.
//!
//! Every variable `P` becomes `P|1` (first party) and `P|2` (second party).
//! The context `{P|1, Q|2}` carries the sections of the original context
//! `{P, Q}` with each party variable taking the value of its source, and the
//! diagonal context `{P|1, P|2}` carries `oo` for each possible outcome `o`
//! of `P`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::ContextualityError;
use crate::model::PossibilisticModel;
use crate::scenario::{Assignment, ContextId, Scenario, VarId};

pub fn party_name(var: &str, party: u8) -> String {
    format!("{var}|{party}")
}

/// Outcomes of `var` that occur in some possible section, checked to agree
/// across every context containing `var`.
pub fn marginal_support(
    model: &PossibilisticModel,
    var: VarId,
) -> Result<BTreeSet<usize>, ContextualityError> {
    let scenario = model.scenario();
    let mut found: Option<BTreeSet<usize>> = None;
    for c in scenario
        .context_ids()
        .filter(|&c| scenario.context(c).contains(&var))
    {
        let here: BTreeSet<usize> = model
            .possible_sections(c)
            .iter()
            .map(|s| s.get(var).expect("context contains var"))
            .collect();
        match &found {
            None => found = Some(here),
            Some(prev) if *prev != here => {
                return Err(ContextualityError::MarginalDisagreement(
                    scenario.var_name(var).to_string(),
                ));
            }
            Some(_) => {}
        }
    }
    found.ok_or_else(|| ContextualityError::UnmeasuredVariable(scenario.var_name(var).to_string()))
}

fn check_pairwise(scenario: &Scenario) -> Result<(), ContextualityError> {
    for c in scenario.context_ids() {
        if scenario.context(c).len() != 2 {
            return Err(ContextualityError::NotPairwise(c.0));
        }
    }
    let nv = scenario.variables().len();
    for p in 0..nv {
        for q in p + 1..nv {
            if scenario.find_context(&[VarId(p), VarId(q)]).is_none() {
                return Err(ContextualityError::IncompletePairFamily);
            }
        }
    }
    Ok(())
}

/// Variables `P|1` for all `P`, then `P|2`; contexts `[P|1, Q|2]` with `P`
/// the outer and `Q` the inner loop, both in scenario order.
pub fn bellize_scenario(scenario: &Scenario) -> Result<Scenario, ContextualityError> {
    check_pairwise(scenario)?;
    let vars = scenario.variables();
    let names: Vec<String> = [1u8, 2]
        .iter()
        .flat_map(|&party| vars.iter().map(move |v| party_name(v, party)))
        .collect();
    let contexts: Vec<Vec<String>> = vars
        .iter()
        .flat_map(|p| {
            vars.iter()
                .map(move |q| vec![party_name(p, 1), party_name(q, 2)])
        })
        .collect();
    Ok(Scenario::new(
        names,
        scenario.outcomes().iter().cloned(),
        contexts,
    )?)
}

pub fn bellize_model(model: &PossibilisticModel) -> Result<PossibilisticModel, ContextualityError> {
    let source = model.scenario();
    if let Some(v) = model.check_no_signalling().into_iter().next() {
        return Err(ContextualityError::Signalling(v.describe(source)));
    }
    let target = Arc::new(bellize_scenario(source)?);
    let nv = source.variables().len();
    let mut values = vec![false; target.num_cells()];
    for p in 0..nv {
        for q in 0..nv {
            let ctx = ContextId(p * nv + q);
            let domain = target.context(ctx).to_vec();
            let sections: Vec<Vec<usize>> = if p == q {
                marginal_support(model, VarId(p))?
                    .into_iter()
                    .map(|o| vec![o, o])
                    .collect()
            } else {
                let pair = [VarId(p), VarId(q)];
                let orig = source.find_context(&pair).expect("complete pair family");
                model
                    .possible_sections(orig)
                    .iter()
                    .map(|s| vec![s.get(VarId(p)).unwrap(), s.get(VarId(q)).unwrap()])
                    .collect()
            };
            for s in sections {
                let idx = target.cell_index(ctx, &Assignment::new(domain.clone(), s))?;
                values[idx] = true;
            }
        }
    }
    Ok(PossibilisticModel::from_vector_unchecked(target, values)?)
}
