//! Finite measurement scenarios and the flat cell index space of their models.
//!
//! Cells are ordered context by context (in the order the contexts were
//! given), and within a context by the lexicographic order of outcome indices
//! with the first context variable most significant.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(pub usize);

/// Outcome values for an ordered list of variables. Outcomes are stored as
/// indices into the scenario's outcome list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    domain: Vec<VarId>,
    values: Vec<usize>,
}

impl Assignment {
    pub fn new(domain: Vec<VarId>, values: Vec<usize>) -> Self {
        assert_eq!(domain.len(), values.len(), "domain/value length mismatch");
        Assignment { domain, values }
    }

    pub fn empty() -> Self {
        Assignment {
            domain: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn domain(&self) -> &[VarId] {
        &self.domain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.domain
            .iter()
            .position(|&v| v == var)
            .map(|i| self.values[i])
    }

    /// The restriction of this assignment to `vars`, ordered as `vars`.
    pub fn restrict(&self, vars: &[VarId]) -> Option<Assignment> {
        let values = vars
            .iter()
            .map(|&v| self.get(v))
            .collect::<Option<Vec<_>>>()?;
        Some(Assignment {
            domain: vars.to_vec(),
            values,
        })
    }

    /// True when both assignments give the same value to every shared variable.
    pub fn agrees_with(&self, other: &Assignment) -> bool {
        self.domain
            .iter()
            .zip(&self.values)
            .all(|(&v, &o)| other.get(v).is_none_or(|p| p == o))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    variables: Vec<String>,
    outcomes: Vec<String>,
    contexts: Vec<Vec<VarId>>,
    offsets: Vec<usize>,
    cells: usize,
}

impl Scenario {
    pub fn new<V, O, C, S>(variables: V, outcomes: O, contexts: C) -> Result<Self, ScenarioError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        O: IntoIterator,
        O::Item: Into<String>,
        C: IntoIterator<Item = S>,
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if variables.is_empty() {
            return Err(ScenarioError::NoVariables);
        }
        if outcomes.is_empty() {
            return Err(ScenarioError::NoOutcomes);
        }
        let mut index = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.as_str(), VarId(i)).is_some() {
                return Err(ScenarioError::DuplicateVariable(v.clone()));
            }
        }
        let mut seen_outcomes = BTreeSet::new();
        for o in &outcomes {
            if !seen_outcomes.insert(o.as_str()) {
                return Err(ScenarioError::DuplicateOutcome(o.clone()));
            }
        }

        let mut ctxs: Vec<Vec<VarId>> = Vec::new();
        let mut as_sets: Vec<BTreeSet<VarId>> = Vec::new();
        for (ci, ctx) in contexts.into_iter().enumerate() {
            let mut vars = Vec::new();
            let mut set = BTreeSet::new();
            for name in ctx {
                let name = name.as_ref();
                let id = *index
                    .get(name)
                    .ok_or_else(|| ScenarioError::UnknownVariable {
                        context: ci,
                        name: name.to_string(),
                    })?;
                if !set.insert(id) {
                    return Err(ScenarioError::RepeatedVariable {
                        context: ci,
                        name: name.to_string(),
                    });
                }
                vars.push(id);
            }
            if vars.is_empty() {
                return Err(ScenarioError::EmptyContext(ci));
            }
            if let Some(prev) = as_sets.iter().position(|s| *s == set) {
                return Err(ScenarioError::DuplicateContext(ci, prev));
            }
            as_sets.push(set);
            ctxs.push(vars);
        }

        let k = outcomes.len();
        let mut offsets = Vec::with_capacity(ctxs.len());
        let mut cells = 0usize;
        for c in &ctxs {
            offsets.push(cells);
            cells += k.pow(c.len() as u32);
        }
        Ok(Scenario {
            variables,
            outcomes,
            contexts: ctxs,
            offsets,
            cells,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn num_contexts(&self) -> usize {
        self.contexts.len()
    }

    /// `n`, the length of the flattened model vector.
    pub fn num_cells(&self) -> usize {
        self.cells
    }

    pub fn context_ids(&self) -> impl Iterator<Item = ContextId> {
        (0..self.contexts.len()).map(ContextId)
    }

    pub fn context(&self, id: ContextId) -> &[VarId] {
        &self.contexts[id.0]
    }

    pub fn contexts(&self) -> &[Vec<VarId>] {
        &self.contexts
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v == name).map(VarId)
    }

    pub fn var_name(&self, id: VarId) -> &str {
        &self.variables[id.0]
    }

    pub fn outcome_id(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    /// Looks a context up by its variable set, ignoring order.
    pub fn find_context(&self, vars: &[VarId]) -> Option<ContextId> {
        let want: BTreeSet<_> = vars.iter().copied().collect();
        self.contexts
            .iter()
            .position(|c| c.len() == want.len() && c.iter().all(|v| want.contains(v)))
            .map(ContextId)
    }

    pub fn find_context_by_names<S: AsRef<str>>(&self, names: &[S]) -> Option<ContextId> {
        let ids = names
            .iter()
            .map(|n| self.var_id(n.as_ref()))
            .collect::<Option<Vec<_>>>()?;
        self.find_context(&ids)
    }

    /// Cell range `[start, end)` of a context.
    pub fn context_cells(&self, id: ContextId) -> std::ops::Range<usize> {
        let start = self.offsets[id.0];
        start..start + self.num_outcomes().pow(self.contexts[id.0].len() as u32)
    }

    /// Variables shared by two contexts, in the order of the first.
    pub fn overlap(&self, a: ContextId, b: ContextId) -> Vec<VarId> {
        let other = &self.contexts[b.0];
        self.contexts[a.0]
            .iter()
            .copied()
            .filter(|v| other.contains(v))
            .collect()
    }

    /// Variables that occur in at least one context.
    pub fn measured_variables(&self) -> Vec<VarId> {
        let set: BTreeSet<VarId> = self.contexts.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// All assignments on `domain`, lexicographic with the first variable most
    /// significant.
    pub fn assignments_on(&self, domain: &[VarId]) -> Vec<Assignment> {
        let k = self.num_outcomes();
        let total = k.pow(domain.len() as u32);
        (0..total)
            .map(|rank| Assignment {
                domain: domain.to_vec(),
                values: digits(rank, k, domain.len()),
            })
            .collect()
    }

    pub fn assignments(&self, ctx: ContextId) -> Result<Vec<Assignment>, ScenarioError> {
        let vars = self
            .contexts
            .get(ctx.0)
            .ok_or(ScenarioError::UnknownContext)?;
        Ok(self.assignments_on(vars))
    }

    /// Streams every global assignment `X -> O` in lexicographic order.
    pub fn global_assignments(&self) -> GlobalAssignments {
        GlobalAssignments {
            k: self.num_outcomes(),
            current: Some(vec![0; self.variables.len()]),
        }
    }

    /// Number of global assignments, or `None` if it overflows `u128`.
    pub fn global_assignment_count(&self) -> Option<u128> {
        (self.num_outcomes() as u128).checked_pow(self.variables.len() as u32)
    }

    pub fn restrict(
        &self,
        assignment: &Assignment,
        vars: &[VarId],
    ) -> Result<Assignment, ScenarioError> {
        assignment.restrict(vars).ok_or_else(|| {
            ScenarioError::NotInDomain(
                vars.iter()
                    .filter(|v| !assignment.domain.contains(v))
                    .map(|&v| self.var_name(v).to_string())
                    .collect(),
            )
        })
    }

    /// Position of an assignment in the lexicographic enumeration of its domain.
    pub fn assignment_rank(&self, values: &[usize]) -> usize {
        let k = self.num_outcomes();
        values.iter().fold(0, |acc, &v| acc * k + v)
    }

    pub fn cell_index(
        &self,
        ctx: ContextId,
        assignment: &Assignment,
    ) -> Result<usize, ScenarioError> {
        let vars = self
            .contexts
            .get(ctx.0)
            .ok_or(ScenarioError::UnknownContext)?;
        let values = assignment
            .restrict(vars)
            .filter(|_| assignment.len() == vars.len())
            .ok_or(ScenarioError::AssignmentMismatch)?;
        if values.values.iter().any(|&o| o >= self.num_outcomes()) {
            return Err(ScenarioError::AssignmentMismatch);
        }
        Ok(self.offsets[ctx.0] + self.assignment_rank(&values.values))
    }

    pub fn index_cell(&self, index: usize) -> Result<(ContextId, Assignment), ScenarioError> {
        if index >= self.cells {
            return Err(ScenarioError::CellOutOfRange {
                index,
                cells: self.cells,
            });
        }
        // offsets are sorted; the owning context is the last one starting at or before index
        let ci = self.offsets.partition_point(|&o| o <= index) - 1;
        let vars = &self.contexts[ci];
        let rank = index - self.offsets[ci];
        Ok((
            ContextId(ci),
            Assignment {
                domain: vars.clone(),
                values: digits(rank, self.num_outcomes(), vars.len()),
            },
        ))
    }

    /// Parses a global assignment from `(variable, outcome)` label pairs.
    pub fn global_assignment<S: AsRef<str>>(
        &self,
        pairs: &[(S, S)],
    ) -> Result<Assignment, ScenarioError> {
        let mut values = vec![None; self.variables.len()];
        for (var, out) in pairs {
            let v = self
                .var_id(var.as_ref())
                .ok_or_else(|| ScenarioError::UnknownVariableName(var.as_ref().to_string()))?;
            let o = self
                .outcome_id(out.as_ref())
                .ok_or_else(|| ScenarioError::UnknownOutcome(out.as_ref().to_string()))?;
            values[v.0] = Some(o);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(ScenarioError::PartialGlobalAssignment(self.variables.len()))?;
        Ok(Assignment {
            domain: (0..self.variables.len()).map(VarId).collect(),
            values,
        })
    }

    /// Outcome labels of an assignment, concatenated when every outcome label
    /// is a single character and comma-separated otherwise.
    pub fn section_label(&self, values: &[usize]) -> String {
        let sep = if self.outcomes.iter().all(|o| o.chars().count() == 1) {
            ""
        } else {
            ","
        };
        values
            .iter()
            .map(|&o| self.outcomes[o].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Inverse of [`Scenario::section_label`] for a domain of `arity` variables.
    pub fn parse_section(&self, label: &str, arity: usize) -> Result<Vec<usize>, ScenarioError> {
        let parts: Vec<String> = if label.contains(',') || arity == 1 {
            label.split(',').map(|s| s.trim().to_string()).collect()
        } else if arity == 0 && label.is_empty() {
            Vec::new()
        } else {
            label.chars().map(|c| c.to_string()).collect()
        };
        if parts.len() != arity {
            return Err(ScenarioError::UnknownOutcome(label.to_string()));
        }
        parts
            .iter()
            .map(|p| {
                self.outcome_id(p)
                    .ok_or_else(|| ScenarioError::UnknownOutcome(p.clone()))
            })
            .collect()
    }

    pub fn context_label(&self, id: ContextId) -> String {
        self.contexts[id.0]
            .iter()
            .map(|&v| self.var_name(v))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn describe_assignment(&self, a: &Assignment) -> String {
        a.domain
            .iter()
            .zip(&a.values)
            .map(|(&v, &o)| format!("{}={}", self.var_name(v), self.outcomes[o]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scenario: {} variables, {} outcomes, {} contexts, {} cells",
            self.variables.len(),
            self.outcomes.len(),
            self.contexts.len(),
            self.cells
        )
    }
}

fn digits(mut rank: usize, k: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = rank % k;
        rank /= k;
    }
    out
}

/// Odometer over `O^X`; never materializes the full list.
pub struct GlobalAssignments {
    k: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for GlobalAssignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let cur = self.current.as_mut()?;
        let out = Assignment {
            domain: (0..cur.len()).map(VarId).collect(),
            values: cur.clone(),
        };
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.k {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bell() -> Scenario {
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
        .unwrap()
    }

    #[test]
    fn bell_has_sixteen_cells() {
        assert_eq!(bell().num_cells(), 16);
    }

    #[test]
    fn one_variable_simplex() {
        let s = Scenario::new(["x"], ["0", "1"], [vec!["x"]]).unwrap();
        assert_eq!(s.num_cells(), 2);
    }

    #[test]
    fn construction_errors() {
        let o = ["0", "1"];
        assert_eq!(
            Scenario::new(["a", "a"], o, [vec!["a"]]),
            Err(ScenarioError::DuplicateVariable("a".into()))
        );
        assert_eq!(
            Scenario::new(["a"], ["0", "0"], [vec!["a"]]),
            Err(ScenarioError::DuplicateOutcome("0".into()))
        );
        assert_eq!(
            Scenario::new(["a", "b"], o, [vec!["a", "b"], vec!["b", "a"]]),
            Err(ScenarioError::DuplicateContext(1, 0))
        );
        assert!(matches!(
            Scenario::new(["a"], o, [vec!["z"]]),
            Err(ScenarioError::UnknownVariable { .. })
        ));
        assert_eq!(
            Scenario::new(["a"], o, [Vec::<&str>::new()]),
            Err(ScenarioError::EmptyContext(0))
        );
        assert!(matches!(
            Scenario::new(["a"], o, [vec!["a", "a"]]),
            Err(ScenarioError::RepeatedVariable { .. })
        ));
        assert_eq!(
            Scenario::new(Vec::<String>::new(), o, Vec::<Vec<String>>::new()),
            Err(ScenarioError::NoVariables)
        );
    }

    #[test]
    fn lexicographic_assignments() {
        let s = bell();
        let labels: Vec<String> = s
            .assignments(ContextId(0))
            .unwrap()
            .iter()
            .map(|a| s.section_label(a.values()))
            .collect();
        assert_eq!(labels, ["00", "01", "10", "11"]);

        let t = Scenario::new(["A", "B"], ["0", "1", "2"], [vec!["A", "B"]]).unwrap();
        assert_eq!(t.assignments(ContextId(0)).unwrap().len(), 9);
        assert_eq!(
            t.assignments(ContextId(7)),
            Err(ScenarioError::UnknownContext)
        );
    }

    #[test]
    fn restriction() {
        let s = bell();
        let a = s.var_id("a").unwrap();
        let b = s.var_id("b").unwrap();
        let t = Assignment::new(vec![a, b], vec![1, 0]);
        assert_eq!(
            s.restrict(&t, &[a]).unwrap(),
            Assignment::new(vec![a], vec![1])
        );
        assert_eq!(s.restrict(&t, &[]).unwrap(), Assignment::empty());
        assert!(matches!(
            s.restrict(&t, &[s.var_id("b'").unwrap()]),
            Err(ScenarioError::NotInDomain(v)) if v == ["b'"]
        ));
    }

    #[test]
    fn global_assignment_counts() {
        assert_eq!(bell().global_assignments().count(), 16);
        let s3 = Scenario::new(["a", "b", "c", "d"], ["0", "1", "2"], [vec!["a"]]).unwrap();
        assert_eq!(s3.global_assignments().count(), 81);
        let names: Vec<String> = (b'A'..=b'R').map(|c| (c as char).to_string()).collect();
        let ks = Scenario::new(names.clone(), ["0", "1"], [vec!["A"]]).unwrap();
        assert_eq!(ks.global_assignment_count(), Some(262_144));
        assert_eq!(ks.global_assignments().count(), 262_144);
        let first = bell().global_assignments().nth(1).unwrap();
        assert_eq!(first.values(), &[0, 0, 0, 1]);
    }

    #[test]
    fn cell_indexing() {
        let s = bell();
        let ab = ContextId(0);
        let first = &s.assignments(ab).unwrap()[0];
        assert_eq!(s.cell_index(ab, first).unwrap(), 0);
        let ctx = ContextId(3);
        let last = Assignment::new(s.context(ctx).to_vec(), vec![1, 1]);
        assert_eq!(s.cell_index(ctx, &last).unwrap(), 15);
        assert!(matches!(
            s.index_cell(16),
            Err(ScenarioError::CellOutOfRange { .. })
        ));
        // assignment given in a different variable order still finds its cell
        let swapped = Assignment::new(vec![VarId(3), VarId(1)], vec![1, 0]);
        assert_eq!(s.cell_index(ctx, &swapped).unwrap(), 12 + 1);
    }

    #[test]
    fn section_labels_roundtrip() {
        let s = Scenario::new(["x", "y"], ["up", "down"], [vec!["x", "y"]]).unwrap();
        assert_eq!(s.section_label(&[1, 0]), "down,up");
        assert_eq!(s.parse_section("down,up", 2).unwrap(), vec![1, 0]);
        let b = bell();
        assert_eq!(b.parse_section("10", 2).unwrap(), vec![1, 0]);
        assert!(b.parse_section("102", 2).is_err());
    }

    fn arb_scenario() -> impl Strategy<Value = Scenario> {
        (1usize..5, 1usize..4).prop_flat_map(|(nv, no)| {
            let ctx = proptest::collection::btree_set(0..nv, 1..=nv);
            proptest::collection::vec(ctx, 1..5).prop_map(move |ctxs| {
                let vars: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
                let outs: Vec<String> = (0..no).map(|i| i.to_string()).collect();
                let mut uniq: Vec<Vec<String>> = Vec::new();
                for c in ctxs {
                    let c: Vec<String> = c.into_iter().map(|i| format!("v{i}")).collect();
                    if !uniq.contains(&c) {
                        uniq.push(c);
                    }
                }
                Scenario::new(vars, outs, uniq).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn cell_index_roundtrip(s in arb_scenario()) {
            let expected: usize = s
                .contexts()
                .iter()
                .map(|c| s.num_outcomes().pow(c.len() as u32))
                .sum();
            prop_assert_eq!(s.num_cells(), expected);
            for i in 0..s.num_cells() {
                let (c, a) = s.index_cell(i).unwrap();
                prop_assert_eq!(s.cell_index(c, &a).unwrap(), i);
            }
        }

        #[test]
        fn restrictions_are_assignments(s in arb_scenario()) {
            for c in s.context_ids() {
                let all = s.assignments(c).unwrap();
                prop_assert_eq!(all.len(), s.num_outcomes().pow(s.context(c).len() as u32));
                let sub: Vec<VarId> = s.context(c).iter().copied().step_by(2).collect();
                let subs = s.assignments_on(&sub);
                for a in &all {
                    let r = s.restrict(a, &sub).unwrap();
                    prop_assert!(subs.contains(&r));
                }
            }
        }
    }
}
