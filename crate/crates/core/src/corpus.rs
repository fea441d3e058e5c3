//! Built-in scenarios and models.

use std::sync::Arc;

use crate::error::{ModelError, ScenarioError};
use crate::model::{possibilistic_from_sections, AnyModel, PossibilisticModel, ProbabilisticModel};
use crate::rational::Rational;
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub scenario: Arc<Scenario>,
    pub model: Option<AnyModel>,
    pub note: &'static str,
}

pub const NAMES: [&str; 4] = ["bell-qm", "ks-18", "model-s", "model-s-bell"];

/// Looks up a built-in entry. Every entry is re-validated on load.
///
/// # Panics
///
/// If a built-in model fails normalization or no-signalling.
pub fn get(name: &str) -> Option<CorpusEntry> {
    let entry = match name {
        "bell-qm" => bell_qm(),
        "ks-18" => ks18(),
        "model-s" => model_s(),
        "model-s-bell" => model_s_bell(),
        _ => return None,
    };
    if let Some(m) = &entry.model {
        let ok = match m {
            AnyModel::Probabilistic(p) => p.is_normalized() && p.is_no_signalling(),
            AnyModel::Possibilistic(p) => p.is_normalized() && p.is_no_signalling(),
        };
        assert!(ok, "corpus entry {name} fails validation");
    }
    Some(entry)
}

pub fn all() -> Vec<CorpusEntry> {
    NAMES.iter().map(|n| get(n).expect("listed")).collect()
}

pub fn bell_scenario() -> Arc<Scenario> {
    Arc::new(
        Scenario::new(
            ["a", "a'", "b", "b'"],
            ["0", "1"],
            [["a", "b"], ["a'", "b"], ["a", "b'"], ["a'", "b'"]],
        )
        .expect("valid"),
    )
}

pub fn bell_table() -> ProbabilisticModel {
    let q = Rational::new;
    let mut v = vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)];
    for _ in 0..3 {
        v.extend([q(3, 8), q(1, 8), q(1, 8), q(3, 8)]);
    }
    ProbabilisticModel::from_vector(bell_scenario(), v).expect("valid")
}

fn bell_qm() -> CorpusEntry {
    CorpusEntry {
        name: "bell-qm",
        scenario: bell_scenario(),
        model: Some(AnyModel::Probabilistic(bell_table())),
        note: "Bell table on the (2,2,2) scenario; no-signalling and nonlocal",
    }
}

pub fn ks18_scenario() -> Arc<Scenario> {
    let columns = [
        ["A", "B", "C", "D"],
        ["A", "E", "F", "G"],
        ["H", "I", "C", "J"],
        ["H", "K", "G", "L"],
        ["B", "E", "M", "N"],
        ["I", "K", "N", "O"],
        ["P", "Q", "D", "J"],
        ["P", "R", "F", "L"],
        ["Q", "R", "M", "O"],
    ];
    let vars = (b'A'..=b'R').map(|c| (c as char).to_string());
    Arc::new(Scenario::new(vars, ["0", "1"], columns).expect("valid"))
}

pub fn ks18_model() -> PossibilisticModel {
    let s = ks18_scenario();
    let values = s
        .context_ids()
        .flat_map(|c| {
            s.assignments(c)
                .expect("known context")
                .into_iter()
                .map(|a| a.values().iter().filter(|&&o| o == 1).count() == 1)
                .collect::<Vec<_>>()
        })
        .collect();
    PossibilisticModel::from_vector_unchecked(s, values).expect("valid")
}

fn ks18() -> CorpusEntry {
    CorpusEntry {
        name: "ks-18",
        scenario: ks18_scenario(),
        model: Some(AnyModel::Possibilistic(ks18_model())),
        note: "18-variable Kochen-Specker scenario; each context assigns 1 to exactly one variable",
    }
}

pub fn model_s_scenario() -> Arc<Scenario> {
    Arc::new(
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
        .expect("valid"),
    )
}

pub fn model_s() -> CorpusEntry {
    let m = possibilistic_from_sections(
        model_s_scenario(),
        &[
            (&["A", "B"], &["00", "10", "21"]),
            (&["A", "C"], &["00", "11", "21"]),
            (&["A", "D"], &["01", "10", "21"]),
            (&["B", "C"], &["00", "11"]),
            (&["B", "D"], &["00", "11"]),
            (&["C", "D"], &["01", "10"]),
        ],
    )
    .expect("valid");
    CorpusEntry {
        name: "model-s",
        scenario: model_s_scenario(),
        model: Some(AnyModel::Possibilistic(m)),
        note:
            "minimal boolean no-signalling model that is not the support of any probabilistic model",
    }
}

pub fn model_s_bell_scenario() -> Arc<Scenario> {
    let vars = ["A", "B", "C", "D"];
    let names: Vec<String> = [1, 2]
        .iter()
        .flat_map(|p| vars.iter().map(move |v| format!("{v}|{p}")))
        .collect();
    let contexts: Vec<Vec<String>> = vars
        .iter()
        .flat_map(|p| {
            vars.iter()
                .map(move |q| vec![format!("{p}|1"), format!("{q}|2")])
        })
        .collect();
    Arc::new(Scenario::new(names, ["0", "1", "2"], contexts).expect("valid"))
}

/// The doubled model, entered table row by table row with each context
/// written in the order its sections are read.
pub fn model_s_bell() -> CorpusEntry {
    let rows: [(&[&str], &[&str]); 16] = [
        (&["A|1", "A|2"], &["00", "11", "22"]),
        (&["B|1", "B|2"], &["00", "11"]),
        (&["C|1", "C|2"], &["00", "11"]),
        (&["D|1", "D|2"], &["00", "11"]),
        (&["A|1", "B|2"], &["00", "10", "21"]),
        (&["A|2", "B|1"], &["00", "10", "21"]),
        (&["A|1", "C|2"], &["00", "11", "21"]),
        (&["A|2", "C|1"], &["00", "11", "21"]),
        (&["A|1", "D|2"], &["01", "10", "21"]),
        (&["A|2", "D|1"], &["01", "10", "21"]),
        (&["B|1", "C|2"], &["00", "11"]),
        (&["B|2", "C|1"], &["00", "11"]),
        (&["B|1", "D|2"], &["00", "11"]),
        (&["B|2", "D|1"], &["00", "11"]),
        (&["C|1", "D|2"], &["01", "10"]),
        (&["C|2", "D|1"], &["01", "10"]),
    ];
    let m = possibilistic_from_sections(model_s_bell_scenario(), &rows).expect("valid");
    CorpusEntry {
        name: "model-s-bell",
        scenario: model_s_bell_scenario(),
        model: Some(AnyModel::Possibilistic(m)),
        note: "bipartite doubling of model-s; also not the support of any probabilistic model",
    }
}

/// Parses `a=1,b=0,...` into a deterministic model. Every variable must be
/// assigned.
pub fn deterministic(
    scenario: Arc<Scenario>,
    pairs_text: &str,
) -> Result<ProbabilisticModel, ModelError> {
    let pairs = pairs_text
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(v, o)| (v.trim().to_string(), o.trim().to_string()))
                .ok_or_else(|| ScenarioError::UnknownVariableName(p.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = scenario.global_assignment(&pairs)?;
    ProbabilisticModel::deterministic(scenario, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_load() {
        let entries = all();
        assert_eq!(entries.len(), 4);
        assert_eq!(get("bell-qm").unwrap().scenario.num_cells(), 16);
        assert_eq!(get("ks-18").unwrap().scenario.num_cells(), 144);
        assert_eq!(get("model-s").unwrap().scenario.num_cells(), 54);
        assert_eq!(get("model-s-bell").unwrap().scenario.num_cells(), 144);
        assert!(get("nope").is_none());
    }

    #[test]
    fn ks18_one_hot() {
        let m = ks18_model();
        for c in m.scenario().context_ids() {
            assert_eq!(m.possible_sections(c).len(), 4);
        }
    }

    #[test]
    fn deterministic_spec() {
        let s = bell_scenario();
        let m = deterministic(s.clone(), "a=1,a'=0,b=0,b'=1").unwrap();
        assert_eq!(m.support().count(), 4);
        assert!(deterministic(s.clone(), "a=1").is_err());
        assert!(deterministic(s, "a=1,a'=0,b=0,b'=7").is_err());
    }
}
