//! Resolution of command inputs: corpus names, generators and files.
//!
//! A reference is tried, in order, as
//! - a built-in corpus name (`bell-qm`, `ks-18`, `model-s`, `model-s-bell`);
//! - `uniform:<ref>`, the uniform model on the scenario of `<ref>`;
//! - `det:<ref>:a=1,b=0,...`, a deterministic model on that scenario;
//! - a path to a document;
//! - `<name>` or `<name>.json` inside `$NSPOLY_CORPUS_DIR`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nspoly_core::corpus;
use nspoly_core::format::{self, kind, parse_document};
use nspoly_core::polytope::ConstraintSystem;
use nspoly_core::{AnyModel, FormatError, ProbabilisticModel, Scenario};

pub const CORPUS_DIR_ENV: &str = "NSPOLY_CORPUS_DIR";

#[derive(Debug, Clone)]
pub enum Input {
    Scenario(Arc<Scenario>),
    Model(AnyModel),
    System(ConstraintSystem),
}

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<FormatError> for InputError {
    fn from(e: FormatError) -> Self {
        InputError(e.to_string())
    }
}

impl Input {
    pub fn scenario(&self) -> Option<&Arc<Scenario>> {
        match self {
            Input::Scenario(s) => Some(s),
            Input::Model(m) => Some(m.scenario()),
            Input::System(_) => None,
        }
    }

    /// The standard-form system: as given, or the no-signalling system of
    /// the scenario.
    pub fn system(&self) -> ConstraintSystem {
        match self {
            Input::System(s) => s.clone(),
            other => ConstraintSystem::no_signalling(other.scenario().expect("not a system")),
        }
    }

    pub fn require_scenario(&self, what: &str) -> Result<Arc<Scenario>, InputError> {
        self.scenario().cloned().ok_or_else(|| {
            InputError(format!(
                "{what} needs a scenario or model, not a constraint system"
            ))
        })
    }

    pub fn require_model(&self, what: &str) -> Result<AnyModel, InputError> {
        match self {
            Input::Model(m) => Ok(m.clone()),
            _ => Err(InputError(format!("{what} needs a model"))),
        }
    }
}

pub fn resolve(reference: &str) -> Result<Input, InputError> {
    if let Some(entry) = corpus::get(reference) {
        return Ok(match entry.model {
            Some(m) => Input::Model(m),
            None => Input::Scenario(entry.scenario),
        });
    }
    if let Some(rest) = reference.strip_prefix("uniform:") {
        let s = resolve(rest)?.require_scenario("uniform")?;
        return Ok(Input::Model(AnyModel::Probabilistic(
            ProbabilisticModel::uniform(s),
        )));
    }
    if let Some(rest) = reference.strip_prefix("det:") {
        let (base, pairs_text) = rest
            .rsplit_once(':')
            .ok_or_else(|| InputError("expected det:<ref>:<var>=<outcome>,...".into()))?;
        let s = resolve(base)?.require_scenario("det")?;
        let m =
            corpus::deterministic(s, pairs_text).map_err(|e| InputError(format!("det: {e}")))?;
        return Ok(Input::Model(AnyModel::Probabilistic(m)));
    }
    let path = locate(reference).ok_or_else(|| {
        InputError(format!(
            "`{reference}` is not a corpus name, generator or readable file (corpus: {})",
            corpus::NAMES.join(", ")
        ))
    })?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn locate(reference: &str) -> Option<PathBuf> {
    let direct = Path::new(reference);
    if direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let dir = PathBuf::from(std::env::var_os(CORPUS_DIR_ENV)?);
    [dir.join(reference), dir.join(format!("{reference}.json"))]
        .into_iter()
        .find(|p| p.is_file())
}

pub fn parse(text: &str) -> Result<Input, InputError> {
    let doc = parse_document(text)?;
    Ok(match kind(&doc)? {
        "scenario" => Input::Scenario(Arc::new(format::scenario_from_value(&doc)?)),
        "model" => Input::Model(format::model_from_value(&doc)?),
        "system" => Input::System(format::system_from_value(&doc)?),
        other => {
            return Err(InputError(format!(
                "cannot use a \"{other}\" document as input"
            )))
        }
    })
}
