use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use nspoly_core::bellize::bellize_model;
use nspoly_core::contextuality::{
    classify, consistent_global_assignment, is_local, is_minimal_boolean_ns, is_realizable,
    logical_contextuality_witness,
};
use nspoly_core::corpus;
use nspoly_core::format::{
    assignment_value, lattice_value, model_value, points_value, possibilistic_value,
    scenario_value, to_canonical_string, Report,
};
use nspoly_core::lattice::{
    check_lattice_properties, enumerate_vertices, face_lattice_oracle, order_isomorphic,
    support_lattice_from_vertices, OracleOptions,
};
use nspoly_core::{AnyModel, PolytopeError, SupportVector};

use crate::input::{resolve, Input, InputError};
use crate::{selftest, Command};

pub struct Outcome {
    pub holds: bool,
    pub text: String,
}

impl Outcome {
    fn document(holds: bool, doc: &Value) -> Self {
        Outcome {
            holds,
            text: to_canonical_string(doc),
        }
    }

    fn report(r: Report) -> Self {
        Outcome::document(r.holds, &r.to_value())
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(p) => std::fs::write(p, &self.text),
            None => std::io::stdout().lock().write_all(self.text.as_bytes()),
        }
    }
}

fn err(e: impl std::fmt::Display) -> InputError {
    InputError(e.to_string())
}

pub fn run(cmd: &Command) -> Result<Outcome, InputError> {
    match cmd {
        Command::Validate { input } => validate(&resolve(input)?),
        Command::Collapse { input } => {
            let m = resolve(input)?.require_model("collapse")?;
            let p = m.to_possibilistic().map_err(err)?;
            Ok(Outcome::document(true, &possibilistic_value(&p)))
        }
        Command::Vertices {
            input,
            classify,
            limit,
        } => vertices(&resolve(input)?, *classify, limit.max_assignments),
        Command::Lattice {
            input,
            dot,
            oracle,
            check,
            oracle_max_cells,
            force,
        } => {
            let opts = OracleOptions {
                max_cells: *oracle_max_cells,
                force: *force,
            };
            lattice(&resolve(input)?, *dot, *oracle, *check, &opts)
        }
        Command::Carrier { input } => carrier(&resolve(input)?),
        Command::Realizable { input } => realizable(&resolve(input)?),
        Command::Sc { input } => sc(&resolve(input)?),
        Command::Logical { input } => logical(&resolve(input)?),
        Command::Minimal { input } => {
            let p = resolve(input)?
                .require_model("minimal")?
                .to_possibilistic()
                .map_err(err)?;
            let minimal = is_minimal_boolean_ns(&p).map_err(err)?;
            let line = if minimal {
                "minimal: no boolean no-signalling model lies strictly below"
            } else {
                "NOT minimal: a smaller boolean no-signalling model exists"
            };
            Ok(Outcome::report(Report::new("minimal", minimal).line(line)))
        }
        Command::Local { input, limit } => local(&resolve(input)?, limit.max_assignments),
        Command::Bellize { input } => {
            let p = resolve(input)?
                .require_model("bellize")?
                .to_possibilistic()
                .map_err(err)?;
            let b = bellize_model(&p).map_err(err)?;
            Ok(Outcome::document(true, &possibilistic_value(&b)))
        }
        Command::Dim { input, support } => dim(&resolve(input)?, support.as_deref()),
        Command::Corpus { name, scenario } => corpus_cmd(name.as_deref(), *scenario),
        Command::Selftest { seed, cases } => Ok(Outcome::report(selftest::run(*seed, *cases))),
    }
}

fn validate(input: &Input) -> Result<Outcome, InputError> {
    let m = input.require_model("validate")?;
    let s = m.scenario().clone();
    let (norm, ns): (Vec<String>, Vec<String>) = match &m {
        AnyModel::Probabilistic(p) => (
            p.check_normalization()
                .iter()
                .map(|v| format!("context ({}) sums to {}", s.context_label(v.context), v.sum))
                .collect(),
            p.check_no_signalling()
                .iter()
                .map(|v| v.describe(&s))
                .collect(),
        ),
        AnyModel::Possibilistic(p) => (
            p.check_normalization()
                .iter()
                .map(|v| {
                    format!(
                        "context ({}) has no possible section",
                        s.context_label(v.context)
                    )
                })
                .collect(),
            p.check_no_signalling()
                .iter()
                .map(|v| v.describe(&s))
                .collect(),
        ),
    };
    let holds = norm.is_empty() && ns.is_empty();
    let mut r = Report::new("validate", holds)
        .line(format!("normalization: {} violation(s)", norm.len()))
        .line(format!("no-signalling: {} violation(s)", ns.len()));
    for v in norm.iter().chain(&ns) {
        r = r.line(v.clone());
    }
    r = r
        .with("normalization", json!(norm))
        .with("no_signalling", json!(ns));
    Ok(Outcome::report(r))
}

fn vertices(input: &Input, with_classes: bool, limit: usize) -> Result<Outcome, InputError> {
    let system = input.system();
    let verts = enumerate_vertices(&system).map_err(err)?;
    log::info!("{} vertices", verts.len());
    let mut r = Report::new("vertices", true).line(format!("{} vertices", verts.len()));
    let entries: Vec<Value> = if with_classes {
        let scenario = input.require_scenario("--classify")?;
        let classes = classify(&scenario, verts, limit).map_err(err)?;
        let ld = classes.iter().filter(|(_, c)| c.tag() == "LD").count();
        r = r.line(format!("{ld} LD, {} MSC", classes.len() - ld));
        classes
            .iter()
            .map(|(v, c)| {
                let mut e = json!({
                    "support": v.support.to_bits(),
                    "point": points_value(&v.point),
                    "class": c.tag(),
                });
                if let nspoly_core::contextuality::VertexClass::LocalDeterministic(g) = c {
                    e["assignment"] = assignment_value(&scenario, g);
                }
                e
            })
            .collect()
    } else {
        verts
            .iter()
            .map(|v| json!({"support": v.support.to_bits(), "point": points_value(&v.point)}))
            .collect()
    };
    Ok(Outcome::report(r.with("vertices", Value::Array(entries))))
}

fn lattice(
    input: &Input,
    dot: bool,
    oracle: bool,
    check: bool,
    opts: &OracleOptions,
) -> Result<Outcome, InputError> {
    let system = input.system();
    let verts = enumerate_vertices(&system).map_err(err)?;
    let lat = support_lattice_from_vertices(&system, &verts).map_err(err)?;
    log::info!("{} vertices, {} lattice nodes", verts.len(), lat.len());
    let oracle_lat = if oracle {
        Some(face_lattice_oracle(&system, &verts, opts).map_err(err)?)
    } else {
        None
    };
    if check || oracle {
        let report = check_lattice_properties(&lat);
        let mut holds = report.all_pass();
        let mut r = Report::new("lattice", true).line(format!(
            "{} nodes, {} covers",
            lat.len(),
            lat.edges().len()
        ));
        for (name, ok) in report.lines() {
            r = r.line(format!("{name}: {}", if ok { "pass" } else { "FAIL" }));
        }
        if let Some(o) = &oracle_lat {
            let iso = order_isomorphic(&lat, &o.lattice);
            holds &= iso;
            r = r.line(format!(
                "zero-set oracle: {} faces, {}",
                o.lattice.len(),
                if iso {
                    "order-isomorphic"
                } else {
                    "NOT order-isomorphic"
                }
            ));
        }
        r.holds = holds;
        if let Some(len) = report.chain_length {
            r = r.with("chain_length", json!(len));
        }
        return Ok(Outcome::report(r));
    }
    if dot {
        return Ok(Outcome {
            holds: true,
            text: lat.to_dot(),
        });
    }
    Ok(Outcome::document(true, &lattice_value(&lat)))
}

fn carrier(input: &Input) -> Result<Outcome, InputError> {
    let AnyModel::Probabilistic(m) = input.require_model("carrier")? else {
        return Err(InputError("carrier needs a probabilistic model".into()));
    };
    let system = input.system();
    match system.carrier_face(m.values()) {
        Ok(face) => {
            let support = face.key.support().expect("nonempty").clone();
            let relint = system
                .relint_membership(m.values(), &support)
                .map_err(err)?;
            let r = Report::new("carrier", true)
                .line(format!(
                    "carrier face: support {support}, dimension {}",
                    face.dimension
                ))
                .line(format!(
                    "relative interior: {}",
                    if relint { "yes" } else { "NO" }
                ))
                .with("support", json!(support.to_bits()))
                .with("dimension", json!(face.dimension));
            Ok(Outcome::report(r))
        }
        Err(PolytopeError::NotInPolytope) => Ok(Outcome::report(
            Report::new("carrier", false).line("model is not in the no-signalling polytope"),
        )),
        Err(e) => Err(err(e)),
    }
}

fn realizable(input: &Input) -> Result<Outcome, InputError> {
    let p = input
        .require_model("realizable")?
        .to_possibilistic()
        .map_err(err)?;
    let res = is_realizable(&p).map_err(err)?;
    let maxima: Vec<Value> = res
        .closure
        .maxima
        .iter()
        .map(|(i, v)| json!([i, v.to_string()]))
        .collect();
    let r = match &res.witness {
        Some(w) => Report::new("realizable", true)
            .line("realizable: witness model has exactly this support")
            .with("witness", model_value(&AnyModel::Probabilistic(w.clone()))),
        None => Report::new("realizable", false)
            .line("NOT realizable")
            .line(format!(
                "largest achievable support below: {} of {} cells",
                res.closure.support.count(),
                p.support().count()
            )),
    };
    Ok(Outcome::report(
        r.with("closure", json!(res.closure.support.to_bits()))
            .with("maxima", Value::Array(maxima)),
    ))
}

fn sc(input: &Input) -> Result<Outcome, InputError> {
    let p = input.require_model("sc")?.to_possibilistic().map_err(err)?;
    let s = p.scenario().clone();
    let r = match consistent_global_assignment(&p) {
        None => Report::new("sc", true)
            .line("strongly contextual: no global assignment is consistent with the support"),
        Some(g) => Report::new("sc", false)
            .line(format!(
                "NOT strongly contextual: {} is consistent",
                s.describe_assignment(&g)
            ))
            .with("witness", assignment_value(&s, &g)),
    };
    Ok(Outcome::report(r))
}

fn logical(input: &Input) -> Result<Outcome, InputError> {
    let p = input
        .require_model("logical")?
        .to_possibilistic()
        .map_err(err)?;
    let s = p.scenario().clone();
    let r = match logical_contextuality_witness(&p) {
        Some((c, sec)) => Report::new("logical", true)
            .line(format!(
                "logically contextual: section {} at ({}) extends to no consistent global assignment",
                s.section_label(sec.values()),
                s.context_label(c)
            ))
            .with("context", json!(s.context_label(c)))
            .with("section", assignment_value(&s, &sec)),
        None => Report::new("logical", false).line("NOT logically contextual: every possible section extends"),
    };
    Ok(Outcome::report(r))
}

fn local(input: &Input, limit: usize) -> Result<Outcome, InputError> {
    let AnyModel::Probabilistic(m) = input.require_model("local")? else {
        return Err(InputError("local needs a probabilistic model".into()));
    };
    let s = m.scenario().clone();
    let r = match is_local(&m, limit).map_err(err)? {
        Some(d) => {
            let weights: Vec<Value> = d
                .weights
                .iter()
                .map(|(g, w)| json!({"assignment": assignment_value(&s, g), "weight": w.to_string()}))
                .collect();
            Report::new("local", true)
                .line(format!(
                    "local: decomposition over {} deterministic models",
                    weights.len()
                ))
                .with("decomposition", Value::Array(weights))
        }
        None => Report::new("local", false)
            .line("NOT local: no convex decomposition into deterministic models"),
    };
    Ok(Outcome::report(r))
}

fn dim(input: &Input, support: Option<&str>) -> Result<Outcome, InputError> {
    let system = input.system();
    let Some(bits) = support else {
        let d = system.dimension();
        return Ok(Outcome::report(
            Report::new("dim", true)
                .line(format!("dimension {d}"))
                .with("dimension", json!(d)),
        ));
    };
    let s = SupportVector::parse_bits(bits)
        .filter(|s| s.len() == system.num_cells())
        .ok_or_else(|| {
            InputError(format!(
                "--support must be a bitstring of length {}",
                system.num_cells()
            ))
        })?;
    match system.face_dimension(&s) {
        Ok(d) => Ok(Outcome::report(
            Report::new("dim", true)
                .line(format!("face {s}: dimension {d}"))
                .with("dimension", json!(d)),
        )),
        Err(PolytopeError::NotAchievable) => Ok(Outcome::report(
            Report::new("dim", false).line(format!("{s} is not the support of any point")),
        )),
        Err(e) => Err(err(e)),
    }
}

fn corpus_cmd(name: Option<&str>, scenario_only: bool) -> Result<Outcome, InputError> {
    let Some(name) = name else {
        let mut r = Report::new("corpus", true);
        let mut names = Vec::new();
        for e in corpus::all() {
            r = r.line(format!("{}: {}", e.name, e.note));
            names.push(e.name);
        }
        r = r
            .line("uniform:<ref>: uniform model on the scenario of <ref>")
            .line("det:<ref>:<var>=<outcome>,...: deterministic model");
        return Ok(Outcome::report(r.with("entries", json!(names))));
    };
    let input = resolve(name)?;
    if scenario_only {
        let s = input.require_scenario("corpus --scenario")?;
        return Ok(Outcome::document(true, &scenario_value(&s)));
    }
    Ok(match input {
        Input::Model(m) => Outcome::document(true, &model_value(&m)),
        Input::Scenario(s) => Outcome::document(true, &scenario_value(&s)),
        Input::System(s) => Outcome::document(true, &nspoly_core::format::system_value(&s)),
    })
}
