//! JSON documents for scenarios, models, constraint systems, lattices and
//! reports.
//!
//! Every document is an object with a `"kind"` field. Rationals are strings
//! (`"3/8"`, `"-1"`), object keys are sorted, zero entries of model tables
//! are omitted, and output is pretty-printed with a trailing newline, so equal
//! values always serialize to identical bytes.
//!
//! ```text
//! {"kind": "scenario", "variables": [..], "outcomes": [..], "contexts": [[..], ..]}
//! {"kind": "model", "semiring": "rational" | "boolean", "scenario": {..},
//!  "table": {"a,b": {"01": "1/2", "10": "1/2"}, ..}}
//! {"kind": "system", "columns": n, "labels": [..], "rows": [{"coefficients": [[j, "v"], ..], "rhs": "v"}]}
//! {"kind": "lattice", "cells": n, "nodes": [..], "edges": [[lo, hi], ..], "top": k}
//! {"kind": "report", "command": .., "holds": true, "lines": [..], "data": {..}}
//! ```
//!
//! Table keys name a context by its variables joined with `,` and a section
//! by its outcome labels (concatenated when all labels are one character,
//! comma-joined otherwise), both in the order the key lists the variables.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::FormatError;
use crate::lattice::{LatticeNode, SupportLattice};
use crate::linalg::{LinearSystem, RationalMatrix};
use crate::model::{AnyModel, PossibilisticModel, ProbabilisticModel};
use crate::polytope::{ConstraintSystem, FaceKey};
use crate::rational::Rational;
use crate::scenario::{Assignment, Scenario, VarId};
use crate::semiring::Semiring;
use crate::support::SupportVector;

/// Canonical text of a document value.
pub fn to_canonical_string(value: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<Value, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn kind(doc: &Value) -> Result<&str, FormatError> {
    doc.get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| FormatError::field("kind", "missing or not a string"))
}

fn expect_kind(doc: &Value, want: &str) -> Result<(), FormatError> {
    let k = kind(doc)?;
    if k != want {
        return Err(FormatError::field(
            "kind",
            format!("expected \"{want}\", found \"{k}\""),
        ));
    }
    Ok(())
}

fn field<'a>(doc: &'a Value, name: &str, path: &str) -> Result<&'a Value, FormatError> {
    doc.get(name)
        .ok_or_else(|| FormatError::field(format!("{path}{name}"), "missing"))
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>, FormatError> {
    let arr = v
        .as_array()
        .ok_or_else(|| FormatError::field(path, "expected a list"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| FormatError::field(format!("{path}[{i}]"), "expected a string"))
        })
        .collect()
}

fn rational(v: &Value, path: &str) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|e| FormatError::field(path, format!("bad rational \"{s}\": {e}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap())),
        _ => Err(FormatError::field(path, "expected a rational string")),
    }
}

fn index(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| FormatError::field(path, "expected a nonnegative integer"))
}

pub fn scenario_value(s: &Scenario) -> Value {
    let contexts: Vec<Vec<&str>> = s
        .context_ids()
        .map(|c| s.context(c).iter().map(|&v| s.var_name(v)).collect())
        .collect();
    json!({
        "kind": "scenario",
        "variables": s.variables(),
        "outcomes": s.outcomes(),
        "contexts": contexts,
    })
}

/// Reads the scenario fields of a scenario document, or of the `scenario`
/// object embedded in a model document.
pub fn scenario_from_value(doc: &Value) -> Result<Scenario, FormatError> {
    let vars = string_list(field(doc, "variables", "")?, "variables")?;
    let outs = string_list(field(doc, "outcomes", "")?, "outcomes")?;
    let ctx_val = field(doc, "contexts", "")?
        .as_array()
        .ok_or_else(|| FormatError::field("contexts", "expected a list of lists"))?;
    let contexts = ctx_val
        .iter()
        .enumerate()
        .map(|(i, c)| string_list(c, &format!("contexts[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Scenario::new(vars, outs, contexts)?)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, FormatError> {
    let doc = parse_document(text)?;
    match kind(&doc)? {
        "scenario" => scenario_from_value(&doc),
        "model" => scenario_from_value(field(&doc, "scenario", "")?),
        other => Err(FormatError::field(
            "kind",
            format!("expected a scenario, found \"{other}\""),
        )),
    }
}

fn table_value<S: Semiring>(
    scenario: &Scenario,
    values: &[S],
    render: impl Fn(&S) -> String,
) -> Value {
    let mut table = Map::new();
    for c in scenario.context_ids() {
        let mut row = Map::new();
        for i in scenario.context_cells(c) {
            if values[i].is_zero() {
                continue;
            }
            let (_, a) = scenario.index_cell(i).expect("in range");
            row.insert(
                scenario.section_label(a.values()),
                Value::String(render(&values[i])),
            );
        }
        table.insert(scenario.context_label(c), Value::Object(row));
    }
    Value::Object(table)
}

pub fn model_value(model: &AnyModel) -> Value {
    let s = model.scenario();
    let mut scen = scenario_value(s);
    scen.as_object_mut().expect("object").remove("kind");
    let (semiring, table) = match model {
        AnyModel::Probabilistic(m) => ("rational", table_value(s, m.values(), |v| v.to_string())),
        AnyModel::Possibilistic(m) => ("boolean", table_value(s, m.values(), |_| "1".to_string())),
    };
    json!({
        "kind": "model",
        "semiring": semiring,
        "scenario": scen,
        "table": table,
    })
}

pub fn probabilistic_value(model: &ProbabilisticModel) -> Value {
    model_value(&AnyModel::Probabilistic(model.clone()))
}

pub fn possibilistic_value(model: &PossibilisticModel) -> Value {
    model_value(&AnyModel::Possibilistic(model.clone()))
}

/// Reads a model document. Probabilistic models are only checked for
/// nonnegativity here; normalization and no-signalling are left to the
/// caller so that violations can be reported rather than rejected.
pub fn model_from_value(doc: &Value) -> Result<AnyModel, FormatError> {
    expect_kind(doc, "model")?;
    let scenario = Arc::new(scenario_from_value(field(doc, "scenario", "")?)?);
    let semiring = field(doc, "semiring", "")?
        .as_str()
        .ok_or_else(|| FormatError::field("semiring", "expected a string"))?;
    let table = field(doc, "table", "")?
        .as_object()
        .ok_or_else(|| FormatError::field("table", "expected an object"))?;
    let boolean = match semiring {
        "rational" => false,
        "boolean" => true,
        other => {
            return Err(FormatError::field(
                "semiring",
                format!("unknown semiring \"{other}\""),
            ))
        }
    };
    let n = scenario.num_cells();
    let mut rationals = vec![Rational::ZERO; n];
    let mut bools = vec![false; n];
    for (ctx_key, row) in table {
        let path = format!("table.{ctx_key}");
        let names: Vec<&str> = ctx_key.split(',').collect();
        let ctx = scenario
            .find_context_by_names(&names)
            .ok_or_else(|| FormatError::field(&path, "not a context of the scenario"))?;
        let vars: Vec<VarId> = names
            .iter()
            .map(|n| scenario.var_id(n).expect("context lookup"))
            .collect();
        let row = row
            .as_object()
            .ok_or_else(|| FormatError::field(&path, "expected an object"))?;
        for (sec, v) in row {
            let cell_path = format!("{path}.{sec}");
            let outs = scenario
                .parse_section(sec, vars.len())
                .map_err(|e| FormatError::field(&cell_path, e.to_string()))?;
            let cell = scenario.cell_index(ctx, &Assignment::new(vars.clone(), outs))?;
            if boolean {
                bools[cell] = match v {
                    Value::String(s) if s == "1" => true,
                    Value::String(s) if s == "0" => false,
                    Value::Bool(b) => *b,
                    Value::Number(x) if x.as_u64() == Some(1) => true,
                    Value::Number(x) if x.as_u64() == Some(0) => false,
                    _ => return Err(FormatError::field(&cell_path, "expected 1 or 0")),
                };
            } else {
                let r = rational(v, &cell_path)?;
                if r.is_negative() {
                    return Err(FormatError::field(&cell_path, "negative probability"));
                }
                rationals[cell] = r;
            }
        }
    }
    let model = if boolean {
        AnyModel::Possibilistic(
            PossibilisticModel::from_vector_unchecked(scenario, bools).expect("length"),
        )
    } else {
        AnyModel::Probabilistic(
            ProbabilisticModel::from_vector_unchecked(scenario, rationals).expect("length"),
        )
    };
    Ok(model)
}

pub fn parse_model(text: &str) -> Result<AnyModel, FormatError> {
    model_from_value(&parse_document(text)?)
}

pub fn system_value(system: &ConstraintSystem) -> Value {
    let sys = system.system();
    let rows: Vec<Value> = (0..sys.num_rows())
        .map(|r| {
            let coeffs: Vec<Value> = sys
                .a
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| json!([j, v.to_string()]))
                .collect();
            json!({
                "coefficients": coeffs,
                "rhs": sys.b[r].to_string(),
            })
        })
        .collect();
    json!({
        "kind": "system",
        "columns": sys.num_cols(),
        "labels": system.labels(),
        "rows": rows,
    })
}

/// Reads a system document; the boundedness check of
/// [`ConstraintSystem::general`] applies.
pub fn system_from_value(doc: &Value) -> Result<ConstraintSystem, FormatError> {
    expect_kind(doc, "system")?;
    let cols = index(field(doc, "columns", "")?, "columns")?;
    let rows = field(doc, "rows", "")?
        .as_array()
        .ok_or_else(|| FormatError::field("rows", "expected a list"))?;
    let mut matrix = Vec::with_capacity(rows.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let path = format!("rows[{r}]");
        let mut dense = vec![Rational::ZERO; cols];
        let coeffs = field(row, "coefficients", &format!("{path}."))?
            .as_array()
            .ok_or_else(|| FormatError::field(format!("{path}.coefficients"), "expected a list"))?;
        for (k, pair) in coeffs.iter().enumerate() {
            let p = format!("{path}.coefficients[{k}]");
            let pair = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| FormatError::field(&p, "expected [column, value]"))?;
            let j = index(&pair[0], &p)?;
            if j >= cols {
                return Err(FormatError::field(&p, format!("column {j} out of range")));
            }
            dense[j] = rational(&pair[1], &p)?;
        }
        matrix.push(dense);
        rhs.push(rational(
            field(row, "rhs", &format!("{path}."))?,
            &format!("{path}.rhs"),
        )?);
    }
    let labels = match doc.get("labels") {
        None | Some(Value::Null) => None,
        Some(v) => Some(string_list(v, "labels")?),
    };
    let system = LinearSystem::new(RationalMatrix::from_rows_with_cols(cols, matrix), rhs);
    ConstraintSystem::general(system, labels).map_err(|e| FormatError::field("rows", e.to_string()))
}

pub fn parse_system(text: &str) -> Result<ConstraintSystem, FormatError> {
    system_from_value(&parse_document(text)?)
}

fn point_value(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(|v| Value::String(v.to_string())).collect())
}

pub fn lattice_value(lattice: &SupportLattice) -> Value {
    let nodes: Vec<Value> = lattice
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "id": i,
                "support": n.key.support().map(SupportVector::to_bits),
                "dimension": n.dimension,
                "witness": n.witness.as_deref().map(point_value),
                "atom": n.atom,
            })
        })
        .collect();
    let edges: Vec<Value> = lattice
        .edges()
        .iter()
        .map(|&(a, b)| json!([a, b]))
        .collect();
    json!({
        "kind": "lattice",
        "cells": lattice.cells(),
        "nodes": nodes,
        "edges": edges,
        "top": lattice.top(),
    })
}

/// Rebuilds a lattice from its document. Covers and atoms are recomputed
/// from the node supports and compared with the stored ones.
pub fn lattice_from_value(doc: &Value) -> Result<SupportLattice, FormatError> {
    expect_kind(doc, "lattice")?;
    let cells = index(field(doc, "cells", "")?, "cells")?;
    let nodes_v = field(doc, "nodes", "")?
        .as_array()
        .ok_or_else(|| FormatError::field("nodes", "expected a list"))?;
    let mut nodes = Vec::with_capacity(nodes_v.len());
    for (i, n) in nodes_v.iter().enumerate() {
        let path = format!("nodes[{i}]");
        let key = match n.get("support") {
            None | Some(Value::Null) => FaceKey::Bottom,
            Some(Value::String(bits)) => FaceKey::Support(
                SupportVector::parse_bits(bits)
                    .filter(|s| s.len() == cells)
                    .ok_or_else(|| {
                        FormatError::field(format!("{path}.support"), "bad bitstring")
                    })?,
            ),
            Some(_) => {
                return Err(FormatError::field(
                    format!("{path}.support"),
                    "expected a bitstring",
                ))
            }
        };
        let dimension = n.get("dimension").and_then(Value::as_i64).ok_or_else(|| {
            FormatError::field(format!("{path}.dimension"), "expected an integer")
        })?;
        let witness = match n.get("witness") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .enumerate()
                    .map(|(j, v)| rational(v, &format!("{path}.witness[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Some(_) => {
                return Err(FormatError::field(
                    format!("{path}.witness"),
                    "expected a list",
                ))
            }
        };
        nodes.push(LatticeNode {
            key,
            dimension,
            witness,
            atom: false,
        });
    }
    let lattice = SupportLattice::from_nodes(cells, nodes);
    if let Some(edges) = doc.get("edges") {
        let stored: Vec<(usize, usize)> = edges
            .as_array()
            .ok_or_else(|| FormatError::field("edges", "expected a list"))?
            .iter()
            .map(|e| {
                let a = e.as_array().filter(|a| a.len() == 2);
                a.and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                    .ok_or_else(|| FormatError::field("edges", "expected [lower, upper] pairs"))
            })
            .collect::<Result<_, _>>()?;
        if stored != lattice.edges() {
            return Err(FormatError::field(
                "edges",
                "do not match the covering relation of the nodes",
            ));
        }
    }
    Ok(lattice)
}

pub fn parse_lattice(text: &str) -> Result<SupportLattice, FormatError> {
    lattice_from_value(&parse_document(text)?)
}

/// Outcome of a command: whether the checked property holds, human-readable
/// lines, and structured data such as witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub holds: bool,
    pub lines: Vec<String>,
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, holds: bool) -> Self {
        Report {
            command: command.into(),
            holds,
            lines: Vec::new(),
            data: Map::new(),
        }
    }

    pub fn line(mut self, l: impl Into<String>) -> Self {
        self.lines.push(l.into());
        self
    }

    pub fn with(mut self, key: &str, v: Value) -> Self {
        self.data.insert(key.to_string(), v);
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "kind": "report",
            "command": self.command,
            "holds": self.holds,
            "lines": self.lines,
            "data": Value::Object(self.data.clone()),
        })
    }

    pub fn from_value(doc: &Value) -> Result<Self, FormatError> {
        expect_kind(doc, "report")?;
        Ok(Report {
            command: field(doc, "command", "")?
                .as_str()
                .ok_or_else(|| FormatError::field("command", "expected a string"))?
                .to_string(),
            holds: field(doc, "holds", "")?
                .as_bool()
                .ok_or_else(|| FormatError::field("holds", "expected a boolean"))?,
            lines: string_list(field(doc, "lines", "")?, "lines")?,
            data: doc
                .get("data")
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_default(),
        })
    }
}

pub fn assignment_value(scenario: &Scenario, a: &Assignment) -> Value {
    let mut m = Map::new();
    for (&v, &o) in a.domain().iter().zip(a.values()) {
        m.insert(
            scenario.var_name(v).to_string(),
            Value::String(scenario.outcomes()[o].clone()),
        );
    }
    Value::Object(m)
}

pub fn points_value(points: &[Rational]) -> Value {
    point_value(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::support_lattice;

    #[test]
    fn model_round_trip() {
        for e in corpus::all() {
            let m = e.model.unwrap();
            let text = to_canonical_string(&model_value(&m));
            let back = parse_model(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_canonical_string(&model_value(&back)), text);
        }
    }

    #[test]
    fn bell_document_shape() {
        let text = to_canonical_string(&probabilistic_value(&corpus::bell_table()));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["table"]["a,b"], json!({"01": "1/2", "10": "1/2"}));
        assert_eq!(v["table"]["a',b'"]["00"], "3/8");
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn context_key_order_is_free() {
        let text = r#"{"kind":"model","semiring":"boolean",
            "scenario":{"variables":["x","y"],"outcomes":["0","1"],"contexts":[["x","y"]]},
            "table":{"y,x":{"10":"1"}}}"#;
        let m = parse_model(text).unwrap();
        // y=1, x=0 is the cell x=0,y=1
        assert_eq!(m.support().indices(), vec![1]);
    }

    #[test]
    fn malformed_rational() {
        let text = r#"{"kind":"model","semiring":"rational",
            "scenario":{"variables":["x"],"outcomes":["0","1"],"contexts":[["x"]]},
            "table":{"x":{"0":"3/0"}}}"#;
        let err = parse_model(text).unwrap_err().to_string();
        assert!(err.contains("table.x.0"), "{err}");
    }

    #[test]
    fn scenario_round_trip() {
        let s = corpus::ks18_scenario();
        let text = to_canonical_string(&scenario_value(&s));
        assert_eq!(parse_scenario(&text).unwrap(), *s);
    }

    #[test]
    fn system_round_trip() {
        let cs = ConstraintSystem::no_signalling(&corpus::bell_scenario());
        let text = to_canonical_string(&system_value(&cs));
        let back = parse_system(&text).unwrap();
        assert_eq!(back.system(), cs.system());
        assert_eq!(back.labels(), cs.labels());
    }

    #[test]
    fn lattice_round_trip() {
        let s = Scenario::new(["a", "b"], ["0", "1"], [["a", "b"]]).unwrap();
        let lat = support_lattice(&ConstraintSystem::no_signalling(&s)).unwrap();
        let text = to_canonical_string(&lattice_value(&lat));
        let back = parse_lattice(&text).unwrap();
        assert_eq!(back, lat);
    }

    #[test]
    fn report_round_trip() {
        let r = Report::new("validate", false)
            .line("normalization: ok")
            .with("violations", json!(["x"]));
        assert_eq!(Report::from_value(&r.to_value()).unwrap(), r);
    }
}
