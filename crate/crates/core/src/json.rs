//! JSON interchange for prosets, maps and matrices.
//!
//! ```text
//! proset  { "elements": [ids], "leq": [[a, b], ...] }
//!         { "rule": "zig", "params": {...}, "window": [ids] | "depth": n }
//! map     { "source": proset, "target": proset, "assign": [[a, f(a)], ...] }
//! matrix  { "proset": proset, "ring": "Z/6", "entries": [[a, b, c], ...] }
//! ```

use std::sync::Arc;

use serde_json::{json, Value};

use crate::colimits::ProsetMap;
use crate::error::{Error, Result};
use crate::matrix::IncMatrix;
use crate::proset::{FiniteProset, Label, Rule, RuleProset};
use crate::ring::Ring;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn label_from_json(v: &Value) -> Result<Label> {
    match v {
        Value::Number(n) => n.as_i64().map(Label::Int).ok_or_else(|| parse_err(format!("bad element id {v}"))),
        Value::String(s) => Ok(Label::Str(s.clone())),
        _ => Err(parse_err(format!("bad element id {v}"))),
    }
}

pub fn label_to_json(l: &Label) -> Value {
    match l {
        Label::Int(i) => json!(i),
        Label::Str(s) => json!(s),
    }
}

fn labels_from(v: &Value, what: &str) -> Result<Vec<Label>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?
        .iter()
        .map(label_from_json)
        .collect()
}

fn pair_list(v: Option<&Value>, what: &str, width: usize) -> Result<Vec<Vec<Value>>> {
    let Some(v) = v else { return Ok(vec![]) };
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?
        .iter()
        .map(|item| match item.as_array() {
            Some(a) if a.len() == width => Ok(a.clone()),
            _ => Err(parse_err(format!("each {what} item must have {width} entries, got {item}"))),
        })
        .collect()
}

fn get_usize(params: &Value, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| parse_err(format!("rule parameter {key:?} missing")))
}

/// A proset read from JSON, with the number of relation pairs the closure
/// added to the input.
#[derive(Debug, Clone)]
pub enum ProsetInput {
    Finite { proset: FiniteProset, closure_added: usize },
    Rule { proset: RuleProset, window: Option<Vec<Label>>, depth: Option<usize> },
}

impl ProsetInput {
    /// The finite carrier: the proset itself, or the requested window of a
    /// rule proset.
    pub fn into_finite(self) -> Result<FiniteProset> {
        match self {
            ProsetInput::Finite { proset, .. } => Ok(proset),
            ProsetInput::Rule { proset, window, depth } => {
                if let Some(p) = proset.as_finite() {
                    if window.is_none() && depth.is_none() {
                        return Ok(p.clone());
                    }
                }
                let w = match (window, depth) {
                    (Some(w), _) => proset.window(&w)?,
                    (None, Some(d)) => proset.standard_window(d),
                    (None, None) => {
                        return Err(parse_err(format!("rule {} needs a \"window\" or \"depth\"", proset.rule())))
                    }
                };
                proset.restrict(&w)
            }
        }
    }
}

pub fn parse_rule(v: &Value) -> Result<RuleProset> {
    let name = v.get("rule").and_then(Value::as_str).ok_or_else(|| parse_err("missing \"rule\""))?;
    let params = v.get("params").cloned().unwrap_or(Value::Null);
    let rule = match name {
        "nat" => Rule::Nat,
        "int" => Rule::Int,
        "zig" => Rule::Zig,
        "divisibility" => Rule::Divisibility,
        "chain" => Rule::Chain(get_usize(&params, "n")?),
        "full" => Rule::Full(get_usize(&params, "n")?),
        "arrow" => Rule::Arrow(get_usize(&params, "m")?, get_usize(&params, "n")?),
        "discrete" => Rule::Discrete(labels_from(
            params.get("elements").ok_or_else(|| parse_err("discrete needs params.elements"))?,
            "params.elements",
        )?),
        other => return Err(parse_err(format!("unknown rule {other:?}"))),
    };
    RuleProset::new(rule)
}

pub fn parse_proset(v: &Value) -> Result<ProsetInput> {
    if v.get("rule").is_some() {
        let proset = parse_rule(v)?;
        let window = v.get("window").map(|w| labels_from(w, "window")).transpose()?;
        let depth = v.get("depth").map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| parse_err("bad depth"))).transpose()?;
        return Ok(ProsetInput::Rule { proset, window, depth });
    }
    let elements = labels_from(v.get("elements").ok_or_else(|| parse_err("missing \"elements\""))?, "elements")?;
    let pairs = pair_list(v.get("leq"), "leq", 2)?
        .iter()
        .map(|p| Ok((label_from_json(&p[0])?, label_from_json(&p[1])?)))
        .collect::<Result<Vec<_>>>()?;
    let (proset, closure_added) = FiniteProset::with_closure_report(elements, &pairs)?;
    Ok(ProsetInput::Finite { proset, closure_added })
}

pub fn parse_finite_proset(v: &Value) -> Result<FiniteProset> {
    parse_proset(v)?.into_finite()
}

/// Elements plus every strict relation `a ⪯ b`, `a ≠ b`.
pub fn proset_to_json(p: &FiniteProset) -> Value {
    let leq: Vec<Value> = p
        .comparable_pairs()
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| json!([label_to_json(p.label(a)), label_to_json(p.label(b))]))
        .collect();
    json!({ "elements": p.labels().iter().map(label_to_json).collect::<Vec<_>>(), "leq": leq })
}

pub fn parse_map(v: &Value) -> Result<ProsetMap> {
    let source = Arc::new(parse_finite_proset(v.get("source").ok_or_else(|| parse_err("missing \"source\""))?)?);
    let target = Arc::new(parse_finite_proset(v.get("target").ok_or_else(|| parse_err("missing \"target\""))?)?);
    let pairs = pair_list(v.get("assign"), "assign", 2)?
        .iter()
        .map(|p| Ok((label_from_json(&p[0])?, label_from_json(&p[1])?)))
        .collect::<Result<Vec<_>>>()?;
    ProsetMap::from_pairs(source, target, &pairs)
}

pub fn map_to_json(f: &ProsetMap) -> Value {
    let assign: Vec<Value> = f
        .pairs()
        .iter()
        .map(|(a, b)| json!([label_to_json(a), label_to_json(b)]))
        .collect();
    json!({ "source": proset_to_json(f.source()), "target": proset_to_json(f.target()), "assign": assign })
}

pub fn entries_to_json<R: Ring>(a: &IncMatrix<R>) -> Value {
    let p = a.proset();
    Value::Array(
        a.entries()
            .map(|(&(x, y), v)| json!([label_to_json(p.label(x)), label_to_json(p.label(y)), a.ring().to_json(v)]))
            .collect(),
    )
}

pub fn matrix_to_json<R: Ring>(a: &IncMatrix<R>) -> Value {
    json!({ "proset": proset_to_json(a.proset()), "ring": a.ring().token(), "entries": entries_to_json(a) })
}

/// The `"ring"` token of a matrix document.
pub fn ring_token(v: &Value) -> Result<&str> {
    v.get("ring").and_then(Value::as_str).ok_or_else(|| parse_err("missing \"ring\""))
}

/// Reads the entries of a matrix document onto the given carrier. The
/// document's own `"proset"` field, if any, is ignored.
pub fn parse_entries<R: Ring>(v: &Value, proset: Arc<FiniteProset>, ring: R) -> Result<IncMatrix<R>> {
    let items = pair_list(v.get("entries"), "entries", 3)?;
    let mut entries = Vec::with_capacity(items.len());
    for it in &items {
        entries.push((label_from_json(&it[0])?, label_from_json(&it[1])?, ring.from_json(&it[2])?));
    }
    IncMatrix::from_labeled(proset, ring, entries)
}

pub fn parse_matrix<R: Ring>(v: &Value, ring: R) -> Result<IncMatrix<R>> {
    let proset = Arc::new(parse_finite_proset(v.get("proset").ok_or_else(|| parse_err("missing \"proset\""))?)?);
    parse_entries(v, proset, ring)
}
