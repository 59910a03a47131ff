use std::path::Path;

use incidence_core::json::{parse_proset, ProsetInput};
use incidence_core::proset::{FiniteProset, Label, Rule, RuleProset};
use incidence_core::{Error, Result};
use serde_json::Value;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn rule_from_name(spec: &str) -> Result<Option<Rule>> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad size in {spec:?}")));
    Ok(Some(match name {
        "nat" => Rule::Nat,
        "int" => Rule::Int,
        "zig" => Rule::Zig,
        "divisibility" => Rule::Divisibility,
        "chain" => Rule::Chain(num(arg)?),
        "full" => Rule::Full(num(arg)?),
        "arrow" => {
            let (m, n) = arg.split_once(',').ok_or_else(|| Error::Parse(format!("arrow needs M,N in {spec:?}")))?;
            Rule::Arrow(num(m)?, num(n)?)
        }
        _ => return Ok(None),
    }))
}

/// A proset argument: a rule name, inline JSON, or a JSON file.
pub fn proset_arg(spec: &str) -> Result<ProsetInput> {
    if let Some(rule) = rule_from_name(spec)? {
        return Ok(ProsetInput::Rule { proset: RuleProset::new(rule)?, window: None, depth: None });
    }
    let v = if spec.trim_start().starts_with('{') {
        serde_json::from_str(spec).map_err(|e| Error::Parse(format!("inline proset: {e}")))?
    } else {
        read_json(Path::new(spec))?
    };
    parse_proset(&v)
}

pub enum WindowArg {
    Depth(usize),
    Labels(Vec<Label>),
}

pub fn window_arg(s: &str) -> Result<WindowArg> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(format!("window: {e}")))?;
        let items = v.as_array().ok_or_else(|| Error::Parse("window must be an array".into()))?;
        return items.iter().map(incidence_core::json::label_from_json).collect::<Result<_>>().map(WindowArg::Labels);
    }
    if !t.contains(',') {
        if let Ok(d) = t.parse::<usize>() {
            return Ok(WindowArg::Depth(d));
        }
    }
    Ok(WindowArg::Labels(
        t.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<i64>().map(Label::Int).unwrap_or_else(|_| Label::Str(x.to_string())))
            .collect(),
    ))
}

/// Applies the `--window`/`--depth` options and returns the finite carrier.
pub fn finite_carrier(input: ProsetInput, window: Option<&str>, depth: Option<usize>) -> Result<FiniteProset> {
    let w = window.map(window_arg).transpose()?;
    match input {
        ProsetInput::Finite { proset, .. } => match w {
            Some(WindowArg::Labels(ls)) => proset.restrict(&proset.window_of(&ls)?),
            Some(WindowArg::Depth(_)) => Err(Error::Parse("a finite proset takes a label window, not a depth".into())),
            None => Ok(proset),
        },
        ProsetInput::Rule { proset, window: file_window, depth: file_depth } => {
            let (window, depth) = match w {
                Some(WindowArg::Labels(ls)) => (Some(ls), None),
                Some(WindowArg::Depth(d)) => (None, Some(d)),
                None => (file_window, depth.or(file_depth)),
            };
            ProsetInput::Rule { proset, window, depth }.into_finite()
        }
    }
}
