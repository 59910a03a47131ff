//! Preordered sets: finite prosets stored as a closed relation matrix, the
//! rule-defined infinite families, and finite convex windows.

mod catalog;
mod finite;
mod rule;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{iso_code, prosets_of_size, prosets_up_to, random_proset};
pub use finite::FiniteProset;
pub use rule::{Rule, RuleProset, DEFAULT_BUDGET};

/// Opaque element identifier. Integers and strings are both accepted in
/// JSON input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl Label {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Label::Int(i) => Some(*i),
            Label::Str(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

impl From<i32> for Label {
    fn from(i: i32) -> Self {
        Label::Int(i as i64)
    }
}

impl From<usize> for Label {
    fn from(i: usize) -> Self {
        Label::Int(i as i64)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Str(s.to_string())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::Str(s)
    }
}

/// Convenience for building label lists in tests and examples.
pub fn labels<T: Into<Label> + Clone>(items: &[T]) -> Vec<Label> {
    items.iter().cloned().map(Into::into).collect()
}

/// Radius of a neighbourhood `N_n(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Depth {
    Finite(usize),
    Omega,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(n) => write!(f, "{n}"),
            Depth::Omega => f.write_str("omega"),
        }
    }
}

/// A finite convex subset of some proset, stored as a sorted label list.
///
/// Only [`FiniteProset::window`], [`RuleProset::window`] and the closure
/// operations construct these, so membership in `Γ(Λ)` is checked once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConvexWindow {
    members: Vec<Label>,
}

impl ConvexWindow {
    pub(crate) fn new_unchecked(mut members: Vec<Label>) -> Self {
        members.sort();
        members.dedup();
        ConvexWindow { members }
    }

    pub fn members(&self) -> &[Label] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &Label) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &ConvexWindow) -> bool {
        self.members.iter().all(|x| other.contains(x))
    }
}

impl fmt::Display for ConvexWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

pub(crate) fn fmt_labels(items: &[Label]) -> String {
    let items: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}
