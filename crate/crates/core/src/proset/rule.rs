use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::{fmt_labels, ConvexWindow, Depth, FiniteProset, Label};
use crate::error::{Error, Result};

/// Default number of elements a search may visit before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;

/// The shipped order families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `0 < 1 < 2 < ...`
    Nat,
    /// The integers with the usual order.
    Int,
    /// Integers; every even `2k` lies above `2k - 1` and `2k + 1`.
    Zig,
    /// Positive integers ordered by divisibility.
    Divisibility,
    Chain(usize),
    Full(usize),
    Discrete(Vec<Label>),
    Arrow(usize, usize),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Nat => f.write_str("nat"),
            Rule::Int => f.write_str("int"),
            Rule::Zig => f.write_str("zig"),
            Rule::Divisibility => f.write_str("divisibility"),
            Rule::Chain(n) => write!(f, "chain({n})"),
            Rule::Full(n) => write!(f, "full({n})"),
            Rule::Discrete(s) => write!(f, "discrete({})", fmt_labels(s)),
            Rule::Arrow(m, n) => write!(f, "arrow({m},{n})"),
        }
    }
}

/// A proset given by a decidable order rule. Finite families are backed by
/// a [`FiniteProset`]; infinite ones are evaluated lazily on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleProset {
    rule: Rule,
    budget: usize,
    finite: Option<FiniteProset>,
}

impl RuleProset {
    pub fn new(rule: Rule) -> Result<Self> {
        let finite = match &rule {
            Rule::Chain(n) => Some(FiniteProset::chain(*n)),
            Rule::Full(n) => Some(FiniteProset::full(*n)),
            Rule::Discrete(s) => Some(FiniteProset::discrete(s.clone())?),
            Rule::Arrow(m, n) => Some(FiniteProset::arrow(*m, *n)),
            _ => None,
        };
        Ok(RuleProset { rule, budget: DEFAULT_BUDGET, finite })
    }

    pub fn nat() -> Self {
        Self::new(Rule::Nat).expect("infallible")
    }

    pub fn int() -> Self {
        Self::new(Rule::Int).expect("infallible")
    }

    pub fn zig() -> Self {
        Self::new(Rule::Zig).expect("infallible")
    }

    pub fn divisibility() -> Self {
        Self::new(Rule::Divisibility).expect("infallible")
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn as_finite(&self) -> Option<&FiniteProset> {
        self.finite.as_ref()
    }

    pub fn contains(&self, x: &Label) -> bool {
        if let Some(p) = &self.finite {
            return p.index_of(x).is_ok();
        }
        match (x, &self.rule) {
            (Label::Int(i), Rule::Nat) => *i >= 0,
            (Label::Int(i), Rule::Divisibility) => *i >= 1,
            (Label::Int(_), Rule::Int | Rule::Zig) => true,
            _ => false,
        }
    }

    fn check(&self, x: &Label) -> Result<i64> {
        if !self.contains(x) {
            return Err(Error::UnknownElement(format!("{x} in {}", self.rule)));
        }
        Ok(x.as_int().unwrap_or(0))
    }

    pub fn leq(&self, a: &Label, b: &Label) -> Result<bool> {
        if let Some(p) = &self.finite {
            return Ok(p.leq(p.index_of(a)?, p.index_of(b)?));
        }
        let (x, y) = (self.check(a)?, self.check(b)?);
        Ok(match self.rule {
            Rule::Nat | Rule::Int => x <= y,
            Rule::Zig => x == y || (y.is_even() && (x - y).abs() == 1),
            Rule::Divisibility => y % x == 0,
            _ => unreachable!("finite rules handled above"),
        })
    }

    /// `[a, b]`, sorted by label.
    pub fn interval(&self, a: &Label, b: &Label) -> Result<Vec<Label>> {
        if let Some(p) = &self.finite {
            let mut out = p.labels_of(&p.interval(p.index_of(a)?, p.index_of(b)?));
            out.sort();
            return Ok(out);
        }
        if !self.leq(a, b)? {
            return Ok(vec![]);
        }
        let (x, y) = (self.check(a)?, self.check(b)?);
        let ints: Vec<i64> = match self.rule {
            Rule::Nat | Rule::Int => {
                if (y - x) as u64 >= self.budget as u64 {
                    return Err(Error::BudgetExceeded(self.budget as u64));
                }
                (x..=y).collect()
            }
            Rule::Zig => {
                let mut v = vec![x, y];
                v.sort_unstable();
                v.dedup();
                v
            }
            Rule::Divisibility => {
                let q = y / x;
                if q as u128 > (self.budget as u128).pow(2) {
                    return Err(Error::BudgetExceeded(self.budget as u64));
                }
                let mut v: Vec<i64> = divisors(q).into_iter().map(|d| d * x).collect();
                v.sort_unstable();
                v
            }
            _ => unreachable!(),
        };
        Ok(ints.into_iter().map(Label::Int).collect())
    }

    fn unbounded(&self, s: &Label) -> Error {
        Error::UnboundedComponent(format!("{s} in {}", self.rule), self.budget)
    }

    /// `N_n(s)` when it is finite. Errors with [`Error::UnboundedComponent`]
    /// when the neighbourhood is infinite or larger than the budget.
    pub fn neighborhood(&self, s: &Label, depth: Depth) -> Result<Vec<Label>> {
        if let Some(p) = &self.finite {
            let mut out = p.labels_of(&p.neighborhood(p.index_of(s)?, depth));
            out.sort();
            return Ok(out);
        }
        let x = self.check(s)?;
        match (depth, &self.rule) {
            (Depth::Finite(0), _) => Ok(vec![s.clone()]),
            (Depth::Finite(n), Rule::Zig) => {
                if 2 * n + 1 > self.budget {
                    return Err(self.unbounded(s));
                }
                let n = n as i64;
                Ok((x - n..=x + n).map(Label::Int).collect())
            }
            _ => Err(self.unbounded(s)),
        }
    }

    /// `N_n(s) ∩ universe`, exact even when `N_n(s)` is infinite.
    pub fn neighborhood_in(&self, s: &Label, depth: Depth, universe: &[Label]) -> Result<Vec<Label>> {
        let x = self.check(s)?;
        for u in universe {
            self.check(u)?;
        }
        let keep: Box<dyn Fn(&Label) -> bool> = match (&self.finite, depth, &self.rule) {
            (Some(_), _, _) => {
                let full: BTreeSet<Label> = self.neighborhood(s, depth)?.into_iter().collect();
                Box::new(move |u| full.contains(u))
            }
            (None, Depth::Finite(0), _) => Box::new(move |u| u == s),
            (None, Depth::Finite(n), Rule::Zig) => {
                Box::new(move |u| (u.as_int().unwrap() - x).unsigned_abs() <= n as u64)
            }
            (None, Depth::Finite(1), Rule::Divisibility) => Box::new(move |u| {
                let y = u.as_int().unwrap();
                y % x == 0 || x % y == 0
            }),
            // nat and int are total orders; divisibility has the minimum 1
            (None, _, _) => Box::new(|_| true),
        };
        let mut out: Vec<Label> = universe.iter().filter(|u| keep(u)).cloned().collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn same_component(&self, a: &Label, b: &Label) -> Result<bool> {
        if let Some(p) = &self.finite {
            let comp = p.component_index();
            return Ok(comp[p.index_of(a)?] == comp[p.index_of(b)?]);
        }
        self.check(a)?;
        self.check(b)?;
        Ok(true)
    }

    /// A comparability path from `a` to `b`, both ends included.
    pub fn connecting_path(&self, a: &Label, b: &Label) -> Result<Vec<Label>> {
        if let Some(p) = &self.finite {
            let path = p
                .comparability_path(p.index_of(a)?, p.index_of(b)?)
                .ok_or_else(|| Error::SpansComponents(format!("{a} and {b}")))?;
            return Ok(p.labels_of(&path));
        }
        let (x, y) = (self.check(a)?, self.check(b)?);
        let path: Vec<i64> = match self.rule {
            Rule::Nat | Rule::Int => vec![x, y],
            Rule::Zig => {
                if (x - y).unsigned_abs() as usize >= self.budget {
                    return Err(self.unbounded(a));
                }
                if x <= y {
                    (x..=y).collect()
                } else {
                    (y..=x).rev().collect()
                }
            }
            Rule::Divisibility => vec![x, x.gcd(&y), y],
            _ => unreachable!(),
        };
        let mut out: Vec<Label> = vec![];
        for v in path {
            if out.last() != Some(&Label::Int(v)) {
                out.push(Label::Int(v));
            }
        }
        Ok(out)
    }

    pub fn is_convex(&self, set: &[Label]) -> Result<bool> {
        let members: BTreeSet<&Label> = set.iter().collect();
        for a in set {
            for b in set {
                if self.leq(a, b)? && self.interval(a, b)?.iter().any(|s| !members.contains(s)) {
                    return Ok(false);
                }
            }
        }
        let Some(first) = set.first() else { return Ok(true) };
        let mut seen: BTreeSet<&Label> = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(t) = stack.pop() {
            for u in set {
                if !seen.contains(u) && (self.leq(t, u)? || self.leq(u, t)?) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        Ok(seen.len() == members.len())
    }

    /// Finite convex superset of `set`, which must lie in one component.
    pub fn convex_closure(&self, set: &[Label]) -> Result<ConvexWindow> {
        let Some(first) = set.first() else { return Ok(ConvexWindow::new_unchecked(vec![])) };
        let mut seeds: BTreeSet<Label> = BTreeSet::new();
        for s in set {
            if !self.same_component(first, s)? {
                return Err(Error::SpansComponents(format!("{first} and {s}")));
            }
            seeds.extend(self.connecting_path(first, s)?);
        }
        let seeds: Vec<Label> = seeds.into_iter().collect();
        let mut out: BTreeSet<Label> = BTreeSet::new();
        for x in &seeds {
            for y in &seeds {
                if self.leq(x, y)? {
                    out.extend(self.interval(x, y)?);
                    if out.len() > self.budget {
                        return Err(self.unbounded(first));
                    }
                }
            }
        }
        Ok(ConvexWindow::new_unchecked(out.into_iter().collect()))
    }

    /// Convex closure per component.
    pub fn locally_convex_closure(&self, set: &[Label]) -> Result<Vec<ConvexWindow>> {
        let mut groups: Vec<Vec<Label>> = vec![];
        for s in set {
            let mut placed = false;
            for g in groups.iter_mut() {
                if self.same_component(&g[0], s)? {
                    g.push(s.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                groups.push(vec![s.clone()]);
            }
        }
        groups.iter().map(|g| self.convex_closure(g)).collect()
    }

    /// Validates a label set as a convex window.
    pub fn window(&self, members: &[Label]) -> Result<ConvexWindow> {
        if !self.is_convex(members)? {
            return Err(Error::WindowNotConvex(fmt_labels(members)));
        }
        Ok(ConvexWindow::new_unchecked(members.to_vec()))
    }

    /// The standard window of a given depth: `{0..d}` for nat, `{-d..d}`
    /// for int and zig (the latter is `N_d(0)`), `{1..d+1}` for
    /// divisibility, and everything for the finite families.
    pub fn standard_window(&self, depth: usize) -> ConvexWindow {
        if let Some(p) = &self.finite {
            return p.whole();
        }
        let d = depth as i64;
        let range: Vec<i64> = match self.rule {
            Rule::Nat => (0..=d).collect(),
            Rule::Int | Rule::Zig => (-d..=d).collect(),
            Rule::Divisibility => (1..=d + 1).collect(),
            _ => unreachable!(),
        };
        ConvexWindow::new_unchecked(range.into_iter().map(Label::Int).collect())
    }

    /// Induced finite proset on the window, elements sorted by label.
    pub fn restrict(&self, window: &ConvexWindow) -> Result<FiniteProset> {
        let members = window.members().to_vec();
        let mut rel = Vec::with_capacity(members.len() * members.len());
        for a in &members {
            for b in &members {
                rel.push(self.leq(a, b)?);
            }
        }
        let k = members.len();
        FiniteProset::from_relation(members, |i, j| rel[i * k + j])
    }
}

fn divisors(q: i64) -> Vec<i64> {
    let mut out = vec![];
    let mut d = 1;
    while d * d <= q {
        if q % d == 0 {
            out.push(d);
            if d * d != q {
                out.push(q / d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proset::labels;

    fn ints(v: &[i64]) -> Vec<Label> {
        labels(v)
    }

    #[test]
    fn divisibility_intervals() {
        let d = RuleProset::divisibility();
        assert_eq!(d.interval(&3.into(), &30.into()).unwrap(), ints(&[3, 6, 15, 30]));
        assert_eq!(d.interval(&1.into(), &30.into()).unwrap(), ints(&[1, 2, 3, 5, 6, 10, 15, 30]));
        assert!(d.interval(&4.into(), &30.into()).unwrap().is_empty());
    }

    #[test]
    fn zig_order() {
        let z = RuleProset::zig();
        assert!(z.leq(&(-1).into(), &0.into()).unwrap());
        assert!(z.leq(&1.into(), &0.into()).unwrap());
        assert!(!z.leq(&0.into(), &1.into()).unwrap());
        assert!(!z.leq(&1.into(), &3.into()).unwrap());
        assert_eq!(z.interval(&1.into(), &2.into()).unwrap(), ints(&[1, 2]));
    }

    #[test]
    fn zig_neighborhoods() {
        let z = RuleProset::zig();
        assert_eq!(z.neighborhood(&0.into(), Depth::Finite(0)).unwrap(), ints(&[0]));
        for n in 1..6 {
            let expect: Vec<i64> = (-(n as i64)..=n as i64).collect();
            assert_eq!(z.neighborhood(&0.into(), Depth::Finite(n)).unwrap(), ints(&expect));
        }
        let err = z.neighborhood(&0.into(), Depth::Omega).unwrap_err();
        assert_eq!(err.code(), "unbounded_component");
    }

    #[test]
    fn divisibility_second_neighborhood_is_everything() {
        let d = RuleProset::divisibility();
        let window: Vec<Label> = (1..=20).map(Label::Int).collect();
        assert_eq!(d.neighborhood_in(&5.into(), Depth::Finite(2), &window).unwrap(), window);
        let n1 = d.neighborhood_in(&5.into(), Depth::Finite(1), &window).unwrap();
        assert_eq!(n1, ints(&[1, 5, 10, 15, 20]));
        assert!(d.neighborhood(&5.into(), Depth::Finite(1)).is_err());
    }

    #[test]
    fn zig_convexity() {
        let z = RuleProset::zig();
        assert!(z.is_convex(&ints(&[-1, 0, 1, 2, 3])).unwrap());
        assert!(!z.is_convex(&ints(&[0, 3])).unwrap());
        let w = z.convex_closure(&ints(&[-2, 2])).unwrap();
        assert_eq!(w.members(), &ints(&[-2, -1, 0, 1, 2])[..]);
        assert!(z.is_convex(w.members()).unwrap());
    }

    #[test]
    fn divisibility_closure_goes_through_gcd() {
        let d = RuleProset::divisibility();
        let w = d.convex_closure(&ints(&[4, 6])).unwrap();
        assert_eq!(w.members(), &ints(&[2, 4, 6])[..]);
        assert!(d.is_convex(w.members()).unwrap());
    }

    #[test]
    fn discrete_rule_spans_components() {
        let d = RuleProset::new(Rule::Discrete(labels(&["a", "b"]))).unwrap();
        assert_eq!(d.convex_closure(&labels(&["a"])).unwrap().members(), &labels(&["a"])[..]);
        assert_eq!(d.convex_closure(&labels(&["a", "b"])).unwrap_err().code(), "spans_components");
        assert_eq!(d.locally_convex_closure(&labels(&["a", "b"])).unwrap().len(), 2);
    }

    #[test]
    fn standard_windows_are_convex() {
        for r in [RuleProset::nat(), RuleProset::int(), RuleProset::zig(), RuleProset::divisibility()] {
            for d in 0..6 {
                let w = r.standard_window(d);
                assert!(r.is_convex(w.members()).unwrap(), "{} depth {d}", r.rule());
            }
        }
    }
}
