use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::{fmt_labels, ConvexWindow, Depth, Label};
use crate::error::{Error, Result};

/// A finite proset. The order is kept as its reflexive-transitive closure in
/// a dense boolean matrix, so `leq` is a lookup.
///
/// Elements are addressed by index `0..len()`; [`Label`]s are the external
/// names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteProset {
    labels: Vec<Label>,
    index: BTreeMap<Label, usize>,
    leq: Vec<bool>,
}

impl fmt::Debug for FiniteProset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> = self
            .comparable_pairs()
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{}<={}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("FiniteProset")
            .field("elements", &fmt_labels(&self.labels))
            .field("leq", &rel)
            .finish()
    }
}

impl FiniteProset {
    /// Builds the proset generated by `le` on `labels`, closing the relation.
    pub fn from_relation(labels: Vec<Label>, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Ok(Self::closed_from(labels, le)?.0)
    }

    /// Closes the relation generated by `pairs` (given by label). Returns the
    /// proset and the number of pairs added by the closure.
    pub fn with_closure_report(labels: Vec<Label>, pairs: &[(Label, Label)]) -> Result<(Self, usize)> {
        let index = build_index(&labels)?;
        let n = labels.len();
        let mut raw = vec![false; n * n];
        for (a, b) in pairs {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownElement(a.to_string()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownElement(b.to_string()))?;
            raw[ia * n + ib] = true;
        }
        Self::closed_from(labels, |i, j| raw[i * n + j])
    }

    pub fn new(labels: Vec<Label>, pairs: &[(Label, Label)]) -> Result<Self> {
        Ok(Self::with_closure_report(labels, pairs)?.0)
    }

    /// Index-based variant of [`FiniteProset::new`].
    pub fn from_index_pairs(labels: Vec<Label>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut raw = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            raw[a * n + b] = true;
        }
        Self::from_relation(labels, |i, j| raw[i * n + j])
    }

    fn closed_from(labels: Vec<Label>, le: impl Fn(usize, usize) -> bool) -> Result<(Self, usize)> {
        let index = build_index(&labels)?;
        let n = labels.len();
        let mut leq = vec![false; n * n];
        let mut given = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i == j || le(i, j) {
                    leq[i * n + j] = true;
                    given += 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let total = leq.iter().filter(|&&b| b).count();
        Ok((FiniteProset { labels, index, leq }, total - given))
    }

    pub fn empty() -> Self {
        FiniteProset { labels: vec![], index: BTreeMap::new(), leq: vec![] }
    }

    /// The one-point proset.
    pub fn point() -> Self {
        Self::discrete(vec![Label::Int(0)]).expect("single label")
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_relation(int_labels(n), |i, j| i <= j).expect("distinct labels")
    }

    /// `n` mutually equivalent elements.
    pub fn full(n: usize) -> Self {
        Self::from_relation(int_labels(n), |_, _| true).expect("distinct labels")
    }

    /// Equality order on the given labels.
    pub fn discrete(labels: Vec<Label>) -> Result<Self> {
        Self::from_relation(labels, |i, j| i == j)
    }

    /// `m` equivalent primed elements `0', ..., (m-1)'` strictly below `n`
    /// equivalent elements `0, ..., n-1`.
    pub fn arrow(m: usize, n: usize) -> Self {
        let mut labels: Vec<Label> = (0..m).map(|i| Label::Str(format!("{i}'"))).collect();
        labels.extend(int_labels(n));
        Self::from_relation(labels, |i, j| i < m || j >= m).expect("distinct labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, x: &Label) -> Result<usize> {
        self.index.get(x).copied().ok_or_else(|| Error::UnknownElement(x.to_string()))
    }

    pub fn indices_of(&self, xs: &[Label]) -> Result<Vec<usize>> {
        xs.iter().map(|x| self.index_of(x)).collect()
    }

    pub fn labels_of(&self, idx: &[usize]) -> Vec<Label> {
        idx.iter().map(|&i| self.labels[i].clone()).collect()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.labels.len() + b]
    }

    /// `a ⪯ b` and not `b ⪯ a`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// All pairs `(a, b)` with `a ⪯ b`, row-major.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq(a, b))
            .collect()
    }

    pub fn num_comparable_pairs(&self) -> usize {
        self.leq.iter().filter(|&&b| b).count()
    }

    /// `[a, b] = {s : a ⪯ s ⪯ b}`, ascending by index.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        if !self.leq(a, b) {
            return vec![];
        }
        (0..self.len()).filter(|&s| self.leq(a, s) && self.leq(s, b)).collect()
    }

    /// The equivalence class `[s, s]`.
    pub fn class_of(&self, s: usize) -> Vec<usize> {
        self.interval(s, s)
    }

    /// Class id of every element; ids follow the smallest member index.
    pub fn class_index(&self) -> Vec<usize> {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if id[s] == usize::MAX {
                for t in s..n {
                    if self.equivalent(s, t) {
                        id[t] = next;
                    }
                }
                next += 1;
            }
        }
        id
    }

    /// Equivalence classes, ordered by smallest member index.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        group_by_id(&self.class_index())
    }

    pub fn is_poset(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| a == b || !self.equivalent(a, b)))
    }

    fn comparables(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&t| self.comparable(s, t))
    }

    /// `N_n(s)`: `N_0` is the class of `s`, `N_1` its comparables, and
    /// `N_n` the union of `N_1(t)` over `t ∈ N_(n-1)(s)`.
    pub fn neighborhood(&self, s: usize, depth: Depth) -> Vec<usize> {
        let steps = match depth {
            Depth::Finite(0) => return self.class_of(s),
            Depth::Finite(k) => k,
            Depth::Omega => usize::MAX,
        };
        let n = self.len();
        let mut seen = vec![false; n];
        let mut frontier = vec![s];
        seen[s] = true;
        let mut taken = 0;
        while taken < steps && !frontier.is_empty() {
            let mut next = vec![];
            for &t in &frontier {
                for u in self.comparables(t) {
                    if !seen[u] {
                        seen[u] = true;
                        next.push(u);
                    }
                }
            }
            frontier = next;
            taken += 1;
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    /// Component id of every element; ids follow the smallest member index.
    pub fn component_index(&self) -> Vec<usize> {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if id[s] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            id[s] = next;
            while let Some(t) = queue.pop_front() {
                for u in self.comparables(t) {
                    if id[u] == usize::MAX {
                        id[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        id
    }

    /// `N_ω`-classes, ordered by smallest member index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        group_by_id(&self.component_index())
    }

    pub fn is_irreducible(&self) -> bool {
        self.components().len() == 1
    }

    /// Interval-closed and connected through comparabilities inside `set`.
    pub fn is_convex(&self, set: &[usize]) -> bool {
        let n = self.len();
        let mut inside = vec![false; n];
        for &s in set {
            inside[s] = true;
        }
        for &a in set {
            for &b in set {
                if self.leq(a, b) && (0..n).any(|s| !inside[s] && self.leq(a, s) && self.leq(s, b)) {
                    return false;
                }
            }
        }
        self.connected_within(set, &inside)
    }

    fn connected_within(&self, set: &[usize], inside: &[bool]) -> bool {
        let Some(&start) = set.first() else { return true };
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for u in self.comparables(t) {
                if inside[u] && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        let distinct = {
            let mut v = set.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        count == distinct
    }

    /// Shortest comparability path from `a` to `b`, both ends included.
    pub fn comparability_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let n = self.len();
        let mut prev = vec![usize::MAX; n];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(t) = queue.pop_front() {
            if t == b {
                let mut out = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[cur];
                    out.push(cur);
                }
                out.reverse();
                return Some(out);
            }
            for u in self.comparables(t) {
                if prev[u] == usize::MAX {
                    prev[u] = t;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// A finite convex superset of `set`: add a comparability path from the
    /// first member to every other member, then take the union of all
    /// intervals between comparable members.
    ///
    /// Errors with [`Error::SpansComponents`] when `set` meets more than one
    /// component; see [`FiniteProset::locally_convex_closure`].
    pub fn convex_closure(&self, set: &[usize]) -> Result<Vec<usize>> {
        let Some(&first) = set.first() else { return Ok(vec![]) };
        let mut seeds = vec![first];
        for &s in &set[1..] {
            let p = self.comparability_path(first, s).ok_or_else(|| {
                Error::SpansComponents(format!("{} and {}", self.labels[first], self.labels[s]))
            })?;
            seeds.extend(p);
        }
        seeds.sort_unstable();
        seeds.dedup();
        let mut inside = vec![false; self.len()];
        for &x in &seeds {
            for &y in &seeds {
                if self.leq(x, y) {
                    for s in self.interval(x, y) {
                        inside[s] = true;
                    }
                }
            }
        }
        Ok((0..self.len()).filter(|&i| inside[i]).collect())
    }

    /// Convex closure taken separately inside each component met by `set`.
    pub fn locally_convex_closure(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let comp = self.component_index();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &s in set {
            groups.entry(comp[s]).or_default().push(s);
        }
        groups
            .into_values()
            .map(|g| self.convex_closure(&g).expect("single component"))
            .collect()
    }

    /// Layers of the condensation: layer `k` holds the classes that are
    /// minimal once layers `0..k` are removed. Classes inside a layer are
    /// sorted by smallest label, members of a class by label.
    pub fn class_layers(&self) -> Vec<Vec<Vec<usize>>> {
        let mut classes = self.classes();
        for c in &mut classes {
            c.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        }
        let m = classes.len();
        let mut placed = vec![false; m];
        let mut layers = vec![];
        let mut remaining = m;
        while remaining > 0 {
            let mut layer: Vec<usize> = (0..m)
                .filter(|&c| !placed[c])
                .filter(|&c| {
                    (0..m).all(|d| placed[d] || d == c || !self.lt(classes[d][0], classes[c][0]))
                })
                .collect();
            layer.sort_by(|&c, &d| self.labels[classes[c][0]].cmp(&self.labels[classes[d][0]]));
            for &c in &layer {
                placed[c] = true;
            }
            remaining -= layer.len();
            layers.push(layer.into_iter().map(|c| classes[c].clone()).collect());
        }
        layers
    }

    /// Enumeration in which the relation matrix is block upper triangular
    /// with the equivalence classes as diagonal blocks.
    pub fn layer_order(&self) -> Vec<usize> {
        self.class_layers().into_iter().flatten().flatten().collect()
    }

    /// Number of condensation layers: the longest strict chain of classes.
    pub fn height(&self) -> usize {
        self.class_layers().len()
    }

    /// Induced sub-proset on `idx`, keeping labels and the given order.
    pub fn induced(&self, idx: &[usize]) -> FiniteProset {
        let labels = self.labels_of(idx);
        let index = build_index(&labels).expect("indices are distinct");
        let k = idx.len();
        let mut leq = vec![false; k * k];
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                leq[i * k + j] = self.leq(a, b);
            }
        }
        FiniteProset { labels, index, leq }
    }

    /// Induced sub-proset on a window of this proset.
    pub fn restrict(&self, window: &ConvexWindow) -> Result<FiniteProset> {
        Ok(self.induced(&self.indices_of(window.members())?))
    }

    /// Validates `idx` as a convex window.
    pub fn window(&self, idx: &[usize]) -> Result<ConvexWindow> {
        if !self.is_convex(idx) {
            return Err(Error::WindowNotConvex(fmt_labels(&self.labels_of(idx))));
        }
        Ok(ConvexWindow::new_unchecked(self.labels_of(idx)))
    }

    /// Validates a label set as a convex window.
    pub fn window_of(&self, members: &[Label]) -> Result<ConvexWindow> {
        self.window(&self.indices_of(members)?)
    }

    pub fn whole(&self) -> ConvexWindow {
        ConvexWindow::new_unchecked(self.labels.clone())
    }

    /// Same order with new labels.
    pub fn relabel(&self, labels: Vec<Label>) -> Result<FiniteProset> {
        if labels.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} elements",
                labels.len(),
                self.len()
            )));
        }
        let index = build_index(&labels)?;
        Ok(FiniteProset { labels, index, leq: self.leq.clone() })
    }

    /// Relation bits in row-major order, used for isomorphism codes.
    pub(crate) fn relation_bits(&self) -> &[bool] {
        &self.leq
    }
}

fn int_labels(n: usize) -> Vec<Label> {
    (0..n as i64).map(Label::Int).collect()
}

fn build_index(labels: &[Label]) -> Result<BTreeMap<Label, usize>> {
    let mut index = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::Parse(format!("duplicate element {l}")));
        }
    }
    Ok(index)
}

fn group_by_id(id: &[usize]) -> Vec<Vec<usize>> {
    let k = id.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![vec![]; k];
    for (s, &c) in id.iter().enumerate() {
        out[c].push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proset::labels;

    fn two_chains() -> FiniteProset {
        let ls = labels(&["a0", "a1", "b0", "b1", "b2"]);
        FiniteProset::from_index_pairs(ls, &[(0, 1), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn closure_is_applied() {
        let ls = labels(&[0, 1, 2]);
        let (p, added) =
            FiniteProset::with_closure_report(ls, &[(0.into(), 1.into()), (1.into(), 2.into())]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(added, 1);
        let again = FiniteProset::from_relation(p.labels().to_vec(), |a, b| p.leq(a, b)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn rejects_duplicates_and_unknowns() {
        assert!(FiniteProset::discrete(labels(&[1, 1])).is_err());
        let err = FiniteProset::new(labels(&[1]), &[(1.into(), 2.into())]).unwrap_err();
        assert_eq!(err.code(), "unknown_element");
    }

    #[test]
    fn intervals() {
        let c = FiniteProset::chain(4);
        assert_eq!(c.interval(0, 3), vec![0, 1, 2, 3]);
        assert!(c.interval(3, 0).is_empty());
        let f = FiniteProset::full(3);
        assert_eq!(f.interval(0, 0), vec![0, 1, 2]);
        assert!(!f.is_poset());
    }

    #[test]
    fn components_of_disjoint_chains() {
        let p = two_chains();
        let comps = p.components();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3, 4]]);
        let d = FiniteProset::discrete(labels(&["a", "b", "c"])).unwrap();
        assert_eq!(d.components().len(), 3);
    }

    #[test]
    fn convexity_on_chain() {
        let c = FiniteProset::chain(5);
        assert!(!c.is_convex(&[1, 3]));
        assert!(c.is_convex(&[1, 2, 3]));
        assert!(c.is_convex(&[]));
        assert_eq!(c.convex_closure(&[0, 3]).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn closure_refuses_spanning_sets() {
        let p = two_chains();
        let err = p.convex_closure(&[0, 2]).unwrap_err();
        assert_eq!(err.code(), "spans_components");
        let parts = p.locally_convex_closure(&[0, 1, 2, 4]);
        assert_eq!(parts, vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn layer_order_of_arrow() {
        let a = FiniteProset::arrow(2, 2);
        let order: Vec<Label> = a.labels_of(&a.layer_order());
        assert_eq!(order, labels(&["0'", "1'"]).into_iter().chain(labels(&[0, 1])).collect::<Vec<_>>());
        assert_eq!(FiniteProset::chain(3).layer_order(), vec![0, 1, 2]);
        assert_eq!(a.height(), 2);
    }

    #[test]
    fn neighborhoods_on_chain() {
        let c = FiniteProset::chain(3);
        assert_eq!(c.neighborhood(1, Depth::Finite(0)), vec![1]);
        assert_eq!(c.neighborhood(1, Depth::Finite(1)), vec![0, 1, 2]);
        let p = two_chains();
        assert_eq!(p.neighborhood(2, Depth::Omega), vec![2, 3, 4]);
    }
}
