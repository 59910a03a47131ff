use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::proset::{FiniteProset, Label};

/// Default size bound for [`enumerate_fcc_maps`].
pub const DEFAULT_MAP_BUDGET: usize = 6;

/// How a map behaves on one component of its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Constant,
    ConvexEmbedding,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    /// Source indices of the component, ascending.
    pub members: Vec<usize>,
    pub kind: ComponentKind,
}

/// An order-preserving map between finite prosets, with its per-component
/// classification computed at construction.
#[derive(Clone)]
pub struct ProsetMap {
    source: Arc<FiniteProset>,
    target: Arc<FiniteProset>,
    assign: Vec<usize>,
    classes: Vec<ComponentClass>,
}

impl PartialEq for ProsetMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign
            && same_proset(&self.source, &other.source)
            && same_proset(&self.target, &other.target)
    }
}

impl Eq for ProsetMap {}

impl fmt::Debug for ProsetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .assign
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", self.source.label(a), self.target.label(b)))
            .collect();
        write!(f, "ProsetMap[{}]", items.join(", "))
    }
}

pub fn same_proset(a: &Arc<FiniteProset>, b: &Arc<FiniteProset>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ProsetMap {
    /// Builds the map `i ↦ assign[i]`, rejecting maps that are not order
    /// preserving.
    pub fn new(source: Arc<FiniteProset>, target: Arc<FiniteProset>, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} source elements",
                assign.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&t| t >= target.len()) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        for (a, b) in source.comparable_pairs() {
            if !target.leq(assign[a], assign[b]) {
                return Err(Error::NotOrderPreserving(format!(
                    "{} <= {} but {} is not <= {}",
                    source.label(a),
                    source.label(b),
                    target.label(assign[a]),
                    target.label(assign[b])
                )));
            }
        }
        Ok(Self::new_unchecked(source, target, assign))
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteProset>, target: Arc<FiniteProset>, assign: Vec<usize>) -> Self {
        let classes = classify(&source, &target, &assign);
        ProsetMap { source, target, assign, classes }
    }

    /// Builds a map from `(a, f(a))` label pairs. Every source element must
    /// appear exactly once.
    pub fn from_pairs(source: Arc<FiniteProset>, target: Arc<FiniteProset>, pairs: &[(Label, Label)]) -> Result<Self> {
        let mut assign = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let ia = source.index_of(a)?;
            if assign[ia] != usize::MAX {
                return Err(Error::Parse(format!("{a} is assigned twice")));
            }
            assign[ia] = target.index_of(b)?;
        }
        if let Some(i) = assign.iter().position(|&t| t == usize::MAX) {
            return Err(Error::Parse(format!("{} has no image", source.label(i))));
        }
        Self::new(source, target, assign)
    }

    pub fn identity(p: Arc<FiniteProset>) -> Self {
        let assign = (0..p.len()).collect();
        Self::new_unchecked(p.clone(), p, assign)
    }

    /// Inclusion of `sub` into `sup`, matching elements by label.
    pub fn inclusion(sub: Arc<FiniteProset>, sup: Arc<FiniteProset>) -> Result<Self> {
        let assign = sup.indices_of(sub.labels())?;
        Self::new(sub, sup, assign)
    }

    pub fn source(&self) -> &Arc<FiniteProset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteProset> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assign[i]
    }

    pub fn apply_label(&self, x: &Label) -> Result<&Label> {
        Ok(self.target.label(self.assign[self.source.index_of(x)?]))
    }

    pub fn pairs(&self) -> Vec<(Label, Label)> {
        self.assign
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.label(a).clone(), self.target.label(b).clone()))
            .collect()
    }

    pub fn classification(&self) -> &[ComponentClass] {
        &self.classes
    }

    pub fn is_fcc(&self) -> bool {
        self.classes.iter().all(|c| c.kind != ComponentKind::Violation)
    }

    /// `Ok` when FCC, otherwise [`Error::NotFcc`] naming a bad component.
    pub fn require_fcc(&self) -> Result<()> {
        match self.classes.iter().find(|c| c.kind == ComponentKind::Violation) {
            None => Ok(()),
            Some(c) => Err(Error::NotFcc(format!(
                "component {} is neither constant nor a convex embedding",
                crate::proset::fmt_labels(&self.source.labels_of(&c.members))
            ))),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assign.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &t in &self.assign {
            seen[t] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &ProsetMap) -> Result<ProsetMap> {
        if !same_proset(&inner.target, &self.source) {
            return Err(Error::IncompatibleMaps("inner target differs from outer source".into()));
        }
        let assign = inner.assign.iter().map(|&i| self.assign[i]).collect();
        Ok(Self::new_unchecked(inner.source.clone(), self.target.clone(), assign))
    }
}

fn classify(source: &FiniteProset, target: &FiniteProset, f: &[usize]) -> Vec<ComponentClass> {
    source
        .components()
        .into_iter()
        .map(|members| {
            let kind = classify_component(source, target, f, &members);
            ComponentClass { members, kind }
        })
        .collect()
}

fn classify_component(source: &FiniteProset, target: &FiniteProset, f: &[usize], c: &[usize]) -> ComponentKind {
    let first = f[c[0]];
    if c.len() > 1 && c.iter().all(|&a| f[a] == first) {
        // {t} is convex only when t is alone in its class
        return if target.class_of(first).len() == 1 {
            ComponentKind::Constant
        } else {
            ComponentKind::Violation
        };
    }
    let mut preimage = HashMap::with_capacity(c.len());
    for &a in c {
        if preimage.insert(f[a], a).is_some() {
            return ComponentKind::Violation;
        }
    }
    for &a in c {
        for &b in c {
            if !target.leq(f[a], f[b]) {
                continue;
            }
            if source.leq(a, b) {
                // f is injective and monotone, so f([a,b]) ⊆ [f(a),f(b)]
                if source.interval(a, b).len() != target.interval(f[a], f[b]).len() {
                    return ComponentKind::Violation;
                }
                continue;
            }
            for y in target.interval(f[a], f[b]) {
                match preimage.get(&y) {
                    Some(&x) if !avoidable(source, c, a, b, x) => {}
                    _ => return ComponentKind::Violation,
                }
            }
        }
    }
    ComponentKind::ConvexEmbedding
}

/// Whether some convex subset of the component contains `a` and `b` but not
/// `x`. Such a set contains a comparability path from `a` to `b`, and the
/// union of intervals along a path misses `x` exactly when the path avoids
/// the down-set or the up-set of `x`.
fn avoidable(p: &FiniteProset, c: &[usize], a: usize, b: usize, x: usize) -> bool {
    let below: Vec<usize> = c.iter().copied().filter(|&u| !p.leq(u, x)).collect();
    let above: Vec<usize> = c.iter().copied().filter(|&u| !p.leq(x, u)).collect();
    connected_in(p, &below, a, b) || connected_in(p, &above, a, b)
}

fn connected_in(p: &FiniteProset, allowed: &[usize], a: usize, b: usize) -> bool {
    if !allowed.contains(&a) || !allowed.contains(&b) {
        return false;
    }
    let mut seen = vec![a];
    let mut stack = vec![a];
    while let Some(t) = stack.pop() {
        if t == b {
            return true;
        }
        for &u in allowed {
            if !seen.contains(&u) && p.comparable(t, u) {
                seen.push(u);
                stack.push(u);
            }
        }
    }
    false
}

/// Every FCC map `p1 → p2`, in lexicographic order of assignments. Both
/// prosets must have at most [`DEFAULT_MAP_BUDGET`] elements.
pub fn enumerate_fcc_maps(p1: &Arc<FiniteProset>, p2: &Arc<FiniteProset>) -> Result<Vec<ProsetMap>> {
    enumerate_fcc_maps_within(p1, p2, DEFAULT_MAP_BUDGET)
}

/// [`enumerate_fcc_maps`] with an explicit size bound.
pub fn enumerate_fcc_maps_within(p1: &Arc<FiniteProset>, p2: &Arc<FiniteProset>, max: usize) -> Result<Vec<ProsetMap>> {
    if p1.len() > max || p2.len() > max {
        return Err(Error::BudgetExceeded(max as u64));
    }
    Ok(fcc_assignments(p1, p2)
        .into_iter()
        .map(|a| ProsetMap::new_unchecked(p1.clone(), p2.clone(), a))
        .filter(ProsetMap::is_fcc)
        .collect())
}

/// Order-preserving assignments that are constant or injective on each
/// component: the candidates for FCC maps.
pub(crate) fn fcc_assignments(p1: &FiniteProset, p2: &FiniteProset) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mode {
        Unset,
        Constant(usize),
        Injective,
    }
    struct Search<'a> {
        p1: &'a FiniteProset,
        p2: &'a FiniteProset,
        comp: Vec<usize>,
        modes: Vec<Mode>,
        assign: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn go(&mut self, x: usize) {
            if x == self.p1.len() {
                self.out.push(self.assign.clone());
                return;
            }
            let c = self.comp[x];
            for v in 0..self.p2.len() {
                let monotone = (0..x).all(|y| {
                    (!self.p1.leq(y, x) || self.p2.leq(self.assign[y], v))
                        && (!self.p1.leq(x, y) || self.p2.leq(v, self.assign[y]))
                });
                if !monotone {
                    continue;
                }
                let clash = (0..x).any(|y| self.comp[y] == c && self.assign[y] == v);
                let saved = self.modes[c];
                let next = match saved {
                    Mode::Unset => Mode::Constant(v),
                    Mode::Constant(w) if w == v => saved,
                    Mode::Constant(_) if (0..x).filter(|&y| self.comp[y] == c).count() == 1 => Mode::Injective,
                    Mode::Injective if !clash => saved,
                    _ => continue,
                };
                self.modes[c] = next;
                self.assign[x] = v;
                self.go(x + 1);
                self.modes[c] = saved;
            }
        }
    }
    let comp = p1.component_index();
    let ncomp = comp.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut s = Search {
        p1,
        p2,
        comp,
        modes: vec![Mode::Unset; ncomp],
        assign: vec![0; p1.len()],
        out: vec![],
    };
    s.go(0);
    s.out
}
