use std::collections::BTreeSet;
use std::sync::Arc;

use super::map::{same_proset, ComponentKind, ProsetMap};
use crate::error::{Error, Result};
use crate::proset::{FiniteProset, Label};

/// Disjoint union with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub proset: Arc<FiniteProset>,
    pub injections: Vec<ProsetMap>,
}

/// Disjoint union of `parts`. Labels are kept when they are distinct across
/// all parts; otherwise every element of part `i` is renamed `"i.label"`.
pub fn coproduct(parts: &[Arc<FiniteProset>]) -> Coproduct {
    let mut seen = BTreeSet::new();
    let distinct = parts.iter().flat_map(|p| p.labels()).all(|l| seen.insert(l.clone()));
    let mut labels = vec![];
    let mut offsets = vec![];
    for (i, p) in parts.iter().enumerate() {
        offsets.push(labels.len());
        for l in p.labels() {
            labels.push(if distinct { l.clone() } else { Label::Str(format!("{i}.{l}")) });
        }
    }
    let part_of: Vec<(usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..p.len()).map(move |x| (i, x)))
        .collect();
    let proset = Arc::new(
        FiniteProset::from_relation(labels, |a, b| {
            let ((i, x), (j, y)) = (part_of[a], part_of[b]);
            i == j && parts[i].leq(x, y)
        })
        .expect("labels are distinct"),
    );
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(p, &off)| ProsetMap::new_unchecked(p.clone(), proset.clone(), (off..off + p.len()).collect()))
        .collect();
    Coproduct { proset, injections }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn union_all(&mut self, xs: &[usize]) {
        for w in xs.windows(2) {
            self.union(w[0], w[1]);
        }
    }

    /// Class ids numbered by first occurrence.
    pub(crate) fn ids(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|x| {
                let r = self.find(x);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = next;
                    next += 1;
                }
                id_of_root[r]
            })
            .collect()
    }
}

/// A quotient of `base` by an equivalence whose projection is FCC.
///
/// The order on classes is the reflexive-transitive closure of
/// `[a] ⪯ [b]` whenever some members satisfy `a' ⪯ b'`. Each class is named
/// by the label of its smallest-index member.
#[derive(Debug, Clone)]
pub struct FccQuotient {
    pub base: Arc<FiniteProset>,
    pub classes: Vec<Vec<usize>>,
    pub quotient: Arc<FiniteProset>,
    pub projection: ProsetMap,
}

impl FccQuotient {
    /// Quotient by the partition with the given class ids, which must be
    /// numbered `0..k` by first occurrence. The projection may fail to be
    /// FCC; see [`FccQuotient::saturate`].
    pub fn from_ids(base: Arc<FiniteProset>, ids: &[usize]) -> Self {
        let k = ids.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut classes = vec![vec![]; k];
        for (x, &c) in ids.iter().enumerate() {
            classes[c].push(x);
        }
        let labels = classes.iter().map(|c| base.label(c[0]).clone()).collect();
        let mut raw = vec![false; k * k];
        for (a, b) in base.comparable_pairs() {
            raw[ids[a] * k + ids[b]] = true;
        }
        let quotient = Arc::new(FiniteProset::from_relation(labels, |i, j| raw[i * k + j]).expect("labels are distinct"));
        let projection = ProsetMap::new_unchecked(base.clone(), quotient.clone(), ids.to_vec());
        FccQuotient { base, classes, quotient, projection }
    }

    /// Coarsens the equivalence until the projection is FCC by collapsing
    /// every base component on which it is neither constant nor a convex
    /// embedding.
    pub(crate) fn saturate(base: Arc<FiniteProset>, uf: &mut UnionFind) -> Self {
        loop {
            let q = Self::from_ids(base.clone(), &uf.ids());
            let bad: Vec<Vec<usize>> = q
                .projection
                .classification()
                .iter()
                .filter(|c| c.kind == ComponentKind::Violation)
                .map(|c| c.members.clone())
                .collect();
            if bad.is_empty() {
                return q;
            }
            for comp in bad {
                uf.union_all(&comp);
            }
        }
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.projection.apply(x)
    }
}

#[derive(Debug, Clone)]
pub struct Pushout {
    pub proset: Arc<FiniteProset>,
    pub p1: ProsetMap,
    pub p2: ProsetMap,
    pub quotient: FccQuotient,
}

/// Pushout of `f: Λ → Λ1` and `g: Λ → Λ2` as a quotient of `Λ1 ⊔ Λ2`.
///
/// The equivalence identifies `f(s)` with `g(s)` for every source element,
/// collapses a target component that receives both a constant and an
/// embedded non-point component, and collapses the embedding side whenever a
/// non-point component is embedded by one map and sent to a point by the
/// other.
pub fn pushout(f: &ProsetMap, g: &ProsetMap) -> Result<Pushout> {
    if !same_proset(f.source(), g.source()) {
        return Err(Error::IncompatibleMaps("pushout legs have different sources".into()));
    }
    f.require_fcc()?;
    g.require_fcc()?;
    let src = f.source();
    let co = coproduct(&[f.target().clone(), g.target().clone()]);
    let (i1, i2) = (&co.injections[0], &co.injections[1]);
    let mut uf = UnionFind::new(co.proset.len());
    for s in 0..src.len() {
        uf.union(i1.apply(f.apply(s)), i2.apply(g.apply(s)));
    }
    for (leg, inj) in [(f, i1), (g, i2)] {
        let comp = leg.target().components();
        let comp_of = leg.target().component_index();
        let mut receives_const = vec![false; comp.len()];
        let mut receives_embed = vec![false; comp.len()];
        for c in leg.classification() {
            if c.members.len() < 2 {
                continue;
            }
            let j = comp_of[leg.apply(c.members[0])];
            match c.kind {
                ComponentKind::Constant => receives_const[j] = true,
                _ => receives_embed[j] = true,
            }
        }
        for (j, members) in comp.iter().enumerate() {
            if receives_const[j] && receives_embed[j] {
                let img: Vec<usize> = members.iter().map(|&x| inj.apply(x)).collect();
                uf.union_all(&img);
            }
        }
    }
    for (c_f, c_g) in f.classification().iter().zip(g.classification()) {
        if c_f.members.len() < 2 {
            continue;
        }
        let collapse = match (c_f.kind, c_g.kind) {
            (ComponentKind::ConvexEmbedding, ComponentKind::Constant) => Some((f, i1)),
            (ComponentKind::Constant, ComponentKind::ConvexEmbedding) => Some((g, i2)),
            _ => None,
        };
        if let Some((leg, inj)) = collapse {
            let t = leg.target();
            let j = t.component_index()[leg.apply(c_f.members[0])];
            let img: Vec<usize> = t.components()[j].iter().map(|&x| inj.apply(x)).collect();
            uf.union_all(&img);
        }
    }
    let quotient = FccQuotient::saturate(co.proset.clone(), &mut uf);
    let p1 = quotient.projection.after(i1)?;
    let p2 = quotient.projection.after(i2)?;
    Ok(Pushout { proset: quotient.quotient.clone(), p1, p2, quotient })
}

#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub proset: Arc<FiniteProset>,
    pub p: ProsetMap,
    pub quotient: FccQuotient,
}

/// Coequalizer of `f1, f2: Λ → Λ'`: identify `f1(t)` with `f2(t)`, and
/// collapse every target component in which some `f1(t) ≠ f2(t)` both lie.
pub fn coequalizer(f1: &ProsetMap, f2: &ProsetMap) -> Result<Coequalizer> {
    if !same_proset(f1.source(), f2.source()) || !same_proset(f1.target(), f2.target()) {
        return Err(Error::IncompatibleMaps("coequalizer maps must share source and target".into()));
    }
    f1.require_fcc()?;
    f2.require_fcc()?;
    let tgt = f1.target().clone();
    let comp_of = tgt.component_index();
    let comps = tgt.components();
    let mut uf = UnionFind::new(tgt.len());
    for t in 0..f1.source().len() {
        let (a, b) = (f1.apply(t), f2.apply(t));
        uf.union(a, b);
        if a != b && comp_of[a] == comp_of[b] {
            uf.union_all(&comps[comp_of[a]]);
        }
    }
    let quotient = FccQuotient::saturate(tgt, &mut uf);
    Ok(Coequalizer { proset: quotient.quotient.clone(), p: quotient.projection.clone(), quotient })
}
