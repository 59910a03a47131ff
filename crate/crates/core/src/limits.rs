//! Finite-depth inverse limits over directed sets of convex windows.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{IdealDescriptor, IncMatrix, SetRef};
use crate::proset::{fmt_labels, ConvexWindow, FiniteProset, Label, RuleProset};
use crate::ring::{Ring, Topology};

/// A proset that can validate and materialize label windows.
pub trait Windowed {
    fn convex_window(&self, members: &[Label]) -> Result<ConvexWindow>;
    fn restrict_window(&self, window: &ConvexWindow) -> Result<FiniteProset>;
    fn is_finite(&self) -> bool;
    fn leq_labels(&self, a: &Label, b: &Label) -> Result<bool>;
}

impl Windowed for FiniteProset {
    fn convex_window(&self, members: &[Label]) -> Result<ConvexWindow> {
        self.window_of(members)
    }

    fn restrict_window(&self, window: &ConvexWindow) -> Result<FiniteProset> {
        self.restrict(window)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn leq_labels(&self, a: &Label, b: &Label) -> Result<bool> {
        Ok(self.leq(self.index_of(a)?, self.index_of(b)?))
    }
}

impl Windowed for RuleProset {
    fn convex_window(&self, members: &[Label]) -> Result<ConvexWindow> {
        self.window(members)
    }

    fn restrict_window(&self, window: &ConvexWindow) -> Result<FiniteProset> {
        self.restrict(window)
    }

    fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    fn leq_labels(&self, a: &Label, b: &Label) -> Result<bool> {
        self.leq(a, b)
    }
}

/// Validates each window and returns the one containing all others.
fn directed_top<P: Windowed + ?Sized>(p: &P, windows: &[Vec<Label>]) -> Result<(Vec<ConvexWindow>, usize)> {
    let ws: Vec<ConvexWindow> = windows.iter().map(|w| p.convex_window(w)).collect::<Result<_>>()?;
    for (i, a) in ws.iter().enumerate() {
        for b in &ws[i + 1..] {
            if !ws.iter().any(|c| a.is_subset(c) && b.is_subset(c)) {
                return Err(Error::NotDirected(a.to_string(), b.to_string()));
            }
        }
    }
    let top = (0..ws.len())
        .find(|&i| ws.iter().all(|w| w.is_subset(&ws[i])))
        .ok_or_else(|| Error::NotDirected("(empty)".into(), "(empty)".into()))?;
    Ok((ws, top))
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseSystemReport {
    pub windows: Vec<ConvexWindow>,
    pub samples: usize,
    /// Triangles `α ⊆ β ⊆ γ` whose projections were compared.
    pub triangles: usize,
    /// Triangles with no window strictly between `α` and `β` or `β` and `γ`.
    pub adjacent_triangles: usize,
    pub adjacent_ok: bool,
    pub all_ok: bool,
}

impl InverseSystemReport {
    pub fn passed(&self) -> bool {
        self.adjacent_ok && self.all_ok
    }
}

/// Checks `π_(γ→α) = π_(β→α) ∘ π_(γ→β)` for every chain of windows in the
/// list, on seeded random matrices over the largest window.
pub fn check_inverse_system<P: Windowed + ?Sized, R: Ring>(
    p: &P,
    windows: &[Vec<Label>],
    ring: &R,
    samples: usize,
    seed: u64,
) -> Result<InverseSystemReport> {
    let (ws, top) = directed_top(p, windows)?;
    let carrier = Arc::new(p.restrict_window(&ws[top])?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<IncMatrix<R>> =
        (0..samples).map(|_| IncMatrix::random(carrier.clone(), ring.clone(), &mut rng)).collect();
    let n = ws.len();
    let sub = |a: usize, b: usize| a != b && ws[a].is_subset(&ws[b]) && ws[a] != ws[b];
    let between = |a: usize, b: usize| (0..n).any(|k| sub(a, k) && sub(k, b));
    let mut report = InverseSystemReport {
        windows: ws.clone(),
        samples,
        triangles: 0,
        adjacent_triangles: 0,
        adjacent_ok: true,
        all_ok: true,
    };
    for g in 0..n {
        for b in (0..n).filter(|&b| sub(b, g)) {
            for a in (0..n).filter(|&a| sub(a, b)) {
                report.triangles += 1;
                let adjacent = !between(a, b) && !between(b, g);
                report.adjacent_triangles += usize::from(adjacent);
                for m in &inputs {
                    let on_g = m.project(&ws[g])?;
                    let direct = on_g.project(&ws[a])?;
                    let stepwise = on_g.project(&ws[b])?.project(&ws[a])?;
                    if direct != stepwise {
                        report.all_ok = false;
                        report.adjacent_ok &= !adjacent;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// An element of the finite-depth inverse limit: one matrix per window.
#[derive(Debug, Clone)]
pub struct ConsistentFamily<R: Ring> {
    windows: Vec<ConvexWindow>,
    matrices: Vec<IncMatrix<R>>,
    top: usize,
}

impl<R: Ring> ConsistentFamily<R> {
    /// Builds and checks a family. Each matrix must live on its window.
    pub fn new<P: Windowed + ?Sized>(p: &P, parts: Vec<(Vec<Label>, IncMatrix<R>)>) -> Result<Self> {
        let labels: Vec<Vec<Label>> = parts.iter().map(|(w, _)| w.clone()).collect();
        let (windows, top) = directed_top(p, &labels)?;
        let mut matrices = Vec::with_capacity(parts.len());
        for ((_, m), w) in parts.into_iter().zip(&windows) {
            let mut got = m.proset().labels().to_vec();
            got.sort();
            if got != w.members() {
                return Err(Error::MismatchedCarrier(format!("matrix carrier {} is not window {w}", fmt_labels(&got))));
            }
            let expected = p.restrict_window(w)?;
            if !m.proset().labels().iter().all(|a| {
                m.proset().labels().iter().all(|b| {
                    let (ia, ib) = (m.proset().index_of(a).unwrap(), m.proset().index_of(b).unwrap());
                    let (ja, jb) = (expected.index_of(a).unwrap(), expected.index_of(b).unwrap());
                    m.proset().leq(ia, ib) == expected.leq(ja, jb)
                })
            }) {
                return Err(Error::MismatchedCarrier(format!("order on window {w} differs")));
            }
            matrices.push(m);
        }
        let fam = ConsistentFamily { windows, matrices, top };
        fam.check()?;
        Ok(fam)
    }

    /// The family of windowwise projections of `a`, which lives on a window
    /// containing all of them.
    pub fn truncations<P: Windowed + ?Sized>(p: &P, a: &IncMatrix<R>, windows: &[Vec<Label>]) -> Result<Self> {
        let parts = windows
            .iter()
            .map(|w| Ok((w.clone(), a.project(&p.convex_window(w)?)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, parts)
    }

    pub fn windows(&self) -> &[ConvexWindow] {
        &self.windows
    }

    pub fn get(&self, window: &ConvexWindow) -> Option<&IncMatrix<R>> {
        self.windows.iter().position(|w| w == window).map(|i| &self.matrices[i])
    }

    pub fn parts(&self) -> impl Iterator<Item = (&ConvexWindow, &IncMatrix<R>)> {
        self.windows.iter().zip(&self.matrices)
    }

    /// `ψ_(β→α)(F[β]) = F[α]` for every `α ⊆ β`; the first violation is
    /// reported with the offending entry.
    pub fn check(&self) -> Result<()> {
        for (i, a) in self.windows.iter().enumerate() {
            for (j, b) in self.windows.iter().enumerate() {
                if i == j || !a.is_subset(b) {
                    continue;
                }
                let down = self.matrices[j].project(a)?;
                let small = &self.matrices[i];
                for x in a.members() {
                    for y in a.members() {
                        let (u, v) = (down.get_labeled(x, y)?, small.get_labeled(x, y)?);
                        if u != v {
                            return Err(Error::Incompatible {
                                window_a: a.to_string(),
                                window_b: b.to_string(),
                                row: x.to_string(),
                                col: y.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The unique matrix on the largest window whose projections give the
/// family back.
pub fn reconstruct<R: Ring>(family: &ConsistentFamily<R>) -> Result<IncMatrix<R>> {
    family.check()?;
    let top = &family.matrices[family.top];
    let mut out = IncMatrix::zero(top.proset().clone(), top.ring().clone());
    for m in &family.matrices {
        for (&(a, b), v) in m.entries() {
            let (x, y) = (m.proset().label(a), m.proset().label(b));
            let (i, j) = (out.proset().index_of(x)?, out.proset().index_of(y)?);
            out.set(i, j, v.clone())?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct NetStage {
    pub window: ConvexWindow,
    /// Nonzero entries of the truncation `A^(α)`.
    pub support: usize,
    /// `A^(α)` and `A` agree on every pair inside `α`.
    pub agrees_on_window: bool,
    pub equals_limit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NetReport {
    pub stages: Vec<NetStage>,
    /// First stage from which the truncations equal `A`.
    pub stabilizes_at: Option<usize>,
    /// For each support entry of `A`, the first stage containing it.
    pub first_seen: Vec<((Label, Label), Option<usize>)>,
    /// Once an entry appears it never changes.
    pub coordinatewise_stable: bool,
}

/// The net of truncations `A^(α)` along a nested list of windows.
pub fn approximant_net<R: Ring>(a: &IncMatrix<R>, windows: &[ConvexWindow]) -> Result<NetReport> {
    let p = a.proset();
    let truncs: Vec<IncMatrix<R>> = windows.iter().map(|w| a.truncate(w)).collect::<Result<_>>()?;
    let mut stages = vec![];
    for (w, t) in windows.iter().zip(&truncs) {
        stages.push(NetStage {
            window: w.clone(),
            support: t.support_size(),
            agrees_on_window: t.project(w)? == a.project(w)?,
            equals_limit: t == a,
        });
    }
    let stabilizes_at = (0..stages.len()).find(|&k| stages[k..].iter().all(|s| s.equals_limit));
    let mut first_seen = vec![];
    let mut coordinatewise_stable = true;
    for (&(x, y), v) in a.entries() {
        let seen = truncs.iter().position(|t| t.get(x, y) == *v);
        if let Some(k) = seen {
            coordinatewise_stable &= truncs[k..].iter().all(|t| t.get(x, y) == *v);
        }
        first_seen.push(((p.label(x).clone(), p.label(y).clone()), seen));
    }
    Ok(NetReport { stages, stabilizes_at, first_seen, coordinatewise_stable })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowClass {
    OpenAndClosed,
    ClosedNotOpen,
}

/// Validates the sets of a descriptor against `p`: each must be convex and
/// the members pairwise disjoint. Returns whether their union is finite.
fn family_is_finite<P: Windowed + ?Sized>(p: &P, sets: &[SetRef]) -> Result<bool> {
    let mut seen: BTreeMap<Label, usize> = BTreeMap::new();
    let mut finite = true;
    for (k, s) in sets.iter().enumerate() {
        match s {
            SetRef::Whole => finite &= p.is_finite(),
            SetRef::Finite(ls) => {
                p.convex_window(ls).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
                for l in ls {
                    if let Some(prev) = seen.insert(l.clone(), k) {
                        if prev != k {
                            return Err(Error::InvalidDescriptor(format!("family members overlap at {l}")));
                        }
                    }
                }
            }
        }
    }
    if sets.len() > 1 && sets.iter().any(|s| matches!(s, SetRef::Whole)) {
        return Err(Error::InvalidDescriptor("the whole proset overlaps every other member".into()));
    }
    Ok(finite)
}

fn family_is_empty(sets: &[SetRef]) -> bool {
    sets.iter().all(|s| matches!(s, SetRef::Finite(ls) if ls.is_empty()))
}

/// Open/closed class of an ideal of `M_Λ(P)`. Every listed ideal is closed;
/// `I_{Λi}` is open iff `⊔Λi` is finite and `P` is discrete, `M_Λ(J)` iff
/// `Λ` is finite. Coefficient ideals are assumed open in `P`, so `J = P`
/// gives the whole ring.
pub fn ideal_window_class<P: Windowed + ?Sized, R: Ring>(
    p: &P,
    ideal: &IdealDescriptor<R::Elem>,
    ring: &R,
    topology: Topology,
) -> Result<WindowClass> {
    let open = match ideal {
        IdealDescriptor::Interval(a, b) => {
            if !p.leq_labels(a, b).map_err(|e| Error::InvalidDescriptor(e.to_string()))? {
                return Err(Error::InvalidDescriptor(format!("[{a}, {b}] is not an interval")));
            }
            topology == Topology::Discrete
        }
        IdealDescriptor::Convex(s) => {
            let sets = std::slice::from_ref(s);
            family_is_empty(sets) || (family_is_finite(p, sets)? && topology == Topology::Discrete)
        }
        IdealDescriptor::Family(sets) => {
            family_is_empty(sets) || (family_is_finite(p, sets)? && topology == Topology::Discrete)
        }
        IdealDescriptor::Coefficient(g) => ring.is_unit(g) || p.is_finite(),
        IdealDescriptor::Sum(sets, g) => {
            let finite = family_is_finite(p, sets)?;
            ring.is_unit(g) || family_is_empty(sets) || finite
        }
    };
    Ok(if open { WindowClass::OpenAndClosed } else { WindowClass::ClosedNotOpen })
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::proset::{labels, Depth, Rule};
    use crate::ring::{Integers, Zmod};

    fn nat_windows(k: i64) -> Vec<Vec<Label>> {
        (0..=k).map(|i| labels(&(0..=i).collect::<Vec<_>>())).collect()
    }

    fn zz() -> Integers<BigInt> {
        Integers::new()
    }

    #[test]
    fn nat_and_zig_systems() {
        let r = check_inverse_system(&RuleProset::nat(), &nat_windows(5), &zz(), 10, 1).unwrap();
        assert!(r.passed());
        assert_eq!((r.triangles, r.adjacent_triangles), (20, 4));
        let zig = RuleProset::zig();
        let w: Vec<Vec<Label>> = (1..=3).map(|d| zig.neighborhood(&0.into(), Depth::Finite(d)).unwrap()).collect();
        let r = check_inverse_system(&zig, &w, &Zmod::<u64>::new(6), 10, 2).unwrap();
        assert!(r.passed() && r.triangles == 1);
    }

    #[test]
    fn undirected_and_nonconvex_lists() {
        let nat = RuleProset::nat();
        let err = check_inverse_system(&nat, &[labels(&[0, 1]), labels(&[3, 4])], &zz(), 1, 0).unwrap_err();
        assert_eq!(err.code(), "not_directed");
        let err = check_inverse_system(&nat, &[labels(&[0, 2])], &zz(), 1, 0).unwrap_err();
        assert_eq!(err.code(), "window_not_convex");
    }

    #[test]
    fn reconstruct_round_trips() {
        let nat = RuleProset::nat();
        let top = Arc::new(nat.restrict(&nat.standard_window(4)).unwrap());
        let one = IncMatrix::identity(top.clone(), zz());
        let fam = ConsistentFamily::truncations(&nat, &one, &nat_windows(4)).unwrap();
        assert!(reconstruct(&fam).unwrap().is_identity());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = IncMatrix::random(top.clone(), zz(), &mut rng);
        let fam = ConsistentFamily::truncations(&nat, &a, &nat_windows(4)).unwrap();
        let back = reconstruct(&fam).unwrap();
        assert_eq!(back, a);
        let again = ConsistentFamily::truncations(&nat, &back, &nat_windows(4)).unwrap();
        for ((w1, m1), (w2, m2)) in fam.parts().zip(again.parts()) {
            assert_eq!((w1, m1), (w2, m2));
        }
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let nat = RuleProset::nat();
        let top = Arc::new(nat.restrict(&nat.standard_window(3)).unwrap());
        let a = IncMatrix::identity(top, zz());
        let fam = ConsistentFamily::truncations(&nat, &a, &nat_windows(3)).unwrap();
        let mut parts: Vec<(Vec<Label>, IncMatrix<_>)> =
            fam.parts().map(|(w, m)| (w.members().to_vec(), m.clone())).collect();
        parts[2].1.set(0, 2, 5.into()).unwrap();
        match ConsistentFamily::new(&nat, parts).unwrap_err() {
            Error::Incompatible { window_a, window_b, row, col } => {
                assert_eq!((row.as_str(), col.as_str()), ("0", "2"));
                assert_eq!(window_a, "{0, 1, 2}");
                assert_eq!(window_b, "{0, 1, 2, 3}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn finite_carriers_work_too() {
        let c5 = FiniteProset::chain(5);
        let w = nat_windows(4);
        assert!(check_inverse_system(&c5, &w, &zz(), 5, 3).unwrap().passed());
    }

    #[test]
    fn approximants_stabilize() {
        let c5 = Arc::new(FiniteProset::chain(5));
        let ws: Vec<ConvexWindow> = (0..5).map(|k| c5.window(&(0..=k).collect::<Vec<_>>()).unwrap()).collect();
        let z = zz();
        let mut a = IncMatrix::zero(c5.clone(), z.clone());
        a.set(0, 1, 3.into()).unwrap();
        a.set(1, 3, 4.into()).unwrap();
        let r = approximant_net(&a, &ws).unwrap();
        assert_eq!(r.stabilizes_at, Some(3));
        assert!(r.coordinatewise_stable && r.stages.iter().all(|s| s.agrees_on_window));

        let nat = RuleProset::nat();
        let top = Arc::new(nat.restrict(&nat.standard_window(6)).unwrap());
        let e = IncMatrix::unit(top.clone(), z.clone(), 0, 3).unwrap();
        let ws: Vec<ConvexWindow> = nat_windows(6).iter().map(|w| nat.window(w).unwrap()).collect();
        let r = approximant_net(&e, &ws).unwrap();
        assert_eq!(r.first_seen[0].1, Some(3));

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (x, y) = (IncMatrix::random(top.clone(), z.clone(), &mut rng), IncMatrix::random(top, z, &mut rng));
        let xy = x.mul(&y).unwrap();
        for w in &ws {
            assert_eq!(xy.project(w).unwrap(), x.project(w).unwrap().mul(&y.project(w).unwrap()).unwrap());
        }
    }

    #[test]
    fn ideal_classes() {
        let z = zz();
        let nat = RuleProset::nat();
        let c3 = FiniteProset::chain(3);
        let fam = IdealDescriptor::Family(vec![SetRef::Finite(labels(&[0, 1])), SetRef::Finite(labels(&[2]))]);
        assert_eq!(ideal_window_class(&nat, &fam, &z, Topology::Discrete).unwrap(), WindowClass::OpenAndClosed);
        assert_eq!(ideal_window_class(&nat, &fam, &z, Topology::Nontrivial).unwrap(), WindowClass::ClosedNotOpen);
        let coef = IdealDescriptor::Coefficient(BigInt::from(2));
        assert_eq!(ideal_window_class(&nat, &coef, &z, Topology::Discrete).unwrap(), WindowClass::ClosedNotOpen);
        assert_eq!(ideal_window_class(&c3, &coef, &z, Topology::Discrete).unwrap(), WindowClass::OpenAndClosed);
        let unit = IdealDescriptor::Coefficient(BigInt::from(-1));
        assert_eq!(ideal_window_class(&nat, &unit, &z, Topology::Nontrivial).unwrap(), WindowClass::OpenAndClosed);
        let whole = IdealDescriptor::<BigInt>::Convex(SetRef::Whole);
        assert_eq!(ideal_window_class(&nat, &whole, &z, Topology::Discrete).unwrap(), WindowClass::ClosedNotOpen);
        let bad = IdealDescriptor::<BigInt>::Convex(SetRef::Finite(labels(&[0, 2])));
        assert_eq!(ideal_window_class(&nat, &bad, &z, Topology::Discrete).unwrap_err().code(), "invalid_descriptor");
        let div = RuleProset::new(Rule::Divisibility).unwrap();
        let iv = IdealDescriptor::<BigInt>::Interval(3.into(), 30.into());
        assert_eq!(ideal_window_class(&div, &iv, &z, Topology::Discrete).unwrap(), WindowClass::OpenAndClosed);
        let not_iv = IdealDescriptor::<BigInt>::Interval(2.into(), 3.into());
        assert!(ideal_window_class(&div, &not_iv, &z, Topology::Discrete).is_err());
    }
}
