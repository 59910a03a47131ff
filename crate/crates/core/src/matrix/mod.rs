//! The incidence ring `M_Λ(P)` of a finite proset: sparse matrices supported
//! on comparable pairs with the interval convolution product.

mod ideal;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

pub use ideal::{IdealDescriptor, SetRef};

use crate::error::{Error, Result};
use crate::proset::{ConvexWindow, FiniteProset, Label};
use crate::ring::{DenseSquare, Ring};

/// An element of `M_Λ(P)`.
///
/// Entries are keyed by element indices of the carrier proset. Zero
/// coefficients are never stored, so structural equality is ring equality.
#[derive(Clone)]
pub struct IncMatrix<R: Ring> {
    proset: Arc<FiniteProset>,
    ring: R,
    entries: BTreeMap<(usize, usize), R::Elem>,
}

impl<R: Ring> PartialEq for IncMatrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.same_carrier(other)
    }
}

impl<R: Ring> Eq for IncMatrix<R> {}

impl<R: Ring> Hash for IncMatrix<R> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl<R: Ring> fmt::Debug for IncMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .entries
            .iter()
            .map(|(&(a, b), v)| {
                format!("({},{}):{}", self.proset.label(a), self.proset.label(b), self.ring.display(v))
            })
            .collect();
        write!(f, "IncMatrix[{}]{{{}}}", self.ring.token(), items.join(", "))
    }
}

impl<R: Ring> IncMatrix<R> {
    pub fn zero(proset: Arc<FiniteProset>, ring: R) -> Self {
        IncMatrix { proset, ring, entries: BTreeMap::new() }
    }

    /// `p^Λ`: the scalar `p` on every diagonal entry.
    pub fn scalar(proset: Arc<FiniteProset>, ring: R, p: &R::Elem) -> Self {
        let n = proset.len();
        let mut m = Self::zero(proset, ring);
        for s in 0..n {
            m.put(s, s, p.clone());
        }
        m
    }

    /// `1^Λ`.
    pub fn identity(proset: Arc<FiniteProset>, ring: R) -> Self {
        let one = ring.one();
        Self::scalar(proset, ring, &one)
    }

    /// `1^S`: ones on the diagonal entries of `set`.
    pub fn indicator(proset: Arc<FiniteProset>, ring: R, set: &[usize]) -> Self {
        let one = ring.one();
        let mut m = Self::zero(proset, ring);
        for &s in set {
            m.put(s, s, one.clone());
        }
        m
    }

    /// `e^(a,b)`: a single one at `(a, b)`.
    pub fn unit(proset: Arc<FiniteProset>, ring: R, a: usize, b: usize) -> Result<Self> {
        let one = ring.one();
        let mut m = Self::zero(proset, ring);
        m.set(a, b, one)?;
        Ok(m)
    }

    /// Builds a matrix from index-keyed entries; repeated keys are summed.
    pub fn from_entries(
        proset: Arc<FiniteProset>,
        ring: R,
        entries: impl IntoIterator<Item = ((usize, usize), R::Elem)>,
    ) -> Result<Self> {
        let mut m = Self::zero(proset, ring);
        for ((a, b), v) in entries {
            m.check_pair(a, b)?;
            let cur = m.get(a, b);
            let next = m.ring.add(&cur, &v);
            m.put(a, b, next);
        }
        Ok(m)
    }

    /// Label-keyed variant of [`IncMatrix::from_entries`].
    pub fn from_labeled(
        proset: Arc<FiniteProset>,
        ring: R,
        entries: impl IntoIterator<Item = (Label, Label, R::Elem)>,
    ) -> Result<Self> {
        let mut keyed = vec![];
        for (a, b, v) in entries {
            keyed.push(((proset.index_of(&a)?, proset.index_of(&b)?), v));
        }
        Self::from_entries(proset, ring, keyed)
    }

    /// Values listed in the order of [`FiniteProset::comparable_pairs`].
    pub fn from_coords(proset: Arc<FiniteProset>, ring: R, coords: &[R::Elem]) -> Result<Self> {
        let pairs = proset.comparable_pairs();
        if pairs.len() != coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} comparable pairs",
                coords.len(),
                pairs.len()
            )));
        }
        let mut m = Self::zero(proset, ring);
        for ((a, b), v) in pairs.into_iter().zip(coords) {
            m.put(a, b, v.clone());
        }
        Ok(m)
    }

    /// Every value on every comparable pair drawn from `ring.random`.
    pub fn random<G: Rng + ?Sized>(proset: Arc<FiniteProset>, ring: R, rng: &mut G) -> Self {
        let pairs = proset.comparable_pairs();
        let mut m = Self::zero(proset, ring);
        for (a, b) in pairs {
            let v = m.ring.random(rng);
            m.put(a, b, v);
        }
        m
    }

    /// Every matrix over a finite ring, in lexicographic coordinate order.
    pub fn enumerate_all(proset: Arc<FiniteProset>, ring: R, budget: u64) -> Result<Vec<Self>> {
        let elems = ring
            .elements()
            .ok_or_else(|| Error::Undecided(format!("{} is infinite", ring.token())))?;
        let pairs = proset.comparable_pairs();
        let total = (elems.len() as u64)
            .checked_pow(pairs.len() as u32)
            .filter(|&t| t <= budget)
            .ok_or(Error::BudgetExceeded(budget))?;
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; pairs.len()];
        for _ in 0..total {
            let coords: Vec<R::Elem> = digits.iter().map(|&d| elems[d].clone()).collect();
            out.push(Self::from_coords(proset.clone(), ring.clone(), &coords)?);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < elems.len() {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    pub fn proset(&self) -> &Arc<FiniteProset> {
        &self.proset
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Nonzero entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &R::Elem)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.len() == self.proset.len()
            && self.entries.iter().all(|(&(a, b), v)| a == b && self.ring.is_one(v))
    }

    pub fn get(&self, a: usize, b: usize) -> R::Elem {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn get_labeled(&self, a: &Label, b: &Label) -> Result<R::Elem> {
        Ok(self.get(self.proset.index_of(a)?, self.proset.index_of(b)?))
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        let n = self.proset.len();
        if a >= n || b >= n {
            return Err(Error::UnknownElement(format!("#{}", a.max(b))));
        }
        if !self.proset.leq(a, b) {
            return Err(Error::IncomparablePair(
                self.proset.label(a).to_string(),
                self.proset.label(b).to_string(),
            ));
        }
        Ok(())
    }

    pub fn set(&mut self, a: usize, b: usize, v: R::Elem) -> Result<()> {
        self.check_pair(a, b)?;
        self.put(a, b, v);
        Ok(())
    }

    fn put(&mut self, a: usize, b: usize, v: R::Elem) {
        if self.ring.is_zero(&v) {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), v);
        }
    }

    /// Values on all comparable pairs, zeros included.
    pub fn coords(&self) -> Vec<R::Elem> {
        self.proset.comparable_pairs().into_iter().map(|(a, b)| self.get(a, b)).collect()
    }

    pub fn same_carrier(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.proset, &other.proset) || *self.proset == *other.proset)
            && self.ring == other.ring
    }

    fn check_carrier(&self, other: &Self) -> Result<()> {
        if !self.same_carrier(other) {
            return Err(Error::MismatchedCarrier(format!(
                "{} elements over {} vs {} elements over {}",
                self.proset.len(),
                self.ring.token(),
                other.proset.len(),
                other.ring.token()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_carrier(other)?;
        let mut out = self.clone();
        for (&(a, b), v) in &other.entries {
            let next = out.ring.add(&out.get(a, b), v);
            out.put(a, b, next);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = self.ring.neg(v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.proset.clone(), self.ring.clone());
        for (&(a, b), v) in &self.entries {
            out.put(a, b, self.ring.mul(c, v));
        }
        out
    }

    /// Convolution product `(AB)_{s,u} = Σ_{t ∈ [s,u]} A_{s,t} B_{t,u}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_carrier(other)?;
        let ring = &self.ring;
        let mut acc: BTreeMap<(usize, usize), R::Elem> = BTreeMap::new();
        for (&(s, t), a) in &self.entries {
            for (&(_, u), b) in other.entries.range((t, 0)..(t + 1, 0)) {
                let term = ring.mul(a, b);
                let slot = acc.entry((s, u)).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &term);
            }
        }
        acc.retain(|_, v| !ring.is_zero(v));
        Ok(IncMatrix { proset: self.proset.clone(), ring: ring.clone(), entries: acc })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut out = Self::identity(self.proset.clone(), self.ring.clone());
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base).expect("same carrier");
            }
            base = base.mul(&base).expect("same carrier");
            e >>= 1;
        }
        out
    }

    /// `ψ_α`: restriction to a convex window, as a matrix on the induced
    /// proset of the window.
    pub fn project(&self, window: &ConvexWindow) -> Result<Self> {
        let idx = self.proset.indices_of(window.members())?;
        if !self.proset.is_convex(&idx) {
            return Err(Error::WindowNotConvex(window.to_string()));
        }
        Ok(self.project_indices(&idx))
    }

    /// Restriction to `idx` without the convexity check. The result is a
    /// ring homomorphism only when `idx` is convex.
    pub fn project_indices(&self, idx: &[usize]) -> Self {
        let sub = Arc::new(self.proset.induced(idx));
        let mut pos = vec![usize::MAX; self.proset.len()];
        for (i, &s) in idx.iter().enumerate() {
            pos[s] = i;
        }
        let mut out = Self::zero(sub, self.ring.clone());
        for (&(a, b), v) in &self.entries {
            if pos[a] != usize::MAX && pos[b] != usize::MAX {
                out.entries.insert((pos[a], pos[b]), v.clone());
            }
        }
        out
    }

    /// `A^(α)`: entries with both indices in the window, on the same carrier.
    pub fn truncate(&self, window: &ConvexWindow) -> Result<Self> {
        let mut inside = vec![false; self.proset.len()];
        for s in self.proset.indices_of(window.members())? {
            inside[s] = true;
        }
        let mut out = Self::zero(self.proset.clone(), self.ring.clone());
        for (&(a, b), v) in &self.entries {
            if inside[a] && inside[b] {
                out.entries.insert((a, b), v.clone());
            }
        }
        Ok(out)
    }

    /// Copies the entries of a matrix on a sub-proset (matched by label)
    /// into a matrix on this carrier, zero elsewhere.
    pub fn extend_from(proset: Arc<FiniteProset>, sub: &Self) -> Result<Self> {
        let mut out = Self::zero(proset, sub.ring.clone());
        for (&(a, b), v) in &sub.entries {
            let ia = out.proset.index_of(sub.proset.label(a))?;
            let ib = out.proset.index_of(sub.proset.label(b))?;
            out.set(ia, ib, v.clone())?;
        }
        Ok(out)
    }

    /// Dense array with rows and columns in the given element order.
    pub fn to_dense(&self, order: &[usize]) -> DenseSquare<R::Elem> {
        DenseSquare::from_fn(order.len(), |i, j| self.get(order[i], order[j]))
    }

    /// Inverse of [`IncMatrix::to_dense`]; fails if the array has support
    /// off the incidence pattern.
    pub fn from_dense(
        proset: Arc<FiniteProset>,
        ring: R,
        order: &[usize],
        dense: &DenseSquare<R::Elem>,
    ) -> Result<Self> {
        if dense.dim() != order.len() || order.len() != proset.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} array for {} elements",
                dense.dim(),
                dense.dim(),
                proset.len()
            )));
        }
        let mut out = Self::zero(proset, ring);
        for i in 0..order.len() {
            for j in 0..order.len() {
                let v = dense.get(i, j);
                if !out.ring.is_zero(v) {
                    out.set(order[i], order[j], v.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// One matrix per component of the carrier, on the induced component
    /// proset: the isomorphism `M_{⊔Λi} ≅ ∏ M_{Λi}`.
    pub fn decompose_components(&self) -> Vec<Self> {
        self.proset
            .components()
            .iter()
            .map(|c| self.project_indices(c))
            .collect()
    }

    /// Inverse of [`IncMatrix::decompose_components`].
    pub fn reassemble(proset: Arc<FiniteProset>, ring: R, parts: &[Self]) -> Result<Self> {
        let mut out = Self::zero(proset, ring);
        for part in parts {
            for (&(a, b), v) in &part.entries {
                let ia = out.proset.index_of(part.proset.label(a))?;
                let ib = out.proset.index_of(part.proset.label(b))?;
                out.set(ia, ib, v.clone())?;
            }
        }
        Ok(out)
    }

    /// `A = Σ c · e^(a,b)`, one term per nonzero entry.
    pub fn generator_expand(&self) -> Vec<(R::Elem, (usize, usize))> {
        self.entries.iter().map(|(&k, v)| (v.clone(), k)).collect()
    }

    pub fn from_terms(
        proset: Arc<FiniteProset>,
        ring: R,
        terms: &[(R::Elem, (usize, usize))],
    ) -> Result<Self> {
        let mut out = Self::zero(proset.clone(), ring.clone());
        for (c, (a, b)) in terms {
            let e = Self::unit(proset.clone(), ring.clone(), *a, *b)?;
            out = out.add(&e.scale(c))?;
        }
        Ok(out)
    }
}
