//! Units of incidence rings: determinant profiles, inversion over the
//! condensation order, the normal subgroups `N^Λ_Λ'`, and derived series of
//! finite unit groups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::IncMatrix;
use crate::proset::{ConvexWindow, FiniteProset};
use crate::ring::{DenseSquare, Ring};

/// Default cap on the number of matrices [`enumerate_gl`] looks at.
pub const DEFAULT_GL_BUDGET: u64 = 1 << 20;

/// Largest carrier on which [`inverse`] cross-checks against the adjugate.
pub const ADJUGATE_CHECK_LIMIT: usize = 6;

fn require_commutative<R: Ring>(ring: &R) -> Result<()> {
    if ring.is_commutative() {
        Ok(())
    } else {
        Err(Error::NonCommutativeRing)
    }
}

/// `det(ψ_α(A))` for each requested window.
#[derive(Debug, Clone)]
pub struct DetProfile<R: Ring> {
    pub ring: R,
    pub values: Vec<(ConvexWindow, R::Elem)>,
}

impl<R: Ring> DetProfile<R> {
    pub fn all_units(&self) -> bool {
        self.values.iter().all(|(_, d)| self.ring.is_unit(d))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.values
                .iter()
                .map(|(w, d)| {
                    serde_json::json!({
                        "window": w.members().iter().map(crate::json::label_to_json).collect::<Vec<_>>(),
                        "det": self.ring.to_json(d),
                        "unit": self.ring.is_unit(d),
                    })
                })
                .collect(),
        )
    }
}

fn dense_det<R: Ring>(a: &IncMatrix<R>) -> Result<R::Elem> {
    a.to_dense(&a.proset().layer_order()).det(a.ring())
}

pub fn det_profile<R: Ring>(a: &IncMatrix<R>, windows: &[ConvexWindow]) -> Result<DetProfile<R>> {
    require_commutative(a.ring())?;
    let values = windows
        .iter()
        .map(|w| Ok((w.clone(), dense_det(&a.project(w)?)?)))
        .collect::<Result<_>>()?;
    Ok(DetProfile { ring: a.ring().clone(), values })
}

/// Equivalence classes listed along a linear extension of the class order.
fn ordered_classes(p: &FiniteProset) -> Vec<Vec<usize>> {
    p.class_layers().into_iter().flatten().collect()
}

fn block<R: Ring>(a: &IncMatrix<R>, rows: &[usize], cols: &[usize]) -> Vec<Vec<R::Elem>> {
    rows.iter().map(|&r| cols.iter().map(|&c| a.get(r, c)).collect()).collect()
}

/// The two invertibility criteria, which must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvertibilityRoutes {
    /// Every diagonal block on an equivalence class has unit determinant.
    pub by_class_blocks: bool,
    /// Every component, a maximal convex window, has unit determinant.
    pub by_windows: bool,
}

pub fn invertibility_routes<R: Ring>(a: &IncMatrix<R>) -> Result<InvertibilityRoutes> {
    let ring = a.ring();
    require_commutative(ring)?;
    let p = a.proset();
    let mut by_class_blocks = true;
    for c in p.classes() {
        let d = DenseSquare::from_rows(block(a, &c, &c))?.det(ring)?;
        by_class_blocks &= ring.is_unit(&d);
    }
    let mut by_windows = true;
    for c in p.components() {
        by_windows &= ring.is_unit(&dense_det(&a.project_indices(&c))?);
    }
    Ok(InvertibilityRoutes { by_class_blocks, by_windows })
}

pub fn is_invertible<R: Ring>(a: &IncMatrix<R>) -> Result<bool> {
    let r = invertibility_routes(a)?;
    debug_assert_eq!(r.by_class_blocks, r.by_windows);
    Ok(r.by_class_blocks)
}

fn rect_mul<R: Ring>(ring: &R, x: &[Vec<R::Elem>], y: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(y).fold(ring.zero(), |acc, (a, yr)| ring.add(&acc, &ring.mul(a, &yr[j]))))
                .collect()
        })
        .collect()
}

/// `A⁻¹` by block back-substitution along the class order. On carriers of
/// at most [`ADJUGATE_CHECK_LIMIT`] elements the result is compared with
/// [`inverse_by_adjugate`] in debug builds.
pub fn inverse<R: Ring>(a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    let ring = a.ring();
    require_commutative(ring)?;
    let p = a.proset();
    let classes = ordered_classes(p);
    let m = classes.len();
    let below = |i: usize, j: usize| p.leq(classes[i][0], classes[j][0]);
    let mut diag_inv = Vec::with_capacity(m);
    for c in &classes {
        let inv = DenseSquare::from_rows(block(a, c, c))?
            .inverse_dense(ring)
            .map_err(|_| Error::NotInvertible)?;
        diag_inv.push(inv.rows());
    }
    // x[i][j] is the (C_i, C_j) block of the inverse, for C_i ⪯ C_j.
    let mut x: Vec<Vec<Option<Vec<Vec<R::Elem>>>>> = vec![vec![None; m]; m];
    for j in 0..m {
        x[j][j] = Some(diag_inv[j].clone());
        for i in (0..j).rev() {
            if !below(i, j) {
                continue;
            }
            let (ri, cj) = (classes[i].len(), classes[j].len());
            let mut rhs = vec![vec![ring.zero(); cj]; ri];
            for k in i + 1..=j {
                if let (true, Some(xkj)) = (below(i, k), &x[k][j]) {
                    let t = rect_mul(ring, &block(a, &classes[i], &classes[k]), xkj);
                    for (r, row) in t.into_iter().enumerate() {
                        for (c, v) in row.into_iter().enumerate() {
                            rhs[r][c] = ring.sub(&rhs[r][c], &v);
                        }
                    }
                }
            }
            x[i][j] = Some(rect_mul(ring, &diag_inv[i], &rhs));
        }
    }
    let mut entries = vec![];
    for i in 0..m {
        for j in 0..m {
            if let Some(b) = &x[i][j] {
                for (r, row) in b.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        if !ring.is_zero(v) {
                            entries.push(((classes[i][r], classes[j][c]), v.clone()));
                        }
                    }
                }
            }
        }
    }
    let out = IncMatrix::from_entries(p.clone(), ring.clone(), entries)?;
    if cfg!(debug_assertions) && p.len() <= ADJUGATE_CHECK_LIMIT {
        debug_assert_eq!(inverse_by_adjugate(a)?, out);
    }
    Ok(out)
}

/// `det(A)⁻¹ adj(A)` on the dense layer-ordered array.
pub fn inverse_by_adjugate<R: Ring>(a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    let order = a.proset().layer_order();
    let inv = a
        .to_dense(&order)
        .inverse_dense(a.ring())
        .map_err(|e| if e.code() == "not_a_unit" { Error::NotInvertible } else { e })?;
    IncMatrix::from_dense(a.proset().clone(), a.ring().clone(), &order, &inv)
}

/// A seeded invertible matrix: each class block is a product of random
/// elementary and unit-diagonal matrices, every other comparable pair is
/// random.
pub fn random_invertible<R: Ring, G: rand::Rng + ?Sized>(p: Arc<FiniteProset>, ring: R, rng: &mut G) -> IncMatrix<R> {
    let mut out = IncMatrix::zero(p.clone(), ring.clone());
    for (a, b) in p.comparable_pairs() {
        if !p.equivalent(a, b) {
            out.set(a, b, ring.random(rng)).expect("comparable pair");
        }
    }
    for c in p.classes() {
        let k = c.len();
        let mut blk = DenseSquare::identity(&ring, k).rows();
        for _ in 0..2 * k * k {
            if k > 1 {
                let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
                if i != j {
                    let t = ring.random(rng);
                    for col in 0..k {
                        let v = ring.add(&blk[i][col], &ring.mul(&t, &blk[j][col]));
                        blk[i][col] = v;
                    }
                }
            }
        }
        for row in blk.iter_mut() {
            let u = (0..32).map(|_| ring.random(rng)).find(|u| ring.is_unit(u)).unwrap_or_else(|| ring.one());
            for v in row.iter_mut() {
                *v = ring.mul(&u, v);
            }
        }
        for (i, &a) in c.iter().enumerate() {
            for (j, &b) in c.iter().enumerate() {
                out.set(a, b, blk[i][j].clone()).expect("comparable pair");
            }
        }
    }
    out
}

/// Membership in `N^Λ_{Λi}`: the projection to every `Λi` is the identity.
pub fn normal_subgroup_test<R: Ring>(family: &[ConvexWindow], a: &IncMatrix<R>) -> Result<bool> {
    if !is_invertible(a)? {
        return Err(Error::NotInvertible);
    }
    for w in family {
        if !a.project(w)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite group of invertible incidence matrices, stored with a
/// generating set.
#[derive(Debug, Clone)]
pub struct MatrixGroup<R: Ring> {
    pub proset: Arc<FiniteProset>,
    pub ring: R,
    elements: Vec<IncMatrix<R>>,
    members: HashSet<IncMatrix<R>>,
    generators: Vec<IncMatrix<R>>,
}

impl<R: Ring> MatrixGroup<R> {
    /// The subgroup generated by `gens`, by breadth-first closure.
    pub fn generated(proset: Arc<FiniteProset>, ring: R, gens: Vec<IncMatrix<R>>) -> Result<Self> {
        let one = IncMatrix::identity(proset.clone(), ring.clone());
        let mut members = HashSet::from([one.clone()]);
        let mut elements = vec![one.clone()];
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.mul(g)?;
                if members.insert(y.clone()) {
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(MatrixGroup { proset, ring, elements, members, generators: gens })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IncMatrix<R>] {
        &self.elements
    }

    pub fn generators(&self) -> &[IncMatrix<R>] {
        &self.generators
    }

    pub fn contains(&self, a: &IncMatrix<R>) -> bool {
        self.members.contains(a)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// A short generating set chosen greedily from the elements.
    fn slim(&self) -> Result<Self> {
        let mut gens = vec![];
        let mut h = Self::generated(self.proset.clone(), self.ring.clone(), vec![])?;
        for x in &self.elements {
            if !h.contains(x) {
                gens.push(x.clone());
                h = Self::generated(self.proset.clone(), self.ring.clone(), gens.clone())?;
            }
        }
        Ok(h)
    }
}

/// `GL_Λ(P)` for a finite ring, by enumerating all matrices.
pub fn enumerate_gl<R: Ring>(p: Arc<FiniteProset>, ring: R, budget: u64) -> Result<MatrixGroup<R>> {
    require_commutative(&ring)?;
    let all = IncMatrix::enumerate_all(p.clone(), ring.clone(), budget)?;
    let mut units = vec![];
    for a in all {
        if is_invertible(&a)? {
            units.push(a);
        }
    }
    let members: HashSet<IncMatrix<R>> = units.iter().cloned().collect();
    for a in &units {
        if !members.contains(&inverse(a)?) {
            return Err(Error::NotInvertible);
        }
    }
    let full = MatrixGroup { proset: p, ring, elements: units, members, generators: vec![] };
    let g = full.slim()?;
    debug_assert_eq!(g.order(), full.order());
    Ok(MatrixGroup { generators: g.generators, ..full })
}

struct Inverses<R: Ring>(HashMap<IncMatrix<R>, IncMatrix<R>>);

impl<R: Ring> Inverses<R> {
    fn of(&mut self, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
        if let Some(x) = self.0.get(a) {
            return Ok(x.clone());
        }
        let x = inverse(a)?;
        self.0.insert(a.clone(), x.clone());
        Ok(x)
    }
}

/// `[G, G]`: the normal closure in `G` of the commutators of its generators.
pub fn commutator_subgroup<R: Ring>(g: &MatrixGroup<R>) -> Result<MatrixGroup<R>> {
    let mut inv = Inverses(HashMap::new());
    commutator_with(g, &mut inv)
}

fn commutator_with<R: Ring>(g: &MatrixGroup<R>, inv: &mut Inverses<R>) -> Result<MatrixGroup<R>> {
    let mut gens = vec![];
    for a in g.generators() {
        for b in g.generators() {
            let c = inv.of(a)?.mul(&inv.of(b)?)?.mul(a)?.mul(b)?;
            if !c.is_identity() && !gens.contains(&c) {
                gens.push(c);
            }
        }
    }
    let mut n = MatrixGroup::generated(g.proset.clone(), g.ring.clone(), gens)?.slim()?;
    loop {
        let mut grown = false;
        for x in g.generators() {
            let xi = inv.of(x)?;
            for y in n.generators().to_vec() {
                let c = x.mul(&y)?.mul(&xi)?;
                if !n.contains(&c) {
                    let mut gens = n.generators().to_vec();
                    gens.push(c);
                    n = MatrixGroup::generated(g.proset.clone(), g.ring.clone(), gens)?;
                    grown = true;
                }
            }
        }
        if !grown {
            return Ok(n);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSeries {
    /// `|G|, |G'|, |G''|, ...` until the trivial group or a repeat.
    pub orders: Vec<usize>,
    pub solvable: bool,
    /// Order of the nontrivial perfect group the series stalls at.
    pub perfect_order: Option<usize>,
}

impl DerivedSeries {
    /// Commutator steps taken, the derived length when solvable.
    pub fn steps(&self) -> usize {
        self.orders.len() - 1
    }
}

pub fn derived_series<R: Ring>(g: &MatrixGroup<R>) -> Result<DerivedSeries> {
    let mut inv = Inverses(HashMap::new());
    let mut orders = vec![g.order()];
    let mut cur = g.clone();
    while !cur.is_trivial() {
        let next = commutator_with(&cur, &mut inv)?;
        if next.order() == cur.order() {
            return Ok(DerivedSeries { orders, solvable: false, perfect_order: Some(cur.order()) });
        }
        orders.push(next.order());
        cur = next.slim()?;
    }
    Ok(DerivedSeries { orders, solvable: true, perfect_order: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "criterion")]
pub enum Criterion {
    /// Poset with `layers` condensation layers: solvable of derived length
    /// at most `layers`.
    BoundedPoset { layers: usize },
    /// Non-singleton equivalence class over a field with at least four
    /// elements: contains a copy of `SL_2`, not solvable.
    LargeFieldClass { class_size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvabilityReport {
    pub solvable: bool,
    /// The structural criterion that decided the verdict, if one applies.
    pub criterion: Option<Criterion>,
    /// Derived series of the enumerated group, when it fit the budget.
    pub certificate: Option<DerivedSeries>,
}

/// Decides solvability of `GL_Λ(P)` from the poset and field-size criteria,
/// attaching an enumeration certificate when the carrier fits `budget`.
pub fn solvability_report<R: Ring>(p: Arc<FiniteProset>, ring: R, budget: u64) -> Result<SolvabilityReport> {
    require_commutative(&ring)?;
    let criterion = if p.is_poset() {
        Some(Criterion::BoundedPoset { layers: p.height() })
    } else if ring.is_field() && ring.cardinality().is_none_or(|q| q >= 4) {
        let class_size = p.classes().iter().map(Vec::len).max().unwrap_or(0);
        Some(Criterion::LargeFieldClass { class_size })
    } else {
        None
    };
    let certificate = match enumerate_gl(p, ring, budget) {
        Ok(g) => Some(derived_series(&g)?),
        Err(Error::BudgetExceeded(_) | Error::Undecided(_)) => None,
        Err(e) => return Err(e),
    };
    let solvable = match (criterion, &certificate) {
        (_, Some(c)) => c.solvable,
        (Some(Criterion::BoundedPoset { .. }), None) => true,
        (Some(Criterion::LargeFieldClass { .. }), None) => false,
        (None, None) => {
            return Err(Error::Undecided(
                "no structural criterion applies and the group is too large to enumerate".into(),
            ))
        }
    };
    if let (Some(c), Some(cert)) = (criterion, &certificate) {
        match c {
            Criterion::BoundedPoset { layers } => debug_assert!(cert.solvable && cert.steps() <= layers),
            Criterion::LargeFieldClass { .. } => debug_assert!(!cert.solvable),
        }
    }
    Ok(SolvabilityReport { solvable, criterion, certificate })
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::proset::{labels, prosets_up_to};
    use crate::ring::{GaloisField, Integers, Zmod};

    fn arc(p: FiniteProset) -> Arc<FiniteProset> {
        Arc::new(p)
    }

    fn zz() -> Integers<BigInt> {
        Integers::new()
    }

    fn ints(p: &Arc<FiniteProset>, v: &[i64]) -> IncMatrix<Integers<BigInt>> {
        let coords: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
        IncMatrix::from_coords(p.clone(), zz(), &coords).unwrap()
    }

    #[test]
    fn det_profiles() {
        let c2 = arc(FiniteProset::chain(2));
        let whole = c2.whole();
        let one = IncMatrix::identity(c2.clone(), zz());
        let prof = det_profile(&one, &[whole.clone(), c2.window(&[0]).unwrap()]).unwrap();
        assert!(prof.values.iter().all(|(_, d)| *d == BigInt::from(1)));
        let a = ints(&c2, &[1, 5, -1]);
        let prof = det_profile(&a, &[whole.clone(), c2.window(&[0]).unwrap(), c2.window(&[1]).unwrap()]).unwrap();
        let dets: Vec<i64> = prof.values.iter().map(|(_, d)| i64::try_from(d).unwrap()).collect();
        assert_eq!(dets, vec![-1, 1, -1]);
        assert!(prof.all_units());
        let pt = arc(FiniteProset::point());
        let two = IncMatrix::scalar(pt.clone(), zz(), &2.into());
        assert!(!det_profile(&two, &[pt.whole()]).unwrap().all_units());
        assert!(!is_invertible(&two).unwrap());
    }

    #[test]
    fn invertibility_examples() {
        let c3 = arc(FiniteProset::chain(3));
        // comparable pairs of chain(3): (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
        assert!(is_invertible(&ints(&c3, &[1, 7, -3, 1, 4, -1])).unwrap());
        let f2 = Zmod::<u64>::prime_field(2);
        let full = arc(FiniteProset::full(2));
        let ones = IncMatrix::from_coords(full, f2, &[1, 1, 1, 1]).unwrap();
        assert!(!is_invertible(&ones).unwrap());
        for a22 in [-1, 1] {
            let n = ints(&c3, &[1, 0, 9, 1, -4, a22]);
            assert!(is_invertible(&n).unwrap());
            assert!(normal_subgroup_test(&[c3.window(&[0, 1]).unwrap()], &n).unwrap());
        }
        let bad = ints(&c3, &[1, 0, 9, 1, -4, 2]);
        assert_eq!(normal_subgroup_test(&[c3.window(&[0, 1]).unwrap()], &bad).unwrap_err().code(), "not_invertible");
    }

    #[test]
    fn inverse_examples() {
        let c2 = arc(FiniteProset::chain(2));
        assert_eq!(inverse(&ints(&c2, &[1, 1, 1])).unwrap(), ints(&c2, &[1, -1, 1]));
        // unipotent all-ones on chain(4): inverse is 1 on the diagonal, -1 just above it
        let c4 = arc(FiniteProset::chain(4));
        let u = ints(&c4, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(inverse(&u).unwrap(), ints(&c4, &[1, -1, 0, 0, 1, -1, 0, 1, -1, 1]));
        assert_eq!(inverse_by_adjugate(&u).unwrap(), inverse(&u).unwrap());
        let two = IncMatrix::scalar(c2.clone(), zz(), &2.into());
        assert_eq!(inverse(&two).unwrap_err().code(), "not_invertible");
    }

    #[test]
    fn block_inverse_over_f5() {
        // full(2) block below a chain tail
        let p = arc(
            FiniteProset::new(
                labels(&["a", "b", "c", "d"]),
                &[("a".into(), "b".into()), ("b".into(), "a".into()), ("b".into(), "c".into()), ("c".into(), "d".into())],
            )
            .unwrap(),
        );
        let f5 = Zmod::<u64>::prime_field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_invertible(p.clone(), f5.clone(), &mut rng);
            let x = inverse(&a).unwrap();
            assert!(a.mul(&x).unwrap().is_identity() && x.mul(&a).unwrap().is_identity());
            assert_eq!(x, inverse_by_adjugate(&a).unwrap());
        }
    }

    #[test]
    fn routes_agree_with_enumeration() {
        let f2 = Zmod::<u64>::prime_field(2);
        let f3 = Zmod::<u64>::prime_field(3);
        for p in prosets_up_to(3).into_iter().map(arc) {
            for a in IncMatrix::enumerate_all(p.clone(), f2.clone(), 1 << 12).unwrap() {
                let r = invertibility_routes(&a).unwrap();
                assert_eq!(r.by_class_blocks, r.by_windows);
            }
            let g = enumerate_gl(p.clone(), f3.clone(), 1 << 16).unwrap();
            assert!(g.elements().iter().all(|a| a.mul(&inverse(a).unwrap()).unwrap().is_identity()));
        }
    }

    #[test]
    fn group_orders() {
        let f2 = Zmod::<u64>::prime_field(2);
        let f3 = Zmod::<u64>::prime_field(3);
        // F2 has one unit, so only the upper entry is free
        assert_eq!(enumerate_gl(arc(FiniteProset::chain(2)), f2.clone(), 1 << 10).unwrap().order(), 2);
        assert_eq!(enumerate_gl(arc(FiniteProset::chain(2)), f3.clone(), 1 << 10).unwrap().order(), 12);
        assert_eq!(enumerate_gl(arc(FiniteProset::full(2)), f2.clone(), 1 << 10).unwrap().order(), 6);
        let d = arc(FiniteProset::discrete(labels(&["a", "b"])).unwrap());
        let g = enumerate_gl(d, f3.clone(), 1 << 10).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(derived_series(&g).unwrap().orders, vec![4, 1]);
        assert_eq!(
            enumerate_gl(arc(FiniteProset::chain(5)), f2, 1 << 10).unwrap_err().code(),
            "budget_exceeded"
        );
    }

    #[test]
    fn derived_series_examples() {
        let f2 = Zmod::<u64>::prime_field(2);
        let g = enumerate_gl(arc(FiniteProset::chain(3)), f2.clone(), 1 << 10).unwrap();
        assert_eq!(g.order(), 8);
        let s = derived_series(&g).unwrap();
        assert!(s.solvable && s.steps() <= 3);
        assert_eq!(s.orders, vec![8, 2, 1]);

        let f4 = GaloisField::new(4).unwrap();
        let g = enumerate_gl(arc(FiniteProset::full(2)), f4, 1 << 10).unwrap();
        assert_eq!(g.order(), 180);
        let s = derived_series(&g).unwrap();
        assert_eq!((s.solvable, s.perfect_order), (false, Some(60)));

        let s = derived_series(&enumerate_gl(arc(FiniteProset::full(2)), f2, 1 << 10).unwrap()).unwrap();
        assert_eq!(s.orders, vec![6, 3, 1]);
    }

    #[test]
    fn solvability_verdicts() {
        let f2 = Zmod::<u64>::prime_field(2);
        let r = solvability_report(arc(FiniteProset::chain(3)), f2.clone(), 1 << 10).unwrap();
        assert!(r.solvable && r.certificate.is_some());
        assert_eq!(r.criterion, Some(Criterion::BoundedPoset { layers: 3 }));

        let r = solvability_report(arc(FiniteProset::full(2)), GaloisField::new(4).unwrap(), 1 << 10).unwrap();
        assert!(!r.solvable);
        assert_eq!(r.certificate.unwrap().perfect_order, Some(60));

        let r = solvability_report(arc(FiniteProset::full(2)), f2, 1 << 10).unwrap();
        assert_eq!(r.criterion, None);
        assert!(r.solvable);

        assert_eq!(solvability_report(arc(FiniteProset::full(2)), zz(), 1 << 10).unwrap_err().code(), "undecided");
        let r = solvability_report(arc(FiniteProset::chain(3)), zz(), 1 << 10).unwrap();
        assert!(r.solvable && r.certificate.is_none());
    }

    #[test]
    fn posets_up_to_three_are_solvable() {
        let f2 = Zmod::<u64>::prime_field(2);
        let f3 = Zmod::<u64>::prime_field(3);
        for p in prosets_up_to(3).into_iter().filter(FiniteProset::is_poset).map(arc) {
            for s in [
                derived_series(&enumerate_gl(p.clone(), f2.clone(), 1 << 12).unwrap()).unwrap(),
                derived_series(&enumerate_gl(p.clone(), f3.clone(), 1 << 12).unwrap()).unwrap(),
            ] {
                assert!(s.solvable && s.steps() <= p.height(), "{p:?}: {s:?}");
            }
        }
    }

    #[test]
    fn normal_subgroup_is_the_projection_kernel() {
        let f2 = Zmod::<u64>::prime_field(2);
        let f3 = Zmod::<u64>::prime_field(3);
        let p = arc(FiniteProset::arrow(1, 2));
        for ring in [f2, f3] {
            let g = enumerate_gl(p.clone(), ring.clone(), 1 << 12).unwrap();
            for idx in [vec![0], vec![0, 1]].into_iter().filter(|i| p.is_convex(i)) {
                let w = p.window(&idx).unwrap();
                let sub = Arc::new(p.restrict(&w).unwrap());
                let target = enumerate_gl(sub, ring.clone(), 1 << 12).unwrap();
                let images: HashSet<_> = g.elements().iter().map(|a| a.project(&w).unwrap()).collect();
                assert_eq!(images.len(), target.order());
                let kernel = g.elements().iter().filter(|a| a.project(&w).unwrap().is_identity()).count();
                let members = g.elements().iter().filter(|a| normal_subgroup_test(&[w.clone()], a).unwrap()).count();
                assert_eq!(kernel, members);
                assert_eq!(kernel * target.order(), g.order());
            }
        }
    }

    #[test]
    fn conjugation_preserves_membership() {
        let c3 = arc(FiniteProset::chain(3));
        let w = c3.window(&[0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z7 = Zmod::<u64>::prime_field(7);
        for _ in 0..100 {
            let g = random_invertible(c3.clone(), z7.clone(), &mut rng);
            let mut n = random_invertible(c3.clone(), z7.clone(), &mut rng);
            for (a, b) in [(0, 0), (1, 1)] {
                n.set(a, b, 1).unwrap();
            }
            n.set(0, 1, 0).unwrap();
            assert!(normal_subgroup_test(&[w.clone()], &n).unwrap());
            let c = g.mul(&n).unwrap().mul(&inverse(&g).unwrap()).unwrap();
            assert!(normal_subgroup_test(&[w.clone()], &c).unwrap());
        }
    }

    #[test]
    fn det_profile_is_multiplicative() {
        let p = arc(FiniteProset::arrow(2, 2));
        let windows: Vec<ConvexWindow> = p.components().iter().map(|c| p.window(c).unwrap()).collect();
        let z6 = Zmod::<u64>::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let a = IncMatrix::random(p.clone(), z6.clone(), &mut rng);
            let b = IncMatrix::random(p.clone(), z6.clone(), &mut rng);
            let (da, db) = (det_profile(&a, &windows).unwrap(), det_profile(&b, &windows).unwrap());
            let dab = det_profile(&a.mul(&b).unwrap(), &windows).unwrap();
            for i in 0..windows.len() {
                assert_eq!(dab.values[i].1, z6.mul(&da.values[i].1, &db.values[i].1));
            }
        }
    }
}
