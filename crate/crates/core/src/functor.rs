//! The contravariant incidence functor: `M[f]: M_Λ2(P) → M_Λ1(P)` for an FCC
//! map `f: Λ1 → Λ2`, with homomorphism, functoriality and equalizer checks.
//!
//! `(M[f]A)_(t1,t2) = A_(f(t1),f(t2))` when `t1 = t2` or `f(t1) ≠ f(t2)`,
//! and `0` otherwise. On an embedded component this is the plain pullback;
//! a constant component receives the diagonal value only.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::colimits::{same_proset, ProsetMap};
use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::matrix::IncMatrix;
use crate::proset::{ConvexWindow, FiniteProset};
use crate::ring::Ring;

/// Largest input set [`verify_hom`] and the other checks enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Largest number of input pairs [`verify_hom`] tries one by one.
pub const PAIRWISE_LIMIT: u64 = 1 << 8;

fn check_carrier<R: Ring>(f: &ProsetMap, a: &IncMatrix<R>) -> Result<()> {
    if same_proset(f.target(), a.proset()) {
        Ok(())
    } else {
        Err(Error::MismatchedCarrier("matrix does not live on the target of the map".into()))
    }
}

/// The literal entrywise pullback `A_(f(t1),f(t2))` on every comparable pair
/// of the source, for any order-preserving map.
pub fn naive_pullback<R: Ring>(f: &ProsetMap, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    check_carrier(f, a)?;
    let src = f.source();
    let entries = src
        .comparable_pairs()
        .into_iter()
        .map(|(t1, t2)| ((t1, t2), a.get(f.apply(t1), f.apply(t2))));
    IncMatrix::from_entries(src.clone(), a.ring().clone(), entries.collect::<Vec<_>>())
}

/// The generator rule applied to any order-preserving map, without checking
/// FCC: `e^(s,s)` goes to `1^(f⁻¹(s))` and `e^(s1,s2)`, `s1 ≠ s2`, to the sum
/// of `e^(t1,t2)` over `t1 ⪯ t2` with `f(t1) = s1`, `f(t2) = s2`.
pub fn generator_pullback<R: Ring>(f: &ProsetMap, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    check_carrier(f, a)?;
    let src = f.source();
    let ring = a.ring().clone();
    let mut out = IncMatrix::zero(src.clone(), ring.clone());
    for (c, (s1, s2)) in a.generator_expand() {
        let image: Vec<(usize, usize)> = if s1 == s2 {
            (0..src.len()).filter(|&t| f.apply(t) == s1).map(|t| (t, t)).collect()
        } else {
            src.comparable_pairs()
                .into_iter()
                .filter(|&(t1, t2)| f.apply(t1) == s1 && f.apply(t2) == s2)
                .collect()
        };
        let terms: Vec<(R::Elem, (usize, usize))> = image.into_iter().map(|k| (c.clone(), k)).collect();
        out = out.add(&IncMatrix::from_terms(src.clone(), ring.clone(), &terms)?)?;
    }
    Ok(out)
}

/// `M[f](A)`. Refuses maps that are not FCC.
pub fn apply_functor<R: Ring>(f: &ProsetMap, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    f.require_fcc()?;
    check_carrier(f, a)?;
    let src = f.source();
    let mut entries = vec![];
    for (t1, t2) in src.comparable_pairs() {
        let (s1, s2) = (f.apply(t1), f.apply(t2));
        if t1 == t2 || s1 != s2 {
            let v = a.get(s1, s2);
            if !a.ring().is_zero(&v) {
                entries.push(((t1, t2), v));
            }
        }
    }
    IncMatrix::from_entries(src.clone(), a.ring().clone(), entries)
}

/// `M[f](A)` computed through [`generator_pullback`].
pub fn functor_by_generators<R: Ring>(f: &ProsetMap, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
    f.require_fcc()?;
    generator_pullback(f, a)
}

/// Every comparable pair `s1 ⪯ s2`, `s1 ≠ s2`, of the target has a preimage
/// pair `t1 ⪯ t2`. Together with surjectivity this is what makes `M[f]`
/// injective.
pub fn covers_pairs(f: &ProsetMap) -> bool {
    let src = f.source();
    let hit: HashSet<(usize, usize)> = src
        .comparable_pairs()
        .into_iter()
        .map(|(t1, t2)| (f.apply(t1), f.apply(t2)))
        .collect();
    f.target().comparable_pairs().into_iter().all(|k| hit.contains(&k))
}

type Action<'a, R> = Box<dyn Fn(&IncMatrix<R>) -> Result<IncMatrix<R>> + Send + Sync + 'a>;

/// A map between incidence rings over the same coefficient ring.
pub struct RingHom<'a, R: Ring> {
    pub name: String,
    pub domain: Arc<FiniteProset>,
    pub codomain: Arc<FiniteProset>,
    pub ring: R,
    action: Action<'a, R>,
}

impl<'a, R: Ring> RingHom<'a, R> {
    pub fn new(
        name: impl Into<String>,
        domain: Arc<FiniteProset>,
        codomain: Arc<FiniteProset>,
        ring: R,
        action: impl Fn(&IncMatrix<R>) -> Result<IncMatrix<R>> + Send + Sync + 'a,
    ) -> Self {
        RingHom { name: name.into(), domain, codomain, ring, action: Box::new(action) }
    }

    /// `M[f]`; fails with [`Error::NotFcc`] for maps outside the category.
    pub fn functor(f: &'a ProsetMap, ring: R) -> Result<Self> {
        f.require_fcc()?;
        Ok(Self::new("M[f]", f.target().clone(), f.source().clone(), ring, move |a| apply_functor(f, a)))
    }

    pub fn naive_pullback(f: &'a ProsetMap, ring: R) -> Self {
        Self::new("naive pullback", f.target().clone(), f.source().clone(), ring, move |a| naive_pullback(f, a))
    }

    /// `ψ_α`, restriction to a window.
    pub fn projection(p: Arc<FiniteProset>, window: ConvexWindow, ring: R) -> Result<Self> {
        let codomain = Arc::new(p.restrict(&window)?);
        p.window_of(window.members())?;
        Ok(Self::new("projection", p, codomain, ring, move |a| a.project(&window)))
    }

    pub fn apply(&self, a: &IncMatrix<R>) -> Result<IncMatrix<R>> {
        (self.action)(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Every input (or pair of inputs) was tried.
    Exhaustive,
    /// Linearity on every input, multiplicativity on every pair of unit
    /// generators; together these decide the homomorphism property.
    LinearBasis,
    /// Seeded random inputs.
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub law: String,
    pub inputs: Vec<Value>,
    pub expected: Value,
    pub got: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub mode: CheckMode,
    pub cases: u64,
    pub passed: bool,
    /// At most one per law.
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    fn new(check: &str, mode: CheckMode) -> Self {
        CheckReport { check: check.into(), mode, cases: 0, passed: true, witnesses: vec![] }
    }

    fn fail<R: Ring>(&mut self, law: &str, inputs: &[&IncMatrix<R>], expected: &IncMatrix<R>, got: &IncMatrix<R>) {
        self.passed = false;
        if self.witness(law).is_none() {
            self.witnesses.push(Witness {
                law: law.into(),
                inputs: inputs.iter().map(|m| matrix_to_json(m)).collect(),
                expected: matrix_to_json(expected),
                got: matrix_to_json(got),
            });
        }
    }

    pub fn witness(&self, law: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.law == law)
    }

    fn has_product_witness(&self) -> bool {
        self.witness("multiplicative").is_some()
    }
}

fn input_count<R: Ring>(p: &FiniteProset, ring: &R) -> Option<u64> {
    let q = ring.cardinality()?;
    q.checked_pow(p.num_comparable_pairs() as u32)
}

/// Checks `h(A + B) = h(A) + h(B)`, `h(AB) = h(A)h(B)` and `h(1) = 1`,
/// stopping at the first multiplicativity failure.
///
/// Over a finite ring all pairs are tried when there are at most
/// [`PAIRWISE_LIMIT`] of them; otherwise, if the inputs themselves number
/// at most [`EXHAUSTIVE_LIMIT`], linearity is checked on every input and multiplicativity
/// on unit generators; otherwise `trials` seeded samples are drawn.
pub fn verify_hom<R: Ring>(h: &RingHom<'_, R>, trials: usize, seed: u64) -> Result<CheckReport> {
    let n = input_count(&h.domain, &h.ring);
    let mode = match n {
        Some(n) if n.checked_mul(n).is_some_and(|nn| nn <= PAIRWISE_LIMIT) => CheckMode::Exhaustive,
        Some(n) if n <= EXHAUSTIVE_LIMIT => CheckMode::LinearBasis,
        _ => CheckMode::Sampled,
    };
    let mut r = CheckReport::new(&h.name, mode);
    let one = IncMatrix::identity(h.domain.clone(), h.ring.clone());
    let one_img = h.apply(&one)?;
    let target_one = IncMatrix::identity(h.codomain.clone(), h.ring.clone());
    r.cases += 1;
    if one_img != target_one {
        r.fail("unital", &[&one], &target_one, &one_img);
    }
    match mode {
        CheckMode::Exhaustive => {
            let all = IncMatrix::enumerate_all(h.domain.clone(), h.ring.clone(), EXHAUSTIVE_LIMIT)?;
            let imgs: Vec<IncMatrix<R>> = all.iter().map(|a| h.apply(a)).collect::<Result<_>>()?;
            for (a, ha) in all.iter().zip(&imgs) {
                for (b, hb) in all.iter().zip(&imgs) {
                    r.cases += 1;
                    if !pair_laws(h, &mut r, a, b, ha, hb)? {
                        return Ok(r);
                    }
                }
            }
        }
        CheckMode::LinearBasis => {
            let basis = unit_basis(&h.domain, &h.ring)?;
            let basis_imgs: Vec<IncMatrix<R>> = basis.iter().map(|e| h.apply(e)).collect::<Result<_>>()?;
            let index: HashMap<(usize, usize), usize> =
                h.domain.comparable_pairs().into_iter().enumerate().map(|(i, k)| (k, i)).collect();
            for a in IncMatrix::enumerate_all(h.domain.clone(), h.ring.clone(), EXHAUSTIVE_LIMIT)? {
                r.cases += 1;
                let ha = h.apply(&a)?;
                let mut acc: BTreeMap<(usize, usize), R::Elem> = BTreeMap::new();
                for (k, c) in a.entries() {
                    for (&kk, v) in basis_imgs[index[k]].entries() {
                        let slot = acc.entry(kk).or_insert_with(|| h.ring.zero());
                        *slot = h.ring.add(slot, &h.ring.mul(c, v));
                    }
                }
                let lin = IncMatrix::from_entries(h.codomain.clone(), h.ring.clone(), acc)?;
                if ha != lin {
                    r.fail("linear", &[&a], &lin, &ha);
                }
            }
            for (e1, h1) in basis.iter().zip(&basis_imgs) {
                for (e2, h2) in basis.iter().zip(&basis_imgs) {
                    r.cases += 1;
                    let lhs = h.apply(&e1.mul(e2)?)?;
                    let rhs = h1.mul(h2)?;
                    if lhs != rhs {
                        r.fail("multiplicative", &[e1, e2], &lhs, &rhs);
                        return Ok(r);
                    }
                }
            }
        }
        CheckMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = unit_basis(&h.domain, &h.ring)?;
            let basis_imgs: Vec<IncMatrix<R>> = basis.iter().map(|e| h.apply(e)).collect::<Result<_>>()?;
            for (a, ha) in basis.iter().zip(&basis_imgs) {
                for (b, hb) in basis.iter().zip(&basis_imgs) {
                    r.cases += 1;
                    if !pair_laws(h, &mut r, a, b, ha, hb)? {
                        return Ok(r);
                    }
                }
            }
            let inputs: Vec<IncMatrix<R>> =
                (0..trials + 1).map(|_| IncMatrix::random(h.domain.clone(), h.ring.clone(), &mut rng)).collect();
            let imgs: Vec<IncMatrix<R>> = inputs.iter().map(|a| h.apply(a)).collect::<Result<_>>()?;
            for i in 0..trials {
                for k in [i, i + 1] {
                    r.cases += 1;
                    if !pair_laws(h, &mut r, &inputs[i], &inputs[k], &imgs[i], &imgs[k])? {
                        return Ok(r);
                    }
                }
            }
        }
    }
    Ok(r)
}

fn unit_basis<R: Ring>(p: &Arc<FiniteProset>, ring: &R) -> Result<Vec<IncMatrix<R>>> {
    p.comparable_pairs()
        .into_iter()
        .map(|(a, b)| IncMatrix::unit(p.clone(), ring.clone(), a, b))
        .collect()
}

fn pair_laws<R: Ring>(
    h: &RingHom<'_, R>,
    r: &mut CheckReport,
    a: &IncMatrix<R>,
    b: &IncMatrix<R>,
    ha: &IncMatrix<R>,
    hb: &IncMatrix<R>,
) -> Result<bool> {
    let sum = h.apply(&a.add(b)?)?;
    let sum_img = ha.add(hb)?;
    if sum != sum_img {
        r.fail("additive", &[a, b], &sum_img, &sum);
    }
    let prod = h.apply(&a.mul(b)?)?;
    let prod_img = ha.mul(hb)?;
    if prod != prod_img {
        r.fail("multiplicative", &[a, b], &prod_img, &prod);
    }
    Ok(!r.has_product_witness())
}

/// Inputs for comparisons: all matrices when few enough, else seeded samples
/// plus the unit generators.
fn test_inputs<R: Ring>(p: &Arc<FiniteProset>, ring: &R, trials: usize, seed: u64) -> Result<(CheckMode, Vec<IncMatrix<R>>)> {
    match input_count(p, ring) {
        Some(n) if n <= EXHAUSTIVE_LIMIT => {
            Ok((CheckMode::Exhaustive, IncMatrix::enumerate_all(p.clone(), ring.clone(), EXHAUSTIVE_LIMIT)?))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = unit_basis(p, ring)?;
            v.extend((0..trials).map(|_| IncMatrix::random(p.clone(), ring.clone(), &mut rng)));
            Ok((CheckMode::Sampled, v))
        }
    }
}

/// `M[f2 ∘ f1] = M[f1] ∘ M[f2]` for `f1: Λ1 → Λ2`, `f2: Λ2 → Λ3`.
pub fn contravariance_check<R: Ring>(f1: &ProsetMap, f2: &ProsetMap, ring: &R, trials: usize, seed: u64) -> Result<CheckReport> {
    f1.require_fcc()?;
    f2.require_fcc()?;
    let comp = f2.after(f1)?;
    let (mode, inputs) = test_inputs(f2.target(), ring, trials, seed)?;
    let mut r = CheckReport::new("contravariance", mode);
    for a in &inputs {
        r.cases += 1;
        let lhs = apply_functor(&comp, a)?;
        let rhs = apply_functor(f1, &apply_functor(f2, a)?)?;
        if lhs != rhs {
            r.fail("M[f2∘f1] = M[f1]∘M[f2]", &[a], &rhs, &lhs);
            break;
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualizerReport {
    /// Matrices on the common target of `f1`, `f2`.
    pub domain_size: u64,
    /// Matrices `A` with `M[f1](A) = M[f2](A)`.
    pub equalizer_size: usize,
    pub image_size: usize,
    pub injective: bool,
    /// The image of `M[p]` is exactly the equalizer set.
    pub image_is_equalizer: bool,
    pub passed: bool,
}

/// Checks that `M[p]` is the equalizer of `M[f1]` and `M[f2]` by full
/// enumeration over a finite ring.
pub fn equalizer_check<R: Ring>(f1: &ProsetMap, f2: &ProsetMap, p: &ProsetMap, ring: &R, budget: u64) -> Result<EqualizerReport> {
    f1.require_fcc()?;
    f2.require_fcc()?;
    p.require_fcc()?;
    if !same_proset(f1.target(), p.source()) || !same_proset(f2.target(), p.source()) {
        return Err(Error::IncompatibleMaps("p must start where f1 and f2 end".into()));
    }
    let all = IncMatrix::enumerate_all(p.source().clone(), ring.clone(), budget)?;
    let mut equalizer = HashSet::new();
    for a in &all {
        if apply_functor(f1, a)? == apply_functor(f2, a)? {
            equalizer.insert(a.clone());
        }
    }
    let quotient_all = IncMatrix::enumerate_all(p.target().clone(), ring.clone(), budget)?;
    let image: HashSet<IncMatrix<R>> = quotient_all.iter().map(|b| apply_functor(p, b)).collect::<Result<_>>()?;
    let injective = image.len() == quotient_all.len();
    let image_is_equalizer = image == equalizer;
    Ok(EqualizerReport {
        domain_size: all.len() as u64,
        equalizer_size: equalizer.len(),
        image_size: image.len(),
        injective,
        image_is_equalizer,
        passed: injective && image_is_equalizer,
    })
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use rand::SeedableRng;

    use super::*;
    use crate::colimits::{coequalizer, coproduct, enumerate_fcc_maps, pushout};
    use crate::proset::{labels, prosets_up_to};
    use crate::ring::{Integers, Zmod};

    fn arc(p: FiniteProset) -> Arc<FiniteProset> {
        Arc::new(p)
    }

    fn f2() -> Zmod<u64> {
        Zmod::prime_field(2)
    }

    #[test]
    fn skipping_map_fails_multiplicativity() {
        let f = ProsetMap::new(arc(FiniteProset::chain(2)), arc(FiniteProset::chain(3)), vec![0, 2]).unwrap();
        assert_eq!(RingHom::functor(&f, f2()).err().unwrap().code(), "not_fcc");
        let r = verify_hom(&RingHom::naive_pullback(&f, f2()), 0, 0).unwrap();
        assert!(!r.passed);
        assert!(r.witness("multiplicative").is_some());
    }

    #[test]
    fn folding_map_fails_homomorphism() {
        let f = ProsetMap::new(arc(FiniteProset::chain(4)), arc(FiniteProset::chain(2)), vec![0, 0, 1, 1]).unwrap();
        let r = verify_hom(&RingHom::naive_pullback(&f, f2()), 0, 0).unwrap();
        assert!(!r.passed);
        assert!(r.witness("unital").is_some() && r.witness("multiplicative").is_some());
        let z = Integers::<BigInt>::new();
        let r = verify_hom(&RingHom::naive_pullback(&f, z.clone()), 20, 4).unwrap();
        assert!(!r.passed);
        // the generator rule zeroes the off-diagonal entries inside each fibre
        let a = IncMatrix::from_coords(f.target().clone(), z.clone(), &[2.into(), 3.into(), 5.into()]).unwrap();
        let img = generator_pullback(&f, &a).unwrap();
        let d = img.to_dense(&[0, 1, 2, 3]);
        let want: Vec<Vec<i64>> = vec![vec![2, 0, 3, 3], vec![0, 2, 3, 3], vec![0, 0, 5, 0], vec![0, 0, 0, 5]];
        for (i, row) in want.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(d.get(i, j), &BigInt::from(v));
            }
        }
        let g = RingHom::new("generator rule", f.target().clone(), f.source().clone(), f2(), |a| generator_pullback(&f, a));
        assert!(verify_hom(&g, 0, 0).unwrap().passed);
    }

    #[test]
    fn identity_acts_trivially() {
        let p = arc(FiniteProset::arrow(2, 1));
        let id = ProsetMap::identity(p.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = Integers::<BigInt>::new();
        for _ in 0..10 {
            let a = IncMatrix::random(p.clone(), z.clone(), &mut rng);
            assert_eq!(apply_functor(&id, &a).unwrap(), a);
        }
    }

    #[test]
    fn chain2_over_f2_is_exhaustive() {
        let c4 = arc(FiniteProset::chain(4));
        let f = ProsetMap::new(c4, arc(FiniteProset::chain(5)), vec![1, 2, 3, 4]).unwrap();
        let r = verify_hom(&RingHom::functor(&f, f2()).unwrap(), 0, 0).unwrap();
        assert!(r.passed);
        assert_eq!(r.mode, CheckMode::LinearBasis);
        let c2 = arc(FiniteProset::chain(2));
        let id = ProsetMap::identity(c2);
        let r = verify_hom(&RingHom::functor(&id, f2()).unwrap(), 0, 0).unwrap();
        assert_eq!((r.mode, r.passed, r.cases), (CheckMode::Exhaustive, true, 65));
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let p = arc(FiniteProset::chain(3));
        let w = p.window(&[1, 2]).unwrap();
        let h = RingHom::projection(p, w, f2()).unwrap();
        assert!(verify_hom(&h, 0, 0).unwrap().passed);
    }

    #[test]
    fn generator_route_agrees() {
        let z = Integers::<BigInt>::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ps: Vec<Arc<FiniteProset>> = prosets_up_to(3).into_iter().map(arc).collect();
        for s in &ps {
            for t in &ps {
                for f in enumerate_fcc_maps(s, t).unwrap() {
                    let a = IncMatrix::random(t.clone(), z.clone(), &mut rng);
                    assert_eq!(apply_functor(&f, &a).unwrap(), functor_by_generators(&f, &a).unwrap());
                }
            }
        }
    }

    #[test]
    fn injectivity_needs_covered_pairs() {
        let ps: Vec<Arc<FiniteProset>> = prosets_up_to(3).into_iter().map(arc).collect();
        let mut uncovered = 0;
        for s in &ps {
            for t in &ps {
                for f in enumerate_fcc_maps(s, t).unwrap().into_iter().filter(ProsetMap::is_surjective) {
                    let all = IncMatrix::enumerate_all(t.clone(), f2(), 1 << 12).unwrap();
                    let imgs: HashSet<_> = all.iter().map(|a| apply_functor(&f, a).unwrap()).collect();
                    assert_eq!(imgs.len() == all.len(), covers_pairs(&f), "{f:?}");
                    uncovered += usize::from(!covers_pairs(&f));
                }
            }
        }
        assert!(uncovered > 0);
        // {a < b, c} onto chain(2): the pair (0, 1) is only reached through a constant component
        let s = arc(FiniteProset::new(labels(&["a", "b", "c"]), &[("a".into(), "b".into())]).unwrap());
        let f = ProsetMap::new(s, arc(FiniteProset::chain(2)), vec![0, 0, 1]).unwrap();
        assert!(f.is_fcc() && f.is_surjective() && !covers_pairs(&f));
        let e = IncMatrix::unit(f.target().clone(), f2(), 0, 1).unwrap();
        assert!(apply_functor(&f, &e).unwrap().is_zero());
    }

    #[test]
    fn functor_on_small_fcc_maps() {
        let ps: Vec<Arc<FiniteProset>> = prosets_up_to(3).into_iter().map(arc).collect();
        for s in &ps {
            for t in &ps {
                for f in enumerate_fcc_maps(s, t).unwrap() {
                    let r = verify_hom(&RingHom::functor(&f, f2()).unwrap(), 0, 0).unwrap();
                    assert!(r.passed, "{f:?}: {:?}", r.witnesses);
                }
            }
        }
    }

    #[test]
    fn functor_over_integers_is_sampled() {
        let f = ProsetMap::new(arc(FiniteProset::chain(2)), arc(FiniteProset::chain(3)), vec![1, 2]).unwrap();
        let r = verify_hom(&RingHom::functor(&f, Integers::<BigInt>::new()).unwrap(), 30, 9).unwrap();
        assert_eq!(r.mode, CheckMode::Sampled);
        assert!(r.passed);
    }

    #[test]
    fn contravariance_cases() {
        let c2 = arc(FiniteProset::chain(2));
        let c3 = arc(FiniteProset::chain(3));
        let id = ProsetMap::identity(c2.clone());
        assert!(contravariance_check(&id, &id, &f2(), 0, 0).unwrap().passed);
        let embed = ProsetMap::new(c2.clone(), c3.clone(), vec![0, 1]).unwrap();
        let constant = ProsetMap::new(c3, arc(FiniteProset::point()), vec![0, 0, 0]).unwrap();
        assert!(contravariance_check(&embed, &constant, &f2(), 0, 0).unwrap().passed);
        let z = Integers::<BigInt>::new();
        assert!(contravariance_check(&embed, &constant, &z, 20, 1).unwrap().passed);
    }

    #[test]
    fn equalizer_examples() {
        let pt = arc(FiniteProset::point());
        let d = arc(FiniteProset::discrete(labels(&["a", "b"])).unwrap());
        let a = ProsetMap::new(pt.clone(), d.clone(), vec![0]).unwrap();
        let b = ProsetMap::new(pt.clone(), d.clone(), vec![1]).unwrap();
        let ce = coequalizer(&a, &b).unwrap();
        let r = equalizer_check(&a, &b, &ce.p, &f2(), 1 << 12).unwrap();
        assert!(r.passed);
        assert_eq!(r.equalizer_size, 2);

        let same = coequalizer(&a, &a).unwrap();
        let r = equalizer_check(&a, &a, &same.p, &f2(), 1 << 12).unwrap();
        assert!(r.passed && r.equalizer_size == 4);

        let c2 = arc(FiniteProset::chain(2));
        let a = ProsetMap::new(pt.clone(), c2.clone(), vec![0]).unwrap();
        let b = ProsetMap::new(pt, c2, vec![1]).unwrap();
        let ce = coequalizer(&a, &b).unwrap();
        let r = equalizer_check(&a, &b, &ce.p, &f2(), 1 << 12).unwrap();
        // collapsing chain(2) to a point loses the corner entry
        assert!(r.injective && !r.image_is_equalizer);
        assert_eq!((r.image_size, r.equalizer_size), (2, 4));
    }

    #[test]
    fn coproducts_go_to_products() {
        let parts = vec![arc(FiniteProset::chain(2)), arc(FiniteProset::arrow(1, 1))];
        let co = coproduct(&parts);
        let z = Integers::<BigInt>::new();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = IncMatrix::random(co.proset.clone(), z.clone(), &mut rng);
            let b = IncMatrix::random(co.proset.clone(), z.clone(), &mut rng);
            let split = |m: &IncMatrix<_>| -> Vec<IncMatrix<_>> {
                co.injections.iter().map(|i| apply_functor(i, m).unwrap()).collect()
            };
            let ab = split(&a.mul(&b).unwrap());
            let (sa, sb) = (split(&a), split(&b));
            for k in 0..parts.len() {
                assert_eq!(ab[k], sa[k].mul(&sb[k]).unwrap());
            }
            let relabelled: Vec<IncMatrix<_>> = sa
                .iter()
                .zip(&co.injections)
                .map(|(m, inj)| {
                    let entries = m.entries().map(|(&(x, y), v)| ((inj.apply(x), inj.apply(y)), v.clone()));
                    IncMatrix::from_entries(co.proset.clone(), z.clone(), entries).unwrap()
                })
                .collect();
            let back = relabelled.iter().fold(IncMatrix::zero(co.proset.clone(), z.clone()), |acc, m| acc.add(m).unwrap());
            assert_eq!(back, a);
        }
    }

    #[test]
    fn pushout_squares_land_in_the_fibre_product() {
        let pt = arc(FiniteProset::point());
        let c2 = arc(FiniteProset::chain(2));
        let f = ProsetMap::new(pt.clone(), c2.clone(), vec![1]).unwrap();
        let g = ProsetMap::new(pt, c2, vec![0]).unwrap();
        let po = pushout(&f, &g).unwrap();
        for b in IncMatrix::enumerate_all(po.proset.clone(), f2(), 1 << 12).unwrap() {
            let via1 = apply_functor(&f, &apply_functor(&po.p1, &b).unwrap()).unwrap();
            let via2 = apply_functor(&g, &apply_functor(&po.p2, &b).unwrap()).unwrap();
            assert_eq!(via1, via2);
        }
    }
}
