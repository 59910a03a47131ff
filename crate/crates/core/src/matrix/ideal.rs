use std::fmt;

use serde::Serialize;

use super::IncMatrix;
use crate::error::{Error, Result};
use crate::proset::{FiniteProset, Label};
use crate::ring::Ring;

/// A subset referenced by an ideal descriptor: a finite label set or the
/// whole proset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetRef {
    Finite(Vec<Label>),
    Whole,
}

impl SetRef {
    fn resolve(&self, p: &FiniteProset) -> Result<Vec<usize>> {
        match self {
            SetRef::Finite(ls) => p
                .indices_of(ls)
                .map_err(|e| Error::InvalidDescriptor(e.to_string())),
            SetRef::Whole => Ok((0..p.len()).collect()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SetRef::Finite(_))
    }
}

impl fmt::Display for SetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRef::Finite(ls) => f.write_str(&crate::proset::fmt_labels(ls)),
            SetRef::Whole => f.write_str("Λ"),
        }
    }
}

/// The two-sided ideals of `M_Λ(P)` named by the toolkit. Coefficient
/// ideals are principal, given by a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealDescriptor<E> {
    /// `I_[s1,s2]`: zero on every pair inside the interval.
    Interval(Label, Label),
    /// `I_Λ'` for a convex `Λ'`.
    Convex(SetRef),
    /// `I_{Λi}` for a locally convex collection.
    Family(Vec<SetRef>),
    /// `M_Λ(J)` with `J = (generator)`.
    Coefficient(E),
    /// `I_{Λi} + M_Λ(J)`.
    Sum(Vec<SetRef>, E),
}

impl<E> IdealDescriptor<E> {
    /// The sets whose pairs are constrained, if any.
    pub fn family(&self) -> Option<Vec<SetRef>> {
        match self {
            IdealDescriptor::Interval(a, b) => Some(vec![SetRef::Finite(vec![a.clone(), b.clone()])]),
            IdealDescriptor::Convex(s) => Some(vec![s.clone()]),
            IdealDescriptor::Family(f) | IdealDescriptor::Sum(f, _) => Some(f.clone()),
            IdealDescriptor::Coefficient(_) => None,
        }
    }
}

impl<E: Clone> IdealDescriptor<E> {
    /// Resolves the constrained sets on a concrete proset, validating
    /// convexity and disjointness.
    fn blocks(&self, p: &FiniteProset) -> Result<Vec<Vec<usize>>> {
        let sets: Vec<Vec<usize>> = match self {
            IdealDescriptor::Interval(a, b) => {
                let (ia, ib) = (
                    p.index_of(a).map_err(|e| Error::InvalidDescriptor(e.to_string()))?,
                    p.index_of(b).map_err(|e| Error::InvalidDescriptor(e.to_string()))?,
                );
                if !p.leq(ia, ib) {
                    return Err(Error::InvalidDescriptor(format!("[{a}, {b}] is not an interval")));
                }
                return Ok(vec![p.interval(ia, ib)]);
            }
            IdealDescriptor::Convex(s) => vec![s.resolve(p)?],
            IdealDescriptor::Family(f) | IdealDescriptor::Sum(f, _) => {
                f.iter().map(|s| s.resolve(p)).collect::<Result<_>>()?
            }
            IdealDescriptor::Coefficient(_) => vec![],
        };
        let mut used = vec![false; p.len()];
        for s in &sets {
            if !p.is_convex(s) {
                return Err(Error::InvalidDescriptor(format!(
                    "{} is not convex",
                    crate::proset::fmt_labels(&p.labels_of(s))
                )));
            }
            for &x in s {
                if used[x] {
                    return Err(Error::InvalidDescriptor(format!(
                        "family members overlap at {}",
                        p.label(x)
                    )));
                }
                used[x] = true;
            }
        }
        Ok(sets)
    }
}

impl<R: Ring> IncMatrix<R> {
    /// Membership of `self` in the ideal.
    pub fn in_ideal(&self, ideal: &IdealDescriptor<R::Elem>) -> Result<bool> {
        let p = self.proset();
        let blocks = ideal.blocks(p)?;
        let mut block_of = vec![usize::MAX; p.len()];
        for (k, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = k;
            }
        }
        let inside = |a: usize, b: usize| block_of[a] != usize::MAX && block_of[a] == block_of[b];
        let ring = self.ring();
        Ok(match ideal {
            IdealDescriptor::Interval(..) | IdealDescriptor::Convex(_) | IdealDescriptor::Family(_) => {
                self.entries().all(|(&(a, b), _)| !inside(a, b))
            }
            IdealDescriptor::Coefficient(g) => self.entries().all(|(_, v)| ring.in_ideal(v, g)),
            IdealDescriptor::Sum(_, g) => self
                .entries()
                .all(|(&(a, b), v)| !inside(a, b) || ring.in_ideal(v, g)),
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;

    use super::*;
    use crate::proset::{labels, RuleProset};
    use crate::ring::Integers;

    fn nat_window(k: usize) -> Arc<FiniteProset> {
        let n = RuleProset::nat();
        Arc::new(n.restrict(&n.standard_window(k)).unwrap())
    }

    #[test]
    fn interval_ideal_kernel_shape() {
        let p = nat_window(4);
        let z = Integers::<BigInt>::new();
        let ideal = IdealDescriptor::Interval(0.into(), 2.into());
        for a in 0..5 {
            for b in a..5 {
                let e = IncMatrix::unit(p.clone(), z.clone(), a, b).unwrap();
                assert_eq!(e.in_ideal(&ideal).unwrap(), b >= 3, "e({a},{b})");
            }
        }
    }

    #[test]
    fn coefficient_and_sum_ideals() {
        let p = nat_window(3);
        let z = Integers::<BigInt>::new();
        let two = BigInt::from(2);
        let a = IncMatrix::identity(p.clone(), z.clone()).scale(&two);
        assert!(a.in_ideal(&IdealDescriptor::Coefficient(two.clone())).unwrap());
        let b = IncMatrix::identity(p.clone(), z.clone());
        assert!(!b.in_ideal(&IdealDescriptor::Coefficient(two.clone())).unwrap());
        let fam = vec![SetRef::Finite(labels(&[0, 1, 2]))];
        let c = a.add(&IncMatrix::unit(p.clone(), z.clone(), 3, 3).unwrap()).unwrap();
        assert!(c.in_ideal(&IdealDescriptor::Sum(fam.clone(), two.clone())).unwrap());
        assert!(!b.in_ideal(&IdealDescriptor::Sum(fam, two)).unwrap());
    }

    #[test]
    fn invalid_descriptors() {
        let p = nat_window(3);
        let z = Integers::<BigInt>::new();
        let a = IncMatrix::identity(p, z);
        let bad = IdealDescriptor::<BigInt>::Convex(SetRef::Finite(labels(&[0, 2])));
        assert_eq!(a.in_ideal(&bad).unwrap_err().code(), "invalid_descriptor");
        let overlap = IdealDescriptor::<BigInt>::Family(vec![
            SetRef::Finite(labels(&[0, 1])),
            SetRef::Finite(labels(&[1, 2])),
        ]);
        assert_eq!(a.in_ideal(&overlap).unwrap_err().code(), "invalid_descriptor");
        let rev = IdealDescriptor::<BigInt>::Interval(2.into(), 0.into());
        assert!(a.in_ideal(&rev).is_err());
    }
}
