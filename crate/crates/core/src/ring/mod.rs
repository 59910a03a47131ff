//! Exact commutative coefficient rings and division-free dense linear algebra.
//!
//! A [`Ring`] is a context object: elements are plain values and every
//! operation goes through the ring, so residue rings can carry their modulus
//! at runtime. Concrete rings are generic over their machine representation
//! through `num-traits` (see [`Integers`], [`Rationals`], [`Zmod`]).

mod dense;
mod galois;
mod integers;
mod rationals;
mod zmod;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

pub use dense::DenseSquare;
pub use galois::GaloisField;
pub use integers::Integers;
pub use rationals::Rationals;
pub use zmod::Zmod;

/// Topology declared on a coefficient ring. Only discreteness matters for
/// the open/closed classification of ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Discrete,
    Nontrivial,
}

/// An exact ring with identity.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool;

    /// Two-sided inverse of `a`, if `a` is a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_commutative(&self) -> bool {
        true
    }

    fn is_field(&self) -> bool;

    /// Number of elements, `None` when infinite.
    fn cardinality(&self) -> Option<u64>;

    /// All elements of a finite ring in a fixed order.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Random element. Infinite rings sample from a small window around zero.
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;

    /// Membership of `x` in the principal ideal generated by `generator`.
    fn in_ideal(&self, x: &Self::Elem, generator: &Self::Elem) -> bool;

    /// Canonical token, e.g. `Z`, `Q`, `Z/6`, `F5`, `F4`.
    fn token(&self) -> String;

    fn topology(&self) -> Topology {
        Topology::Discrete
    }

    fn to_json(&self, a: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn display(&self, a: &Self::Elem) -> String;

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Parsed ring token, used to pick a concrete ring at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Rationals,
    /// `Z/n`, also used for prime fields `Fp`.
    Residues { modulus: u64, field_token: bool },
    /// `F_q` with `q = p^k`, `k >= 2`.
    PrimePower { order: u64 },
}

impl RingKind {
    pub fn parse(token: &str) -> Result<Self> {
        let t = token.trim();
        match t {
            "Z" | "ZZ" => return Ok(RingKind::Integers),
            "Q" | "QQ" => return Ok(RingKind::Rationals),
            _ => {}
        }
        if let Some(n) = t.strip_prefix("Z/") {
            let modulus = parse_u64(n, token)?;
            if modulus < 2 {
                return Err(Error::Parse(format!("modulus must be at least 2 in {token}")));
            }
            return Ok(RingKind::Residues { modulus, field_token: false });
        }
        let order = if let Some(q) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            parse_u64(q, token)?
        } else if let Some(q) = t.strip_prefix('F') {
            parse_u64(q, token)?
        } else {
            return Err(Error::Parse(format!("unknown ring token {token:?}")));
        };
        match prime_power(order) {
            Some((p, 1)) => Ok(RingKind::Residues { modulus: p, field_token: true }),
            Some(_) => Ok(RingKind::PrimePower { order }),
            None => Err(Error::Parse(format!("{order} is not a prime power"))),
        }
    }
}

fn parse_u64(s: &str, token: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad number in ring token {token:?}")))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q = p^k`, returning `(p, k)`.
pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while q % p != 0 {
        p += 1;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}
