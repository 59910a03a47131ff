use std::fmt;
use std::hash::Hash;

use num_traits::{FromPrimitive, PrimInt, Unsigned};
use rand::Rng;
use serde_json::Value;

use super::{is_prime, Ring};
use crate::error::{Error, Result};

/// Bounds for unsigned residue representations.
pub trait ResidueRepr:
    PrimInt + Unsigned + Hash + fmt::Debug + fmt::Display + FromPrimitive + Send + Sync + 'static
{
}

impl<T> ResidueRepr for T where
    T: PrimInt + Unsigned + Hash + fmt::Debug + fmt::Display + FromPrimitive + Send + Sync + 'static
{
}

/// The residue ring `Z/nZ`; a prime modulus gives the prime field `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct Zmod<T> {
    modulus: T,
    prime: bool,
    field_token: bool,
}

impl<T: ResidueRepr> fmt::Debug for Zmod<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl<T: ResidueRepr> Zmod<T> {
    /// Panics if `modulus < 2`.
    pub fn new(modulus: T) -> Self {
        assert!(modulus >= T::from_u8(2).unwrap(), "modulus must be at least 2");
        let prime = modulus.to_u64().map(is_prime).unwrap_or(false);
        Zmod { modulus, prime, field_token: false }
    }

    /// Same ring as [`Zmod::new`], printed as `Fp`. Panics if `p` is not prime.
    pub fn prime_field(p: T) -> Self {
        let mut r = Self::new(p);
        assert!(r.prime, "{p} is not prime");
        r.field_token = true;
        r
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    pub fn reduce(&self, a: T) -> T {
        a % self.modulus
    }

    fn mulmod(&self, a: T, b: T) -> T {
        if let Some(p) = a.checked_mul(&b) {
            return p % self.modulus;
        }
        // shift-and-add keeps intermediates below 2 * modulus
        let mut acc = T::zero();
        let mut x = a;
        let mut y = b;
        while y > T::zero() {
            if y & T::one() == T::one() {
                acc = self.addmod(acc, x);
            }
            x = self.addmod(x, x);
            y = y >> 1;
        }
        acc
    }

    fn addmod(&self, a: T, b: T) -> T {
        let gap = self.modulus - b;
        if a >= gap {
            a - gap
        } else {
            a + b
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl<T: ResidueRepr> Ring for Zmod<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn add(&self, a: &T, b: &T) -> T {
        self.addmod(*a, *b)
    }

    fn neg(&self, a: &T) -> T {
        if a.is_zero() {
            T::zero()
        } else {
            self.modulus - *a
        }
    }

    fn mul(&self, a: &T, b: &T) -> T {
        self.mulmod(*a, *b)
    }

    fn is_unit(&self, a: &T) -> bool {
        let n = self.modulus.to_u128().unwrap();
        gcd_u128(a.to_u128().unwrap(), n) == 1
    }

    fn unit_inverse(&self, a: &T) -> Option<T> {
        let n = self.modulus.to_i128()?;
        let (mut r0, mut r1) = (a.to_i128()?, n);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return None;
        }
        T::from_i128(s0.rem_euclid(n))
    }

    fn is_field(&self) -> bool {
        self.prime
    }

    fn cardinality(&self) -> Option<u64> {
        self.modulus.to_u64()
    }

    fn elements(&self) -> Option<Vec<T>> {
        let n = self.modulus.to_u64()?;
        Some((0..n).map(|k| T::from_u64(k).unwrap()).collect())
    }

    fn from_i64(&self, n: i64) -> T {
        let m = self.modulus.to_i128().unwrap();
        T::from_i128((n as i128).rem_euclid(m)).unwrap()
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> T {
        let n = self.modulus.to_u64().unwrap();
        T::from_u64(rng.gen_range(0..n)).unwrap()
    }

    fn in_ideal(&self, x: &T, generator: &T) -> bool {
        let n = self.modulus.to_u128().unwrap();
        let g = gcd_u128(generator.to_u128().unwrap(), n);
        x.to_u128().unwrap() % g == 0
    }

    fn token(&self) -> String {
        if self.field_token {
            format!("F{}", self.modulus)
        } else {
            format!("Z/{}", self.modulus)
        }
    }

    fn to_json(&self, a: &T) -> Value {
        match a.to_u64() {
            Some(v) => Value::from(v),
            None => Value::String(a.to_string()),
        }
    }

    fn from_json(&self, v: &Value) -> Result<T> {
        let raw: i128 = match v {
            Value::Number(n) => n
                .as_i64()
                .map(i128::from)
                .or_else(|| n.as_u64().map(i128::from))
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}")))?,
            Value::String(s) => s
                .trim()
                .parse::<i128>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?,
            other => return Err(Error::Parse(format!("not an integer: {other}"))),
        };
        let m = self.modulus.to_i128().unwrap();
        Ok(T::from_i128(raw.rem_euclid(m)).unwrap())
    }

    fn display(&self, a: &T) -> String {
        a.to_string()
    }
}
