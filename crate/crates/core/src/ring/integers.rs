use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use rand::Rng;
use serde_json::Value;

use super::Ring;
use crate::error::{Error, Result};

/// Bounds shared by the integer representations usable as ring carriers.
pub trait IntegerRepr:
    Integer
    + Signed
    + Clone
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> IntegerRepr for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// The ring of integers. With `T = BigInt` arithmetic is exact; fixed-width
/// representations overflow like their machine type.
#[derive(Clone, PartialEq, Eq)]
pub struct Integers<T> {
    sample_radius: i64,
    _repr: PhantomData<T>,
}

impl<T> fmt::Debug for Integers<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Z")
    }
}

impl<T> Default for Integers<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Integers<T> {
    pub fn new() -> Self {
        Self::with_sample_radius(3)
    }

    /// `random` draws uniformly from `[-radius, radius]`.
    pub fn with_sample_radius(radius: i64) -> Self {
        Integers { sample_radius: radius.abs(), _repr: PhantomData }
    }
}

pub(crate) fn int_to_json<T: IntegerRepr>(a: &T) -> Value {
    match a.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(a.to_string()),
    }
}

pub(crate) fn int_from_json<T: IntegerRepr>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .and_then(T::from_i64)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<T>()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

impl<T: IntegerRepr> Ring for Integers<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }

    fn neg(&self, a: &T) -> T {
        -a.clone()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &T) -> bool {
        a.abs().is_one()
    }

    fn unit_inverse(&self, a: &T) -> Option<T> {
        self.is_unit(a).then(|| a.clone())
    }

    fn is_field(&self) -> bool {
        false
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn elements(&self) -> Option<Vec<T>> {
        None
    }

    fn from_i64(&self, n: i64) -> T {
        T::from_i64(n).expect("i64 fits the integer representation")
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> T {
        let r = self.sample_radius;
        self.from_i64(rng.gen_range(-r..=r))
    }

    fn in_ideal(&self, x: &T, generator: &T) -> bool {
        if generator.is_zero() {
            x.is_zero()
        } else {
            x.is_multiple_of(generator)
        }
    }

    fn token(&self) -> String {
        "Z".into()
    }

    fn to_json(&self, a: &T) -> Value {
        int_to_json(a)
    }

    fn from_json(&self, v: &Value) -> Result<T> {
        int_from_json(v)
    }

    fn display(&self, a: &T) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn units_and_ideals() {
        let z = Integers::<BigInt>::new();
        assert!(z.is_unit(&BigInt::from(-1)));
        assert!(!z.is_unit(&BigInt::from(2)));
        assert_eq!(z.unit_inverse(&BigInt::from(2)), None);
        assert!(z.in_ideal(&BigInt::from(6), &BigInt::from(2)));
        assert!(!z.in_ideal(&BigInt::from(3), &BigInt::from(2)));
        assert!(z.in_ideal(&BigInt::from(0), &BigInt::from(0)));
    }

    #[test]
    fn big_values_round_trip_through_json() {
        let z = Integers::<BigInt>::new();
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = z.to_json(&big);
        assert!(v.is_string());
        assert_eq!(z.from_json(&v).unwrap(), big);
        assert_eq!(z.from_json(&Value::from(-7)).unwrap(), BigInt::from(-7));
    }
}
