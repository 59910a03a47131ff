use std::fmt;
use std::marker::PhantomData;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;

use super::integers::{int_from_json, int_to_json, IntegerRepr};
use super::Ring;
use crate::error::{Error, Result};

/// The field of fractions over an integer representation.
#[derive(Clone, PartialEq, Eq)]
pub struct Rationals<T> {
    sample_radius: i64,
    _repr: PhantomData<T>,
}

impl<T> fmt::Debug for Rationals<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q")
    }
}

impl<T> Default for Rationals<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Rationals<T> {
    pub fn new() -> Self {
        Rationals { sample_radius: 3, _repr: PhantomData }
    }
}

impl<T: IntegerRepr> Ring for Rationals<T> {
    type Elem = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }

    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }

    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a + b
    }

    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }

    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a * b
    }

    fn sub(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a - b
    }

    fn is_zero(&self, a: &Ratio<T>) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &Ratio<T>) -> bool {
        !a.is_zero()
    }

    fn unit_inverse(&self, a: &Ratio<T>) -> Option<Ratio<T>> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_field(&self) -> bool {
        true
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn elements(&self) -> Option<Vec<Ratio<T>>> {
        None
    }

    fn from_i64(&self, n: i64) -> Ratio<T> {
        Ratio::from_integer(T::from_i64(n).expect("i64 fits the integer representation"))
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Ratio<T> {
        let r = self.sample_radius;
        let num = T::from_i64(rng.gen_range(-r..=r)).expect("small");
        let den = T::from_i64(rng.gen_range(1..=r.max(1))).expect("small");
        Ratio::new(num, den)
    }

    fn in_ideal(&self, x: &Ratio<T>, generator: &Ratio<T>) -> bool {
        !generator.is_zero() || x.is_zero()
    }

    fn token(&self) -> String {
        "Q".into()
    }

    fn to_json(&self, a: &Ratio<T>) -> Value {
        if a.denom().is_one() {
            int_to_json(a.numer())
        } else {
            Value::String(format!("{}/{}", a.numer(), a.denom()))
        }
    }

    fn from_json(&self, v: &Value) -> Result<Ratio<T>> {
        if let Value::String(s) = v {
            if let Some((n, d)) = s.split_once('/') {
                let n: T = int_from_json(&Value::String(n.to_string()))?;
                let d: T = int_from_json(&Value::String(d.to_string()))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                return Ok(Ratio::new(n, d));
            }
        }
        Ok(Ratio::from_integer(int_from_json(v)?))
    }

    fn display(&self, a: &Ratio<T>) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn inverse_and_json() {
        let q = Rationals::<BigInt>::new();
        let x = Ratio::new(BigInt::from(-3), BigInt::from(4));
        let inv = q.unit_inverse(&x).unwrap();
        assert!(q.is_one(&q.mul(&x, &inv)));
        assert_eq!(q.from_json(&q.to_json(&x)).unwrap(), x);
        assert_eq!(q.from_json(&Value::from(5)).unwrap(), q.from_i64(5));
        assert!(q.from_json(&Value::from("1/0")).is_err());
        assert_eq!(q.unit_inverse(&q.zero()), None);
    }
}
