use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use super::{prime_power, Ring};
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 256;

/// The finite field `F_q`, `q = p^k` with `k >= 2`, realised as
/// `F_p[x]/(m)` for the lexicographically first monic irreducible `m`.
///
/// An element is the base-`p` integer whose digit `i` is the coefficient of
/// `x^i`.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients of the modulus below the leading term, low degree first.
    modulus: Vec<u32>,
    mul_table: Option<Arc<Vec<u32>>>,
    add_table: Option<Arc<Vec<u32>>>,
}

// The modulus is determined by `q`, so the order identifies the field.
impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.q)
    }
}

impl GaloisField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
        if k < 2 {
            return Err(Error::Parse(format!("F{q} is a prime field; use Zmod")));
        }
        if q > u32::MAX as u64 {
            return Err(Error::Parse(format!("field order {q} too large")));
        }
        let p = p as u32;
        let modulus = find_irreducible(p, k);
        let mut field = GaloisField { p, k, q: q as u32, modulus, mul_table: None, add_table: None };
        if q <= TABLE_LIMIT {
            let n = q as u32;
            let mut mul = Vec::with_capacity((n * n) as usize);
            let mut add = Vec::with_capacity((n * n) as usize);
            for a in 0..n {
                for b in 0..n {
                    mul.push(field.mul_slow(a, b));
                    add.push(field.add_slow(a, b));
                }
            }
            field.mul_table = Some(Arc::new(mul));
            field.add_table = Some(Arc::new(add));
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.encode(&low)
    }
}

/// Smallest monic irreducible of degree `k` over `F_p`, by trial division.
fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut tail = Vec::with_capacity(k as usize);
        let mut c = code;
        for _ in 0..k {
            tail.push((c % p as u64) as u32);
            c /= p as u64;
        }
        if tail[0] == 0 {
            continue;
        }
        let mut poly = tail.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return tail;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let n = poly.len() - 1;
    for d in 1..=n / 2 {
        let total = (p as u64).pow(d as u32);
        for code in 0..total {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let d = monic_div.len() - 1;
    for deg in (d..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_div.iter().enumerate() {
            let idx = deg - d + i;
            r[idx] = (r[idx] + (p - c) * m as u64) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}

impl Ring for GaloisField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(*a * self.q + *b) as usize],
            None => self.add_slow(*a, *b),
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        let d: Vec<u32> = self.digits(*a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[(*a * self.q + *b) as usize],
            None => self.mul_slow(*a, *b),
        }
    }

    fn is_unit(&self, a: &u32) -> bool {
        *a != 0
    }

    fn unit_inverse(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    fn is_field(&self) -> bool {
        true
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.q as u64)
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.q).collect())
    }

    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> u32 {
        rng.gen_range(0..self.q)
    }

    fn in_ideal(&self, x: &u32, generator: &u32) -> bool {
        *generator != 0 || *x == 0
    }

    fn token(&self) -> String {
        format!("F{}", self.q)
    }

    fn to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }

    fn from_json(&self, v: &Value) -> Result<u32> {
        let n = v
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("not a field element code: {v}")))?;
        if n >= self.q as u64 {
            return Err(Error::Parse(format!("{n} is not an element of F{}", self.q)));
        }
        Ok(n as u32)
    }

    fn display(&self, a: &u32) -> String {
        let d = self.digits(*a);
        let terms: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_multiplicative_group_is_cyclic_of_order_three() {
        let f = GaloisField::new(4).unwrap();
        assert_eq!(f.modulus, vec![1, 1]); // x^2 + x + 1
        for a in 1..4 {
            assert_eq!(f.pow(&a, 3), 1);
            assert_eq!(f.mul(&a, &f.unit_inverse(&a).unwrap()), 1);
        }
        assert_eq!(f.add(&2, &2), 0);
        assert_eq!(f.mul(&2, &2), 3); // x^2 = x + 1
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for q in [8u64, 9, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            for a in 1..q as u32 {
                let inv = f.unit_inverse(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn rejects_prime_and_composite_orders() {
        assert!(GaloisField::new(5).is_err());
        assert!(GaloisField::new(6).is_err());
    }
}
