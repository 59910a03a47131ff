use super::Ring;
use crate::error::{Error, Result};

/// A dense `n x n` matrix over a coefficient ring, stored row-major.
///
/// All determinant-style routines are division free, so they are exact over
/// rings with zero divisors such as `Z/6`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseSquare<E> {
    n: usize,
    data: Vec<E>,
}

impl<E: Clone> DenseSquare<E> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseSquare { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a {n}x{n} matrix",
                bad.len()
            )));
        }
        Ok(DenseSquare { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, |_, _| ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            let mut acc = ring.zero();
            for k in 0..n {
                acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        }))
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_fn(self.n, |i, j| ring.add(self.get(i, j), other.get(i, j))))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Self::from_fn(self.n, |i, j| ring.mul(c, self.get(i, j)))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    /// Coefficients `c_0, ..., c_n` of the monic polynomial `det(xI - A)`,
    /// lowest degree first. With this convention `det(A) = (-1)^n c_0`.
    pub fn char_poly<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Vec<E>> {
        if !ring.is_commutative() {
            return Err(Error::NonCommutativeRing);
        }
        let mut c = berkowitz(ring, self.n, &self.data);
        c.reverse();
        Ok(c)
    }

    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> Result<E> {
        let c = self.char_poly(ring)?;
        Ok(if self.n % 2 == 0 { c[0].clone() } else { ring.neg(&c[0]) })
    }

    /// Classical adjoint from Cayley-Hamilton:
    /// `adj(A) = (-1)^(n+1) (c_n A^(n-1) + ... + c_2 A + c_1 I)`.
    pub fn adjugate<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let c = self.char_poly(ring)?;
        let n = self.n;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut b = Self::identity(ring, n).scale(ring, &c[n]);
        for ci in c[1..n].iter().rev() {
            b = b.mul(ring, self)?;
            for i in 0..n {
                let v = ring.add(b.get(i, i), ci);
                b.set(i, i, v);
            }
        }
        if n % 2 == 0 {
            b = b.scale(ring, &ring.neg(&ring.one()));
        }
        Ok(b)
    }

    /// `det(A)^-1 adj(A)`, or [`Error::NotAUnit`] carrying the determinant.
    pub fn inverse_dense<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let d = self.det(ring)?;
        let inv = ring.unit_inverse(&d).ok_or_else(|| Error::NotAUnit(ring.display(&d)))?;
        Ok(self.adjugate(ring)?.scale(ring, &inv))
    }
}

/// Berkowitz characteristic polynomial of the `n x n` row-major `m`,
/// highest degree first.
fn berkowitz<R: Ring>(ring: &R, n: usize, m: &[R::Elem]) -> Vec<R::Elem> {
    match n {
        0 => return vec![ring.one()],
        1 => return vec![ring.one(), ring.neg(&m[0])],
        _ => {}
    }
    let at = |i: usize, j: usize| &m[i * n + j];
    let a = at(0, 0);
    let sub_n = n - 1;
    let sub: Vec<R::Elem> = (1..n)
        .flat_map(|i| (1..n).map(move |j| (i, j)))
        .map(|(i, j)| at(i, j).clone())
        .collect();

    // diags = [1, -a, -R C, -R A C, ..., -R A^(n-2) C]
    let mut diags = Vec::with_capacity(n + 1);
    diags.push(ring.one());
    diags.push(ring.neg(a));
    let mut v: Vec<R::Elem> = (1..n).map(|i| at(i, 0).clone()).collect();
    for step in 0..n - 1 {
        if step > 0 {
            v = (0..sub_n)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (k, vk) in v.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(&sub[i * sub_n + k], vk));
                    }
                    acc
                })
                .collect();
        }
        let mut rv = ring.zero();
        for (k, vk) in v.iter().enumerate() {
            rv = ring.add(&rv, &ring.mul(at(0, k + 1), vk));
        }
        diags.push(ring.neg(&rv));
    }

    let inner = berkowitz(ring, sub_n, &sub);
    // Toeplitz (n+1) x n product with the inner vector.
    (0..=n)
        .map(|i| {
            let mut acc = ring.zero();
            for (j, x) in inner.iter().enumerate().take(i + 1) {
                acc = ring.add(&acc, &ring.mul(&diags[i - j], x));
            }
            acc
        })
        .collect()
}
