//! Small finite fields `F_{p^n}` as `F_p[x]/(f)`.

use crate::arith::{is_prime, mod_pow};
use crate::error::{Error, Result};

pub const FIELD_CAP: u64 = 10_000;

/// A polynomial over `F_p`, lowest coefficient first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = mod_pow(b[db], p - 2, p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        for (i, &bi) in b.iter().enumerate() {
            let k = top - db + i;
            r[k] = (r[k] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn digits(mut t: u64, p: u64, n: usize) -> Poly {
    let mut v = vec![0; n];
    for d in v.iter_mut() {
        *d = t % p;
        t /= p;
    }
    v
}

/// The monic polynomial `x^n + Σ c_i x^i` for the `t`-th coefficient vector.
fn monic(t: u64, p: u64, n: usize) -> Poly {
    let mut f = digits(t, p, n);
    f.push(1);
    f
}

/// The least monic irreducible of degree `n` over `F_p`, ordering by the
/// coefficient vector read as a base-`p` integer with `c_0` least significant.
pub fn smallest_irreducible(p: u64, n: usize) -> Poly {
    (0..p.pow(n as u32))
        .map(|t| monic(t, p, n))
        .find(|f| {
            (1..=n / 2).all(|d| (0..p.pow(d as u32)).all(|s| !poly_rem(f, &monic(s, p, d), p).is_empty()))
        })
        .expect("irreducible polynomials exist in every degree")
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    n: usize,
    modulus: Poly,
}

impl FiniteField {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        let q = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if q > FIELD_CAP as u128 {
            return Err(Error::CapExceeded { what: "field order", size: q, cap: FIELD_CAP as u128 });
        }
        Ok(FiniteField { p, n, modulus: smallest_irreducible(p, n) })
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The element with coefficient vector given by the base-`p` digits of `t`.
    pub fn element(&self, t: u64) -> Poly {
        trim(digits(t, self.p, self.n))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = self.p;
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % p;
            }
        }
        poly_rem(&c, &self.modulus, p)
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Poly {
        let mut base = a.to_vec();
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^((q-1)/(p-1))`, an element of the prime field.
    pub fn norm(&self, a: &[u64]) -> u64 {
        let q = self.order();
        let v = self.pow(a, (q - 1) / (self.p - 1));
        assert!(v.len() <= 1, "norm must lie in the prime field");
        v.first().copied().unwrap_or(0)
    }

    pub fn is_square(&self, a: &[u64]) -> bool {
        self.pow(a, (self.order() - 1) / 2) == vec![1]
    }

    pub fn multiplicative_order(&self, a: &[u64]) -> u64 {
        let mut k = 1;
        let mut x = a.to_vec();
        while x != vec![1] {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }
}

/// Checks, for every nonzero `x ∈ F_{p^n}`, that `x` is a square iff its norm
/// to `F_p` is a square.
pub fn square_norm_criterion(p: u64, n: usize) -> Result<bool> {
    if p == 2 {
        return Err(Error::OddPrimeRequired(p));
    }
    let f = FiniteField::new(p, n)?;
    Ok((1..f.order()).all(|t| {
        let x = f.element(t);
        f.is_square(&x) == (mod_pow(f.norm(&x), (p - 1) / 2, p) == 1)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn irreducibles() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn f9_generator() {
        let f = FiniteField::new(3, 2).unwrap();
        let g = (1..9).map(|t| f.element(t)).find(|x| f.multiplicative_order(x) == 8).unwrap();
        assert_eq!(f.norm(&g), 2);
        assert!(!f.is_square(&g));
    }

    #[test]
    fn squares_by_enumeration() {
        for (p, n) in [(3, 2), (5, 2), (3, 3), (7, 2)] {
            let f = FiniteField::new(p, n).unwrap();
            let sq: HashSet<Vec<u64>> = (1..f.order()).map(|t| { let x = f.element(t); f.mul(&x, &x) }).collect();
            assert_eq!(sq.len() as u64, (f.order() - 1) / 2);
            for t in 1..f.order() {
                let x = f.element(t);
                assert_eq!(f.is_square(&x), sq.contains(&x));
                let nsq = (1..p).any(|a| a * a % p == f.norm(&x));
                assert_eq!(sq.contains(&x), nsq, "p={p} n={n} t={t}");
            }
        }
    }

    #[test]
    fn criterion() {
        assert!(square_norm_criterion(3, 1).unwrap());
        assert!(square_norm_criterion(3, 2).unwrap());
        assert!(square_norm_criterion(5, 2).unwrap());
        assert!(square_norm_criterion(3, 8).unwrap());
        assert_eq!(square_norm_criterion(2, 3), Err(Error::OddPrimeRequired(2)));
        assert!(matches!(square_norm_criterion(101, 2), Err(Error::CapExceeded { .. })));
    }
}
