//! Univariate polynomials over a [`Field`].
//!
//! Coefficients are stored low-degree first with trailing zeros trimmed, so
//! the zero polynomial is the empty vector. Arithmetic takes the field as an
//! explicit argument.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![Elem::ONE] }
    }

    pub fn constant(e: Elem) -> Poly {
        Poly::from_coeffs(vec![e])
    }

    /// `e * s^d`.
    pub fn monomial(e: Elem, d: usize) -> Poly {
        let mut c = vec![Elem::ZERO; d + 1];
        c[d] = e;
        Poly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Elem>) -> Poly {
        while c.last().is_some_and(|e| e.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn lead(&self) -> Elem {
        self.c.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, f: &Field, e: Elem) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&a| f.mul(a, e)).collect())
    }

    /// Multiplication by `s^d`.
    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Elem::ZERO; d];
        c.extend_from_slice(&self.c);
        Poly { c }
    }

    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Elem::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn divrem(&self, f: &Field, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(d.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let factor = f.mul(r[i + dd], inv);
            q[i] = factor;
            if factor.is_zero() {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(factor, b));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).expect("nonzero lead"))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.c.iter().rev().fold(Elem::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// `s^d p(1/s)`; requires `d >= deg p`.
    pub fn reversed(&self, d: usize) -> Poly {
        debug_assert!(self.degree().is_none_or(|e| e <= d));
        let mut c = vec![Elem::ZERO; d + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[d - i] = a;
        }
        Poly::from_coeffs(c)
    }
}
