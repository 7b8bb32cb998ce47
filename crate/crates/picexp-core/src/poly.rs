//! Univariate polynomial arithmetic over a finite field.
//!
//! Coefficients are stored low-degree-first with no trailing zeros, so the
//! zero polynomial is the empty vector. Operations live on `PolyRing`, a
//! thin context borrowing the coefficient field.

use alloc::vec;
use alloc::vec::Vec;

use crate::ff::{FieldElem, FiniteField};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            coeffs: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn lc(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, ring: &PolyRing) -> bool {
        self.lc() == Some(&ring.field.one())
    }
}

pub struct PolyRing<'f> {
    field: &'f FiniteField,
}

impl<'f> PolyRing<'f> {
    pub fn new(field: &'f FiniteField) -> Self {
        PolyRing {
            field,
        }
    }

    pub fn field(&self) -> &FiniteField {
        self.field
    }

    fn trim(&self, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly {
            coeffs,
        }
    }

    pub fn from_coeffs(&self, coeffs: &[FieldElem]) -> Poly {
        self.trim(coeffs.to_vec())
    }

    /// Builds a polynomial from signed integer coefficients, low-first.
    pub fn from_int_coeffs(&self, coeffs: &[i64]) -> Poly {
        self.trim(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn constant(&self, c: FieldElem) -> Poly {
        self.trim(vec![c])
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn x(&self) -> Poly {
        Poly {
            coeffs: vec![self.field.zero(), self.field.one()],
        }
    }

    /// Coefficient of x^i (zero beyond the stored length).
    pub fn coeff(&self, a: &Poly, i: usize) -> FieldElem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(&self.coeff(a, i), &self.coeff(b, i)));
        }
        self.trim(out)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.sub(&self.coeff(a, i), &self.coeff(b, i)));
        }
        self.trim(out)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(x, y);
                out[i + j] = self.field.add(&out[i + j], &t);
            }
        }
        self.trim(out)
    }

    pub fn mul_scalar(&self, a: &Poly, s: &FieldElem) -> Poly {
        self.trim(a.coeffs.iter().map(|c| self.field.mul(c, s)).collect())
    }

    /// Multiplies by x^k.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.field.zero(); k];
        out.extend(a.coeffs.iter().cloned());
        Poly {
            coeffs: out,
        }
    }

    pub fn divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let Some(db) = b.deg() else {
            return Err(Error::DivisionByZero);
        };
        let ilc = self.field.inv(b.lc().expect("nonzero"))?;
        let mut r = a.coeffs.clone();
        let da = a.coeffs.len();
        if da < db + 1 {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut q = vec![self.field.zero(); da - db];
        for i in (db..da).rev() {
            let c = self.field.mul(&r[i], &ilc);
            if c.is_zero() {
                continue;
            }
            q[i - db] = c.clone();
            for (j, bj) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(&c, bj);
                r[i - db + j] = self.field.sub(&r[i - db + j], &t);
            }
        }
        Ok((self.trim(q), self.trim(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact quotient; the caller asserts divisibility.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(a, b)?;
        if !r.is_zero() {
            return Err(Error::ConsistencyFailure {
                detail: alloc::string::String::from("expected exact polynomial division"),
            });
        }
        Ok(q)
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        match a.lc() {
            None => Poly::zero(),
            Some(lc) => {
                let ilc = self.field.inv(lc).expect("nonzero leading coefficient");
                self.mul_scalar(a, &ilc)
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let r = self.rem(&r0, &r1).expect("nonzero divisor");
            r0 = core::mem::replace(&mut r1, r);
        }
        self.make_monic(&r0)
    }

    /// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = self.one();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = self.one();
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            r0 = core::mem::replace(&mut r1, r);
            let ns = self.sub(&s0, &self.mul(&q, &s1));
            s0 = core::mem::replace(&mut s1, ns);
            let nt = self.sub(&t0, &self.mul(&q, &t1));
            t0 = core::mem::replace(&mut t1, nt);
        }
        match r0.lc() {
            None => (Poly::zero(), Poly::zero(), Poly::zero()),
            Some(lc) => {
                let ilc = self.field.inv(lc).expect("nonzero");
                (
                    self.mul_scalar(&r0, &ilc),
                    self.mul_scalar(&s0, &ilc),
                    self.mul_scalar(&t0, &ilc),
                )
            }
        }
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        if a.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(a.coeffs.len() - 1);
        for (i, c) in a.coeffs.iter().enumerate().skip(1) {
            let n = self.field.from_u64(i as u64);
            out.push(self.field.mul(&n, c));
        }
        self.trim(out)
    }

    pub fn eval(&self, a: &Poly, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.field.mul(&acc, x);
            acc = self.field.add(&acc, c);
        }
        acc
    }

    /// outer(inner(x)).
    pub fn compose(&self, outer: &Poly, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in outer.coeffs.iter().rev() {
            acc = self.mul(&acc, inner);
            acc = self.add(&acc, &self.constant(c.clone()));
        }
        acc
    }

    pub fn pow(&self, a: &Poly, e: usize) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// gcd(f, f') has degree 0. In characteristic p a vanishing derivative
    /// means f is a p-th power, which this correctly reports as non-squarefree.
    pub fn is_squarefree(&self, a: &Poly) -> bool {
        if a.deg().unwrap_or(0) == 0 {
            return true;
        }
        let d = self.derivative(a);
        if d.is_zero() {
            return false;
        }
        self.gcd(a, &d).deg() == Some(0)
    }

    /// Roots in the coefficient field, ascending enumeration order, by scan.
    pub fn roots(&self, a: &Poly) -> Result<Vec<FieldElem>> {
        assert!(!a.is_zero(), "roots of the zero polynomial");
        let mut out = Vec::new();
        for x in self.field.elements()? {
            if self.eval(a, &x).is_zero() {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Maps a polynomial into an extension coefficient-wise.
    pub fn map_through(&self, a: &Poly, emb: &crate::ff::Embedding) -> Poly {
        Poly {
            coeffs: a.coeffs.iter().map(|c| emb.embed(c)).collect(),
        }
    }
}
