//! Arithmetic in F_p, F_q = F_{p^n}, and extensions F_{q^k}.
//!
//! A field of p^m elements is F_p[t]/(modulus) with a monic irreducible
//! modulus of degree m, coefficients stored low-degree-first. Extensions of
//! F_q are represented as degree-(n*k) extensions of F_p with an explicit
//! embedding of F_q, so there is a single arithmetic code path. The modulus,
//! when not supplied, is the lexicographically smallest monic irreducible,
//! comparing coefficient vectors (c0, c1, ...) low-degree-first as integers.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::primes::{factorize_u64, is_prime_u64};
use crate::{Error, Result};

/// Elements enumerated or scanned in one shot are capped at this many.
const SCAN_CAP: u128 = 1 << 26;

/// An element of a finite field: residue coefficients, length = the field's
/// degree over F_p. Ordering matches the enumeration index (high coefficient
/// most significant), giving a canonical representative choice everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

/// A finite field F_{p^m}, optionally marked as an extension of a ground
/// field F_q with q = p^base_degree (used by `frobenius`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: usize,
    /// Monic irreducible over F_p, low-degree-first, length m + 1.
    modulus: Vec<u64>,
    /// Degree over F_p of the designated ground field; divides m.
    base_degree: usize,
}

impl FiniteField {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::PreconditionViolated {
                detail: alloc::format!("{p} is not prime"),
            });
        }
        Ok(FiniteField {
            p,
            m: 1,
            modulus: vec![0, 1],
            base_degree: 1,
        })
    }

    /// F_{p^m} with the deterministic lexicographically smallest modulus.
    pub fn extension(p: u64, m: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::PreconditionViolated {
                detail: alloc::format!("{p} is not prime"),
            });
        }
        if m == 0 {
            return Err(Error::PreconditionViolated {
                detail: "degree must be positive".to_string(),
            });
        }
        if m == 1 {
            return FiniteField::prime(p);
        }
        let modulus = smallest_irreducible(p, m);
        Ok(FiniteField {
            p,
            m,
            modulus,
            base_degree: m,
        })
    }

    /// F_p[t]/(modulus) with a caller-supplied monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::PreconditionViolated {
                detail: alloc::format!("{p} is not prime"),
            });
        }
        if modulus.len() < 2 {
            return Err(Error::PreconditionViolated {
                detail: "modulus must have positive degree".to_string(),
            });
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::PreconditionViolated {
                detail: "modulus coefficients must lie in [0, p)".to_string(),
            });
        }
        if *modulus.last().expect("nonempty") != 1 {
            return Err(Error::PreconditionViolated {
                detail: "modulus must be monic".to_string(),
            });
        }
        let m = modulus.len() - 1;
        if m == 1 {
            // Identity convention: residues mod p, canonical modulus t.
            return FiniteField::prime(p);
        }
        if !fp_irreducible(&modulus, p) {
            return Err(Error::PreconditionViolated {
                detail: "modulus is reducible".to_string(),
            });
        }
        Ok(FiniteField {
            p,
            m,
            modulus,
            base_degree: m,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn base_degree(&self) -> usize {
        self.base_degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// p^m if it fits in a u128.
    pub fn size_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.m {
            acc = acc.checked_mul(self.p as u128)?;
        }
        Some(acc)
    }

    pub fn size_bigint(&self) -> BigInt {
        num_traits::Pow::pow(BigInt::from(self.p), self.m)
    }

    /// Size of the designated ground field, q = p^base_degree.
    pub fn ground_size_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.base_degree {
            acc = acc.checked_mul(self.p as u128)?;
        }
        Some(acc)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    /// The constant element c mod p.
    pub fn from_u64(&self, c: u64) -> FieldElem {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c % self.p;
        FieldElem {
            coeffs,
        }
    }

    /// The residue class of a signed integer.
    pub fn from_i64(&self, c: i64) -> FieldElem {
        let p = self.p as i128;
        let r = ((c as i128 % p) + p) % p;
        self.from_u64(r as u64)
    }

    /// Builds an element from low-degree-first coefficients (length <= m),
    /// reducing each mod p.
    pub fn elem(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.m, "coefficient vector too long");
        let mut out = vec![0; self.m];
        for (i, &c) in coeffs.iter().enumerate() {
            out[i] = c % self.p;
        }
        FieldElem {
            coeffs: out,
        }
    }

    /// The generator t of F_p[t]/(modulus); zero in the prime field.
    pub fn gen(&self) -> FieldElem {
        if self.m == 1 {
            return self.zero();
        }
        let mut coeffs = vec![0; self.m];
        coeffs[1] = 1;
        FieldElem {
            coeffs,
        }
    }

    fn check(&self, a: &FieldElem) {
        debug_assert_eq!(a.coeffs.len(), self.m, "element from a different field");
        debug_assert!(a.coeffs.iter().all(|&c| c < self.p));
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| add_mod(x, y, self.p))
            .collect();
        FieldElem {
            coeffs,
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| sub_mod(x, y, self.p))
            .collect();
        FieldElem {
            coeffs,
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.check(a);
        let coeffs = a.coeffs.iter().map(|&x| sub_mod(0, x, self.p)).collect();
        FieldElem {
            coeffs,
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if self.m == 1 {
            return FieldElem {
                coeffs: vec![mul_mod(a.coeffs[0], b.coeffs[0], self.p)],
            };
        }
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, self.p), self.p);
            }
        }
        self.reduce(prod)
    }

    /// Reduces a low-degree-first coefficient vector by the monic modulus.
    fn reduce(&self, mut v: Vec<u64>) -> FieldElem {
        for i in (self.m..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            v[i] = 0;
            for (j, &mj) in self.modulus.iter().enumerate().take(self.m) {
                let idx = i - self.m + j;
                v[idx] = sub_mod(v[idx], mul_mod(c, mj, self.p), self.p);
            }
        }
        v.truncate(self.m);
        FieldElem {
            coeffs: v,
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(FieldElem {
                coeffs: vec![inv_mod(a.coeffs[0], self.p)],
            });
        }
        let inv = fp_poly_invmod(&a.coeffs, &self.modulus, self.p)
            .expect("nonzero element invertible modulo an irreducible");
        let mut coeffs = inv;
        coeffs.resize(self.m, 0);
        Ok(FieldElem {
            coeffs,
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
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

    pub fn pow_big(&self, a: &FieldElem, e: &BigInt) -> FieldElem {
        assert!(!e.is_negative(), "pow_big needs a nonnegative exponent");
        let mut acc = self.one();
        let mut base = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    /// x -> x^{q^steps} for the designated ground field q = p^base_degree.
    pub fn frobenius(&self, a: &FieldElem, steps: usize) -> FieldElem {
        let mut r = a.clone();
        for _ in 0..steps * self.base_degree {
            r = self.pow(&r, self.p as u128);
        }
        r
    }

    /// Enumeration index: sum of coeffs[j] * p^j.
    pub fn index_of(&self, a: &FieldElem) -> u128 {
        self.check(a);
        let mut acc: u128 = 0;
        for &c in a.coeffs.iter().rev() {
            acc = acc * self.p as u128 + c as u128;
        }
        acc
    }

    pub fn element_by_index(&self, mut idx: u128) -> FieldElem {
        let mut coeffs = vec![0u64; self.m];
        for c in coeffs.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        assert_eq!(idx, 0, "index out of range");
        FieldElem {
            coeffs,
        }
    }

    /// All p^m elements in index order. Capped: enumeration is a desk-scale
    /// operation.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElem> + '_> {
        let size = self.size_u128().filter(|&s| s <= SCAN_CAP).ok_or(
            Error::CapExceeded {
                needed: self.size_u128().unwrap_or(u128::MAX),
                cap: SCAN_CAP,
            },
        )?;
        Ok((0..size).map(|i| self.element_by_index(i)))
    }

    /// Trace to F_p: a + a^p + ... + a^{p^{m-1}}, returned as a residue.
    pub fn trace_to_prime(&self, a: &FieldElem) -> u64 {
        self.check(a);
        let mut acc = a.clone();
        let mut r = a.clone();
        for _ in 1..self.m {
            r = self.pow(&r, self.p as u128);
            acc = self.add(&acc, &r);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace not in F_p");
        acc.coeffs[0]
    }

    /// Quadratic character for odd characteristic: 0 on zero, 1 on nonzero
    /// squares, -1 otherwise.
    pub fn legendre(&self, a: &FieldElem) -> i32 {
        assert!(self.p != 2, "quadratic character needs odd characteristic");
        if a.is_zero() {
            return 0;
        }
        let e = (self.size_bigint() - 1) / 2;
        let r = self.pow_big(a, &e);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    /// A square root, if one exists. Deterministic: Tonelli-Shanks with the
    /// first non-residue in enumeration order; in characteristic 2 squaring
    /// is bijective and the root is unique.
    pub fn sqrt(&self, a: &FieldElem) -> Option<FieldElem> {
        self.check(a);
        if a.is_zero() {
            return Some(self.zero());
        }
        if self.p == 2 {
            let mut r = a.clone();
            for _ in 1..self.m {
                r = self.mul(&r, &r);
            }
            return Some(r);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let q_minus_1 = self.size_bigint() - BigInt::one();
        let s = q_minus_1.trailing_zeros().expect("nonzero");
        let t = &q_minus_1 >> s;
        // z: first non-residue in index order.
        let mut z = None;
        for idx in 2.. {
            let cand = self.element_by_index(idx);
            if self.legendre(&cand) == -1 {
                z = Some(cand);
                break;
            }
        }
        let z = z.expect("non-residues exist in odd characteristic");
        let mut c = self.pow_big(&z, &t);
        let mut r = self.pow_big(a, &((&t + BigInt::one()) / BigInt::from(2)));
        let mut u = self.pow_big(a, &t);
        let mut level = s;
        let one = self.one();
        while u != one {
            let mut i = 0u64;
            let mut probe = u.clone();
            while probe != one {
                probe = self.mul(&probe, &probe);
                i += 1;
                assert!(i < level, "square root loop invariant violated");
            }
            let mut b = c.clone();
            for _ in 0..level - i - 1 {
                b = self.mul(&b, &b);
            }
            r = self.mul(&r, &b);
            c = self.mul(&b, &b);
            u = self.mul(&u, &c);
            level = i;
        }
        debug_assert_eq!(self.mul(&r, &r), *a);
        Some(r)
    }

    /// Solves z^2 + z = c in characteristic 2, as F_2-linear algebra on the
    /// map z -> z^2 + z. Returns None when no solution exists (trace 1).
    pub fn artin_schreier_solve(&self, c: &FieldElem) -> Option<FieldElem> {
        assert_eq!(self.p, 2, "Artin-Schreier solve is a characteristic-2 tool");
        self.check(c);
        let mut cols = Vec::with_capacity(self.m);
        for j in 0..self.m {
            let mut e = self.zero();
            e.coeffs[j] = 1;
            let img = self.add(&self.mul(&e, &e), &e);
            cols.push(img.coeffs);
        }
        let rows: Vec<Vec<u64>> = (0..self.m)
            .map(|i| (0..self.m).map(|j| cols[j][i]).collect())
            .collect();
        solve_linear_fp(self.p, &rows, &c.coeffs).map(|sol| FieldElem {
            coeffs: sol,
        })
    }

    /// Matrix (rows) of x -> x^{p^d} in the power basis.
    fn frob_power_matrix(&self, d: usize) -> Vec<Vec<u64>> {
        let mut cols = Vec::with_capacity(self.m);
        let pe = num_traits::Pow::pow(BigInt::from(self.p), d);
        for j in 0..self.m {
            let mut e = self.zero();
            e.coeffs[j] = 1;
            let img = self.pow_big(&e, &pe);
            cols.push(img.coeffs);
        }
        (0..self.m)
            .map(|i| (0..self.m).map(|j| cols[j][i]).collect())
            .collect()
    }

    /// All elements fixed by x -> x^{p^d}: the subfield F_{p^d} when d | m.
    /// Sorted by enumeration index.
    pub fn subfield_elements(&self, d: usize) -> Result<Vec<FieldElem>> {
        assert!(d >= 1 && self.m % d == 0, "subfield degree must divide m");
        let count = (self.p as u128).checked_pow(d as u32);
        if count.is_none() || count.expect("checked") > SCAN_CAP {
            return Err(Error::CapExceeded {
                needed: count.unwrap_or(u128::MAX),
                cap: SCAN_CAP,
            });
        }
        let mut mat = self.frob_power_matrix(d);
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = sub_mod(row[i], 1, self.p);
        }
        let basis = kernel_fp(self.p, &mat);
        assert_eq!(basis.len(), d, "fixed field has wrong dimension");
        let mut out = Vec::with_capacity(count.expect("checked") as usize);
        let total = count.expect("checked");
        for mut idx in 0..total {
            let mut acc = vec![0u64; self.m];
            for b in &basis {
                let digit = (idx % self.p as u128) as u64;
                idx /= self.p as u128;
                if digit != 0 {
                    for (a, &x) in acc.iter_mut().zip(b) {
                        *a = add_mod(*a, mul_mod(digit, x, self.p), self.p);
                    }
                }
            }
            out.push(FieldElem {
                coeffs: acc,
            });
        }
        out.sort_unstable();
        out.dedup();
        assert_eq!(out.len() as u128, total, "subfield enumeration collision");
        Ok(out)
    }

    /// Extension of degree k with an embedding, per the single-code-path
    /// representation: the result has degree m*k over F_p and inherits this
    /// field's ground-field marker.
    pub fn make_extension(&self, k: usize) -> Result<(FiniteField, Embedding)> {
        assert!(k >= 1, "extension degree must be positive");
        if k == 1 {
            let ext = self.clone();
            let gen_pows = (0..self.m)
                .map(|i| self.pow(&self.gen(), i as u128))
                .collect();
            return Ok((
                ext.clone(),
                Embedding {
                    base: self.clone(),
                    ext,
                    gen_pows,
                },
            ));
        }
        let big_m = self.m * k;
        let modulus = smallest_irreducible(self.p, big_m);
        let ext = FiniteField {
            p: self.p,
            m: big_m,
            modulus,
            base_degree: self.base_degree,
        };
        let gen_image = if self.m == 1 {
            ext.zero()
        } else {
            let candidates = ext.subfield_elements(self.m)?;
            let mut root = None;
            for cand in candidates {
                if ext.eval_fp_poly(&self.modulus, &cand).is_zero() {
                    root = Some(cand);
                    break;
                }
            }
            root.expect("base modulus splits in the extension")
        };
        let mut gen_pows = Vec::with_capacity(self.m);
        let mut acc = ext.one();
        for _ in 0..self.m {
            gen_pows.push(acc.clone());
            acc = ext.mul(&acc, &gen_image);
        }
        Ok((
            ext.clone(),
            Embedding {
                base: self.clone(),
                ext,
                gen_pows,
            },
        ))
    }

    /// Evaluates a polynomial with F_p coefficients at an element.
    fn eval_fp_poly(&self, poly: &[u64], x: &FieldElem) -> FieldElem {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.from_u64(c));
        }
        acc
    }
}

/// An injective homomorphism F_{p^m} -> F_{p^{mk}}, determined by the image
/// of the base generator (a root of the base modulus in the extension).
#[derive(Debug, Clone)]
pub struct Embedding {
    base: FiniteField,
    ext: FiniteField,
    gen_pows: Vec<FieldElem>,
}

impl Embedding {
    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn ext(&self) -> &FiniteField {
        &self.ext
    }

    pub fn embed(&self, a: &FieldElem) -> FieldElem {
        assert_eq!(a.coeffs.len(), self.base.m, "element not in the base field");
        let mut acc = self.ext.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c != 0 {
                let term = self.ext.mul(&self.gen_pows[i], &self.ext.from_u64(c));
                acc = self.ext.add(&acc, &term);
            }
        }
        acc
    }

    /// Inverse of `embed` on its image; None when the element is not in the
    /// embedded copy of the base field.
    pub fn project(&self, b: &FieldElem) -> Option<FieldElem> {
        assert_eq!(b.coeffs.len(), self.ext.m, "element not in the extension");
        let p = self.ext.p;
        let rows: Vec<Vec<u64>> = (0..self.ext.m)
            .map(|i| (0..self.base.m).map(|j| self.gen_pows[j].coeffs[i]).collect())
            .collect();
        solve_linear_fp(p, &rows, &b.coeffs).map(|sol| FieldElem {
            coeffs: sol,
        })
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + (p - b) as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p prime, a nonzero.
    debug_assert!(a % p != 0);
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

// Polynomial helpers over F_p (coefficients low-degree-first). These are
// deliberately independent of FiniteField: they bootstrap modulus selection
// and irreducibility testing before any field exists.

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of a modulo a monic m.
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = fp_deg(m).expect("monic modulus");
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    while let Some(d) = fp_deg(&r) {
        if d < md {
            break;
        }
        let c = r[d];
        r[d] = 0;
        for (j, &mj) in m.iter().enumerate().take(md) {
            let idx = d - md + j;
            r[idx] = sub_mod(r[idx], mul_mod(c, mj, p), p);
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    fp_rem(&fp_mul(a, b, p), m, p)
}

/// base^e mod m for u64 exponents.
fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = sub_mod(x, y, p);
    }
    fp_trim(&mut out);
    out
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    while !r1.is_empty() {
        let r = fp_rem(&r0, &fp_make_monic(&r1, p), p);
        // Remainder against the monic rescale has the same roots; rescale
        // does not change the gcd up to units.
        r0 = core::mem::replace(&mut r1, r);
    }
    fp_make_monic(&r0, p)
}

fn fp_make_monic(a: &[u64], p: u64) -> Vec<u64> {
    let mut out = a.to_vec();
    fp_trim(&mut out);
    if let Some(d) = fp_deg(&out) {
        let lc = out[d];
        if lc != 1 {
            let ilc = inv_mod(lc, p);
            for c in out.iter_mut() {
                *c = mul_mod(*c, ilc, p);
            }
        }
    }
    out
}

/// Inverse of a modulo the monic irreducible m, or None when gcd != 1.
fn fp_poly_invmod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = fp_rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let d1 = fp_deg(&r1).expect("nonempty");
        if fp_deg(&r0).map(|d0| d0 < d1).unwrap_or(true) {
            core::mem::swap(&mut r0, &mut r1);
            core::mem::swap(&mut s0, &mut s1);
            continue;
        }
        // One elimination step of long division.
        let d0 = fp_deg(&r0).expect("nonempty");
        let shift = d0 - d1;
        let c = mul_mod(r0[d0], inv_mod(r1[d1], p), p);
        let mut q = vec![0u64; shift + 1];
        q[shift] = c;
        r0 = fp_sub(&r0, &fp_mul(&q, &r1, p), p);
        s0 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
    }
    let d = fp_deg(&r0)?;
    if d != 0 {
        return None;
    }
    let scale = inv_mod(r0[0], p);
    let mut out = fp_rem(&s0, m, p);
    for c in out.iter_mut() {
        *c = mul_mod(*c, scale, p);
    }
    Some(out)
}

/// Deterministic irreducibility test for a monic f of degree m over F_p:
/// x^{p^m} = x mod f, and gcd(x^{p^{m/l}} - x, f) = 1 for each prime l | m.
fn fp_irreducible(f: &[u64], p: u64) -> bool {
    let m = fp_deg(f).expect("nonzero polynomial");
    debug_assert_eq!(f[m], 1, "irreducibility test expects monic input");
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // Iterated Frobenius: chain[i] = x^{p^{i+1}} mod f.
    let mut chain = Vec::with_capacity(m);
    let mut t = x.clone();
    for _ in 0..m {
        t = fp_powmod(&t, p, f, p);
        chain.push(t.clone());
    }
    if chain[m - 1] != x {
        return false;
    }
    for (l, _) in factorize_u64(m as u64) {
        let i = m / l as usize;
        let diff = fp_sub(&chain[i - 1], &x, p);
        let g = fp_gcd(&diff, f, p);
        if fp_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree m over F_p,
/// comparing (c0, c1, ..., c_{m-1}) low-degree-first as integers.
fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
    assert!(m >= 1);
    if m == 1 {
        return vec![0, 1];
    }
    let mut digits = vec![0u64; m]; // digits[0] = c0, most significant
    loop {
        let mut cand = digits.clone();
        cand.push(1);
        if fp_irreducible(&cand, p) {
            return cand;
        }
        // Odometer increment with c_{m-1} fastest.
        let mut i = m;
        loop {
            assert!(i > 0, "no irreducible of degree {m} found");
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Solves A x = b over F_p by Gaussian elimination; A given as rows. Free
/// variables are set to zero, so the solution is deterministic. Returns
/// None when the system is inconsistent.
pub(crate) fn solve_linear_fp(p: u64, rows: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let nrows = rows.len();
    assert_eq!(nrows, b.len());
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let ipiv = inv_mod(a[rank][col], p);
        for c in col..=ncols {
            a[rank][c] = mul_mod(a[rank][c], ipiv, p);
        }
        for r in 0..nrows {
            if r != rank && a[r][col] != 0 {
                let factor = a[r][col];
                for c in col..=ncols {
                    let t = mul_mod(factor, a[rank][c], p);
                    a[r][c] = sub_mod(a[r][c], t, p);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    for row in a.iter().skip(rank) {
        if row[ncols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; ncols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = a[r][ncols];
    }
    Some(x)
}

/// Basis of the kernel of A over F_p; A given as rows.
pub(crate) fn kernel_fp(p: u64, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let ipiv = inv_mod(a[rank][col], p);
        for c in col..ncols {
            a[rank][c] = mul_mod(a[rank][c], ipiv, p);
        }
        for r in 0..nrows {
            if r != rank && a[r][col] != 0 {
                let factor = a[r][col];
                for c in col..ncols {
                    let t = mul_mod(factor, a[rank][c], p);
                    a[r][c] = sub_mod(a[r][c], t, p);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = sub_mod(0, a[r][free], p);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_moduli() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]); // t^2+t+1
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1, 1]); // x^3+x^2+1
        assert_eq!(smallest_irreducible(2, 6), vec![1, 0, 0, 0, 0, 1, 1]); // x^6+x^5+1
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]); // x^2+1
    }

    #[test]
    fn f4_multiplication_table_entry() {
        let f4 = FiniteField::extension(2, 2).unwrap();
        let t = f4.gen();
        let t1 = f4.add(&t, &f4.one());
        assert_eq!(f4.mul(&t, &t1), f4.one());
    }

    #[test]
    fn extension_of_prime_is_identity_for_k1() {
        let f3 = FiniteField::prime(3).unwrap();
        let (ext, emb) = f3.make_extension(1).unwrap();
        assert_eq!(ext, f3);
        for c in 0..3 {
            let e = f3.from_u64(c);
            assert_eq!(emb.embed(&e), e);
        }
    }

    #[test]
    fn f4_cubed_embedding() {
        let f4 = FiniteField::extension(2, 2).unwrap();
        let (f64_field, emb) = f4.make_extension(3).unwrap();
        assert_eq!(f64_field.degree(), 6);
        assert_eq!(f64_field.size_u128(), Some(64));
        // The embedded generator satisfies the base modulus t^2 + t + 1.
        let rho = emb.embed(&f4.gen());
        let val = f64_field.add(
            &f64_field.add(&f64_field.mul(&rho, &rho), &rho),
            &f64_field.one(),
        );
        assert!(val.is_zero());
        // Multiplicative order of the F_4 generator is 3.
        assert_eq!(f64_field.pow(&rho, 3), f64_field.one());
        assert_ne!(rho, f64_field.one());
    }

    #[test]
    fn embedding_injective_multiplicative() {
        for (p, n, k) in [(2u64, 2usize, 3usize), (3, 2, 2), (5, 1, 2)] {
            let base = FiniteField::extension(p, n).unwrap();
            let (ext, emb) = base.make_extension(k).unwrap();
            let elems: Vec<_> = base.elements().unwrap().collect();
            let mut images = Vec::new();
            for a in &elems {
                images.push(emb.embed(a));
            }
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len(), elems.len(), "embedding not injective");
            for a in &elems {
                for b in &elems {
                    let lhs = emb.embed(&base.mul(a, b));
                    let rhs = ext.mul(&emb.embed(a), &emb.embed(b));
                    assert_eq!(lhs, rhs);
                    let lhs = emb.embed(&base.add(a, b));
                    let rhs = ext.add(&emb.embed(a), &emb.embed(b));
                    assert_eq!(lhs, rhs);
                }
            }
            for a in &elems {
                let projected = emb.project(&emb.embed(a));
                assert_eq!(projected.as_ref(), Some(a));
            }
        }
    }

    #[test]
    fn inverse_law_exhaustive() {
        for field in [
            FiniteField::prime(7).unwrap(),
            FiniteField::extension(2, 3).unwrap(),
            FiniteField::extension(3, 2).unwrap(),
        ] {
            for a in field.elements().unwrap() {
                if a.is_zero() {
                    assert_eq!(field.inv(&a), Err(Error::DivisionByZero));
                } else {
                    assert_eq!(field.mul(&a, &field.inv(&a).unwrap()), field.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_base_field() {
        let f9 = FiniteField::extension(3, 1).unwrap();
        let (ext, _) = f9.make_extension(2).unwrap();
        assert_eq!(ext.base_degree(), 1);
        let fixed = ext
            .elements()
            .unwrap()
            .filter(|a| ext.frobenius(a, 1) == *a)
            .count();
        assert_eq!(fixed, 3);
    }

    #[test]
    fn power_map_identity_small_fields() {
        for field in [
            FiniteField::extension(2, 6).unwrap(),
            FiniteField::extension(3, 4).unwrap(),
            FiniteField::extension(5, 2).unwrap(),
        ] {
            let size = field.size_u128().unwrap();
            for a in field.elements().unwrap() {
                assert_eq!(field.pow(&a, size), a);
            }
        }
    }

    #[test]
    fn index_roundtrip_and_order() {
        let f = FiniteField::extension(3, 2).unwrap();
        let elems: Vec<_> = f.elements().unwrap().collect();
        for (i, a) in elems.iter().enumerate() {
            assert_eq!(f.index_of(a), i as u128);
            assert_eq!(&f.element_by_index(i as u128), a);
        }
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, elems, "Ord must match enumeration order");
    }

    #[test]
    fn sqrt_odd_characteristic() {
        for field in [
            FiniteField::prime(13).unwrap(),
            FiniteField::extension(3, 2).unwrap(),
            FiniteField::extension(5, 2).unwrap(),
        ] {
            let mut squares = 0usize;
            for a in field.elements().unwrap() {
                match field.sqrt(&a) {
                    Some(r) => {
                        assert_eq!(field.mul(&r, &r), a);
                        squares += 1;
                    }
                    None => assert_eq!(field.legendre(&a), -1),
                }
            }
            let q = field.size_u128().unwrap() as usize;
            assert_eq!(squares, (q + 1) / 2);
        }
    }

    #[test]
    fn sqrt_char2_bijective() {
        let f8 = FiniteField::extension(2, 3).unwrap();
        for a in f8.elements().unwrap() {
            let r = f8.sqrt(&a).unwrap();
            assert_eq!(f8.mul(&r, &r), a);
        }
    }

    #[test]
    fn artin_schreier_solutions() {
        let f8 = FiniteField::extension(2, 3).unwrap();
        let mut solvable = 0usize;
        for c in f8.elements().unwrap() {
            match f8.artin_schreier_solve(&c) {
                Some(z) => {
                    let check = f8.add(&f8.mul(&z, &z), &z);
                    assert_eq!(check, c);
                    assert_eq!(f8.trace_to_prime(&c), 0);
                    solvable += 1;
                }
                None => assert_eq!(f8.trace_to_prime(&c), 1),
            }
        }
        assert_eq!(solvable, 4);
    }

    #[test]
    fn legendre_multiplicative() {
        let f = FiniteField::extension(5, 2).unwrap();
        let elems: Vec<_> = f.elements().unwrap().collect();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(5) {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                assert_eq!(
                    f.legendre(&f.mul(a, b)),
                    f.legendre(a) * f.legendre(b)
                );
            }
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FiniteField::with_modulus(2, vec![0, 0, 1]).is_err()); // x^2
        assert!(FiniteField::with_modulus(2, vec![1, 0, 1]).is_err()); // (x+1)^2
        assert!(FiniteField::with_modulus(3, vec![1, 1, 2]).is_err()); // not monic
        assert!(FiniteField::with_modulus(4, vec![1, 1, 1]).is_err()); // p not prime
        assert!(FiniteField::with_modulus(2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn custom_modulus_accepted() {
        // x^2 + x + 2 over F_3 is irreducible (no roots: 2, 1, 2).
        let f = FiniteField::with_modulus(3, vec![2, 1, 1]).unwrap();
        assert_eq!(f.size_u128(), Some(9));
        let t = f.gen();
        // t^2 = -t - 2 = 2t + 1.
        assert_eq!(f.mul(&t, &t), f.elem(&[1, 2]));
    }

    #[test]
    fn linear_solver_and_kernel() {
        // Over F_5: x + 2y = 3, 2x + 4y = 2 is inconsistent (2*3 = 1 != 2).
        let rows = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(solve_linear_fp(5, &rows, &[3, 2]), None);
        // Consistent variant: second equation is twice the first.
        assert_eq!(solve_linear_fp(5, &rows, &[3, 1]), Some(vec![3, 0]));
        let kern = kernel_fp(5, &rows);
        assert_eq!(kern.len(), 1);
        // Kernel vector satisfies both equations.
        let v = &kern[0];
        assert_eq!((v[0] + 2 * v[1]) % 5, 0);
    }

    proptest::proptest! {
        #[test]
        fn ring_axioms_f8(ai in 0u128..8, bi in 0u128..8, ci in 0u128..8) {
            let f = FiniteField::extension(2, 3).unwrap();
            let a = f.element_by_index(ai);
            let b = f.element_by_index(bi);
            let c = f.element_by_index(ci);
            proptest::prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            proptest::prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            proptest::prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            proptest::prop_assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
        }

        #[test]
        fn ring_axioms_f49(ai in 0u128..49, bi in 0u128..49, ci in 0u128..49) {
            let f = FiniteField::extension(7, 2).unwrap();
            let a = f.element_by_index(ai);
            let b = f.element_by_index(bi);
            let c = f.element_by_index(ci);
            proptest::prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            proptest::prop_assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            proptest::prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a);
        }
    }
}
