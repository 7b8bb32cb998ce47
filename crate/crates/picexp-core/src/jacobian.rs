//! Divisor class arithmetic on odd-model curves: Cantor composition in
//! reduced Mumford form, exhaustive class enumeration, element orders, and
//! group profiles (order histogram, exponent, invariant factors).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};

use crate::curve::{HyperellipticCurve, ModelParity};
use crate::ff::{Embedding, FieldElem};
use crate::poly::{Poly, PolyRing};
use crate::{Error, Result};

/// A reduced Mumford pair: u monic with deg u <= g, deg v < deg u, and
/// u | v^2 + hv - f. The reduced pair is unique per class, so equality is
/// coefficient equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacClass {
    pub u: Poly,
    pub v: Poly,
}

impl JacClass {
    /// Canonical sort key: (deg u, u coefficients, v coefficients) with
    /// coefficients in enumeration order.
    fn key(&self) -> (usize, Vec<Vec<u64>>, Vec<Vec<u64>>) {
        let flat = |p: &Poly| -> Vec<Vec<u64>> {
            p.coeffs().iter().map(|c| c.coeffs().to_vec()).collect()
        };
        (
            self.u.deg().unwrap_or(0),
            flat(&self.u),
            flat(&self.v),
        )
    }
}

impl PartialOrd for JacClass {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for JacClass {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// How a group profile was measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileMode {
    Exhaustive,
    /// Orders of seeded random classes only; the caller supplies the group
    /// order (from the zeta data) since enumeration is off the table.
    Sampled { h: BigInt, seed: u64, samples: usize },
}

/// Measured group structure. In sampled mode `exponent` is only a certified
/// lower bound and the histogram covers the sample, not the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub h: BigInt,
    pub exponent: BigInt,
    pub exponent_is_lower_bound: bool,
    pub order_histogram: BTreeMap<BigInt, u64>,
    pub invariant_factors: Option<Vec<BigInt>>,
    pub sampled: bool,
}

/// Number of classes of order >= m, from an exhaustive profile.
pub fn order_count(profile: &GroupProfile, m: &BigInt) -> Result<BigInt> {
    if profile.sampled {
        return Err(Error::SampledProfileUnsupported);
    }
    Ok(profile
        .order_histogram
        .iter()
        .filter(|(k, _)| *k >= m)
        .map(|(_, &c)| BigInt::from(c))
        .sum())
}

/// The divisor class group of an odd-model curve.
pub struct Jacobian<'c> {
    curve: &'c HyperellipticCurve,
}

impl<'c> Jacobian<'c> {
    pub fn new(curve: &'c HyperellipticCurve) -> Result<Self> {
        if curve.parity() != ModelParity::Odd {
            return Err(Error::PreconditionViolated {
                detail: String::from("divisor arithmetic needs an odd model"),
            });
        }
        Ok(Jacobian {
            curve,
        })
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        self.curve
    }

    fn ring(&self) -> PolyRing<'_> {
        PolyRing::new(self.curve.field())
    }

    pub fn identity(&self) -> JacClass {
        JacClass {
            u: self.ring().one(),
            v: Poly::zero(),
        }
    }

    /// Mumford validity: u monic of degree <= g, deg v < deg u, and
    /// u | v^2 + hv - f.
    pub fn is_valid(&self, a: &JacClass) -> bool {
        let ring = self.ring();
        let g = self.curve.genus();
        let du = match a.u.deg() {
            Some(d) if a.u.is_monic(&ring) && d <= g => d,
            _ => return false,
        };
        if a.v.deg().is_some_and(|dv| dv >= du) {
            return false;
        }
        let m = self.mumford_residual(&a.u, &a.v);
        m.map(|r| r.is_zero()).unwrap_or(false)
    }

    /// (v^2 + hv - f) mod u.
    fn mumford_residual(&self, u: &Poly, v: &Poly) -> Result<Poly> {
        let ring = self.ring();
        let t = ring.sub(
            &ring.add(&ring.mul(v, v), &ring.mul(self.curve.h(), v)),
            self.curve.f(),
        );
        ring.rem(&t, u)
    }

    /// The class of [P - infinity] for an affine rational point P.
    pub fn class_from_point(&self, x: &FieldElem, y: &FieldElem) -> Result<JacClass> {
        let ring = self.ring();
        let field = self.curve.field();
        let u = ring.from_coeffs(&[field.neg(x), field.one()]);
        let v = ring.constant(y.clone());
        let c = JacClass {
            u,
            v,
        };
        if !self.is_valid(&c) {
            return Err(Error::PreconditionViolated {
                detail: String::from("point is not on the curve"),
            });
        }
        Ok(c)
    }

    /// Brings a semi-reduced pair down to deg u <= g and normalizes.
    fn reduce(&self, mut u: Poly, mut v: Poly) -> Result<JacClass> {
        let ring = self.ring();
        let g = self.curve.genus();
        loop {
            let du = u.deg().ok_or(Error::DivisionByZero)?;
            if du <= g {
                break;
            }
            // u' = (f - vh - v^2)/u, v' = (-h - v) mod u'.
            let num = ring.sub(
                self.curve.f(),
                &ring.add(&ring.mul(&v, self.curve.h()), &ring.mul(&v, &v)),
            );
            let unew = ring.make_monic(&ring.div_exact(&num, &u)?);
            let vnew = ring.rem(&ring.neg(&ring.add(self.curve.h(), &v)), &unew)?;
            u = unew;
            v = vnew;
        }
        let u = ring.make_monic(&u);
        let v = ring.rem(&v, &u)?;
        Ok(JacClass {
            u,
            v,
        })
    }

    /// Cantor composition followed by reduction.
    pub fn compose(&self, a: &JacClass, b: &JacClass) -> Result<JacClass> {
        let ring = self.ring();
        let h = self.curve.h();
        let f = self.curve.f();
        let (d1, e1, e2) = ring.xgcd(&a.u, &b.u);
        let vsum = ring.add(&ring.add(&a.v, &b.v), h);
        let (d, c1, c2) = ring.xgcd(&d1, &vsum);
        // s1 u1 + s2 u2 + s3 (v1 + v2 + h) = d.
        let s1 = ring.mul(&c1, &e1);
        let s2 = ring.mul(&c1, &e2);
        let s3 = c2;
        let dd = ring.mul(&d, &d);
        let u = ring.div_exact(&ring.mul(&a.u, &b.u), &dd)?;
        let t = ring.add(
            &ring.add(
                &ring.mul(&ring.mul(&s1, &a.u), &b.v),
                &ring.mul(&ring.mul(&s2, &b.u), &a.v),
            ),
            &ring.mul(&s3, &ring.add(&ring.mul(&a.v, &b.v), f)),
        );
        let v = ring.rem(&ring.div_exact(&t, &d)?, &u)?;
        self.reduce(u, v)
    }

    /// The inverse class: v goes to (-h - v) mod u.
    pub fn neg(&self, a: &JacClass) -> JacClass {
        let ring = self.ring();
        let v = ring
            .rem(&ring.neg(&ring.add(self.curve.h(), &a.v)), &a.u)
            .expect("u is monic and nonzero");
        JacClass {
            u: a.u.clone(),
            v,
        }
    }

    pub fn sub(&self, a: &JacClass, b: &JacClass) -> Result<JacClass> {
        self.compose(a, &self.neg(b))
    }

    /// n-fold sum by square-and-add; negative n through the inverse.
    pub fn scalar_mul(&self, a: &JacClass, n: &BigInt) -> Result<JacClass> {
        if n.is_negative() {
            return self.scalar_mul(&self.neg(a), &(-n));
        }
        let mut acc = self.identity();
        if n.is_zero() {
            return Ok(acc);
        }
        let bits = n.bits();
        for i in (0..bits).rev() {
            acc = self.compose(&acc, &acc)?;
            if n.bit(i) {
                acc = self.compose(&acc, a)?;
            }
        }
        Ok(acc)
    }

    /// Every reduced Mumford pair, ascending by (deg u, u, v). The scan
    /// walks all q^{2d} candidate pairs per degree d, so the cap bounds
    /// sum_d q^{2d}.
    pub fn enumerate_classes(&self, cap: u128) -> Result<Vec<JacClass>> {
        let ring = self.ring();
        let field = self.curve.field();
        let g = self.curve.genus();
        let q = field.size_u128().ok_or(Error::CapExceeded {
            needed: u128::MAX,
            cap,
        })?;
        let mut needed: u128 = 0;
        for d in 0..=g as u32 {
            needed = q
                .checked_pow(2 * d)
                .and_then(|t| needed.checked_add(t))
                .ok_or(Error::CapExceeded {
                    needed: u128::MAX,
                    cap,
                })?;
        }
        if needed > cap {
            return Err(Error::CapExceeded {
                needed,
                cap,
            });
        }
        let mut out = vec![self.identity()];
        for d in 1..=g {
            let count = q.pow(d as u32);
            for ui in 0..count {
                let mut ucoeffs: Vec<FieldElem> = Vec::with_capacity(d + 1);
                let mut idx = ui;
                for _ in 0..d {
                    ucoeffs.push(field.element_by_index(idx % q));
                    idx /= q;
                }
                ucoeffs.push(field.one());
                let u = ring.from_coeffs(&ucoeffs);
                for vi in 0..count {
                    let mut vcoeffs: Vec<FieldElem> = Vec::with_capacity(d);
                    let mut idx = vi;
                    for _ in 0..d {
                        vcoeffs.push(field.element_by_index(idx % q));
                        idx /= q;
                    }
                    let v = ring.from_coeffs(&vcoeffs);
                    if self.mumford_residual(&u, &v)?.is_zero() {
                        out.push(JacClass {
                            u: u.clone(),
                            v,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact order through divisor refinement against the supplied
    /// factorization of the group order.
    pub fn element_order(&self, a: &JacClass, h_factored: &[(BigInt, u32)]) -> Result<BigInt> {
        let mut o: BigInt = h_factored
            .iter()
            .map(|(p, e)| p.pow(*e))
            .product();
        if o.is_zero() {
            o = BigInt::one();
        }
        let id = self.identity();
        for (p, _) in h_factored {
            while (&o % p).is_zero() {
                let trial = &o / p;
                if self.scalar_mul(a, &trial)? == id {
                    o = trial;
                } else {
                    break;
                }
            }
        }
        Ok(o)
    }

    /// Smallest k >= 1 with a^k in the subgroup, by divisor refinement from
    /// the full order of a.
    fn order_in_quotient(
        &self,
        a: &JacClass,
        full_order: &BigInt,
        subgroup: &BTreeSet<JacClass>,
        primes: &[BigInt],
    ) -> Result<BigInt> {
        let mut o = full_order.clone();
        for p in primes {
            while (&o % p).is_zero() {
                let trial = &o / p;
                if subgroup.contains(&self.scalar_mul(a, &trial)?) {
                    o = trial;
                } else {
                    break;
                }
            }
        }
        Ok(o)
    }

    /// Invariant factors d_1 | d_2 | ... | d_r by repeatedly splitting off a
    /// maximal-order cyclic factor of the successive quotients.
    fn invariant_factors(
        &self,
        classes: &[JacClass],
        orders: &BTreeMap<JacClass, BigInt>,
        primes: &[BigInt],
    ) -> Result<Vec<BigInt>> {
        let mut subgroup: BTreeSet<JacClass> = BTreeSet::new();
        subgroup.insert(self.identity());
        let mut factors_desc: Vec<BigInt> = Vec::new();
        loop {
            if subgroup.len() == classes.len() {
                break;
            }
            // Orders in the quotient by the current subgroup; pick the first
            // class realizing the quotient exponent.
            let mut best: Option<(BigInt, JacClass)> = None;
            for c in classes {
                if subgroup.contains(c) {
                    continue;
                }
                let full = orders.get(c).expect("order table covers the group");
                let qo = self.order_in_quotient(c, full, &subgroup, primes)?;
                if best.as_ref().is_none_or(|(b, _)| qo > *b) {
                    best = Some((qo, c.clone()));
                }
            }
            let (e, a) = best.ok_or(Error::ConsistencyFailure {
                detail: String::from("quotient is nontrivial but no class extends the subgroup"),
            })?;
            let e_u = e.to_u64().ok_or(Error::ConsistencyFailure {
                detail: String::from("quotient exponent does not fit in 64 bits"),
            })?;
            // Grow the subgroup by the chosen cyclic factor.
            let mut grown = BTreeSet::new();
            let mut power = self.identity();
            for _ in 0..e_u {
                for s in &subgroup {
                    grown.insert(self.compose(s, &power)?);
                }
                power = self.compose(&power, &a)?;
            }
            if grown.len() != subgroup.len() * e_u as usize {
                return Err(Error::ConsistencyFailure {
                    detail: String::from("cyclic extension collided with the subgroup"),
                });
            }
            subgroup = grown;
            factors_desc.push(e);
        }
        factors_desc.reverse();
        for w in factors_desc.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::ConsistencyFailure {
                    detail: String::from("invariant factors failed the divisibility chain"),
                });
            }
        }
        Ok(factors_desc)
    }

    /// Group structure measurements. Exhaustive mode enumerates the group;
    /// sampled mode lower-bounds the exponent from seeded random classes
    /// built out of rational points.
    pub fn group_profile(&self, mode: ProfileMode, cap: u128) -> Result<GroupProfile> {
        match mode {
            ProfileMode::Exhaustive => {
                let classes = self.enumerate_classes(cap)?;
                let h = BigInt::from(classes.len());
                let factored = crate::primes::factorize_bigint(&h)?;
                let primes: Vec<BigInt> = factored.iter().map(|(p, _)| p.clone()).collect();
                let mut histogram: BTreeMap<BigInt, u64> = BTreeMap::new();
                let mut orders: BTreeMap<JacClass, BigInt> = BTreeMap::new();
                let mut exponent = BigInt::one();
                for c in &classes {
                    let o = self.element_order(c, &factored)?;
                    exponent = exponent.lcm(&o);
                    *histogram.entry(o.clone()).or_insert(0) += 1;
                    orders.insert(c.clone(), o);
                }
                let max_key = histogram
                    .keys()
                    .next_back()
                    .cloned()
                    .unwrap_or_else(BigInt::one);
                if max_key != exponent {
                    return Err(Error::ConsistencyFailure {
                        detail: String::from("lcm of orders disagrees with the largest order"),
                    });
                }
                let factors = self.invariant_factors(&classes, &orders, &primes)?;
                let product: BigInt = factors.iter().product();
                if product != h || factors.last().is_some_and(|l| *l != exponent) {
                    return Err(Error::ConsistencyFailure {
                        detail: format!(
                            "invariant factors {:?} do not rebuild h = {} with exponent {}",
                            factors, h, exponent
                        ),
                    });
                }
                Ok(GroupProfile {
                    h,
                    exponent,
                    exponent_is_lower_bound: false,
                    order_histogram: histogram,
                    invariant_factors: Some(factors),
                    sampled: false,
                })
            }
            ProfileMode::Sampled {
                h,
                seed,
                samples,
            } => {
                let factored = crate::primes::factorize_bigint(&h)?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut histogram: BTreeMap<BigInt, u64> = BTreeMap::new();
                let mut exponent = BigInt::one();
                for _ in 0..samples {
                    let c = self.random_class(&mut rng)?;
                    let o = self.element_order(&c, &factored)?;
                    exponent = exponent.lcm(&o);
                    *histogram.entry(o).or_insert(0) += 1;
                }
                Ok(GroupProfile {
                    h,
                    exponent,
                    exponent_is_lower_bound: true,
                    order_histogram: histogram,
                    invariant_factors: None,
                    sampled: true,
                })
            }
        }
    }

    /// A pseudorandom class: a short combination of rational point classes.
    /// Draws are deterministic in the seed; if the curve has no affine
    /// rational point the identity comes back.
    pub fn random_class(&self, rng: &mut impl RngCore) -> Result<JacClass> {
        let field = self.curve.field();
        let ring = self.ring();
        let q = field.size_u128().ok_or(Error::PreconditionViolated {
            detail: String::from("field too large for sampling"),
        })?;
        let he = self.curve.h();
        let fe = self.curve.f();
        let g = self.curve.genus();
        let mut acc = self.identity();
        let terms = 1 + (rng.next_u32() as usize) % (2 * g);
        for _ in 0..terms {
            let mut point = None;
            for _ in 0..64 {
                let x = field.element_by_index(rng.next_u64() as u128 % q);
                let hv = ring.eval(he, &x);
                let fv = ring.eval(fe, &x);
                let ys = crate::curve::fiber_ys(field, &hv, &fv);
                if ys.is_empty() {
                    continue;
                }
                let y = ys[(rng.next_u32() as usize) % ys.len()].clone();
                point = Some((x, y));
                break;
            }
            let Some((x, y)) = point else {
                continue;
            };
            let c = self.class_from_point(&x, &y)?;
            acc = self.compose(&acc, &c)?;
        }
        Ok(acc)
    }

    /// The class of a Frobenius-stable set of affine points with pairwise
    /// distinct x-coordinates, as sum of [P_i] - k[infinity]: u is the monic
    /// vanishing polynomial of the x's, v interpolates the y's, both
    /// projected down to the base field.
    pub fn orbit_to_mumford(
        &self,
        emb: &Embedding,
        points: &[(FieldElem, FieldElem)],
    ) -> Result<JacClass> {
        let ext = emb.ext();
        let ering = PolyRing::new(ext);
        let bring = self.ring();
        let mut u_ext = ering.one();
        for (x, _) in points {
            u_ext = ering.mul(&u_ext, &ering.from_coeffs(&[ext.neg(x), ext.one()]));
        }
        // Lagrange interpolation of v through the points.
        let mut v_ext = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut num = ering.constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let dx = ext.sub(xi, xj);
                if dx.is_zero() {
                    return Err(Error::PreconditionViolated {
                        detail: String::from("orbit points must have distinct x-coordinates"),
                    });
                }
                let scale = ext.inv(&dx)?;
                num = ering.mul_scalar(
                    &ering.mul(&num, &ering.from_coeffs(&[ext.neg(xj), ext.one()])),
                    &scale,
                );
            }
            v_ext = ering.add(&v_ext, &num);
        }
        let project = |p: &Poly| -> Result<Poly> {
            let mut coeffs = Vec::with_capacity(p.coeffs().len());
            for c in p.coeffs() {
                let down = emb.project(c).ok_or(Error::ConsistencyFailure {
                    detail: String::from("orbit is not Frobenius-stable over the base field"),
                })?;
                coeffs.push(down);
            }
            Ok(bring.from_coeffs(&coeffs))
        };
        let u = project(&u_ext)?;
        let v = project(&v_ext)?;
        if !self.mumford_residual(&u, &v)?.is_zero() {
            return Err(Error::PreconditionViolated {
                detail: String::from("points do not lie on the curve"),
            });
        }
        self.reduce(u, v)
    }
}
