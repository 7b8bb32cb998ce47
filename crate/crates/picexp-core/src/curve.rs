//! Hyperelliptic models y^2 + h(x) y = f(x): validation, brute-force point
//! counts over extensions, Galois orbits of closed points, ramification of
//! the degree-2 x-map, and even-to-odd model changes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ff::{Embedding, FieldElem, FiniteField};
use crate::poly::{Poly, PolyRing};
use crate::{Error, Result};

/// Degree parity of f: odd models have deg f = 2g+1, even models 2g+2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelParity {
    Odd,
    Even,
}

/// Branch tag at infinity. Odd models and characteristic-2 even models carry
/// a single point there; odd-characteristic even models carry two, labeled by
/// the limit of y/x^{g+1} being +1 or -1 (f is monic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InfBranch {
    Sole,
    Plus,
    Minus,
}

/// A point on the smooth model. Affine coordinates live in whichever field
/// the surrounding call supplied; infinity is a branch tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity(InfBranch),
    Affine { x: FieldElem, y: FieldElem },
}

/// One closed point of degree `degree`, named by its smallest representative
/// in enumeration order. Coordinates live in the deterministic extension of
/// that degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorOrbit {
    pub representative: CurvePoint,
    pub degree: usize,
    pub multiplicity: usize,
}

/// A ramification point of the x-map, over the deterministic extension of
/// degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedPoint {
    pub degree: usize,
    pub point: CurvePoint,
}

/// A validated hyperelliptic model over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: FiniteField,
    h: Poly,
    f: Poly,
    genus: usize,
    parity: ModelParity,
}

impl HyperellipticCurve {
    /// Validates a model: f monic of degree 2g+1 or 2g+2 with g >= 1,
    /// deg h <= g, nonsingular affine part, smooth at infinity.
    pub fn new(field: FiniteField, h: Poly, f: Poly) -> Result<Self> {
        let p = field.characteristic();
        let (genus, parity) = {
            let ring = PolyRing::new(&field);
            if p == 2 && h.is_zero() {
                return Err(Error::Char2NeedsH);
            }
            let df = match f.deg() {
                Some(d) if d >= 3 => d,
                other => {
                    return Err(Error::BadDegree {
                        detail: format!("deg f = {:?}, need 2g+1 or 2g+2 with g >= 1", other),
                    })
                }
            };
            if !f.is_monic(&ring) {
                return Err(Error::PreconditionViolated {
                    detail: String::from("f must be monic"),
                });
            }
            let (genus, parity) = if df % 2 == 1 {
                ((df - 1) / 2, ModelParity::Odd)
            } else {
                (df / 2 - 1, ModelParity::Even)
            };
            if h.deg().is_some_and(|dh| dh > genus) {
                return Err(Error::BadDegree {
                    detail: format!("deg h = {:?} exceeds genus {}", h.deg(), genus),
                });
            }
            if p == 2 {
                // Affine singularity sits at a common root of h and f'^2 + f h'^2.
                let hp = ring.derivative(&h);
                let fp = ring.derivative(&f);
                let w = ring.add(&ring.mul(&fp, &fp), &ring.mul(&ring.mul(&hp, &hp), &f));
                let g = ring.gcd(&h, &w);
                if g.deg().is_some_and(|d| d >= 1) {
                    let witness = singular_witness(&field, &h, &f, &g);
                    return Err(Error::SingularModel {
                        witness,
                    });
                }
                // Infinity chart: v^2 + h~(u) v = f~(u) is singular at u = 0
                // exactly when the u-coefficients h_g and f_{2g+1} agree.
                if parity == ModelParity::Even && ring.coeff(&h, genus) == ring.coeff(&f, 2 * genus + 1) {
                    return Err(Error::SingularModel {
                        witness: Some(String::from("the point at infinity")),
                    });
                }
            } else {
                // Completing the square moves singularities to repeated roots
                // of h^2 + 4f.
                let disc = discriminant_locus(&ring, &h, &f);
                if !ring.is_squarefree(&disc) {
                    let dp = ring.derivative(&disc);
                    let g = if dp.is_zero() {
                        ring.make_monic(&disc)
                    } else {
                        ring.gcd(&disc, &dp)
                    };
                    let witness = singular_witness(&field, &h, &f, &g);
                    return Err(Error::SingularModel {
                        witness,
                    });
                }
            }
            (genus, parity)
        };
        Ok(HyperellipticCurve {
            field,
            h,
            f,
            genus,
            parity,
        })
    }

    /// Builds a curve from integer coefficient lists, low degree first.
    pub fn from_int_coeffs(field: &FiniteField, h: &[i64], f: &[i64]) -> Result<Self> {
        let ring = PolyRing::new(field);
        let hp = ring.from_int_coeffs(h);
        let fp = ring.from_int_coeffs(f);
        HyperellipticCurve::new(field.clone(), hp, fp)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn parity(&self) -> ModelParity {
        self.parity
    }

    /// Count of rational points at infinity: 1 on odd models, 2 on even
    /// models in odd characteristic (f monic makes both branches rational),
    /// 1 on even models in characteristic 2.
    pub fn rational_infinite_points(&self) -> usize {
        self.infinite_points().len()
    }

    /// The branch tags present at infinity.
    pub fn infinite_points(&self) -> Vec<CurvePoint> {
        match (self.parity, self.field.characteristic() == 2) {
            (ModelParity::Odd, _) | (ModelParity::Even, true) => {
                vec![CurvePoint::Infinity(InfBranch::Sole)]
            }
            (ModelParity::Even, false) => vec![
                CurvePoint::Infinity(InfBranch::Plus),
                CurvePoint::Infinity(InfBranch::Minus),
            ],
        }
    }

    /// The deterministic degree-k extension together with its embedding.
    pub fn extension(&self, k: usize) -> Result<(FiniteField, Embedding)> {
        self.field.make_extension(k)
    }

    fn check_cap(&self, k: usize, cap: u128) -> Result<()> {
        let bits = self.field.degree() * k;
        let needed = u32::try_from(bits)
            .ok()
            .and_then(|b| (self.field.characteristic() as u128).checked_pow(b));
        match needed {
            Some(n) if n <= cap => Ok(()),
            _ => Err(Error::CapExceeded {
                needed: needed.unwrap_or(u128::MAX),
                cap,
            }),
        }
    }

    /// |X(F_{q^k})| on the smooth model, by scanning x and solving the fiber
    /// quadratic through the quadratic character (odd p) or the
    /// Artin-Schreier trace test (p = 2).
    pub fn count_points(&self, k: usize, cap: u128) -> Result<u64> {
        assert!(k >= 1, "extension degree must be positive");
        self.check_cap(k, cap)?;
        let (ext, emb) = self.field.make_extension(k)?;
        let bring = PolyRing::new(&self.field);
        let he = bring.map_through(&self.h, &emb);
        let fe = bring.map_through(&self.f, &emb);
        let ering = PolyRing::new(&ext);
        let mut n = self.rational_infinite_points() as u64;
        for x in ext.elements()? {
            let hv = ering.eval(&he, &x);
            let fv = ering.eval(&fe, &x);
            n += fiber_count(&ext, &hv, &fv);
        }
        Ok(n)
    }

    /// All affine points with coordinates in `emb.ext()`, ordered by x then y
    /// in enumeration order.
    pub fn affine_points(&self, emb: &Embedding) -> Result<Vec<(FieldElem, FieldElem)>> {
        let ext = emb.ext();
        let bring = PolyRing::new(&self.field);
        let he = bring.map_through(&self.h, emb);
        let fe = bring.map_through(&self.f, emb);
        let ering = PolyRing::new(ext);
        let mut out = Vec::new();
        for x in ext.elements()? {
            let hv = ering.eval(&he, &x);
            let fv = ering.eval(&fe, &x);
            for y in fiber_ys(ext, &hv, &fv) {
                out.push((x.clone(), y));
            }
        }
        Ok(out)
    }

    /// Whether the point satisfies the curve equation (coordinates in
    /// `emb.ext()`), or carries a legal infinity tag for this model.
    pub fn contains(&self, emb: &Embedding, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity(br) => self
                .infinite_points()
                .contains(&CurvePoint::Infinity(*br)),
            CurvePoint::Affine {
                x,
                y,
            } => {
                let ext = emb.ext();
                let bring = PolyRing::new(&self.field);
                let ering = PolyRing::new(ext);
                let hv = ering.eval(&bring.map_through(&self.h, emb), x);
                let fv = ering.eval(&bring.map_through(&self.f, emb), x);
                let lhs = ext.add(&ext.mul(y, y), &ext.mul(&hv, y));
                lhs == fv
            }
        }
    }

    /// Closed points of degree exactly k, one orbit each, representatives
    /// ascending. The count satisfies k·#orbits = sum_{d | k} mu(k/d) N_d.
    pub fn degree_k_orbits(&self, k: usize, cap: u128) -> Result<Vec<DivisorOrbit>> {
        assert!(k >= 1, "orbit degree must be positive");
        self.check_cap(k, cap)?;
        let (ext, emb) = self.field.make_extension(k)?;
        let bring = PolyRing::new(&self.field);
        let he = bring.map_through(&self.h, &emb);
        let fe = bring.map_through(&self.f, &emb);
        let ering = PolyRing::new(&ext);
        let mut orbits = Vec::new();
        if k == 1 {
            // Infinite points are rational for monic f, so they only carry
            // degree-1 orbits.
            for pt in self.infinite_points() {
                orbits.push(DivisorOrbit {
                    representative: pt,
                    degree: 1,
                    multiplicity: 1,
                });
            }
        }
        let mut visited: BTreeSet<(Vec<u64>, Vec<u64>)> = BTreeSet::new();
        for x in ext.elements()? {
            let hv = ering.eval(&he, &x);
            let fv = ering.eval(&fe, &x);
            for y in fiber_ys(&ext, &hv, &fv) {
                if visited.contains(&(x.coeffs().to_vec(), y.coeffs().to_vec())) {
                    continue;
                }
                let orbit = frobenius_orbit(&ext, &x, &y);
                assert!(orbit.len() <= k, "orbit exceeds ambient degree");
                for (px, py) in &orbit {
                    visited.insert((px.coeffs().to_vec(), py.coeffs().to_vec()));
                }
                if orbit.len() == k {
                    // First visit reaches an orbit through its smallest
                    // member, so (x, y) is already the representative.
                    orbits.push(DivisorOrbit {
                        representative: CurvePoint::Affine {
                            x: x.clone(),
                            y,
                        },
                        degree: k,
                        multiplicity: 1,
                    });
                }
            }
        }
        Ok(orbits)
    }

    /// The locus polynomial whose roots are the affine ramification
    /// x-coordinates of the x-map: h^2 + 4f in odd characteristic, h for p = 2.
    pub fn ramification_locus(&self) -> Poly {
        let ring = PolyRing::new(&self.field);
        if self.field.characteristic() == 2 {
            self.h.clone()
        } else {
            discriminant_locus(&ring, &self.h, &self.f)
        }
    }

    /// Every ramification point of the x-map over the closure, each over the
    /// deterministic extension matching its degree. In odd characteristic the
    /// list always has 2g+2 entries.
    pub fn x_map_ramification(&self, cap: u128) -> Result<Vec<RamifiedPoint>> {
        let p = self.field.characteristic();
        let locus = self.ramification_locus();
        let mut out = Vec::new();
        let infinity_ramified = match (self.parity, p == 2) {
            (ModelParity::Odd, _) | (ModelParity::Even, true) => true,
            (ModelParity::Even, false) => false,
        };
        if infinity_ramified {
            out.push(RamifiedPoint {
                degree: 1,
                point: CurvePoint::Infinity(InfBranch::Sole),
            });
        }
        let dl = locus.deg().unwrap_or(0);
        let bring = PolyRing::new(&self.field);
        let mut found = 0usize;
        for d in 1..=dl {
            if found == dl {
                break;
            }
            self.check_cap(d, cap)?;
            let (ext, emb) = self.field.make_extension(d)?;
            let ering = PolyRing::new(&ext);
            let le = bring.map_through(&locus, &emb);
            let fe = bring.map_through(&self.f, &emb);
            let he = bring.map_through(&self.h, &emb);
            for x0 in ering.roots(&le)? {
                if elem_exact_degree(&ext, &x0) != d {
                    continue;
                }
                let y0 = if p == 2 {
                    ext.sqrt(&ering.eval(&fe, &x0))
                        .expect("squaring is bijective in characteristic 2")
                } else {
                    let two_inv = ext
                        .inv(&ext.from_u64(2))
                        .expect("2 is a unit in odd characteristic");
                    ext.neg(&ext.mul(&ering.eval(&he, &x0), &two_inv))
                };
                out.push(RamifiedPoint {
                    degree: d,
                    point: CurvePoint::Affine {
                        x: x0,
                        y: y0,
                    },
                });
                found += 1;
            }
        }
        Ok(out)
    }

    /// Rational Weierstrass x-coordinates, ascending in enumeration order.
    pub fn rational_weierstrass_xs(&self) -> Result<Vec<FieldElem>> {
        let ring = PolyRing::new(&self.field);
        let locus = self.ramification_locus();
        if locus.is_zero() {
            return Ok(Vec::new());
        }
        ring.roots(&locus)
    }

    /// Sends the rational Weierstrass point over x0 to infinity through
    /// x = x0 + 1/t, y = s/t^{g+1} (after centering y), then rescales to a
    /// monic odd model. Point counts are preserved in every degree.
    pub fn move_weierstrass_to_infinity(&self, x0: &FieldElem) -> Result<ModelChange> {
        if self.parity != ModelParity::Even {
            return Err(Error::PreconditionViolated {
                detail: String::from("model change starts from an even model"),
            });
        }
        let field = &self.field;
        let ring = PolyRing::new(field);
        let locus = self.ramification_locus();
        if !ring.eval(&locus, x0).is_zero() {
            return Err(Error::NotWeierstrass);
        }
        let g = self.genus;
        let y0 = weierstrass_y(field, &ring, &self.h, &self.f, x0);
        // Center: (x, y) -> (x, y + y0) turns the model into
        // y^2 + ht(x) y = ft(x) with ht(x0) = ft(x0) = 0.
        let ht = ring.add(&self.h, &ring.constant(field.add(&y0, &y0)));
        let ft = ring.sub(
            &ring.sub(&self.f, &ring.constant(field.mul(&y0, &y0))),
            &ring.mul_scalar(&self.h, &y0),
        );
        // Shift to x0: coefficients of ht(x0 + u), ft(x0 + u) in u.
        let shift = ring.from_coeffs(&[x0.clone(), field.one()]);
        let hs = ring.compose(&ht, &shift);
        let fs = ring.compose(&ft, &shift);
        assert!(ring.coeff(&hs, 0).is_zero() && ring.coeff(&fs, 0).is_zero());
        // Reverse through t = 1/u: hhat_i = hs_{g+1-i}, fhat_i = fs_{2g+2-i}.
        let hhat: Vec<FieldElem> = (0..=g).map(|i| ring.coeff(&hs, g + 1 - i)).collect();
        let fhat: Vec<FieldElem> = (0..=2 * g + 1).map(|i| ring.coeff(&fs, 2 * g + 2 - i)).collect();
        let a = fhat[2 * g + 1].clone();
        if a.is_zero() {
            return Err(Error::ConsistencyFailure {
                detail: String::from("centered f has vanishing derivative at a smooth Weierstrass point"),
            });
        }
        // Rescale X = a t, Y = a^g s to restore a monic f.
        let mut hc = Vec::with_capacity(g + 1);
        for (i, c) in hhat.iter().enumerate() {
            hc.push(field.mul(&field.pow(&a, (g - i) as u128), c));
        }
        let mut fc = Vec::with_capacity(2 * g + 2);
        for (i, c) in fhat.iter().enumerate() {
            let scale = if 2 * g >= i {
                field.pow(&a, (2 * g - i) as u128)
            } else {
                field.inv(&a)?
            };
            fc.push(field.mul(&scale, c));
        }
        let odd = HyperellipticCurve::new(
            field.clone(),
            ring.from_coeffs(&hc),
            ring.from_coeffs(&fc),
        )?;
        assert_eq!(odd.genus, g, "model change must preserve the genus");
        assert_eq!(odd.parity, ModelParity::Odd);
        Ok(ModelChange {
            even: self.clone(),
            odd,
            x0: x0.clone(),
            y0,
            scale: a,
        })
    }

    /// Chooses the odd model used for divisor arithmetic: the curve itself,
    /// a model change through the first rational Weierstrass point, or
    /// nothing when no such point exists.
    pub fn to_odd_model(&self) -> Result<OddModelPlan> {
        if self.parity == ModelParity::Odd {
            return Ok(OddModelPlan::AlreadyOdd);
        }
        let xs = self.rational_weierstrass_xs()?;
        match xs.first() {
            Some(x0) => Ok(OddModelPlan::Changed(self.move_weierstrass_to_infinity(x0)?)),
            None => Ok(OddModelPlan::Unavailable),
        }
    }
}

/// Outcome of the odd-model search for divisor arithmetic.
#[derive(Debug, Clone)]
pub enum OddModelPlan {
    AlreadyOdd,
    Changed(ModelChange),
    Unavailable,
}

/// An even-to-odd model change with both curves and the point maps.
#[derive(Debug, Clone)]
pub struct ModelChange {
    even: HyperellipticCurve,
    odd: HyperellipticCurve,
    x0: FieldElem,
    y0: FieldElem,
    scale: FieldElem,
}

impl ModelChange {
    pub fn even(&self) -> &HyperellipticCurve {
        &self.even
    }

    pub fn odd(&self) -> &HyperellipticCurve {
        &self.odd
    }

    /// Image on the odd model of a point of the even model with coordinates
    /// in `emb.ext()`.
    pub fn map_point(&self, emb: &Embedding, pt: &CurvePoint) -> Result<CurvePoint> {
        if !self.even.contains(emb, pt) {
            return Err(Error::PreconditionViolated {
                detail: String::from("point is not on the even model"),
            });
        }
        let ext = emb.ext();
        let g = self.even.genus as u128;
        let ae = emb.embed(&self.scale);
        let ag = ext.pow(&ae, g);
        Ok(match pt {
            CurvePoint::Infinity(InfBranch::Minus) => CurvePoint::Affine {
                x: ext.zero(),
                y: ext.neg(&ag),
            },
            CurvePoint::Infinity(_) => CurvePoint::Affine {
                x: ext.zero(),
                y: ag,
            },
            CurvePoint::Affine {
                x,
                y,
            } => {
                let x0e = emb.embed(&self.x0);
                if *x == x0e {
                    CurvePoint::Infinity(InfBranch::Sole)
                } else {
                    let y0e = emb.embed(&self.y0);
                    let t = ext.inv(&ext.sub(x, &x0e))?;
                    let s = ext.mul(&ext.sub(y, &y0e), &ext.pow(&t, g + 1));
                    CurvePoint::Affine {
                        x: ext.mul(&ae, &t),
                        y: ext.mul(&ag, &s),
                    }
                }
            }
        })
    }

    /// Preimage on the even model of a point of the odd model.
    pub fn unmap_point(&self, emb: &Embedding, pt: &CurvePoint) -> Result<CurvePoint> {
        if !self.odd.contains(emb, pt) {
            return Err(Error::PreconditionViolated {
                detail: String::from("point is not on the odd model"),
            });
        }
        let ext = emb.ext();
        let g = self.even.genus as u128;
        let ae = emb.embed(&self.scale);
        let ag = ext.pow(&ae, g);
        let x0e = emb.embed(&self.x0);
        let y0e = emb.embed(&self.y0);
        Ok(match pt {
            CurvePoint::Infinity(_) => CurvePoint::Affine {
                x: x0e,
                y: y0e,
            },
            CurvePoint::Affine {
                x,
                y,
            } => {
                if x.is_zero() {
                    if *y == ag {
                        if ext.characteristic() == 2 {
                            CurvePoint::Infinity(InfBranch::Sole)
                        } else {
                            CurvePoint::Infinity(InfBranch::Plus)
                        }
                    } else if *y == ext.neg(&ag) {
                        CurvePoint::Infinity(InfBranch::Minus)
                    } else {
                        return Err(Error::ConsistencyFailure {
                            detail: String::from("odd-model fiber over 0 holds a foreign point"),
                        });
                    }
                } else {
                    let u = ext.inv(&ext.div(x, &ae)?)?;
                    let s = ext.div(y, &ag)?;
                    let yhat = ext.mul(&s, &ext.pow(&u, g + 1));
                    CurvePoint::Affine {
                        x: ext.add(&x0e, &u),
                        y: ext.add(&yhat, &y0e),
                    }
                }
            }
        })
    }
}

/// h^2 + 4f, the branch locus of the x-map in odd characteristic.
fn discriminant_locus(ring: &PolyRing, h: &Poly, f: &Poly) -> Poly {
    let four = ring.field().from_u64(4);
    ring.add(&ring.mul(h, h), &ring.mul_scalar(f, &four))
}

/// The unique y over a Weierstrass x: -h(x0)/2, or sqrt(f(x0)) for p = 2.
fn weierstrass_y(
    field: &FiniteField,
    ring: &PolyRing,
    h: &Poly,
    f: &Poly,
    x0: &FieldElem,
) -> FieldElem {
    if field.characteristic() == 2 {
        field
            .sqrt(&ring.eval(f, x0))
            .expect("squaring is bijective in characteristic 2")
    } else {
        let two_inv = field
            .inv(&field.from_u64(2))
            .expect("2 is a unit in odd characteristic");
        field.neg(&field.mul(&ring.eval(h, x0), &two_inv))
    }
}

/// Number of affine points over x, from h(x) and f(x).
fn fiber_count(ext: &FiniteField, hv: &FieldElem, fv: &FieldElem) -> u64 {
    if ext.characteristic() == 2 {
        if hv.is_zero() {
            1
        } else {
            let c = ext
                .div(fv, &ext.mul(hv, hv))
                .expect("nonzero divisor");
            if ext.trace_to_prime(&c) == 0 {
                2
            } else {
                0
            }
        }
    } else {
        let disc = ext.add(&ext.mul(hv, hv), &ext.mul(&ext.from_u64(4), fv));
        (1 + ext.legendre(&disc)) as u64
    }
}

/// The y-values over x, ascending in enumeration order, from h(x) and f(x).
pub fn fiber_ys(ext: &FiniteField, hv: &FieldElem, fv: &FieldElem) -> Vec<FieldElem> {
    if ext.characteristic() == 2 {
        if hv.is_zero() {
            return vec![ext
                .sqrt(fv)
                .expect("squaring is bijective in characteristic 2")];
        }
        let c = ext.div(fv, &ext.mul(hv, hv)).expect("nonzero divisor");
        match ext.artin_schreier_solve(&c) {
            None => Vec::new(),
            Some(z) => {
                let y1 = ext.mul(hv, &z);
                let y2 = ext.add(&y1, hv);
                sorted_pair(y1, y2)
            }
        }
    } else {
        let two_inv = ext
            .inv(&ext.from_u64(2))
            .expect("2 is a unit in odd characteristic");
        let disc = ext.add(&ext.mul(hv, hv), &ext.mul(&ext.from_u64(4), fv));
        match ext.legendre(&disc) {
            0 => vec![ext.neg(&ext.mul(hv, &two_inv))],
            1 => {
                let r = ext.sqrt(&disc).expect("quadratic residue has a root");
                let y1 = ext.mul(&ext.sub(&r, hv), &two_inv);
                let y2 = ext.mul(&ext.neg(&ext.add(&r, hv)), &two_inv);
                sorted_pair(y1, y2)
            }
            _ => Vec::new(),
        }
    }
}

fn sorted_pair(a: FieldElem, b: FieldElem) -> Vec<FieldElem> {
    if a <= b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

/// Applies the q-power Frobenius to a point's coordinates; infinity tags are
/// rational and stay fixed.
pub fn frobenius_point(ext: &FiniteField, pt: &CurvePoint) -> CurvePoint {
    match pt {
        CurvePoint::Infinity(br) => CurvePoint::Infinity(*br),
        CurvePoint::Affine {
            x,
            y,
        } => CurvePoint::Affine {
            x: ext.frobenius(x, 1),
            y: ext.frobenius(y, 1),
        },
    }
}

/// The Frobenius orbit of an affine point, starting from (x, y).
pub fn frobenius_orbit(
    ext: &FiniteField,
    x: &FieldElem,
    y: &FieldElem,
) -> Vec<(FieldElem, FieldElem)> {
    let mut pts = vec![(x.clone(), y.clone())];
    loop {
        let (cx, cy) = pts.last().expect("orbit is nonempty");
        let nx = ext.frobenius(cx, 1);
        let ny = ext.frobenius(cy, 1);
        if nx == *x && ny == *y {
            return pts;
        }
        pts.push((nx, ny));
        assert!(pts.len() <= ext.degree(), "Frobenius orbit failed to close");
    }
}

/// Smallest e >= 1 with a^{q^e} = a.
fn elem_exact_degree(ext: &FiniteField, a: &FieldElem) -> usize {
    let mut cur = ext.frobenius(a, 1);
    let mut e = 1;
    while cur != *a {
        cur = ext.frobenius(&cur, 1);
        e += 1;
        assert!(e <= ext.degree(), "Frobenius orbit failed to close");
    }
    e
}

/// Searches small extensions for an affine singular point and formats it.
fn singular_witness(
    field: &FiniteField,
    h: &Poly,
    f: &Poly,
    locus: &Poly,
) -> Option<String> {
    let p = field.characteristic();
    let bring = PolyRing::new(field);
    let hp = bring.derivative(h);
    let fp = bring.derivative(f);
    let dl = locus.deg()?;
    for d in 1..=dl.min(4) {
        let Ok((ext, emb)) = field.make_extension(d) else {
            continue;
        };
        let ering = PolyRing::new(&ext);
        let le = bring.map_through(locus, &emb);
        let Ok(roots) = ering.roots(&le) else {
            continue;
        };
        if let Some(x0) = roots.into_iter().next() {
            let y0 = if p == 2 {
                let hpv = ering.eval(&bring.map_through(&hp, &emb), &x0);
                if hpv.is_zero() {
                    ext.sqrt(&ering.eval(&bring.map_through(f, &emb), &x0))
                        .expect("squaring is bijective in characteristic 2")
                } else {
                    let fpv = ering.eval(&bring.map_through(&fp, &emb), &x0);
                    ext.div(&fpv, &hpv).expect("nonzero divisor")
                }
            } else {
                let two_inv = ext
                    .inv(&ext.from_u64(2))
                    .expect("2 is a unit in odd characteristic");
                ext.neg(&ext.mul(
                    &ering.eval(&bring.map_through(h, &emb), &x0),
                    &two_inv,
                ))
            };
            return Some(format!(
                "x = {:?}, y = {:?} over the degree-{} extension",
                x0.coeffs(),
                y0.coeffs(),
                d
            ));
        }
    }
    None
}
