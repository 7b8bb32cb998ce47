//! Degree-k closed points that stay disjoint and unramified under a covering.
//!
//! A degree-k closed point, viewed as a divisor of its k geometric points,
//! passes the test for a covering f when the k image points are pairwise
//! distinct and every point of the divisor is unramified for f. Counting the
//! passing points over all degree-k closed points ground-truths the
//! corresponding lower bound from the bounds module.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::{
    frobenius_orbit, CurvePoint, DivisorOrbit, HyperellipticCurve, ModelParity,
};
use crate::ff::{Embedding, FieldElem, FiniteField};
use crate::poly::PolyRing;
use crate::primes::is_prime_u64;
use crate::{Error, Result};

/// What a covering maps into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    ProjectiveLine,
    EllipticCurve,
}

/// A point of the covering's target over an extension field. Line points
/// use `None` for the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TargetPoint {
    Line(Option<FieldElem>),
    Curve(CurvePoint),
}

/// Image of a source point whose coordinates live in `emb.ext()`.
pub type EvalFn<'c> = Box<dyn Fn(&Embedding, &CurvePoint) -> Result<TargetPoint> + 'c>;

/// Whether the covering is unramified at a point over `emb.ext()`.
pub type UnramifiedFn<'c> = Box<dyn Fn(&Embedding, &CurvePoint) -> Result<bool> + 'c>;

/// A covering of the line or of another curve. The evaluation rule and the
/// pointwise ramification test are supplied by the constructor, so composite
/// coverings can be assembled by callers without this module knowing their
/// shape.
pub struct CoveringMap<'c> {
    source: &'c HyperellipticCurve,
    target: TargetKind,
    degree: u64,
    separable: bool,
    eval: EvalFn<'c>,
    unramified: UnramifiedFn<'c>,
}

impl<'c> CoveringMap<'c> {
    pub fn new(
        source: &'c HyperellipticCurve,
        target: TargetKind,
        degree: u64,
        separable: bool,
        eval: EvalFn<'c>,
        unramified: UnramifiedFn<'c>,
    ) -> Result<Self> {
        if degree < 2 {
            return Err(Error::PreconditionViolated {
                detail: String::from("covering degree must be at least 2"),
            });
        }
        Ok(CoveringMap {
            source,
            target,
            degree,
            separable,
            eval,
            unramified,
        })
    }

    /// The degree-2 projection (x, y) -> x onto the line. Validated models
    /// always make it separable: characteristic 2 requires h != 0. Affine
    /// ramification is exactly where the hyperelliptic involution
    /// y -> -y - h(x) has a fixed point; at infinity the answer depends only
    /// on model parity and characteristic.
    pub fn x_map(curve: &'c HyperellipticCurve) -> Self {
        let eval: EvalFn<'c> = Box::new(|_emb, p| {
            Ok(match p {
                CurvePoint::Affine { x, .. } => TargetPoint::Line(Some(x.clone())),
                CurvePoint::Infinity(_) => TargetPoint::Line(None),
            })
        });
        let unramified: UnramifiedFn<'c> = Box::new(move |emb, p| match p {
            CurvePoint::Affine { x, y } => {
                let ext = emb.ext();
                let ering = PolyRing::new(ext);
                let bring = PolyRing::new(curve.field());
                let hv = ering.eval(&bring.map_through(curve.h(), emb), x);
                let fixed = if ext.characteristic() == 2 {
                    hv.is_zero()
                } else {
                    ext.add(&ext.add(y, y), &hv).is_zero()
                };
                Ok(!fixed)
            }
            CurvePoint::Infinity(_) => Ok(matches!(
                (curve.parity(), curve.field().characteristic() == 2),
                (ModelParity::Even, false)
            )),
        });
        CoveringMap {
            source: curve,
            target: TargetKind::ProjectiveLine,
            degree: 2,
            separable: true,
            eval,
            unramified,
        }
    }

    pub fn source(&self) -> &'c HyperellipticCurve {
        self.source
    }

    pub fn target(&self) -> TargetKind {
        self.target
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn separable(&self) -> bool {
        self.separable
    }

    pub fn eval(&self, emb: &Embedding, p: &CurvePoint) -> Result<TargetPoint> {
        (self.eval)(emb, p)
    }

    pub fn is_unramified(&self, emb: &Embedding, p: &CurvePoint) -> Result<bool> {
        (self.unramified)(emb, p)
    }

    /// Whether the closed point passes both conditions: k distinct images
    /// and no ramification anywhere on the orbit. The embedding must reach
    /// the extension housing the orbit's representative.
    pub fn is_nonfibral(&self, emb: &Embedding, orbit: &DivisorOrbit) -> Result<bool> {
        if !self.separable {
            return Err(Error::InseparableUnsupported);
        }
        let ext_over_base = emb.ext().degree() / emb.base().degree();
        if ext_over_base != orbit.degree {
            return Err(Error::PreconditionViolated {
                detail: String::from("embedding does not match the orbit degree"),
            });
        }
        let points: Vec<CurvePoint> = match &orbit.representative {
            CurvePoint::Infinity(_) => {
                if orbit.degree != 1 {
                    return Err(Error::PreconditionViolated {
                        detail: String::from("infinite points only form degree-1 orbits"),
                    });
                }
                alloc::vec![orbit.representative.clone()]
            }
            CurvePoint::Affine { x, y } => {
                let pts = frobenius_orbit(emb.ext(), x, y);
                if pts.len() != orbit.degree {
                    return Err(Error::PreconditionViolated {
                        detail: String::from("representative degree does not match the orbit"),
                    });
                }
                pts.into_iter()
                    .map(|(x, y)| CurvePoint::Affine { x, y })
                    .collect()
            }
        };
        let mut images = Vec::with_capacity(points.len());
        for p in &points {
            images.push(self.eval(emb, p)?);
        }
        images.sort();
        images.dedup();
        if images.len() != points.len() {
            return Ok(false);
        }
        for p in &points {
            if !self.is_unramified(emb, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of degree-k closed points that are non-fibral for this
    /// covering. Evaluation is spot-checked to commute with Frobenius on the
    /// first few orbits before anything is counted.
    pub fn count_nonfibral(&self, k: usize, cap: u128) -> Result<u64> {
        if !self.separable {
            return Err(Error::InseparableUnsupported);
        }
        if !is_prime_u64(k as u64) {
            return Err(Error::PreconditionViolated {
                detail: String::from("orbit degree k must be prime"),
            });
        }
        let orbits = self.source.degree_k_orbits(k, cap)?;
        let (ext, emb) = self.source.extension(k)?;
        for orbit in orbits.iter().take(8) {
            self.check_frobenius_commutes(&ext, &emb, &orbit.representative)?;
        }
        let mut count = 0u64;
        for orbit in &orbits {
            if self.is_nonfibral(&emb, orbit)? {
                count += 1;
            }
        }
        Ok(count)
    }

    fn check_frobenius_commutes(
        &self,
        ext: &FiniteField,
        emb: &Embedding,
        p: &CurvePoint,
    ) -> Result<()> {
        let moved = match p {
            CurvePoint::Infinity(_) => p.clone(),
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: ext.frobenius(x, 1),
                y: ext.frobenius(y, 1),
            },
        };
        let image_then_frobenius = frobenius_target(ext, &self.eval(emb, p)?);
        let frobenius_then_image = self.eval(emb, &moved)?;
        if image_then_frobenius == frobenius_then_image {
            Ok(())
        } else {
            Err(Error::ConsistencyFailure {
                detail: String::from("covering evaluation does not commute with Frobenius"),
            })
        }
    }
}

/// The Galois action on target points.
pub fn frobenius_target(ext: &FiniteField, t: &TargetPoint) -> TargetPoint {
    match t {
        TargetPoint::Line(None) => TargetPoint::Line(None),
        TargetPoint::Line(Some(v)) => TargetPoint::Line(Some(ext.frobenius(v, 1))),
        TargetPoint::Curve(CurvePoint::Infinity(b)) => {
            TargetPoint::Curve(CurvePoint::Infinity(*b))
        }
        TargetPoint::Curve(CurvePoint::Affine { x, y }) => TargetPoint::Curve(CurvePoint::Affine {
            x: ext.frobenius(x, 1),
            y: ext.frobenius(y, 1),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::curve::fiber_ys;
    use crate::ff::FiniteField;
    use crate::poly::Poly;
    use num_bigint::BigInt;

    const CAP: u128 = 1 << 26;

    fn curve(p: u64, h: &[i64], f: &[i64]) -> HyperellipticCurve {
        let field = FiniteField::prime(p).expect("prime field");
        HyperellipticCurve::from_int_coeffs(&field, h, f).expect("valid model")
    }

    fn even_sextic_over_f5() -> HyperellipticCurve {
        let field = FiniteField::prime(5).expect("prime field");
        let ring = PolyRing::new(&field);
        let mut f = ring.from_int_coeffs(&[2, 0, 1]);
        for r in 1..=4 {
            f = ring.mul(&f, &ring.from_int_coeffs(&[-r, 1]));
        }
        HyperellipticCurve::new(field, Poly::zero(), f).expect("valid model")
    }

    /// Independent second count for the x-map: a degree-k x-orbit contributes
    /// two non-fibral closed points when its fiber splits into two distinct
    /// rational points over the degree-k extension, and nothing otherwise.
    fn x_fiber_oracle(c: &HyperellipticCurve, k: usize) -> u64 {
        let (ext, emb) = c.extension(k).expect("extension");
        let bring = PolyRing::new(c.field());
        let ering = PolyRing::new(&ext);
        let he = bring.map_through(c.h(), &emb);
        let fe = bring.map_through(c.f(), &emb);
        let mut split_points = 0u64;
        for x in ext.elements().expect("enumerable") {
            // Exact degree k over the base: for prime k this is just "not
            // fixed by the base Frobenius".
            if ext.frobenius(&x, 1) == x {
                continue;
            }
            let hv = ering.eval(&he, &x);
            let fv = ering.eval(&fe, &x);
            let ys = fiber_ys(&ext, &hv, &fv);
            let unramified = if ext.characteristic() == 2 {
                !hv.is_zero()
            } else {
                true
            };
            if ys.len() == 2 && ys[0] != ys[1] && unramified {
                split_points += 1;
            }
        }
        assert_eq!(split_points % k as u64, 0);
        2 * (split_points / k as u64)
    }

    #[test]
    fn weierstrass_orbits_are_fibral() {
        // Every rational point of y^2 = x^5 - x over F_5 is a Weierstrass
        // point, and the odd model ramifies at infinity, so no degree-1
        // closed point passes.
        let c = curve(5, &[], &[0, -1, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        let (_, emb) = c.extension(1).expect("extension");
        let orbits = c.degree_k_orbits(1, CAP).expect("orbits");
        assert!(!orbits.is_empty());
        for orbit in &orbits {
            assert!(!map.is_nonfibral(&emb, orbit).unwrap());
        }
    }

    #[test]
    fn shared_x_pair_is_fibral() {
        // f(1) = 3 is a non-square mod 5, so the fiber over x = 1 is a
        // single degree-2 closed point whose two geometric points share
        // their image.
        let c = curve(5, &[], &[1, 1, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        let (_, emb) = c.extension(2).expect("extension");
        let one = emb.embed(&c.field().one());
        let orbits = c.degree_k_orbits(2, CAP).expect("orbits");
        let inert = orbits
            .iter()
            .find(|o| matches!(&o.representative, CurvePoint::Affine { x, .. } if *x == one))
            .expect("inert fiber over x = 1");
        assert!(!map.is_nonfibral(&emb, inert).unwrap());
        // Both points are unramified; only the image collapse disqualifies.
        if let CurvePoint::Affine { x, y } = &inert.representative {
            let ext = emb.ext();
            for (px, py) in frobenius_orbit(ext, x, y) {
                let p = CurvePoint::Affine { x: px, y: py };
                assert!(map.is_unramified(&emb, &p).unwrap());
            }
        }
    }

    #[test]
    fn exact_degree_three_orbits_split_by_weierstrass_locus() {
        // With h = 0 every degree-3 orbit has an x-coordinate of exact
        // degree 3, so the images are automatically distinct and the verdict
        // reduces to y != 0.
        let c = curve(3, &[], &[1, 2, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        let (_, emb) = c.extension(3).expect("extension");
        let orbits = c.degree_k_orbits(3, CAP).expect("orbits");
        assert!(!orbits.is_empty());
        let mut saw_nonfibral = false;
        for orbit in &orbits {
            let CurvePoint::Affine { y, .. } = &orbit.representative else {
                panic!("degree-3 orbits are affine");
            };
            let verdict = map.is_nonfibral(&emb, orbit).unwrap();
            assert_eq!(verdict, !y.is_zero());
            saw_nonfibral |= verdict;
        }
        assert!(saw_nonfibral);
    }

    #[test]
    fn verdict_is_frobenius_invariant() {
        let c = curve(5, &[], &[1, 1, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        for k in [2usize, 3] {
            let (ext, emb) = c.extension(k).expect("extension");
            for orbit in c.degree_k_orbits(k, CAP).expect("orbits") {
                let CurvePoint::Affine { x, y } = &orbit.representative else {
                    continue;
                };
                let reference = map.is_nonfibral(&emb, &orbit).unwrap();
                for (px, py) in frobenius_orbit(&ext, x, y) {
                    let rotated = DivisorOrbit {
                        representative: CurvePoint::Affine { x: px, y: py },
                        degree: orbit.degree,
                        multiplicity: 1,
                    };
                    assert_eq!(map.is_nonfibral(&emb, &rotated).unwrap(), reference);
                }
            }
        }
    }

    #[test]
    fn count_meets_lower_bound_on_f5_example() {
        let c = curve(5, &[], &[0, -1, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        let count = map.count_nonfibral(3, CAP).unwrap();
        let bound = bounds::nonfibral_lower_bound(2, 5, 3, 2).unwrap();
        assert_eq!(bound.safe_lower, BigInt::from(19));
        assert!(BigInt::from(count) >= bound.safe_lower);
        let total = c.degree_k_orbits(3, CAP).expect("orbits").len() as u64;
        assert!(count <= total);
    }

    #[test]
    fn count_matches_fiber_classification_oracle() {
        let curves = [
            curve(3, &[], &[1, 2, 0, 0, 0, 1]),
            curve(5, &[], &[0, -1, 0, 0, 0, 1]),
            curve(5, &[], &[1, 1, 0, 0, 0, 1]),
            curve(2, &[1, 1], &[1, 1, 0, 0, 0, 1]),
        ];
        for c in &curves {
            let map = CoveringMap::x_map(c);
            for k in [2usize, 3] {
                let counted = map.count_nonfibral(k, CAP).unwrap();
                assert_eq!(counted, x_fiber_oracle(c, k), "k = {k}");
            }
        }
    }

    #[test]
    fn infinity_verdict_follows_model_parity() {
        // Odd model: the sole infinite point is a branch point.
        let odd = curve(5, &[], &[1, 1, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&odd);
        let (_, emb) = odd.extension(1).expect("extension");
        let orbits = odd.degree_k_orbits(1, CAP).expect("orbits");
        let inf = orbits
            .iter()
            .find(|o| matches!(o.representative, CurvePoint::Infinity(_)))
            .expect("infinite orbit");
        assert!(!map.is_nonfibral(&emb, inf).unwrap());

        // Even model in odd characteristic: two infinite points, each its
        // own unramified degree-1 closed point.
        let even = even_sextic_over_f5();
        let map = CoveringMap::x_map(&even);
        let (_, emb) = even.extension(1).expect("extension");
        let infs: Vec<DivisorOrbit> = even
            .degree_k_orbits(1, CAP)
            .expect("orbits")
            .into_iter()
            .filter(|o| matches!(o.representative, CurvePoint::Infinity(_)))
            .collect();
        assert_eq!(infs.len(), 2);
        for orbit in &infs {
            assert!(map.is_nonfibral(&emb, orbit).unwrap());
        }
    }

    #[test]
    fn composite_k_is_rejected() {
        let c = curve(3, &[], &[1, 2, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        assert!(matches!(
            map.count_nonfibral(4, CAP),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn cap_guard_propagates() {
        let c = curve(3, &[], &[1, 2, 0, 0, 0, 1]);
        let map = CoveringMap::x_map(&c);
        assert!(matches!(
            map.count_nonfibral(3, 8),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn inseparable_maps_are_refused() {
        let c = curve(3, &[], &[1, 2, 0, 0, 0, 1]);
        let eval: EvalFn = Box::new(|_, _| Ok(TargetPoint::Line(None)));
        let unramified: UnramifiedFn = Box::new(|_, _| Ok(true));
        let map =
            CoveringMap::new(&c, TargetKind::ProjectiveLine, 3, false, eval, unramified).unwrap();
        assert!(matches!(
            map.count_nonfibral(3, CAP),
            Err(Error::InseparableUnsupported)
        ));
        let (_, emb) = c.extension(1).expect("extension");
        let orbits = c.degree_k_orbits(1, CAP).expect("orbits");
        assert!(matches!(
            map.is_nonfibral(&emb, &orbits[0]),
            Err(Error::InseparableUnsupported)
        ));
    }

    #[test]
    fn degree_one_maps_are_rejected() {
        let c = curve(3, &[], &[1, 2, 0, 0, 0, 1]);
        let eval: EvalFn = Box::new(|_, _| Ok(TargetPoint::Line(None)));
        let unramified: UnramifiedFn = Box::new(|_, _| Ok(true));
        let r = CoveringMap::new(&c, TargetKind::ProjectiveLine, 1, true, eval, unramified);
        assert!(matches!(r, Err(Error::PreconditionViolated { .. })));
    }
}
