//! Bielliptic covers phi: X1 -> X2 of degree 2, with pullback and
//! pushforward between the class groups and the exact quotient
//! Pic0(X1)/phi^* Pic0(X2).
//!
//! The construction is concrete: X2 is the elliptic curve Y^2 = F(X) for a
//! monic squarefree cubic F with F(0) != 0, X1 is the genus-2 curve
//! y^2 = F(x^2), and phi sends (x, y) to (x^2, y). Divisor arithmetic on X1
//! needs an odd model, so F must have a root that is a nonzero square: its
//! square root is a rational Weierstrass x of X1 and the stored odd model
//! puts that point at infinity.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::bounds::{
    relative_bound_part1, relative_bound_part2, relative_bound_sharp, BoundValue, SharpBound,
};
use crate::curve::{CurvePoint, HyperellipticCurve, InfBranch, ModelChange};
use crate::ff::{Embedding, FieldElem, FiniteField};
use crate::jacobian::{JacClass, Jacobian};
use crate::nonfibral::{CoveringMap, EvalFn, TargetKind, TargetPoint, UnramifiedFn};
use crate::poly::{Poly, PolyRing};
use crate::{Error, Result};

/// A validated degree-2 cover of an elliptic curve by a genus-2 curve.
pub struct BiellipticCover {
    f_cubic: Poly,
    x2: HyperellipticCurve,
    change: ModelChange,
    root: FieldElem,
    w: FieldElem,
}

/// Builds the cover from a monic squarefree cubic F over a field of odd
/// characteristic. The designated Weierstrass point comes from the first
/// root of F (in enumeration order) that is a nonzero square; with no such
/// root the cover is rejected rather than approximated.
pub fn build_cover(field: &FiniteField, f_cubic: &Poly) -> Result<BiellipticCover> {
    if field.characteristic() == 2 {
        return Err(Error::PreconditionViolated {
            detail: String::from("bielliptic covers need odd characteristic"),
        });
    }
    let ring = PolyRing::new(field);
    if f_cubic.deg() != Some(3) || !f_cubic.is_monic(&ring) {
        return Err(Error::PreconditionViolated {
            detail: String::from("F must be a monic cubic"),
        });
    }
    if !ring.is_squarefree(f_cubic) {
        return Err(Error::NotSquarefree);
    }
    if ring.coeff(f_cubic, 0).is_zero() {
        return Err(Error::RootAtZero);
    }
    let mut root = None;
    for r in ring.roots(f_cubic)? {
        if field.legendre(&r) == 1 {
            root = Some(r);
            break;
        }
    }
    let Some(root) = root else {
        return Err(Error::NoSquareRoot);
    };
    let s = field
        .sqrt(&root)
        .expect("a quadratic residue has a square root");
    let w = core::cmp::min(s.clone(), field.neg(&s));
    let x2 = HyperellipticCurve::new(field.clone(), Poly::zero(), f_cubic.clone())?;
    let xsq = ring.from_int_coeffs(&[0, 0, 1]);
    let f6 = ring.compose(f_cubic, &xsq);
    // Squarefree of degree 6 follows from F squarefree with F(0) != 0, but
    // the model is checked, not trusted.
    if !ring.is_squarefree(&f6) {
        return Err(Error::NotSquarefree);
    }
    let x1_even = HyperellipticCurve::new(field.clone(), Poly::zero(), f6)?;
    let change = x1_even.move_weierstrass_to_infinity(&w)?;
    Ok(BiellipticCover {
        f_cubic: f_cubic.clone(),
        x2,
        change,
        root,
        w,
    })
}

impl BiellipticCover {
    pub fn base(&self) -> &FiniteField {
        self.x2.field()
    }

    /// The odd model of the genus-2 source curve.
    pub fn x1(&self) -> &HyperellipticCurve {
        self.change.odd()
    }

    /// The even model y^2 = F(x^2) that phi is defined on.
    pub fn x1_even(&self) -> &HyperellipticCurve {
        self.change.even()
    }

    pub fn x2(&self) -> &HyperellipticCurve {
        &self.x2
    }

    pub fn f_cubic(&self) -> &Poly {
        &self.f_cubic
    }

    pub fn model_change(&self) -> &ModelChange {
        &self.change
    }

    /// The root of F whose square root was sent to infinity on X1.
    pub fn designated_root(&self) -> &FieldElem {
        &self.root
    }

    pub fn root_sqrt(&self) -> &FieldElem {
        &self.w
    }

    pub fn deg_phi(&self) -> u64 {
        2
    }

    /// Image on X2 of an odd-model point of X1 with coordinates in
    /// `emb.ext()`. Infinity of the odd model sits over the even-model
    /// Weierstrass point (w, 0), so it maps to (w^2, 0); the two even-model
    /// infinite points map to the origin of X2.
    pub fn phi(&self, emb: &Embedding, p: &CurvePoint) -> Result<CurvePoint> {
        let ext = emb.ext();
        Ok(match self.change.unmap_point(emb, p)? {
            CurvePoint::Infinity(_) => CurvePoint::Infinity(InfBranch::Sole),
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: ext.mul(&x, &x),
                y,
            },
        })
    }

    /// phi ramifies exactly over X = 0: the fiber x^2 = X degenerates only
    /// there, and the fiber over the origin is the two even-model infinite
    /// points.
    pub fn phi_unramified(&self, emb: &Embedding, p: &CurvePoint) -> Result<bool> {
        Ok(match self.change.unmap_point(emb, p)? {
            CurvePoint::Affine { x, .. } => !x.is_zero(),
            CurvePoint::Infinity(_) => true,
        })
    }

    /// phi as a covering of X2, for the orbit tests.
    pub fn covering_map(&self) -> Result<CoveringMap<'_>> {
        let eval: EvalFn<'_> =
            alloc::boxed::Box::new(move |emb, p| Ok(TargetPoint::Curve(self.phi(emb, p)?)));
        let unramified: UnramifiedFn<'_> =
            alloc::boxed::Box::new(move |emb, p| self.phi_unramified(emb, p));
        CoveringMap::new(
            self.x1(),
            TargetKind::EllipticCurve,
            2,
            true,
            eval,
            unramified,
        )
    }

    /// The degree-4 composite (X-coordinate of X2) after phi, mapping X1 to
    /// the line. A point is unramified for the composite exactly when it is
    /// unramified for phi and its phi-image is unramified for the
    /// X-coordinate map, which on Y^2 = F(X) branches at Y = 0 and the
    /// origin.
    pub fn composite_x_map(&self) -> Result<CoveringMap<'_>> {
        let eval: EvalFn<'_> = alloc::boxed::Box::new(move |emb, p| {
            Ok(match self.phi(emb, p)? {
                CurvePoint::Infinity(_) => TargetPoint::Line(None),
                CurvePoint::Affine { x, .. } => TargetPoint::Line(Some(x)),
            })
        });
        let unramified: UnramifiedFn<'_> = alloc::boxed::Box::new(move |emb, p| {
            if !self.phi_unramified(emb, p)? {
                return Ok(false);
            }
            Ok(match self.phi(emb, p)? {
                CurvePoint::Infinity(_) => false,
                CurvePoint::Affine { y, .. } => !y.is_zero(),
            })
        });
        CoveringMap::new(
            self.x1(),
            TargetKind::ProjectiveLine,
            4,
            true,
            eval,
            unramified,
        )
    }

    /// The rational points of X2, origin first, affine points in
    /// enumeration order.
    pub fn e_points(&self) -> Result<Vec<CurvePoint>> {
        let (_, emb) = self.x2.extension(1)?;
        let mut out = vec![CurvePoint::Infinity(InfBranch::Sole)];
        for (x, y) in self.x2.affine_points(&emb)? {
            out.push(CurvePoint::Affine { x, y });
        }
        Ok(out)
    }

    /// Group law of X2 under Pic0(X2) = E(F_q), c <-> (Q_c) - (O).
    pub fn e_add(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        let jac = Jacobian::new(&self.x2)?;
        let sum = jac.compose(&self.e_class(&jac, a)?, &self.e_class(&jac, b)?)?;
        self.e_point_of_class(&sum)
    }

    pub fn e_scalar(&self, a: &CurvePoint, n: u64) -> Result<CurvePoint> {
        let jac = Jacobian::new(&self.x2)?;
        let prod = jac.scalar_mul(&self.e_class(&jac, a)?, &BigInt::from(n))?;
        self.e_point_of_class(&prod)
    }

    fn e_class(&self, jac: &Jacobian<'_>, q: &CurvePoint) -> Result<JacClass> {
        match q {
            CurvePoint::Infinity(_) => Ok(jac.identity()),
            CurvePoint::Affine { x, y } => jac.class_from_point(x, y),
        }
    }

    fn e_point_of_class(&self, a: &JacClass) -> Result<CurvePoint> {
        let ring = PolyRing::new(self.base());
        match a.u.deg() {
            None | Some(0) => Ok(CurvePoint::Infinity(InfBranch::Sole)),
            Some(1) => {
                let x = self.base().neg(&ring.coeff(&a.u, 0));
                let y = ring.eval(&a.v, &x);
                Ok(CurvePoint::Affine { x, y })
            }
            Some(_) => Err(Error::ConsistencyFailure {
                detail: String::from("a reduced genus-1 class has u of degree at most 1"),
            }),
        }
    }
}

/// The class of phi^{-1}(Q) - phi^{-1}(O) in Pic0(X1). Preimages are solved
/// by square roots over F_q or F_{q^2}, assembled into a Galois-stable
/// divisor on the even model, transported to the odd model, and reduced.
pub fn pullback(cover: &BiellipticCover, q: &CurvePoint) -> Result<JacClass> {
    let (_, emb1) = cover.x2.extension(1)?;
    if !cover.x2.contains(&emb1, q) {
        return Err(Error::PreconditionViolated {
            detail: String::from("pullback input is not a rational point of X2"),
        });
    }
    let jac = Jacobian::new(cover.x1())?;
    let over_q = fiber_class(cover, &jac, &emb1, q)?;
    let over_o = fiber_class(cover, &jac, &emb1, &CurvePoint::Infinity(InfBranch::Sole))?;
    jac.sub(&over_q, &over_o)
}

/// The class [phi^*(Q) - 2 inf] on the odd model of X1. Odd-model infinity
/// components of the fiber drop out of the Mumford representation by
/// definition.
fn fiber_class(
    cover: &BiellipticCover,
    jac: &Jacobian<'_>,
    emb1: &Embedding,
    q: &CurvePoint,
) -> Result<JacClass> {
    let field = cover.base();
    let change = &cover.change;
    let compose_affine = |pts: &[CurvePoint]| -> Result<JacClass> {
        let mut acc = jac.identity();
        for p in pts {
            if let CurvePoint::Affine { x, y } = p {
                acc = jac.compose(&acc, &jac.class_from_point(x, y)?)?;
            }
        }
        Ok(acc)
    };
    match q {
        CurvePoint::Infinity(_) => {
            let plus = change.map_point(emb1, &CurvePoint::Infinity(InfBranch::Plus))?;
            let minus = change.map_point(emb1, &CurvePoint::Infinity(InfBranch::Minus))?;
            compose_affine(&[plus, minus])
        }
        CurvePoint::Affine { x: xq, y: yq } => {
            if xq.is_zero() {
                // Ramified fiber: the single point (0, Y_Q) with
                // multiplicity two.
                let p = change.map_point(
                    emb1,
                    &CurvePoint::Affine {
                        x: field.zero(),
                        y: yq.clone(),
                    },
                )?;
                compose_affine(&[p.clone(), p])
            } else if let Some(s) = field.sqrt(xq) {
                let a = change.map_point(
                    emb1,
                    &CurvePoint::Affine {
                        x: s.clone(),
                        y: yq.clone(),
                    },
                )?;
                let b = change.map_point(
                    emb1,
                    &CurvePoint::Affine {
                        x: field.neg(&s),
                        y: yq.clone(),
                    },
                )?;
                compose_affine(&[a, b])
            } else {
                // Inert fiber: one degree-2 closed point with conjugate
                // x-coordinates +-sqrt(X_Q) in the quadratic extension.
                let (ext, emb) = field.make_extension(2)?;
                let xe = ext
                    .sqrt(&emb.embed(xq))
                    .ok_or(Error::ConsistencyFailure {
                        detail: String::from(
                            "the quadratic extension holds a square root of every base element",
                        ),
                    })?;
                let ye = emb.embed(yq);
                let mut orbit = Vec::with_capacity(2);
                for x in [xe.clone(), ext.neg(&xe)] {
                    match change.map_point(
                        &emb,
                        &CurvePoint::Affine {
                            x,
                            y: ye.clone(),
                        },
                    )? {
                        CurvePoint::Affine { x, y } => orbit.push((x, y)),
                        CurvePoint::Infinity(_) => {
                            return Err(Error::ConsistencyFailure {
                                detail: String::from(
                                    "a non-rational fiber point cannot sit over the Weierstrass x",
                                ),
                            })
                        }
                    }
                }
                jac.orbit_to_mumford(&emb, &orbit)
            }
        }
    }
}

/// phi_* on divisor classes, landing in Pic0(X2) = E(F_q). The Mumford
/// representative A - d inf is pushed pointwise: rational and conjugate
/// points of A through phi, plus d copies of phi(inf) = (w^2, 0) subtracted.
pub fn pushforward(cover: &BiellipticCover, a: &JacClass) -> Result<CurvePoint> {
    let jac1 = Jacobian::new(cover.x1())?;
    if !jac1.is_valid(a) {
        return Err(Error::PreconditionViolated {
            detail: String::from("pushforward input is not a reduced divisor on X1"),
        });
    }
    let field = cover.base();
    let ring = PolyRing::new(field);
    let jac2 = Jacobian::new(&cover.x2)?;
    let (_, emb1) = cover.x2.extension(1)?;
    let d = a.u.deg().unwrap_or(0);
    let mut acc = jac2.identity();
    let push_rational = |acc: &JacClass, x: &FieldElem, mult: u64| -> Result<JacClass> {
        let p = CurvePoint::Affine {
            x: x.clone(),
            y: ring.eval(&a.v, x),
        };
        let image = cover.phi(&emb1, &p)?;
        let cls = cover.e_class(&jac2, &image)?;
        jac2.compose(acc, &jac2.scalar_mul(&cls, &BigInt::from(mult))?)
    };
    if d >= 1 {
        let roots = ring.roots(&a.u)?;
        match (d, roots.len()) {
            (1, 1) => acc = push_rational(&acc, &roots[0], 1)?,
            (2, 2) => {
                acc = push_rational(&acc, &roots[0], 1)?;
                acc = push_rational(&acc, &roots[1], 1)?;
            }
            // A monic quadratic with one rational root splits, so a single
            // root is a double root.
            (2, 1) => acc = push_rational(&acc, &roots[0], 2)?,
            (2, 0) => {
                let (ext, emb) = field.make_extension(2)?;
                let ering = PolyRing::new(&ext);
                let ue = ring.map_through(&a.u, &emb);
                let ve = ring.map_through(&a.v, &emb);
                let xs = ering.roots(&ue)?;
                if xs.len() != 2 {
                    return Err(Error::ConsistencyFailure {
                        detail: String::from("an irreducible quadratic splits over F_q^2"),
                    });
                }
                let mut images = Vec::with_capacity(2);
                for x in &xs {
                    match cover.phi(
                        &emb,
                        &CurvePoint::Affine {
                            x: x.clone(),
                            y: ering.eval(&ve, x),
                        },
                    )? {
                        CurvePoint::Affine { x, y } => images.push((x, y)),
                        CurvePoint::Infinity(_) => {
                            return Err(Error::ConsistencyFailure {
                                detail: String::from(
                                    "a non-rational point of X1 cannot map to the origin",
                                ),
                            })
                        }
                    }
                }
                if images[0] == images[1] {
                    // Both conjugates hit one rational point: an inert
                    // fiber, image multiplicity two.
                    let x = emb.project(&images[0].0).ok_or(Error::ConsistencyFailure {
                        detail: String::from("a Frobenius-fixed coordinate projects to the base"),
                    })?;
                    let y = emb.project(&images[0].1).ok_or(Error::ConsistencyFailure {
                        detail: String::from("a Frobenius-fixed coordinate projects to the base"),
                    })?;
                    let cls = jac2.class_from_point(&x, &y)?;
                    acc = jac2.compose(&acc, &jac2.scalar_mul(&cls, &BigInt::from(2u32))?)?;
                } else if images[0].0 == images[1].0 {
                    // Opposite points of X2 sum to zero.
                } else {
                    let cls = jac2.orbit_to_mumford(&emb, &images)?;
                    acc = jac2.compose(&acc, &cls)?;
                }
            }
            _ => {
                return Err(Error::ConsistencyFailure {
                    detail: String::from("unexpected root pattern for a reduced divisor"),
                })
            }
        }
    }
    let base_image = cover.phi(&emb1, &CurvePoint::Infinity(InfBranch::Sole))?;
    let base_cls = cover.e_class(&jac2, &base_image)?;
    acc = jac2.sub(&acc, &jac2.scalar_mul(&base_cls, &BigInt::from(d as u64))?)?;
    cover.e_point_of_class(&acc)
}

/// The measured relative class group and the bound comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeProfile {
    pub h1: BigInt,
    /// #E(F_q) = #Pic0(X2).
    pub e_order: u64,
    /// Order of the image subgroup phi^* Pic0(X2) inside Pic0(X1).
    pub image_order: u64,
    pub quotient_order: u64,
    pub quotient_exponent: u64,
    /// Rational points of X2 whose pullback is the identity.
    pub kernel_order: u64,
    /// Geometric ramification points of phi.
    pub ramification_points: u64,
    pub part1: BoundValue,
    pub part1_pass: bool,
    pub part2: BoundValue,
    pub part2_pass: bool,
    pub sharp: SharpBound,
    pub sharp_pass: bool,
}

/// Enumerates Pic0(X1), materializes the image of the pullback, and measures
/// the quotient group exactly. Internal cross-checks (Lagrange, the kernel
/// identity, Riemann-Hurwitz) fail loudly instead of producing a profile.
pub fn relative_profile(cover: &BiellipticCover, cap: u128, prec: u32) -> Result<RelativeProfile> {
    let jac1 = Jacobian::new(cover.x1())?;
    let classes = jac1.enumerate_classes(cap)?;
    let h1_num = classes.len() as u64;
    let e_pts = cover.e_points()?;
    let e_order = e_pts.len() as u64;
    let identity = jac1.identity();
    let mut image: Vec<JacClass> = Vec::with_capacity(e_pts.len());
    let mut kernel_order = 0u64;
    for q in &e_pts {
        let cls = pullback(cover, q)?;
        if cls == identity {
            kernel_order += 1;
        }
        image.push(cls);
    }
    image.sort();
    image.dedup();
    let image_order = image.len() as u64;
    if h1_num % image_order != 0 {
        return Err(Error::ConsistencyFailure {
            detail: String::from("the image order must divide the class number"),
        });
    }
    let quotient_order = h1_num / image_order;
    if image_order * kernel_order != e_order {
        return Err(Error::ConsistencyFailure {
            detail: String::from("image order times kernel order must equal #E(F_q)"),
        });
    }
    // Exponent of Pic0(X1)/image: the order of each coset generator divides
    // the quotient order, so the first divisor d with d*a in the image is
    // that order.
    let divisors = crate::primes::divisors_u64(quotient_order);
    let mut exponent = 1u64;
    for a in &classes {
        let mut found = None;
        for &d in &divisors {
            let multiple = jac1.scalar_mul(a, &BigInt::from(d))?;
            if image.binary_search(&multiple).is_ok() {
                found = Some(d);
                break;
            }
        }
        let Some(d) = found else {
            return Err(Error::ConsistencyFailure {
                detail: String::from("a coset order must divide the quotient order"),
            });
        };
        exponent = num_integer::lcm(exponent, d);
    }
    // Ramification of phi: the geometric points over X = 0, found over the
    // quadratic extension where both square roots of F(0) live; infinity
    // splits and contributes nothing.
    let field = cover.base();
    let ring = PolyRing::new(field);
    let (ext2, emb2) = field.make_extension(2)?;
    let f_at_zero = ring.coeff(cover.f_cubic(), 0);
    let ram_ys = crate::curve::fiber_ys(&ext2, &ext2.zero(), &emb2.embed(&f_at_zero));
    let ramification_points = ram_ys.len() as u64;
    let (_, emb1) = cover.x2.extension(1)?;
    let inf_plus = cover
        .change
        .map_point(&emb1, &CurvePoint::Infinity(InfBranch::Plus))?;
    let inf_minus = cover
        .change
        .map_point(&emb1, &CurvePoint::Infinity(InfBranch::Minus))?;
    if inf_plus == inf_minus {
        return Err(Error::ConsistencyFailure {
            detail: String::from("the fiber over the origin must split"),
        });
    }
    let g1 = cover.x1().genus() as u64;
    let g2 = cover.x2.genus() as u64;
    let deg_phi = cover.deg_phi();
    if 2 * g1 - 2 != deg_phi * (2 * g2 - 2) + ramification_points {
        return Err(Error::ConsistencyFailure {
            detail: String::from("Riemann-Hurwitz mismatch for the cover"),
        });
    }
    let q = field
        .size_u128()
        .and_then(|s| u64::try_from(s).ok())
        .ok_or(Error::PreconditionViolated {
            detail: String::from("base field too large for the bound formulas"),
        })?;
    let part1 = relative_bound_part1(g1, g2, q, prec)?;
    let part2 = relative_bound_part2(g1, q, deg_phi)?;
    let sharp = relative_bound_sharp(g1, 2, q, deg_phi)?;
    let e_big = BigInt::from(exponent);
    let part1_pass = e_big >= part1.safe_lower;
    let part2_pass = e_big >= part2.safe_lower;
    let sharp_pass = e_big >= sharp.bound.safe_lower;
    Ok(RelativeProfile {
        h1: BigInt::from(h1_num),
        e_order,
        image_order,
        quotient_order,
        quotient_exponent: exponent,
        kernel_order,
        ramification_points,
        part1,
        part1_pass,
        part2,
        part2_pass,
        sharp,
        sharp_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{frobenius_point, ModelParity};
    use crate::zeta::l_polynomial;
    use num_traits::One;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    const CAP: u128 = 1 << 26;

    fn cover_from_ints(p: u64, coeffs: &[i64]) -> Result<BiellipticCover> {
        let field = FiniteField::prime(p).expect("prime field");
        let ring = PolyRing::new(&field);
        let f = ring.from_int_coeffs(coeffs);
        build_cover(&field, &f)
    }

    /// (X - 1)(X^2 + X + 2) over F_5: root 1 is the square of 1 and the
    /// quadratic factor has non-square discriminant.
    fn example_cover() -> BiellipticCover {
        cover_from_ints(5, &[-2, 1, 0, 1]).expect("valid cover")
    }

    /// (X - 1)(X - 2)(X - 3) over F_5: F(0) = 4 is a square, so X2 has
    /// rational points over X = 0 and the ramified pullback path runs.
    fn split_cover() -> BiellipticCover {
        cover_from_ints(5, &[4, 1, 4, 1]).expect("valid cover")
    }

    fn first_covers(p: u64, limit: usize) -> Vec<BiellipticCover> {
        let field = FiniteField::prime(p).expect("prime field");
        let ring = PolyRing::new(&field);
        let mut out = Vec::new();
        for c0 in 0..p as i64 {
            for c1 in 0..p as i64 {
                for c2 in 0..p as i64 {
                    let f = ring.from_int_coeffs(&[c0, c1, c2, 1]);
                    if let Ok(cover) = build_cover(&field, &f) {
                        out.push(cover);
                        if out.len() == limit {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn example_cover_shape() {
        let cover = example_cover();
        assert_eq!(cover.x1().genus(), 2);
        assert_eq!(cover.x1().parity(), ModelParity::Odd);
        assert_eq!(cover.x2().genus(), 1);
        assert_eq!(cover.x1_even().f().deg(), Some(6));
        let field = cover.base();
        assert_eq!(*cover.designated_root(), field.one());
        assert_eq!(*cover.root_sqrt(), field.one());
        // Infinity of the odd model sits over the Weierstrass point, so its
        // image is (w^2, 0) = (1, 0).
        let (_, emb) = cover.x1().extension(1).expect("extension");
        let image = cover
            .phi(&emb, &CurvePoint::Infinity(InfBranch::Sole))
            .expect("image");
        assert_eq!(
            image,
            CurvePoint::Affine {
                x: field.one(),
                y: field.zero()
            }
        );
    }

    #[test]
    fn rejections_are_tagged() {
        assert!(matches!(cover_from_ints(5, &[0, -1, 0, 1]), Err(Error::RootAtZero)));
        // (X - 1)^3 = X^3 - 3X^2 + 3X - 1.
        assert!(matches!(
            cover_from_ints(5, &[-1, 3, -3, 1]),
            Err(Error::NotSquarefree)
        ));
        // X^3 + X + 1 is irreducible over F_5: no root at all.
        assert!(matches!(cover_from_ints(5, &[1, 1, 0, 1]), Err(Error::NoSquareRoot)));
        // Roots 2 and the quadratic X^2 + X + 1: 2 is a non-square mod 5.
        assert!(matches!(
            cover_from_ints(5, &[-2, -1, -1, 1]),
            Err(Error::NoSquareRoot)
        ));
        assert!(matches!(
            cover_from_ints(3, &[1, 0, 0, 0, 1]),
            Err(Error::PreconditionViolated { .. })
        ));
        let f2 = FiniteField::prime(2).expect("prime field");
        let ring = PolyRing::new(&f2);
        let f = ring.from_int_coeffs(&[1, 1, 0, 1]);
        assert!(matches!(
            build_cover(&f2, &f),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn phi_commutes_with_frobenius() {
        let cover = example_cover();
        let x1 = cover.x1();
        let x2 = cover.x2();
        for k in [1usize, 2, 3] {
            let (ext, emb) = x1.extension(k).expect("extension");
            let mut pts = vec![CurvePoint::Infinity(InfBranch::Sole)];
            for (x, y) in x1.affine_points(&emb).expect("points") {
                pts.push(CurvePoint::Affine { x, y });
            }
            for p in &pts {
                let image = cover.phi(&emb, p).expect("image");
                assert!(x2.contains(&emb, &image));
                let twisted = cover.phi(&emb, &frobenius_point(&ext, p)).expect("image");
                assert_eq!(twisted, frobenius_point(&ext, &image));
            }
        }
    }

    #[test]
    fn pullback_of_origin_is_identity() {
        let cover = example_cover();
        let jac = Jacobian::new(cover.x1()).expect("odd model");
        let cls = pullback(&cover, &CurvePoint::Infinity(InfBranch::Sole)).expect("pullback");
        assert_eq!(cls, jac.identity());
    }

    #[test]
    fn pullback_is_a_homomorphism_exhaustively() {
        for cover in [example_cover(), split_cover()] {
            let jac = Jacobian::new(cover.x1()).expect("odd model");
            let pts = cover.e_points().expect("points");
            for a in &pts {
                for b in &pts {
                    let sum = cover.e_add(a, b).expect("sum");
                    let lhs = pullback(&cover, &sum).expect("pullback");
                    let rhs = jac
                        .compose(
                            &pullback(&cover, a).expect("pullback"),
                            &pullback(&cover, b).expect("pullback"),
                        )
                        .expect("compose");
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pullback_outputs_are_valid_and_respect_torsion() {
        let cover = split_cover();
        let jac = Jacobian::new(cover.x1()).expect("odd model");
        let two = BigInt::from(2u32);
        for q in cover.e_points().expect("points") {
            let cls = pullback(&cover, &q).expect("pullback");
            assert!(jac.is_valid(&cls));
            let doubled = cover.e_add(&q, &q).expect("sum");
            if doubled == CurvePoint::Infinity(InfBranch::Sole) {
                let d = jac.scalar_mul(&cls, &two).expect("scalar");
                assert_eq!(d, jac.identity());
            }
        }
    }

    #[test]
    fn pushforward_of_identity_is_origin() {
        let cover = example_cover();
        let jac = Jacobian::new(cover.x1()).expect("odd model");
        let image = pushforward(&cover, &jac.identity()).expect("pushforward");
        assert_eq!(image, CurvePoint::Infinity(InfBranch::Sole));
    }

    #[test]
    fn projection_formula_doubles_exhaustively() {
        let mut covers = vec![example_cover(), split_cover()];
        covers.extend(first_covers(7, 2));
        for cover in &covers {
            for q in cover.e_points().expect("points") {
                let up = pullback(cover, &q).expect("pullback");
                let down = pushforward(cover, &up).expect("pushforward");
                assert_eq!(down, cover.e_scalar(&q, 2).expect("double"));
            }
        }
    }

    #[test]
    fn pushforward_is_a_homomorphism_on_samples() {
        let cover = example_cover();
        let jac = Jacobian::new(cover.x1()).expect("odd model");
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..1000 {
            let a = jac.random_class(&mut rng).expect("class");
            let b = jac.random_class(&mut rng).expect("class");
            let sum = jac.compose(&a, &b).expect("compose");
            let lhs = pushforward(&cover, &sum).expect("pushforward");
            let rhs = cover
                .e_add(
                    &pushforward(&cover, &a).expect("pushforward"),
                    &pushforward(&cover, &b).expect("pushforward"),
                )
                .expect("sum");
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn profile_is_internally_consistent() {
        for cover in [example_cover(), split_cover()] {
            let profile = relative_profile(&cover, CAP, 64).expect("profile");
            assert_eq!(
                BigInt::from(profile.image_order * profile.quotient_order),
                profile.h1
            );
            let zeta = l_polynomial(cover.x1(), CAP).expect("zeta");
            assert_eq!(zeta.class_number, profile.h1);
            assert_eq!(profile.quotient_order % profile.quotient_exponent, 0);
            assert_eq!(
                profile.quotient_exponent == 1,
                BigInt::from(profile.image_order) == profile.h1
            );
            assert_eq!(profile.image_order * profile.kernel_order, profile.e_order);
            assert_eq!(profile.ramification_points, 2);
            assert!(profile.part1_pass && profile.part2_pass && profile.sharp_pass);
            assert!(profile.quotient_exponent >= 1);
        }
    }

    #[test]
    fn composite_is_nonfibral_only_where_phi_is() {
        let cover = example_cover();
        let phi_map = cover.covering_map().expect("map");
        let comp = cover.composite_x_map().expect("map");
        let x1 = cover.x1();
        let (_, emb) = x1.extension(3).expect("extension");
        let orbits = x1.degree_k_orbits(3, CAP).expect("orbits");
        assert!(!orbits.is_empty());
        let mut comp_count = 0u64;
        let mut phi_count = 0u64;
        for orbit in &orbits {
            let comp_ok = comp.is_nonfibral(&emb, orbit).expect("verdict");
            let phi_ok = phi_map.is_nonfibral(&emb, orbit).expect("verdict");
            if comp_ok {
                assert!(phi_ok, "non-fibral for the composite implies non-fibral for phi");
                comp_count += 1;
            }
            if phi_ok {
                phi_count += 1;
            }
        }
        assert!(phi_count >= comp_count);
        assert!(phi_count > 0);
        assert_eq!(comp.count_nonfibral(3, CAP).expect("count"), comp_count);
    }

    #[test]
    fn small_corpus_profiles_pass_bounds() {
        for p in [5u64, 7] {
            let covers = first_covers(p, 2);
            assert_eq!(covers.len(), 2);
            for cover in &covers {
                let profile = relative_profile(cover, CAP, 64).expect("profile");
                assert!(profile.part1_pass && profile.part2_pass && profile.sharp_pass);
                assert!(BigInt::from(profile.image_order * profile.quotient_order).is_one()
                    || profile.h1 == BigInt::from(profile.image_order * profile.quotient_order));
            }
        }
    }
}
