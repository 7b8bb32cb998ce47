//! Certified lower bounds on class-group exponents and order counts.
//!
//! Every bound is reported as a [`BoundValue`]: the exact value of the
//! formula, as a rational when the formula is rational and as an
//! outward-rounded enclosure when it involves real logarithms or roots,
//! together with a safe integer form for comparison against measured
//! quantities. Directed rounding only ever weakens a reported bound;
//! [`audit_pair`] re-checks a bound against a doubled-precision
//! re-evaluation of the same formula.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{
    cbrt_interval, ceil_log, exp_q_interval, isqrt, log_base_interval, log_q_interval,
    sqrt_interval, Dyadic, LogBase, RInterval,
};
use crate::primes::{factorize_u64, is_prime_u64, smallest_prime_in};
pub use crate::primes::largest_prime_below;
use crate::{Error, Result};

/// Fractional bits used by callers that do not pick their own precision.
/// Enclosures at this width are far tighter than any integer rounding that
/// consumes them.
pub const DEFAULT_PREC: u32 = 64;

/// Relation between the safe integer of a bound and its exact value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// `safe_lower = floor(exact)`, so `safe_lower <= exact` always.
    Floor,
    /// `safe_lower = ceil(exact)`. Sound when the bounded quantity is an
    /// integer e with e >= exact: then e >= ceil(exact) as well, so the
    /// integer form gives up nothing.
    Ceil,
}

/// Exact form of a bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactValue {
    Rational(BigRational),
    Enclosure(RInterval),
}

/// A lower bound carrying its exact form, a safe integer form, the rounding
/// relation between the two, and a label naming the originating formula.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub exact: ExactValue,
    pub safe_lower: BigInt,
    pub rounding: Rounding,
    pub provenance: &'static str,
}

impl BoundValue {
    fn from_rational(exact: BigRational, rounding: Rounding, provenance: &'static str) -> Self {
        let safe_lower = match rounding {
            Rounding::Floor => exact.floor().to_integer(),
            Rounding::Ceil => exact.ceil().to_integer(),
        };
        BoundValue {
            exact: ExactValue::Rational(exact),
            safe_lower,
            rounding,
            provenance,
        }
    }

    /// An enclosure bound is always floored at the lower endpoint, which is
    /// at or below the true value by construction.
    fn from_enclosure(value: RInterval, provenance: &'static str) -> Self {
        let safe_lower = value.lo.floor();
        BoundValue {
            exact: ExactValue::Enclosure(value),
            safe_lower,
            rounding: Rounding::Floor,
            provenance,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match &self.exact {
            ExactValue::Rational(r) => Some(r),
            ExactValue::Enclosure(_) => None,
        }
    }

    pub fn enclosure(&self) -> Option<&RInterval> {
        match &self.exact {
            ExactValue::Rational(_) => None,
            ExactValue::Enclosure(iv) => Some(iv),
        }
    }
}

fn precondition(detail: &str) -> Error {
    Error::PreconditionViolated {
        detail: String::from(detail),
    }
}

fn require_prime_power(q: u64) -> Result<()> {
    if q >= 2 && factorize_u64(q).len() == 1 {
        Ok(())
    } else {
        Err(Error::PreconditionViolated {
            detail: format!("q = {q} must be a prime power"),
        })
    }
}

/// Scalar inputs shared by the exponent and order-count bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInputs {
    pub g: u64,
    pub q: u64,
    pub gon: u64,
    pub m: Option<u64>,
    pub deg_phi: Option<u64>,
}

impl BoundInputs {
    pub fn new(g: u64, q: u64, gon: u64) -> Self {
        BoundInputs {
            g,
            q,
            gon,
            m: None,
            deg_phi: None,
        }
    }

    pub fn with_m(mut self, m: u64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_prime_power(self.q)?;
        if self.g < 2 {
            return Err(precondition("genus must be at least 2"));
        }
        if self.gon < 2 {
            return Err(precondition("gonality must be at least 2"));
        }
        if self.m == Some(0) {
            return Err(precondition("order threshold m must be at least 1"));
        }
        if matches!(self.deg_phi, Some(d) if d < 2) {
            return Err(precondition("covering degree must be at least 2"));
        }
        Ok(())
    }
}

/// Smallest t >= 0 with q^t >= x.
pub fn ceil_log_q(x: &BigInt, q: u64) -> u32 {
    ceil_log(q, x)
}

/// Lower bounds on the exponent of the class group: the two-term maximum
/// that uses the gonality, and the weaker fallback that does not.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentBound {
    pub bound: BoundValue,
    pub gonality_free: BoundValue,
}

/// max(gon / (2 ceil_log_q(2g+1)), g / (4 (gon-1) ceil_log_q(7g+1))),
/// exact as a rational; the safe form is its ceiling, valid against an
/// integer exponent. The gonality-free companion sqrt(g) / (4 log_q(7g+1))
/// uses the real logarithm and is rounded downward.
pub fn exponent_lower_bound(inputs: &BoundInputs, prec: u32) -> Result<ExponentBound> {
    inputs.validate()?;
    let (g, q, gon) = (inputs.g, inputs.q, inputs.gon);
    let two_g = BigInt::from(2) * BigInt::from(g) + BigInt::one();
    let seven_g = BigInt::from(7) * BigInt::from(g) + BigInt::one();
    let l1 = ceil_log(q, &two_g);
    let l2 = ceil_log(q, &seven_g);
    let term1 = BigRational::new(BigInt::from(gon), BigInt::from(2) * BigInt::from(l1));
    let term2 = BigRational::new(
        BigInt::from(g),
        BigInt::from(4) * BigInt::from(gon - 1) * BigInt::from(l2),
    );
    let bound = BoundValue::from_rational(
        term1.max(term2),
        Rounding::Ceil,
        "exponent: max of gonality terms",
    );

    let denom = log_q_interval(q, &BigRational::from_integer(seven_g), prec)
        .mul_rational(&BigRational::from_integer(BigInt::from(4)), prec);
    let value = sqrt_interval(&BigInt::from(g), prec).div(&denom, prec);
    let gonality_free = BoundValue::from_enclosure(value, "exponent: gonality-free term");
    Ok(ExponentBound {
        bound,
        gonality_free,
    })
}

/// Lower bound on the number of classes of order exactly m, with the raw
/// possibly-negative value and its clamp carried separately: a negative raw
/// value asserts nothing, which is not the same as asserting zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderCountBound {
    pub raw: BoundValue,
    pub guaranteed: BigInt,
    pub s: u64,
    pub s_term: BigInt,
    pub k: Option<u64>,
    pub k_term: Option<BigInt>,
    pub companion: BoundValue,
}

/// N(m) = max(isqrt(q^s) - 2g, isqrt(q^k) - 7g) with s = ceil(gon/m) - 1 and
/// k the largest prime below g / (m (gon-1)); the k-term is omitted when no
/// such prime exists. Replacing q^{./2} by its integer square root only
/// lowers the terms, so the result stays a valid lower bound. The companion
/// closed form q^{sqrt(g)/(4m)} - 7g is evaluated as a downward-rounded
/// enclosure.
pub fn order_count_lower_bound(inputs: &BoundInputs, prec: u32) -> Result<OrderCountBound> {
    inputs.validate()?;
    let m = inputs
        .m
        .ok_or_else(|| precondition("order threshold m is required"))?;
    let (g, q, gon) = (inputs.g, inputs.q, inputs.gon);

    let s = gon.div_ceil(m) - 1;
    let s32 = u32::try_from(s).map_err(|_| precondition("s exponent out of range"))?;
    let s_term = isqrt(&BigInt::from(q).pow(s32)) - BigInt::from(2) * BigInt::from(g);

    let ratio = BigRational::new(
        BigInt::from(g),
        BigInt::from(m) * BigInt::from(gon - 1),
    );
    let k = largest_prime_below(&ratio);
    let k_term = match k {
        Some(k) => {
            let k32 = u32::try_from(k).map_err(|_| precondition("k exponent out of range"))?;
            Some(isqrt(&BigInt::from(q).pow(k32)) - BigInt::from(7) * BigInt::from(g))
        }
        None => None,
    };

    let raw_int = match &k_term {
        Some(t) => s_term.clone().max(t.clone()),
        None => s_term.clone(),
    };
    let guaranteed = raw_int.clone().max(BigInt::zero());
    let raw = BoundValue::from_rational(
        BigRational::from_integer(raw_int),
        Rounding::Floor,
        "order count per threshold",
    );

    let t = sqrt_interval(&BigInt::from(g), prec).mul_rational(
        &BigRational::new(BigInt::one(), BigInt::from(4) * BigInt::from(m)),
        prec,
    );
    let value = exp_q_interval(q, &t, prec).sub(
        &RInterval::from_int(BigInt::from(7) * BigInt::from(g)),
        prec,
    );
    let companion = BoundValue::from_enclosure(value, "order count closed form");

    Ok(OrderCountBound {
        raw,
        guaranteed,
        s,
        s_term,
        k,
        k_term,
        companion,
    })
}

/// ceil((q^k - 2g (U+1) - deg_f (q+3)) / k) where U = isqrt(q^k), bumped by
/// one when q^k is not a perfect square so that U >= q^{k/2}. The bump can
/// only shrink the numerator, keeping the ceiling a valid lower bound on
/// the count of suitable degree-k points.
pub fn nonfibral_lower_bound(g: u64, q: u64, k: u64, deg_f: u64) -> Result<BoundValue> {
    require_prime_power(q)?;
    if g < 1 {
        return Err(precondition("genus must be at least 1"));
    }
    if deg_f < 1 {
        return Err(precondition("map degree must be at least 1"));
    }
    if !is_prime_u64(k) {
        return Err(Error::PreconditionViolated {
            detail: format!("k = {k} must be prime"),
        });
    }
    let k32 = u32::try_from(k).map_err(|_| precondition("k out of range"))?;
    let qk = BigInt::from(q).pow(k32);
    let root = isqrt(&qk);
    let u = if &root * &root == qk {
        root
    } else {
        root + BigInt::one()
    };
    let numerator = &qk
        - BigInt::from(2) * BigInt::from(g) * (&u + BigInt::one())
        - BigInt::from(deg_f) * (BigInt::from(q) + BigInt::from(3));
    Ok(BoundValue::from_rational(
        BigRational::new(numerator, BigInt::from(k)),
        Rounding::Ceil,
        "nonfibral point count",
    ))
}

/// floor(c sqrt(g1) / g2) with c = min(1/16, g2 / (4 log_q(14 g1 + 1))).
/// The logarithm is real and enclosed outward, so the floor of the lower
/// endpoint is a certified lower bound on the formula's value.
pub fn relative_bound_part1(g1: u64, g2: u64, q: u64, prec: u32) -> Result<BoundValue> {
    require_prime_power(q)?;
    if g1 < 2 {
        return Err(precondition("source genus must be at least 2"));
    }
    if g2 < 1 {
        return Err(precondition("target genus must be at least 1"));
    }
    let arg = BigInt::from(14) * BigInt::from(g1) + BigInt::one();
    let log = log_q_interval(q, &BigRational::from_integer(arg), prec)
        .mul_rational(&BigRational::from_integer(BigInt::from(4)), prec);
    let c_formula = RInterval::from_int(BigInt::from(g2)).div(&log, prec);
    // 1/16 is exactly dyadic, so the clamp is exact in both endpoints.
    let sixteenth = Dyadic::new(BigInt::one(), -4);
    let c = RInterval {
        lo: c_formula.lo.min(sixteenth.clone()),
        hi: c_formula.hi.min(sixteenth),
    };
    let value = c
        .mul(&sqrt_interval(&BigInt::from(g1), prec), prec)
        .mul_rational(&BigRational::new(BigInt::one(), BigInt::from(g2)), prec);
    Ok(BoundValue::from_enclosure(
        value,
        "relative exponent, first form",
    ))
}

/// isqrt(g1) / (8 ceil_log_q(19 g1) (deg_phi - 1)), a rational at or below
/// the formula's real value; the safe form is its ceiling, valid against an
/// integer exponent.
pub fn relative_bound_part2(g1: u64, q: u64, deg_phi: u64) -> Result<BoundValue> {
    require_prime_power(q)?;
    if g1 < 2 {
        return Err(precondition("source genus must be at least 2"));
    }
    if deg_phi < 2 {
        return Err(precondition("covering degree must be at least 2"));
    }
    let l = ceil_log(q, &(BigInt::from(19) * BigInt::from(g1)));
    let exact = BigRational::new(
        isqrt(&BigInt::from(g1)),
        BigInt::from(8) * BigInt::from(l) * BigInt::from(deg_phi - 1),
    );
    Ok(BoundValue::from_rational(
        exact,
        Rounding::Ceil,
        "relative exponent, second form",
    ))
}

/// The sharp relative bound together with the prime k that realizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpBound {
    pub bound: BoundValue,
    pub k: u64,
}

/// max(gon1, g1 / (gon1 - 1)) / (2 k (deg_phi - 1)) with k the smallest
/// prime in [2 L, 4 L], L = ceil_log_q(19 g1). Any prime in the interval is
/// admissible; the smallest gives the strongest bound. The interval has the
/// shape [t, 2t] with t >= 2, so a prime always exists; an empty search is
/// an internal error, not a caller mistake.
pub fn relative_bound_sharp(g1: u64, gon1: u64, q: u64, deg_phi: u64) -> Result<SharpBound> {
    require_prime_power(q)?;
    if g1 < 2 {
        return Err(precondition("source genus must be at least 2"));
    }
    if gon1 < 2 {
        return Err(precondition("source gonality must be at least 2"));
    }
    if deg_phi < 2 {
        return Err(precondition("covering degree must be at least 2"));
    }
    let l = u64::from(ceil_log(q, &(BigInt::from(19) * BigInt::from(g1))));
    let k = smallest_prime_in(2 * l, 4 * l).ok_or(Error::NoPrimeInInterval)?;
    let numer = BigRational::from_integer(BigInt::from(gon1)).max(BigRational::new(
        BigInt::from(g1),
        BigInt::from(gon1 - 1),
    ));
    let exact = numer
        / BigRational::from_integer(
            BigInt::from(2) * BigInt::from(k) * BigInt::from(deg_phi - 1),
        );
    Ok(SharpBound {
        bound: BoundValue::from_rational(exact, Rounding::Ceil, "relative exponent, sharp form"),
        k,
    })
}

/// g^{1/3} / (4 log_base(g)), for side-by-side reporting only: the log base
/// is a free parameter, so this value never enters a pass/fail verdict.
pub fn stichtenoth_reference(g: u64, base: LogBase, prec: u32) -> Result<BoundValue> {
    if g < 2 {
        return Err(precondition("genus must be at least 2"));
    }
    if let LogBase::Int(b) = base {
        if b < 2 {
            return Err(precondition("log base must be at least 2"));
        }
    }
    let log = log_base_interval(base, &BigRational::from_integer(BigInt::from(g)), prec)
        .mul_rational(&BigRational::from_integer(BigInt::from(4)), prec);
    let value = cbrt_interval(&BigInt::from(g), prec).div(&log, prec);
    Ok(BoundValue::from_enclosure(
        value,
        "cube-root reference, comparison only",
    ))
}

/// One parameter combination the explorer could not exclude, annotated
/// rather than filtered by the Riemann-Hurwitz necessary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorerRow {
    pub g1: u64,
    pub g2: u64,
    pub deg_phi: u64,
    pub q: u64,
    pub part1_safe: BigInt,
    pub part2_safe: BigInt,
    pub rh_feasible: bool,
}

/// Scans the parameter box and keeps every (g1, g2, deg_phi, q) whose two
/// safe relative bounds both sit at or below `n`. Combinations outside the
/// formulas' domains (g1 < 2, g2 < 1, deg_phi < 2, q not a prime power)
/// are skipped; rows failing 2 g1 - 2 >= deg_phi (2 g2 - 2) are flagged.
/// Rows come out in lexicographic (g1, g2, deg_phi, q) order.
pub fn question_explorer(
    n: &BigInt,
    g1_range: RangeInclusive<u64>,
    g2_range: RangeInclusive<u64>,
    deg_phi_range: RangeInclusive<u64>,
    q_range: RangeInclusive<u64>,
    prec: u32,
) -> Vec<ExplorerRow> {
    let mut rows = Vec::new();
    for g1 in g1_range {
        if g1 < 2 {
            continue;
        }
        for g2 in g2_range.clone() {
            if g2 < 1 {
                continue;
            }
            for deg_phi in deg_phi_range.clone() {
                if deg_phi < 2 {
                    continue;
                }
                for q in q_range.clone() {
                    if q < 2 || factorize_u64(q).len() != 1 {
                        continue;
                    }
                    let p1 = relative_bound_part1(g1, g2, q, prec).expect("domain prefiltered");
                    let p2 = relative_bound_part2(g1, q, deg_phi).expect("domain prefiltered");
                    if p1.safe_lower <= *n && p2.safe_lower <= *n {
                        let rh_feasible = u128::from(2 * g1 - 2)
                            >= u128::from(deg_phi) * u128::from(2 * g2 - 2);
                        rows.push(ExplorerRow {
                            g1,
                            g2,
                            deg_phi,
                            q,
                            part1_safe: p1.safe_lower,
                            part2_safe: p2.safe_lower,
                            rh_feasible,
                        });
                    }
                }
            }
        }
    }
    rows
}

/// Where the gonality value used in reports came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GonalitySource {
    PointCounts,
    HyperellipticModel,
    UserOverride,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityBounds {
    pub lower: u64,
    pub value: u64,
    pub source: GonalitySource,
}

/// `counts[i]` is the point count over the degree-(i+1) extension. A degree
/// d map to the line forces N_k <= d (q^k + 1), so each k yields the lower
/// bound ceil(N_k / (q^k + 1)). A validated hyperelliptic model of genus
/// >= 2 pins the value to 2; a user override is recorded as given but must
/// not sit below the counting lower bound.
pub fn gonality_bounds(
    counts: &[BigInt],
    q: u64,
    hyperelliptic_genus_ge2: bool,
    user_override: Option<u64>,
) -> Result<GonalityBounds> {
    require_prime_power(q)?;
    let mut lower = BigInt::one();
    for (i, nk) in counts.iter().enumerate() {
        if nk.is_negative() {
            return Err(precondition("point counts must be nonnegative"));
        }
        let k32 = u32::try_from(i + 1).map_err(|_| precondition("too many counts"))?;
        let denom = BigInt::from(q).pow(k32) + BigInt::one();
        let cand = BigRational::new(nk.clone(), denom).ceil().to_integer();
        lower = lower.max(cand);
    }
    let lower =
        u64::try_from(&lower).map_err(|_| precondition("point counts out of range"))?;
    if hyperelliptic_genus_ge2 && lower > 2 {
        return Err(Error::ConsistencyFailure {
            detail: format!("count lower bound {lower} exceeds the degree-2 model map"),
        });
    }
    let (value, source) = match user_override {
        Some(v) => {
            if v < lower {
                return Err(Error::ConsistencyFailure {
                    detail: format!("gonality override {v} sits below counting bound {lower}"),
                });
            }
            (v, GonalitySource::UserOverride)
        }
        None if hyperelliptic_genus_ge2 => (2, GonalitySource::HyperellipticModel),
        None => (lower, GonalitySource::PointCounts),
    };
    Ok(GonalityBounds {
        lower,
        value,
        source,
    })
}

/// Checks a bound against a re-evaluation of the same formula at higher
/// precision. Rational forms must agree exactly. Enclosure forms must
/// overlap (both contain the same real) and the coarse safe integer must
/// stay at or below the refined lower endpoint, confirming it never crossed
/// the exact value.
pub fn audit_pair(coarse: &BoundValue, refined: &BoundValue) -> Result<()> {
    if coarse.provenance != refined.provenance || coarse.rounding != refined.rounding {
        return Err(Error::ConsistencyFailure {
            detail: String::from("audit compares two different bounds"),
        });
    }
    match (&coarse.exact, &refined.exact) {
        (ExactValue::Rational(a), ExactValue::Rational(b)) => {
            if a == b && coarse.safe_lower == refined.safe_lower {
                Ok(())
            } else {
                Err(Error::ConsistencyFailure {
                    detail: String::from("rational bound changed under re-evaluation"),
                })
            }
        }
        (ExactValue::Enclosure(a), ExactValue::Enclosure(b)) => {
            if a.lo > b.hi || b.lo > a.hi {
                return Err(Error::ConsistencyFailure {
                    detail: String::from("re-evaluated enclosures are disjoint"),
                });
            }
            match coarse.rounding {
                Rounding::Floor => {
                    if Dyadic::from_int(coarse.safe_lower.clone()) <= b.lo {
                        Ok(())
                    } else {
                        Err(Error::ConsistencyFailure {
                            detail: String::from("safe bound sits above the refined value"),
                        })
                    }
                }
                Rounding::Ceil => Err(Error::ConsistencyFailure {
                    detail: String::from("enclosure bounds must use floor rounding"),
                }),
            }
        }
        _ => Err(Error::ConsistencyFailure {
            detail: String::from("bound forms disagree under re-evaluation"),
        }),
    }
}
