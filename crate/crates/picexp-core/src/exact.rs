//! Dyadic numbers, directed-rounding intervals, and quadratic surds.
//!
//! The bound formulas mix exact data (integers, rationals, terms of the form
//! a + b*sqrt(r)) with transcendental quantities such as log_q(7g+1) or
//! q^(sqrt(g)/4m). Exact data stays symbolic. Everything transcendental is
//! evaluated as an interval [lo, hi] with dyadic endpoints, rounding lo down
//! and hi up at every operation, so an integer derived from an endpoint is a
//! genuine one-sided bound rather than a floating point guess.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for operations that cannot be exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// Floor of the k-th root of a nonnegative integer.
pub fn iroot(n: &BigInt, k: u32) -> BigInt {
    assert!(!n.is_negative(), "iroot of negative integer");
    n.nth_root(k)
}

/// Smallest L >= 0 with q^L >= x. Equals ceil(log_q(x)) for x >= 1.
pub fn ceil_log(q: u64, x: &BigInt) -> u32 {
    assert!(q >= 2, "log base must be at least 2");
    assert!(x.is_positive(), "ceil_log of nonpositive integer");
    let q = BigInt::from(q);
    let mut p = BigInt::one();
    let mut l = 0u32;
    while p < *x {
        p *= &q;
        l += 1;
    }
    l
}

/// Largest L >= 0 with q^L <= x. Equals floor(log_q(x)) for x >= 1.
pub fn floor_log(q: u64, x: &BigInt) -> u32 {
    assert!(q >= 2, "log base must be at least 2");
    assert!(x.is_positive(), "floor_log of nonpositive integer");
    let q = BigInt::from(q);
    let mut p = BigInt::one();
    let mut l = 0u32;
    while &p * &q <= *x {
        p *= &q;
        l += 1;
    }
    l
}

/// A number of the form mant * 2^exp with arbitrary precision mantissa.
///
/// Closed under addition, subtraction, and multiplication, which are always
/// exact; only division, square roots, and precision trimming round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic {
                mant,
                exp: 0,
            };
        }
        let tz = mant.trailing_zeros().expect("nonzero") as i64;
        Dyadic {
            mant: mant >> tz as u64,
            exp: exp + tz,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Exact multiplication by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Largest integer <= self. Relies on BigInt shr rounding toward
    /// negative infinity.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// Trim the mantissa to at most `prec` bits, rounding in `dir`.
    pub fn round_dir(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let trimmed = &self.mant >> shift;
        let exact = (&trimmed << shift) == self.mant;
        let mant = match dir {
            Dir::Down => trimmed,
            Dir::Up => {
                if exact {
                    trimmed
                } else {
                    trimmed + 1
                }
            }
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// Directed square root; self must be nonnegative.
    pub fn sqrt_dir(&self, prec: u32, dir: Dir) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e % 2 != 0 {
            m <<= 1u64;
            e -= 1;
        }
        let half_bits = m.bits() / 2;
        let t = (prec as u64 + 2).saturating_sub(half_bits);
        m <<= 2 * t;
        e -= 2 * t as i64;
        let s = m.sqrt();
        let mant = match dir {
            Dir::Down => s,
            Dir::Up => {
                if &s * &s == m {
                    s
                } else {
                    s + 1
                }
            }
        };
        Dyadic::new(mant, e / 2)
    }

    /// Directed quotient (n/d) * 2^e2 with roughly `prec` mantissa bits.
    fn from_ratio_dir(n: &BigInt, d: &BigInt, e2: i64, prec: u32, dir: Dir) -> Self {
        assert!(!d.is_zero(), "dyadic division by zero");
        let (n, d) = if d.is_negative() {
            (-n, -d)
        } else {
            (n.clone(), d.clone())
        };
        if n.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + 2 - (n.bits() as i64 - d.bits() as i64);
        let (num, den) = if s >= 0 {
            (n << s as u64, d)
        } else {
            (n, d << (-s) as u64)
        };
        let q = match dir {
            Dir::Down => num.div_floor(&den),
            Dir::Up => num.div_ceil(&den),
        };
        Dyadic::new(q, e2 - s)
    }

    pub fn div_dir(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        Dyadic::from_ratio_dir(
            &self.mant,
            &other.mant,
            self.exp - other.exp,
            prec,
            dir,
        )
    }

    pub fn from_rational_dir(r: &BigRational, prec: u32, dir: Dir) -> Self {
        Dyadic::from_ratio_dir(r.numer(), r.denom(), 0, prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

/// A closed interval with dyadic endpoints, maintained outward-rounded so it
/// always contains the exact value it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RInterval {
    pub fn point(d: Dyadic) -> Self {
        RInterval {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn from_int<T: Into<BigInt> + Clone>(n: T) -> Self {
        RInterval::point(Dyadic::from_int(n))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        RInterval {
            lo: Dyadic::from_rational_dir(r, prec, Dir::Down),
            hi: Dyadic::from_rational_dir(r, prec, Dir::Up),
        }
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn neg(&self) -> Self {
        RInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        RInterval {
            lo: self.lo.add(&other.lo).round_dir(prec, Dir::Down),
            hi: self.hi.add(&other.hi).round_dir(prec, Dir::Up),
        }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = cands.iter().min().expect("nonempty").clone();
        let hi = cands.iter().max().expect("nonempty").clone();
        RInterval {
            lo: lo.round_dir(prec, Dir::Down),
            hi: hi.round_dir(prec, Dir::Up),
        }
    }

    /// Multiplication by an exact rational scalar.
    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> Self {
        let a = self.lo.to_rational() * r;
        let b = self.hi.to_rational() * r;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RInterval {
            lo: Dyadic::from_rational_dir(&lo, prec, Dir::Down),
            hi: Dyadic::from_rational_dir(&hi, prec, Dir::Up),
        }
    }

    /// Interval division. The denominator must not contain zero.
    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let num = [self.lo.to_rational(), self.hi.to_rational()];
        let den = [other.lo.to_rational(), other.hi.to_rational()];
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for a in &num {
            for b in &den {
                let q = a / b;
                if lo.as_ref().is_none_or(|c| q < *c) {
                    lo = Some(q.clone());
                }
                if hi.as_ref().is_none_or(|c| q > *c) {
                    hi = Some(q);
                }
            }
        }
        RInterval {
            lo: Dyadic::from_rational_dir(&lo.expect("nonempty"), prec, Dir::Down),
            hi: Dyadic::from_rational_dir(&hi.expect("nonempty"), prec, Dir::Up),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Exact floor(log2(x)) for a positive rational.
fn floor_log2_rational(x: &BigRational) -> i64 {
    assert!(x.is_positive(), "log of nonpositive rational");
    let mut n = x.numer().bits() as i64 - x.denom().bits() as i64;
    // The bit-length estimate can be off by one in either direction.
    while pow2_rational(n) > *x {
        n -= 1;
    }
    while pow2_rational(n + 1) <= *x {
        n += 1;
    }
    n
}

fn pow2_rational(n: i64) -> BigRational {
    if n >= 0 {
        BigRational::from_integer(BigInt::one() << n as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-n) as u64)
    }
}

/// Enclosure of log2(x) for a positive rational x, via binary digit
/// extraction: normalize into [1,2), then repeatedly square and test against
/// 2. Halving is exact for dyadics, so the only error source is mantissa
/// trimming, handled by a widened working precision.
pub fn log2_interval(x: &BigRational, prec: u32) -> RInterval {
    let n = floor_log2_rational(x);
    let y = x * pow2_rational(-n);
    if y.is_one() {
        return RInterval::from_int(BigInt::from(n));
    }
    let p = 3 * prec + 64;
    let mut yiv = RInterval::from_rational(&y, p);
    let two = Dyadic::from_int(2);
    let mut frac = Dyadic::zero();
    let mut extracted = 0i64;
    for i in 1..=prec as i64 {
        yiv = yiv.mul(&yiv, p);
        if yiv.lo >= two {
            frac = frac.add(&Dyadic::new(BigInt::one(), -i));
            yiv = RInterval {
                lo: yiv.lo.mul_pow2(-1),
                hi: yiv.hi.mul_pow2(-1),
            };
        } else if yiv.hi < two {
            // bit 0, nothing to accumulate
        } else {
            break;
        }
        extracted = i;
    }
    let lo = Dyadic::from_int(n).add(&frac);
    let hi = lo.add(&Dyadic::new(BigInt::one(), -extracted));
    RInterval {
        lo,
        hi,
    }
}

/// Enclosure of log_q(x) for integer q >= 2 and positive rational x.
pub fn log_q_interval(q: u64, x: &BigRational, prec: u32) -> RInterval {
    assert!(q >= 2, "log base must be at least 2");
    let top = log2_interval(x, prec + 32);
    if q == 2 {
        return top;
    }
    let bot = log2_interval(&BigRational::from_integer(BigInt::from(q)), prec + 32);
    top.div(&bot, prec)
}

/// Enclosure of ln(2) from the series sum_{k>=1} 1/(k 2^k), with the tail
/// bounded by 2^-K / (K+1).
pub fn ln2_interval(prec: u32) -> RInterval {
    let k_max = (prec + 8) as u64;
    let mut sum = BigRational::zero();
    for k in 1..=k_max {
        sum += BigRational::new(BigInt::one(), BigInt::from(k) << k);
    }
    let tail = BigRational::new(BigInt::one(), BigInt::from(k_max + 1) << k_max);
    let p = prec + 16;
    RInterval {
        lo: Dyadic::from_rational_dir(&sum, p, Dir::Down),
        hi: Dyadic::from_rational_dir(&(sum + tail), p, Dir::Up),
    }
}

/// Enclosure of ln(x) = log2(x) * ln(2) for a positive rational x.
pub fn ln_interval(x: &BigRational, prec: u32) -> RInterval {
    log2_interval(x, prec + 16).mul(&ln2_interval(prec + 16), prec)
}

/// Logarithm base used when a formula is only compared, not certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    E,
    Int(u64),
}

/// Enclosure of log_base(x) for a positive rational x.
pub fn log_base_interval(base: LogBase, x: &BigRational, prec: u32) -> RInterval {
    match base {
        LogBase::E => ln_interval(x, prec),
        LogBase::Int(b) => log_q_interval(b, x, prec),
    }
}

/// Directed 2^t for a nonnegative dyadic t: the integer part is an exact
/// shift, the fractional part a product over iterated square roots of 2,
/// with the discarded tail absorbed into the upper bound.
pub fn pow2_dyadic_dir(t: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
    assert!(!t.is_negative(), "pow2_dyadic_dir needs a nonnegative exponent");
    let int_part = t.floor();
    let int_u: u64 = u64::try_from(&int_part).expect("2^t integer part out of range");
    let frac = t.sub(&Dyadic::from_int(int_part));
    let p = prec + 64;
    let depth_cap = (prec + 2) as i64;
    // Keep only fractional bits 2^-1 .. 2^-depth_cap.
    let kept = Dyadic::new(frac.mul_pow2(depth_cap).floor(), -depth_cap);
    let dropped = !frac.sub(&kept).is_zero();
    let mut acc = Dyadic::one();
    if !kept.is_zero() {
        let mut root = Dyadic::from_int(2);
        let mut depth = 1i64;
        loop {
            root = root.sqrt_dir(p, dir);
            // Bit at 2^-depth is set iff floor(kept * 2^depth) is odd.
            if kept.mul_pow2(depth).floor().is_odd() {
                acc = match dir {
                    Dir::Down => acc.mul(&root).round_dir(p, Dir::Down),
                    Dir::Up => acc.mul(&root).round_dir(p, Dir::Up),
                };
            }
            if depth == depth_cap {
                break;
            }
            depth += 1;
        }
    }
    if dir == Dir::Up && dropped {
        // 2^r <= 1 + r for r in [0,1], and the dropped tail is < 2^-depth_cap.
        let bump = acc.mul(&Dyadic::new(BigInt::one(), -depth_cap));
        acc = acc.add(&bump).round_dir(p, Dir::Up);
    }
    acc.mul_pow2(int_u as i64).round_dir(prec + 8, match dir {
        Dir::Down => Dir::Down,
        Dir::Up => Dir::Up,
    })
}

/// Enclosure of q^t for integer q >= 2 and a nonnegative interval t.
pub fn exp_q_interval(q: u64, t: &RInterval, prec: u32) -> RInterval {
    assert!(q >= 2, "exponential base must be at least 2");
    assert!(!t.lo.is_negative(), "exp_q_interval needs a nonnegative exponent");
    let lq = log2_interval(&BigRational::from_integer(BigInt::from(q)), prec + 32);
    let x = t.mul(&lq, prec + 32);
    RInterval {
        lo: pow2_dyadic_dir(&x.lo, prec, Dir::Down),
        hi: pow2_dyadic_dir(&x.hi, prec, Dir::Up),
    }
}

/// Enclosure of sqrt(n) for a nonnegative integer n, exact when the root is
/// an integer and otherwise tight to 2^-prec.
pub fn sqrt_interval(n: &BigInt, prec: u32) -> RInterval {
    assert!(!n.is_negative(), "sqrt_interval of negative integer");
    let scaled = n.clone() << (2 * prec as usize);
    let r = scaled.sqrt();
    if &r * &r == scaled {
        return RInterval::point(Dyadic::new(r, -(prec as i64)));
    }
    RInterval {
        lo: Dyadic::new(r.clone(), -(prec as i64)),
        hi: Dyadic::new(r + BigInt::one(), -(prec as i64)),
    }
}

/// Enclosure of the cube root of a nonnegative integer, exact when the root
/// is an integer and otherwise tight to 2^-prec.
pub fn cbrt_interval(n: &BigInt, prec: u32) -> RInterval {
    assert!(!n.is_negative(), "cbrt_interval of negative integer");
    let scaled = n.clone() << (3 * prec as usize);
    let r = scaled.nth_root(3);
    if r.pow(3) == scaled {
        return RInterval::point(Dyadic::new(r, -(prec as i64)));
    }
    RInterval {
        lo: Dyadic::new(r.clone(), -(prec as i64)),
        hi: Dyadic::new(r + BigInt::one(), -(prec as i64)),
    }
}

/// The real number a + b * sqrt(r), kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub r: u64,
}

impl Surd {
    pub fn new(a: BigRational, b: BigRational, r: u64) -> Self {
        Surd {
            a,
            b,
            r,
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Surd {
            a,
            b: BigRational::zero(),
            r: 0,
        }
    }

    /// Exact comparison against a rational, by isolating the radical and
    /// squaring with sign analysis.
    pub fn cmp_rational(&self, t: &BigRational) -> Ordering {
        // Sign of (a - t) + b*sqrt(r), with d = t - a.
        let d = t - &self.a;
        let b = &self.b;
        let r = BigInt::from(self.r);
        if b.is_negative() {
            // sign(-d + b*sqrt(r)) = -sign(d + (-b)*sqrt(r)).
            return Surd::new(d, -b.clone(), self.r)
                .cmp_rational(&BigRational::zero())
                .reverse();
        }
        // Now b >= 0: compare b*sqrt(r) with d.
        if d.is_negative() {
            return Ordering::Greater;
        }
        let lhs = b * b * BigRational::from_integer(r);
        let rhs = &d * &d;
        lhs.cmp(&rhs)
    }

    /// Exact floor via integer square roots.
    pub fn floor(&self) -> BigInt {
        let q = self.a.denom().lcm(self.b.denom());
        let big_a = self.a.numer() * (&q / self.a.denom());
        let big_b = self.b.numer() * (&q / self.b.denom());
        let r = BigInt::from(self.r);
        let sq = &big_b * &big_b * &r;
        let s = isqrt(&sq);
        let num_floor = if !big_b.is_negative() {
            big_a + s
        } else if &s * &s == sq {
            big_a - s
        } else {
            big_a - s - 1
        };
        num_floor.div_floor(&q)
    }

    pub fn ceil(&self) -> BigInt {
        -self.negated().floor()
    }

    pub fn negated(&self) -> Self {
        Surd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            r: self.r,
        }
    }

    /// Outward-rounded numeric enclosure.
    pub fn value_interval(&self, prec: u32) -> RInterval {
        let root = RInterval {
            lo: Dyadic::from_int(BigInt::from(self.r)).sqrt_dir(prec + 8, Dir::Down),
            hi: Dyadic::from_int(BigInt::from(self.r)).sqrt_dir(prec + 8, Dir::Up),
        };
        let scaled = root.mul_rational(&self.b, prec + 8);
        scaled.add(&RInterval::from_rational(&self.a, prec + 8), prec)
    }
}
