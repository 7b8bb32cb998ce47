//! L-polynomials from exact point counts, class numbers, and Weil intervals.
//!
//! Everything here is integer arithmetic: the numerator of the zeta function
//! is recovered from N_1..N_g through the Newton identities on the power sums
//! S_k = N_k - (q^k + 1), the upper half is filled by the functional
//! equation, and the redundant counts N_{g+1}..N_{2g} are re-counted by brute
//! force as a self-check wherever the cap allows.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::curve::HyperellipticCurve;
use crate::exact::Surd;
use crate::{Error, Result};

/// Exact zeta data of a curve: counts N_1..N_{2g}, L-coefficients a_0..a_{2g},
/// and the class number L(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaData {
    pub counts: Vec<BigInt>,
    pub l_coeffs: Vec<BigInt>,
    pub class_number: BigInt,
}

/// a_1..a_n from S_1..S_n via k a_k = sum_{i=1..k} S_i a_{k-i}, a_0 = 1.
/// With no power sums the polynomial is the constant 1.
fn newton_coeffs(s: &[BigInt]) -> Vec<BigInt> {
    let mut a = vec![BigInt::one()];
    for k in 1..=s.len() {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc += &s[i - 1] * &a[k - i];
        }
        let k_big = BigInt::from(k);
        debug_assert!((&acc % &k_big).is_zero(), "Newton step must divide");
        a.push(acc / k_big);
    }
    a
}

/// S_k for k = 1..n from a full coefficient vector, inverting the recursion.
fn power_sums_from_coeffs(a: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = if k < a.len() {
            BigInt::from(k) * &a[k]
        } else {
            BigInt::zero()
        };
        for i in 1..k {
            if k - i < a.len() {
                acc -= &s[i - 1] * &a[k - i];
            }
        }
        s.push(acc);
    }
    s
}

/// Computes the L-polynomial of a validated curve from brute-force counts in
/// degrees 1..g, extends by the functional equation, re-derives the counts in
/// degrees g+1..2g, and cross-checks them against brute force whenever q^k
/// stays under the cap. A mismatch is a hard internal failure.
pub fn l_polynomial(curve: &HyperellipticCurve, cap: u128) -> Result<ZetaData> {
    let g = curve.genus();
    let q = curve
        .field()
        .size_u128()
        .ok_or_else(|| Error::PreconditionViolated {
            detail: String::from("base field too large for counting"),
        })?;
    let q_big = BigInt::from(q);
    let mut s: Vec<BigInt> = Vec::with_capacity(2 * g);
    let mut counts: Vec<BigInt> = Vec::with_capacity(2 * g);
    for k in 1..=g {
        let nk = BigInt::from(curve.count_points(k, cap)?);
        s.push(&nk - (q_big.pow(k as u32) + BigInt::one()));
        counts.push(nk);
    }
    let mut a = newton_coeffs(&s);
    a.resize(2 * g + 1, BigInt::zero());
    for i in (0..g).rev() {
        a[2 * g - i] = q_big.pow((g - i) as u32) * &a[i];
    }
    let s_full = power_sums_from_coeffs(&a, 2 * g);
    for k in g + 1..=2 * g {
        let nk = q_big.pow(k as u32) + BigInt::one() + &s_full[k - 1];
        if nk.is_negative() {
            return Err(Error::ConsistencyFailure {
                detail: format!("derived count N_{k} is negative"),
            });
        }
        counts.push(nk);
    }
    for k in g + 1..=2 * g {
        let feasible = u32::try_from(curve.field().degree() * k)
            .ok()
            .and_then(|b| (curve.field().characteristic() as u128).checked_pow(b))
            .is_some_and(|n| n <= cap);
        if !feasible {
            continue;
        }
        let brute = BigInt::from(curve.count_points(k, cap)?);
        if brute != counts[k - 1] {
            return Err(Error::ConsistencyFailure {
                detail: format!(
                    "L-polynomial predicts N_{k} = {} but counting gives {}",
                    counts[k - 1],
                    brute
                ),
            });
        }
    }
    let class_number: BigInt = a.iter().sum();
    if !class_number.is_positive() {
        return Err(Error::ConsistencyFailure {
            detail: format!("class number {class_number} is not positive"),
        });
    }
    Ok(ZetaData {
        counts,
        l_coeffs: a,
        class_number,
    })
}

/// The Weil interval [(sqrt q - 1)^{2g}, (sqrt q + 1)^{2g}] carried exactly:
/// both endpoints have the form a -+ b sqrt(q) with the same integers a, b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilInterval {
    pub a: BigInt,
    pub b: BigInt,
    pub q: u64,
    /// ceil of the lower endpoint: the least integer a class number can be.
    pub lower: BigInt,
    /// floor of the upper endpoint: the greatest integer a class number can be.
    pub upper: BigInt,
}

impl WeilInterval {
    pub fn contains(&self, h: &BigInt) -> bool {
        *h >= self.lower && *h <= self.upper
    }
}

/// Expands (sqrt q +- 1)^{2g} binomially into a +- b sqrt(q) and rounds the
/// endpoints inward to integers through exact surd comparison.
pub fn weil_interval(g: usize, q: u64) -> WeilInterval {
    assert!(g >= 1, "positive genus required");
    let n = 2 * g;
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=n {
        // binom = C(2g, j); sqrt(q)^j contributes q^{j/2} or q^{(j-1)/2} sqrt(q).
        let pow = BigInt::from(q).pow((j / 2) as u32);
        if j % 2 == 0 {
            a += &binom * &pow;
        } else {
            b += &binom * &pow;
        }
        binom = binom * BigInt::from((n - j) as u64) / BigInt::from((j + 1) as u64);
    }
    let ra = BigRational::from_integer(a.clone());
    let rb = BigRational::from_integer(b.clone());
    let lower = Surd::new(ra.clone(), -rb.clone(), q).ceil();
    let upper = Surd::new(ra, rb, q).floor();
    WeilInterval {
        a,
        b,
        q,
        lower,
        upper,
    }
}
