//! Deterministic primality testing, sieving, and factorization.
//!
//! Everything here is deterministic: Miller-Rabin below 2^64 uses a witness
//! set proven sufficient for that range, larger inputs use a fixed list of
//! witness bases, and Pollard rho iterates a fixed polynomial sequence.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Primes strictly below `limit`, by sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut primes = Vec::new();
    for i in 2..n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64; the witness set covers all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first 40 prime bases, for integers past u64.
fn is_prime_bigint(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !n.is_positive() || n.is_even() {
        return false;
    }
    let witnesses = sieve_primes(174); // first 40 primes
    let one = BigInt::one();
    let two = BigInt::from(2);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("even");
    let d = &n_minus_1 >> s;
    'witness: for a in witnesses {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime strictly less than the rational `x`, if any.
pub fn largest_prime_below(x: &BigRational) -> Option<u64> {
    if *x <= BigRational::from_integer(BigInt::from(2)) {
        return None;
    }
    let floor = x.floor().to_integer();
    let start = if x.is_integer() {
        floor - 1
    } else {
        floor
    };
    let mut n = start
        .to_u64()
        .expect("prime search bound exceeds u64");
    while !is_prime_u64(n) {
        n -= 1;
    }
    Some(n)
}

/// Smallest prime in the inclusive range [lo, hi], if any.
pub fn smallest_prime_in(lo: u64, hi: u64) -> Option<u64> {
    (lo.max(2)..=hi).find(|&n| is_prime_u64(n))
}

/// Prime factorization of a u64, sorted by prime, as (prime, multiplicity).
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize_u64 of zero");
    let mut n = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut d = 7u64;
    // Wheel over residues coprime to 30.
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut idx = 0;
    while d <= 1 << 20 && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += steps[idx];
        idx = (idx + 1) % steps.len();
    }
    if n > 1 {
        if is_prime_u64(n) || n < (1u64 << 40) {
            // Anything composite left below 2^40 has a factor below 2^20,
            // already removed, so n here is prime.
            merge_factor(&mut out, n, 1);
        } else {
            let f = rho_u64(n);
            let mut sub = factorize_u64(f);
            sub.extend(factorize_u64(n / f));
            for (p, e) in sub {
                merge_factor(&mut out, p, e);
            }
        }
    }
    out.sort_unstable();
    out
}

fn merge_factor(out: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

/// Brent's cycle variant of Pollard rho; n must be odd composite with no
/// factor below 2^20.
fn rho_u64(n: u64) -> u64 {
    for c in 1..64u64 {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 26 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
    }
    panic!("rho_u64 failed to split {n}");
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Prime factorization of a positive BigInt. Fails with an error rather
/// than running unbounded when the cofactor resists the rho budget.
pub fn factorize_bigint(n: &BigInt) -> Result<Vec<(BigInt, u32)>, Error> {
    assert!(n.is_positive(), "factorize_bigint of nonpositive integer");
    if let Some(small) = n.to_u64() {
        return Ok(factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect());
    }
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in sieve_primes(100_000) {
        let pb = BigInt::from(p);
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
        if n.is_one() {
            break;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_bigint(&m) {
            merge_factor_bigint(&mut out, m);
            continue;
        }
        let f = rho_bigint(&m)?;
        stack.push(&m / &f);
        stack.push(f);
    }
    out.sort_unstable();
    Ok(out)
}

fn merge_factor_bigint(out: &mut Vec<(BigInt, u32)>, p: BigInt) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        out.push((p, 1));
    }
}

fn rho_bigint(n: &BigInt) -> Result<BigInt, Error> {
    let one = BigInt::one();
    for c in 1..32u32 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        for _ in 0..(1u64 << 24) {
            x = f(&x);
            y = f(&f(&y));
            let d = (&x - &y).abs().gcd(n);
            if d == *n {
                break;
            }
            if d > one {
                return Ok(d);
            }
        }
    }
    Err(Error::PreconditionViolated {
        detail: alloc::format!("factorization budget exhausted on {n}"),
    })
}

/// Moebius function via factorization.
pub fn mobius(n: u64) -> i64 {
    assert!(n > 0, "mobius of zero");
    let factors = factorize_u64(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All divisors of n in ascending order.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize_u64(n) {
        let snapshot = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(snapshot.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_agrees_with_miller_rabin() {
        let primes = sieve_primes(10_000);
        let mut idx = 0;
        for n in 0..10_000u64 {
            let in_sieve = idx < primes.len() && primes[idx] == n;
            assert_eq!(is_prime_u64(n), in_sieve, "disagreement at {n}");
            if in_sieve {
                idx += 1;
            }
        }
        assert_eq!(primes.len(), 1229);
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(18_446_744_073_709_551_615));
    }

    #[test]
    fn factorization_roundtrip() {
        assert_eq!(factorize_u64(1), vec![]);
        assert_eq!(factorize_u64(2), vec![(2, 1)]);
        assert_eq!(
            factorize_u64(2u64.pow(6) * 3u64.pow(4) * 97),
            vec![(2, 6), (3, 4), (97, 1)]
        );
        let n = 614_889_782_588_491_410u64; // product of the first 15 primes
        let f = factorize_u64(n);
        assert_eq!(f.len(), 15);
        assert_eq!(f.iter().map(|&(p, _)| p).product::<u64>(), n);
        // Semiprime beyond the trial division horizon.
        let semi = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize_u64(semi), vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn factorization_bigint() {
        let m61: BigInt = (BigInt::one() << 61) - BigInt::one();
        let m31: BigInt = (BigInt::one() << 31) - BigInt::one();
        let n = &m61 * &m31 * 4;
        let f = factorize_bigint(&n).unwrap();
        assert_eq!(
            f,
            vec![(BigInt::from(2), 2), (m31.clone(), 1), (m61.clone(), 1)]
        );
        assert!(is_prime_bigint(&m61));
        assert!(!is_prime_bigint(&(&m61 * &m31)));
    }

    #[test]
    fn prime_search_helpers() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(largest_prime_below(&r(10, 1)), Some(7));
        assert_eq!(largest_prime_below(&r(7, 1)), Some(5)); // strict
        assert_eq!(largest_prime_below(&r(3, 1)), Some(2));
        assert_eq!(largest_prime_below(&r(2, 1)), None);
        assert_eq!(largest_prime_below(&r(8, 3)), Some(2));
        assert_eq!(largest_prime_below(&r(45, 2)), Some(19));
        assert_eq!(smallest_prime_in(4, 4), None);
        assert_eq!(smallest_prime_in(4, 5), Some(5));
        assert_eq!(smallest_prime_in(2, 4), Some(2));
        assert_eq!(smallest_prime_in(90, 96), None);
        assert_eq!(smallest_prime_in(50, 100), Some(53));
    }

    #[test]
    fn mobius_and_divisors() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(2), -1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors_u64(1), vec![1]);
        assert_eq!(divisors_u64(49), vec![1, 7, 49]);
    }
}
