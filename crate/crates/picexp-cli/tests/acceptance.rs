//! Acceptance gate. Each test is one numbered criterion and prints one
//! "criterion N: PASS" (or FAIL) line; run with
//! `cargo test --test acceptance -- --nocapture` to see the lines as they
//! complete. The corpus (every genus-2 curve over F_3 plus the first 500
//! over F_5) is computed once and shared.

use std::sync::LazyLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use picexp_cli::sweep::{enumerate_corpus, enumerate_covers, CorpusSpec};
use picexp_core::bounds::{
    audit_pair, exponent_lower_bound, gonality_bounds, nonfibral_lower_bound,
    order_count_lower_bound, relative_bound_part1, relative_bound_part2, relative_bound_sharp,
    stichtenoth_reference, BoundInputs,
};
use picexp_core::curve::HyperellipticCurve;
use picexp_core::exact::LogBase;
use picexp_core::ff::FiniteField;
use picexp_core::jacobian::{order_count, GroupProfile, JacClass, Jacobian, ProfileMode};
use picexp_core::nonfibral::CoveringMap;
use picexp_core::primes::{is_prime_u64, largest_prime_below};
use picexp_core::relative::{pullback, pushforward, relative_profile, BiellipticCover};
use picexp_core::zeta::{l_polynomial, weil_interval, ZetaData};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: u128 = 1 << 32;
const PREC: u32 = 64;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn run(criterion: u32, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("criterion {criterion}: PASS ({detail})"),
        Err(detail) => {
            println!("criterion {criterion}: FAIL ({detail})");
            panic!("criterion {criterion}: FAIL ({detail})");
        }
    }
}

fn within(elapsed: Duration, budget_secs: u64, what: &str) -> Result<(), String> {
    if elapsed <= Duration::from_secs(budget_secs) {
        Ok(())
    } else {
        Err(format!(
            "{what} took {:.1}s, budget {budget_secs}s",
            elapsed.as_secs_f64()
        ))
    }
}

struct Entry {
    curve: HyperellipticCurve,
    zeta: ZetaData,
    profile: GroupProfile,
}

struct Corpus {
    f3: Vec<Entry>,
    f5: Vec<Entry>,
}

impl Corpus {
    fn all(&self) -> impl Iterator<Item = &Entry> {
        self.f3.iter().chain(self.f5.iter())
    }
}

fn build_entries(p: u64, max_curves: Option<usize>) -> Vec<Entry> {
    let field = FiniteField::prime(p).expect("prime field");
    let curves = enumerate_corpus(&CorpusSpec {
        field,
        genus: 2,
        include_even: false,
        max_curves,
    })
    .expect("corpus enumeration");
    curves
        .into_iter()
        .map(|curve| {
            let zeta = l_polynomial(&curve, CAP).expect("zeta");
            let jac = Jacobian::new(&curve).expect("odd model");
            let profile = jac
                .group_profile(ProfileMode::Exhaustive, CAP)
                .expect("group profile");
            Entry {
                curve,
                zeta,
                profile,
            }
        })
        .collect()
}

static CORPUS: LazyLock<Corpus> = LazyLock::new(|| Corpus {
    f3: build_entries(3, None),
    f5: build_entries(5, Some(500)),
});

/// N_k predicted by the L-coefficients alone, via the Newton recursion on
/// the power sums P_k of the reciprocal roots: N_k = q^k + 1 - P_k with
/// P_k = -k a_k - sum_{j=1}^{k-1} a_j P_{k-j} (a_k = 0 past the degree).
fn predicted_counts(a: &[BigInt], q: u64, upto: usize) -> Vec<BigInt> {
    let deg = a.len() - 1;
    let mut p = vec![BigInt::zero(); upto + 1];
    let mut out = Vec::with_capacity(upto);
    for k in 1..=upto {
        let mut s = if k <= deg {
            -BigInt::from(k as u64) * &a[k]
        } else {
            BigInt::zero()
        };
        for j in 1..=deg.min(k - 1) {
            s -= &a[j] * &p[k - j];
        }
        p[k] = s;
        out.push(BigInt::from(q).pow(k as u32) + 1 - &p[k]);
    }
    out
}

#[test]
fn criterion_1_l_polynomial_predicts_higher_counts() {
    run(1, || {
        let t = Instant::now();
        let corpus = &*CORPUS;
        for entry in corpus.all() {
            let q = entry.curve.field().characteristic();
            let predicted = predicted_counts(&entry.zeta.l_coeffs, q, 4);
            for k in 1..=4usize {
                let counted = BigInt::from(
                    entry
                        .curve
                        .count_points(k, CAP)
                        .map_err(|e| format!("recount failed: {e}"))?,
                );
                check!(
                    predicted[k - 1] == counted,
                    "L-predicted N_{k} = {} but direct count = {counted} on {:?}",
                    predicted[k - 1],
                    entry.curve.f()
                );
                check!(
                    entry.zeta.counts[k - 1] == counted,
                    "stored N_{k} disagrees with recount on curve over F_{q}"
                );
            }
        }
        let n = corpus.f3.len() + corpus.f5.len();
        within(t.elapsed(), 120, "zeta consistency sweep")?;
        Ok(format!(
            "{n} curves, N_3/N_4 predicted exactly, {:.1}s",
            t.elapsed().as_secs_f64()
        ))
    });
}

#[test]
fn criterion_2_class_enumeration_matches_l_at_one() {
    run(2, || {
        let t = Instant::now();
        let corpus = &*CORPUS;
        for entry in &corpus.f3 {
            let jac = Jacobian::new(&entry.curve).map_err(|e| e.to_string())?;
            let classes = jac.enumerate_classes(CAP).map_err(|e| e.to_string())?;
            check!(
                BigInt::from(classes.len()) == entry.zeta.class_number,
                "enumerated {} classes but L(1) = {} on {:?}",
                classes.len(),
                entry.zeta.class_number,
                entry.curve.f()
            );
            let distinct: std::collections::BTreeSet<&JacClass> = classes.iter().collect();
            check!(
                distinct.len() == classes.len(),
                "duplicate reduced representatives on {:?}",
                entry.curve.f()
            );
        }
        within(t.elapsed(), 300, "class enumeration sweep")?;
        Ok(format!(
            "{} curves, #classes = L(1) with unique representatives, {:.1}s",
            corpus.f3.len(),
            t.elapsed().as_secs_f64()
        ))
    });
}

#[test]
fn criterion_3_class_number_sits_in_weil_interval() {
    run(3, || {
        let corpus = &*CORPUS;
        for entry in corpus.all() {
            let q = entry.curve.field().characteristic();
            let weil = weil_interval(2, q);
            let h = &entry.zeta.class_number;
            check!(
                weil.lower >= BigInt::one(),
                "Weil lower endpoint below 1 at q = {q}"
            );
            check!(
                weil.contains(h),
                "h = {h} outside [{}, {}] at q = {q}",
                weil.lower,
                weil.upper
            );
            if q == 3 {
                check!(
                    weil.upper == BigInt::from(55),
                    "F_3 genus-2 Weil ceiling is {}, expected 55",
                    weil.upper
                );
            }
        }
        Ok(format!(
            "{} curves inside their Weil intervals",
            corpus.f3.len() + corpus.f5.len()
        ))
    });
}

#[test]
fn criterion_4_exponent_meets_lower_bound() {
    run(4, || {
        let corpus = &*CORPUS;
        for entry in corpus.all() {
            let q = entry.curve.field().characteristic();
            let gon = gonality_bounds(&entry.zeta.counts, q, true, None)
                .map_err(|e| e.to_string())?
                .value;
            check!(gon == 2, "hyperelliptic gonality came out {gon}");
            let eb = exponent_lower_bound(&BoundInputs::new(2, q, gon), PREC)
                .map_err(|e| e.to_string())?;
            check!(
                entry.profile.exponent >= eb.bound.safe_lower,
                "exponent {} below safe bound {} on {:?}",
                entry.profile.exponent,
                eb.bound.safe_lower,
                entry.curve.f()
            );
        }

        let big_ratio = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let large = exponent_lower_bound(&BoundInputs::new(100, 2, 2), PREC)
            .map_err(|e| e.to_string())?;
        check!(
            large.bound.rational() == Some(&big_ratio(5, 2)),
            "exact bound at (g=100, q=2, gon=2) is {:?}, expected 5/2",
            large.bound.exact
        );
        let small = exponent_lower_bound(&BoundInputs::new(2, 3, 2), PREC)
            .map_err(|e| e.to_string())?;
        check!(
            small.bound.rational() == Some(&big_ratio(1, 2)),
            "exact bound at (g=2, q=3, gon=2) is {:?}, expected 1/2",
            small.bound.exact
        );
        Ok(format!(
            "{} curves pass; hand values 5/2 and 1/2 reproduced",
            corpus.f3.len() + corpus.f5.len()
        ))
    });
}

#[test]
fn criterion_5_order_counts_meet_lower_bound() {
    run(5, || {
        let corpus = &*CORPUS;
        let mut evaluations = 0u64;
        for entry in &corpus.f3 {
            let e = u64::try_from(&entry.profile.exponent)
                .map_err(|_| String::from("exponent out of u64 range"))?;
            for m in 1..=e {
                let inputs = BoundInputs::new(2, 3, 2).with_m(m);
                let ocb =
                    order_count_lower_bound(&inputs, PREC).map_err(|e| e.to_string())?;
                check!(
                    ocb.raw.rational().is_some(),
                    "raw order-count value missing at m = {m}"
                );
                let measured = order_count(&entry.profile, &BigInt::from(m))
                    .map_err(|e| e.to_string())?;
                check!(
                    measured >= ocb.guaranteed,
                    "order count {measured} below guaranteed {} at m = {m} on {:?}",
                    ocb.guaranteed,
                    entry.curve.f()
                );
                evaluations += 1;
            }
        }

        let big = order_count_lower_bound(&BoundInputs::new(100, 2, 2).with_m(3), PREC)
            .map_err(|e| e.to_string())?;
        let expected = BigRational::from_integer(BigInt::from(45640));
        check!(
            big.raw.rational() == Some(&expected),
            "N(3) at (g=100, q=2, gon=2) is {:?}, expected 45640",
            big.raw.exact
        );
        check!(
            big.guaranteed == BigInt::from(45640),
            "guaranteed N(3) is {}, expected 45640",
            big.guaranteed
        );
        Ok(format!(
            "{} curves, {evaluations} (curve, m) checks; N(3) = 45640 reproduced",
            corpus.f3.len()
        ))
    });
}

#[test]
fn criterion_6_nonfibral_counts_meet_positive_bound() {
    run(6, || {
        let t = Instant::now();
        let corpus = &*CORPUS;

        let flagship_f3 = nonfibral_lower_bound(2, 3, 5, 2).map_err(|e| e.to_string())?;
        check!(
            flagship_f3.safe_lower == BigInt::from(33),
            "bound at (g=2, q=3, k=5) is {}, expected 33",
            flagship_f3.safe_lower
        );
        let flagship_f5 = nonfibral_lower_bound(2, 5, 3, 2).map_err(|e| e.to_string())?;
        check!(
            flagship_f5.safe_lower == BigInt::from(19),
            "bound at (g=2, q=5, k=3) is {}, expected 19",
            flagship_f5.safe_lower
        );

        let mut checks = 0u64;
        for (entries, ks) in [(&corpus.f3, &[3u64, 5][..]), (&corpus.f5, &[3u64][..])] {
            for entry in entries.iter() {
                let q = entry.curve.field().characteristic();
                let map = CoveringMap::x_map(&entry.curve);
                for &k in ks {
                    let bound = nonfibral_lower_bound(2, q, k, 2).map_err(|e| e.to_string())?;
                    let count = map
                        .count_nonfibral(k as usize, CAP)
                        .map_err(|e| e.to_string())?;
                    check!(
                        BigInt::from(count) >= bound.safe_lower,
                        "count {count} below bound {} at q = {q}, k = {k} on {:?}",
                        bound.safe_lower,
                        entry.curve.f()
                    );
                    checks += 1;
                }
            }
        }
        within(t.elapsed(), 300, "nonfibral sweep")?;
        Ok(format!(
            "{checks} (curve, k) counts at or above the bound; positive bounds 33 and 19 confirmed, {:.1}s",
            t.elapsed().as_secs_f64()
        ))
    });
}

#[test]
fn criterion_7_bielliptic_covers_relative_checks() {
    run(7, || {
        let t = Instant::now();
        let mut covers: Vec<BiellipticCover> = Vec::new();
        for p in [5u64, 7] {
            let field = FiniteField::prime(p).map_err(|e| e.to_string())?;
            covers.extend(enumerate_covers(&field, usize::MAX).map_err(|e| e.to_string())?);
        }
        check!(
            covers.len() >= 25,
            "only {} valid covers over F_5 and F_7",
            covers.len()
        );

        for cover in &covers {
            let prof = relative_profile(cover, CAP, PREC).map_err(|e| e.to_string())?;
            let product = BigInt::from(prof.image_order) * BigInt::from(prof.quotient_order);
            check!(
                product == prof.h1,
                "image {} x quotient {} != h1 {} on {:?}",
                prof.image_order,
                prof.quotient_order,
                prof.h1,
                cover.f_cubic()
            );

            let points = cover.e_points().map_err(|e| e.to_string())?;
            check!(
                points.len() as u64 == prof.e_order,
                "E point list disagrees with e_order on {:?}",
                cover.f_cubic()
            );
            for c in &points {
                let pulled = pullback(cover, c).map_err(|e| e.to_string())?;
                let back = pushforward(cover, &pulled).map_err(|e| e.to_string())?;
                let doubled = cover.e_scalar(c, 2).map_err(|e| e.to_string())?;
                check!(
                    back == doubled,
                    "pushforward(pullback({c:?})) != 2 c on {:?}",
                    cover.f_cubic()
                );
            }

            let e = BigInt::from(prof.quotient_exponent);
            for (name, value, pass) in [
                ("part1", &prof.part1, prof.part1_pass),
                ("part2", &prof.part2, prof.part2_pass),
                ("sharp", &prof.sharp.bound, prof.sharp_pass),
            ] {
                check!(
                    e >= value.safe_lower && pass,
                    "quotient exponent {e} below {name} bound {} on {:?}",
                    value.safe_lower,
                    cover.f_cubic()
                );
            }
        }
        within(t.elapsed(), 120, "cover sweep")?;
        Ok(format!(
            "{} covers: order identity, projection formula, bound checks, {:.1}s",
            covers.len(),
            t.elapsed().as_secs_f64()
        ))
    });
}

#[test]
fn criterion_8_group_law_property_suite() {
    run(8, || {
        let t = Instant::now();
        let corpus = &*CORPUS;
        let mut triples = 0u64;
        for (idx, entry) in corpus.all().enumerate() {
            let jac = Jacobian::new(&entry.curve).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x9E37_79B9 + idx as u64);
            let h = &entry.zeta.class_number;
            let fail = |law: &str, c: &HyperellipticCurve| format!("{law} failed on {:?}", c.f());
            for _ in 0..1000 {
                let a = jac.random_class(&mut rng).map_err(|e| e.to_string())?;
                let b = jac.random_class(&mut rng).map_err(|e| e.to_string())?;
                let c = jac.random_class(&mut rng).map_err(|e| e.to_string())?;
                let ab = jac.compose(&a, &b).map_err(|e| e.to_string())?;
                let bc = jac.compose(&b, &c).map_err(|e| e.to_string())?;
                let ab_c = jac.compose(&ab, &c).map_err(|e| e.to_string())?;
                let a_bc = jac.compose(&a, &bc).map_err(|e| e.to_string())?;
                check!(ab_c == a_bc, "{}", fail("associativity", &entry.curve));
                let ba = jac.compose(&b, &a).map_err(|e| e.to_string())?;
                check!(ab == ba, "{}", fail("commutativity", &entry.curve));
                let a_neg = jac.compose(&a, &jac.neg(&a)).map_err(|e| e.to_string())?;
                check!(
                    a_neg == jac.identity(),
                    "{}",
                    fail("inverse law", &entry.curve)
                );
                let ha = jac.scalar_mul(&a, h).map_err(|e| e.to_string())?;
                check!(
                    ha == jac.identity(),
                    "{}",
                    fail("Lagrange h*a = 0", &entry.curve)
                );
                triples += 1;
            }
        }
        Ok(format!(
            "{triples} seeded triples across {} curves, {:.1}s",
            corpus.f3.len() + corpus.f5.len(),
            t.elapsed().as_secs_f64()
        ))
    });
}

#[test]
fn criterion_9_bound_safety_audit_and_prime_scan() {
    run(9, || {
        let t = Instant::now();
        let refined = 2 * PREC;
        let mut audits = 0u64;
        let prime_powers = [2u64, 3, 4, 5, 7, 8, 9];

        for g in [2u64, 3, 4, 10, 100, 1000, 10000] {
            for &q in &prime_powers {
                for gon in [2u64, 3, 5] {
                    let inputs = BoundInputs::new(g, q, gon);
                    let coarse = exponent_lower_bound(&inputs, PREC).map_err(|e| e.to_string())?;
                    let fine = exponent_lower_bound(&inputs, refined).map_err(|e| e.to_string())?;
                    audit_pair(&coarse.bound, &fine.bound).map_err(|e| e.to_string())?;
                    audit_pair(&coarse.gonality_free, &fine.gonality_free)
                        .map_err(|e| e.to_string())?;
                    audits += 2;
                    for m in [1u64, 2, 3] {
                        let mi = inputs.with_m(m);
                        let c = order_count_lower_bound(&mi, PREC).map_err(|e| e.to_string())?;
                        let f = order_count_lower_bound(&mi, refined).map_err(|e| e.to_string())?;
                        audit_pair(&c.raw, &f.raw).map_err(|e| e.to_string())?;
                        audit_pair(&c.companion, &f.companion).map_err(|e| e.to_string())?;
                        audits += 2;
                    }
                }
            }
            for base in [LogBase::E, LogBase::Int(2)] {
                let c = stichtenoth_reference(g, base, PREC).map_err(|e| e.to_string())?;
                let f = stichtenoth_reference(g, base, refined).map_err(|e| e.to_string())?;
                audit_pair(&c, &f).map_err(|e| e.to_string())?;
                audits += 1;
            }
        }
        for g1 in [2u64, 3, 10] {
            for &q in &prime_powers {
                for g2 in [1u64, 2, 3] {
                    let c = relative_bound_part1(g1, g2, q, PREC).map_err(|e| e.to_string())?;
                    let f = relative_bound_part1(g1, g2, q, refined).map_err(|e| e.to_string())?;
                    audit_pair(&c, &f).map_err(|e| e.to_string())?;
                    audits += 1;
                }
                for deg_phi in [2u64, 3] {
                    let b = relative_bound_part2(g1, q, deg_phi).map_err(|e| e.to_string())?;
                    audit_pair(&b, &b).map_err(|e| e.to_string())?;
                    for gon1 in [2u64, 3] {
                        let s = relative_bound_sharp(g1, gon1, q, deg_phi)
                            .map_err(|e| e.to_string())?;
                        audit_pair(&s.bound, &s.bound).map_err(|e| e.to_string())?;
                        audits += 1;
                    }
                    audits += 1;
                }
            }
        }

        // Primality scan oracle: a sieve to 10^6, compared against the
        // strictly-below search for every integer argument.
        const LIMIT: usize = 1_000_000;
        let mut composite = vec![false; LIMIT + 1];
        let mut i = 2usize;
        while i * i <= LIMIT {
            if !composite[i] {
                let mut j = i * i;
                while j <= LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        let mut last_prime: Option<u64> = None;
        for x in 2..=LIMIT as u64 {
            let got = largest_prime_below(&BigRational::from_integer(BigInt::from(x)));
            check!(
                got == last_prime,
                "largest_prime_below({x}) = {got:?}, sieve says {last_prime:?}"
            );
            if !composite[x as usize] {
                check!(is_prime_u64(x), "is_prime_u64 rejects sieve prime {x}");
                last_prime = Some(x);
            } else {
                check!(!is_prime_u64(x), "is_prime_u64 accepts composite {x}");
            }
        }
        let third = BigRational::new(BigInt::from(100), BigInt::from(3));
        check!(
            largest_prime_below(&third) == Some(31),
            "largest prime below 100/3 should be 31"
        );

        Ok(format!(
            "{audits} doubled-precision audits; prime scan to 10^6 agrees, {:.1}s",
            t.elapsed().as_secs_f64()
        ))
    });
}
