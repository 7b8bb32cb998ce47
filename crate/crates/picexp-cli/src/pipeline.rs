//! Shared computation behind the subcommands: one fully populated report
//! row per curve or cover, plus the smaller single-purpose payloads. Cap
//! exceedances become recorded skips here; consistency failures propagate
//! as internal errors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use picexp_core::bounds::{self, BoundInputs, BoundValue, Rounding};
use picexp_core::curve::{HyperellipticCurve, OddModelPlan};
use picexp_core::exact::LogBase;
use picexp_core::ff::FiniteField;
use picexp_core::jacobian::{order_count, GroupProfile, Jacobian, ProfileMode};
use picexp_core::nonfibral::CoveringMap;
use picexp_core::primes::is_prime_u64;
use picexp_core::relative::{relative_profile, BiellipticCover};
use picexp_core::zeta::{l_polynomial, weil_interval};
use picexp_core::Error;
use serde::Serialize;

use crate::report::{big_string, coeffs_string, exact_string, safe_string, CoverRow, CurveRow};
use crate::CliError;

/// Default enumeration budget: points scanned (or classes listed) per call.
pub const DEFAULT_CAP: u128 = 1 << 32;

#[derive(Debug, Clone, Copy)]
pub struct RowOptions {
    pub cap: u128,
    pub prec: u32,
}

impl Default for RowOptions {
    fn default() -> Self {
        RowOptions {
            cap: DEFAULT_CAP,
            prec: bounds::DEFAULT_PREC,
        }
    }
}

/// q = p^n as a u64, the form every bound formula takes.
pub fn field_order(field: &FiniteField) -> Result<u64, CliError> {
    let n = u32::try_from(field.degree())
        .map_err(|_| CliError::Input(String::from("field degree out of range")))?;
    field.characteristic().checked_pow(n).ok_or_else(|| {
        CliError::Input(String::from(
            "field order exceeds u64; bounds cannot be evaluated",
        ))
    })
}

fn field_tag(field: &FiniteField) -> String {
    if field.degree() == 1 {
        format!("q{}", field.characteristic())
    } else {
        format!("q{}e{}", field.characteristic(), field.degree())
    }
}

pub fn curve_label(curve: &HyperellipticCurve) -> String {
    format!(
        "{}-h{}-f{}",
        field_tag(curve.field()),
        coeffs_string(curve.h()),
        coeffs_string(curve.f())
    )
}

pub fn cover_label(cover: &BiellipticCover) -> String {
    format!(
        "{}-F{}",
        field_tag(cover.base()),
        coeffs_string(cover.f_cubic())
    )
}

/// The k used in a report row: the smallest prime whose degree-k scan fits
/// under the cap and whose lower bound is positive, so the pass check means
/// something. When every affordable bound is vacuous the smallest affordable
/// prime is kept and the count is still reported.
pub fn select_nonfibral_k(g: u64, q: u64, deg_f: u64, cap: u128) -> Option<(u64, BoundValue)> {
    let mut fallback = None;
    for k in 2u64..=61 {
        if !is_prime_u64(k) {
            continue;
        }
        let k32 = u32::try_from(k).expect("k is tiny");
        let Some(needed) = u128::from(q).checked_pow(k32) else {
            break;
        };
        if needed > cap {
            break;
        }
        let Ok(bound) = bounds::nonfibral_lower_bound(g, q, k, deg_f) else {
            break;
        };
        if bound.safe_lower > BigInt::zero() {
            return Some((k, bound));
        }
        if fallback.is_none() {
            fallback = Some((k, bound));
        }
    }
    fallback
}

pub fn curve_row(curve: &HyperellipticCurve, opts: &RowOptions) -> Result<CurveRow, CliError> {
    let field = curve.field();
    let q = field_order(field)?;
    let g = curve.genus();
    let g64 = u64::try_from(g).map_err(|_| CliError::Input(String::from("genus out of range")))?;

    let mut row = CurveRow {
        curve_id: curve_label(curve),
        p: field.characteristic(),
        n: field.degree(),
        g,
        f_coeffs: coeffs_string(curve.f()),
        h_coeffs: coeffs_string(curve.h()),
        counts: Vec::new(),
        l_coeffs: Vec::new(),
        class_number: None,
        weil_lower: None,
        weil_upper: None,
        weil_pass: None,
        class_number_enumerated: None,
        class_number_pass: None,
        exponent: None,
        gon: None,
        bound_thm42_exact: None,
        bound_thm42_safe: None,
        thm42_pass: None,
        nm_inputs: None,
        nm_value: None,
        nm_guaranteed: None,
        order_count_at_exponent: None,
        nm_pass: None,
        nonfibral_k: None,
        nonfibral_bound: None,
        nonfibral_count: None,
        nonfibral_pass: None,
        skipped: Vec::new(),
        pass_all: true,
    };

    let zeta = match l_polynomial(curve, opts.cap) {
        Ok(z) => Some(z),
        Err(Error::CapExceeded { .. }) => {
            row.skipped
                .push(String::from("zeta: enumeration cap exceeded"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let plan = curve.to_odd_model()?;
    let odd_curve: Option<&HyperellipticCurve> = match &plan {
        OddModelPlan::AlreadyOdd => Some(curve),
        OddModelPlan::Changed(change) => Some(change.odd()),
        OddModelPlan::Unavailable => {
            row.skipped.push(String::from(
                "group checks: no rational Weierstrass point, odd model unavailable",
            ));
            None
        }
    };

    let profile: Option<GroupProfile> = match odd_curve {
        Some(oc) => {
            let jac = Jacobian::new(oc)?;
            match jac.group_profile(ProfileMode::Exhaustive, opts.cap) {
                Ok(p) => Some(p),
                Err(Error::CapExceeded { .. }) => {
                    row.skipped
                        .push(String::from("group profile: enumeration cap exceeded"));
                    None
                }
                Err(e) => return Err(e.into()),
            }
        }
        None => None,
    };

    let mut gon_value = None;
    if let Some(z) = &zeta {
        row.counts = z.counts.iter().map(big_string).collect();
        row.l_coeffs = z.l_coeffs.iter().map(big_string).collect();
        row.class_number = Some(big_string(&z.class_number));

        let weil = weil_interval(g, q);
        row.weil_lower = Some(big_string(&weil.lower));
        row.weil_upper = Some(big_string(&weil.upper));
        row.weil_pass = Some(weil.lower >= BigInt::one() && weil.contains(&z.class_number));

        let gb = bounds::gonality_bounds(&z.counts, q, g >= 2, None)?;
        row.gon = Some(gb.value);
        gon_value = Some(gb.value);
    }

    if let Some(p) = &profile {
        row.exponent = Some(big_string(&p.exponent));
        if let Some(z) = &zeta {
            row.class_number_enumerated = Some(big_string(&p.h));
            row.class_number_pass = Some(p.h == z.class_number);
        }
    }

    if let Some(gon) = gon_value {
        if g64 >= 2 {
            let inputs = BoundInputs::new(g64, q, gon);
            let eb = bounds::exponent_lower_bound(&inputs, opts.prec)?;
            row.bound_thm42_exact = Some(exact_string(&eb.bound));
            row.bound_thm42_safe = Some(safe_string(&eb.bound));
            match &profile {
                Some(p) => {
                    row.thm42_pass = Some(p.exponent >= eb.bound.safe_lower);
                    match u64::try_from(&p.exponent) {
                        Ok(m) => {
                            let ocb =
                                bounds::order_count_lower_bound(&inputs.with_m(m), opts.prec)?;
                            row.nm_inputs = Some(format!("g={g64};q={q};gon={gon};m={m}"));
                            row.nm_value = Some(exact_string(&ocb.raw));
                            row.nm_guaranteed = Some(big_string(&ocb.guaranteed));
                            let measured = order_count(p, &BigInt::from(m))?;
                            row.order_count_at_exponent = Some(big_string(&measured));
                            row.nm_pass = Some(measured >= ocb.guaranteed);
                        }
                        Err(_) => row
                            .skipped
                            .push(String::from("order-count row: exponent out of range")),
                    }
                }
                None => row.skipped.push(String::from(
                    "exponent and order-count checks: measured exponent unavailable",
                )),
            }
        } else {
            row.skipped
                .push(String::from("exponent bound: genus below 2"));
        }
    }

    match select_nonfibral_k(g64, q, 2, opts.cap) {
        Some((k, bound)) => {
            row.nonfibral_k = Some(k);
            row.nonfibral_bound = Some(safe_string(&bound));
            let map = CoveringMap::x_map(curve);
            match map.count_nonfibral(k as usize, opts.cap) {
                Ok(count) => {
                    row.nonfibral_count = Some(count);
                    row.nonfibral_pass = Some(BigInt::from(count) >= bound.safe_lower);
                }
                Err(Error::CapExceeded { .. }) => row
                    .skipped
                    .push(String::from("nonfibral count: enumeration cap exceeded")),
                Err(e) => return Err(e.into()),
            }
        }
        None => row.skipped.push(String::from(
            "nonfibral count: no usable prime degree under the cap",
        )),
    }

    row.pass_all = [
        row.weil_pass,
        row.class_number_pass,
        row.thm42_pass,
        row.nm_pass,
        row.nonfibral_pass,
    ]
    .into_iter()
    .flatten()
    .all(|b| b);
    Ok(row)
}

pub fn cover_row(cover: &BiellipticCover, opts: &RowOptions) -> Result<CoverRow, CliError> {
    let field = cover.base();
    let prof = relative_profile(cover, opts.cap, opts.prec)?;
    let pass_all = prof.part1_pass && prof.part2_pass && prof.sharp_pass;
    Ok(CoverRow {
        cover_id: cover_label(cover),
        p: field.characteristic(),
        n: field.degree(),
        f_coeffs: coeffs_string(cover.f_cubic()),
        h1: big_string(&prof.h1),
        e_order: prof.e_order,
        image_order: prof.image_order,
        quotient_order: prof.quotient_order,
        quotient_exponent: prof.quotient_exponent,
        kernel_order: prof.kernel_order,
        ramification_points: prof.ramification_points,
        part1_exact: exact_string(&prof.part1),
        part1_safe: safe_string(&prof.part1),
        part1_pass: prof.part1_pass,
        part2_exact: exact_string(&prof.part2),
        part2_safe: safe_string(&prof.part2),
        part2_pass: prof.part2_pass,
        sharp_exact: exact_string(&prof.sharp.bound),
        sharp_safe: safe_string(&prof.sharp.bound),
        sharp_k: prof.sharp.k,
        sharp_pass: prof.sharp_pass,
        pass_all,
    })
}

#[derive(Debug, Serialize)]
pub struct ZetaOutput {
    pub counts: Vec<String>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    pub h: String,
    pub weil: [String; 2],
}

pub fn zeta_output(curve: &HyperellipticCurve, cap: u128) -> Result<ZetaOutput, CliError> {
    let q = field_order(curve.field())?;
    let z = l_polynomial(curve, cap)?;
    let weil = weil_interval(curve.genus(), q);
    Ok(ZetaOutput {
        counts: z.counts.iter().map(big_string).collect(),
        l: z.l_coeffs.iter().map(big_string).collect(),
        h: big_string(&z.class_number),
        weil: [big_string(&weil.lower), big_string(&weil.upper)],
    })
}

#[derive(Debug, Serialize)]
pub struct JacobianOutput {
    pub h: String,
    pub exponent: String,
    /// In sampled mode the exponent is only a certified lower bound.
    pub exponent_is_lower_bound: bool,
    pub invariant_factors: Option<Vec<String>>,
    pub order_histogram: BTreeMap<String, u64>,
    pub mode: String,
}

pub fn jacobian_output(
    curve: &HyperellipticCurve,
    cap: u128,
    seed: u64,
) -> Result<JacobianOutput, CliError> {
    let plan = curve.to_odd_model()?;
    let odd: &HyperellipticCurve = match &plan {
        OddModelPlan::AlreadyOdd => curve,
        OddModelPlan::Changed(change) => change.odd(),
        OddModelPlan::Unavailable => {
            return Err(CliError::Input(String::from(
                "jacobian unavailable: even-degree model without a rational Weierstrass point",
            )))
        }
    };
    let jac = Jacobian::new(odd)?;
    let profile = match jac.group_profile(ProfileMode::Exhaustive, cap) {
        Ok(p) => p,
        Err(Error::CapExceeded { .. }) => {
            let z = l_polynomial(curve, cap)?;
            jac.group_profile(
                ProfileMode::Sampled {
                    h: z.class_number,
                    seed,
                    samples: 64,
                },
                cap,
            )?
        }
        Err(e) => return Err(e.into()),
    };
    Ok(JacobianOutput {
        h: big_string(&profile.h),
        exponent: big_string(&profile.exponent),
        exponent_is_lower_bound: profile.exponent_is_lower_bound,
        invariant_factors: profile
            .invariant_factors
            .as_ref()
            .map(|v| v.iter().map(big_string).collect()),
        order_histogram: profile
            .order_histogram
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        mode: String::from(if profile.sampled {
            "sampled"
        } else {
            "exhaustive"
        }),
    })
}

#[derive(Debug, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub exact: String,
    pub safe_lower: String,
    pub rounding: &'static str,
    pub provenance: &'static str,
}

pub fn bound_entry(name: &'static str, b: &BoundValue) -> BoundEntry {
    BoundEntry {
        name,
        exact: exact_string(b),
        safe_lower: safe_string(b),
        rounding: match b.rounding {
            Rounding::Floor => "floor",
            Rounding::Ceil => "ceil",
        },
        provenance: b.provenance,
    }
}

#[derive(Debug, Serialize)]
pub struct OrderCountReport {
    pub raw: BoundEntry,
    pub guaranteed: String,
    pub s: u64,
    pub s_term: String,
    pub k: Option<u64>,
    pub k_term: Option<String>,
    pub companion: BoundEntry,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BoundsRequest {
    pub g: Option<u64>,
    pub q: Option<u64>,
    pub gon: Option<u64>,
    pub m: Option<u64>,
    pub g1: Option<u64>,
    pub g2: Option<u64>,
    pub deg_phi: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub prec: u32,
    pub log_base: String,
    pub bounds: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_count: Option<OrderCountReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp_k: Option<u64>,
}

/// Evaluates every bound the supplied scalars determine. The cube-root
/// reference rides along whenever g is given; it never enters a verdict.
pub fn bounds_report(
    req: &BoundsRequest,
    log_base: LogBase,
    prec: u32,
) -> Result<BoundReport, CliError> {
    let mut entries = Vec::new();
    let mut order_count = None;
    let mut sharp_k = None;

    if let (Some(g), Some(q), Some(gon)) = (req.g, req.q, req.gon) {
        let inputs = BoundInputs::new(g, q, gon);
        let eb = bounds::exponent_lower_bound(&inputs, prec)?;
        entries.push(bound_entry("exponent_lower_bound", &eb.bound));
        entries.push(bound_entry("exponent_gonality_free", &eb.gonality_free));
        if let Some(m) = req.m {
            let ocb = bounds::order_count_lower_bound(&inputs.with_m(m), prec)?;
            order_count = Some(OrderCountReport {
                raw: bound_entry("order_count_raw", &ocb.raw),
                guaranteed: big_string(&ocb.guaranteed),
                s: ocb.s,
                s_term: big_string(&ocb.s_term),
                k: ocb.k,
                k_term: ocb.k_term.as_ref().map(big_string),
                companion: bound_entry("order_count_companion", &ocb.companion),
            });
        }
    }
    if let (Some(g1), Some(g2), Some(q)) = (req.g1, req.g2, req.q) {
        let b = bounds::relative_bound_part1(g1, g2, q, prec)?;
        entries.push(bound_entry("relative_part1", &b));
    }
    if let (Some(g1), Some(q), Some(deg_phi)) = (req.g1, req.q, req.deg_phi) {
        let b = bounds::relative_bound_part2(g1, q, deg_phi)?;
        entries.push(bound_entry("relative_part2", &b));
    }
    if let (Some(g1), Some(gon), Some(q), Some(deg_phi)) = (req.g1, req.gon, req.q, req.deg_phi) {
        let sb = bounds::relative_bound_sharp(g1, gon, q, deg_phi)?;
        entries.push(bound_entry("relative_sharp", &sb.bound));
        sharp_k = Some(sb.k);
    }
    if let Some(g) = req.g {
        let b = bounds::stichtenoth_reference(g, log_base, prec)?;
        entries.push(bound_entry("cube_root_reference", &b));
    }
    if entries.is_empty() {
        return Err(CliError::Input(String::from(
            "no applicable bounds: supply g/q/gon (optionally m), g1/g2/q, or g1/q/deg-phi",
        )));
    }
    Ok(BoundReport {
        prec,
        log_base: match log_base {
            LogBase::E => String::from("e"),
            LogBase::Int(b) => b.to_string(),
        },
        bounds: entries,
        order_count,
        sharp_k,
    })
}

#[derive(Debug, Serialize)]
pub struct NonfibralOutput {
    pub k: u64,
    pub count: u64,
    pub bound: String,
    pub pass: bool,
}

pub fn nonfibral_output(
    map: &CoveringMap<'_>,
    g: u64,
    q: u64,
    k: u64,
    cap: u128,
) -> Result<NonfibralOutput, CliError> {
    let bound = bounds::nonfibral_lower_bound(g, q, k, map.degree())?;
    let count = map.count_nonfibral(k as usize, cap)?;
    Ok(NonfibralOutput {
        k,
        count,
        bound: big_string(&bound.safe_lower),
        pass: BigInt::from(count) >= bound.safe_lower,
    })
}
