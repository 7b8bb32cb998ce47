//! Report rows and their CSV/JSON forms. All exact values are rendered as
//! decimal or rational strings so outputs are byte-stable across platforms;
//! pass flags sit next to the raw columns they are derived from.

use std::io::Write;

use num_bigint::BigInt;
use picexp_core::bounds::{BoundValue, ExactValue};
use picexp_core::ff::FieldElem;
use picexp_core::poly::Poly;
use serde::Serialize;

use crate::CliError;

/// The fixed sweep schema. Downstream parsing relies on these names and
/// positions; extensions append, never reorder.
pub const CURVE_COLUMNS: [&str; 26] = [
    "curve_id",
    "p",
    "n",
    "g",
    "f_coeffs",
    "h_coeffs",
    "N1",
    "N2",
    "N3",
    "N4",
    "L0",
    "L1",
    "L2",
    "L3",
    "L4",
    "class_number",
    "exponent",
    "gon",
    "bound_thm42_exact",
    "bound_thm42_safe",
    "Nm_inputs",
    "Nm_value",
    "nonfibral_k",
    "nonfibral_bound",
    "nonfibral_count",
    "pass_all",
];

pub const COVER_COLUMNS: [&str; 22] = [
    "cover_id",
    "p",
    "n",
    "F_coeffs",
    "h1",
    "e_order",
    "image_order",
    "quotient_order",
    "quotient_exponent",
    "kernel_order",
    "ramification_points",
    "part1_exact",
    "part1_safe",
    "part1_pass",
    "part2_exact",
    "part2_safe",
    "part2_pass",
    "sharp_exact",
    "sharp_safe",
    "sharp_k",
    "sharp_pass",
    "pass_all",
];

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub curve_id: String,
    pub p: u64,
    pub n: usize,
    pub g: usize,
    pub f_coeffs: String,
    pub h_coeffs: String,
    /// N_1..N_{2g}; the CSV carries the first four.
    pub counts: Vec<String>,
    /// L-coefficients a_0..a_{2g}; the CSV carries the first five.
    pub l_coeffs: Vec<String>,
    pub class_number: Option<String>,
    pub weil_lower: Option<String>,
    pub weil_upper: Option<String>,
    pub weil_pass: Option<bool>,
    pub class_number_enumerated: Option<String>,
    pub class_number_pass: Option<bool>,
    pub exponent: Option<String>,
    pub gon: Option<u64>,
    pub bound_thm42_exact: Option<String>,
    pub bound_thm42_safe: Option<String>,
    pub thm42_pass: Option<bool>,
    pub nm_inputs: Option<String>,
    pub nm_value: Option<String>,
    pub nm_guaranteed: Option<String>,
    pub order_count_at_exponent: Option<String>,
    pub nm_pass: Option<bool>,
    pub nonfibral_k: Option<u64>,
    pub nonfibral_bound: Option<String>,
    pub nonfibral_count: Option<u64>,
    pub nonfibral_pass: Option<bool>,
    /// Checks that could not run (cap exceedances, missing odd model), with
    /// reasons. Skips are not failures.
    pub skipped: Vec<String>,
    pub pass_all: bool,
}

impl CurveRow {
    fn nth(v: &[String], i: usize) -> String {
        v.get(i).cloned().unwrap_or_default()
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |s: &Option<String>| s.clone().unwrap_or_default();
        vec![
            self.curve_id.clone(),
            self.p.to_string(),
            self.n.to_string(),
            self.g.to_string(),
            self.f_coeffs.clone(),
            self.h_coeffs.clone(),
            Self::nth(&self.counts, 0),
            Self::nth(&self.counts, 1),
            Self::nth(&self.counts, 2),
            Self::nth(&self.counts, 3),
            Self::nth(&self.l_coeffs, 0),
            Self::nth(&self.l_coeffs, 1),
            Self::nth(&self.l_coeffs, 2),
            Self::nth(&self.l_coeffs, 3),
            Self::nth(&self.l_coeffs, 4),
            opt(&self.class_number),
            opt(&self.exponent),
            self.gon.map(|v| v.to_string()).unwrap_or_default(),
            opt(&self.bound_thm42_exact),
            opt(&self.bound_thm42_safe),
            opt(&self.nm_inputs),
            opt(&self.nm_value),
            self.nonfibral_k.map(|v| v.to_string()).unwrap_or_default(),
            opt(&self.nonfibral_bound),
            self.nonfibral_count
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.pass_all.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverRow {
    pub cover_id: String,
    pub p: u64,
    pub n: usize,
    #[serde(rename = "F_coeffs")]
    pub f_coeffs: String,
    pub h1: String,
    pub e_order: u64,
    pub image_order: u64,
    pub quotient_order: u64,
    pub quotient_exponent: u64,
    pub kernel_order: u64,
    pub ramification_points: u64,
    pub part1_exact: String,
    pub part1_safe: String,
    pub part1_pass: bool,
    pub part2_exact: String,
    pub part2_safe: String,
    pub part2_pass: bool,
    pub sharp_exact: String,
    pub sharp_safe: String,
    pub sharp_k: u64,
    pub sharp_pass: bool,
    pub pass_all: bool,
}

impl CoverRow {
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.cover_id.clone(),
            self.p.to_string(),
            self.n.to_string(),
            self.f_coeffs.clone(),
            self.h1.clone(),
            self.e_order.to_string(),
            self.image_order.to_string(),
            self.quotient_order.to_string(),
            self.quotient_exponent.to_string(),
            self.kernel_order.to_string(),
            self.ramification_points.to_string(),
            self.part1_exact.clone(),
            self.part1_safe.clone(),
            self.part1_pass.to_string(),
            self.part2_exact.clone(),
            self.part2_safe.clone(),
            self.part2_pass.to_string(),
            self.sharp_exact.clone(),
            self.sharp_safe.clone(),
            self.sharp_k.to_string(),
            self.sharp_pass.to_string(),
            self.pass_all.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub curves_processed: usize,
    pub rows_with_skips: usize,
    pub violations: usize,
    pub min_exponent: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub seed: u64,
    pub cap: String,
    pub p: u64,
    pub n: usize,
    pub genus: usize,
    pub include_even: bool,
    pub max_curves: Option<usize>,
    pub summary: SweepSummary,
    pub rows: Vec<CurveRow>,
}

/// One field element as text: the residue for prime fields, coefficients
/// joined by underscores above them.
pub fn elem_string(e: &FieldElem) -> String {
    let cs = e.coeffs();
    if cs.len() == 1 {
        cs[0].to_string()
    } else {
        cs.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("_")
    }
}

/// Coefficients low degree first, dot-joined; the zero polynomial is "0".
pub fn coeffs_string(p: &Poly) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    p.coeffs()
        .iter()
        .map(elem_string)
        .collect::<Vec<_>>()
        .join(".")
}

pub fn big_string(v: &BigInt) -> String {
    v.to_string()
}

/// Exact form of a bound: a rational as "a/b" (or a plain integer), an
/// enclosure as "[lo,hi]" with exact dyadic endpoints in rational form.
pub fn exact_string(b: &BoundValue) -> String {
    match &b.exact {
        ExactValue::Rational(r) => r.to_string(),
        ExactValue::Enclosure(iv) => {
            format!("[{},{}]", iv.lo.to_rational(), iv.hi.to_rational())
        }
    }
}

pub fn safe_string(b: &BoundValue) -> String {
    b.safe_lower.to_string()
}

/// CSV artifact: a comment line carrying the schema and seed, the fixed
/// header, then one record per row.
pub fn write_csv<W: Write>(
    mut out: W,
    schema: &str,
    seed: u64,
    cap: u128,
    columns: &[&str],
    records: impl Iterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    writeln!(out, "# {schema} seed={seed} cap={cap}")
        .map_err(|e| CliError::Internal(format!("write failed: {e}")))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)
        .map_err(|e| CliError::Internal(format!("csv write failed: {e}")))?;
    for rec in records {
        w.write_record(&rec)
            .map_err(|e| CliError::Internal(format!("csv write failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| CliError::Internal(format!("csv flush failed: {e}")))?;
    Ok(())
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))
}
