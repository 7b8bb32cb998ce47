//! Corpus enumeration and the sweep driver. Candidate models are streamed
//! in a fixed lexicographic order (lowest-degree coefficient most
//! significant, each coefficient running through the field enumeration
//! order), so reports are reproducible byte for byte; rows are computed in
//! parallel but assembled back in enumeration order.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use picexp_core::curve::HyperellipticCurve;
use picexp_core::ff::{FieldElem, FiniteField};
use picexp_core::poly::PolyRing;
use picexp_core::relative::{build_cover, BiellipticCover};
use picexp_core::Error;
use rayon::prelude::*;

use crate::input::{build_field, FieldSpec};
use crate::pipeline::{curve_row, RowOptions};
use crate::report::{self, CurveRow, SweepReport, SweepSummary, CURVE_COLUMNS};
use crate::CliError;

pub const SWEEP_SCHEMA: &str = "picexp-sweep-v1";

fn field_size_u128(field: &FiniteField) -> Result<u128, CliError> {
    let n = u32::try_from(field.degree())
        .map_err(|_| CliError::Input(String::from("field degree out of range")))?;
    u128::from(field.characteristic())
        .checked_pow(n)
        .ok_or_else(|| CliError::Input(String::from("field too large to enumerate")))
}

/// The idx-th coefficient vector of the given length, counting with the
/// lowest-degree coefficient as the most significant digit.
fn nth_vector(field: &FiniteField, size: u128, len: usize, mut idx: u128) -> Vec<FieldElem> {
    let mut out = vec![field.from_i64(0); len];
    for slot in (0..len).rev() {
        out[slot] = field.element_by_index(idx % size);
        idx /= size;
    }
    out
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub field: FiniteField,
    pub genus: usize,
    pub include_even: bool,
    pub max_curves: Option<usize>,
}

/// All valid curves of the requested genus: monic squarefree f of degree
/// 2g+1 (plus 2g+2 when even models are included), h = 0 in odd
/// characteristic and every admissible h != 0 in characteristic 2. Models
/// are deduplicated by coefficient identity only; isomorphic models are
/// kept as distinct rows on purpose.
pub fn enumerate_corpus(spec: &CorpusSpec) -> Result<Vec<HyperellipticCurve>, CliError> {
    let field = &spec.field;
    let g = spec.genus;
    if g == 0 {
        return Err(CliError::Input(String::from("genus must be at least 1")));
    }
    let size = field_size_u128(field)?;
    let ring = PolyRing::new(field);
    let char2 = field.characteristic() == 2;

    let mut degrees = vec![2 * g + 1];
    if spec.include_even {
        degrees.push(2 * g + 2);
    }

    let mut out = Vec::new();
    'all: for deg in degrees {
        let deg32 = u32::try_from(deg)
            .map_err(|_| CliError::Input(String::from("degree out of range")))?;
        let h_len = deg / 2 + 1;
        let h_total = if char2 {
            size.checked_pow(u32::try_from(h_len).expect("h_len is tiny"))
                .ok_or_else(|| CliError::Input(String::from("h space too large to enumerate")))?
        } else {
            1
        };
        let f_total = size
            .checked_pow(deg32)
            .ok_or_else(|| CliError::Input(String::from("f space too large to enumerate")))?;
        for hi in 0..h_total {
            let h = ring.from_coeffs(&nth_vector(field, size, h_len, hi));
            for fi in 0..f_total {
                let mut f_coeffs = nth_vector(field, size, deg, fi);
                f_coeffs.push(field.from_i64(1));
                let f = ring.from_coeffs(&f_coeffs);
                match HyperellipticCurve::new(field.clone(), h.clone(), f) {
                    Ok(curve) => {
                        if curve.genus() == g {
                            out.push(curve);
                            if spec.max_curves.is_some_and(|m| out.len() >= m) {
                                break 'all;
                            }
                        }
                    }
                    Err(
                        Error::NotSquarefree
                        | Error::SingularModel { .. }
                        | Error::Char2NeedsH
                        | Error::BadDegree { .. },
                    ) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(out)
}

/// The first `limit` valid bielliptic covers over the field, in the same
/// lexicographic coefficient order as the curve corpus. Structural
/// rejections (non-squarefree, root at zero, no square root) are skipped
/// silently; they are not part of the cover corpus.
pub fn enumerate_covers(field: &FiniteField, limit: usize) -> Result<Vec<BiellipticCover>, CliError> {
    let size = field_size_u128(field)?;
    let ring = PolyRing::new(field);
    let total = size
        .checked_pow(3)
        .ok_or_else(|| CliError::Input(String::from("cubic space too large to enumerate")))?;
    let mut out = Vec::new();
    for idx in 0..total {
        if out.len() >= limit {
            break;
        }
        let mut coeffs = nth_vector(field, size, 3, idx);
        coeffs.push(field.from_i64(1));
        let f = ring.from_coeffs(&coeffs);
        match build_cover(field, &f) {
            Ok(cover) => out.push(cover),
            Err(
                Error::NotSquarefree
                | Error::RootAtZero
                | Error::NoSquareRoot
                | Error::BadDegree { .. },
            ) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub p: u64,
    pub n: usize,
    pub genus: usize,
    pub include_even: bool,
    pub max_curves: Option<usize>,
    pub cap: u128,
    pub seed: u64,
    pub prec: u32,
    pub output_dir: PathBuf,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub report: SweepReport,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
}

pub fn summarize(rows: &[CurveRow]) -> SweepSummary {
    let violations = rows.iter().filter(|r| !r.pass_all).count();
    let rows_with_skips = rows.iter().filter(|r| !r.skipped.is_empty()).count();
    let min_exponent = rows
        .iter()
        .filter_map(|r| r.exponent.as_ref())
        .filter_map(|s| s.parse::<BigInt>().ok())
        .min()
        .map(|v| v.to_string());
    SweepSummary {
        curves_processed: rows.len(),
        rows_with_skips,
        violations,
        min_exponent,
    }
}

/// Rows are produced in parallel and reassembled in enumeration order, so
/// the artifacts are independent of scheduling. All timing and progress
/// chatter goes to stderr; the files carry only the data.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, CliError> {
    let field = build_field(&FieldSpec {
        p: spec.p,
        n: spec.n,
        modulus: None,
    })?;
    let corpus = enumerate_corpus(&CorpusSpec {
        field,
        genus: spec.genus,
        include_even: spec.include_even,
        max_curves: spec.max_curves,
    })?;
    let opts = RowOptions {
        cap: spec.cap,
        prec: spec.prec,
    };
    let rows = corpus
        .par_iter()
        .map(|curve| curve_row(curve, &opts))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let report = SweepReport {
        schema: SWEEP_SCHEMA,
        seed: spec.seed,
        cap: spec.cap.to_string(),
        p: spec.p,
        n: spec.n,
        genus: spec.genus,
        include_even: spec.include_even,
        max_curves: spec.max_curves,
        summary: summarize(&rows),
        rows,
    };

    fs::create_dir_all(&spec.output_dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", spec.output_dir.display())))?;
    let csv_path = spec.output_dir.join("sweep.csv");
    let json_path = spec.output_dir.join("sweep.json");
    write_csv_file(&csv_path, spec.seed, spec.cap, &report.rows)?;
    let mut json = report::to_json_pretty(&report)?;
    json.push('\n');
    fs::write(&json_path, json).map_err(|e| CliError::Input(format!("{}: {e}", json_path.display())))?;

    Ok(SweepOutcome {
        report,
        csv_path,
        json_path,
    })
}

fn write_csv_file(path: &Path, seed: u64, cap: u128, rows: &[CurveRow]) -> Result<(), CliError> {
    let file =
        fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    report::write_csv(
        file,
        SWEEP_SCHEMA,
        seed,
        cap,
        &CURVE_COLUMNS,
        rows.iter().map(|r| r.csv_record()),
    )
}
