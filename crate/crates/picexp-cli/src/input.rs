//! JSON input files: field specs, curve models, and covers. Parse failures
//! name the offending field so batch scripts can diagnose inputs.

use std::path::Path;

use picexp_core::curve::HyperellipticCurve;
use picexp_core::ff::FiniteField;
use picexp_core::poly::{Poly, PolyRing};
use picexp_core::relative::{build_cover, BiellipticCover};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "default_degree")]
    pub n: usize,
    /// Coefficients of the defining polynomial, low degree first; omitted
    /// means the deterministic lexicographically smallest choice.
    #[serde(default)]
    pub modulus: Option<Vec<u64>>,
}

fn default_degree() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub field: FieldSpec,
    #[serde(default)]
    pub h: Vec<i64>,
    pub f: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub field: FieldSpec,
    #[serde(rename = "F")]
    pub f_cubic: Vec<i64>,
}

/// What a verify input turned out to hold.
pub enum VerifyInput {
    Curve(HyperellipticCurve),
    Cover(BiellipticCover),
}

pub fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn build_field(spec: &FieldSpec) -> Result<FiniteField, CliError> {
    if spec.n == 0 {
        return Err(CliError::Input(String::from(
            "field.n: extension degree must be at least 1",
        )));
    }
    match &spec.modulus {
        None => {
            if spec.n == 1 {
                FiniteField::prime(spec.p).map_err(|e| CliError::Input(format!("field.p: {e}")))
            } else {
                FiniteField::extension(spec.p, spec.n)
                    .map_err(|e| CliError::Input(format!("field.p/field.n: {e}")))
            }
        }
        Some(coeffs) => {
            let field = FiniteField::with_modulus(spec.p, coeffs.clone())
                .map_err(|e| CliError::Input(format!("field.modulus: {e}")))?;
            if field.degree() != spec.n {
                return Err(CliError::Input(format!(
                    "field.modulus: degree {} does not match n = {}",
                    field.degree(),
                    spec.n
                )));
            }
            Ok(field)
        }
    }
}

pub fn build_curve(file: &CurveFile) -> Result<HyperellipticCurve, CliError> {
    let field = build_field(&file.field)?;
    let ring = PolyRing::new(&field);
    let h = ring.from_int_coeffs(&file.h);
    let f = ring.from_int_coeffs(&file.f);
    HyperellipticCurve::new(field, h, f).map_err(|e| CliError::Input(format!("f/h: {e}")))
}

pub fn build_cover_file(file: &CoverFile) -> Result<BiellipticCover, CliError> {
    let field = build_field(&file.field)?;
    let ring = PolyRing::new(&field);
    let f: Poly = ring.from_int_coeffs(&file.f_cubic);
    build_cover(&field, &f).map_err(|e| CliError::Input(format!("F: {e}")))
}

pub fn parse_curve_file(path: &Path) -> Result<HyperellipticCurve, CliError> {
    let value = read_json(path)?;
    let file: CurveFile = serde_json::from_value(value)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    build_curve(&file)
}

pub fn parse_cover_file(path: &Path) -> Result<BiellipticCover, CliError> {
    let value = read_json(path)?;
    let file: CoverFile = serde_json::from_value(value)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    build_cover_file(&file)
}

/// Dispatches on the file shape: an "F" key means a cover, otherwise the
/// file must be a curve model.
pub fn parse_verify_file(path: &Path) -> Result<VerifyInput, CliError> {
    let value = read_json(path)?;
    let is_cover = value
        .as_object()
        .is_some_and(|m| m.contains_key("F"));
    if is_cover {
        let file: CoverFile = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(VerifyInput::Cover(build_cover_file(&file)?))
    } else {
        let file: CurveFile = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(VerifyInput::Curve(build_curve(&file)?))
    }
}
