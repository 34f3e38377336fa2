//! JSON function and atomic-data files, and CSV export of norm rows.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::kernels::AtomicData;
use crate::multi::{MultiMonomial, MultiPolynomial};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON in {origin}: {source}")]
    Json {
        origin: String,
        source: serde_json::Error,
    },
    #[error("invalid content in {origin}: {message}")]
    Content { origin: String, message: String },
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

/// A function file: a one-variable series or a several-variable polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Series(SliceSeries),
    Multi(MultiPolynomial),
}

#[derive(Debug, Serialize, Deserialize)]
struct RawFunctionFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<Quaternion>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monomials: Option<Vec<MultiMonomial>>,
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn content(origin: &str, message: impl Into<String>) -> FormatError {
    FormatError::Content {
        origin: origin.to_string(),
        message: message.into(),
    }
}

pub fn parse_function(text: &str, origin: &str) -> Result<FunctionSpec, FormatError> {
    let raw: RawFunctionFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        origin: origin.to_string(),
        source,
    })?;
    match (raw.coeffs, raw.monomials) {
        (Some(coeffs), None) => {
            if raw.n != 1 {
                return Err(content(origin, format!("\"coeffs\" needs n = 1, got n = {}", raw.n)));
            }
            if coeffs.is_empty() {
                return Err(content(origin, "\"coeffs\" is empty"));
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(content(origin, "non-finite coefficient"));
            }
            let series = SliceSeries::new(coeffs)
                .with_radius(raw.radius.unwrap_or(1.0))
                .map_err(|e| content(origin, e.to_string()))?;
            Ok(FunctionSpec::Series(series))
        }
        (None, Some(monomials)) => MultiPolynomial::new(raw.n, monomials)
            .map(FunctionSpec::Multi)
            .map_err(|e| content(origin, e.to_string())),
        _ => Err(content(origin, "expected exactly one of \"coeffs\" or \"monomials\"")),
    }
}

pub fn read_function(path: &Path) -> Result<FunctionSpec, FormatError> {
    parse_function(&read_text(path)?, &path.display().to_string())
}

pub fn series_to_json(f: &SliceSeries) -> String {
    let raw = RawFunctionFile {
        n: 1,
        radius: Some(f.nominal_radius()),
        coeffs: Some(f.coeffs().to_vec()),
        monomials: None,
    };
    serde_json::to_string_pretty(&raw).expect("series serializes")
}

pub fn multi_to_json(f: &MultiPolynomial) -> String {
    let raw = RawFunctionFile {
        n: f.dim(),
        radius: None,
        coeffs: None,
        monomials: Some(f.terms().to_vec()),
    };
    serde_json::to_string_pretty(&raw).expect("polynomial serializes")
}

/// Atomic-data file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicFile {
    pub alpha: f64,
    #[serde(rename = "N")]
    pub trunc_degree: usize,
    pub slice: ImaginaryUnit,
    pub points: Vec<Quaternion>,
    pub coeffs: Vec<Quaternion>,
}

impl AtomicFile {
    pub fn to_data(&self) -> crate::Result<AtomicData> {
        AtomicData::new(
            self.points.clone(),
            self.coeffs.clone(),
            self.alpha,
            self.trunc_degree,
        )
    }
}

pub fn parse_atomic(text: &str, origin: &str) -> Result<AtomicFile, FormatError> {
    let file: AtomicFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        origin: origin.to_string(),
        source,
    })?;
    file.to_data().map_err(|e| content(origin, e.to_string()))?;
    Ok(file)
}

pub fn read_atomic(path: &Path) -> Result<AtomicFile, FormatError> {
    parse_atomic(&read_text(path)?, &path.display().to_string())
}

/// One row of a norm table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    #[serde(rename = "function-id")]
    pub function_id: String,
    #[serde(serialize_with = "p_as_text")]
    pub p: f64,
    pub alpha: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub value: f64,
}

fn p_as_text<S: serde::Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

pub fn write_norm_csv<W: Write>(out: W, rows: &[NormRow]) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| FormatError::Csv(e.into()))?;
    Ok(())
}
