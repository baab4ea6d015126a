//! JSON file formats for pencils, ABPs, conversion reports and verdicts.
//!
//! Scalars are decimal strings (`"num/den"` for non-integral rationals),
//! variable indices are 0-based, and every document is written with a fixed
//! key order so that identical inputs give byte-identical files.
//!
//! Transition matrices are written densely (`[[linform, ..], ..]`) unless
//! they are large and mostly empty, in which case the sparse form
//! `{"rows": r, "cols": c, "entries": [{"row": i, "col": j, "form": linform}]}`
//! is used. The reader accepts either form anywhere a matrix is expected.

use std::collections::BTreeMap;
use std::path::Path;

use detabp_core::abp::HomogenizeReport;
use detabp_core::convert::ConversionReport;
use detabp_core::verify::Verdict;
use detabp_core::{Abp, AlgebraError, FieldSpec, FormMatrix, LinearForm, Pencil, Scalar, Transition};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Matrices with more cells than this are candidates for the sparse form.
const SPARSE_MIN_CELLS: usize = 1024;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid field: {0}")]
    Field(String),
    #[error("invalid document: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pencil(#[from] detabp_core::PencilError),
    #[error(transparent)]
    Abp(#[from] detabp_core::AbpError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldJson {
    Rational,
    Prime { p: String },
}

impl FieldJson {
    pub fn from_spec(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rational => FieldJson::Rational,
            FieldSpec::Prime(m) => FieldJson::Prime { p: m.get().to_string() },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec, JsonError> {
        match self {
            FieldJson::Rational => Ok(FieldSpec::Rational),
            FieldJson::Prime { p } => {
                let p: u64 = p.trim().parse().map_err(|_| JsonError::Field(format!("bad modulus {p:?}")))?;
                Ok(FieldSpec::prime(p)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinFormJson {
    #[serde(rename = "const")]
    pub constant: String,
    #[serde(default, deserialize_with = "coeff_keys")]
    pub coeffs: BTreeMap<usize, String>,
}

/// Reads `{"var-index": scalar}` with the keys parsed as integers. Going
/// through string keys keeps this working inside the untagged matrix enum,
/// which buffers its input.
fn coeff_keys<'de, D: serde::Deserializer<'de>>(de: D) -> Result<BTreeMap<usize, String>, D::Error> {
    let raw = BTreeMap::<String, String>::deserialize(de)?;
    raw.into_iter()
        .map(|(k, v)| {
            let i = k.trim().parse().map_err(|_| serde::de::Error::custom(format!("bad variable index {k:?}")))?;
            Ok((i, v))
        })
        .collect()
}

impl LinFormJson {
    pub fn from_form(l: &LinearForm) -> Self {
        LinFormJson {
            constant: l.constant().to_string(),
            coeffs: l.coeffs().iter().map(|(i, c)| (*i, c.to_string())).collect(),
        }
    }

    pub fn to_form(&self, nvars: usize, field: FieldSpec) -> Result<LinearForm, JsonError> {
        let constant = field.parse(&self.constant)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(i, c)| Ok((*i, field.parse(c)?)))
            .collect::<Result<Vec<(usize, Scalar)>, AlgebraError>>()?;
        Ok(LinearForm::new(nvars, constant, coeffs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntryJson {
    pub row: usize,
    pub col: usize,
    pub form: LinFormJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Dense(Vec<Vec<LinFormJson>>),
    Sparse { rows: usize, cols: usize, entries: Vec<SparseEntryJson> },
}

impl MatrixJson {
    fn from_transition(t: &Transition, nvars: usize, field: FieldSpec) -> Self {
        let cells = t.rows() * t.cols();
        if cells > SPARSE_MIN_CELLS && t.nnz() * 4 < cells {
            let entries = t
                .iter()
                .map(|(row, col, f)| SparseEntryJson { row, col, form: LinFormJson::from_form(f) })
                .collect();
            return MatrixJson::Sparse { rows: t.rows(), cols: t.cols(), entries };
        }
        let zero = LinFormJson::from_form(&LinearForm::zero(nvars, field));
        MatrixJson::Dense(
            (0..t.rows())
                .map(|i| {
                    (0..t.cols()).map(|j| t.get(i, j).map_or_else(|| zero.clone(), LinFormJson::from_form)).collect()
                })
                .collect(),
        )
    }

    fn to_transition(&self, nvars: usize, field: FieldSpec, rows: usize) -> Result<Transition, JsonError> {
        match self {
            MatrixJson::Dense(body) => {
                if body.len() != rows {
                    return Err(JsonError::Shape(format!("matrix has {} rows, expected {rows}", body.len())));
                }
                let cols = body.first().map_or(0, Vec::len);
                let mut t = Transition::new(rows, cols);
                for (i, row) in body.iter().enumerate() {
                    if row.len() != cols {
                        return Err(JsonError::Shape("ragged matrix".into()));
                    }
                    for (j, f) in row.iter().enumerate() {
                        t.set(i, j, f.to_form(nvars, field)?);
                    }
                }
                Ok(t)
            }
            MatrixJson::Sparse { rows: r, cols, entries } => {
                if *r != rows {
                    return Err(JsonError::Shape(format!("matrix has {r} rows, expected {rows}")));
                }
                let mut t = Transition::new(rows, *cols);
                for e in entries {
                    if e.row >= rows || e.col >= *cols {
                        return Err(JsonError::Shape(format!("entry ({}, {}) outside {rows}x{cols}", e.row, e.col)));
                    }
                    t.accumulate(e.row, e.col, &e.form.to_form(nvars, field)?);
                }
                Ok(t)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilJson {
    pub s: usize,
    pub nvars: usize,
    pub field: FieldJson,
    pub entries: MatrixJson,
}

impl PencilJson {
    pub fn from_pencil(p: &Pencil) -> Self {
        let s = p.size();
        PencilJson {
            s,
            nvars: p.nvars(),
            field: FieldJson::from_spec(p.field()),
            entries: MatrixJson::Dense(
                (0..s).map(|i| (0..s).map(|j| LinFormJson::from_form(p.entry(i, j))).collect()).collect(),
            ),
        }
    }

    pub fn to_pencil(&self) -> Result<Pencil, JsonError> {
        let field = self.field.to_spec()?;
        let t = self.entries.to_transition(self.nvars, field, self.s)?;
        if t.cols() != self.s {
            return Err(JsonError::Shape(format!("pencil has {} columns, expected {}", t.cols(), self.s)));
        }
        let m: FormMatrix = t.to_dense(self.nvars, field);
        Ok(Pencil::from_matrix(self.nvars, field, m)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbpJson {
    pub nvars: usize,
    pub field: FieldJson,
    pub widths: Vec<usize>,
    pub b: Vec<LinFormJson>,
    pub c: Vec<LinFormJson>,
    pub mats: Vec<MatrixJson>,
}

impl AbpJson {
    pub fn from_abp(a: &Abp) -> Self {
        let (nvars, field) = (a.nvars(), a.field());
        AbpJson {
            nvars,
            field: FieldJson::from_spec(field),
            widths: a.widths(),
            b: a.b().iter().map(LinFormJson::from_form).collect(),
            c: a.c().iter().map(LinFormJson::from_form).collect(),
            mats: a.mats().iter().map(|m| MatrixJson::from_transition(m, nvars, field)).collect(),
        }
    }

    pub fn to_abp(&self) -> Result<Abp, JsonError> {
        let field = self.field.to_spec()?;
        if self.widths.len() != self.mats.len() + 1 {
            return Err(JsonError::Shape(format!(
                "{} widths for {} transition matrices",
                self.widths.len(),
                self.mats.len()
            )));
        }
        let forms = |v: &[LinFormJson]| v.iter().map(|f| f.to_form(self.nvars, field)).collect::<Result<Vec<_>, _>>();
        let b = forms(&self.b)?;
        let c = forms(&self.c)?;
        let mats = self
            .mats
            .iter()
            .zip(&self.widths)
            .map(|(m, &rows)| m.to_transition(self.nvars, field, rows))
            .collect::<Result<Vec<_>, _>>()?;
        let abp = Abp::new(self.nvars, field, b, mats, c)?;
        if abp.widths() != self.widths {
            return Err(JsonError::Shape(format!("declared widths {:?}, found {:?}", self.widths, abp.widths())));
        }
        Ok(abp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogenizeJson {
    pub degree: usize,
    pub input_size: usize,
    pub input_width: usize,
    pub split_size: usize,
    pub split_width: usize,
    pub size_bound: usize,
    pub width_bound: usize,
    pub out_size: usize,
    pub out_width: usize,
    pub within_bounds: bool,
}

impl From<&HomogenizeReport> for HomogenizeJson {
    fn from(h: &HomogenizeReport) -> Self {
        HomogenizeJson {
            degree: h.degree,
            input_size: h.input_size,
            input_width: h.input_width,
            split_size: h.split_size,
            split_width: h.split_width,
            size_bound: h.size_bound,
            width_bound: h.width_bound,
            out_size: h.out_size,
            out_width: h.out_width,
            within_bounds: h.within_bounds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub path: String,
    pub s: usize,
    pub d: usize,
    pub r: usize,
    pub out_size: usize,
    pub out_width: usize,
    pub out_layers: usize,
    pub bound_size: u128,
    pub bound_width: Option<usize>,
    pub bound_size_r: u128,
    pub c: u64,
    pub c_prime: u64,
    /// `out_size / (d^5 s)` to six decimals.
    pub ratio: String,
    pub within_bounds: bool,
    pub truncation: Option<usize>,
    pub substituted_size: Option<usize>,
    pub substituted_width: Option<usize>,
    pub homogenization: Option<HomogenizeJson>,
}

impl From<&ConversionReport> for ReportJson {
    fn from(r: &ConversionReport) -> Self {
        ReportJson {
            path: r.path.as_str().to_string(),
            s: r.s,
            d: r.d,
            r: r.r,
            out_size: r.out_size,
            out_width: r.out_width,
            out_layers: r.out_layers,
            bound_size: r.bound_size,
            bound_width: r.bound_width,
            bound_size_r: r.bound_size_r,
            c: r.c,
            c_prime: r.c_prime,
            ratio: r.ratio_string(),
            within_bounds: r.within_bounds(),
            truncation: r.truncation,
            substituted_size: r.substituted_size,
            substituted_width: r.substituted_width,
            homogenization: r.homogenization.as_ref().map(HomogenizeJson::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub witness: Option<Vec<String>>,
    pub trials: usize,
    pub seed: u64,
    pub per_trial_error_bound: Option<String>,
    /// Component degrees found when homogeneity is refuted.
    pub degrees: Vec<usize>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        VerdictJson {
            verdict: v.kind.as_str().to_string(),
            witness: v.witness.as_ref().map(|w| w.iter().map(Scalar::to_string).collect()),
            trials: v.trials,
            seed: v.seed,
            per_trial_error_bound: v.error_bound.map(|b| b.to_string()),
            degrees: v.degrees.clone(),
        }
    }
}

/// A pencil or an ABP read from disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Pencil(Pencil),
    Abp(Abp),
}

impl Instance {
    pub fn to_json_string(&self) -> String {
        match self {
            Instance::Pencil(p) => to_string(&PencilJson::from_pencil(p)),
            Instance::Abp(a) => to_string(&AbpJson::from_abp(a)),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// Parses a pencil or an ABP, telling them apart by their keys.
pub fn parse_instance(text: &str) -> Result<Instance, JsonError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or_else(|| JsonError::Shape("expected a JSON object".into()))?;
    if obj.contains_key("widths") {
        let a: AbpJson = serde_json::from_value(value)?;
        Ok(Instance::Abp(a.to_abp()?))
    } else if obj.contains_key("entries") {
        let p: PencilJson = serde_json::from_value(value)?;
        Ok(Instance::Pencil(p.to_pencil()?))
    } else {
        Err(JsonError::Shape("neither a pencil (\"entries\") nor an ABP (\"widths\")".into()))
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, JsonError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| JsonError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), JsonError> {
    std::fs::write(path, contents).map_err(|source| JsonError::Io { path: path.display().to_string(), source })
}
