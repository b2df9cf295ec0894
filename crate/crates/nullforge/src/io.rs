//! Deterministic serialization: the matrix JSON format, model specs, bases,
//! spectra, CSV emission, and the golden fixture corpus.
//!
//! Matrix files look like
//!
//! ```json
//! {"rows": 2, "cols": 2, "domain": "rational", "entries": [["1", "1/2"], ["-3", "0"]]}
//! ```
//!
//! Rational entries are `p` or `p/q` strings (always in lowest terms with a
//! positive denominator on output); float entries are JSON numbers in the
//! shortest decimal form that parses back to the same double, so round-trips
//! are bit-exact in both domains.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::Profile;
use crate::matrix::{DenseMatrix, Domain, NullBasis, Spectrum, Vector, DEFAULT_RANK_TOL};
use crate::models::{self, GfSpec, ModelSpec};
use crate::transform::{self, SEPARABILITY_TOL};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {detail}")]
    Schema { path: String, detail: String },
}

fn schema(path: &str, detail: impl Into<String>) -> IoError {
    IoError::Schema { path: path.into(), detail: detail.into() }
}

// ---------------------------------------------------------------------------
// Matrix files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    domain: Domain,
    entries: Vec<Vec<Value>>,
}

fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((num, den)) => {
            let (n, d) = (BigInt::from_str(num.trim()).ok()?, BigInt::from_str(den.trim()).ok()?);
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

/// Encodes a matrix as its JSON file representation.
pub fn matrix_to_json(m: &DenseMatrix) -> Value {
    let entries: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| match m.domain() {
                    Domain::Rational => Value::String(rational_string(m.get_rational(i, j).unwrap())),
                    Domain::Float => json!(m.get_float(i, j)),
                })
                .collect()
        })
        .collect();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "domain": m.domain(),
        "entries": entries,
    })
}

/// Decodes the matrix JSON representation, naming the offending entry on any
/// schema violation. `ctx` labels errors (usually the file path).
pub fn matrix_from_json(v: &Value, ctx: &str) -> Result<DenseMatrix, IoError> {
    let file: MatrixFile = serde_json::from_value(v.clone())
        .map_err(|e| IoError::Json { path: ctx.into(), source: e })?;
    if file.entries.len() != file.rows {
        return Err(schema(ctx, format!("expected {} rows, found {}", file.rows, file.entries.len())));
    }
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(schema(ctx, format!("row {} has {} entries, expected {}", i, row.len(), file.cols)));
        }
    }
    match file.domain {
        Domain::Rational => {
            let mut entries = Vec::with_capacity(file.rows * file.cols);
            for (i, row) in file.entries.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    entries.push(rational_entry(cell).ok_or_else(|| {
                        schema(ctx, format!("entry ({i}, {j}) is not a rational: {cell}"))
                    })?);
                }
            }
            DenseMatrix::from_rational(file.rows, file.cols, entries)
                .map_err(|e| schema(ctx, e.to_string()))
        }
        Domain::Float => {
            let mut entries = Vec::with_capacity(file.rows * file.cols);
            for (i, row) in file.entries.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    entries.push(float_entry(cell).ok_or_else(|| {
                        schema(ctx, format!("entry ({i}, {j}) is not a finite float: {cell}"))
                    })?);
                }
            }
            DenseMatrix::from_float(file.rows, file.cols, entries)
                .map_err(|e| schema(ctx, e.to_string()))
        }
    }
}

fn rational_entry(cell: &Value) -> Option<BigRational> {
    match cell {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(|k| BigRational::from_integer(k.into())),
        _ => None,
    }
}

fn float_entry(cell: &Value) -> Option<f64> {
    let v = match cell {
        Value::Number(n) => n.as_f64()?,
        Value::String(s) => s.trim().parse().ok()?,
        _ => return None,
    };
    v.is_finite().then_some(v)
}

pub fn write_matrix(m: &DenseMatrix, path: &Path) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(&matrix_to_json(m)).expect("value serializes");
    fs::write(path, text + "\n").map_err(|e| IoError::File { path: path.display().to_string(), source: e })
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix, IoError> {
    let ctx = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| IoError::File { path: ctx.clone(), source: e })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| IoError::Json { path: ctx.clone(), source: e })?;
    matrix_from_json(&v, &ctx)
}

pub fn read_model_spec(path: &Path) -> Result<ModelSpec, IoError> {
    let ctx = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| IoError::File { path: ctx.clone(), source: e })?;
    serde_json::from_str(&text).map_err(|e| IoError::Json { path: ctx, source: e })
}

// ---------------------------------------------------------------------------
// Bases, spectra, vectors
// ---------------------------------------------------------------------------

fn vector_to_json(v: &Vector) -> Value {
    match v {
        Vector::Rational(xs) => Value::Array(xs.iter().map(|x| Value::String(rational_string(x))).collect()),
        Vector::Float(xs) => Value::Array(xs.iter().map(|x| json!(x)).collect()),
    }
}

/// Decodes a vector, exact when every entry is a rational string or integer.
pub fn vector_from_json(v: &Value, ctx: &str) -> Result<Vector, IoError> {
    let arr = v.as_array().ok_or_else(|| schema(ctx, "vector must be an array"))?;
    let rational: Option<Vec<BigRational>> = arr.iter().map(rational_entry).collect();
    if let Some(xs) = rational {
        return Ok(Vector::Rational(xs));
    }
    let float: Option<Vec<f64>> = arr.iter().map(float_entry).collect();
    float
        .map(Vector::Float)
        .ok_or_else(|| schema(ctx, format!("vector entries are neither rational nor float: {v}")))
}

pub fn basis_to_json(b: &NullBasis) -> Value {
    json!({
        "domain": b.domain().map(|d| d.to_string()),
        "normalized": b.normalized(),
        "vectors": b.vectors().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

pub fn basis_from_json(v: &Value, ctx: &str) -> Result<NullBasis, IoError> {
    let normalized = v
        .get("normalized")
        .and_then(Value::as_bool)
        .ok_or_else(|| schema(ctx, "basis needs a boolean `normalized`"))?;
    let rows = v
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| schema(ctx, "basis needs a `vectors` array"))?;
    let force_float = v.get("domain").and_then(Value::as_str) == Some("float");
    let vectors = rows
        .iter()
        .map(|row| {
            let parsed = vector_from_json(row, ctx)?;
            Ok(match (&parsed, force_float) {
                (Vector::Rational(_), true) => Vector::Float(parsed.to_float()),
                _ => parsed,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(NullBasis::new(vectors, normalized))
}

pub fn spectrum_to_json(s: &Spectrum) -> Value {
    json!({
        "kind": s.kind(),
        "values": s.values(),
        "gaps": s.gaps(),
    })
}

pub fn spectrum_from_json(v: &Value, ctx: &str) -> Result<Spectrum, IoError> {
    let kind: crate::matrix::SpectrumKind = serde_json::from_value(
        v.get("kind").cloned().ok_or_else(|| schema(ctx, "spectrum needs a `kind`"))?,
    )
    .map_err(|e| IoError::Json { path: ctx.into(), source: e })?;
    let values: Vec<f64> = serde_json::from_value(
        v.get("values").cloned().ok_or_else(|| schema(ctx, "spectrum needs `values`"))?,
    )
    .map_err(|e| IoError::Json { path: ctx.into(), source: e })?;
    if values.iter().any(|x| !x.is_finite()) {
        return Err(schema(ctx, "spectrum values must be finite"));
    }
    Ok(Spectrum::new(values, kind))
}

// ---------------------------------------------------------------------------
// CSV emission (header row, LF line endings)
// ---------------------------------------------------------------------------

/// Two-column site/amplitude layout.
pub fn profile_csv(p: &Profile) -> String {
    let mut out = String::from("site,amplitude\n");
    for (site, amp) in p.site.iter().zip(&p.amplitude) {
        let _ = writeln!(out, "{site},{amp}");
    }
    out
}

/// Three-column mode/site/amplitude layout for a set of modes.
pub fn modes_csv(profiles: &[Profile]) -> String {
    let mut out = String::from("mode,site,amplitude\n");
    for (m, p) in profiles.iter().enumerate() {
        for (site, amp) in p.site.iter().zip(&p.amplitude) {
            let _ = writeln!(out, "{},{site},{amp}", m + 1);
        }
    }
    out
}

/// Three-column k/mass/gap layout; the last row has no gap.
pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("k,value,gap\n");
    for (k, v) in s.values().iter().enumerate() {
        match s.gaps().get(k) {
            Some(g) => {
                let _ = writeln!(out, "{},{v},{g}", k + 1);
            }
            None => {
                let _ = writeln!(out, "{},{v},", k + 1);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Golden fixtures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Copied from a published closed-form or worked example.
    Paper,
    /// Elementary (identities, zero matrices, direct arithmetic).
    Trivial,
    /// Computed by an independent oracle named in the citation.
    Derived,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum FixtureInput {
    #[serde(rename = "matrix")]
    Matrix(Value),
    #[serde(rename = "model")]
    Model(ModelSpec),
}

/// Expected values; every present field is one check. Float comparisons use
/// `tol` (default 1e-9).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nullity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nullity_after: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separable: Option<bool>,
    /// Entrywise match of the transformed matrix (exact in the rational domain).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Value>,
    /// Exact null basis of the (transformed) matrix in the reduced-echelon
    /// gauge; order matters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_basis: Option<Vec<Value>>,
    /// A kernel vector of the (transformed) matrix, up to scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_mode_up_to_scale: Option<Value>,
    /// A kernel vector of the transpose, up to scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_mode_up_to_scale: Option<Value>,
    /// Ascending singular values, within `tol * sigma_max`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
    /// Diagonal of the similarity matrix, up to one overall scale; also
    /// verifies the conjugation identity entrywise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_diag_up_to_scale: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub provenance: Provenance,
    /// Required when provenance is `paper`; names the formula or worked
    /// example (or the oracle, for `derived`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    pub input: FixtureInput,
    /// Transform applied to the input before the `_after` checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gf: Option<GfSpec>,
    pub expected: Expected,
}

/// Loads every `*.json` fixture in `dir`, sorted by file name. Any unreadable
/// or invalid fixture aborts with its file name.
pub fn load_fixture_suite(dir: &Path) -> Result<Vec<Fixture>, IoError> {
    let ctx = dir.display().to_string();
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| IoError::File { path: ctx.clone(), source: e })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut fixtures = Vec::new();
    for path in paths {
        let fctx = path.display().to_string();
        let text = fs::read_to_string(&path).map_err(|e| IoError::File { path: fctx.clone(), source: e })?;
        let fixture: Fixture =
            serde_json::from_str(&text).map_err(|e| IoError::Json { path: fctx.clone(), source: e })?;
        if fixture.provenance == Provenance::Paper && fixture.citation.is_none() {
            return Err(schema(&fctx, "provenance \"paper\" requires a citation field"));
        }
        fixtures.push(fixture);
    }
    Ok(fixtures)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub what: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn rank_tol(m: &DenseMatrix) -> f64 {
    match m.domain() {
        Domain::Rational => 0.0,
        Domain::Float => DEFAULT_RANK_TOL,
    }
}

/// Runs every check a fixture declares.
pub fn run_fixture(f: &Fixture) -> FixtureOutcome {
    let mut checks = Vec::new();
    match run_fixture_inner(f, &mut checks) {
        Ok(()) => {}
        Err(e) => checks.push(CheckResult { what: "setup".into(), passed: false, detail: e }),
    }
    FixtureOutcome { name: f.name.clone(), passed: checks.iter().all(|c| c.passed), checks }
}

fn run_fixture_inner(f: &Fixture, checks: &mut Vec<CheckResult>) -> Result<(), String> {
    let ctx = format!("fixture {}", f.name);
    let tol = f.expected.tol.unwrap_or(1e-9);
    let base = match &f.input {
        FixtureInput::Matrix(v) => matrix_from_json(v, &ctx).map_err(|e| e.to_string())?,
        FixtureInput::Model(spec) => models::build(spec).map_err(|e| e.to_string())?,
    };
    let tf = match &f.gf {
        None => None,
        Some(gf) => Some((gf.to_transform().map_err(|e| e.to_string())?, gf.mode)),
    };
    let transformed = match &tf {
        None => base.clone(),
        Some((g, mode)) => {
            transform::apply_transform_promoting(&base, g, *mode).map_err(|e| e.to_string())?
        }
    };
    let mut push = |what: &str, passed: bool, detail: String| {
        checks.push(CheckResult { what: what.into(), passed, detail });
    };

    if let Some(want) = f.expected.rank {
        let got = base.rank(rank_tol(&base));
        push("rank", got == want, format!("got {got}, want {want}"));
    }
    if let Some(want) = f.expected.nullity {
        let got = base.nullity(rank_tol(&base));
        push("nullity", got == want, format!("got {got}, want {want}"));
    }
    if let Some(want) = f.expected.nullity_after {
        let got = transformed.nullity(rank_tol(&transformed));
        push("nullity_after", got == want, format!("got {got}, want {want}"));
    }
    if let Some(want) = f.expected.separable {
        match &tf {
            None => push("separable", false, "no gf on fixture".into()),
            Some((g, _)) => {
                match transform::is_separable(g, base.rows(), base.cols(), SEPARABILITY_TOL) {
                    Ok(rep) => push(
                        "separable",
                        rep.separable == want,
                        format!("got {}, want {want}, witness {:?}", rep.separable, rep.witness),
                    ),
                    Err(e) => push("separable", false, e.to_string()),
                }
            }
        }
    }
    if let Some(want_json) = &f.expected.matrix {
        match matrix_from_json(want_json, &ctx) {
            Err(e) => push("matrix", false, e.to_string()),
            Ok(want) => {
                let (passed, detail) = matrices_match(&transformed, &want, tol);
                push("matrix", passed, detail);
            }
        }
    }
    if let Some(want_rows) = &f.expected.null_basis {
        let want: Result<Vec<Vector>, _> = want_rows.iter().map(|v| vector_from_json(v, &ctx)).collect();
        match want {
            Err(e) => push("null_basis", false, e.to_string()),
            Ok(want) => {
                let got = transformed.null_basis(rank_tol(&transformed));
                let pass = got.vectors() == want.as_slice();
                push(
                    "null_basis",
                    pass,
                    if pass { "exact match".into() } else { format!("got {:?}", got.vectors()) },
                );
            }
        }
    }
    if let Some(v) = &f.expected.zero_mode_up_to_scale {
        let want = vector_from_json(v, &ctx).map_err(|e| e.to_string())?;
        let (passed, detail) = mode_in_kernel(&transformed, &want, tol);
        push("zero_mode_up_to_scale", passed, detail);
    }
    if let Some(v) = &f.expected.left_mode_up_to_scale {
        let want = vector_from_json(v, &ctx).map_err(|e| e.to_string())?;
        let (passed, detail) = mode_in_kernel(&transformed.transpose(), &want, tol);
        push("left_mode_up_to_scale", passed, detail);
    }
    if let Some(want) = &f.expected.singular_values {
        let got = transformed.singular_values();
        let smax = got.values().last().copied().unwrap_or(0.0).max(1e-300);
        let ok = got.len() == want.len()
            && got.values().iter().zip(want).all(|(g, w)| (g - w).abs() <= tol * smax);
        push("singular_values", ok, format!("got {:?}", got.values()));
    }
    if let Some(want) = &f.expected.similarity_diag_up_to_scale {
        match &tf {
            None => push("similarity_diag", false, "no gf on fixture".into()),
            Some((g, mode)) => match transform::similarity_matrix(g, base.rows()) {
                Err(e) => push("similarity_diag", false, e.to_string()),
                Ok(p) => {
                    let got: Vec<f64> = (0..p.rows()).map(|k| p.get_float(k, k)).collect();
                    let prop = Vector::Float(got.clone())
                        .proportional_to(&Vector::Float(want.clone()), tol);
                    let conj = transform::verify_similarity(&base, g, *mode)
                        .map(|r| r.max_rel_err <= tol)
                        .unwrap_or(false);
                    push(
                        "similarity_diag",
                        prop && conj,
                        format!("diag {got:?}, proportional {prop}, conjugation ok {conj}"),
                    );
                }
            },
        }
    }
    Ok(())
}

fn matrices_match(got: &DenseMatrix, want: &DenseMatrix, tol: f64) -> (bool, String) {
    if got.rows() != want.rows() || got.cols() != want.cols() {
        return (false, format!("shape {}x{} vs {}x{}", got.rows(), got.cols(), want.rows(), want.cols()));
    }
    if got.domain() == Domain::Rational && want.domain() == Domain::Rational {
        return (got == want, "exact comparison".into());
    }
    let scale = want.max_abs_entry().max(1.0);
    for i in 0..got.rows() {
        for j in 0..got.cols() {
            let d = (got.get_float(i, j) - want.get_float(i, j)).abs();
            if d > tol * scale {
                return (false, format!("entry ({i}, {j}) differs by {d}"));
            }
        }
    }
    (true, "entrywise within tolerance".into())
}

/// The expected mode must annihilate the matrix and lie in the span of the
/// computed kernel.
fn mode_in_kernel(m: &DenseMatrix, want: &Vector, tol: f64) -> (bool, String) {
    if want.len() != m.cols() {
        return (false, format!("mode length {} vs {} columns", want.len(), m.cols()));
    }
    let residual = m.matvec(want).max_abs();
    let scale = m.max_abs_entry() * want.max_abs();
    let annihilates = match (m.domain(), want) {
        (Domain::Rational, Vector::Rational(_)) => m.matvec(want).is_zero(),
        _ => residual <= tol * scale.max(1e-300),
    };
    let kernel = m.null_basis(rank_tol(m));
    let in_span = if kernel.is_empty() {
        false
    } else {
        // Adding the expected vector to the kernel basis must not raise the rank.
        let mut vectors = kernel.vectors().to_vec();
        vectors.push(want.clone());
        let with = NullBasis::new(vectors, false).stack().unwrap();
        let without = kernel.stack().unwrap();
        let rank_of = |m: &DenseMatrix| {
            m.rank(if m.domain() == Domain::Rational { 0.0 } else { tol })
        };
        rank_of(&with) == rank_of(&without)
    };
    (
        annihilates && in_span,
        format!("residual {residual:.3e}, in kernel span: {in_span}"),
    )
}
