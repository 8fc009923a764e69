//! JSON file formats for algebras, representations and cochains, and the
//! builtin algebra names `r3:A=<matrix>`, `gl2:theta=p/q`, `gl4:theta=p/q`
//! and `se4:theta=p/q`.
//!
//! Scalars are written as `"p/q"` strings (rational), `{"a": "p/q", "b":
//! "p/q"}` objects meaning `a + b·√(1+θ²)` (quadratic) or plain numbers
//! (float). The discriminant is carried once, in the algebra's backend.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::HomAlgebra;
use crate::cohomology::Cochain;
use crate::constructions::{alpha_theta, block_diagonal, build_gl_alpha, build_r3_cross, build_semi_euclidean, theta_discriminant, GlContext};
use crate::linalg::{vec_is_zero, vec_neg, Matrix};
use crate::representation::Representation;
use crate::scalar::{format_rational, parse_rational, Float, QuadExt, Rational, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("unknown builtin or malformed name: {0}")]
    Builtin(String),
}

fn parse_error(e: serde_json::Error) -> IoError {
    IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Line of the `nth` occurrence of `key` after the first occurrence of
/// `anchor`, falling back to the anchor's line, then to line 1.
fn locate(text: &str, anchor: &str, key: Option<(&str, usize)>) -> usize {
    let line_of = |offset: usize| text[..offset].matches('\n').count() + 1;
    let Some(start) = text.find(&format!("\"{anchor}\"")) else { return 1 };
    if let Some((key, nth)) = key {
        let pat = format!("\"{key}\"");
        if let Some((offset, _)) = text[start..].match_indices(&pat).nth(nth) {
            return line_of(start + offset);
        }
    }
    line_of(start)
}

/// Scalar types with a JSON text form.
pub trait ScalarText: Scalar {
    fn from_json(v: &Value, ctx: &Self::Ctx) -> Result<Self, String>;
    fn to_json(&self) -> Value;
}

fn rational_from_json(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64").into())),
        other => Err(format!("expected a rational \"p/q\", found {other}")),
    }
}

impl ScalarText for Rational {
    fn from_json(v: &Value, _: &()) -> Result<Self, String> {
        rational_from_json(v)
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl ScalarText for QuadExt {
    fn from_json(v: &Value, d: &Rational) -> Result<Self, String> {
        match v {
            Value::Object(map) => {
                if let Some(k) = map.keys().find(|k| *k != "a" && *k != "b") {
                    return Err(format!("unexpected key {k:?} in quadratic scalar"));
                }
                let part = |k: &str| map.get(k).map(rational_from_json).unwrap_or_else(|| Ok(Rational::from_integer(0.into())));
                let (a, b) = (part("a")?, part("b")?);
                Ok(QuadExt::rational(a, d) + QuadExt::sqrt_d(d) * QuadExt::rational(b, d))
            }
            other => Ok(QuadExt::rational(rational_from_json(other)?, d)),
        }
    }
    fn to_json(&self) -> Value {
        json!({ "a": format_rational(&self.a), "b": format_rational(&self.b) })
    }
}

impl ScalarText for Float {
    fn from_json(v: &Value, _: &Tolerance) -> Result<Self, String> {
        match v {
            Value::Number(n) => Ok(Float(n.as_f64().ok_or("number out of range")?)),
            Value::String(s) => {
                let q = parse_rational(s).map_err(|e| e.to_string())?;
                Ok(Float::from_rational(&q, &Tolerance::default()))
            }
            other => Err(format!("expected a number, found {other}")),
        }
    }
    fn to_json(&self) -> Value {
        json!(self.0)
    }
}

/// Scalar backend declared by a file.
#[derive(Clone, Debug, PartialEq)]
pub enum BackendSpec {
    Rational,
    /// Coefficients in `Q(√(1+θ²))`.
    Quadratic { theta: Rational },
    Float { tol: f64 },
}

impl BackendSpec {
    fn to_json(&self) -> Value {
        match self {
            BackendSpec::Rational => json!({ "kind": "rational" }),
            BackendSpec::Quadratic { theta } => json!({ "kind": "quadratic", "theta": format_rational(theta) }),
            BackendSpec::Float { tol } => json!({ "kind": "float", "tol": tol }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBackend {
    kind: String,
    theta: Option<String>,
    tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    i: usize,
    j: usize,
    value: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    backend: RawBackend,
    #[serde(default)]
    bracket: Vec<RawEntry>,
    twist: Vec<Vec<Value>>,
}

/// An algebra over whichever backend its file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum DynAlgebra {
    Rational(HomAlgebra<Rational>),
    Quadratic(HomAlgebra<QuadExt>, Rational),
    Float(HomAlgebra<Float>),
}

/// Evaluates `$body` with `$g` bound to the algebra inside a [`DynAlgebra`].
#[macro_export]
macro_rules! with_algebra {
    ($dyn:expr, $g:ident => $body:expr) => {
        match $dyn {
            $crate::io::DynAlgebra::Rational($g) => $body,
            $crate::io::DynAlgebra::Quadratic($g, _) => $body,
            $crate::io::DynAlgebra::Float($g) => $body,
        }
    };
}

impl DynAlgebra {
    pub fn backend(&self) -> BackendSpec {
        match self {
            DynAlgebra::Rational(_) => BackendSpec::Rational,
            DynAlgebra::Quadratic(_, theta) => BackendSpec::Quadratic { theta: theta.clone() },
            DynAlgebra::Float(g) => BackendSpec::Float { tol: g.ctx().0 },
        }
    }

    pub fn dim(&self) -> usize {
        with_algebra!(self, g => g.dim())
    }

    pub fn to_json_string(&self) -> String {
        with_algebra!(self, g => algebra_to_json(g, &self.backend()))
    }
}

fn matrix_from_json<S: ScalarText>(rows: &[Vec<Value>], ctx: &S::Ctx) -> Result<Matrix<S>, String> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|v| S::from_json(v, ctx)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows, ctx).map_err(|e| e.to_string())
}

fn matrix_to_json<S: ScalarText>(m: &Matrix<S>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(S::to_json).collect())).collect())
}

fn build_algebra<S: ScalarText>(raw: &RawAlgebra, text: &str, ctx: &S::Ctx) -> Result<HomAlgebra<S>, IoError> {
    let n = raw.dim;
    let twist_line = locate(text, "twist", None);
    let twist = matrix_from_json::<S>(&raw.twist, ctx).map_err(|m| IoError::Validation { line: twist_line, message: m })?;
    if twist.rows() != n || twist.cols() != n {
        return Err(IoError::Validation {
            line: twist_line,
            message: format!("twist is {}x{}, expected {n}x{n}", twist.rows(), twist.cols()),
        });
    }
    let mut upper: BTreeMap<(usize, usize), Vec<S>> = BTreeMap::new();
    for (idx, e) in raw.bracket.iter().enumerate() {
        let line = locate(text, "bracket", Some(("i", idx)));
        let fail = |message: String| IoError::Validation { line, message };
        if e.i >= n || e.j >= n {
            return Err(fail(format!("bracket index ({}, {}) out of range for dimension {n}", e.i, e.j)));
        }
        if e.value.len() != n {
            return Err(fail(format!("bracket value has length {}, expected {n}", e.value.len())));
        }
        let v = e.value.iter().map(|x| S::from_json(x, ctx)).collect::<Result<Vec<_>, _>>().map_err(fail)?;
        if e.i == e.j {
            if !vec_is_zero(&v, ctx) {
                return Err(fail(format!("bracket[{0}][{0}] must vanish by antisymmetry", e.i)));
            }
            continue;
        }
        let (key, v) = if e.i < e.j { ((e.i, e.j), v) } else { ((e.j, e.i), vec_neg(&v)) };
        match upper.get(&key) {
            Some(prev) if *prev != v => {
                return Err(fail(format!(
                    "bracket[{}][{}] is not the negative of bracket[{}][{}]",
                    key.1, key.0, key.0, key.1
                )))
            }
            Some(_) => {}
            None => {
                upper.insert(key, v);
            }
        }
    }
    HomAlgebra::from_upper(n, upper.into_iter().map(|((i, j), v)| (i, j, v)), twist)
        .map_err(|e| IoError::Validation { line: locate(text, "bracket", None), message: e.to_string() })
}

pub fn parse_algebra(text: &str) -> Result<DynAlgebra, IoError> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(parse_error)?;
    let backend_line = locate(text, "backend", None);
    let bad_backend = |message: String| IoError::Validation { line: backend_line, message };
    match raw.backend.kind.as_str() {
        "rational" => Ok(DynAlgebra::Rational(build_algebra(&raw, text, &())?)),
        "quadratic" => {
            let theta = raw.backend.theta.as_deref().ok_or_else(|| bad_backend("quadratic backend needs theta".into()))?;
            let theta = parse_rational(theta).map_err(|e| bad_backend(e.to_string()))?;
            let d = theta_discriminant(&theta);
            Ok(DynAlgebra::Quadratic(build_algebra(&raw, text, &d)?, theta))
        }
        "float" => {
            let tol = raw.backend.tol.unwrap_or(1e-9);
            if tol.is_nan() || tol <= 0.0 {
                return Err(bad_backend(format!("tolerance must be positive, got {tol}")));
            }
            Ok(DynAlgebra::Float(build_algebra(&raw, text, &Tolerance(tol))?))
        }
        other => Err(bad_backend(format!("unknown backend kind {other:?}"))),
    }
}

/// Pretty JSON listing the nonzero `i < j` brackets.
pub fn algebra_to_json<S: ScalarText>(g: &HomAlgebra<S>, backend: &BackendSpec) -> String {
    let n = g.dim();
    let mut bracket = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = g.bracket(i, j);
            if !vec_is_zero(v, g.ctx()) {
                bracket.push(json!({ "i": i, "j": j, "value": v.iter().map(S::to_json).collect::<Vec<_>>() }));
            }
        }
    }
    let doc = json!({
        "dim": n,
        "backend": backend.to_json(),
        "bracket": bracket,
        "twist": matrix_to_json(g.twist()),
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_algebra_file(path: &Path) -> Result<DynAlgebra, IoError> {
    parse_algebra(&read(path)?).map_err(|e| with_path(e, path))
}

fn with_path(e: IoError, path: &Path) -> IoError {
    match e {
        IoError::Io { .. } => e,
        other => IoError::Io { path: path.display().to_string(), message: other.to_string() },
    }
}

fn builtin_theta(value: &str, name: &str) -> Result<Rational, IoError> {
    let v = value.strip_prefix("theta=").ok_or_else(|| IoError::Builtin(name.to_string()))?;
    parse_rational(v).map_err(|_| IoError::Builtin(name.to_string()))
}

/// `[[..],[..]]` JSON or `a,b,c;d,e,f;...` rows.
fn builtin_matrix(text: &str, name: &str) -> Result<Matrix<Rational>, IoError> {
    let bad = || IoError::Builtin(name.to_string());
    let rows: Vec<Vec<Rational>> = if text.trim_start().starts_with('[') {
        let raw: Vec<Vec<Value>> = serde_json::from_str(text).map_err(|_| bad())?;
        raw.iter().map(|r| r.iter().map(rational_from_json).collect::<Result<_, _>>()).collect::<Result<_, _>>().map_err(|_| bad())?
    } else {
        text.split(';')
            .map(|r| r.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?
    };
    Matrix::from_rows(rows, &()).map_err(|_| bad())
}

/// Parses a builtin algebra name, or returns `None` if `name` has no
/// builtin prefix.
pub fn parse_builtin(name: &str) -> Option<Result<DynAlgebra, IoError>> {
    let (family, rest) = name.split_once(':')?;
    let bad = |e: String| IoError::Builtin(format!("{name}: {e}"));
    Some(match family {
        "se4" => builtin_theta(rest, name)
            .and_then(|t| build_semi_euclidean(&t).map(|(g, _)| DynAlgebra::Quadratic(g, t)).map_err(|e| bad(e.to_string()))),
        "gl2" | "gl4" => builtin_theta(rest, name).and_then(|t| {
            let alpha = block_diagonal(&alpha_theta(&t), if family == "gl2" { 1 } else { 2 });
            GlContext::new(alpha)
                .and_then(|c| build_gl_alpha(&c))
                .map(|g| DynAlgebra::Quadratic(g, t))
                .map_err(|e| bad(e.to_string()))
        }),
        "r3" => {
            let Some(m) = rest.strip_prefix("A=") else { return Some(Err(IoError::Builtin(name.to_string()))) };
            builtin_matrix(m, name)
                .and_then(|a| build_r3_cross(&a).map(DynAlgebra::Rational).map_err(|e| bad(e.to_string())))
        }
        _ => return None,
    })
}

/// A builtin name or a path to an algebra file.
pub fn load_algebra(arg: &str) -> Result<DynAlgebra, IoError> {
    match parse_builtin(arg) {
        Some(r) => r,
        None => load_algebra_file(Path::new(arg)),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepresentation {
    algebra: Option<String>,
    m: usize,
    rho: Vec<Vec<Vec<Value>>>,
    phi: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DynRepresentation {
    Rational(Representation<Rational>),
    Quadratic(Representation<QuadExt>),
    Float(Representation<Float>),
}

fn build_representation<S: ScalarText>(
    raw: &RawRepresentation,
    text: &str,
    g: &HomAlgebra<S>,
) -> Result<Representation<S>, IoError> {
    let ctx = g.ctx();
    let rho_line = locate(text, "rho", None);
    let phi_line = locate(text, "phi", None);
    let phi = matrix_from_json::<S>(&raw.phi, ctx).map_err(|m| IoError::Validation { line: phi_line, message: m })?;
    if phi.rows() != raw.m {
        return Err(IoError::Validation { line: phi_line, message: format!("phi has {} rows, expected m = {}", phi.rows(), raw.m) });
    }
    let rho = raw
        .rho
        .iter()
        .map(|r| matrix_from_json::<S>(r, ctx))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| IoError::Validation { line: rho_line, message: m })?;
    Representation::new(g.clone(), rho, phi).map_err(|e| IoError::Validation { line: rho_line, message: e.to_string() })
}

fn resolve_relative(arg: &str, base: &Path) -> String {
    if parse_builtin(arg).is_some() || Path::new(arg).is_absolute() {
        return arg.to_string();
    }
    let dir = base.parent().map(Path::to_path_buf).unwrap_or_default();
    dir.join(arg).display().to_string()
}

/// Loads a representation file. When `algebra` is given it is used, and a
/// differing `"algebra"` field in the file is an error.
pub fn parse_representation(text: &str, algebra: Option<&DynAlgebra>, base: &Path) -> Result<DynRepresentation, IoError> {
    let raw: RawRepresentation = serde_json::from_str(text).map_err(parse_error)?;
    let line = locate(text, "algebra", None);
    let named = raw.algebra.as_deref().map(|a| load_algebra(&resolve_relative(a, base))).transpose()?;
    let g = match (algebra, named) {
        (Some(a), Some(b)) if *a != b => {
            return Err(IoError::Validation { line, message: "the file's algebra differs from the one given".into() })
        }
        (Some(a), _) => a.clone(),
        (None, Some(b)) => b,
        (None, None) => return Err(IoError::Validation { line: 1, message: "no algebra given".into() }),
    };
    Ok(match &g {
        DynAlgebra::Rational(g) => DynRepresentation::Rational(build_representation(&raw, text, g)?),
        DynAlgebra::Quadratic(g, _) => DynRepresentation::Quadratic(build_representation(&raw, text, g)?),
        DynAlgebra::Float(g) => DynRepresentation::Float(build_representation(&raw, text, g)?),
    })
}

pub fn load_representation(path: &Path, algebra: Option<&DynAlgebra>) -> Result<DynRepresentation, IoError> {
    parse_representation(&read(path)?, algebra, path).map_err(|e| with_path(e, path))
}

pub fn representation_to_json<S: ScalarText>(rep: &Representation<S>, algebra: Option<&str>) -> String {
    let rho: Vec<Value> = (0..rep.algebra().dim()).map(|i| matrix_to_json(rep.rho_basis(i))).collect();
    let mut doc = json!({ "m": rep.m(), "rho": rho, "phi": matrix_to_json(rep.phi()) });
    if let Some(a) = algebra {
        doc["algebra"] = Value::String(a.to_string());
    }
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCochainEntry {
    indices: Vec<usize>,
    value: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCochain {
    k: usize,
    entries: Vec<RawCochainEntry>,
}

pub fn parse_cochain<S: ScalarText>(text: &str, n: usize, m: usize, ctx: &S::Ctx) -> Result<Cochain<S>, IoError> {
    let raw: RawCochain = serde_json::from_str(text).map_err(parse_error)?;
    let mut entries = Vec::new();
    for (idx, e) in raw.entries.iter().enumerate() {
        let line = locate(text, "entries", Some(("indices", idx)));
        let v = e
            .value
            .iter()
            .map(|x| S::from_json(x, ctx))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|message| IoError::Validation { line, message })?;
        entries.push((e.indices.clone(), v));
    }
    Cochain::from_entries(raw.k, n, m, entries, ctx)
        .map_err(|e| IoError::Validation { line: locate(text, "entries", None), message: e.to_string() })
}

pub fn cochain_to_json<S: ScalarText>(c: &Cochain<S>) -> String {
    let entries: Vec<RawCochainEntry> = c
        .entries()
        .filter(|(_, v)| !vec_is_zero(v, c.ctx()))
        .map(|(t, v)| RawCochainEntry { indices: t.clone(), value: v.iter().map(S::to_json).collect() })
        .collect();
    serde_json::to_string_pretty(&RawCochain { k: c.degree(), entries }).expect("serializable")
}
