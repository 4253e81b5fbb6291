//! The JSON document format shared by every command.
//!
//! One document may carry any of the sections `field`, `algebra`,
//! `subalgebra`, `omega` or `form`, `automorphism`, `point` and `series`.
//! Scalars are `"p/q"` strings (or integers); cyclotomic scalars are
//! `{"order": N, "coords": [...]}`. Indices are 0-based.
//!
//! ```json
//! {
//!   "algebra": {"labels": ["e", "f", "h"],
//!               "brackets": [[2, 0, [[0, "2"]]], [2, 1, [[1, "-2"]]], [0, 1, [[2, "1"]]]]},
//!   "subalgebra": [0, 1, 2],
//!   "form": [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "2"]]
//! }
//! ```

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::lie::{Automorphism, Casimir, LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::scalar::{FieldKind, Scalar, ScalarError};
use crate::series::{Monomial, SeriesMap};
use crate::tensor::Tensor2;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{at}: {message}")]
    Schema { at: String, message: String },
    #[error("{at}: {source}")]
    Scalar { at: String, source: ScalarError },
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn schema(at: &str, message: impl Into<String>) -> IoError {
    IoError::Schema { at: at.to_string(), message: message.into() }
}

/// A parsed but untyped document.
#[derive(Debug, Clone)]
pub struct Document {
    root: Map<String, Value>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
                IoError::Syntax { line: e.line(), column: e.column(), message }
            })?;
        match v {
            Value::Object(root) => Ok(Document { root }),
            _ => Err(schema("document", "top level must be an object")),
        }
    }

    pub fn read(path: &str) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_string(), source })?;
        Self::parse(&text)
    }

    pub fn new() -> Self {
        Document { root: Map::new() }
    }

    pub fn has(&self, key: &str) -> bool {
        self.root.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.root.get(key)
    }

    pub fn insert(&mut self, key: &str, v: Value) {
        self.root.insert(key.to_string(), v);
    }

    /// Merges the algebra-related sections of `other` (overwriting).
    pub fn merge(&mut self, other: &Document) {
        for (k, v) in &other.root {
            self.root.insert(k.clone(), v.clone());
        }
    }

    /// The declared field, if any.
    pub fn field(&self) -> Result<Option<FieldKind>, IoError> {
        match self.root.get("field") {
            None => Ok(None),
            Some(Value::String(s)) => s.parse().map(Some).map_err(|source| IoError::Scalar { at: "field".into(), source }),
            Some(_) => Err(schema("field", "expected a string")),
        }
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.root.clone())).expect("json");
        s.push('\n');
        s
    }

    pub fn algebra<F: Scalar>(&self) -> Result<LieAlgebra<F>, IoError> {
        let a = self.root.get("algebra").ok_or_else(|| schema("document", "missing \"algebra\" section"))?;
        parse_algebra(a, self.root.get("subalgebra"))
    }

    /// `Ω` from an `omega` tensor or the inverse of a `form`.
    pub fn casimir<F: Scalar>(&self, dim: usize) -> Result<Option<Casimir<F>>, IoError> {
        if let Some(o) = self.root.get("omega") {
            let m = parse_matrix::<F>(o, "omega")?;
            check_square(&m, dim, "omega")?;
            return Ok(Some(Casimir::new(Tensor2::from_matrix(&m))));
        }
        if let Some(f) = self.root.get("form") {
            let m = parse_matrix::<F>(f, "form")?;
            check_square(&m, dim, "form")?;
            return Ok(Some(Casimir::from_form(m)?));
        }
        Ok(None)
    }

    pub fn automorphism<F: Scalar>(&self, dim: usize) -> Result<Option<Automorphism<F>>, IoError> {
        let Some(a) = self.root.get("automorphism") else {
            return Ok(None);
        };
        let order = a
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("automorphism.order", "expected a positive integer"))?;
        let m = parse_matrix::<F>(a.get("matrix").ok_or_else(|| schema("automorphism", "missing matrix"))?, "automorphism.matrix")?;
        check_square(&m, dim, "automorphism.matrix")?;
        Ok(Some(Automorphism::new(m, order as u32)?))
    }

    /// A two-leg tensor literal under `key`.
    pub fn tensor2<F: Scalar>(&self, key: &str, dim: usize) -> Result<Tensor2<F>, IoError> {
        let v = self.root.get(key).ok_or_else(|| schema("document", format!("missing \"{key}\" section")))?;
        let m = parse_matrix::<F>(v, key)?;
        check_square(&m, dim, key)?;
        Ok(Tensor2::from_matrix(&m))
    }

    pub fn series<F: Scalar>(&self) -> Result<SeriesMap<F>, IoError> {
        let v = self.root.get("series").ok_or_else(|| schema("document", "missing \"series\" section"))?;
        parse_series(v)
    }
}

impl Default for Document {
    fn default() -> Self {
        Self::new()
    }
}

fn scalar<F: Scalar>(v: &Value, at: &str) -> Result<F, IoError> {
    F::from_json(v).map_err(|source| IoError::Scalar { at: at.to_string(), source })
}

fn index(v: &Value, at: &str) -> Result<usize, IoError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(at, "expected a non-negative integer"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn check_square<F: Scalar>(m: &Matrix<F>, dim: usize, at: &str) -> Result<(), IoError> {
    if m.rows() != dim || m.cols() != dim {
        return Err(schema(at, format!("expected a {dim}×{dim} matrix, found {}×{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn parse_matrix<F: Scalar>(v: &Value, at: &str) -> Result<Matrix<F>, IoError> {
    let rows = array(v, at)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let at_row = format!("{at}[{i}]");
        let entries = array(row, &at_row)?;
        if entries.len() != rows.len() {
            return Err(schema(&at_row, format!("expected {} entries", rows.len())));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| scalar::<F>(x, &format!("{at_row}[{j}]")))
                .collect::<Result<Vec<F>, _>>()?,
        );
    }
    Ok(Matrix::from_rows(out))
}

fn parse_algebra<F: Scalar>(a: &Value, sub: Option<&Value>) -> Result<LieAlgebra<F>, IoError> {
    let labels: Vec<String> = match a.get("labels") {
        Some(l) => array(l, "algebra.labels")?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema("algebra.labels", "expected strings")))
            .collect::<Result<_, _>>()?,
        None => {
            let dim = index(a.get("dim").ok_or_else(|| schema("algebra", "needs labels or dim"))?, "algebra.dim")?;
            (0..dim).map(|i| format!("e{i}")).collect()
        }
    };
    if let Some(d) = a.get("dim") {
        if index(d, "algebra.dim")? != labels.len() {
            return Err(schema("algebra.dim", "does not match the number of labels"));
        }
    }
    let mut entries = Vec::new();
    if let Some(b) = a.get("brackets") {
        for (n, e) in array(b, "algebra.brackets")?.iter().enumerate() {
            let at = format!("algebra.brackets[{n}]");
            let parts = array(e, &at)?;
            if parts.len() != 3 {
                return Err(schema(&at, "expected [i, j, [[k, c], ...]]"));
            }
            let i = index(&parts[0], &at)?;
            let j = index(&parts[1], &at)?;
            let mut terms = Vec::new();
            for (m, t) in array(&parts[2], &at)?.iter().enumerate() {
                let at_t = format!("{at}[2][{m}]");
                let kc = array(t, &at_t)?;
                if kc.len() != 2 {
                    return Err(schema(&at_t, "expected [k, c]"));
                }
                terms.push((index(&kc[0], &at_t)?, scalar::<F>(&kc[1], &at_t)?));
            }
            entries.push((i, j, terms));
        }
    }
    let l: Vec<usize> = match sub {
        Some(s) => array(s, "subalgebra")?.iter().map(|x| index(x, "subalgebra")).collect::<Result<_, _>>()?,
        None => (0..labels.len()).collect(),
    };
    Ok(LieAlgebra::new(labels, entries, l)?)
}

/// `{"dim", "labels", "brackets"}` with every nonzero `[e_i, e_j]`, `i < j`.
pub fn algebra_to_json<F: Scalar>(alg: &LieAlgebra<F>) -> Value {
    let d = alg.dim();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let terms: Vec<Value> = alg.bracket_terms(i, j).iter().map(|(k, c)| json!([k, c.to_json()])).collect();
            if !terms.is_empty() {
                brackets.push(json!([i, j, terms]));
            }
        }
    }
    json!({ "dim": d, "labels": alg.labels(), "brackets": brackets })
}

pub fn matrix_to_json<F: Scalar>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(Scalar::to_json).collect())).collect())
}

/// Writes the algebra, subalgebra and `Ω` sections.
pub fn algebra_document<F: Scalar>(alg: &LieAlgebra<F>, casimir: Option<&Casimir<F>>) -> Document {
    let mut doc = Document::new();
    doc.insert("field", json!(F::field_kind().to_string()));
    doc.insert("algebra", algebra_to_json(alg));
    doc.insert("subalgebra", json!(alg.l_indices()));
    if let Some(c) = casimir {
        doc.insert("omega", matrix_to_json(&c.omega().to_matrix()));
    }
    doc
}

/// The `series` section: header plus one record per nonzero monomial, with
/// sparse `[flat_index, value]` coefficient lists.
pub fn series_to_json<F: Scalar>(s: &SeriesMap<F>, target_shape: &[usize]) -> Value {
    assert_eq!(target_shape.iter().product::<usize>(), s.target_dim());
    let terms: Vec<Value> = s
        .terms()
        .map(|(m, v)| {
            let coeffs: Vec<Value> =
                v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| json!([k, c.to_json()])).collect();
            json!({ "monomial": m.exponents(), "coeffs": coeffs })
        })
        .collect();
    json!({
        "num_vars": s.num_vars(),
        "trunc": s.trunc(),
        "target_shape": target_shape,
        "field": F::field_kind().to_string(),
        "terms": terms,
    })
}

fn parse_series<F: Scalar>(v: &Value) -> Result<SeriesMap<F>, IoError> {
    let num_vars = index(v.get("num_vars").ok_or_else(|| schema("series", "missing num_vars"))?, "series.num_vars")?;
    let trunc = index(v.get("trunc").ok_or_else(|| schema("series", "missing trunc"))?, "series.trunc")?;
    let shape: Vec<usize> = array(v.get("target_shape").ok_or_else(|| schema("series", "missing target_shape"))?, "series.target_shape")?
        .iter()
        .map(|x| index(x, "series.target_shape"))
        .collect::<Result<_, _>>()?;
    if let Some(f) = v.get("field").and_then(Value::as_str) {
        let kind: FieldKind = f.parse().map_err(|source| IoError::Scalar { at: "series.field".into(), source })?;
        if kind != F::field_kind() && kind != FieldKind::Rational {
            return Err(IoError::Scalar {
                at: "series.field".into(),
                source: ScalarError::FieldMismatch { expected: F::field_kind().to_string(), found: kind.to_string() },
            });
        }
    }
    let dim: usize = shape.iter().product();
    let mut out = SeriesMap::zeros(num_vars, trunc, dim);
    let terms = match v.get("terms") {
        Some(t) => array(t, "series.terms")?.as_slice(),
        None => &[],
    };
    for (n, t) in terms.iter().enumerate() {
        let at = format!("series.terms[{n}]");
        let exps: Vec<u32> = array(t.get("monomial").ok_or_else(|| schema(&at, "missing monomial"))?, &at)?
            .iter()
            .map(|x| index(x, &at).map(|e| e as u32))
            .collect::<Result<_, _>>()?;
        if exps.len() != num_vars {
            return Err(schema(&at, format!("monomial needs {num_vars} exponents")));
        }
        let m = Monomial::from_exponents(exps);
        if m.degree() > trunc {
            return Err(schema(&at, format!("degree {} exceeds the truncation {trunc}", m.degree())));
        }
        let mut coeff = vec![F::zero(); dim];
        for (c, kv) in array(t.get("coeffs").ok_or_else(|| schema(&at, "missing coeffs"))?, &at)?.iter().enumerate() {
            let at_c = format!("{at}.coeffs[{c}]");
            let kv = array(kv, &at_c)?;
            if kv.len() != 2 {
                return Err(schema(&at_c, "expected [index, value]"));
            }
            let k = index(&kv[0], &at_c)?;
            if k >= dim {
                return Err(schema(&at_c, format!("index {k} out of range for {dim} components")));
            }
            coeff[k] += &scalar::<F>(&kv[1], &at_c)?;
        }
        out.add_term(m, &coeff);
    }
    Ok(out)
}

/// A document holding `series` and the algebra it lives on.
pub fn series_document<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: Option<&Casimir<F>>,
    s: &SeriesMap<F>,
    target_shape: &[usize],
) -> Document {
    let mut doc = algebra_document(alg, casimir);
    doc.insert("series", series_to_json(s, target_shape));
    doc
}
