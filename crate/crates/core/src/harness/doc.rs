//! JSON documents for instances, certificates and command results.
//!
//! Keys are emitted in sorted order and the layout is fixed (see
//! [`to_canonical_string`]), so serialising a parsed canonical document
//! reproduces it byte for byte. Parsing is strict: unknown keys, residues out
//! of range and ragged matrices are rejected with the offending path.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::corollaries::NPReport;
use crate::engine::certificate::{KElement, KMatrix, LinearizationCertificate, SkewFieldPresentation};
use crate::engine::CheckEntry;
use crate::field::{Field, FieldSpec, Scalar};
use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::module::ModuleInstance;

const INLINE_WIDTH: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("invalid document at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("{0}")]
    Io(String),
}

fn invalid(path: &str, message: impl Into<String>) -> DocError {
    DocError::Validation { path: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Parse { line: e.line(), col: e.column(), message: e.to_string() })
}

// ---------------------------------------------------------------------------
// Layout

/// Sorted keys, two-space indentation; arrays without objects that fit in
/// the line width are kept on one line. Ends with a newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Array(items) if !items.is_empty() => {
            let compact = v.to_string();
            if !compact.contains('{') && indent + compact.len() <= INLINE_WIDTH {
                out.push_str(&compact);
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&" ".repeat(indent + 2));
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&" ".repeat(indent + 2));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Writing

pub fn vector_json(field: &Field, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| field.to_json(x)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(m.field(), m.row(i))).collect())
}

pub fn matrices_json(ms: &[Matrix]) -> Value {
    Value::Array(ms.iter().map(matrix_json).collect())
}

pub fn subspace_json(w: &Subspace) -> Value {
    Value::Array(w.basis().iter().map(|v| vector_json(w.field(), v)).collect())
}

fn kmatrix_json(field: &Field, x: &KMatrix) -> Value {
    Value::Array(
        x.iter().map(|row| Value::Array(row.iter().map(|e| vector_json(field, e)).collect())).collect(),
    )
}

fn field_json(field: &Field) -> Value {
    serde_json::to_value(field.spec()).expect("field specs serialise")
}

pub fn instance_to_json(m: &ModuleInstance) -> Value {
    let mut map = Map::new();
    map.insert("field".into(), field_json(m.field()));
    map.insert("n".into(), json!(m.n()));
    if let Some(name) = &m.name {
        map.insert("name".into(), json!(name));
    }
    map.insert("s_gens".into(), matrices_json(m.s_gens()));
    for (key, gens) in [("t_gens", m.t_gens()), ("g_gens", m.g_gens()), ("r_gens", m.r_gens())] {
        if let Some(g) = gens {
            map.insert(key.into(), matrices_json(g));
        }
    }
    Value::Object(map)
}

pub fn presentation_json(field: &Field, p: &SkewFieldPresentation) -> Value {
    let constants = p
        .structure_constants
        .iter()
        .map(|row| Value::Array(row.iter().map(|c| vector_json(field, c)).collect()))
        .collect();
    json!({
        "commutative": p.commutative,
        "d": p.d,
        "structure_constants": Value::Array(constants),
        "unit": vector_json(field, &p.unit),
    })
}

pub fn certificate_to_json(c: &LinearizationCertificate) -> Value {
    let f = &c.field;
    let mut map = Map::new();
    map.insert("kind".into(), json!("linearization_certificate"));
    if let Some(name) = &c.name {
        map.insert("name".into(), json!(name));
    }
    map.insert("field".into(), field_json(f));
    map.insert("n".into(), json!(c.n));
    map.insert("d".into(), json!(c.d));
    map.insert("k".into(), json!(c.k));
    map.insert("skew_field".into(), presentation_json(f, &c.skew_field));
    map.insert("t_basis".into(), matrices_json(&c.t_basis));
    map.insert("adapted_basis".into(), matrix_json(&c.adapted_basis));
    map.insert("s_images".into(), Value::Array(c.s_images.iter().map(|x| kmatrix_json(f, x)).collect()));
    map.insert("t_images".into(), Value::Array(c.t_images.iter().map(|x| vector_json(f, x)).collect()));
    if let Some(g) = &c.g_images {
        map.insert("g_images".into(), Value::Array(g.iter().map(|x| kmatrix_json(f, x)).collect()));
    }
    if let Some(r) = &c.r_images {
        map.insert("r_images".into(), Value::Array(r.iter().map(|x| vector_json(f, x)).collect()));
    }
    if let Some(g) = &c.norm_gram {
        map.insert("norm_gram".into(), matrix_json(g));
    }
    map.insert("dim_s".into(), json!(c.dim_s));
    map.insert("dim_t".into(), json!(c.dim_t));
    map.insert("delta_route".into(), json!(c.delta_route));
    map.insert("check_log".into(), serde_json::to_value(&c.check_log).expect("check logs serialise"));
    Value::Object(map)
}

pub fn np_report_json(r: &NPReport) -> Value {
    let field = r.r.field();
    let mut map = Map::new();
    map.insert("r_basis".into(), matrices_json(r.r.basis()));
    map.insert("w".into(), subspace_json(&r.w));
    map.insert("p_ideal".into(), subspace_json(&r.p_ideal));
    map.insert("conjugates".into(), Value::Array(r.conjugates.iter().map(subspace_json).collect()));
    map.insert("representatives".into(), matrices_json(&r.representatives));
    map.insert("translates".into(), Value::Array(r.translates.iter().map(subspace_json).collect()));
    map.insert("avoidance_witnesses".into(), matrices_json(&r.avoidance_witnesses));
    if let Some(direct) = r.direct {
        map.insert("direct".into(), json!(direct));
    }
    if let Some(frac) = &r.frac {
        map.insert("frac".into(), presentation_json(field, frac));
    }
    Value::Object(map)
}

// ---------------------------------------------------------------------------
// Reading

/// Reads the keys of an object and rejects whatever was not read.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
    seen: BTreeSet<&'static str>,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str) -> Result<Self, DocError> {
        let map = v.as_object().ok_or_else(|| invalid(path, "expected an object"))?;
        Ok(Obj { map, path: path.to_string(), seen: BTreeSet::new() })
    }

    fn at(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn opt(&mut self, key: &'static str) -> Option<(&'a Value, String)> {
        self.seen.insert(key);
        self.map.get(key).map(|v| (v, self.at(key)))
    }

    fn req(&mut self, key: &'static str) -> Result<(&'a Value, String), DocError> {
        let path = self.at(key);
        self.opt(key).ok_or_else(|| invalid(&path, "missing key"))
    }

    fn finish(self) -> Result<(), DocError> {
        match self.map.keys().find(|k| !self.seen.contains(k.as_str())) {
            Some(k) => Err(invalid(&self.at(k), "unknown key")),
            None => Ok(()),
        }
    }
}

fn as_usize((v, path): (&Value, String)) -> Result<usize, DocError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| invalid(&path, "expected a non-negative integer"))
}

fn as_bool((v, path): (&Value, String)) -> Result<bool, DocError> {
    v.as_bool().ok_or_else(|| invalid(&path, "expected a boolean"))
}

fn as_string((v, path): (&Value, String)) -> Result<String, DocError> {
    v.as_str().map(str::to_string).ok_or_else(|| invalid(&path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn parse_field((v, path): (&Value, String)) -> Result<Field, DocError> {
    let spec: FieldSpec = serde_json::from_value(v.clone()).map_err(|e| invalid(&path, e.to_string()))?;
    Field::new(spec).map_err(|e| invalid(&path, e.to_string()))
}

pub fn parse_vector(field: &Field, v: &Value, path: &str) -> Result<Vec<Scalar>, DocError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| field.from_json(x).map_err(|e| invalid(&format!("{path}[{i}]"), e)))
        .collect()
}

pub fn parse_matrix(field: &Field, v: &Value, path: &str) -> Result<Matrix, DocError> {
    let rows = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(field, r, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(invalid(path, "a matrix needs at least one row"));
    }
    Matrix::from_rows(field, rows).map_err(|e| invalid(path, e.to_string()))
}

fn parse_square(field: &Field, v: &Value, path: &str, n: usize) -> Result<Matrix, DocError> {
    let m = parse_matrix(field, v, path)?;
    if m.rows() != n || m.cols() != n {
        return Err(invalid(path, format!("expected a {n}x{n} matrix, found {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn parse_list<T>(
    v: &Value,
    path: &str,
    mut item: impl FnMut(&Value, &str) -> Result<T, DocError>,
) -> Result<Vec<T>, DocError> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| item(x, &format!("{path}[{i}]"))).collect()
}

/// Parses an instance document into a validated [`ModuleInstance`].
pub fn parse_instance(text: &str) -> Result<ModuleInstance, DocError> {
    instance_from_json(&parse_json(text)?)
}

pub fn instance_from_json(v: &Value) -> Result<ModuleInstance, DocError> {
    let mut obj = Obj::new(v, "")?;
    let field = parse_field(obj.req("field")?)?;
    let n = as_usize(obj.req("n")?)?;
    if n == 0 {
        return Err(invalid("n", "the module must be nonzero"));
    }
    let name = obj.opt("name").map(as_string).transpose()?;
    let mut gens = |key: &'static str| -> Result<Option<Vec<Matrix>>, DocError> {
        obj.opt(key).map(|(v, p)| parse_list(v, &p, |x, p| parse_square(&field, x, p, n))).transpose()
    };
    let s = gens("s_gens")?.ok_or_else(|| invalid("s_gens", "missing key"))?;
    let t = gens("t_gens")?;
    let g = gens("g_gens")?;
    let r = gens("r_gens")?;
    obj.finish()?;

    let mut m = ModuleInstance::new(&field, n, s).map_err(|e| invalid("s_gens", e.to_string()))?;
    if let Some(t) = t {
        m = m.with_t_gens(t).map_err(|e| invalid("t_gens", e.to_string()))?;
    }
    if let Some(g) = g {
        m = m.with_g_gens(g).map_err(|e| invalid("g_gens", e.to_string()))?;
    }
    if let Some(r) = r {
        m = m.with_r_gens(r).map_err(|e| invalid("r_gens", e.to_string()))?;
    }
    if let Some(name) = name {
        m = m.with_name(name);
    }
    Ok(m)
}

fn parse_presentation(field: &Field, (v, path): (&Value, String)) -> Result<SkewFieldPresentation, DocError> {
    let mut obj = Obj::new(v, &path)?;
    let commutative = as_bool(obj.req("commutative")?)?;
    let d = as_usize(obj.req("d")?)?;
    let (sc, sc_path) = obj.req("structure_constants")?;
    let structure_constants = parse_list(sc, &sc_path, |row, p| {
        parse_list(row, p, |c, p| parse_vector(field, c, p))
    })?;
    let (u, u_path) = obj.req("unit")?;
    let unit = parse_vector(field, u, &u_path)?;
    obj.finish()?;
    Ok(SkewFieldPresentation { d, structure_constants, unit, commutative })
}

fn parse_kelements(field: &Field, (v, path): (&Value, String)) -> Result<Vec<KElement>, DocError> {
    parse_list(v, &path, |x, p| parse_vector(field, x, p))
}

fn parse_kmatrices(field: &Field, (v, path): (&Value, String)) -> Result<Vec<KMatrix>, DocError> {
    parse_list(v, &path, |x, p| parse_list(x, p, |row, p| parse_list(row, p, |e, p| parse_vector(field, e, p))))
}

pub fn parse_certificate(text: &str) -> Result<LinearizationCertificate, DocError> {
    certificate_from_json(&parse_json(text)?)
}

/// Reads a certificate; shapes are left to the verifier. An `np_report`
/// section is accepted and ignored.
pub fn certificate_from_json(v: &Value) -> Result<LinearizationCertificate, DocError> {
    let mut obj = Obj::new(v, "")?;
    let kind = as_string(obj.req("kind")?)?;
    if kind != "linearization_certificate" {
        return Err(invalid("kind", format!("expected \"linearization_certificate\", found {kind:?}")));
    }
    let name = obj.opt("name").map(as_string).transpose()?;
    let field = parse_field(obj.req("field")?)?;
    let n = as_usize(obj.req("n")?)?;
    let d = as_usize(obj.req("d")?)?;
    let k = as_usize(obj.req("k")?)?;
    let skew_field = parse_presentation(&field, obj.req("skew_field")?)?;
    let (tb, tb_path) = obj.req("t_basis")?;
    let t_basis = parse_list(tb, &tb_path, |x, p| parse_matrix(&field, x, p))?;
    let (ab, ab_path) = obj.req("adapted_basis")?;
    let adapted_basis = parse_matrix(&field, ab, &ab_path)?;
    let s_images = parse_kmatrices(&field, obj.req("s_images")?)?;
    let t_images = parse_kelements(&field, obj.req("t_images")?)?;
    let g_images = obj.opt("g_images").map(|x| parse_kmatrices(&field, x)).transpose()?;
    let r_images = obj.opt("r_images").map(|x| parse_kelements(&field, x)).transpose()?;
    let norm_gram = obj.opt("norm_gram").map(|(x, p)| parse_matrix(&field, x, &p)).transpose()?;
    let dim_s = as_usize(obj.req("dim_s")?)?;
    let dim_t = as_usize(obj.req("dim_t")?)?;
    let delta_route = as_string(obj.req("delta_route")?)?;
    let (log, log_path) = obj.req("check_log")?;
    let entries: Vec<CheckEntry> =
        serde_json::from_value(log.clone()).map_err(|e| invalid(&log_path, e.to_string()))?;
    obj.opt("np_report");
    obj.finish()?;
    Ok(LinearizationCertificate {
        name,
        field,
        n,
        d,
        k,
        skew_field,
        t_basis,
        adapted_basis,
        s_images,
        t_images,
        g_images,
        r_images,
        norm_gram,
        dim_s,
        dim_t,
        delta_route,
        check_log: crate::engine::CheckLog(entries),
    })
}
