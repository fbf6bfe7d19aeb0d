//! JSON documents for multicomplexes and morphisms.
//!
//! ```json
//! {
//!   "N": 4,
//!   "field": "Q",
//!   "modules": { "0,0": 1, "0,1": 1 },
//!   "diffs": [ { "i": 0, "from": [0, 0], "matrix": [["1"]] } ]
//! }
//! ```
//!
//! A morphism document has `source` and `target` (inline documents or paths
//! relative to the morphism file) and `blocks` mapping `"p,q"` to matrices.
//! Printing is canonical: keys in a fixed order, bidegrees sorted, scalars
//! as strings.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bidegree::Bidegree;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::Graded;
use crate::linalg::Matrix;
use crate::morphism::Morphism;
use crate::multicomplex::Multicomplex;

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn bidegree_key(path: &str, key: &str) -> Result<Bidegree> {
    key.parse().map_err(|_| err(path, format!("`{key}` is not a bidegree `p,q`")))
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

fn field_of(v: &Value, path: &str) -> Result<Field> {
    let s = v.as_str().ok_or_else(|| err(path, "expected a field name like \"Q\" or \"Fp:5\""))?;
    s.parse().map_err(|e| err(path, e))
}

fn matrix_of(v: &Value, field: Field, rows: usize, cols: usize, path: &str) -> Result<Matrix> {
    let data = as_array(v, path)?;
    if data.len() != rows {
        return Err(err(path, format!("expected {rows} rows, found {}", data.len())));
    }
    let mut m = Matrix::zeros(field, rows, cols);
    for (i, row) in data.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = as_array(row, &rp)?;
        if row.len() != cols {
            return Err(err(&rp, format!("expected {cols} entries, found {}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            let xp = format!("{rp}[{j}]");
            let text = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(err(&xp, "expected a scalar string")),
            };
            m.set(i, j, field.parse_scalar(&text).map_err(|e| err(&xp, e))?);
        }
    }
    Ok(m)
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

/// A parsed multicomplex document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDocument {
    pub complex: Multicomplex,
    /// Set for window restrictions of infinite objects, whose boundary
    /// bidegrees lose outgoing maps.
    pub truncated: bool,
}

pub fn multicomplex_from_value(v: &Value, path: &str) -> Result<ComplexDocument> {
    let obj = as_obj(v, path)?;
    let get = |k: &str| obj.get(k).ok_or_else(|| err(path, format!("missing field `{k}`")));
    let n = as_int(get("N")?, &format!("{path}.N"))?;
    if n < 1 {
        return Err(err(&format!("{path}.N"), "N must be positive"));
    }
    let field = field_of(get("field")?, &format!("{path}.field"))?;
    let mut modules = Vec::new();
    let mp = format!("{path}.modules");
    for (k, r) in as_obj(get("modules")?, &mp)? {
        let kp = format!("{mp}.\"{k}\"");
        let r = as_int(r, &kp)?;
        if r < 0 {
            return Err(err(&kp, "rank must be non-negative"));
        }
        modules.push((bidegree_key(&kp, k)?, r as usize));
    }
    let mut complex =
        Multicomplex::from_parts(n as usize, field, modules, []).map_err(|e| err(&format!("{path}.N"), e))?;
    let dp = format!("{path}.diffs");
    let diffs = match obj.get("diffs") {
        Some(d) => as_array(d, &dp)?.clone(),
        None => Vec::new(),
    };
    for (k, d) in diffs.iter().enumerate() {
        let ep = format!("{dp}[{k}]");
        let o = as_obj(d, &ep)?;
        let i = as_int(o.get("i").ok_or_else(|| err(&ep, "missing `i`"))?, &format!("{ep}.i"))?;
        if i < 0 {
            return Err(err(&format!("{ep}.i"), "index must be non-negative"));
        }
        let from = as_array(o.get("from").ok_or_else(|| err(&ep, "missing `from`"))?, &format!("{ep}.from"))?;
        if from.len() != 2 {
            return Err(err(&format!("{ep}.from"), "expected [p, q]"));
        }
        let at =
            Bidegree::new(as_int(&from[0], &format!("{ep}.from[0]"))?, as_int(&from[1], &format!("{ep}.from[1]"))?);
        let i = i as usize;
        let rows = complex.modules().get(&(at + Bidegree::of_diff(i))).copied().unwrap_or(0);
        let cols = complex.modules().get(&at).copied().unwrap_or(0);
        let mpath = format!("{ep}.matrix");
        let m = matrix_of(o.get("matrix").ok_or_else(|| err(&ep, "missing `matrix`"))?, field, rows, cols, &mpath)?;
        complex.set_diff(i, at, m).map_err(|e| err(&ep, e))?;
    }
    let truncated = obj.get("truncated").and_then(Value::as_bool).unwrap_or(false);
    Ok(ComplexDocument { complex, truncated })
}

pub fn multicomplex_to_value(a: &Multicomplex, truncated: bool) -> Value {
    let modules: Map<String, Value> = a.modules().iter().map(|(b, r)| (b.to_string(), json!(r))).collect();
    let diffs: Vec<Value> = a
        .diff_blocks()
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|((i, at), m)| json!({ "i": i, "from": [at.p, at.q], "matrix": matrix_value(m) }))
        .collect();
    let mut out = Map::new();
    out.insert("N".into(), json!(a.arity()));
    out.insert("field".into(), json!(a.field().to_string()));
    out.insert("modules".into(), Value::Object(modules));
    out.insert("diffs".into(), Value::Array(diffs));
    if truncated {
        out.insert("truncated".into(), json!(true));
    }
    Value::Object(out)
}

pub fn parse_multicomplex(text: &str) -> Result<ComplexDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("document", e))?;
    multicomplex_from_value(&v, "$")
}

pub fn print_multicomplex(a: &Multicomplex, truncated: bool) -> String {
    pretty(&multicomplex_to_value(a, truncated))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

/// Parses a morphism; `base` resolves `source`/`target` given as paths.
pub fn morphism_from_value(v: &Value, base: Option<&Path>) -> Result<Morphism> {
    let obj = as_obj(v, "$")?;
    let side = |k: &str| -> Result<Multicomplex> {
        let p = format!("$.{k}");
        match obj.get(k) {
            Some(Value::String(file)) => {
                let path = base.map(|b| b.join(file)).unwrap_or_else(|| file.into());
                let text = std::fs::read_to_string(&path).map_err(|e| err(&p, format!("{}: {e}", path.display())))?;
                let v: Value = serde_json::from_str(&text).map_err(|e| err(&path.display().to_string(), e))?;
                Ok(multicomplex_from_value(&v, &path.display().to_string())?.complex)
            }
            Some(inner) => Ok(multicomplex_from_value(inner, &p)?.complex),
            None => Err(err("$", format!("missing field `{k}`"))),
        }
    };
    let source = side("source")?;
    let target = side("target")?;
    if source.field() != target.field() {
        return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
    }
    let field = source.field();
    let mut blocks = Vec::new();
    if let Some(b) = obj.get("blocks") {
        for (k, m) in as_obj(b, "$.blocks")? {
            let kp = format!("$.blocks.\"{k}\"");
            let at = bidegree_key(&kp, k)?;
            blocks.push((at, matrix_of(m, field, target.rank(at), source.rank(at), &kp)?));
        }
    }
    Morphism::new(source, target, blocks)
}

pub fn morphism_to_value(f: &Morphism) -> Value {
    let blocks: Map<String, Value> =
        f.blocks().iter().filter(|(_, m)| !m.is_zero()).map(|(b, m)| (b.to_string(), matrix_value(m))).collect();
    json!({
        "source": multicomplex_to_value(f.source_complex(), false),
        "target": multicomplex_to_value(f.target_complex(), false),
        "blocks": Value::Object(blocks),
    })
}

pub fn parse_morphism(text: &str, base: Option<&Path>) -> Result<Morphism> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("document", e))?;
    morphism_from_value(&v, base)
}

pub fn print_morphism(f: &Morphism) -> String {
    pretty(&morphism_to_value(f))
}

pub fn read_multicomplex(path: &Path) -> Result<ComplexDocument> {
    let text = std::fs::read_to_string(path)?;
    parse_multicomplex(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub fn read_morphism(path: &Path) -> Result<Morphism> {
    let text = std::fs::read_to_string(path)?;
    parse_morphism(&text, path.parent()).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{Sampler, SamplerConfig};

    const K: &str = r#"{
  "N": 4,
  "field": "Q",
  "modules": {
    "0,0": 1,
    "0,1": 1
  },
  "diffs": [
    {
      "i": 0,
      "from": [
        0,
        0
      ],
      "matrix": [
        [
          "1"
        ]
      ]
    }
  ]
}
"#;

    #[test]
    fn canonical_round_trip() {
        let doc = parse_multicomplex(K).unwrap();
        assert_eq!(doc.complex.total_rank(), 2);
        assert_eq!(print_multicomplex(&doc.complex, false), K);
    }

    #[test]
    fn random_round_trips() {
        for field in [Field::Rational, Field::Prime(5)] {
            let mut s = Sampler::new(9, SamplerConfig::new(3, field));
            for _ in 0..10 {
                let f = s.morphism();
                let text = print_morphism(&f);
                let g = parse_morphism(&text, None).unwrap();
                assert_eq!(f.source_complex(), g.source_complex());
                assert_eq!(print_morphism(&g), text);
            }
        }
    }

    #[test]
    fn diagnostics_name_the_location() {
        let bad = K.replace("[\n          \"1\"\n        ]", "[\n          \"1\", \"2\"\n        ]");
        let e = parse_multicomplex(&bad).unwrap_err().to_string();
        assert!(e.contains("$.diffs[0].matrix[0]"), "{e}");
        let e = parse_multicomplex(r#"{"N": 2, "field": "F4", "modules": {}}"#).unwrap_err().to_string();
        assert!(e.contains("$.field"), "{e}");
        let e = parse_multicomplex(r#"{"N": 2, "field": "Q", "modules": {"x": 1}}"#).unwrap_err().to_string();
        assert!(e.contains("modules"), "{e}");
    }
}
