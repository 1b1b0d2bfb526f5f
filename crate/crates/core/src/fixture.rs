//! JSON fixtures: an algebra, named elements and operators, and a seed.
//!
//! Reals are written with 17 significant digits so that parsing the output
//! reproduces every coordinate bit for bit.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use nalgebra::DMatrix;
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraKind, Element, VOperator};

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub algebra: Algebra,
    pub elements: BTreeMap<String, Element>,
    pub operators: BTreeMap<String, VOperator>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {path}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Dotted field path, e.g. `elements.x[2]`.
    pub path: String,
    pub message: String,
}

/// JSON object entries in document order, keeping duplicates.
struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some(kv) = map.next_entry::<String, Value>()? {
                    out.push(kv);
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
struct RawFixture {
    algebra: Option<Value>,
    #[serde(default)]
    elements: Option<Entries>,
    #[serde(default)]
    operators: Option<Entries>,
    seed: Option<Value>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    /// Position of the last path key found by successive forward search.
    fn locate(&self, keys: &[&str]) -> (usize, usize) {
        let mut pos = 0;
        for key in keys {
            let needle = format!("\"{key}\"");
            if let Some(i) = self.text[pos..].find(&needle) {
                pos += i;
            }
        }
        let before = &self.text[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, column)
    }

    fn err(&self, keys: &[&str], path: impl Into<String>, message: impl Into<String>) -> ParseError {
        let (line, column) = self.locate(keys);
        ParseError { line, column, path: path.into(), message: message.into() }
    }
}

fn parse_kind(v: &Value, path: &str, ctx: &Ctx) -> Result<AlgebraKind, ParseError> {
    let obj = v.as_object().ok_or_else(|| ctx.err(&["algebra"], path, "expected an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ctx.err(&["algebra"], format!("{path}.kind"), "missing or non-string kind"))?;
    let size = || {
        obj.get("n")
            .and_then(Value::as_u64)
            .map(|n| n as usize)
            .ok_or_else(|| ctx.err(&["algebra", "n"], format!("{path}.n"), "missing or non-integer n"))
    };
    match kind {
        "sym" => Ok(AlgebraKind::SymReal(size()?)),
        "herm" => Ok(AlgebraKind::HermComplex(size()?)),
        "spin" => Ok(AlgebraKind::SpinFactor(size()?)),
        "sum" => {
            let parts = obj.get("summands").and_then(Value::as_array).ok_or_else(|| {
                ctx.err(&["algebra", "summands"], format!("{path}.summands"), "missing summands array")
            })?;
            parts
                .iter()
                .enumerate()
                .map(|(i, p)| parse_kind(p, &format!("{path}.summands[{i}]"), ctx))
                .collect::<Result<Vec<_>, _>>()
                .map(AlgebraKind::DirectSum)
        }
        other => Err(ctx.err(&["algebra", "kind"], format!("{path}.kind"), format!("unknown kind {other:?}"))),
    }
}

fn parse_reals(v: &Value, keys: &[&str], path: &str, ctx: &Ctx) -> Result<Vec<f64>, ParseError> {
    let arr = v.as_array().ok_or_else(|| ctx.err(keys, path, "expected an array of reals"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_f64().ok_or_else(|| ctx.err(keys, format!("{path}[{i}]"), "expected a real")))
        .collect()
}

pub fn parse_fixture(text: &str) -> Result<Fixture, ParseError> {
    let ctx = Ctx { text };
    let raw: RawFixture = serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        path: String::from("$"),
        message: e.to_string(),
    })?;
    let algebra_v = raw.algebra.ok_or_else(|| ctx.err(&[], "algebra", "missing field"))?;
    let kind = parse_kind(&algebra_v, "algebra", &ctx)?;
    let algebra = Algebra::new(kind).map_err(|e| ctx.err(&["algebra"], "algebra", e.to_string()))?;
    let dim = algebra.dim();

    let seed = match raw.seed {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| ctx.err(&["seed"], "seed", "expected a non-negative integer"))?,
    };

    let mut elements = BTreeMap::new();
    for (name, v) in raw.elements.map(|e| e.0).unwrap_or_default() {
        let path = format!("elements.{name}");
        let keys = ["elements", name.as_str()];
        let coords = parse_reals(&v, &keys, &path, &ctx)?;
        if coords.len() != dim {
            return Err(ctx.err(
                &keys,
                path,
                format!("element {name:?} has {} coordinates, algebra {algebra} needs {dim}", coords.len()),
            ));
        }
        let el = Element::new(&algebra, coords).map_err(|e| ctx.err(&keys, path.clone(), e.to_string()))?;
        if elements.insert(name.clone(), el).is_some() {
            return Err(ctx.err(&keys, format!("elements.{name}"), "duplicate name"));
        }
    }

    let mut operators = BTreeMap::new();
    for (name, v) in raw.operators.map(|e| e.0).unwrap_or_default() {
        let path = format!("operators.{name}");
        let keys = ["operators", name.as_str()];
        let rows = v.as_array().ok_or_else(|| ctx.err(&keys, path.clone(), "expected an array of rows"))?;
        if rows.len() != dim {
            return Err(ctx.err(&keys, path, format!("operator {name:?} has {} rows, expected {dim}", rows.len())));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (r, row) in rows.iter().enumerate() {
            let row_path = format!("{path}[{r}]");
            let vals = parse_reals(row, &keys, &row_path, &ctx)?;
            if vals.len() != dim {
                return Err(ctx.err(&keys, row_path, format!("row has {} entries, expected {dim}", vals.len())));
            }
            for (c, x) in vals.into_iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        let op = VOperator::new(&algebra, m).map_err(|e| ctx.err(&keys, path.clone(), e.to_string()))?;
        if operators.insert(name.clone(), op).is_some() {
            return Err(ctx.err(&keys, path, "duplicate name"));
        }
    }
    Ok(Fixture { algebra, elements, operators, seed })
}

/// A real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_kind(out: &mut String, kind: &AlgebraKind) {
    match kind {
        AlgebraKind::SymReal(n) => write!(out, "{{\"kind\": \"sym\", \"n\": {n}}}"),
        AlgebraKind::HermComplex(n) => write!(out, "{{\"kind\": \"herm\", \"n\": {n}}}"),
        AlgebraKind::SpinFactor(d) => write!(out, "{{\"kind\": \"spin\", \"n\": {d}}}"),
        AlgebraKind::DirectSum(parts) => {
            out.push_str("{\"kind\": \"sum\", \"summands\": [");
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_kind(out, p);
            }
            out.push_str("]}");
            Ok(())
        }
    }
    .expect("writing to a String");
}

fn write_reals<'a>(out: &mut String, xs: impl IntoIterator<Item = &'a f64>) {
    out.push('[');
    for (i, x) in xs.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_real(*x));
    }
    out.push(']');
}

pub fn serialize_fixture(f: &Fixture) -> String {
    let mut out = String::from("{\n  \"algebra\": ");
    write_kind(&mut out, f.algebra.kind());
    out.push_str(",\n  \"elements\": {");
    for (i, (name, el)) in f.elements.iter().enumerate() {
        out.push_str(if i > 0 { ",\n    " } else { "\n    " });
        out.push_str(&serde_json::to_string(name).expect("string"));
        out.push_str(": ");
        write_reals(&mut out, el.as_slice());
    }
    out.push_str(if f.elements.is_empty() { "}" } else { "\n  }" });
    out.push_str(",\n  \"operators\": {");
    for (i, (name, op)) in f.operators.iter().enumerate() {
        out.push_str(if i > 0 { ",\n    " } else { "\n    " });
        out.push_str(&serde_json::to_string(name).expect("string"));
        out.push_str(": [");
        let m = op.matrix();
        for r in 0..m.nrows() {
            if r > 0 {
                out.push_str(",\n      ");
            } else {
                out.push_str("\n      ");
            }
            write_reals(&mut out, m.row(r).iter());
        }
        out.push_str("\n    ]");
    }
    out.push_str(if f.operators.is_empty() { "}" } else { "\n  }" });
    write!(out, ",\n  \"seed\": {}\n}}\n", f.seed).expect("writing to a String");
    out
}

impl Fixture {
    pub fn new(algebra: &Algebra, seed: u64) -> Self {
        Fixture { algebra: algebra.clone(), elements: BTreeMap::new(), operators: BTreeMap::new(), seed }
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements.get(name)
    }

    pub fn operator(&self, name: &str) -> Option<&VOperator> {
        self.operators.get(name)
    }
}
