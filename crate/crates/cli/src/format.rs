//! JSON encodings of the core types.
//!
//! Rationals are integers or strings `"a/b"`. A p-adic number is a rational
//! (expanded to the working precision), `{"val", "unit", "prec"?}`, or
//! `{"exact_zero": true}`. A universal scalar is any p-adic number or
//! `{"coeffs": [c_0, c_1, …]}` for `Σ c_i Λ^i`.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};
use volog_core::graph::{Cochain, DualGraph, VertexFn};
use volog_core::linalg::Matrix;
use volog_core::padic::{PadicNumber, UniversalScalar};
use volog_core::Rational;

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Working parameters for p-adic values.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub prime: Option<u32>,
    pub precision: u32,
    pub lambda_cap: usize,
}

impl Ctx {
    pub fn prime(&self) -> Result<u32> {
        self.prime.ok_or_else(|| CliError::parse("a prime \"p\" is required for p-adic values"))
    }
}

pub fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::parse(format!("{what}: expected an object")))
}

pub fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| CliError::parse(format!("missing field \"{name}\"")))
}

pub fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::parse(format!("{what}: expected an array")))
}

pub fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| CliError::parse(format!("{what}: expected a string")))
}

pub fn integer(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| CliError::parse(format!("{what}: expected an integer")))
}

pub fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| CliError::parse(format!("{n}: rationals must be integers or \"a/b\" strings"))),
        Value::String(s) => {
            let r: Rational = s.trim().parse().map_err(|_| CliError::parse(format!("\"{s}\" is not a rational")))?;
            Ok(r)
        }
        other => Err(CliError::parse(format!("{other}: expected a rational"))),
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn padic(v: &Value, ctx: &Ctx) -> Result<PadicNumber> {
    let p = ctx.prime()?;
    match v {
        Value::Object(o) => {
            if o.get("exact_zero").and_then(Value::as_bool) == Some(true) {
                return Ok(PadicNumber::zero(p));
            }
            let val = integer(field(v, "val")?, "val")?;
            let unit =
                field(v, "unit")?.as_u64().ok_or_else(|| CliError::parse("unit: expected a nonnegative integer"))?;
            let prec = match o.get("prec") {
                Some(x) => u32::try_from(integer(x, "prec")?).map_err(|_| CliError::parse("prec out of range"))?,
                None => ctx.precision,
            };
            Ok(PadicNumber::new(p, val, unit, prec)?)
        }
        other => Ok(PadicNumber::from_rational(p, &rational(other)?, ctx.precision)?),
    }
}

pub fn universal(v: &Value, ctx: &Ctx) -> Result<UniversalScalar> {
    let p = ctx.prime()?;
    if let Some(coeffs) = v.get("coeffs") {
        let coeffs = array(coeffs, "coeffs")?.iter().map(|c| padic(c, ctx)).collect::<Result<Vec<_>>>()?;
        return Ok(UniversalScalar::from_coeffs(p, coeffs, ctx.lambda_cap)?);
    }
    let c = padic(v, ctx)?;
    let s = if c.is_exact_zero() { UniversalScalar::zero_for(p) } else { UniversalScalar::constant(c) };
    Ok(s.with_cap(ctx.lambda_cap)?)
}

pub fn padic_json(x: &PadicNumber) -> Value {
    if x.is_exact_zero() {
        return json!({ "exact_zero": true });
    }
    match x.valuation() {
        Some(v) => json!({ "val": v, "unit": x.unit(), "prec": x.precision() }),
        None => json!({ "val": x.absolute_precision(), "unit": 0, "prec": 0 }),
    }
}

pub fn universal_json(x: &UniversalScalar) -> Value {
    json!({
        "coeffs": x.coeffs().iter().map(padic_json).collect::<Vec<_>>(),
        "display": x.to_string(),
    })
}

pub fn graph(v: &Value) -> Result<DualGraph> {
    let vertices = array(field(v, "vertices")?, "vertices")?
        .iter()
        .map(|x| string(x, "vertex").map(str::to_owned))
        .collect::<Result<Vec<_>>>()?;
    let edges = array(field(v, "edges")?, "edges")?
        .iter()
        .map(|e| {
            Ok((
                string(field(e, "id")?, "edge id")?.to_owned(),
                string(field(e, "tail")?, "tail")?.to_owned(),
                string(field(e, "head")?, "head")?.to_owned(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualGraph::new(vertices, edges)?)
}

/// Reads `{label: value}` with exactly the given labels, in label order.
fn keyed<T>(v: &Value, labels: &[String], what: &str, mut f: impl FnMut(&Value) -> Result<T>) -> Result<Vec<T>> {
    let o = object(v, what)?;
    let known: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
    if let Some(extra) = o.keys().find(|k| !known.contains(k.as_str())) {
        return Err(CliError::parse(format!("{what}: unknown label \"{extra}\"")));
    }
    labels
        .iter()
        .map(|l| {
            let x = o.get(l).ok_or_else(|| CliError::parse(format!("{what}: missing value for \"{l}\"")))?;
            f(x).map_err(|e| CliError::parse(format!("{what}.{l}: {e}")))
        })
        .collect()
}

fn edge_ids(g: &DualGraph) -> Vec<String> {
    g.edges().iter().map(|e| e.id.clone()).collect()
}

pub fn edge_values<T>(v: &Value, g: &DualGraph, what: &str, f: impl FnMut(&Value) -> Result<T>) -> Result<Vec<T>> {
    keyed(v, &edge_ids(g), what, f)
}

pub fn vertex_values<T>(v: &Value, g: &DualGraph, what: &str, f: impl FnMut(&Value) -> Result<T>) -> Result<Vec<T>> {
    keyed(v, g.vertices(), what, f)
}

pub fn rational_cochain(v: &Value, g: &DualGraph, what: &str) -> Result<Cochain<Rational>> {
    Ok(Cochain::new(edge_values(v, g, what, rational)?))
}

pub fn edge_json<C>(g: &DualGraph, c: &Cochain<C>, f: impl Fn(&C) -> Value) -> Value {
    Value::Object(g.edges().iter().zip(&c.values).map(|(e, x)| (e.id.clone(), f(x))).collect())
}

pub fn vertex_json<C>(g: &DualGraph, u: &VertexFn<C>, f: impl Fn(&C) -> Value) -> Value {
    Value::Object(g.vertices().iter().zip(&u.values).map(|(v, x)| (v.clone(), f(x))).collect())
}

pub fn matrix(v: &Value, what: &str) -> Result<Matrix> {
    let rows = array(v, what)?
        .iter()
        .map(|r| array(r, what)?.iter().map(rational).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(rows).map_err(|e| CliError::parse(format!("{what}: {e:?}")))
}

pub fn vector<T>(v: &Value, what: &str, f: impl FnMut(&Value) -> Result<T>) -> Result<Vec<T>> {
    array(v, what)?.iter().map(f).collect()
}
