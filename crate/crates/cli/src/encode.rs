//! JSON encoding: integers as decimal strings, rationals as `n/d`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};
use toric_core::{Cone, Fan, IntVector, QVector};

use crate::CliError;

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn count(n: usize) -> Value {
    Value::String(n.to_string())
}

pub fn ivec(v: &IntVector) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn qvec(v: &QVector) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn ivecs<'a>(vs: impl IntoIterator<Item = &'a IntVector>) -> Value {
    Value::Array(vs.into_iter().map(ivec).collect())
}

pub fn qvecs<'a>(vs: impl IntoIterator<Item = &'a QVector>) -> Value {
    Value::Array(vs.into_iter().map(qvec).collect())
}

pub fn cone(c: &Cone) -> Value {
    let rays = c
        .rays()
        .map(ivecs)
        .unwrap_or_else(|_| ivecs(c.generators()));
    json!({
        "rays": rays,
        "dim": count(c.dim()),
        "regular": c.is_regular(),
    })
}

pub fn fan(f: &Fan) -> Value {
    json!({
        "dim": count(f.dim()),
        "rays": ivecs(&f.rays()),
        "maximal_cones": f
            .maximal_cones()
            .iter()
            .map(|c| ivecs(&c.key()))
            .collect::<Vec<_>>(),
        "regular": f.is_regular(),
    })
}

/// An integer given as a decimal string or a JSON number.
pub fn parse_int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| CliError::usage(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(BigInt::from_str(&n.to_string()).expect("integral number"))
        }
        other => Err(CliError::usage(format!("not an integer: {other}"))),
    }
}

pub fn parse_usize(v: &Value) -> Result<usize, CliError> {
    let n = parse_int(v)?;
    usize::try_from(n).map_err(|_| CliError::usage(format!("not a count: {v}")))
}

pub fn parse_ivec(v: &Value) -> Result<IntVector, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| CliError::usage(format!("expected an integer vector, got {v}")))?;
    Ok(IntVector::new(
        items.iter().map(parse_int).collect::<Result<_, _>>()?,
    ))
}

pub fn parse_ivecs(v: &Value) -> Result<Vec<IntVector>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| CliError::usage(format!("expected a list of vectors, got {v}")))?;
    items.iter().map(parse_ivec).collect()
}
