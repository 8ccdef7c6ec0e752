//! JSON reading with pointer-located errors, and canonical writing.
//!
//! Families may be read with members in any order; duplicates are rejected.
//! Output goes through `serde_json::Value`, whose maps keep keys sorted.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ivp::{PairSystem, SystemKind};
use crate::qvec::{QVec, VecFamily};

fn field<'a>(v: &'a Value, base: &str, key: &str) -> Result<&'a Value> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema(pointer_or_root(base), "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| Error::schema(format!("{base}/{key}"), "missing field"))
}

fn pointer_or_root(p: &str) -> String {
    if p.is_empty() {
        "/".to_string()
    } else {
        p.to_string()
    }
}

fn read_q(v: &Value, base: &str) -> Result<u8> {
    let ptr = format!("{base}/q");
    let q = field(v, base, "q")?
        .as_u64()
        .ok_or_else(|| Error::schema(&ptr, "expected a non-negative integer"))?;
    match u8::try_from(q) {
        Ok(q) if q >= 1 => Ok(q),
        _ => Err(Error::schema(ptr, format!("q must lie in 1..=255, got {q}"))),
    }
}

fn read_uint(v: &Value, base: &str, key: &str) -> Result<u64> {
    field(v, base, key)?
        .as_u64()
        .ok_or_else(|| Error::schema(format!("{base}/{key}"), "expected a non-negative integer"))
}

fn read_entries(v: &Value, ptr: &str, q: u8, n: Option<usize>) -> Result<Vec<u8>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::schema(ptr, "expected an array of entries"))?;
    if let Some(n) = n {
        if arr.len() != n {
            return Err(Error::schema(ptr, format!("expected {n} entries, got {}", arr.len())));
        }
    }
    arr.iter()
        .enumerate()
        .map(|(i, e)| {
            let at = format!("{ptr}/{i}");
            let x = e
                .as_u64()
                .ok_or_else(|| Error::schema(&at, "expected a non-negative integer"))?;
            if x > u64::from(q) {
                return Err(Error::schema(at, format!("entry {x} exceeds q={q}")));
            }
            Ok(x as u8)
        })
        .collect()
}

/// Reads `{"q", "entries"}`.
pub fn qvec_from_value(v: &Value) -> Result<QVec> {
    let q = read_q(v, "")?;
    let entries = read_entries(field(v, "", "entries")?, "/entries", q, None)?;
    QVec::new(q, entries)
}

/// Reads `{"q", "n", "members"}`, sorting members into colex order.
pub fn family_from_value(v: &Value) -> Result<VecFamily> {
    let q = read_q(v, "")?;
    let n = read_uint(v, "", "n")? as usize;
    let members = field(v, "", "members")?
        .as_array()
        .ok_or_else(|| Error::schema("/members", "expected an array"))?;
    let mut rows = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        rows.push((i, read_entries(m, &format!("/members/{i}"), q, Some(n))?));
    }
    rows.sort_by(|a, b| crate::qvec::colex_cmp_entries(&a.1, &b.1).then(a.0.cmp(&b.0)));
    if let Some(w) = rows.windows(2).find(|w| w[0].1 == w[1].1) {
        return Err(Error::schema(
            format!("/members/{}", w[0].0.max(w[1].0)),
            format!("duplicate of /members/{}", w[0].0.min(w[1].0)),
        ));
    }
    let members = rows.into_iter().map(|(_, e)| QVec::from_trusted(q, e)).collect();
    Ok(VecFamily::from_sorted_unchecked(n, q, members))
}

/// Reads `{"q", "s", "kind", "pairs": [{"x", "y"}]}`.
pub fn system_from_value(v: &Value) -> Result<PairSystem> {
    let q = read_q(v, "")?;
    let s = read_uint(v, "", "s")?;
    let s = u32::try_from(s)
        .ok()
        .filter(|&s| s >= 1)
        .ok_or_else(|| Error::schema("/s", format!("s must be a positive 32-bit integer, got {s}")))?;
    let kind = match field(v, "", "kind")?.as_str() {
        Some("strong") => SystemKind::Strong,
        Some("weak") => SystemKind::Weak,
        _ => return Err(Error::schema("/kind", "expected \"strong\" or \"weak\"")),
    };
    let pairs = field(v, "", "pairs")?
        .as_array()
        .ok_or_else(|| Error::schema("/pairs", "expected an array"))?;
    let mut n = None;
    let mut rows = Vec::with_capacity(pairs.len());
    for (i, p) in pairs.iter().enumerate() {
        let base = format!("/pairs/{i}");
        let x = read_entries(field(p, &base, "x")?, &format!("{base}/x"), q, n)?;
        n = Some(x.len());
        let y = read_entries(field(p, &base, "y")?, &format!("{base}/y"), q, n)?;
        rows.push((x, y));
    }
    Ok(PairSystem::from_entries(q, s, kind, rows))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::schema("/", e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::schema("/", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::schema(
            "/",
            format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}
