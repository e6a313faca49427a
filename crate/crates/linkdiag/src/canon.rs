//! Canonical JSON: object keys sorted, no insignificant whitespace.
//!
//! Values are routed through `serde_json::Value`, whose map type is a
//! `BTreeMap`, so key order in the output never depends on struct field
//! order. All numbers in this crate are integers, which keeps the encoding
//! byte-stable.

use serde::Serialize;

use crate::error::Result;

pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}
