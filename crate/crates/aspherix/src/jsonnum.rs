//! Arbitrary-precision integers on the JSON wire: emitted as JSON numbers
//! when they fit in i64 and as decimal strings otherwise; both forms are
//! accepted on input.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn bigint_to_value(n: &BigInt) -> serde_json::Value {
    match i64::try_from(n.clone()) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(n.to_string()),
    }
}

pub fn value_to_bigint(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("non-integer number {n}"))
            }
        }
        serde_json::Value::String(s) => s
            .parse()
            .map_err(|_| format!("bad integer string `{s}`")),
        other => Err(format!("expected integer, found {other}")),
    }
}

pub fn serialize_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for n in v {
        seq.serialize_element(&bigint_to_value(n))?;
    }
    seq.end()
}
