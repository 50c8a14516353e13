//! JSON emission: floats at 17 significant digits, complex numbers as
//! `[re, im]`, non-finite values as strings.

use std::io;

use channellab_core::{ComplexMatrix, DensityMatrix, C64};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Compact formatter that writes every float as `d.dddddddddddddddde±x`.
#[derive(Debug, Default, Clone, Copy)]
pub struct RoundTripFormatter;

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` on one line with [`RoundTripFormatter`].
pub fn to_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RoundTripFormatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// sha256 hex of the canonical form: sorted keys, no whitespace.
pub fn digest(value: &Value) -> String {
    let canonical = serde_json::to_vec(value).expect("in-memory serialization cannot fail");
    hex::encode(Sha256::digest(&canonical))
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn complexes(zs: &[C64]) -> Value {
    Value::Array(zs.iter().copied().map(complex).collect())
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| complexes(m.row(i))).collect())
}

pub fn state(rho: &DensityMatrix) -> Value {
    matrix(rho.matrix())
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub tool_version: &'static str,
    pub input_digest: String,
    pub command: &'static str,
    pub report: Value,
    pub warnings: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(command: &'static str, input: &Value, report: Value, warnings: Vec<String>) -> Self {
        ReportEnvelope { tool_version: env!("CARGO_PKG_VERSION"), input_digest: digest(input), command, report, warnings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, f64::MIN_POSITIVE, 0.30000000000000004] {
            let s = to_line(&json!(x));
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(to_line(&json!(0.5)), "5.0000000000000000e-1");
        assert_eq!(to_line(&json!({"n": 3})), r#"{"n":3}"#);
    }

    #[test]
    fn non_finite_values_become_strings() {
        assert_eq!(num(f64::INFINITY), json!("+inf"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(num(f64::NAN), json!("nan"));
    }

    #[test]
    fn digest_ignores_key_order_and_whitespace() {
        let a: Value = serde_json::from_str(r#"{"b": 1, "a": [1.5, 2]}"#).unwrap();
        let b: Value = serde_json::from_str("{\"a\":[1.5,2],\n \"b\":1}").unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert_eq!(digest(&a).len(), 64);
        let c: Value = serde_json::from_str(r#"{"b": 2, "a": [1.5, 2]}"#).unwrap();
        assert_ne!(digest(&a), digest(&c));
    }
}
