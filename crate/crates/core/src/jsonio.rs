//! Wire formats: the domain spec JSON and a deterministic report serializer.
//!
//! Reports are emitted with every float at 17 significant digits (which
//! round-trips f64 exactly), so identical requests against a warm cache
//! produce byte-identical documents.

use crate::domain::{ShadowDomain, ShadowKind};
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

/// Parse the domain spec wire format:
///
/// ```text
/// {"type":"bidisk","r":1.0,"s":1.0}
/// {"type":"ball","radius":1.0}
/// {"type":"egg","p":2.0,"q":4.0}
/// {"type":"polygon","vertices":[[0,1],[0.5,1],[1,0]]}
/// ```
///
/// Unknown keys are rejected. (Hand-validated rather than derived: the tag
/// field and per-variant key sets need exact unknown-key errors.)
pub fn parse_domain_spec(text: &str) -> Result<ShadowDomain> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("domain spec: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidSpec("domain spec must be a JSON object".into()))?;
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidSpec("missing string field \"type\"".into()))?;

    let allowed: &[&str] = match kind {
        "bidisk" => &["type", "r", "s"],
        "ball" => &["type", "radius"],
        "egg" => &["type", "p", "q"],
        "polygon" => &["type", "vertices"],
        other => {
            return Err(Error::InvalidSpec(format!(
                "unknown domain type {other:?} (expected bidisk, ball, egg, or polygon)"
            )))
        }
    };
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::InvalidSpec(format!(
                "unknown field {key:?} for type {kind:?}"
            )));
        }
    }

    let number = |field: &str| -> Result<f64> {
        obj.get(field)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::InvalidSpec(format!("missing numeric field {field:?}")))
    };

    match kind {
        "bidisk" => ShadowDomain::bidisk(number("r")?, number("s")?),
        "ball" => ShadowDomain::ball(number("radius")?),
        "egg" => ShadowDomain::egg(number("p")?, number("q")?),
        "polygon" => {
            let raw = obj
                .get("vertices")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidSpec("missing array field \"vertices\"".into()))?;
            let mut vertices = Vec::with_capacity(raw.len());
            for (i, v) in raw.iter().enumerate() {
                let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    Error::InvalidSpec(format!("vertex {i} must be a [x, y] pair"))
                })?;
                let x = pair[0]
                    .as_f64()
                    .ok_or_else(|| Error::InvalidSpec(format!("vertex {i}: x must be a number")))?;
                let y = pair[1]
                    .as_f64()
                    .ok_or_else(|| Error::InvalidSpec(format!("vertex {i}: y must be a number")))?;
                vertices.push((x, y));
            }
            ShadowDomain::polygon(vertices)
        }
        _ => unreachable!("kind validated above"),
    }
}

/// Serialize a domain back to its spec wire format.
pub fn domain_spec_string(domain: &ShadowDomain) -> String {
    match domain.kind() {
        ShadowKind::Bidisk { r, s } => {
            format!(
                "{{\"type\":\"bidisk\",\"r\":{},\"s\":{}}}",
                fmt_f64(*r),
                fmt_f64(*s)
            )
        }
        ShadowKind::Ball { radius } => {
            format!("{{\"type\":\"ball\",\"radius\":{}}}", fmt_f64(*radius))
        }
        ShadowKind::Egg { p, q } => {
            format!(
                "{{\"type\":\"egg\",\"p\":{},\"q\":{}}}",
                fmt_f64(*p),
                fmt_f64(*q)
            )
        }
        ShadowKind::Polygon { vertices } => {
            let body: Vec<String> = vertices
                .iter()
                .map(|v| format!("[{},{}]", fmt_f64(v.x), fmt_f64(v.y)))
                .collect();
            format!("{{\"type\":\"polygon\",\"vertices\":[{}]}}", body.join(","))
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// serde_json formatter that writes every float with 17 significant digits.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize any report to compact JSON with deterministic float text.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidSpec(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
