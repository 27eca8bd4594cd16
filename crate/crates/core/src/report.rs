//! Deterministic report rendering.
//!
//! JSON objects are written with keys in sorted order, floats with nine
//! significant digits and integers verbatim. Non-finite floats become `null`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Nine significant digits, fixed notation for exponents in `[-5, 9)`,
/// scientific otherwise. Independent of locale.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&e) {
        format!("{:.*}", (8 - e).max(0) as usize, x)
    } else {
        format!("{mantissa}e{e}")
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => {
            if num.is_f64() {
                let x = num.as_f64().unwrap();
                if x.is_finite() {
                    out.push_str(&format_sig9(x));
                } else {
                    out.push_str("null");
                }
            } else {
                out.push_str(&num.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(x, indent, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, x) in items.iter().enumerate() {
                    out.push_str(&"  ".repeat(indent + 1));
                    write_value(x, indent + 1, out);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                write_value(&map[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// Renders any serializable value, ending with a newline.
pub fn to_json<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Numeric(e.to_string()))?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

/// Common report envelope: schema version, resolved config, seed, the even
/// edge-endpoint total actually used, and the logarithm convention.
pub fn envelope<C: Serialize, R: Serialize>(
    kind: &str,
    config: &C,
    seed: u64,
    target_total: Option<u64>,
    result: &R,
) -> Result<Value> {
    let conv = |e: serde_json::Error| Error::Numeric(e.to_string());
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": serde_json::to_value(config).map_err(conv)?,
        "seed": seed,
        "target_total": target_total,
        "log_base": "natural",
        "result": serde_json::to_value(result).map_err(conv)?,
    }))
}

/// CSV text with a fixed header line.
pub fn csv<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut s = format!("{header}\n");
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9() {
        assert_eq!(format_sig9(2.0), "2.00000000");
        assert_eq!(format_sig9(4.0), "4.00000000");
        assert_eq!(format_sig9(0.0), "0.00000000");
        assert_eq!(format_sig9(-1.0 / 3.0), "-0.333333333");
        assert_eq!(format_sig9(13.815510557964274), "13.8155106");
        assert_eq!(format_sig9(9.9999999999), "10.0000000");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1.5e9), "1.50000000e9");
        assert_eq!(format_sig9(1.25e-7), "1.25000000e-7");
        assert_eq!(format_sig9(0.00012345), "0.000123450000");
    }

    #[test]
    fn json_is_sorted_and_stable() {
        #[derive(Serialize)]
        #[allow(non_snake_case)]
        struct R {
            phi: f64,
            lambda2_L: f64,
            n: usize,
            tags: Vec<u32>,
            missing: f64,
        }
        let r = R { phi: 2.0, lambda2_L: 4.0, n: 4, tags: vec![1, 2], missing: f64::NAN };
        let s = to_json(&r).unwrap();
        assert_eq!(
            s,
            "{\n  \"lambda2_L\": 4.00000000,\n  \"missing\": null,\n  \"n\": 4,\n  \
             \"phi\": 2.00000000,\n  \"tags\": [1, 2]\n}\n"
        );
        assert_eq!(s, to_json(&r).unwrap());
    }

    #[test]
    fn envelope_fields() {
        let v = envelope("spectral", &json!({"n": 4}), 7, Some(12), &json!({})).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["target_total"], 12);
        assert_eq!(v["log_base"], "natural");
    }

    #[test]
    fn csv_header_only() {
        assert_eq!(csv("a,b", Vec::<Vec<String>>::new()), "a,b\n");
    }
}
