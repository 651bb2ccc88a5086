use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliResult;

/// Ordered `(key, value)` settings recorded in every output.
pub type Header = Vec<(String, String)>;

/// `x` with 12 significant digits, fixed notation for moderate magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // the exponent after rounding to 12 digits, so 0.99999999999999 → 1.00…
    let sci = format!("{x:.11e}");
    let mag: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-4..12).contains(&mag) {
        format!("{:.*}", (11 - mag) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

/// `# key=value` comment lines.
pub fn comment_lines(h: &Header) -> String {
    h.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
}

/// `body` serialized as a JSON object with the header under `"config"`.
pub fn json_with_config<T: Serialize>(h: &Header, body: &T) -> CliResult<String> {
    let config: Map<String, Value> = h.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let mut obj = match serde_json::to_value(body)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("config".into(), Value::Object(config));
    let mut s = serde_json::to_string_pretty(&Value::Object(obj))?;
    s.push('\n');
    Ok(s)
}

/// Write to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// CSV text for `rows` under the header comment block.
pub fn csv_with_header<T: Serialize>(h: &Header, rows: &[T]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
        .expect("csv output is UTF-8");
    Ok(comment_lines(h) + &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(1.0123456789012345), "1.01234567890");
        assert_eq!(sig12(123.456), "123.456000000");
        assert_eq!(sig12(0.001), "0.00100000000000");
        assert_eq!(sig12(1e-7), "1.00000000000e-7");
        assert_eq!(sig12(0.99999999999999), "1.00000000000");
        assert_eq!(sig12(-2.5), "-2.50000000000");
    }

    #[test]
    fn config_is_embedded() {
        let h = vec![("seed".to_string(), "3".to_string())];
        let s = json_with_config(&h, &serde_json::json!({"mu": 1.0})).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["config"]["seed"], "3");
        assert_eq!(v["mu"], 1.0);
        assert_eq!(comment_lines(&h), "# seed=3\n");
    }
}
