//! Locale-free number formatting and CSV/JSON emission.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Formats `v` with `digits` significant digits, in positional notation for
/// moderate exponents and scientific notation otherwise.
pub fn format_sig(v: f64, digits: u8) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1) as i32;
    let sci = format!("{:.*e}", (digits - 1) as usize, v);
    // the exponent after rounding decides the layout
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..digits).contains(&exp) {
        let decimals = (digits - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

fn rounded(v: f64, digits: u8) -> Value {
    match format_sig(v, digits).parse::<f64>() {
        Ok(r) if r.is_finite() => json!(r),
        _ => Value::Null,
    }
}

/// Rows of numbers under named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    #[cfg(test)]
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Header line then one line per row, `\n` terminated.
    pub fn to_csv(&self, digits: u8) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON document with `metadata` merged at top level.
    pub fn to_json(&self, digits: u8, metadata: Map<String, Value>) -> String {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.extend(metadata);
        doc.insert("columns".into(), json!(self.columns));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&v| rounded(v, digits)).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        to_pretty(&Value::Object(doc))
    }
}

/// Rounds every number in a JSON tree to `digits` significant digits.
pub fn round_json(value: Value, digits: u8) -> Value {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(f) if !(n.is_i64() || n.is_u64()) => rounded(f, digits),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(|v| round_json(v, digits)).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v, digits))).collect()),
        other => other,
    }
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.053_736_588_158_633, 9), "1.05373659");
        assert_eq!(format_sig(0.082_649_444_110_793, 9), "0.0826494441");
        assert_eq!(format_sig(1.8, 9), "1.80000000");
        assert_eq!(format_sig(-4.0, 3), "-4.00");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(123_456_789_012.0, 9), "1.23456789e11");
        assert_eq!(format_sig(1.5e-7, 3), "1.50e-7");
        assert_eq!(format_sig(9.999_999_999_6, 9), "10.0000000");
        assert_eq!(format_sig(f64::NAN, 9), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["tau".into(), "n1".into()]);
        t.push(vec![0.0, 0.0]);
        t.push(vec![0.5, 0.271_540_317_407_621_9]);
        assert_eq!(t.to_csv(6), "tau,n1\n0,0\n0.500000,0.271540\n");
        assert_eq!(t.column("n1").unwrap()[1], 0.271_540_317_407_621_9);
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(vec!["y".into()]);
        t.push(vec![1.0 / 3.0]);
        let mut meta = Map::new();
        meta.insert("preset".into(), json!("fig1b"));
        let v: Value = serde_json::from_str(&t.to_json(4, meta)).unwrap();
        assert_eq!(v["schema_version"], json!(1));
        assert_eq!(v["preset"], json!("fig1b"));
        assert_eq!(v["rows"][0][0], json!(0.3333));
        assert_eq!(round_json(json!({"a": [2.0 / 3.0, 7]}), 3), json!({"a": [0.667, 7]}));
    }
}
