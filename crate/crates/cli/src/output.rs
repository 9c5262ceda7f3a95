//! Fixed-point CSV and JSON emitters.
//!
//! Every real is written as a decimal string with a fixed number of fractional
//! digits, so repeated runs are byte-identical and diffable. JSON keys keep
//! insertion order.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy)]
pub struct Fmt {
    pub digits: usize,
}

impl Fmt {
    pub fn num(&self, x: f64) -> String {
        if x.is_finite() {
            let s = format!("{:.*}", self.digits, x);
            // "-0.000" carries no sign information at this precision
            if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
                return s[1..].to_string();
            }
            s
        } else if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    }

    pub fn json(&self, x: f64) -> Value {
        Value::String(self.num(x))
    }
}

pub fn int(x: impl std::fmt::Display) -> Value {
    Value::String(x.to_string())
}

/// Builder for an insertion-ordered JSON object.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self(Map::new())
    }

    pub fn put(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("string-keyed JSON always serializes");
    s.push('\n');
    s
}

pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
