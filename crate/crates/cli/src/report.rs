//! Ordered key/value reports, rendered as `key=value` lines or JSON.

use serde_json::{Map, Value};

#[derive(Debug, Default, Clone)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.fields.iter().cloned().collect();
            let mut out =
                serde_json::to_string_pretty(&Value::Object(map)).expect("values serialize");
            out.push('\n');
            return out;
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            flatten(k, v, &mut out);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Scalars print as is, arrays of scalars comma-joined, anything nested
/// under dotted keys.
fn flatten(key: &str, v: &Value, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{key}={s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            let joined: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{key}={}\n", joined.join(",")));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{key}.{i}"), item, out);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten(&format!("{key}.{k}"), item, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
