use clap::ValueEnum;
use dgla_deform::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Obstructed,
    NotEquivalent,
    /// A check ran and came out false: failed validation, unmet hypotheses,
    /// a criterion that does not apply.
    Negative,
    Unknown,
    InvalidInput,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, status: Status, payload: Value) -> Self {
        Report {
            command: command.into(),
            status,
            payload,
        }
    }

    pub fn invalid(command: impl Into<String>, e: &Error) -> Self {
        let payload = match e {
            Error::Parse { path, message } => json!({ "error": message, "path": path }),
            other => json!({ "error": other.to_string() }),
        };
        Report::new(command, Status::InvalidInput, payload)
    }

    /// A command line that does not parse.
    pub fn usage(message: &str) -> Self {
        let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
        Report::new(
            "",
            Status::InvalidInput,
            json!({ "error": first, "usage": message.trim_end() }),
        )
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Ok => 0,
            Status::InvalidInput => 2,
            _ => 1,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize"),
            Format::Text => {
                let status = serde_json::to_value(self.status).expect("status serializes");
                let mut out = format!("{}: {}\n", self.command, status.as_str().unwrap_or_default());
                text(&self.payload, 1, &mut out);
                out.trim_end().to_string()
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(item, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
