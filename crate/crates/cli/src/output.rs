use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

/// The JSON report shared by all commands:
/// `{command, config, records, counts, elapsed_s, ...extra}`.
pub struct Envelope {
    pub command: &'static str,
    pub config: Value,
    pub records: Value,
    pub counts: Value,
    pub elapsed_s: f64,
    pub extra: Map<String, Value>,
}

impl Envelope {
    pub fn new(command: &'static str, config: Value) -> Self {
        Envelope {
            command,
            config,
            records: json!([]),
            counts: json!({}),
            elapsed_s: 0.0,
            extra: Map::new(),
        }
    }

    pub fn extra(mut self, key: &str, v: impl Serialize) -> Result<Self, CliError> {
        self.extra.insert(key.into(), serde_json::to_value(v)?);
        Ok(self)
    }

    pub fn write(self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("config".into(), self.config);
        obj.insert("records".into(), self.records);
        obj.insert("counts".into(), self.counts);
        obj.insert("elapsed_s".into(), json!(self.elapsed_s));
        obj.extend(self.extra);
        serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))?;
        writeln!(out)?;
        Ok(())
    }
}

/// Header first, even when there are no rows.
pub fn write_csv<T: Serialize>(
    out: &mut dyn Write,
    header: &[&str],
    rows: &[T],
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
