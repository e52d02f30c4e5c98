//! Report assembly: every run emits its command line, seed and flags next to
//! the numbers, so a report is enough to reproduce the run bit for bit.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use taylor_ito::Error;

pub struct Report {
    started: Instant,
    fields: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(started: Instant) -> Self {
        let mut fields = serde_json::Map::new();
        let argv: Vec<String> = std::env::args().collect();
        fields.insert("command".to_string(), serde_json::json!(argv));
        Report { started, fields }
    }

    pub fn set<T: serde::Serialize>(&mut self, key: &str, value: T) {
        self.fields.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable"),
        );
    }

    /// Writes the report. In JSON mode the whole object is emitted; in CSV
    /// mode the scalar fields become `#`-prefixed header comments and the
    /// array under `rows_key` becomes the data table with the given columns.
    pub fn emit_rows(
        mut self,
        mut out: Box<dyn Write>,
        csv: bool,
        rows_key: &str,
        columns: &[&str],
    ) -> Result<(), Error> {
        self.fields.insert(
            "elapsed_ms".to_string(),
            serde_json::json!(self.started.elapsed().as_millis() as u64),
        );
        let io_err = |source: std::io::Error| Error::Io {
            path: "<output>".to_string(),
            source,
        };
        if !csv {
            let body = serde_json::to_string_pretty(&serde_json::Value::Object(self.fields))
                .expect("report serializes");
            writeln!(out, "{body}").map_err(io_err)?;
            return Ok(());
        }
        let rows = self
            .fields
            .remove(rows_key)
            .and_then(|v| v.as_array().cloned())
            .unwrap_or_default();
        for (key, value) in &self.fields {
            writeln!(out, "# {key}: {}", compact(value)).map_err(io_err)?;
        }
        writeln!(out, "{}", columns.join(",")).map_err(io_err)?;
        for row in rows {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| row.get(*c).map(compact).unwrap_or_default())
                .collect();
            writeln!(out, "{}", cells.join(",")).map_err(io_err)?;
        }
        Ok(())
    }
}

/// CSV-safe single-token rendering of a JSON value.
fn compact(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(compact).collect();
            inner.join(";")
        }
        other => other.to_string(),
    }
}

pub fn sink(out: Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(&path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}
