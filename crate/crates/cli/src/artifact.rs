//! Output plumbing: versioned JSON documents and CSV files with a config header.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{Map, Value};

use levyspec::SCHEMA;

pub struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Sink { out }
    }

    pub fn raw(&self, text: &str) -> std::io::Result<()> {
        self.write(text)
    }

    fn write(&self, text: &str) -> std::io::Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text),
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(text.as_bytes())?;
                o.flush()
            }
        }
    }

    /// One JSON object: `schema`, `command`, `config`, then the fields of `body`
    /// (or `body` under `result` when it is not an object). Keys come out sorted.
    pub fn json(&self, command: &str, config: Value, body: &impl Serialize) -> std::io::Result<()> {
        let mut doc = Map::new();
        match serde_json::to_value(body).expect("serializable") {
            Value::Object(m) => doc.extend(m),
            v => {
                doc.insert("result".into(), v);
            }
        }
        doc.insert("schema".into(), SCHEMA.into());
        doc.insert("command".into(), command.into());
        doc.insert("config".into(), config);
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        self.write(&s)
    }

    /// `# schema: ...`, `# config: {...}`, the header row, then `rows`.
    pub fn csv(&self, command: &str, config: Value, header: &str, rows: &[String]) -> std::io::Result<()> {
        let mut s = format!("# schema: {SCHEMA}\n# command: {command}\n# config: {config}\n{header}\n");
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        self.write(&s)
    }
}
