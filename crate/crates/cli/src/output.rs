use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// Version of every JSON document written by the tool.
pub const SCHEMA: u32 = 1;

fn io_err(what: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{what}: {e}"))
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file; standard output when `path` is absent.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).map_err(|e| io_err("stdout", e))?;
        return out.flush().map_err(|e| io_err("stdout", e));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(&dir.display().to_string(), e))?;
    tmp.write_all(bytes).map_err(|e| io_err("temporary file", e))?;
    tmp.as_file().sync_all().map_err(|e| io_err("temporary file", e))?;
    tmp.persist(path).map_err(|e| io_err(&path.display().to_string(), e.error))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| io_err("serialize", e))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// `{"schema": 1, "command": ..., ...extra}`.
pub fn envelope(command: &str, extra: Value) -> Value {
    let mut doc = json!({ "schema": SCHEMA, "command": command });
    if let (Some(m), Value::Object(e)) = (doc.as_object_mut(), extra) {
        m.extend(e);
    }
    doc
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// CSV of an array of flat JSON objects; the header is the key set of the
/// first row, nested values are written as JSON text.
pub fn rows_csv(rows: &[Value]) -> Result<Vec<u8>, CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let Some(Value::Object(first)) = rows.first() else {
        return wtr.into_inner().map_err(|e| io_err("csv", e));
    };
    let keys: Vec<String> = first.keys().cloned().collect();
    wtr.write_record(&keys).map_err(|e| io_err("csv", e))?;
    for row in rows {
        let rec: Vec<String> = keys.iter().map(|k| row.get(k).map(cell).unwrap_or_default()).collect();
        wtr.write_record(&rec).map_err(|e| io_err("csv", e))?;
    }
    wtr.into_inner().map_err(|e| io_err("csv", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        emit(Some(&path), b"one").unwrap();
        emit(Some(&path), b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn flat_rows_to_csv() {
        let rows = vec![json!({"a": 0.5, "b": "x", "c": true}), json!({"a": 2, "b": "y", "c": false})];
        let s = String::from_utf8(rows_csv(&rows).unwrap()).unwrap();
        assert_eq!(s, "a,b,c\n5e-1,x,true\n2,y,false\n");
    }

    #[test]
    fn envelope_carries_schema() {
        let v = envelope("sweep", json!({"rows": []}));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "sweep");
    }
}
