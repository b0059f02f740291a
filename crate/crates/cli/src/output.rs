use serde::Serialize;
use std::io::Write;
use std::path::Path;

use crate::Fail;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown output format '{s}'")),
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, Fail> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Fail::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV with a header row, from already-stringified cells.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, Fail> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| Fail::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| Fail::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Fail::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Fail::Io(e.to_string()))
}

/// Writes to `path` through a temporary file in the same directory and a
/// rename, or to stdout.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), Fail> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(content.as_bytes())
            .map_err(|e| Fail::Io(e.to_string()));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Fail::Io(e.to_string()))?;
    tmp.write_all(content.as_bytes())
        .map_err(|e| Fail::Io(e.to_string()))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| Fail::Io(e.to_string()))?;
    tmp.persist(path).map_err(|e| Fail::Io(e.to_string()))?;
    Ok(())
}
