//! Atomic JSON and CSV emission.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;

pub const SCHEMA: u32 = 1;

/// Writes to a sibling temporary file and renames it into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with a leading `"schema"` field.
pub fn write_json<T: Serialize>(path: &Path, body: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(&Versioned { schema: SCHEMA, body })?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// RFC 4180 CSV with an explicit header; rows are already stringified.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    atomic_write(path, &bytes)
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    outputs: Vec<String>,
    elapsed_ms: u128,
}

/// Timing metadata, kept apart from the deterministic outputs.
pub fn write_meta(dir: &Path, command: &str, outputs: &[PathBuf], elapsed: Duration) -> Result<()> {
    let meta = Meta {
        command,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        elapsed_ms: elapsed.as_millis(),
    };
    write_json(&dir.join(format!("{command}.meta.json")), &meta)
}

/// Filename-safe form of a scenario name.
pub fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_schema_first() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.json");
        #[derive(Serialize)]
        struct T {
            x: u32,
        }
        write_json(&p, &T { x: 3 }).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("{\n  \"schema\": 1,\n  \"x\": 3"));
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn csv_quotes() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&p, &["a", "b"], &[vec!["1".into(), "x, y".into()]]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\r\n1,\"x, y\"\r\n");
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("hyperbola:1/10"), "hyperbola_1_10");
    }
}
