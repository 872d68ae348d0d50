//! CSV and file helpers shared by every emitted artifact.
//!
//! Every CSV starts with a `# schema: <name> v<N>` comment line followed by
//! a header row.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub fn csv_writer<W: Write>(mut out: W, schema: &str) -> Result<csv::Writer<W>> {
    writeln!(out, "# schema: {schema} v{SCHEMA_VERSION}").map_err(|e| Error::io(schema, e))?;
    Ok(csv::WriterBuilder::new().has_headers(false).from_writer(out))
}

pub fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Write `rows` (serde records with named fields) as a schema-tagged CSV.
pub fn write_rows<T: Serialize>(path: &Path, schema: &str, rows: &[T]) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "# schema: {schema} v{SCHEMA_VERSION}").map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv_reader(open(path)?);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row.map_err(|e| Error::parse(path, e))?);
    }
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Row {
        a: u32,
        b: f64,
    }

    #[test]
    fn rows_round_trip_with_schema_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let rows = vec![Row { a: 1, b: 0.1 }, Row { a: 2, b: -3.5e-7 }];
        write_rows(&path, "demo", &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# schema: demo v1\na,b\n"));
        assert_eq!(read_rows::<Row>(&path).unwrap(), rows);
    }
}
