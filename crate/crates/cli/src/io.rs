use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Name, size and SHA-256 of one written file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Writes `data` to `dir/name` through a sibling temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, data: &[u8]) -> std::io::Result<Artifact> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(data)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(name))?;
    Ok(Artifact {
        file: name.to_string(),
        bytes: data.len(),
        sha256: sha256_hex(data),
    })
}

/// Comma-separated table with a leading `schema_version=1` line and a
/// header row. Floats use the shortest representation that round-trips.
pub struct CsvTable {
    buf: String,
    width: usize,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        let mut buf = format!("schema_version={SCHEMA_VERSION}\n");
        let header: Vec<&str> = columns.iter().map(AsRef::as_ref).collect();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self { buf, width: columns.len() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.width, "row width");
        for (k, c) in cells.iter().enumerate() {
            if k > 0 {
                self.buf.push(',');
            }
            match *c {
                Cell::Int(v) => write!(self.buf, "{v}"),
                Cell::Float(v) => write!(self.buf, "{v:?}"),
                Cell::Bool(v) => write!(self.buf, "{}", u8::from(v)),
            }
            .expect("writing to a String");
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
