//! CSV sinks and run manifests.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Rows accumulated in memory so the bytes can be hashed for the manifest.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[&dyn std::fmt::Display]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(&f.to_string());
        }
        self.buf.push('\n');
    }

    /// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
    pub fn num(x: f64) -> String {
        if x == 0.0 || (1e-4..1e15).contains(&x.abs()) || !x.is_finite() {
            x.to_string()
        } else {
            format!("{x:e}")
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.buf.as_bytes()
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Sidecar written next to figure data. File names are stored without
/// directories so moving the bundle keeps the manifest byte-identical.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Map<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Map<String, Value>, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            params,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
        }
    }

    /// Writes `bytes` to `path` and records its checksum.
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> io::Result<()> {
        fs::write(path, bytes)?;
        let file = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.outputs.push(OutputRecord {
            file,
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    /// `data.csv` -> `data.manifest.json`
    pub fn path_for(data: &Path) -> PathBuf {
        data.with_extension("manifest.json")
    }

    pub fn finish(&self, data: &Path) -> io::Result<PathBuf> {
        let path = Self::path_for(data);
        let mut json = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        json.push('\n');
        fs::write(&path, json)?;
        Ok(path)
    }
}

/// `dir/name.csv` -> `dir/name.<suffix>.csv`
pub fn sibling(data: &Path, suffix: &str) -> PathBuf {
    let stem = data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let ext = data
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    data.with_file_name(format!("{stem}.{suffix}.{ext}"))
}
