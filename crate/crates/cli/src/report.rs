//! Report envelope and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use oilab_core::seed::fingerprint;
use serde::Serialize;
use tempfile::NamedTempFile;

/// Everything a report needs to be reproduced. No timestamps.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub config_hash: String,
    pub config: &'a C,
    pub result: R,
}

pub fn envelope<'a, C: Serialize, R: Serialize>(
    command: &'a str,
    seed: u64,
    config: &'a C,
    result: R,
) -> Result<Envelope<'a, C, R>> {
    let canonical = serde_json::to_vec(&(command, seed, config))?;
    Ok(Envelope {
        tool: "oilab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config_hash: fingerprint(&canonical),
        config,
        result,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Temp file in the destination directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Sends a report to `--out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what} file {}", path.display()))
}

/// SHA-256 of an input file, so configs pin their inputs.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(fingerprint(&bytes))
}
