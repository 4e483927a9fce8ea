//! Profile tables, JSON documents and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::integrate::Sample;
use crate::Result;

/// Version of every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable read for the worker thread count.
pub const THREADS_ENV: &str = "YAHIL_THREADS";

/// Column order of profile tables.
pub const PROFILE_HEADER: [&str; 6] = ["y", "rho", "omega", "u", "G", "h"];

/// Thread count from [`THREADS_ENV`], else the available parallelism.
/// Unparsable or zero values fall back to one thread.
pub fn threads_from_env() -> usize {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .unwrap_or(1),
        Err(_) => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    }
}

/// Write `bytes` to a temporary file next to `path` and rename it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Any serialisable rows as CSV with a header line. Floats are printed in
/// shortest round-trip form.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Header-only CSV for an empty table of the given columns.
fn empty_csv(header: &[&str]) -> Vec<u8> {
    let mut s = header.join(",");
    s.push('\n');
    s.into_bytes()
}

pub fn profile_csv(samples: &[Sample]) -> Result<Vec<u8>> {
    if samples.is_empty() {
        return Ok(empty_csv(&PROFILE_HEADER));
    }
    csv_bytes(samples)
}

pub fn write_profile_csv(path: &Path, samples: &[Sample]) -> Result<()> {
    write_atomic(path, &profile_csv(samples)?)
}

pub fn parse_profile_csv(bytes: &[u8]) -> Result<Vec<Sample>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != PROFILE_HEADER {
        return Err(crate::Error::Parameter(format!(
            "profile header {header:?}, expected {PROFILE_HEADER:?}"
        )));
    }
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn read_profile_csv(path: &Path) -> Result<Vec<Sample>> {
    parse_profile_csv(&std::fs::read(path)?)
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with `schema_version` added at the top level. `value` must
/// serialise to an object.
pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(&Versioned {
        schema_version: SCHEMA_VERSION,
        body: value,
    })?;
    v.push(b'\n');
    Ok(v)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &json_bytes(value)?)
}
