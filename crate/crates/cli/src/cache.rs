//! On-disk cache of function tables, one binary file per (family, modulus).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{info, warn};
use tracekit::{Family, FunctionTable, Modulus};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The file existed but failed to decode or had the wrong modulus.
    Recomputed,
    Disabled,
}

pub fn cache_path(dir: &Path, family: Family, m: u64) -> PathBuf {
    dir.join(format!("{}-m{m}.bin", family.name()))
}

/// Table for `family` mod `m`, read from `dir` when present and valid,
/// otherwise computed and stored.
pub fn cache_lookup(
    dir: Option<&Path>,
    family: Family,
    m: &Modulus,
) -> Result<(FunctionTable, CacheStatus), CliError> {
    let Some(dir) = dir else {
        return Ok((family.table(m)?, CacheStatus::Disabled));
    };
    let path = cache_path(dir, family, m.value());
    let mut status = CacheStatus::Miss;
    if let Ok(bytes) = fs::read(&path) {
        match FunctionTable::from_bytes(&bytes) {
            Ok(t) if t.m() == m.value() => {
                info!("cache hit {}", path.display());
                return Ok((t, CacheStatus::Hit));
            }
            Ok(t) => warn!(
                "cache file {} holds modulus {} instead of {}; recomputing",
                path.display(),
                t.m(),
                m.value()
            ),
            Err(e) => warn!(
                "cache file {} unreadable ({e}); recomputing",
                path.display()
            ),
        }
        status = CacheStatus::Recomputed;
    }
    let table = family.table(m)?;
    store(&path, &table.to_bytes())?;
    Ok((table, status))
}

fn store(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("table"),
        std::process::id()
    ));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}
