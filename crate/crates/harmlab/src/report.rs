//! JSON reports and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use harmlab_core::claims::{ClaimReport, ClaimStatus, Tolerances};
use harmlab_core::rkc::{Certificate, HomotopyTrace};
use harmlab_core::DiskGrid;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Name of the only field that may differ between two runs of the same scenario.
pub const TIMESTAMP_FIELD: &str = "generated_at_unix";

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub os: &'static str,
    pub arch: &'static str,
    pub family: &'static str,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            family: std::env::consts::FAMILY,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioInfo {
    pub name: String,
    pub sha256: String,
    pub seed: u64,
    pub modes: usize,
    pub grid: DiskGrid,
    pub tolerances: Tolerances,
    pub tolerance_scale: f64,
    /// `h(0)`.
    pub image_origin: [f64; 2],
    /// `R_0 = dist(h(0), boundary)`.
    pub inradius: f64,
    pub curvature_range: [f64; 2],
    pub speed_range: [f64; 2],
    pub diameter: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub unverifiable: usize,
    pub all_pass: bool,
}

impl Summary {
    pub fn of(reports: &[ClaimReport]) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        Self {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
            unverifiable: reports.iter().filter(|r| r.status == ClaimStatus::Unverifiable).count(),
            all_pass: passed == reports.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: Tool,
    pub environment: Environment,
    pub generated_at_unix: u64,
    pub scenario: ScenarioInfo,
    /// Present when the scenario comes from a boundary map; `certificate_error` otherwise explains why not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_error: Option<String>,
    pub claims: Vec<ClaimReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub schema_version: u32,
    pub tool: Tool,
    pub environment: Environment,
    pub generated_at_unix: u64,
    pub scenario: ScenarioInfo,
    pub steps: usize,
    pub trace: HomotopyTrace,
    pub all_positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    #[serde(flatten)]
    pub member: crate::gallery::Member,
    pub inradius: f64,
    pub curvature_range: [f64; 2],
    pub speed_range: [f64; 2],
    /// `|c_0|`, zero by symmetry for the odd members.
    pub abs_c0: f64,
    pub abs_a1: f64,
    pub abs_b1: f64,
    /// Grid pairs more than [`crate::gallery::SOURCE_GAP`] apart whose images are
    /// closer than [`crate::gallery::IMAGE_GAP`] times the diameter. Zero for univalent members.
    pub injectivity_violations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryReport {
    pub schema_version: u32,
    pub tool: Tool,
    pub generated_at_unix: u64,
    pub seed: u64,
    pub count: usize,
    /// Digest of the member descriptions alone.
    pub members_sha256: String,
    pub members: Vec<GalleryEntry>,
    pub summary: Summary,
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `contents` to a sibling temporary file, syncs it and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(format!("writing {}", path.display()), e)
    })
}

/// Drops the timestamp line so two reports can be compared byte for byte.
pub fn strip_timestamp(json: &str) -> String {
    let key = format!("\"{TIMESTAMP_FIELD}\"");
    json.lines()
        .filter(|l| !l.trim_start().starts_with(&key))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_and_leaves_no_temporaries() {
        let dir = std::env::temp_dir().join(format!("harmlab-report-{}", std::process::id()));
        let path = dir.join("r.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn timestamp_is_stripped() {
        let a = "{\n  \"a\": 1,\n  \"generated_at_unix\": 5,\n  \"b\": 2\n}";
        let b = "{\n  \"a\": 1,\n  \"generated_at_unix\": 9,\n  \"b\": 2\n}";
        assert_eq!(strip_timestamp(a), strip_timestamp(b));
    }
}
