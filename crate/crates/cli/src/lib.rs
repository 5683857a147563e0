//! Experiment driver behind the `rcm` binary: config resolution, runners,
//! artifact writing and manifest replay.

pub mod commands;
pub mod config;

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub use commands::{execute, Artifact, Check, Output};
pub use config::{parse_pairs, Config};

pub const MANIFEST: &str = "manifest.txt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl From<rcm_core::Error> for CliError {
    fn from(e: rcm_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug)]
pub struct RunReport {
    pub out_dir: PathBuf,
    /// `(artifact name, sha256)` in write order.
    pub hashes: Vec<(String, String)>,
    /// `Some(detail)` when the run carried a statistical check.
    pub check: Option<(bool, String)>,
}

/// Runs the experiment, writes its artifacts and the manifest.
pub fn run(cfg: &Config) -> Result<RunReport, CliError> {
    let output = execute(cfg)?;
    let out_dir = PathBuf::from(cfg.raw("out"));
    fs::create_dir_all(&out_dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut hashes = Vec::new();
    let mut manifest = cfg.to_string();
    manifest.push_str("[artifacts]\n");
    for a in &output.artifacts {
        write(&out_dir.join(&a.name), &a.bytes)?;
        let h = sha256_hex(&a.bytes);
        manifest.push_str(&format!("{} sha256={h}\n", a.name));
        hashes.push((a.name.clone(), h));
    }
    if let Some(c) = &output.check {
        manifest.push_str(&format!("[check]\npassed={}\ndetail={}\n", c.passed, c.detail));
    }
    write(&out_dir.join(MANIFEST), manifest.as_bytes())?;
    Ok(RunReport { out_dir, hashes, check: output.check.map(|c| (c.passed, c.detail)) })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Artifact hashes listed in a manifest.
pub fn manifest_hashes(text: &str) -> Vec<(String, String)> {
    text.lines()
        .skip_while(|l| l.trim() != "[artifacts]")
        .skip(1)
        .take_while(|l| !l.starts_with('['))
        .filter_map(|l| {
            let (name, h) = l.split_once(" sha256=")?;
            Some((name.to_string(), h.trim().to_string()))
        })
        .collect()
}

#[derive(Debug)]
pub struct ReplayReport {
    pub run: RunReport,
    /// Artifacts whose hash differs from the manifest, or that are missing.
    pub mismatches: Vec<String>,
}

/// Re-runs a manifest, optionally into another directory, and compares
/// every artifact hash.
pub fn replay(manifest: &Path, out: Option<&Path>) -> Result<ReplayReport, CliError> {
    let text = fs::read_to_string(manifest)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", manifest.display())))?;
    let pairs = parse_pairs(&text)?;
    let command = pairs
        .iter()
        .find(|(k, _)| k == "command")
        .map(|(_, v)| v.clone())
        .ok_or_else(|| CliError::Config("manifest has no command".into()))?;
    let overrides: Vec<(String, String)> = out.map(|o| ("out".to_string(), o.display().to_string())).into_iter().collect();
    let cfg = Config::resolve(&command, &pairs, &overrides)?;
    let run = run(&cfg)?;
    let expected = manifest_hashes(&text);
    let mut mismatches: Vec<String> = expected
        .iter()
        .filter(|(name, h)| !run.hashes.iter().any(|(n, g)| n == name && g == h))
        .map(|(name, _)| name.clone())
        .collect();
    mismatches.extend(run.hashes.iter().filter(|(n, _)| !expected.iter().any(|(e, _)| e == n)).map(|(n, _)| n.clone()));
    Ok(ReplayReport { run, mismatches })
}
