//! Run manifests: every artifact-producing subcommand records its inputs,
//! seeds and output digests so reruns can be audited byte for byte.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub crc32: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub field_format_version: u32,
    pub report_schema_version: u32,
    pub grid: Option<GridParams>,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Serialize)]
pub struct GridParams {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

pub struct ManifestBuilder {
    command: String,
    seeds: Vec<u64>,
    grid: Option<GridParams>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            seeds: Vec::new(),
            grid: None,
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seeds.push(seed);
        self
    }

    pub fn grid(&mut self, d: usize, n: usize, l: f64) -> &mut Self {
        self.grid = Some(GridParams { d, n, l });
        self
    }

    pub fn output(&mut self, path: impl AsRef<Path>) -> &mut Self {
        self.outputs.push(path.as_ref().to_path_buf());
        self
    }

    /// Digest all declared outputs and write `<dest>` as JSON.
    pub fn write(&self, dest: impl AsRef<Path>) -> std::io::Result<()> {
        let mut outputs = Vec::new();
        for path in &self.outputs {
            let bytes = std::fs::read(path)?;
            outputs.push(OutputDigest {
                path: path.display().to_string(),
                crc32: format!("{:08x}", crc32fast::hash(&bytes)),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = RunManifest {
            command: self.command.clone(),
            argv: std::env::args().collect(),
            seeds: self.seeds.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            field_format_version: 1,
            report_schema_version: 1,
            grid: self
                .grid
                .as_ref()
                .map(|g| GridParams { d: g.d, n: g.n, l: g.l }),
            wall_time_s: self.started.elapsed().as_secs_f64(),
            outputs,
        };
        std::fs::write(
            dest,
            serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
        )
    }
}
