//! Experiment driver behind the `qwalk` binary: presets, sweeps and the
//! run manifest.

pub mod presets;
pub mod spec;
pub mod table;

use std::time::{SystemTime, UNIX_EPOCH};

use qwalk_core::io::{write_file, write_json};
use qwalk_core::{Result, WalkError};
use serde::{Deserialize, Serialize};

pub use spec::{ExperimentSpec, OutputFormat, Preset, SpecOverrides};

pub const MANIFEST: &str = "manifest.json";

/// Written last into the output directory. The timestamp here is the only
/// non-reproducible byte a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub created_unix_seconds: u64,
    pub spec: ExperimentSpec,
    pub master_seed: u64,
    /// Per-sample seeds, shared by every grid point.
    pub sample_seeds: Vec<u64>,
    pub files: Vec<String>,
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

/// Runs `spec`, writing its data files and the manifest into `spec.out_dir`.
pub fn run(spec: &ExperimentSpec, verbose: bool) -> Result<Manifest> {
    spec.validate()?;
    std::fs::create_dir_all(&spec.out_dir).map_err(|source| WalkError::Io {
        path: spec.out_dir.display().to_string(),
        source,
    })?;

    let mut out = presets::Outputs::new(&spec.out_dir, spec.format, verbose);
    presets::execute(spec, &mut out)?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        created_unix_seconds: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        spec: spec.clone(),
        master_seed: spec.master_seed,
        sample_seeds: out.sample_seeds,
        files: out.files,
        metadata: out.metadata,
    };
    write_file(&spec.out_dir.join(MANIFEST), |w| write_json(w, &manifest))?;
    Ok(manifest)
}

/// Process exit code for a failure: 2 for bad input, 3 for I/O and
/// serialisation, 4 for numerical failures.
pub fn exit_code(err: &WalkError) -> u8 {
    match err {
        WalkError::InvalidArgument(_) => 2,
        WalkError::Io { .. } | WalkError::Csv(_) | WalkError::Json(_) => 3,
        WalkError::BoundaryLeak { .. } | WalkError::NumericDomain(_) => 4,
    }
}
