//! What an invocation should compute, and where the values come from.
//!
//! Settings are layered: preset defaults, then a JSON config file, then
//! command-line flags. Each layer only overrides the fields it sets.

use std::path::PathBuf;

use clap::ValueEnum;
use qwalk_core::{Observable, WalkError};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Run,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Run => "run",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// One layer of settings. Every field is optional; `None` defers to the layer
/// below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecOverrides {
    pub paper_scale: Option<bool>,
    pub correlations: Option<Vec<f64>>,
    pub strengths: Option<Vec<f64>>,
    pub t_max: Option<usize>,
    pub samples: Option<usize>,
    pub master_seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub observables: Option<Vec<Observable>>,
    pub discard_fraction: Option<f64>,
    pub threads: Option<usize>,
}

impl SpecOverrides {
    pub fn from_json_file(path: &std::path::Path) -> qwalk_core::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| WalkError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| {
            WalkError::InvalidArgument(format!("config file {}: {e}", path.display()))
        })
    }
}

/// Fully resolved settings for one invocation. Recorded verbatim in the
/// manifest so a run can be repeated from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub paper_scale: bool,
    /// Lag-1 autocorrelations `C` of the disorder chain.
    pub correlations: Vec<f64>,
    /// Kick strengths `r`.
    pub strengths: Vec<f64>,
    /// Walk length; for `fig1`, the length of the chains used to estimate `C`.
    pub t_max: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// Observables recorded by `run`; the figure presets choose their own.
    pub observables: Vec<Observable>,
    /// Leading fraction of times ignored when fitting the spreading exponent.
    pub discard_fraction: f64,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    // rounding keeps labels such as 0.3 from becoming 0.30000000000000004
    (0..=n)
        .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

impl ExperimentSpec {
    /// Defaults for `preset` at desk scale, or at the larger published scale.
    pub fn defaults(preset: Preset, paper_scale: bool) -> Self {
        let mut spec = Self {
            preset,
            paper_scale,
            correlations: vec![-0.8, 0.8],
            strengths: vec![0.1],
            t_max: 500,
            samples: 1,
            master_seed: DEFAULT_SEED,
            out_dir: PathBuf::from("results").join(preset.name()),
            format: OutputFormat::Csv,
            observables: Observable::ALL.to_vec(),
            discard_fraction: 0.1,
            threads: None,
        };
        match preset {
            Preset::Fig1 => {
                spec.t_max = 5000;
            }
            Preset::Fig2 => {
                spec.strengths = vec![0.1, 0.5, 0.9];
                spec.correlations = grid(-1.0, 1.0, 0.2);
                spec.t_max = if paper_scale { 500_000 } else { 10_000 };
            }
            Preset::Fig3 => {
                spec.strengths = vec![0.05, 0.1];
                spec.correlations = grid(-0.9, 0.9, 0.1);
                spec.samples = 100;
            }
            Preset::Fig4 => {
                spec.strengths = grid(0.0, 1.0, 0.1);
                spec.correlations = vec![-0.8, -0.6, -0.4, 0.4, 0.6, 0.8];
                spec.samples = if paper_scale { 500 } else { 100 };
            }
            Preset::Fig5 => {
                spec.strengths = vec![0.05, 0.5];
                spec.t_max = if paper_scale { 500 } else { 200 };
            }
            Preset::Run => {
                spec.strengths = vec![0.5];
                spec.correlations = vec![0.0];
                spec.samples = 100;
            }
        }
        spec
    }

    pub fn apply(&mut self, layer: &SpecOverrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &layer.$field { self.$field = v.clone(); })*
            };
        }
        take!(correlations, strengths, t_max, samples, master_seed, out_dir, format, observables, discard_fraction);
        if layer.threads.is_some() {
            self.threads = layer.threads;
        }
    }

    /// Builds the spec from its layers and validates it. `paper_scale` is
    /// read first because it selects the defaults the other layers override.
    pub fn resolve(
        preset: Preset,
        file: Option<&SpecOverrides>,
        flags: &SpecOverrides,
    ) -> qwalk_core::Result<Self> {
        let paper_scale = flags
            .paper_scale
            .or(file.and_then(|f| f.paper_scale))
            .unwrap_or(false);
        let mut spec = Self::defaults(preset, paper_scale);
        if let Some(file) = file {
            spec.apply(file);
        }
        spec.apply(flags);
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> qwalk_core::Result<()> {
        let bad = |msg: String| Err(WalkError::InvalidArgument(msg));
        if self.correlations.is_empty() {
            return bad("at least one correlation is required".into());
        }
        if self.strengths.is_empty() {
            return bad("at least one kick strength is required".into());
        }
        if let Some(c) = self.correlations.iter().find(|c| !(-1.0..=1.0).contains(*c)) {
            return bad(format!("correlation {c} is outside [-1, 1]"));
        }
        if let Some(r) = self.strengths.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return bad(format!("kick strength {r} is outside [0, 1]"));
        }
        let min_t = if self.preset == Preset::Fig1 { 2 } else { 1 };
        if self.t_max < min_t {
            return bad(format!("t_max must be >= {min_t}, got {}", self.t_max));
        }
        if self.samples < 1 {
            return bad("samples must be >= 1".into());
        }
        if self.observables.is_empty() {
            return bad("at least one observable is required".into());
        }
        if !(0.0..1.0).contains(&self.discard_fraction) {
            return bad(format!("discard fraction {} is outside [0, 1)", self.discard_fraction));
        }
        if self.threads == Some(0) {
            return bad("threads must be >= 1".into());
        }
        Ok(())
    }
}
