use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_cli::{exit_code, run, ExperimentSpec, OutputFormat, Preset, SpecOverrides};
use qwalk_core::Observable;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Quantum walks with correlated coin disorder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Disorder calibration: autocorrelation against persistence, θ(t) traces
    Fig1(Common),
    /// Spreading exponent α over a (r, C) grid
    Fig2(Common),
    /// Entanglement entropy against time and against C
    Fig3(Common),
    /// Final entropy, JSD and interference against r
    Fig4(Common),
    /// Normalised asymmetry A(x, t) for single realisations
    Fig5(Common),
    /// Full time series over an arbitrary (C, r) grid, one file per point
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// JSON file with any subset of the spec fields; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Walk length (for fig1: chain length of the calibration curve)
    #[arg(long = "tmax")]
    t_max: Option<usize>,
    /// Disorder realisations per grid point
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed; per-sample seeds are derived from it
    #[arg(long)]
    seed: Option<u64>,
    /// Lag-1 autocorrelation(s), comma separated
    #[arg(long = "correlation", value_delimiter = ',', allow_hyphen_values = true)]
    correlations: Option<Vec<f64>>,
    /// Kick strength(s), comma separated
    #[arg(long = "strength", value_delimiter = ',')]
    strengths: Option<Vec<f64>>,
    /// Observables for `run` (m2, s_e, jsd, i_t), comma separated
    #[arg(long, value_delimiter = ',')]
    observables: Option<Vec<Observable>>,
    /// Leading fraction of times ignored by the α fit
    #[arg(long = "discard")]
    discard_fraction: Option<f64>,
    /// Output directory (default results/<preset>)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Large-scale defaults (longer walks, more samples)
    #[arg(long)]
    paper_scale: bool,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
    /// Suppress progress messages on stderr
    #[arg(long, short)]
    quiet: bool,
}

impl Common {
    fn overrides(&self) -> SpecOverrides {
        SpecOverrides {
            paper_scale: self.paper_scale.then_some(true),
            correlations: self.correlations.clone(),
            strengths: self.strengths.clone(),
            t_max: self.t_max,
            samples: self.samples,
            master_seed: self.seed,
            out_dir: self.out.clone(),
            format: self.format,
            observables: self.observables.clone(),
            discard_fraction: self.discard_fraction,
            threads: self.threads,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (preset, args) = match &cli.command {
        Command::Fig1(a) => (Preset::Fig1, a),
        Command::Fig2(a) => (Preset::Fig2, a),
        Command::Fig3(a) => (Preset::Fig3, a),
        Command::Fig4(a) => (Preset::Fig4, a),
        Command::Fig5(a) => (Preset::Fig5, a),
        Command::Run(a) => (Preset::Run, a),
    };

    let result = args
        .config
        .as_deref()
        .map(SpecOverrides::from_json_file)
        .transpose()
        .and_then(|file| ExperimentSpec::resolve(preset, file.as_ref(), &args.overrides()))
        .and_then(|spec| run(&spec, !args.quiet).map(|m| (spec, m)));

    match result {
        Ok((spec, manifest)) => {
            println!(
                "wrote {} files and {} to {}",
                manifest.files.len(),
                qwalk_cli::MANIFEST,
                spec.out_dir.display()
            );
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("qwalk: error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
