//! The figure presets and the free-form `run` sweep.
//!
//! Every grid point reuses the same per-sample seeds (common random numbers),
//! so differences between neighbouring points are not blurred by independent
//! disorder draws.

use std::path::{Path, PathBuf};

use qwalk_core::disorder::{empirical_autocorrelation, sample_chain, AngleSequence};
use qwalk_core::ensemble::{derive_seed, run_ensemble, run_ensemble_with_workers};
use qwalk_core::io::{centred_positions, write_chain_csv, write_ensemble_csv, write_file, write_json, write_matrix_csv};
use qwalk_core::{DisorderParams, EnsembleConfig, EnsembleResult, Observable, Result, WalkError};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::spec::{ExperimentSpec, OutputFormat, Preset};
use crate::table::{Cell, Table};

/// Persistence values for the autocorrelation calibration curve.
pub const PERSISTENCE_GRID: [f64; 21] = [
    0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8,
    0.85, 0.9, 0.95, 1.0,
];
/// Length of the θ(t) traces written by `fig1`.
pub const TRACE_LENGTH: usize = 200;
/// Correlations of the entropy-versus-time panels of `fig3`.
pub const TIME_PANEL_CORRELATIONS: [f64; 2] = [-0.8, 0.8];

/// Collects the files one invocation writes.
pub struct Outputs {
    dir: PathBuf,
    format: OutputFormat,
    verbose: bool,
    pub files: Vec<String>,
    pub sample_seeds: Vec<u64>,
    pub metadata: Map<String, Value>,
}

impl Outputs {
    pub fn new(dir: &Path, format: OutputFormat, verbose: bool) -> Self {
        Self {
            dir: dir.to_path_buf(),
            format,
            verbose,
            files: Vec::new(),
            sample_seeds: Vec::new(),
            metadata: Map::new(),
        }
    }

    fn emit<F>(&mut self, name: String, body: F) -> Result<()>
    where
        F: FnOnce(&mut dyn std::io::Write) -> Result<()>,
    {
        write_file(&self.dir.join(&name), body)?;
        self.files.push(name);
        Ok(())
    }

    fn name(&self, stem: &str) -> String {
        format!("{stem}.{}", self.format.extension())
    }

    fn table(&mut self, stem: &str, table: &Table) -> Result<()> {
        let format = self.format;
        self.emit(self.name(stem), |out| table.write(out, format))
    }

    fn chain(&mut self, stem: &str, seq: &AngleSequence) -> Result<()> {
        match self.format {
            OutputFormat::Csv => self.emit(self.name(stem), |out| write_chain_csv(out, seq)),
            OutputFormat::Json => self.emit(self.name(stem), |out| write_json(out, seq)),
        }
    }

    fn ensemble(&mut self, stem: &str, result: &EnsembleResult) -> Result<()> {
        match self.format {
            OutputFormat::Csv => self.emit(self.name(stem), |out| write_ensemble_csv(out, result)),
            OutputFormat::Json => self.emit(self.name(stem), |out| write_json(out, result)),
        }
    }

    fn matrix(&mut self, stem: &str, xs: &[i64], rows: &[(usize, &[f64])]) -> Result<()> {
        match self.format {
            OutputFormat::Csv => self.emit(self.name(stem), |out| write_matrix_csv(out, xs, rows)),
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Matrix<'a> {
                    x: &'a [i64],
                    t: Vec<usize>,
                    values: Vec<&'a [f64]>,
                }
                let m = Matrix {
                    x: xs,
                    t: rows.iter().map(|(t, _)| *t).collect(),
                    values: rows.iter().map(|(_, v)| *v).collect(),
                };
                self.emit(self.name(stem), |out| write_json(out, &m))
            }
        }
    }

    fn progress(&self, msg: impl FnOnce() -> String) {
        if self.verbose {
            eprintln!("{}", msg());
        }
    }
}

/// `r0.05`, `C-0.8`: stable labels for file names and tables.
pub fn point_label(r: f64, c: f64) -> String {
    format!("r{r}_C{c:+}")
}

fn sample_seeds(master: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|k| derive_seed(master, k)).collect()
}

fn ensemble(spec: &ExperimentSpec, config: &EnsembleConfig) -> Result<EnsembleResult> {
    match spec.threads {
        Some(n) => run_ensemble_with_workers(config, n),
        None => run_ensemble(config),
    }
}

fn config(spec: &ExperimentSpec, r: f64, c: f64, observables: &[Observable]) -> Result<EnsembleConfig> {
    let disorder = DisorderParams::new(r, c, spec.t_max + 1)?;
    let config = EnsembleConfig::new(spec.t_max, spec.samples, spec.master_seed, disorder)
        .with_observables(observables.iter().copied());
    config.validate()?;
    Ok(config)
}

fn final_of(result: &EnsembleResult, o: Observable) -> Result<(f64, f64)> {
    result
        .final_value(o)
        .ok_or_else(|| WalkError::InvalidArgument(format!("{o} was not recorded")))
}

/// Empirical lag-1 autocorrelation of one chain of `len` entries per
/// persistence value, next to the target `2w − 1`.
pub fn autocorrelation_curve(ws: &[f64], len: usize, master_seed: u64) -> Result<Table> {
    let mut table = Table::new(&["w", "c_theory", "c_empirical"]);
    for (k, &w) in ws.iter().enumerate() {
        let z = sample_chain(w, len, derive_seed(master_seed, k as u64))?;
        let c = empirical_autocorrelation(&z)?;
        table.push(vec![w.into(), (2.0 * w - 1.0).into(), c.into()]);
    }
    Ok(table)
}

fn fig1(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    out.sample_seeds = sample_seeds(spec.master_seed, PERSISTENCE_GRID.len());
    let curve = autocorrelation_curve(&PERSISTENCE_GRID, spec.t_max, spec.master_seed)?;
    out.table("fig1_autocorrelation", &curve)?;

    let len = spec.t_max.min(TRACE_LENGTH);
    let trace_seed = derive_seed(spec.master_seed, 0);
    for &r in &spec.strengths {
        for &c in &spec.correlations {
            let seq = DisorderParams::new(r, c, len)?.generate(trace_seed)?;
            out.chain(&format!("fig1_theta_{}", point_label(r, c)), &seq)?;
        }
    }
    out.metadata.insert("chain_length".into(), json!(spec.t_max));
    out.metadata.insert("trace_length".into(), json!(len));
    out.metadata.insert("trace_seed".into(), json!(trace_seed));
    Ok(())
}

fn fig2(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    let mut table = Table::new(&["r", "C", "alpha", "m2_final"]);
    let total = spec.strengths.len() * spec.correlations.len();
    for &r in &spec.strengths {
        for &c in &spec.correlations {
            out.progress(|| format!("fig2 [{}/{total}] {}", table.rows.len() + 1, point_label(r, c)));
            let result = ensemble(spec, &config(spec, r, c, &[Observable::M2])?)?;
            let alpha = result.alpha(spec.discard_fraction)?;
            let (m2, _) = final_of(&result, Observable::M2)?;
            table.push(vec![r.into(), c.into(), alpha.into(), m2.into()]);
        }
    }
    out.table("fig2_alpha", &table)?;
    out.metadata.insert("t_max".into(), json!(spec.t_max));
    out.metadata.insert("discard_fraction".into(), json!(spec.discard_fraction));
    out.metadata.insert(
        "alpha_fit".into(),
        json!("least-squares slope of ln m2 against ln t over t > discard_fraction * t_max, on the sample-mean m2"),
    );
    Ok(())
}

fn fig3(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    let s_e = [Observable::Entropy];
    let clean = ensemble(spec, &config(spec, 0.0, 0.0, &s_e)?)?;
    for &r in &spec.strengths {
        let mut table = Table::new(&["series", "t", "mean", "sem"]);
        let mut series = vec![("clean".to_string(), clean.clone())];
        for c in TIME_PANEL_CORRELATIONS {
            out.progress(|| format!("fig3 time panel {}", point_label(r, c)));
            series.push((format!("C{c:+}"), ensemble(spec, &config(spec, r, c, &s_e)?)?));
        }
        for (label, result) in &series {
            let stats = &result.stats[&Observable::Entropy];
            for (k, &t) in result.t.iter().enumerate() {
                table.push(vec![label.as_str().into(), t.into(), stats.mean[k].into(), stats.sem[k].into()]);
            }
        }
        out.table(&format!("fig3_entropy_vs_t_r{r}"), &table)?;
    }

    let mut table = Table::new(&["r", "C", "t", "mean", "sem"]);
    for &r in &spec.strengths {
        for &c in &spec.correlations {
            out.progress(|| format!("fig3 correlation panel {}", point_label(r, c)));
            let cfg = config(spec, r, c, &s_e)?.with_record_every(spec.t_max);
            let (m, e) = final_of(&ensemble(spec, &cfg)?, Observable::Entropy)?;
            table.push(vec![r.into(), c.into(), spec.t_max.into(), m.into(), e.into()]);
        }
    }
    out.table("fig3_entropy_vs_C", &table)?;
    out.sample_seeds = sample_seeds(spec.master_seed, spec.samples);
    Ok(())
}

fn fig4(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    let observables = [Observable::Entropy, Observable::Jsd, Observable::Interference];
    let mut table = Table::new(&["C", "r", "s_e", "s_e_sem", "jsd", "jsd_sem", "i_t", "i_t_sem"]);
    let mut finals = Vec::new();
    let total = spec.strengths.len() * spec.correlations.len();
    for &c in &spec.correlations {
        for &r in &spec.strengths {
            out.progress(|| format!("fig4 [{}/{total}] {}", table.rows.len() + 1, point_label(r, c)));
            let cfg = config(spec, r, c, &observables)?.with_record_every(spec.t_max);
            let result = ensemble(spec, &cfg)?;
            let mut row: Vec<Cell> = vec![c.into(), r.into()];
            for o in observables {
                let (m, e) = final_of(&result, o)?;
                row.extend([m.into(), e.into()]);
            }
            finals.push((c, r, final_of(&result, Observable::Entropy)?));
            table.push(row);
        }
    }
    out.table("fig4_summary", &table)?;

    // anticorrelated versus correlated disorder of equal |C|
    let mut advantage = Table::new(&[
        "abs_C", "r", "s_e_anticorrelated", "s_e_correlated", "difference", "combined_sem", "advantage",
    ]);
    let lookup = |c: f64, r: f64| finals.iter().find(|f| f.0 == c && f.1 == r).map(|f| f.2);
    let mut magnitudes: Vec<f64> = spec.correlations.iter().filter(|&&c| c > 0.0).copied().collect();
    magnitudes.sort_by(f64::total_cmp);
    magnitudes.dedup();
    for a in magnitudes {
        for &r in &spec.strengths {
            if let (Some((m_neg, e_neg)), Some((m_pos, e_pos))) = (lookup(-a, r), lookup(a, r)) {
                let diff = m_neg - m_pos;
                let sem = (e_neg * e_neg + e_pos * e_pos).sqrt();
                advantage.push(vec![
                    a.into(),
                    r.into(),
                    m_neg.into(),
                    m_pos.into(),
                    diff.into(),
                    sem.into(),
                    (diff > 2.0 * sem).into(),
                ]);
            }
        }
    }
    out.table("fig4_advantage", &advantage)?;
    out.metadata.insert("t_final".into(), json!(spec.t_max));
    out.metadata.insert(
        "advantage_rule".into(),
        json!("difference > 2 * combined_sem, difference = S_e(-|C|) - S_e(+|C|)"),
    );
    out.sample_seeds = sample_seeds(spec.master_seed, spec.samples);
    Ok(())
}

fn fig5(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    let xs = centred_positions(2 * spec.t_max + 1);
    for &r in &spec.strengths {
        for &c in &spec.correlations {
            out.progress(|| format!("fig5 {}", point_label(r, c)));
            let cfg = config(spec, r, c, &[Observable::M2])?
                .with_record_every(spec.t_max)
                .with_snapshots(0..=spec.t_max);
            let result = ensemble(spec, &cfg)?;
            let rows: Vec<(usize, &[f64])> = result
                .profiles
                .iter()
                .map(|p| (p.t, p.asymmetry_normalized.as_slice()))
                .collect();
            out.matrix(&format!("fig5_asymmetry_{}", point_label(r, c)), &xs, &rows)?;
        }
    }
    out.metadata.insert(
        "matrix".into(),
        json!("rows t = 0..t_max, columns x = -t_max..t_max, entries A(x,t)/max_x|A(x,t)| (0 where A vanishes)"),
    );
    out.sample_seeds = sample_seeds(spec.master_seed, spec.samples);
    Ok(())
}

fn run_grid(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    let total = spec.strengths.len() * spec.correlations.len();
    let mut k = 0;
    for &c in &spec.correlations {
        for &r in &spec.strengths {
            k += 1;
            out.progress(|| format!("run [{k}/{total}] {}", point_label(r, c)));
            let result = ensemble(spec, &config(spec, r, c, &spec.observables)?)?;
            out.ensemble(&format!("run_{}", point_label(r, c)), &result)?;
        }
    }
    out.sample_seeds = sample_seeds(spec.master_seed, spec.samples);
    Ok(())
}

pub fn execute(spec: &ExperimentSpec, out: &mut Outputs) -> Result<()> {
    match spec.preset {
        Preset::Fig1 => fig1(spec, out),
        Preset::Fig2 => fig2(spec, out),
        Preset::Fig3 => fig3(spec, out),
        Preset::Fig4 => fig4(spec, out),
        Preset::Fig5 => fig5(spec, out),
        Preset::Run => run_grid(spec, out),
    }
}
