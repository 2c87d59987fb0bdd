//! File formats.
//!
//! | writer | columns |
//! |---|---|
//! | [`write_chain_csv`] | `t,z,theta` |
//! | [`write_scalar_csv`] | `t,value` |
//! | [`write_ensemble_csv`] | `observable,t,mean,sem` (observables in `m2,s_e,jsd,i_t` order) |
//! | [`write_matrix_csv`] | header `t\x,x_0,…,x_n`, then one row per time |
//!
//! Floats use Rust's shortest round-trip formatting, so identical values give
//! identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::disorder::AngleSequence;
use crate::ensemble::EnsembleResult;
use crate::error::{invalid, Result, WalkError};

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).map_err(|source| WalkError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(BufWriter::new(file))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> WalkError + '_ {
    move |source| WalkError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes to `path`, attaching the path to any failure.
pub fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let mut out = create(path)?;
    body(&mut out)?;
    out.flush().map_err(io_err(path))
}

pub fn write_chain_csv<W: Write>(out: W, seq: &AngleSequence) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "z", "theta"])?;
    for (t, (z, theta)) in seq.z.iter().zip(&seq.theta).enumerate() {
        w.write_record([t.to_string(), z.to_string(), theta.to_string()])?;
    }
    w.flush().map_err(|e| WalkError::Csv(e.into()))?;
    Ok(())
}

pub fn write_scalar_csv<W: Write>(out: W, t: &[usize], values: &[f64]) -> Result<()> {
    if t.len() != values.len() {
        return Err(invalid(format!(
            "{} times but {} values",
            t.len(),
            values.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "value"])?;
    for (t, v) in t.iter().zip(values) {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| WalkError::Csv(e.into()))?;
    Ok(())
}

/// Long-format mean and standard error of every recorded observable.
pub fn write_ensemble_csv<W: Write>(out: W, result: &EnsembleResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["observable", "t", "mean", "sem"])?;
    for (o, stats) in &result.stats {
        for (k, t) in result.t.iter().enumerate() {
            w.write_record([
                o.name().to_string(),
                t.to_string(),
                stats.mean[k].to_string(),
                stats.sem[k].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| WalkError::Csv(e.into()))?;
    Ok(())
}

/// Dense matrix with an x-coordinate header row and a t-coordinate first
/// column.
pub fn write_matrix_csv<W: Write>(out: W, xs: &[i64], rows: &[(usize, &[f64])]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = std::iter::once("t\\x".to_string())
        .chain(xs.iter().map(i64::to_string))
        .collect();
    w.write_record(&header)?;
    for (t, row) in rows {
        if row.len() != xs.len() {
            return Err(invalid(format!(
                "row t={t} has {} entries, expected {}",
                row.len(),
                xs.len()
            )));
        }
        let record: Vec<String> = std::iter::once(t.to_string())
            .chain(row.iter().map(f64::to_string))
            .collect();
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| WalkError::Csv(e.into()))?;
    Ok(())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
        .map_err(|e| WalkError::Json(serde_json::Error::io(e)))?;
    Ok(())
}

/// Physical coordinates of a centred lattice with `len` sites.
pub fn centred_positions(len: usize) -> Vec<i64> {
    let half = (len / 2) as i64;
    (-half..=half).collect()
}
