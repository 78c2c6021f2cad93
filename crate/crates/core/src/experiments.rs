//! Monte Carlo disorder ensembles, fidelity-versus-size sweeps, linear
//! fitting, and the chain-length bound they imply.
//!
//! Trials are embarrassingly parallel: trial k of a cell always draws from
//! random stream k of the cell's seed, and aggregation runs over the sorted
//! trial index with compensated summation, so parallel and serial execution
//! produce bit-identical results.

use rayon::prelude::*;

use crate::chain::{sample_errors, ResonatorSpec};
use crate::error::{Error, Result};
use crate::rng::{mix64, trial_rng};
use crate::spin::gate_fidelity;

/// Mean and spread of the gate fidelity over one disorder ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub n: usize,
    pub delta_max: f64,
    pub trials: usize,
    pub mean_f: f64,
    pub std_f: f64,
    pub seed: u64,
}

/// Kahan-compensated sum in index order.
fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Gate fidelity of every trial, in trial order. Exposed so callers can
/// aggregate differently or check the parallel path against a serial loop.
pub fn trial_fidelities(
    spec: &ResonatorSpec,
    t_g: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trials < 1 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let sample = sample_errors(spec, &mut trial_rng(seed, k));
            gate_fidelity(spec, &sample, t_g)
        })
        .collect()
}

/// Mean and unbiased standard deviation of the gate fidelity over
/// `trials` independent disorder draws.
pub fn ensemble_fidelity(
    spec: &ResonatorSpec,
    t_g: f64,
    trials: usize,
    seed: u64,
) -> Result<EnsembleResult> {
    let fs = trial_fidelities(spec, t_g, trials, seed)?;
    let mean_f = compensated_sum(&fs) / trials as f64;
    let std_f = if trials < 2 {
        0.0
    } else {
        let sq: Vec<f64> = fs.iter().map(|f| (f - mean_f) * (f - mean_f)).collect();
        (compensated_sum(&sq) / (trials as f64 - 1.0)).sqrt()
    };
    Ok(EnsembleResult {
        n: spec.n,
        delta_max: spec.delta_max,
        trials,
        mean_f,
        std_f,
        seed,
    })
}

/// One ensemble per (n, Δ_m) pair, row-major over `n_range` then
/// `delta_list`. Cell seeds derive from (seed, n, Δ index), so adding or
/// reordering cells never changes another cell's draw.
pub fn sweep_fidelity_vs_n(
    template: &ResonatorSpec,
    n_range: std::ops::RangeInclusive<usize>,
    delta_list: &[f64],
    t_g: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<EnsembleResult>> {
    if n_range.is_empty() {
        return Err(Error::Domain("empty resonator-count range".into()));
    }
    if delta_list.is_empty() {
        return Err(Error::Domain("empty disorder list".into()));
    }
    let mut out = Vec::new();
    for n in n_range {
        for (di, &delta_max) in delta_list.iter().enumerate() {
            let spec = template.with_n(n)?.with_delta_max(delta_max)?;
            let cell_seed = mix64(&[seed, n as u64, di as u64]);
            out.push(ensemble_fidelity(&spec, t_g, trials, cell_seed)?);
        }
    }
    Ok(out)
}

/// Ordinary least-squares line with the Pearson correlation of the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub pearson_r: f64,
}

/// Least-squares fit of y against x; fails if fewer than two points or all
/// x equal. `pearson_r` is 0 when y carries no variance.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least two points, got {}",
            points.len()
        )));
    }
    let nf = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let pearson_r = if syy == 0.0 {
        0.0
    } else {
        sxy / (sxx.sqrt() * syy.sqrt())
    };
    Ok(FitResult {
        slope,
        intercept,
        pearson_r,
    })
}

/// Largest chain length keeping the fitted fidelity above `f0`:
/// ⌊(intercept − f0) / (−slope)⌋ for a decreasing line.
pub fn max_chain_length(fit: &FitResult, f0: f64) -> Result<u64> {
    if !(fit.slope < 0.0) {
        return Err(Error::Domain(format!(
            "bound needs a negative slope, got {:e}",
            fit.slope
        )));
    }
    if !(f0 < fit.intercept) {
        return Err(Error::Domain(format!(
            "threshold {f0} is not below the intercept {}",
            fit.intercept
        )));
    }
    let ratio = (fit.intercept - f0) / (-fit.slope);
    // one part in 1e12 absorbs division rounding on exact-quotient inputs
    Ok((ratio + ratio * 1e-12).floor() as u64)
}

/// One parsed row of a fidelity sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub delta_max: f64,
    pub trials: usize,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
}

pub const SWEEP_CSV_HEADER: &str = "n,delta_max,trials,mean_fidelity,std_fidelity";

/// Strict parser for the sweep CSV emitted by this library: exact header,
/// five finite fields per row, blank lines rejected.
pub fn parse_sweep_csv(data: &[u8]) -> Result<Vec<SweepRow>> {
    let text = std::str::from_utf8(data)
        .map_err(|e| Error::Config(format!("sweep table is not UTF-8: {e}")))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end_matches('\r') == SWEEP_CSV_HEADER => {}
        Some(h) => {
            return Err(Error::Config(format!(
                "bad header {h:?}, expected {SWEEP_CSV_HEADER:?}"
            )))
        }
        None => return Err(Error::Config("empty sweep table".into())),
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            return Err(Error::Config(format!("blank line {}", lineno + 2)));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Config(format!(
                "line {}: expected 5 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|e| Error::Config(format!("line {}: bad n: {e}", lineno + 2)))?;
        let trials: usize = fields[2]
            .parse()
            .map_err(|e| Error::Config(format!("line {}: bad trials: {e}", lineno + 2)))?;
        let parse_f = |name: &str, s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad {name}: {e}", lineno + 2)))?;
            if !v.is_finite() {
                return Err(Error::Config(format!(
                    "line {}: {name} must be finite, got {v}",
                    lineno + 2
                )));
            }
            Ok(v)
        };
        rows.push(SweepRow {
            n,
            delta_max: parse_f("delta_max", fields[1])?,
            trials,
            mean_fidelity: parse_f("mean_fidelity", fields[3])?,
            std_fidelity: parse_f("std_fidelity", fields[4])?,
        });
    }
    Ok(rows)
}
