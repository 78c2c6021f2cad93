//! Command-line front end.
//!
//! Every subcommand reads an optional JSON config (built-in reference
//! parameters otherwise), applies flag overrides, and emits deterministic
//! CSV or JSON: identical config and seed give byte-identical output.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical error, 4 usage error.

use std::ffi::OsString;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::chain::sample_errors;
use crate::compensation::{build_schedule, naive_protocol_residual, verify_compensation};
use crate::config::{load_config, RunConfig};
use crate::error::{Error, Result};
use crate::experiments::{
    linear_fit, max_chain_length, parse_sweep_csv, sweep_fidelity_vs_n, SWEEP_CSV_HEADER,
};
use crate::modes::{analytic_uniform_dispersion, mode_shift_statistics, mode_shift_statistics_on};
use crate::chain::CouplingGraph;
use crate::rng::{mix64, trial_rng};
use crate::spin::fidelity_vs_time;

#[derive(Debug, Parser)]
#[command(
    name = "namr-sim",
    about = "Collective modes, entangling-gate fidelity, and error compensation \
             for disordered nanomechanical resonator chains",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file; the built-in reference chain when omitted.
    #[arg(long, value_name = "PATH", global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    /// Resonator count, overriding the config.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Disorder bound, overriding the config.
    #[arg(long, global = true)]
    delta_max: Option<f64>,
    /// Trials per ensemble, overriding the config.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Gate time in milliseconds, overriding the config.
    #[arg(long, global = true)]
    t_g_ms: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collective mode frequencies and their disorder shifts (CSV).
    Modes {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form mode frequencies of the error-free chain (CSV).
    Dispersion {
        #[command(flatten)]
        common: Common,
    },
    /// Mean gate fidelity over disorder for n = 2..N and several disorder
    /// bounds (CSV).
    SweepN {
        #[command(flatten)]
        common: Common,
    },
    /// Fidelity versus evolution time for one disorder draw (CSV), with a
    /// JSON summary of the grid maximum on stdout.
    SweepT {
        #[command(flatten)]
        common: Common,
        /// Grid start in milliseconds; 0.9 gate times when omitted.
        #[arg(long)]
        t_min_ms: Option<f64>,
        /// Grid end in milliseconds; 1.1 gate times when omitted.
        #[arg(long)]
        t_max_ms: Option<f64>,
        /// Grid points.
        #[arg(long, default_value_t = 501)]
        steps: usize,
    },
    /// Least-squares line through the mean fidelities of a sweep table
    /// (JSON).
    Fit {
        /// CSV table produced by sweep-n.
        input: PathBuf,
        /// Fidelity threshold for the maximum-chain-length bound.
        #[arg(long)]
        f0: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Build, run, and verify the two-phase compensation schedule for one
    /// disorder draw (JSON).
    Compensate {
        #[command(flatten)]
        common: Common,
    },
    /// Always-on protocol versus compensated schedule for n = 2..N (CSV).
    NaiveCompare {
        #[command(flatten)]
        common: Common,
    },
    /// Collective mode statistics on a rectangular lattice (CSV).
    LatticeModes {
        #[command(flatten)]
        common: Common,
        /// Lattice rows.
        #[arg(long, default_value_t = 2)]
        rows: usize,
        /// Lattice columns.
        #[arg(long, default_value_t = 2)]
        cols: usize,
    },
}

/// Runs the CLI on the given argument list (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) => 2,
        Error::Structural(_)
        | Error::NoConvergence { .. }
        | Error::Instability { .. }
        | Error::Unschedulable { .. }
        | Error::Fit(_) => 3,
    }
}

fn resolve(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(n) = common.n {
        cfg.n = n;
    }
    if let Some(delta_max) = common.delta_max {
        cfg.delta_max = delta_max;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if let Some(ms) = common.t_g_ms {
        cfg.t_g_seconds = ms * 1e-3;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// 17 significant digits: enough to round-trip any f64.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Modes { common } => {
            let cfg = resolve(&common)?;
            let spec = cfg.spec()?;
            let stats = mode_shift_statistics(&spec, cfg.trials, cfg.seed)?;
            let mut out = String::from("mode_index,omega_tilde_hz,shift_mean_hz,shift_std_hz\n");
            for k in 0..stats.omega_ideal.len() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    k,
                    fmt_f(stats.omega_ideal[k] / TAU),
                    fmt_f(stats.mean_shift[k] / TAU),
                    fmt_f(stats.std_shift[k] / TAU),
                ));
            }
            write_output(common.out.as_deref(), &out)
        }
        Command::Dispersion { common } => {
            let cfg = resolve(&common)?;
            let spec = cfg.spec()?;
            let freqs = analytic_uniform_dispersion(cfg.n, spec.omega_r, spec.g)?;
            let mut out = String::from("mode_index,omega_tilde_hz\n");
            for (k, w) in freqs.iter().enumerate() {
                out.push_str(&format!("{},{}\n", k, fmt_f(w / TAU)));
            }
            write_output(common.out.as_deref(), &out)
        }
        Command::SweepN { common } => {
            let cfg = resolve(&common)?;
            if cfg.n < 2 {
                return Err(Error::Domain("sweep-n needs n >= 2".into()));
            }
            let spec = cfg.spec()?;
            let deltas = match common.delta_max {
                Some(d) => vec![d],
                None => vec![0.01, 0.03, 0.05],
            };
            let table = sweep_fidelity_vs_n(
                &spec,
                2..=cfg.n,
                &deltas,
                cfg.t_g_seconds,
                cfg.trials,
                cfg.seed,
            )?;
            let mut out = String::from(SWEEP_CSV_HEADER);
            out.push('\n');
            for row in &table {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    fmt_f(row.delta_max),
                    row.trials,
                    fmt_f(row.mean_f),
                    fmt_f(row.std_f),
                ));
            }
            write_output(common.out.as_deref(), &out)
        }
        Command::SweepT {
            common,
            t_min_ms,
            t_max_ms,
            steps,
        } => {
            let cfg = resolve(&common)?;
            let spec = cfg.spec()?;
            let t_g = cfg.t_g_seconds;
            let t_min = t_min_ms.map_or(0.9 * t_g, |ms| ms * 1e-3);
            let t_max = t_max_ms.map_or(1.1 * t_g, |ms| ms * 1e-3);
            let sample = sample_errors(&spec, &mut trial_rng(cfg.seed, 0));
            let curve = fidelity_vs_time(&spec, &sample, t_g, t_min, t_max, steps)?;
            let mut out = String::from("t_seconds,fidelity\n");
            for (t, f) in &curve.points {
                out.push_str(&format!("{},{}\n", fmt_f(*t), fmt_f(*f)));
            }
            write_output(common.out.as_deref(), &out)?;
            let summary = serde_json::json!({
                "argmax_t_seconds": curve.argmax_t,
                "max_fidelity": curve.max_fidelity,
            });
            println!("{summary}");
            Ok(())
        }
        Command::Fit { input, f0, common } => {
            let data = std::fs::read(&input)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?;
            let rows = parse_sweep_csv(&data)?;
            let rows: Vec<_> = match common.delta_max {
                Some(d) => rows
                    .into_iter()
                    .filter(|r| (r.delta_max - d).abs() <= 1e-12 * d.abs().max(1.0))
                    .collect(),
                None => rows,
            };
            if rows.len() < 2 {
                return Err(Error::Fit(format!(
                    "need at least two rows to fit, got {}",
                    rows.len()
                )));
            }
            let points: Vec<(f64, f64)> =
                rows.iter().map(|r| (r.n as f64, r.mean_fidelity)).collect();
            let fit = linear_fit(&points)?;
            let n_max = match f0 {
                Some(f0) => Some(max_chain_length(&fit, f0)?),
                None => None,
            };
            let json = serde_json::json!({
                "slope": fit.slope,
                "intercept": fit.intercept,
                "pearson_r": fit.pearson_r,
                "n_max_at_f0": n_max,
            });
            write_output(common.out.as_deref(), &format!("{json}\n"))
        }
        Command::Compensate { common } => {
            let cfg = resolve(&common)?;
            let spec = cfg.spec()?;
            let sample = sample_errors(&spec, &mut trial_rng(cfg.seed, 0));
            let schedule = build_schedule(&spec, &sample, cfg.t_g_seconds)?;
            let (fid, total_time) = verify_compensation(&spec, &sample, cfg.t_g_seconds)?;
            let durations: Vec<f64> = schedule.entries().iter().map(|e| e.1).collect();
            let json = serde_json::json!({
                "n": cfg.n,
                "delta_max": cfg.delta_max,
                "seed": cfg.seed,
                "fidelity": fid,
                "total_time_seconds": total_time,
                "durations": durations,
            });
            write_output(common.out.as_deref(), &format!("{json}\n"))
        }
        Command::NaiveCompare { common } => {
            let cfg = resolve(&common)?;
            if cfg.n < 2 {
                return Err(Error::Domain("naive-compare needs n >= 2".into()));
            }
            let spec = cfg.spec()?;
            let mut out = String::from("n,delta_max,fidelity_naive,fidelity_compensated\n");
            for n in 2..=cfg.n {
                let spec_n = spec.with_n(n)?;
                let sample =
                    sample_errors(&spec_n, &mut trial_rng(mix64(&[cfg.seed, n as u64]), 0));
                let f_naive = naive_protocol_residual(&spec_n, &sample, cfg.t_g_seconds)?;
                let (f_comp, _) = verify_compensation(&spec_n, &sample, cfg.t_g_seconds)?;
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    n,
                    fmt_f(cfg.delta_max),
                    fmt_f(f_naive),
                    fmt_f(f_comp),
                ));
            }
            write_output(common.out.as_deref(), &out)
        }
        Command::LatticeModes { common, rows, cols } => {
            let cfg = resolve(&common)?;
            let spec = cfg.spec()?;
            let graph = CouplingGraph::lattice(rows, cols, spec.g)?;
            let stats = mode_shift_statistics_on(&spec, &graph, cfg.trials, cfg.seed)?;
            let mut out = String::from("mode_index,omega_tilde_hz,shift_mean_hz,shift_std_hz\n");
            for k in 0..stats.omega_ideal.len() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    k,
                    fmt_f(stats.omega_ideal[k] / TAU),
                    fmt_f(stats.mean_shift[k] / TAU),
                    fmt_f(stats.std_shift[k] / TAU),
                ));
            }
            write_output(common.out.as_deref(), &out)
        }
    }
}
