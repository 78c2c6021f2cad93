use std::f64::consts::TAU;
use namr_sim::{fidelity_vs_time, sample_errors, ResonatorSpec};

fn main() {
    let t_g = 3e-4;
    for &n in &[5usize, 8] {
        let s = ResonatorSpec::new(n, TAU * 1e6, TAU * 0.5e6, TAU * 50e3, 0.01).unwrap();
        let mut below = 0usize;
        let mut residuals = Vec::new();
        for k in 0..1000u64 {
            let sample = sample_errors(&s, &mut namr_sim::rng::trial_rng(42, k));
            let c = fidelity_vs_time(&s, &sample, t_g, 0.290e-3, 0.315e-3, 501).unwrap();
            let r = 1.0 - c.max_fidelity;
            residuals.push(r);
            if r > 1e-4 { below += 1; }
        }
        residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!("n={n}: p(residual>1e-4) = {}/1000; percentiles p5={:.2e} p10={:.2e} p15={:.2e} p25={:.2e} p50={:.2e}",
            below, residuals[50], residuals[100], residuals[150], residuals[250], residuals[500]);
        // count for the first 100 seeds (the acceptance draw)
        let first100 = residuals.len(); let _ = first100;
        let mut b100 = 0;
        for k in 0..100u64 {
            let sample = sample_errors(&s, &mut namr_sim::rng::trial_rng(42, k));
            let c = fidelity_vs_time(&s, &sample, t_g, 0.290e-3, 0.315e-3, 501).unwrap();
            if 1.0 - c.max_fidelity > 1e-4 { b100 += 1; }
        }
        println!("n={n}: first-100-seed count = {b100}");
    }
}
