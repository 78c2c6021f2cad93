//! Collective phonon modes of the coupled chain.
//!
//! Diagonalizing the dynamical matrix V gives the collective frequencies
//! ω̃_k = √eig_k(V) and the orthonormal mode matrix O. The Bogoliubov blocks
//! of the para-unitary transform follow in closed form,
//!
//!   u_ik = (O_ik/2)(√(ωᵢ/ω̃_k) + √(ω̃_k/ωᵢ)),
//!   v_ik = (O_ik/2)(√(ωᵢ/ω̃_k) − √(ω̃_k/ωᵢ)),
//!
//! which satisfy the commutation-preserving condition u uᵀ − v vᵀ = I.

use nalgebra::DMatrix;

use crate::chain::{sample_errors, CouplingGraph, FrequencySample, QuadraticForm, ResonatorSpec};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Normal modes of one disorder sample: frequencies, mode matrix, and the
/// Bogoliubov (u, v) blocks mapping site operators to mode operators.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveModes {
    omega_tilde: Vec<f64>,
    mode_matrix: DMatrix<f64>,
    u_block: DMatrix<f64>,
    v_block: DMatrix<f64>,
}

impl CollectiveModes {
    #[cfg(test)]
    pub(crate) fn from_parts(
        omega_tilde: Vec<f64>,
        mode_matrix: DMatrix<f64>,
        u_block: DMatrix<f64>,
        v_block: DMatrix<f64>,
    ) -> Self {
        Self {
            omega_tilde,
            mode_matrix,
            u_block,
            v_block,
        }
    }

    pub fn n(&self) -> usize {
        self.omega_tilde.len()
    }

    /// Mode angular frequencies ω̃_k, ascending, rad/s.
    pub fn omega_tilde(&self) -> &[f64] {
        &self.omega_tilde
    }

    /// Orthonormal eigenvector matrix of V; column k belongs to ω̃_k.
    pub fn mode_matrix(&self) -> &DMatrix<f64> {
        &self.mode_matrix
    }

    pub fn u_block(&self) -> &DMatrix<f64> {
        &self.u_block
    }

    pub fn v_block(&self) -> &DMatrix<f64> {
        &self.v_block
    }
}

/// Diagonalizes the quadratic form into collective modes.
///
/// Fails with [`Error::Instability`] if V has a non-positive eigenvalue.
pub fn collective_frequencies(form: &QuadraticForm) -> Result<CollectiveModes> {
    let n = form.n();
    let (evals, mode_matrix) = symmetric_eigen(form.dynamical())?;
    if let Some(k) = evals.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Instability {
            mode: k,
            value: evals[k],
        });
    }
    let omega_tilde: Vec<f64> = evals.iter().map(|v| v.sqrt()).collect();

    let omega = form.omega();
    let mut u_block = DMatrix::zeros(n, n);
    let mut v_block = DMatrix::zeros(n, n);
    for k in 0..n {
        for i in 0..n {
            let ratio = (omega[i] / omega_tilde[k]).sqrt();
            let o = mode_matrix[(i, k)];
            u_block[(i, k)] = 0.5 * o * (ratio + 1.0 / ratio);
            v_block[(i, k)] = 0.5 * o * (ratio - 1.0 / ratio);
        }
    }

    Ok(CollectiveModes {
        omega_tilde,
        mode_matrix,
        u_block,
        v_block,
    })
}

/// Closed-form mode frequencies of the uniform open chain,
/// ω̃ = √(ω_r² + 4ω_r g (1 + cos((k+1)π/n))) for k = 0…n−1, ascending.
pub fn analytic_uniform_dispersion(n: usize, omega_r: f64, g: f64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::Domain("need at least one mode".into()));
    }
    if !(omega_r > 0.0) {
        return Err(Error::Domain(format!(
            "omega_r must be positive, got {omega_r:e}"
        )));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let brace = 1.0 + ((k as f64 + 1.0) * std::f64::consts::PI / n as f64).cos();
        let sq = omega_r * omega_r + 4.0 * omega_r * g * brace;
        if !(sq > 0.0) {
            return Err(Error::Domain(format!(
                "dispersion argument non-positive at mode {k}: {sq:e}"
            )));
        }
        out.push(sq.sqrt());
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Disorder statistics of the mode frequencies over an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeShiftStats {
    /// Error-free mode frequencies, rad/s.
    pub omega_ideal: Vec<f64>,
    /// Mean of ω̃_k(sample) − ω̃_k(0) over the trials, rad/s.
    pub mean_shift: Vec<f64>,
    /// Standard deviation of the shift over the trials (n−1 denominator), rad/s.
    pub std_shift: Vec<f64>,
    /// The first trial's shift vector, rad/s.
    pub single_run: Vec<f64>,
}

/// Mean and spread of the collective-frequency shifts for `trials` disorder
/// draws on the open chain. Trial k reads random stream k of `seed`.
pub fn mode_shift_statistics(
    spec: &ResonatorSpec,
    trials: usize,
    seed: u64,
) -> Result<ModeShiftStats> {
    let graph = CouplingGraph::chain(spec.n, spec.g)?;
    mode_shift_statistics_on(spec, &graph, trials, seed)
}

/// Same statistics on an arbitrary coupling graph (e.g. a 2D lattice).
pub fn mode_shift_statistics_on(
    spec: &ResonatorSpec,
    graph: &CouplingGraph,
    trials: usize,
    seed: u64,
) -> Result<ModeShiftStats> {
    if trials < 1 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let n = graph.n();
    let spec_on_graph = spec.with_n(n)?;
    let ideal_form = QuadraticForm::build(&FrequencySample::ideal(&spec_on_graph), graph)?;
    let omega_ideal = collective_frequencies(&ideal_form)?.omega_tilde().to_vec();

    let mut shifts: Vec<Vec<f64>> = Vec::with_capacity(trials);
    for k in 0..trials {
        let sample = sample_errors(&spec_on_graph, &mut trial_rng(seed, k as u64));
        let form = QuadraticForm::build(&sample, graph)?;
        let modes = collective_frequencies(&form)?;
        shifts.push(
            modes
                .omega_tilde()
                .iter()
                .zip(&omega_ideal)
                .map(|(w, w0)| w - w0)
                .collect(),
        );
    }

    let tf = trials as f64;
    let mean_shift: Vec<f64> = (0..n)
        .map(|m| shifts.iter().map(|s| s[m]).sum::<f64>() / tf)
        .collect();
    let std_shift: Vec<f64> = (0..n)
        .map(|m| {
            if trials < 2 {
                0.0
            } else {
                let mu = mean_shift[m];
                (shifts.iter().map(|s| (s[m] - mu).powi(2)).sum::<f64>() / (tf - 1.0)).sqrt()
            }
        })
        .collect();

    Ok(ModeShiftStats {
        omega_ideal,
        mean_shift,
        std_shift,
        single_run: shifts[0].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn spec(n: usize, delta_max: f64) -> ResonatorSpec {
        ResonatorSpec::new(n, TAU * 1e6, TAU * 0.5e6, TAU * 50e3, delta_max).unwrap()
    }

    fn modes_for(spec: &ResonatorSpec, sample: &FrequencySample) -> CollectiveModes {
        let graph = CouplingGraph::chain(spec.n, spec.g).unwrap();
        let form = QuadraticForm::build(sample, &graph).unwrap();
        collective_frequencies(&form).unwrap()
    }

    #[test]
    fn uniform_pair_has_the_closed_form_spectrum() {
        let s = spec(2, 0.0);
        let modes = modes_for(&s, &FrequencySample::ideal(&s));
        let want_low = s.omega_r;
        let want_high = (s.omega_r * s.omega_r + 4.0 * s.g * s.omega_r).sqrt();
        assert!((modes.omega_tilde()[0] - want_low).abs() / want_low < 1e-12);
        assert!((modes.omega_tilde()[1] - want_high).abs() / want_high < 1e-12);
        // sqrt(3) MHz for the reference parameters
        assert!((modes.omega_tilde()[1] / TAU / 1e6 - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn decoupled_modes_are_the_sorted_site_frequencies() {
        let s = ResonatorSpec::new(6, TAU * 1e6, 0.0, 0.0, 0.1).unwrap();
        let sample = sample_errors(&s, &mut trial_rng(17, 0));
        let graph = CouplingGraph::chain(6, 0.0).unwrap();
        let form = QuadraticForm::build(&sample, &graph).unwrap();
        let modes = collective_frequencies(&form).unwrap();
        let mut sorted = sample.omega().to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (w, w0) in modes.omega_tilde().iter().zip(&sorted) {
            assert!((w - w0).abs() / w0 <= 1e-12);
        }
    }

    #[test]
    fn numeric_spectrum_matches_the_analytic_dispersion() {
        for n in 2..=12 {
            let s = spec(n, 0.0);
            let modes = modes_for(&s, &FrequencySample::ideal(&s));
            let analytic = analytic_uniform_dispersion(n, s.omega_r, s.g).unwrap();
            for (w, a) in modes.omega_tilde().iter().zip(&analytic) {
                assert!((w - a).abs() / a <= 1e-9, "n = {n}: {w} vs {a}");
            }
        }
    }

    #[test]
    fn dispersion_edge_cases() {
        // k = n-1 term has brace = 1 + cos(pi) = 0, so omega_r survives
        for n in 1..=9 {
            let d = analytic_uniform_dispersion(n, TAU * 1e6, TAU * 0.5e6).unwrap();
            assert!((d[0] - TAU * 1e6).abs() / (TAU * 1e6) < 1e-12);
        }
        // n = 3 closed form: 1.0, sqrt(2), 2.0 MHz
        let d3 = analytic_uniform_dispersion(3, TAU * 1e6, TAU * 0.5e6).unwrap();
        let want = [1.0, 2f64.sqrt(), 2.0];
        for (d, w) in d3.iter().zip(&want) {
            assert!((d / TAU / 1e6 - w).abs() < 1e-12);
        }
    }

    #[test]
    fn para_unitarity_holds_under_strong_disorder() {
        for seed in 0..40 {
            let n = 2 + (seed as usize % 11);
            let s = spec(n, 0.2);
            let sample = sample_errors(&s, &mut trial_rng(seed, 0));
            let modes = modes_for(&s, &sample);
            let u = modes.u_block();
            let v = modes.v_block();
            let check = u * u.transpose() - v * v.transpose() - DMatrix::identity(n, n);
            assert!(check.amax() <= 1e-10, "seed {seed}: {:e}", check.amax());
        }
    }

    #[test]
    fn u_plus_v_collapses_to_the_mode_matrix_row_scaling() {
        let s = spec(5, 0.15);
        let sample = sample_errors(&s, &mut trial_rng(5, 2));
        let modes = modes_for(&s, &sample);
        for i in 0..5 {
            for k in 0..5 {
                let want = (sample.omega()[i] / modes.omega_tilde()[k]).sqrt()
                    * modes.mode_matrix()[(i, k)];
                let got = modes.u_block()[(i, k)] + modes.v_block()[(i, k)];
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn spectrum_survives_chain_reversal() {
        let s = spec(7, 0.1);
        let sample = sample_errors(&s, &mut trial_rng(23, 1));
        let reversed =
            FrequencySample::from_epsilon(s.omega_r, sample.epsilon().iter().rev().copied().collect())
                .unwrap();
        let a = modes_for(&s, &sample);
        let b = modes_for(&s, &reversed);
        for (x, y) in a.omega_tilde().iter().zip(b.omega_tilde()) {
            assert!((x - y).abs() / y <= 1e-9);
        }
    }

    #[test]
    fn weak_coupling_approaches_the_decoupled_limit_monotonically() {
        let base = ResonatorSpec::new(6, TAU * 1e6, 0.0, 0.0, 0.1).unwrap();
        let sample = sample_errors(&base, &mut trial_rng(31, 0));
        let mut sorted = sample.omega().to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut last = f64::INFINITY;
        for decade in 1..=4 {
            let g = TAU * 1e6 * 10f64.powi(-decade);
            let graph = CouplingGraph::chain(6, g).unwrap();
            let form = QuadraticForm::build(&sample, &graph).unwrap();
            let modes = collective_frequencies(&form).unwrap();
            let dev = modes
                .omega_tilde()
                .iter()
                .zip(&sorted)
                .map(|(w, w0)| (w - w0).abs())
                .fold(0.0f64, f64::max);
            assert!(dev < last, "deviation should shrink with g");
            last = dev;
        }
    }

    #[test]
    fn instability_reports_the_offending_mode() {
        // negative couplings strong enough to tip an eigenvalue below zero
        let omega = TAU * 1e6;
        let sample = FrequencySample::from_epsilon(omega, vec![0.0, 0.0]).unwrap();
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = -10.0 * omega;
        m[(1, 0)] = -10.0 * omega;
        let graph = CouplingGraph::new(m).unwrap();
        let form = QuadraticForm::build(&sample, &graph).unwrap();
        match collective_frequencies(&form) {
            Err(Error::Instability { mode, value }) => {
                assert_eq!(mode, 0);
                assert!(value < 0.0);
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn shift_statistics_are_zero_without_disorder() {
        let s = spec(5, 0.0);
        let stats = mode_shift_statistics(&s, 10, 3).unwrap();
        assert!(stats.mean_shift.iter().all(|&x| x == 0.0));
        assert!(stats.std_shift.iter().all(|&x| x == 0.0));
        assert!(stats.single_run.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn shift_statistics_single_trial_equals_single_run() {
        let s = spec(4, 0.05);
        let stats = mode_shift_statistics(&s, 1, 7).unwrap();
        assert_eq!(stats.mean_shift, stats.single_run);
        assert!(stats.std_shift.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn shifts_stay_within_the_perturbative_bound() {
        let s = spec(11, 0.05);
        let stats = mode_shift_statistics(&s, 50, 11).unwrap();
        let bound = 2.0 * s.delta_max * s.omega_r;
        // brute-force max over the trial set, rechecked sample by sample
        for k in 0..50 {
            let sample = sample_errors(&s, &mut trial_rng(11, k));
            let graph = CouplingGraph::chain(s.n, s.g).unwrap();
            let modes =
                collective_frequencies(&QuadraticForm::build(&sample, &graph).unwrap()).unwrap();
            for (w, w0) in modes.omega_tilde().iter().zip(&stats.omega_ideal) {
                assert!((w - w0).abs() <= bound);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn uniform_case_matches_four_a2_minus_b2(n in 2usize..=12) {
            let s = spec(n, 0.0);
            let graph = CouplingGraph::chain(n, s.g).unwrap();
            let form = QuadraticForm::build(&FrequencySample::ideal(&s), &graph).unwrap();
            let a = form.a_block();
            let b = form.b_block();
            let d = (a * a - b * b) * 4.0;
            let (ev_d, _) = symmetric_eigen(&d).unwrap();
            let (ev_v, _) = symmetric_eigen(form.dynamical()).unwrap();
            for (x, y) in ev_d.iter().zip(&ev_v) {
                prop_assert!((x - y).abs() <= 1e-10 * y.abs());
            }
        }

        #[test]
        fn dynamical_matrix_stays_positive(seed in 0u64..500, n in 2usize..=10) {
            let s = spec(n, 0.2);
            let sample = sample_errors(&s, &mut trial_rng(seed, 0));
            let graph = CouplingGraph::chain(n, s.g).unwrap();
            let form = QuadraticForm::build(&sample, &graph).unwrap();
            let (evals, _) = symmetric_eigen(form.dynamical()).unwrap();
            prop_assert!(evals[0] > 0.0);
        }
    }
}
