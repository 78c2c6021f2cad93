//! Chain parameters, frequency disorder, coupling graphs, and the quadratic
//! form of the coupled-resonator Hamiltonian.
//!
//! The phonon Hamiltonian is H = Σᵢ ωᵢ aᵢ†aᵢ + ½ Σᵢⱼ gᵢⱼ (aᵢ+aᵢ†)(aⱼ+aⱼ†),
//! with the self-couplings gᵢᵢ on the diagonal of the coupling graph. In the
//! block form H = â†𝒟â with 𝒟 = [[A, B], [B, A]] this gives B = g/2 and
//! A = B + diag(ωᵢ/2). The spectrum is computed from the mass-weighted
//! dynamical matrix V (see [`QuadraticForm`]), which is symmetric for any
//! disorder and coincides with 4(A² − B²) when all frequencies are equal.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};

/// Parameters of a resonator chain with one spin per resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSpec {
    /// Number of resonators (= number of spins).
    pub n: usize,
    /// Mean fundamental angular frequency ω_r, rad/s.
    pub omega_r: f64,
    /// Nearest-neighbour wire coupling g, rad/s.
    pub g: f64,
    /// Spin-resonator coupling λ̄ at frequency ω_r, rad/s.
    pub lambda_bar: f64,
    /// Maximum relative frequency error Δ_m, dimensionless.
    pub delta_max: f64,
}

impl ResonatorSpec {
    pub fn new(n: usize, omega_r: f64, g: f64, lambda_bar: f64, delta_max: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("need at least one resonator".into()));
        }
        if !(omega_r > 0.0) {
            return Err(Error::Domain(format!(
                "omega_r must be positive, got {omega_r:e}"
            )));
        }
        if !(g >= 0.0) {
            return Err(Error::Domain(format!("g must be non-negative, got {g:e}")));
        }
        if !(lambda_bar >= 0.0) {
            return Err(Error::Domain(format!(
                "lambda_bar must be non-negative, got {lambda_bar:e}"
            )));
        }
        if !(0.0..1.0).contains(&delta_max) {
            return Err(Error::Domain(format!(
                "delta_max must lie in [0, 1), got {delta_max}"
            )));
        }
        Ok(Self {
            n,
            omega_r,
            g,
            lambda_bar,
            delta_max,
        })
    }

    /// Same chain with a different resonator count.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.omega_r, self.g, self.lambda_bar, self.delta_max)
    }

    /// Same chain with a different disorder bound.
    pub fn with_delta_max(&self, delta_max: f64) -> Result<Self> {
        Self::new(self.n, self.omega_r, self.g, self.lambda_bar, delta_max)
    }
}

/// One disorder realization: per-resonator frequency errors ε_i.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySample {
    omega_r: f64,
    epsilon: Vec<f64>,
    omega: Vec<f64>,
}

impl FrequencySample {
    /// Builds a sample from absolute frequency errors (rad/s).
    pub fn from_epsilon(omega_r: f64, epsilon: Vec<f64>) -> Result<Self> {
        if !(omega_r > 0.0) {
            return Err(Error::Domain(format!(
                "omega_r must be positive, got {omega_r:e}"
            )));
        }
        let omega: Vec<f64> = epsilon.iter().map(|e| omega_r + e).collect();
        if let Some(i) = omega.iter().position(|w| !(*w > 0.0)) {
            return Err(Error::Domain(format!(
                "resonator {i} has non-positive frequency {:e}",
                omega[i]
            )));
        }
        Ok(Self {
            omega_r,
            epsilon,
            omega,
        })
    }

    /// Builds a sample from relative errors Δ_i = ε_i/ω_r.
    pub fn from_deltas(omega_r: f64, deltas: &[f64]) -> Result<Self> {
        Self::from_epsilon(omega_r, deltas.iter().map(|d| d * omega_r).collect())
    }

    /// The error-free sample for `spec` (all ε_i = 0).
    pub fn ideal(spec: &ResonatorSpec) -> Self {
        Self {
            omega_r: spec.omega_r,
            epsilon: vec![0.0; spec.n],
            omega: vec![spec.omega_r; spec.n],
        }
    }

    pub fn n(&self) -> usize {
        self.epsilon.len()
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    /// Absolute errors ε_i, rad/s.
    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    /// Actual frequencies ω_i = ω_r + ε_i, rad/s.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Relative errors Δ_i = ε_i/ω_r.
    pub fn deltas(&self) -> Vec<f64> {
        self.epsilon.iter().map(|e| e / self.omega_r).collect()
    }

    /// Restriction to the resonator pair `(i, i+1)` (0-based `i`).
    pub fn pair(&self, i: usize) -> Result<Self> {
        if i + 1 >= self.n() {
            return Err(Error::Structural(format!(
                "pair ({}, {}) out of range for n = {}",
                i,
                i + 1,
                self.n()
            )));
        }
        Self::from_epsilon(self.omega_r, vec![self.epsilon[i], self.epsilon[i + 1]])
    }
}

/// Draws n independent relative errors, uniform on [−Δ_m, +Δ_m].
///
/// Pass a stream from [`crate::rng::trial_rng`] so that trial k of an
/// ensemble is independent of execution order.
pub fn sample_errors<R: Rng>(spec: &ResonatorSpec, rng: &mut R) -> FrequencySample {
    let deltas: Vec<f64> = (0..spec.n)
        .map(|_| {
            if spec.delta_max == 0.0 {
                0.0
            } else {
                rng.gen_range(-spec.delta_max..=spec.delta_max)
            }
        })
        .collect();
    // delta_max < 1 keeps every omega_i positive, so this cannot fail
    FrequencySample::from_deltas(spec.omega_r, &deltas).expect("valid spec produces valid sample")
}

/// Symmetric matrix of couplings g_{i,j} (rad/s), self-couplings on the
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    g_matrix: DMatrix<f64>,
}

impl CouplingGraph {
    /// Wraps an explicit coupling matrix, which must be square and symmetric.
    pub fn new(g_matrix: DMatrix<f64>) -> Result<Self> {
        if !g_matrix.is_square() {
            return Err(Error::Structural(format!(
                "coupling matrix must be square, got {}x{}",
                g_matrix.nrows(),
                g_matrix.ncols()
            )));
        }
        let scale = g_matrix.amax().max(f64::MIN_POSITIVE);
        for i in 0..g_matrix.nrows() {
            for j in (i + 1)..g_matrix.ncols() {
                if (g_matrix[(i, j)] - g_matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Structural(format!(
                        "coupling matrix asymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { g_matrix })
    }

    /// Open chain with uniform nearest-neighbour coupling `g`.
    ///
    /// Off-diagonal entries g on the two sub-diagonals; self-couplings equal
    /// to g times the node degree, i.e. diag(g, 2g, …, 2g, g). A single
    /// resonator has no wire, so its matrix is 0.
    pub fn chain(n: usize, g: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("need at least one resonator".into()));
        }
        if !(g >= 0.0) {
            return Err(Error::Domain(format!("g must be non-negative, got {g:e}")));
        }
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = g;
            m[(i + 1, i)] = g;
        }
        if n > 1 {
            for i in 0..n {
                m[(i, i)] = if i == 0 || i == n - 1 { g } else { 2.0 * g };
            }
        }
        Ok(Self { g_matrix: m })
    }

    /// Rectangular lattice with 4-neighbour adjacency and uniform coupling.
    ///
    /// Sites are numbered row-major; self-couplings equal g times the number
    /// of incident edges. A 1×c lattice reduces to [`CouplingGraph::chain`].
    pub fn lattice(rows: usize, cols: usize, g: f64) -> Result<Self> {
        if rows < 1 || cols < 1 {
            return Err(Error::Domain("lattice needs at least one site".into()));
        }
        if !(g >= 0.0) {
            return Err(Error::Domain(format!("g must be non-negative, got {g:e}")));
        }
        let n = rows * cols;
        let idx = |r: usize, c: usize| r * cols + c;
        let mut m = DMatrix::zeros(n, n);
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    m[(idx(r, c), idx(r, c + 1))] = g;
                    m[(idx(r, c + 1), idx(r, c))] = g;
                }
                if r + 1 < rows {
                    m[(idx(r, c), idx(r + 1, c))] = g;
                    m[(idx(r + 1, c), idx(r, c))] = g;
                }
            }
        }
        for i in 0..n {
            let degree: f64 = (0..n).filter(|&j| j != i && m[(i, j)] != 0.0).count() as f64;
            m[(i, i)] = g * degree;
        }
        Ok(Self { g_matrix: m })
    }

    pub fn n(&self) -> usize {
        self.g_matrix.nrows()
    }

    pub fn g_matrix(&self) -> &DMatrix<f64> {
        &self.g_matrix
    }
}

/// The quadratic form of the phonon Hamiltonian for one disorder sample.
///
/// `a_block` and `b_block` are the blocks of 𝒟; `dynamical` is the symmetric
/// matrix V with V_ii = ωᵢ² + 2gᵢᵢωᵢ and V_ij = 2gᵢⱼ√(ωᵢωⱼ), whose
/// eigenvalues are the squared collective frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    a_block: DMatrix<f64>,
    b_block: DMatrix<f64>,
    dynamical: DMatrix<f64>,
    omega: Vec<f64>,
    omega_r: f64,
}

impl QuadraticForm {
    pub fn build(sample: &FrequencySample, graph: &CouplingGraph) -> Result<Self> {
        let n = sample.n();
        if graph.n() != n {
            return Err(Error::Structural(format!(
                "sample has {} resonators but graph has {}",
                n,
                graph.n()
            )));
        }
        let g = graph.g_matrix();
        let omega = sample.omega();

        let b_block = g / 2.0;
        let mut a_block = b_block.clone();
        for i in 0..n {
            a_block[(i, i)] += omega[i] / 2.0;
        }

        // fill one unordered pair at a time so V is symmetric bit-for-bit
        let mut dynamical = DMatrix::zeros(n, n);
        for i in 0..n {
            dynamical[(i, i)] = omega[i] * omega[i] + 2.0 * g[(i, i)] * omega[i];
            for j in (i + 1)..n {
                let v = 2.0 * g[(i, j)] * (omega[i] * omega[j]).sqrt();
                dynamical[(i, j)] = v;
                dynamical[(j, i)] = v;
            }
        }

        Ok(Self {
            a_block,
            b_block,
            dynamical,
            omega: omega.to_vec(),
            omega_r: sample.omega_r(),
        })
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn a_block(&self) -> &DMatrix<f64> {
        &self.a_block
    }

    pub fn b_block(&self) -> &DMatrix<f64> {
        &self.b_block
    }

    pub fn dynamical(&self) -> &DMatrix<f64> {
        &self.dynamical
    }

    /// Per-resonator frequencies the form was built from, rad/s.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use std::f64::consts::TAU;

    fn spec(n: usize, delta_max: f64) -> ResonatorSpec {
        ResonatorSpec::new(n, TAU * 1e6, TAU * 0.5e6, TAU * 50e3, delta_max).unwrap()
    }

    #[test]
    fn spec_validation_rejects_bad_parameters() {
        assert!(ResonatorSpec::new(0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ResonatorSpec::new(2, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(ResonatorSpec::new(2, 1.0, -1.0, 0.0, 0.0).is_err());
        assert!(ResonatorSpec::new(2, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(ResonatorSpec::new(2, 1.0, 0.0, 0.0, -0.1).is_err());
        assert!(ResonatorSpec::new(2, f64::NAN, 0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn zero_disorder_sample_is_exact() {
        let s = spec(5, 0.0);
        let sample = sample_errors(&s, &mut trial_rng(1, 0));
        assert!(sample.epsilon().iter().all(|&e| e == 0.0));
        assert!(sample.omega().iter().all(|&w| w == s.omega_r));
    }

    #[test]
    fn samples_respect_the_disorder_bound() {
        let s = spec(8, 0.05);
        for k in 0..200 {
            let sample = sample_errors(&s, &mut trial_rng(3, k));
            for d in sample.deltas() {
                assert!(d.abs() <= s.delta_max + 1e-15, "delta = {d}");
            }
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let s = spec(6, 0.2);
        let a = sample_errors(&s, &mut trial_rng(99, 4));
        let b = sample_errors(&s, &mut trial_rng(99, 4));
        assert_eq!(a, b);
        let c = sample_errors(&s, &mut trial_rng(99, 5));
        assert_ne!(a, c);
    }

    #[test]
    fn chain_matches_the_wire_pattern() {
        let g = 2.0;
        let m2 = CouplingGraph::chain(2, g).unwrap();
        assert_eq!(m2.g_matrix(), &DMatrix::from_row_slice(2, 2, &[g, g, g, g]));

        let m4 = CouplingGraph::chain(4, g).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m4.g_matrix()[(i, i)]).collect();
        assert_eq!(diag, vec![g, 2.0 * g, 2.0 * g, g]);
        // B = g_matrix/2 has corner diagonal g/2 and interior diagonal g
        assert_eq!(m4.g_matrix()[(0, 1)], g);
        assert_eq!(m4.g_matrix()[(0, 2)], 0.0);
    }

    #[test]
    fn single_resonator_has_no_wire() {
        let m = CouplingGraph::chain(1, 3.0).unwrap();
        assert_eq!(m.g_matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn chain_is_symmetric_for_all_sizes() {
        for n in 1..=12 {
            let m = CouplingGraph::chain(n, 1.5).unwrap();
            assert_eq!(m.g_matrix(), &m.g_matrix().transpose());
        }
    }

    #[test]
    fn one_row_lattice_is_a_chain() {
        let a = CouplingGraph::lattice(1, 7, 0.8).unwrap();
        let b = CouplingGraph::chain(7, 0.8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn square_lattice_degrees() {
        let g = 1.0;
        let m = CouplingGraph::lattice(2, 2, g).unwrap();
        for i in 0..4 {
            assert_eq!(m.g_matrix()[(i, i)], 2.0 * g);
        }
        // centre of a 3x3 lattice touches four edges; count them explicitly
        let m3 = CouplingGraph::lattice(3, 3, g).unwrap();
        let centre = 4;
        let degree = (0..9)
            .filter(|&j| j != centre && m3.g_matrix()[(centre, j)] != 0.0)
            .count();
        assert_eq!(degree, 4);
        assert_eq!(m3.g_matrix()[(centre, centre)], 4.0 * g);
    }

    #[test]
    fn graph_constructor_rejects_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(CouplingGraph::new(m).is_err());
    }

    #[test]
    fn quadratic_form_for_the_uniform_pair() {
        let s = spec(2, 0.0);
        let sample = FrequencySample::ideal(&s);
        let graph = CouplingGraph::chain(2, s.g).unwrap();
        let form = QuadraticForm::build(&sample, &graph).unwrap();
        let (w, g) = (s.omega_r, s.g);
        let want = DMatrix::from_row_slice(
            2,
            2,
            &[
                w * w + 2.0 * g * w,
                2.0 * g * w,
                2.0 * g * w,
                w * w + 2.0 * g * w,
            ],
        );
        let diff = (form.dynamical() - &want).amax();
        assert!(diff <= 1e-9, "max diff {diff:e}");
    }

    #[test]
    fn decoupled_form_is_diagonal() {
        let s = ResonatorSpec::new(3, TAU * 1e6, 0.0, 0.0, 0.1).unwrap();
        let sample = sample_errors(&s, &mut trial_rng(11, 0));
        let graph = CouplingGraph::chain(3, 0.0).unwrap();
        let form = QuadraticForm::build(&sample, &graph).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    sample.omega()[i] * sample.omega()[i]
                } else {
                    0.0
                };
                assert_eq!(form.dynamical()[(i, j)], want);
            }
        }
    }

    #[test]
    fn a_minus_b_is_half_the_frequencies() {
        let s = spec(5, 0.1);
        let sample = sample_errors(&s, &mut trial_rng(2, 7));
        let graph = CouplingGraph::chain(5, s.g).unwrap();
        let form = QuadraticForm::build(&sample, &graph).unwrap();
        let diff = form.a_block() - form.b_block();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { sample.omega()[i] / 2.0 } else { 0.0 };
                assert!((diff[(i, j)] - want).abs() <= 1e-12 * sample.omega()[i]);
            }
        }
    }

    #[test]
    fn form_rejects_mismatched_sizes() {
        let s = spec(3, 0.0);
        let sample = FrequencySample::ideal(&s);
        let graph = CouplingGraph::chain(4, s.g).unwrap();
        assert!(matches!(
            QuadraticForm::build(&sample, &graph),
            Err(Error::Structural(_))
        ));
    }
}
