//! Mode-spin couplings, effective Ising interactions, diagonal evolution of
//! the spin register, and fidelities against the error-free chain.
//!
//! Each spin couples to its resonator as (λᵢ/2)(aᵢ+aᵢ†)σ_zⁱ with
//! λᵢ = λ̄√(ω_r/ωᵢ). Rewriting the site operators in collective modes and
//! adiabatically eliminating the phonons leaves a pure σ_z σ_z spin network
//! whose pair couplings are inversely weighted by the mode frequencies.

use num_complex::Complex64;

use nalgebra::DMatrix;

use crate::chain::{CouplingGraph, FrequencySample, QuadraticForm, ResonatorSpec};
use crate::error::{Error, Result};
use crate::modes::{collective_frequencies, CollectiveModes};

/// Largest spin register the dense statevector representation accepts.
pub const MAX_SPINS: usize = 24;

/// λᵢ = λ̄√(ω_r/ωᵢ): the spin-resonator coupling dragged along by the
/// frequency error of resonator i.
pub fn coupling_fluctuation(lambda_bar: f64, omega_r: f64, omega_i: f64) -> Result<f64> {
    if !(omega_i > 0.0) {
        return Err(Error::Domain(format!(
            "omega_i must be positive, got {omega_i:e}"
        )));
    }
    if !(omega_r > 0.0) {
        return Err(Error::Domain(format!(
            "omega_r must be positive, got {omega_r:e}"
        )));
    }
    Ok(lambda_bar * (omega_r / omega_i).sqrt())
}

/// Coupling of each collective mode to each spin's z component.
///
/// Entry (k, i) is λ_{k,i} = (λᵢ/2)(u_{ik} + v_{ik}) = (λᵢ/2)√(ωᵢ/ω̃_k) O_{ik},
/// the coefficient of (b_k + b_k†)σ_zⁱ when the site coupling
/// (λᵢ/2)(aᵢ+aᵢ†)σ_zⁱ is rewritten in mode operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpinWeights {
    lambda_nk: DMatrix<f64>,
}

impl ModeSpinWeights {
    pub fn n(&self) -> usize {
        self.lambda_nk.nrows()
    }

    /// Weight of mode `k` on spin `i`.
    pub fn weight(&self, k: usize, i: usize) -> f64 {
        self.lambda_nk[(k, i)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.lambda_nk
    }
}

pub fn mode_spin_weights(
    sample: &FrequencySample,
    modes: &CollectiveModes,
    lambda_bar: f64,
) -> Result<ModeSpinWeights> {
    let n = sample.n();
    if modes.n() != n {
        return Err(Error::Structural(format!(
            "sample has {} resonators but modes have {}",
            n,
            modes.n()
        )));
    }
    let mut lambda_nk = DMatrix::zeros(n, n);
    for i in 0..n {
        let lambda_i = coupling_fluctuation(lambda_bar, sample.omega_r(), sample.omega()[i])?;
        for k in 0..n {
            let ratio = (sample.omega()[i] / modes.omega_tilde()[k]).sqrt();
            lambda_nk[(k, i)] = 0.5 * lambda_i * ratio * modes.mode_matrix()[(i, k)];
        }
    }
    Ok(ModeSpinWeights { lambda_nk })
}

/// Effective spin-spin σ_z σ_z coupling matrix, rad/s. Symmetric with a zero
/// diagonal; entry (i, j) multiplies σ_zⁱσ_zʲ once per unordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingCouplings {
    m_matrix: DMatrix<f64>,
}

impl IsingCouplings {
    /// Wraps an explicit coupling matrix; the diagonal is forced to zero.
    pub fn from_matrix(mut m_matrix: DMatrix<f64>) -> Result<Self> {
        if !m_matrix.is_square() {
            return Err(Error::Structural("coupling matrix must be square".into()));
        }
        let scale = m_matrix.amax().max(f64::MIN_POSITIVE);
        for i in 0..m_matrix.nrows() {
            for j in (i + 1)..m_matrix.ncols() {
                if (m_matrix[(i, j)] - m_matrix[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::Structural(format!(
                        "coupling matrix asymmetric at ({i}, {j})"
                    )));
                }
            }
            m_matrix[(i, i)] = 0.0;
        }
        Ok(Self { m_matrix })
    }

    /// Uniform nearest-neighbour couplings `m` on an open chain of `n` spins.
    pub fn nearest_neighbour_chain(n: usize, m: f64) -> Result<Self> {
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            mat[(i, i + 1)] = m;
            mat[(i + 1, i)] = m;
        }
        Self::from_matrix(mat)
    }

    pub fn n(&self) -> usize {
        self.m_matrix.nrows()
    }

    pub fn m_matrix(&self) -> &DMatrix<f64> {
        &self.m_matrix
    }

    /// Coupling of the unordered pair (i, j).
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.m_matrix[(i, j)]
    }
}

/// Phonon-mediated Ising couplings from the mode-spin weights:
///
///   M_ij = 2 Σ_k λ̃_{k,i} λ̃_{k,j} / ω̃_k,   λ̃ = λᵢ(u_{ik}+v_{ik}) = 2·weights.
///
/// λ̃ is the mode coupling in the doubled (a+a†)-quadrature normalization;
/// with the reference chain (1 MHz, 500 kHz, 50 kHz) the nearest-neighbour
/// value comes out at |M|/2π ≈ 1.67 kHz.
pub fn effective_couplings(
    weights: &ModeSpinWeights,
    modes: &CollectiveModes,
) -> Result<IsingCouplings> {
    let n = weights.n();
    if modes.n() != n {
        return Err(Error::Structural(format!(
            "weights are {}-mode but modes are {}-mode",
            n,
            modes.n()
        )));
    }
    let mut m_matrix = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc = 0.0;
            for k in 0..n {
                let lam_i = 2.0 * weights.weight(k, i);
                let lam_j = 2.0 * weights.weight(k, j);
                acc += lam_i * lam_j / modes.omega_tilde()[k];
            }
            let m = 2.0 * acc;
            m_matrix[(i, j)] = m;
            m_matrix[(j, i)] = m;
        }
    }
    Ok(IsingCouplings { m_matrix })
}

/// Dense state of an n-spin register. Basis index bit n−1−i holds spin i
/// (spin 0 is the most significant bit); bit 0 ↔ s = +1, bit 1 ↔ s = −1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl SpinState {
    /// |+⟩^⊗n, the uniform superposition all simulations start from.
    pub fn plus_state(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_spins: n,
            amplitudes: vec![amp; dim],
        })
    }

    /// A single computational basis state.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        Self::check_size(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Structural(format!(
                "basis index {index} out of range for {n} spins"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_spins: n,
            amplitudes,
        })
    }

    /// Wraps an amplitude vector, which must have power-of-two length and
    /// unit norm within 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Structural(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        Self::check_size(n)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Structural(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            n_spins: n,
            amplitudes,
        })
    }

    fn check_size(n: usize) -> Result<()> {
        if n < 1 {
            return Err(Error::Domain("need at least one spin".into()));
        }
        if n > MAX_SPINS {
            return Err(Error::Domain(format!(
                "{n} spins exceed the {MAX_SPINS}-spin statevector cap"
            )));
        }
        Ok(())
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// s value (±1) of spin `i` in basis state `index`.
    #[inline]
    pub fn spin_value(&self, index: usize, i: usize) -> f64 {
        let bit = (index >> (self.n_spins - 1 - i)) & 1;
        1.0 - 2.0 * bit as f64
    }
}

/// Applies U(t) = exp(i t Σ_{i<j} M_ij σ_zⁱ σ_zʲ) to the state.
///
/// The exponent is accumulated in double precision from the upper triangle
/// of M, once per basis state; the diagonal of M never contributes.
pub fn ising_evolve(m: &IsingCouplings, t: f64, state: &SpinState) -> Result<SpinState> {
    let n = state.n_spins();
    if m.n() != n {
        return Err(Error::Structural(format!(
            "coupling matrix is {}-spin but state is {}-spin",
            m.n(),
            n
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("evolution time must be finite, got {t}")));
    }
    let mut amplitudes = Vec::with_capacity(state.amplitudes.len());
    for (index, amp) in state.amplitudes.iter().enumerate() {
        let mut phase = 0.0f64;
        for i in 0..n {
            let s_i = state.spin_value(index, i);
            for j in (i + 1)..n {
                phase += m.pair(i, j) * s_i * state.spin_value(index, j);
            }
        }
        let rot = Complex64::from_polar(1.0, t * phase);
        amplitudes.push(amp * rot);
    }
    Ok(SpinState {
        n_spins: n,
        amplitudes,
    })
}

/// F = |⟨a|b⟩|, the modulus of the overlap of two normalized states.
pub fn fidelity(a: &SpinState, b: &SpinState) -> Result<f64> {
    if a.n_spins != b.n_spins {
        return Err(Error::Structural(format!(
            "state dimensions differ: {} vs {} spins",
            a.n_spins, b.n_spins
        )));
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    // rounding can push the modulus a few ulp past 1 for unit vectors
    Ok(overlap.norm().min(1.0))
}

/// Full pipeline from a disorder sample to the Ising couplings of the open
/// chain: quadratic form → collective modes → mode-spin weights → M.
pub fn chain_couplings(spec: &ResonatorSpec, sample: &FrequencySample) -> Result<IsingCouplings> {
    if sample.n() != spec.n {
        return Err(Error::Structural(format!(
            "sample has {} resonators but spec wants {}",
            sample.n(),
            spec.n
        )));
    }
    let graph = CouplingGraph::chain(spec.n, spec.g)?;
    let form = QuadraticForm::build(sample, &graph)?;
    let modes = collective_frequencies(&form)?;
    let weights = mode_spin_weights(sample, &modes, spec.lambda_bar)?;
    effective_couplings(&weights, &modes)
}

/// Fidelity after time t_g between the disordered chain's state and the
/// error-free chain's state, both starting from |+⟩^⊗n.
pub fn gate_fidelity(spec: &ResonatorSpec, sample: &FrequencySample, t_g: f64) -> Result<f64> {
    let actual = chain_couplings(spec, sample)?;
    let ideal = chain_couplings(spec, &FrequencySample::ideal(spec))?;
    let start = SpinState::plus_state(spec.n)?;
    let evolved = ising_evolve(&actual, t_g, &start)?;
    let target = ising_evolve(&ideal, t_g, &start)?;
    fidelity(&evolved, &target)
}

/// A sampled fidelity-versus-time curve with its grid maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    /// (t, F(t)) pairs on the uniform grid.
    pub points: Vec<(f64, f64)>,
    /// Grid time at which F peaks.
    pub argmax_t: f64,
    /// Peak fidelity over the grid.
    pub max_fidelity: f64,
}

/// F(t) = overlap of the disordered state at time t with the error-free
/// state frozen at `t_g0`, sampled on `steps` uniformly spaced times.
pub fn fidelity_vs_time(
    spec: &ResonatorSpec,
    sample: &FrequencySample,
    t_g0: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<FidelityCurve> {
    if steps < 2 {
        return Err(Error::Domain("need at least two grid points".into()));
    }
    if !(t_min < t_max) {
        return Err(Error::Domain(format!(
            "need t_min < t_max, got {t_min:e} and {t_max:e}"
        )));
    }
    let actual = chain_couplings(spec, sample)?;
    let ideal = chain_couplings(spec, &FrequencySample::ideal(spec))?;
    let start = SpinState::plus_state(spec.n)?;
    let target = ising_evolve(&ideal, t_g0, &start)?;

    let mut points = Vec::with_capacity(steps);
    let (mut argmax_t, mut max_fidelity) = (t_min, f64::NEG_INFINITY);
    for k in 0..steps {
        let t = t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64;
        let f = fidelity(&ising_evolve(&actual, t, &start)?, &target)?;
        if f > max_fidelity {
            max_fidelity = f;
            argmax_t = t;
        }
        points.push((t, f));
    }
    Ok(FidelityCurve {
        points,
        argmax_t,
        max_fidelity,
    })
}
