//! Time evolution of the dephasing X-X Ising chain and the single-site
//! Hadamard-generating Hamiltonian. Units have `hbar = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{
    apply_1q_in_place, site_mask, unitary_from_hamiltonian, DensityMatrix, StateVector, C64, ZERO,
};
use crate::limits::Limits;
use crate::ptm_seq::ptm_digit_sum;

/// Entries with modulus at or below this count as zero when classifying support.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;
/// Largest accepted local error per step, estimated by step halving.
pub const LOCAL_ERROR_TOL: f64 = 1e-8;
const MAX_HALVINGS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainConfig {
    pub n: u32,
    pub g: f64,
    /// Dephasing rate per site.
    pub gamma: Vec<f64>,
    /// Spacing of the saved time grid; the integrator may subdivide it.
    pub dt: f64,
    pub t_final: f64,
}

impl ChainConfig {
    /// `g = 1`, uniform `gamma = 0.1 g`, `dt = 0.02`, `t_final = 5 / g`.
    pub fn new(n: u32) -> Self {
        ChainConfig {
            n,
            g: 1.0,
            gamma: vec![0.1; n as usize],
            dt: 0.02,
            t_final: 5.0,
        }
    }

    pub fn with_uniform_gamma(mut self, gamma: f64) -> Self {
        self.gamma = vec![gamma; self.n as usize];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(PtmError::invalid("chain needs at least one qubit"));
        }
        Limits::check("density-matrix qubits", self.n, Limits::from_env().density_qubits)?;
        if self.gamma.len() != self.n as usize {
            return Err(PtmError::DimensionMismatch {
                expected: self.n as usize,
                found: self.gamma.len(),
            });
        }
        if !self.g.is_finite() || !self.dt.is_finite() || !self.t_final.is_finite() {
            return Err(PtmError::NonFinite("chain configuration"));
        }
        if self.gamma.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(PtmError::invalid("dephasing rates must be finite and non-negative"));
        }
        if self.dt <= 0.0 {
            return Err(PtmError::invalid("dt must be positive"));
        }
        if self.t_final < 0.0 {
            return Err(PtmError::invalid("t_final must be non-negative"));
        }
        Ok(())
    }
}

fn bond_masks(n: u32) -> Vec<usize> {
    (1..n as usize)
        .map(|k| site_mask(n, k) | site_mask(n, k + 1))
        .collect()
}

/// `g sum_k S_x^(k) S_x^(k+1)` with `S_x = sigma_x / 2`, dense.
pub fn xx_hamiltonian(n: u32, g: f64) -> Result<DMatrix<C64>> {
    if n < 2 {
        return Err(PtmError::invalid("X-X chain needs at least two qubits"));
    }
    Limits::check("dense operator qubits", n, Limits::from_env().operator_qubits)?;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for m in bond_masks(n) {
        for i in 0..dim {
            h[(i ^ m, i)] += C64::new(g / 4.0, 0.0);
        }
    }
    Ok(h)
}

/// `d rho / dt` applied matrix-free: bonds act by index flips and the
/// dephasers are diagonal in the product basis.
struct Generator {
    dim: usize,
    bonds: Vec<usize>,
    coupling: f64,
    /// Decay rate of entry `(i, j)`, column-major.
    decay: Vec<f64>,
}

impl Generator {
    fn new(config: &ChainConfig) -> Self {
        let n = config.n;
        let dim = 1usize << n;
        let masks: Vec<usize> = (1..=n as usize).map(|k| site_mask(n, k)).collect();
        let mut decay = vec![0.0; dim * dim];
        for j in 0..dim {
            for i in 0..dim {
                let diff = i ^ j;
                // L = sigma_z / 2 damps a coherence across site k at rate gamma_k / 2
                decay[j * dim + i] = masks
                    .iter()
                    .zip(&config.gamma)
                    .filter(|(m, _)| diff & **m != 0)
                    .map(|(_, g)| 0.5 * g)
                    .sum();
            }
        }
        Generator {
            dim,
            bonds: if n >= 2 { bond_masks(n) } else { Vec::new() },
            coupling: config.g / 4.0,
            decay,
        }
    }

    fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let dim = self.dim;
        let minus_i_c = C64::new(0.0, -self.coupling);
        for j in 0..dim {
            for i in 0..dim {
                let mut comm = ZERO;
                for &m in &self.bonds {
                    comm += rho[j * dim + (i ^ m)] - rho[(j ^ m) * dim + i];
                }
                let idx = j * dim + i;
                out[idx] = minus_i_c * comm - rho[idx] * self.decay[idx];
            }
        }
    }

    fn rk4(&self, rho: &[C64], h: f64, scratch: &mut Rk4Scratch) -> Vec<C64> {
        let Rk4Scratch { k1, k2, k3, k4, tmp } = scratch;
        self.apply(rho, k1);
        axpy(rho, 0.5 * h, k1, tmp);
        self.apply(tmp, k2);
        axpy(rho, 0.5 * h, k2, tmp);
        self.apply(tmp, k3);
        axpy(rho, h, k3, tmp);
        self.apply(tmp, k4);
        rho.iter()
            .enumerate()
            .map(|(i, r)| r + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
            .collect()
    }
}

struct Rk4Scratch {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4Scratch {
    fn new(len: usize) -> Self {
        Rk4Scratch {
            k1: vec![ZERO; len],
            k2: vec![ZERO; len],
            k3: vec![ZERO; len],
            k4: vec![ZERO; len],
            tmp: vec![ZERO; len],
        }
    }
}

fn axpy(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + yi * a;
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Largest step-halving error estimate accepted.
    pub max_local_error: f64,
    /// Final number of RK4 substeps per saved interval.
    pub substeps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryDiagnostics {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn diagnostics(&self) -> TrajectoryDiagnostics {
        let mut d = TrajectoryDiagnostics {
            max_trace_drift: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
        };
        for rho in &self.states {
            d.max_trace_drift = d.max_trace_drift.max((rho.trace() - C64::new(1.0, 0.0)).norm());
            d.max_hermiticity_error = d.max_hermiticity_error.max(rho.hermiticity_error());
            d.min_eigenvalue = d.min_eigenvalue.min(rho.min_eigenvalue());
        }
        d
    }
}

fn check_initial(config: &ChainConfig, rho0: &DensityMatrix) -> Result<()> {
    config.validate()?;
    if rho0.dim() != 1usize << config.n {
        return Err(PtmError::DimensionMismatch {
            expected: 1usize << config.n,
            found: rho0.dim(),
        });
    }
    rho0.validate(
        DensityMatrix::HERMITIAN_TOL,
        DensityMatrix::TRACE_TOL,
        DensityMatrix::EIGEN_TOL,
    )
}

fn time_grid(config: &ChainConfig) -> Vec<f64> {
    let steps = (config.t_final / config.dt).ceil().max(0.0) as usize;
    if steps == 0 {
        return vec![0.0];
    }
    let h = config.t_final / steps as f64;
    (0..=steps).map(|k| k as f64 * h).collect()
}

/// Integrate the master equation with RK4. Each step is compared against two
/// half steps; the step is halved until they agree to [`LOCAL_ERROR_TOL`].
pub fn lindblad_evolve(config: &ChainConfig, rho0: &DensityMatrix) -> Result<Trajectory> {
    check_initial(config, rho0)?;
    let gen = Generator::new(config);
    let dim = gen.dim;
    let times = time_grid(config);
    let mut scratch = Rk4Scratch::new(dim * dim);
    let mut rho: Vec<C64> = rho0.matrix().as_slice().to_vec();
    let mut states = vec![rho0.clone()];
    let mut substeps = 1u32;
    let mut halvings = 0u32;
    let mut max_local_error = 0.0f64;

    for w in times.windows(2) {
        let interval = w[1] - w[0];
        'retry: loop {
            let count = substeps;
            let h = interval / count as f64;
            let mut cur = rho.clone();
            let mut worst = 0.0f64;
            for _ in 0..count {
                let full = gen.rk4(&cur, h, &mut scratch);
                let half = gen.rk4(&cur, 0.5 * h, &mut scratch);
                let two_half = gen.rk4(&half, 0.5 * h, &mut scratch);
                let err = max_diff(&full, &two_half);
                if !err.is_finite() {
                    return Err(PtmError::NonFinite("Lindblad integration"));
                }
                if err > LOCAL_ERROR_TOL {
                    if halvings >= MAX_HALVINGS {
                        return Err(PtmError::StepSize {
                            t: w[0],
                            error: err,
                            halvings,
                        });
                    }
                    halvings += 1;
                    substeps *= 2;
                    continue 'retry;
                }
                worst = worst.max(err);
                cur = two_half;
            }
            max_local_error = max_local_error.max(worst);
            rho = cur;
            break;
        }
        states.push(DensityMatrix::from_matrix_unchecked(DMatrix::from_column_slice(
            dim, dim, &rho,
        ))?);
    }
    Ok(Trajectory {
        times,
        states,
        max_local_error,
        substeps,
    })
}

/// `rho(t) = U rho0 U^dag` on the same grid, ignoring `gamma`.
pub fn closed_evolve(config: &ChainConfig, rho0: &DensityMatrix) -> Result<Trajectory> {
    check_initial(config, rho0)?;
    let times = time_grid(config);
    let h = if config.n >= 2 {
        xx_hamiltonian(config.n, config.g)?
    } else {
        DMatrix::zeros(2, 2)
    };
    let states = times
        .iter()
        .map(|&t| {
            let u = unitary_from_hamiltonian(&h, t);
            DensityMatrix::from_matrix_unchecked(&u * rho0.matrix() * u.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times,
        states,
        max_local_error: 0.0,
        substeps: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SupportClass {
    #[serde(rename = "E-only")]
    EvenOnly,
    #[serde(rename = "O-only")]
    OddOnly,
    #[serde(rename = "mixed")]
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub class: SupportClass,
    /// Population on the class the support does not belong to; for mixed
    /// support, the smaller of the two class populations.
    pub off_class_population: f64,
    pub even_population: f64,
    pub odd_population: f64,
    pub populations: Vec<f64>,
}

/// Classify entries above [`SUPPORT_THRESHOLD`] by the PTM class of their
/// row and column indices.
pub fn support_class(rho: &DensityMatrix, n: u32) -> Result<SupportReport> {
    let dim = 1usize << n;
    if rho.dim() != dim {
        return Err(PtmError::DimensionMismatch {
            expected: dim,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let (mut even, mut odd) = (false, false);
    for j in 0..dim {
        for i in 0..dim {
            if m[(i, j)].norm() > SUPPORT_THRESHOLD {
                let (ti, tj) = (ptm_digit_sum(i as u64), ptm_digit_sum(j as u64));
                even |= ti == 0 || tj == 0;
                odd |= ti == 1 || tj == 1;
            }
        }
    }
    let populations = rho.populations();
    let (mut even_population, mut odd_population) = (0.0, 0.0);
    for (i, p) in populations.iter().enumerate() {
        if ptm_digit_sum(i as u64) == 0 {
            even_population += p;
        } else {
            odd_population += p;
        }
    }
    let (class, off_class_population) = match (even, odd) {
        (true, false) => (SupportClass::EvenOnly, odd_population),
        (false, true) => (SupportClass::OddOnly, even_population),
        (true, true) => (SupportClass::Mixed, f64::min(even_population, odd_population)),
        (false, false) => {
            return Err(PtmError::invalid("density matrix has no entries above threshold"))
        }
    };
    Ok(SupportReport {
        class,
        off_class_population,
        even_population,
        odd_population,
        populations,
    })
}

/// `(|0..0> + |1..1>) / sqrt(2)`.
pub fn ghz_state(n: u32) -> Result<StateVector> {
    cat_state(n, 1.0)
}

fn cat_state(n: u32, sign: f64) -> Result<StateVector> {
    if n == 0 {
        return Err(PtmError::invalid("GHZ state needs at least one qubit"));
    }
    Limits::check("state-vector qubits", n, Limits::from_env().state_qubits)?;
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] += C64::new(sign * FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps)
}

/// Single-site factor of `exp(-i pi t (sigma_z + sigma_x) / (2 sqrt 2))`.
fn hadamard_generator_step(t: f64) -> [[C64; 2]; 2] {
    let (s, c) = (0.5 * PI * t).sin_cos();
    let a = s * FRAC_1_SQRT_2;
    [
        [C64::new(c, -a), C64::new(0.0, -a)],
        [C64::new(0.0, -a), C64::new(c, a)],
    ]
}

/// `exp(-i (pi / (2 sqrt 2)) (S_z + S_x) t) psi0` with `S = sum sigma`;
/// at `t = 1` this is `H^{(x)N}` up to the phase `(-i)^N`.
pub fn hadamard_hamiltonian_evolve(n: u32, t: f64, psi0: &StateVector) -> Result<StateVector> {
    if n == 0 {
        return Err(PtmError::invalid("need at least one qubit"));
    }
    if !t.is_finite() {
        return Err(PtmError::NonFinite("evolution time"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(PtmError::invalid(format!("t = {t} outside [0, 1]")));
    }
    if psi0.dim() != 1usize << n {
        return Err(PtmError::DimensionMismatch {
            expected: 1usize << n,
            found: psi0.dim(),
        });
    }
    let u = hadamard_generator_step(t);
    let mut psi = psi0.clone();
    for site in 1..=n as usize {
        apply_1q_in_place(psi.amps_mut(), n, site, &u);
    }
    Ok(psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl FromStr for Sign {
    type Err = PtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(PtmError::invalid(format!("sign must be + or -, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationTrace {
    pub n: u32,
    pub sign: Sign,
    pub times: Vec<f64>,
    /// `populations[s][k]` is the weight of basis state `k` at `times[s]`.
    pub populations: Vec<Vec<f64>>,
}

/// Basis populations of `(|0..0> +- |1..1>) / sqrt(2)` under the
/// Hadamard-generating Hamiltonian on a uniform grid over `[0, 1]`.
pub fn population_trace(n: u32, sign: Sign, steps: usize) -> Result<PopulationTrace> {
    if steps < 2 {
        return Err(PtmError::invalid("population trace needs at least two time points"));
    }
    let psi0 = cat_state(n, sign.value())?;
    let times: Vec<f64> = (0..steps).map(|s| s as f64 / (steps - 1) as f64).collect();
    let populations = times
        .iter()
        .map(|&t| Ok(hadamard_hamiltonian_evolve(n, t, &psi0)?.probabilities()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PopulationTrace {
        n,
        sign,
        times,
        populations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{fidelity_up_to_phase, max_abs_diff, PauliAxis};
    use crate::ptm_states::{ptm_state, Logical};
    use crate::spin_ops::{hadamard_all, CollectiveOp};

    fn pure(psi: &StateVector) -> DensityMatrix {
        DensityMatrix::from_pure(psi)
    }

    #[test]
    fn single_bond_hamiltonian() {
        let h = xx_hamiltonian(2, 1.0).unwrap();
        for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            assert_eq!(h[(i, j)], C64::new(0.25, 0.0));
        }
        assert_eq!(h.iter().filter(|z| z.norm() > 0.0).count(), 4);
    }

    #[test]
    fn hamiltonian_commutes_with_parity() {
        let h = xx_hamiltonian(4, 0.7).unwrap();
        let parity = DMatrix::from_fn(16, 16, |i, j| {
            if i == j {
                C64::new(if ptm_digit_sum(i as u64) == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                ZERO
            }
        });
        assert!(max_abs_diff(&(&h * &parity), &(&parity * &h)) < 1e-15);
        assert!(crate::hilbert::hermiticity_error(&h) < 1e-13);
    }

    #[test]
    fn frozen_without_dynamics() {
        let cfg = ChainConfig {
            n: 1,
            g: 0.0,
            gamma: vec![0.0],
            dt: 0.1,
            t_final: 1.0,
        };
        let plus = StateVector::new(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let traj = lindblad_evolve(&cfg, &pure(&plus)).unwrap();
        assert_eq!(traj.times.len(), 11);
        assert!(max_abs_diff(traj.last().matrix(), pure(&plus).matrix()) < 1e-15);
    }

    #[test]
    fn single_qubit_dephasing() {
        let gamma = 0.8;
        let cfg = ChainConfig {
            n: 1,
            g: 1.0,
            gamma: vec![gamma],
            dt: 0.05,
            t_final: 3.0,
        };
        let plus = StateVector::new(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let traj = lindblad_evolve(&cfg, &pure(&plus)).unwrap();
        for (t, rho) in traj.times.iter().zip(&traj.states) {
            let expected = 0.5 * (-gamma * t / 2.0).exp();
            assert!((rho.matrix()[(0, 1)].re - expected).abs() < 1e-9, "t={t}");
            assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_support_classes() {
        for (n, class) in [(3, SupportClass::Mixed), (4, SupportClass::EvenOnly)] {
            let cfg = ChainConfig {
                t_final: 2.0,
                ..ChainConfig::new(n)
            };
            let traj = lindblad_evolve(&cfg, &pure(&ghz_state(n).unwrap())).unwrap();
            let report = support_class(traj.last(), n).unwrap();
            assert_eq!(report.class, class, "n={n}");
            let d = traj.diagnostics();
            assert!(d.max_trace_drift < 1e-9 && d.max_hermiticity_error < 1e-9);
            assert!(d.min_eigenvalue > -1e-8);
        }
        let zero = pure(&StateVector::zeros(3));
        assert_eq!(support_class(&zero, 3).unwrap().class, SupportClass::EvenOnly);
    }

    #[test]
    fn odd_basis_state_stays_odd() {
        let n = 4;
        let cfg = ChainConfig {
            t_final: 2.0,
            ..ChainConfig::new(n)
        };
        let rho0 = pure(&StateVector::basis(16, 1).unwrap());
        let traj = lindblad_evolve(&cfg, &rho0).unwrap();
        for rho in &traj.states {
            let r = support_class(rho, n).unwrap();
            assert_eq!(r.class, SupportClass::OddOnly);
            assert!(r.off_class_population < 1e-9);
        }
        // the coupling actually moves population around inside O(4)
        assert!(traj.last().populations()[1] < 0.99);
    }

    #[test]
    fn rk4_matches_expm_without_dephasing() {
        let n = 3;
        let cfg = ChainConfig {
            t_final: 3.0,
            ..ChainConfig::new(n).with_uniform_gamma(0.0)
        };
        let rho0 = pure(&ghz_state(n).unwrap());
        let rk = lindblad_evolve(&cfg, &rho0).unwrap();
        let ex = closed_evolve(&cfg, &rho0).unwrap();
        for (a, b) in rk.states.iter().zip(&ex.states) {
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-8);
        }
    }

    #[test]
    fn config_rejections() {
        let mut cfg = ChainConfig::new(3);
        cfg.gamma[1] = -0.1;
        assert!(cfg.validate().is_err());
        let cfg = ChainConfig::new(9);
        assert!(matches!(cfg.validate(), Err(PtmError::Capacity { .. })));
        let cfg = ChainConfig { dt: 0.0, ..ChainConfig::new(2) };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ghz_supports() {
        let g2 = ghz_state(2).unwrap();
        let z2 = ptm_state(2, Logical::Zero).unwrap().state();
        assert!(g2.max_abs_diff(&z2).unwrap() < 1e-15);
        let g3 = ghz_state(3).unwrap();
        assert!(g3.amps()[7].norm() > 0.7 && ptm_digit_sum(7) == 1);
        let g4 = ghz_state(4).unwrap();
        assert!(g4.amps()[15].norm() > 0.7 && ptm_digit_sum(15) == 0);
    }

    #[test]
    fn hadamard_generator_matches_expm() {
        for n in 1..=3u32 {
            let sz = CollectiveOp::pauli(PauliAxis::Z, n).materialize().unwrap();
            let sx = CollectiveOp::pauli(PauliAxis::X, n).materialize().unwrap();
            let h = (sz + sx).scale(PI / (2.0 * 2f64.sqrt()));
            let psi0 = ghz_state(n).unwrap();
            for t in [0.0, 0.3, 1.0] {
                let u = unitary_from_hamiltonian(&h, t);
                let expected = StateVector::unnormalized((u * psi0.to_column()).as_slice().to_vec());
                let got = hadamard_hamiltonian_evolve(n, t, &psi0).unwrap();
                assert!(got.max_abs_diff(&expected).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn endpoint_is_hadamard_layer() {
        for n in 1..=6u32 {
            let psi0 = ghz_state(n).unwrap();
            let end = hadamard_hamiltonian_evolve(n, 1.0, &psi0).unwrap();
            let expected = hadamard_all(n).unwrap().apply(&psi0).unwrap();
            assert!((fidelity_up_to_phase(&end, &expected).unwrap() - 1.0).abs() < 1e-10);
        }
        let minus = cat_state(3, -1.0).unwrap();
        let one = ptm_state(3, Logical::One).unwrap().state();
        let end = hadamard_hamiltonian_evolve(3, 1.0, &minus).unwrap();
        assert!((fidelity_up_to_phase(&end, &one).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn population_trace_endpoints() {
        let tr = population_trace(3, Sign::Plus, 11).unwrap();
        let first = &tr.populations[0];
        assert!((first[0] - 0.5).abs() < 1e-15 && (first[7] - 0.5).abs() < 1e-15);
        let last = tr.populations.last().unwrap();
        for (k, p) in last.iter().enumerate() {
            let expected = if [0, 3, 5, 6].contains(&k) { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < 1e-10);
        }
        for row in &tr.populations {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let odd = population_trace(4, Sign::Minus, 5).unwrap();
        let last = odd.populations.last().unwrap();
        assert!(last
            .iter()
            .enumerate()
            .all(|(k, p)| ptm_digit_sum(k as u64) == 1 || *p < 1e-10));
        assert!(population_trace(3, Sign::Plus, 1).is_err());
    }
}
