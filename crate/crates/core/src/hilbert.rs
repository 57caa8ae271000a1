//! Dense complex linear algebra for qubit registers.
//!
//! Basis indices are MSB-first: qubit 1 is the leftmost tensor factor, so
//! qubit `k` of an `n`-qubit register lives at bit `n - k` of the index.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PtmError, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used when a constructor checks normalization.
pub const NORM_TOL: f64 = 1e-12;

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Result<u32> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(PtmError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros())
}

/// Bit mask of qubit `site` (1-based) in an `n`-qubit register.
#[inline]
pub fn site_mask(n: u32, site: usize) -> usize {
    debug_assert!(site >= 1 && site <= n as usize);
    1usize << (n as usize - site)
}

fn check_site(n: u32, site: usize) -> Result<()> {
    if site == 0 || site > n as usize {
        return Err(PtmError::invalid(format!(
            "qubit site {site} out of range 1..={n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Normalized state; rejects vectors whose norm differs from 1.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let sv = StateVector { amps };
        let norm_sqr = sv.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(PtmError::NotNormalized { norm_sqr });
        }
        Ok(sv)
    }

    /// Amplitude vector with no normalization requirement, e.g. the image of
    /// a state under a non-unitary operator.
    pub fn unnormalized(amps: Vec<C64>) -> Self {
        StateVector { amps }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(PtmError::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(StateVector { amps })
    }

    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: u32) -> Self {
        StateVector::basis(1usize << n, 0).expect("index 0 is always in range")
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> Result<u32> {
        qubits_for_dim(self.dim())
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(PtmError::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: C64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// `a * self + b * other`, left unnormalized.
    pub fn combine(&self, a: C64, other: &StateVector, b: C64) -> Result<StateVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest amplitude-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn to_column(&self) -> DMatrix<C64> {
        DMatrix::from_column_slice(self.dim(), 1, &self.amps)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(PtmError::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub trait Kron {
    fn kron(&self, other: &Self) -> Self;
}

impl Kron for StateVector {
    fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }
}

impl Kron for DMatrix<C64> {
    fn kron(&self, other: &Self) -> Self {
        self.kronecker(other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn matrix(self) -> [[C64; 2]; 2] {
        match self {
            PauliAxis::X => [[ZERO, ONE], [ONE, ZERO]],
            PauliAxis::Y => [[ZERO, -I], [I, ZERO]],
            PauliAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// `self * other = i^phase * result` (result `None` is identity).
    fn mul(self, other: PauliAxis) -> (u8, Option<PauliAxis>) {
        use PauliAxis::*;
        match (self, other) {
            (a, b) if a == b => (0, None),
            (X, Y) => (1, Some(Z)),
            (Y, X) => (3, Some(Z)),
            (Y, Z) => (1, Some(X)),
            (Z, Y) => (3, Some(X)),
            (Z, X) => (1, Some(Y)),
            (X, Z) => (3, Some(Y)),
            _ => unreachable!(),
        }
    }
}

impl std::str::FromStr for PauliAxis {
    type Err = PtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(PauliAxis::X),
            "y" => Ok(PauliAxis::Y),
            "z" => Ok(PauliAxis::Z),
            other => Err(PtmError::invalid(format!("unknown Pauli axis {other:?}"))),
        }
    }
}

/// Apply a single Pauli factor in place.
pub fn apply_pauli_in_place(amps: &mut [C64], n: u32, site: usize, axis: PauliAxis) {
    let mask = site_mask(n, site);
    match axis {
        PauliAxis::X => {
            for i in 0..amps.len() {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                }
            }
        }
        PauliAxis::Y => {
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let a0 = amps[i];
                    let a1 = amps[i | mask];
                    amps[i] = -I * a1;
                    amps[i | mask] = I * a0;
                }
            }
        }
        PauliAxis::Z => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = -*a;
                }
            }
        }
    }
}

/// Apply a 2x2 matrix to qubit `site` in place.
pub fn apply_1q_in_place(amps: &mut [C64], n: u32, site: usize, m: &[[C64; 2]; 2]) {
    let mask = site_mask(n, site);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let a0 = amps[i];
            let a1 = amps[i | mask];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub fn hadamard_matrix() -> [[C64; 2]; 2] {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// Tensor product of single-site Paulis with a phase `i^phase`, one factor
/// per site at most.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PauliString {
    n_qubits: u32,
    phase: u8,
    sites: Vec<Option<PauliAxis>>,
}

impl PauliString {
    pub fn identity(n_qubits: u32) -> Self {
        PauliString {
            n_qubits,
            phase: 0,
            sites: vec![None; n_qubits as usize],
        }
    }

    /// Ordered product of `(site, axis)` factors, leftmost factor first.
    pub fn from_factors(n_qubits: u32, factors: &[(usize, PauliAxis)]) -> Result<Self> {
        let mut out = PauliString::identity(n_qubits);
        for &(site, axis) in factors {
            check_site(n_qubits, site)?;
            let mut single = PauliString::identity(n_qubits);
            single.sites[site - 1] = Some(axis);
            out = out.mul(&single)?;
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Global phase as a power of `i`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn factors(&self) -> Vec<(usize, PauliAxis)> {
        self.sites
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|a| (i + 1, a)))
            .collect()
    }

    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString> {
        check_dims(self.dim(), rhs.dim())?;
        let mut phase = (self.phase + rhs.phase) % 4;
        let sites = self
            .sites
            .iter()
            .zip(&rhs.sites)
            .map(|(a, b)| match (a, b) {
                (None, x) | (x, None) => *x,
                (Some(a), Some(b)) => {
                    let (p, r) = a.mul(*b);
                    phase = (phase + p) % 4;
                    r
                }
            })
            .collect();
        Ok(PauliString {
            n_qubits: self.n_qubits,
            phase,
            sites,
        })
    }

    fn phase_factor(&self) -> C64 {
        match self.phase {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }

    pub fn apply_in_place(&self, amps: &mut [C64]) {
        for (i, axis) in self.sites.iter().enumerate().rev() {
            if let Some(axis) = axis {
                apply_pauli_in_place(amps, self.n_qubits, i + 1, *axis);
            }
        }
        if self.phase != 0 {
            let p = self.phase_factor();
            amps.iter_mut().for_each(|a| *a *= p);
        }
    }

    pub fn materialize(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut col = vec![ZERO; dim];
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = ZERO);
            col[j] = ONE;
            self.apply_in_place(&mut col);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Dense(DMatrix<C64>),
    Pauli(PauliString),
}

impl OperatorSpec {
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::Dense(m) => m.nrows(),
            OperatorSpec::Pauli(p) => p.dim(),
        }
    }

    pub fn materialize(&self) -> DMatrix<C64> {
        match self {
            OperatorSpec::Dense(m) => m.clone(),
            OperatorSpec::Pauli(p) => p.materialize(),
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), psi.dim())?;
        match self {
            OperatorSpec::Dense(m) => {
                let out = m * psi.to_column();
                Ok(StateVector::unnormalized(out.as_slice().to_vec()))
            }
            OperatorSpec::Pauli(p) => {
                let mut amps = psi.amps().to_vec();
                p.apply_in_place(&mut amps);
                Ok(StateVector::unnormalized(amps))
            }
        }
    }

    pub fn compose(&self, rhs: &OperatorSpec) -> Result<OperatorSpec> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(match (self, rhs) {
            (OperatorSpec::Pauli(a), OperatorSpec::Pauli(b)) => OperatorSpec::Pauli(a.mul(b)?),
            _ => OperatorSpec::Dense(self.materialize() * rhs.materialize()),
        })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermiticity_error(&self.materialize()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        unitarity_error(&self.materialize()) <= tol
    }
}

impl Kron for OperatorSpec {
    fn kron(&self, other: &Self) -> Self {
        match (self, other) {
            (OperatorSpec::Pauli(a), OperatorSpec::Pauli(b)) => {
                let mut sites = a.sites.clone();
                sites.extend_from_slice(&b.sites);
                OperatorSpec::Pauli(PauliString {
                    n_qubits: a.n_qubits + b.n_qubits,
                    phase: (a.phase + b.phase) % 4,
                    sites,
                })
            }
            _ => OperatorSpec::Dense(self.materialize().kronecker(&other.materialize())),
        }
    }
}

/// `<psi| op |psi>`.
pub fn expectation(op: &OperatorSpec, psi: &StateVector) -> Result<C64> {
    let image = op.apply(psi)?;
    psi.inner(&image)
}

/// `|<a|b>|^2`.
pub fn fidelity_up_to_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_error(m: &DMatrix<C64>) -> f64 {
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (m.adjoint() * m - id)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `exp(-i * h * t)` for Hermitian `h`.
pub fn unitary_from_hamiltonian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(h);
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    ));
    &vectors * phases * vectors.adjoint()
}

/// Density matrix; [`DensityMatrix::new`] checks Hermiticity, unit trace and
/// positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const EIGEN_TOL: f64 = 1e-10;

    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let rho = DensityMatrix::from_matrix_unchecked(m)?;
        rho.validate(Self::HERMITIAN_TOL, Self::TRACE_TOL, Self::EIGEN_TOL)?;
        Ok(rho)
    }

    /// Square matrix of power-of-two size, no physicality checks.
    pub fn from_matrix_unchecked(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(PtmError::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        qubits_for_dim(m.nrows())?;
        Ok(DensityMatrix { m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let col = psi.to_column();
        DensityMatrix {
            m: &col * col.adjoint(),
        }
    }

    pub fn validate(&self, herm_tol: f64, trace_tol: f64, eigen_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > herm_tol {
            return Err(PtmError::invalid(format!(
                "density matrix not Hermitian (error {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(PtmError::invalid(format!("density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -eigen_tol {
            return Err(PtmError::invalid(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // symmetrize so tiny anti-Hermitian noise does not leak into the solver
        let h = (&self.m + self.m.adjoint()).scale(0.5);
        hermitian_eigen(&h).0.first().copied().unwrap_or(0.0)
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }
}
