//! Pauli and collective spin operators, and checks of the operator
//! identities satisfied by PTM logical states.
//!
//! Moments of diagonal operators (products of `sigma_z`, powers of `S_z`,
//! the qudit `J_z`) are evaluated in exact integer/rational arithmetic so the
//! boundary between equality and inequality never depends on a tolerance.
//! Everything else is floating point with the tolerances below.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{
    apply_1q_in_place, apply_pauli_in_place, hadamard_matrix, site_mask, OperatorSpec, PauliAxis,
    PauliString, StateVector, C64, ONE, ZERO,
};
use crate::limits::Limits;
use crate::ptm_seq::ptm_digit_sum;
use crate::ptm_states::{ptm_qudit_state, ptm_state, Logical};

/// Single-operator identities.
pub const SINGLE_TOL: f64 = 1e-12;
/// Identities involving j-th operator powers, relative to the moment size.
pub const POWER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PauliSite {
    pub axis: PauliAxis,
    pub site: usize,
    pub n_qubits: u32,
}

impl PauliSite {
    pub fn new(axis: PauliAxis, site: usize, n_qubits: u32) -> Result<Self> {
        if site == 0 || site > n_qubits as usize {
            return Err(PtmError::invalid(format!(
                "site {site} out of range 1..={n_qubits}"
            )));
        }
        Ok(PauliSite { axis, site, n_qubits })
    }

    pub fn operator(&self) -> OperatorSpec {
        OperatorSpec::Pauli(
            PauliString::from_factors(self.n_qubits, &[(self.site, self.axis)])
                .expect("site validated on construction"),
        )
    }
}

pub fn pauli_on(axis: PauliAxis, site: usize, n_qubits: u32) -> Result<OperatorSpec> {
    Ok(PauliSite::new(axis, site, n_qubits)?.operator())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinScale {
    /// `sum_k sigma^(k)`
    Pauli,
    /// `sum_k sigma^(k) / 2`
    SpinHalf,
}

impl SpinScale {
    fn factor(self) -> f64 {
        match self {
            SpinScale::Pauli => 1.0,
            SpinScale::SpinHalf => 0.5,
        }
    }
}

/// `S_axis` on an `n`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CollectiveOp {
    pub axis: PauliAxis,
    pub n_qubits: u32,
    pub scale: SpinScale,
}

impl CollectiveOp {
    pub fn new(axis: PauliAxis, n_qubits: u32, scale: SpinScale) -> Self {
        CollectiveOp { axis, n_qubits, scale }
    }

    pub fn pauli(axis: PauliAxis, n_qubits: u32) -> Self {
        CollectiveOp::new(axis, n_qubits, SpinScale::Pauli)
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn apply(&self, amps: &[C64]) -> Vec<C64> {
        let n = self.n_qubits;
        let factor = self.scale.factor();
        if self.axis == PauliAxis::Z {
            return amps
                .iter()
                .enumerate()
                .map(|(i, a)| a * (factor * (n as f64 - 2.0 * i.count_ones() as f64)))
                .collect();
        }
        let mut out = vec![ZERO; amps.len()];
        let mut scratch = amps.to_vec();
        for site in 1..=n as usize {
            scratch.copy_from_slice(amps);
            apply_pauli_in_place(&mut scratch, n, site, self.axis);
            out.iter_mut().zip(&scratch).for_each(|(o, s)| *o += s);
        }
        if factor != 1.0 {
            out.iter_mut().for_each(|o| *o *= factor);
        }
        out
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(PtmError::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector::unnormalized(self.apply(psi.amps())))
    }

    pub fn materialize(&self) -> Result<DMatrix<C64>> {
        Limits::check("dense operator qubits", self.n_qubits, Limits::from_env().operator_qubits)?;
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut col = vec![ZERO; dim];
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = ZERO);
            col[j] = ONE;
            for (i, v) in self.apply(&col).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}

/// Spin-`(d-1)/2` `J_z` on a `d`-level system: `diag((d - 1 - 2k) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuditJz {
    pub dim: usize,
}

impl QuditJz {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(PtmError::invalid("qudit dimension must be positive"));
        }
        Ok(QuditJz { dim })
    }

    /// Twice the diagonal entry at level `k`.
    pub fn twice_entry(&self, k: usize) -> i64 {
        self.dim as i64 - 1 - 2 * k as i64
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.twice_entry(k) as f64 / 2.0).collect()
    }
}

/// Apply `H` on every qubit in place.
pub fn apply_hadamard_all(psi: &mut StateVector) -> Result<()> {
    let n = psi.n_qubits()?;
    let h = hadamard_matrix();
    for site in 1..=n as usize {
        apply_1q_in_place(psi.amps_mut(), n, site, &h);
    }
    Ok(())
}

/// Dense `H^(x)N`.
pub fn hadamard_all(n_qubits: u32) -> Result<OperatorSpec> {
    if n_qubits == 0 {
        return Err(PtmError::invalid("need at least one qubit"));
    }
    Limits::check("dense operator qubits", n_qubits, Limits::from_env().operator_qubits)?;
    let dim = 1usize << n_qubits;
    let scale = (dim as f64).sqrt().recip();
    // <i|H^N|j> = (-1)^{popcount(i & j)} / sqrt(2^N)
    Ok(OperatorSpec::Dense(DMatrix::from_fn(dim, dim, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * scale, 0.0)
    })))
}

fn logical_pair(n: u32) -> Result<(StateVector, StateVector)> {
    Ok((
        ptm_state(n, Logical::Zero)?.state(),
        ptm_state(n, Logical::One)?.state(),
    ))
}

fn logical(n: u32, label: Logical) -> Result<StateVector> {
    Ok(ptm_state(n, label)?.state())
}

fn require_register(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(PtmError::invalid(format!("register needs at least {min} qubits, got {n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstMomentReport {
    pub n: u32,
    pub which: Logical,
    pub values: Vec<(PauliAxis, C64)>,
    pub pass: bool,
}

/// `<b_TM| S_axis |b_TM>` for all three axes; each must vanish.
pub fn verify_first_moment(n: u32, which: Logical) -> Result<FirstMomentReport> {
    require_register(n, 2)?;
    let psi = logical(n, which)?;
    let mut values = Vec::with_capacity(3);
    for axis in PauliAxis::ALL {
        let image = CollectiveOp::pauli(axis, n).apply_state(&psi)?;
        values.push((axis, psi.inner(&image)?));
    }
    let pass = values.iter().all(|(_, v)| v.norm() <= SINGLE_TOL);
    Ok(FirstMomentReport { n, which, values, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZProductReport {
    pub n: u32,
    pub sites: Vec<usize>,
    /// `sum_{k in E(N)} prod_{s in Z} (-1)^{bit_s(k)}`, i.e. the moment
    /// times `2^(N-1)`.
    pub diag0_unnormalized: i64,
    pub diag1_unnormalized: i64,
    pub diag0: f64,
    pub diag1: f64,
    pub offdiag: f64,
    pub diag_equal: bool,
    pub offdiag_zero: bool,
    /// Equality is predicted exactly when `|Z| < N`.
    pub expected_equal: bool,
    pub pass: bool,
}

pub fn verify_z_products(n: u32, sites: &[usize]) -> Result<ZProductReport> {
    require_register(n, 1)?;
    if sites.is_empty() {
        return Err(PtmError::invalid("site set must be nonempty"));
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sites.len() {
        return Err(PtmError::invalid("site set has duplicates"));
    }
    let mut mask = 0usize;
    for &s in &sorted {
        if s == 0 || s > n as usize {
            return Err(PtmError::invalid(format!("site {s} out of range 1..={n}")));
        }
        mask |= site_mask(n, s);
    }
    Limits::check("state-vector qubits", n, Limits::from_env().state_qubits)?;

    let zero = ptm_state(n, Logical::Zero)?;
    let one = ptm_state(n, Logical::One)?;
    let mut diag = [0i64; 2];
    let mut overlap = 0i64;
    for (k, (&in0, &in1)) in zero.indicator().iter().zip(one.indicator()).enumerate() {
        let sign = if (k & mask).count_ones().is_multiple_of(2) { 1 } else { -1 };
        diag[0] += sign * in0 as i64;
        diag[1] += sign * in1 as i64;
        overlap += sign * (in0 * in1) as i64;
    }
    let norm = (1u64 << (n - 1)) as f64;
    let diag_equal = diag[0] == diag[1];
    let offdiag_zero = overlap == 0;
    let expected_equal = sorted.len() < n as usize;
    Ok(ZProductReport {
        n,
        sites: sorted,
        diag0_unnormalized: diag[0],
        diag1_unnormalized: diag[1],
        diag0: diag[0] as f64 / norm,
        diag1: diag[1] as f64 / norm,
        offdiag: overlap as f64 / norm,
        diag_equal,
        offdiag_zero,
        expected_equal,
        pass: offdiag_zero && diag_equal == expected_equal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerMomentReport {
    pub n: u32,
    pub axis: PauliAxis,
    pub j: u32,
    pub diag0: f64,
    pub diag1: f64,
    pub cross: C64,
    /// Exact values as `num/den`, present for the diagonal axis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<(String, String)>,
    pub equal: bool,
    pub cross_zero: bool,
    /// `Some(true)` for `j < N`; `Some(false)` at `j = N` on the z axis only.
    /// Odd powers of `S_y` have vanishing diagonals on real states, so the
    /// y-axis boundary is not a prediction.
    pub predicted_equal: Option<bool>,
    pub pass: bool,
}

/// `<b_TM| S_axis^j |b_TM>` for `axis` in `{y, z}`.
pub fn verify_power_moments(n: u32, axis: PauliAxis, j: u32) -> Result<PowerMomentReport> {
    require_register(n, 1)?;
    if axis == PauliAxis::X {
        return Err(PtmError::invalid("power moments are checked for axes y and z only"));
    }
    Limits::check("state-vector qubits", n, Limits::from_env().state_qubits)?;
    let predicted_equal = match j.cmp(&n) {
        std::cmp::Ordering::Less => Some(true),
        std::cmp::Ordering::Equal if axis == PauliAxis::Z => Some(false),
        _ => None,
    };

    let (diag0, diag1, cross, exact, equal, cross_zero) = if axis == PauliAxis::Z {
        let mut sums = [BigInt::zero(), BigInt::zero()];
        for k in 0..(1usize << n) {
            let eigen = BigInt::from(n as i64 - 2 * k.count_ones() as i64);
            sums[ptm_digit_sum(k as u64) as usize] += eigen.pow(j);
        }
        let den = BigInt::from(1u64 << (n - 1));
        let r0 = BigRational::new(sums[0].clone(), den.clone());
        let r1 = BigRational::new(sums[1].clone(), den);
        let equal = r0 == r1;
        let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        (
            to_f(&r0),
            to_f(&r1),
            ZERO,
            Some((r0.to_string(), r1.to_string())),
            equal,
            true,
        )
    } else {
        let (zero, one) = logical_pair(n)?;
        let op = CollectiveOp::pauli(axis, n);
        let power = |psi: &StateVector| {
            let mut v = psi.amps().to_vec();
            for _ in 0..j {
                v = op.apply(&v);
            }
            StateVector::unnormalized(v)
        };
        let p0 = power(&zero);
        let p1 = power(&one);
        let d0 = zero.inner(&p0)?;
        let d1 = one.inner(&p1)?;
        let cross = one.inner(&p0)?;
        let scale = 1.0f64.max(d0.norm()).max(d1.norm());
        let equal = (d0 - d1).norm() <= POWER_TOL * scale;
        let cross_zero = cross.norm() <= POWER_TOL * scale;
        (d0.re, d1.re, cross, None, equal, cross_zero)
    };

    let pass = match predicted_equal {
        Some(true) => equal && cross_zero,
        Some(false) => !equal,
        None => true,
    };
    Ok(PowerMomentReport {
        n,
        axis,
        j,
        diag0,
        diag1,
        cross,
        exact,
        equal,
        cross_zero,
        predicted_equal,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XxStabilizerReport {
    pub n: u32,
    pub k: usize,
    pub j: usize,
    pub fidelity0: f64,
    pub fidelity1: f64,
    pub max_deviation: f64,
    pub pass: bool,
}

/// `sigma_x^(k) sigma_x^(j) |b_TM> = |b_TM>`.
pub fn verify_xx_stabilizer(n: u32, k: usize, j: usize) -> Result<XxStabilizerReport> {
    let op = OperatorSpec::Pauli(PauliString::from_factors(
        n,
        &[(k, PauliAxis::X), (j, PauliAxis::X)],
    )?);
    let (zero, one) = logical_pair(n)?;
    let out0 = op.apply(&zero)?;
    let out1 = op.apply(&one)?;
    let max_deviation = zero.max_abs_diff(&out0)?.max(one.max_abs_diff(&out1)?);
    Ok(XxStabilizerReport {
        n,
        k,
        j,
        fidelity0: zero.inner(&out0)?.norm_sqr(),
        fidelity1: one.inner(&out1)?.norm_sqr(),
        max_deviation,
        pass: max_deviation <= SINGLE_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SxReciprocityReport {
    pub n: u32,
    /// `|| S_x|0_TM> - N|1_TM> ||_inf`
    pub zero_to_one: f64,
    /// `|| S_x|1_TM> - N|0_TM> ||_inf`
    pub one_to_zero: f64,
    /// Rayleigh quotients of `(|0_TM> +- |1_TM>)/sqrt(2)`.
    pub eigenvalue_plus: f64,
    pub eigenvalue_minus: f64,
    pub eigen_residual: f64,
    pub pass: bool,
}

pub fn sx_reciprocity(n: u32) -> Result<SxReciprocityReport> {
    require_register(n, 1)?;
    let (zero, one) = logical_pair(n)?;
    let sx = CollectiveOp::pauli(PauliAxis::X, n);
    let nn = C64::new(n as f64, 0.0);
    let zero_to_one = sx.apply_state(&zero)?.max_abs_diff(&one.scaled(nn))?;
    let one_to_zero = sx.apply_state(&one)?.max_abs_diff(&zero.scaled(nn))?;

    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = zero.combine(s, &one, s)?;
    let minus = zero.combine(s, &one, -s)?;
    let sp = sx.apply_state(&plus)?;
    let sm = sx.apply_state(&minus)?;
    let eigenvalue_plus = plus.inner(&sp)?.re;
    let eigenvalue_minus = minus.inner(&sm)?.re;
    let eigen_residual = sp
        .max_abs_diff(&plus.scaled(nn))?
        .max(sm.max_abs_diff(&minus.scaled(-nn))?);
    let tol = SINGLE_TOL * n as f64;
    Ok(SxReciprocityReport {
        n,
        zero_to_one,
        one_to_zero,
        eigenvalue_plus,
        eigenvalue_minus,
        eigen_residual,
        pass: zero_to_one <= tol && one_to_zero <= tol && eigen_residual <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemoryForms {
    pub n: u32,
    pub sx: [[C64; 2]; 2],
    pub sy: [[C64; 2]; 2],
    pub sz: [[C64; 2]; 2],
}

impl MemoryForms {
    /// `S_y`, `S_z` blocks vanish and `S_x = N * sigma_x`.
    pub fn matches_expected(&self, tol: f64) -> bool {
        let nn = self.n as f64;
        let expected_sx = [[ZERO, C64::new(nn, 0.0)], [C64::new(nn, 0.0), ZERO]];
        let close = |a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]| {
            (0..2).all(|r| (0..2).all(|c| (a[r][c] - b[r][c]).norm() <= tol))
        };
        let zero = [[ZERO; 2]; 2];
        close(&self.sx, &expected_sx) && close(&self.sy, &zero) && close(&self.sz, &zero)
    }
}

/// Total-spin operators restricted to `span{|0_TM>, |1_TM>}`.
pub fn memory_matrix_forms(n: u32) -> Result<MemoryForms> {
    require_register(n, 2)?;
    let basis = [logical(n, Logical::Zero)?, logical(n, Logical::One)?];
    let block = |axis: PauliAxis| -> Result<[[C64; 2]; 2]> {
        let op = CollectiveOp::pauli(axis, n);
        let images = [op.apply_state(&basis[0])?, op.apply_state(&basis[1])?];
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = basis[r].inner(&images[c])?;
            }
        }
        Ok(m)
    };
    Ok(MemoryForms {
        n,
        sx: block(PauliAxis::X)?,
        sy: block(PauliAxis::Y)?,
        sz: block(PauliAxis::Z)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JzMomentReport {
    pub dim: usize,
    pub j: u32,
    /// Exact moments as `num/den`.
    pub moment0: String,
    pub moment1: String,
    pub moment0_f64: f64,
    pub moment1_f64: f64,
    pub cross: String,
    pub equal: bool,
    pub predicted_equal: Option<bool>,
    pub pass: bool,
}

/// `<b_TM| J_z^j |b_TM>` for qudit PTM states, exact.
pub fn verify_jz_moments(dim: usize, j: u32) -> Result<JzMomentReport> {
    let zero = ptm_qudit_state(dim, Logical::Zero)?;
    let one = ptm_qudit_state(dim, Logical::One)?;
    let jz = QuditJz::new(dim)?;
    let order = zero.order();

    // amplitude^2 = 2/d, entries (d-1-2k)/2
    let sum_over = |support: &[usize]| -> BigInt {
        support
            .iter()
            .map(|&k| BigInt::from(jz.twice_entry(k)).pow(j))
            .fold(BigInt::zero(), |acc, v| acc + v)
    };
    let den = BigInt::from(dim / 2) * BigInt::from(2u8).pow(j);
    let m0 = BigRational::new(sum_over(&zero.support()), den.clone());
    let m1 = BigRational::new(sum_over(&one.support()), den);
    // diagonal operator, disjoint supports
    let cross_terms = zero
        .indicator()
        .iter()
        .zip(one.indicator())
        .filter(|(a, b)| **a == 1 && **b == 1)
        .count();
    let cross = BigRational::from_integer(BigInt::from(cross_terms));

    let equal = m0 == m1;
    let predicted_equal = match j.cmp(&order) {
        std::cmp::Ordering::Less => Some(true),
        std::cmp::Ordering::Equal => Some(false),
        std::cmp::Ordering::Greater => None,
    };
    let pass = cross.is_zero() && predicted_equal.is_none_or(|p| p == equal);
    Ok(JzMomentReport {
        dim,
        j,
        moment0_f64: m0.to_f64().unwrap_or(f64::NAN),
        moment1_f64: m1.to_f64().unwrap_or(f64::NAN),
        moment0: m0.to_string(),
        moment1: m1.to_string(),
        cross: cross.to_string(),
        equal,
        predicted_equal,
        pass,
    })
}
