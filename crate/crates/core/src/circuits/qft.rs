//! Quantum Fourier transform, `QFT(N)_{jk} = e^{+2 pi i jk / 2^N} / sqrt(2^N)`,
//! as a dense matrix, as an in-place radix-2 transform, and as a gate list.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{qubits_for_dim, unitarity_error, Kron, OperatorSpec, StateVector, C64};
use crate::limits::Limits;
use crate::ptm_states::{ptm_state, Logical};

use super::{CircuitProgram, Gate};

fn require_qubits(n: u32, limit: u32) -> Result<()> {
    if n == 0 {
        return Err(PtmError::invalid("QFT needs at least one qubit"));
    }
    Limits::check("dense operator qubits", n, limit)
}

/// Dense `QFT(N)` built entry by entry.
pub fn qft(n: u32) -> Result<OperatorSpec> {
    require_qubits(n, Limits::from_env().operator_qubits)?;
    let dim = 1usize << n;
    let scale = (dim as f64).sqrt().recip();
    Ok(OperatorSpec::Dense(DMatrix::from_fn(dim, dim, |j, k| {
        let phase = ((j * k) % dim) as f64 / dim as f64;
        C64::from_polar(scale, 2.0 * PI * phase)
    })))
}

fn fft_in_place(amps: &mut [C64], sign: f64) {
    let len = amps.len();
    let bits = len.trailing_zeros();
    if bits > 0 {
        for i in 0..len {
            let r = i.reverse_bits() >> (usize::BITS - bits);
            if i < r {
                amps.swap(i, r);
            }
        }
    }
    let twiddles: Vec<C64> = (0..len / 2)
        .map(|k| C64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
        .collect();
    let mut span = 2;
    while span <= len {
        let half = span / 2;
        let stride = len / span;
        for start in (0..len).step_by(span) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = amps[start + k];
                let v = amps[start + k + half] * w;
                amps[start + k] = u + v;
                amps[start + k + half] = u - v;
            }
        }
        span <<= 1;
    }
    let scale = (len as f64).sqrt().recip();
    amps.iter_mut().for_each(|a| *a *= scale);
}

/// Apply `QFT(N)` in place in `O(N 2^N)`.
pub fn apply_qft(amps: &mut [C64]) -> Result<()> {
    qubits_for_dim(amps.len())?;
    fft_in_place(amps, 1.0);
    Ok(())
}

pub fn apply_inverse_qft(amps: &mut [C64]) -> Result<()> {
    qubits_for_dim(amps.len())?;
    fft_in_place(amps, -1.0);
    Ok(())
}

/// Textbook decomposition: Hadamards, controlled phases `2 pi / 2^m`, and
/// a final qubit reversal.
pub fn qft_circuit(n: u32) -> Result<CircuitProgram> {
    require_qubits(n, Limits::from_env().state_qubits)?;
    let n = n as usize;
    let mut prog = CircuitProgram::new(n as u32, 0, 0);
    for i in 1..=n {
        prog.push(Gate::H { qubit: i });
        for j in (i + 1)..=n {
            prog.push(Gate::CPhase {
                control: j,
                target: i,
                angle: 2.0 * PI / (1u64 << (j - i + 1)) as f64,
            });
        }
    }
    for i in 1..=n / 2 {
        prog.push(Gate::Swap { a: i, b: n + 1 - i });
    }
    Ok(prog)
}

/// Quantum baker map `QFT(N)^{-1} . diag(QFT(N-1), QFT(N-1))`.
pub fn baker_map(n: u32) -> Result<OperatorSpec> {
    if n < 2 {
        return Err(PtmError::invalid("baker map needs at least two qubits"));
    }
    let full = qft(n)?.materialize();
    let half = qft(n - 1)?.materialize();
    let block = DMatrix::<C64>::identity(2, 2).kron(&half);
    Ok(OperatorSpec::Dense(full.adjoint() * block))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BakerDiagnostic {
    pub n: u32,
    /// `<psi|B(N)|psi>` for `psi = (|0_TM> - |1_TM>)/sqrt(2)`.
    pub overlap: C64,
    pub abs_overlap: f64,
    pub unitarity_error: f64,
}

/// Reported only; no eigenstate-quality threshold is asserted.
pub fn baker_diagnostic(n: u32) -> Result<BakerDiagnostic> {
    let b = baker_map(n)?;
    let zero = ptm_state(n, Logical::Zero)?.state();
    let one = ptm_state(n, Logical::One)?.state();
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi = StateVector::new(zero.combine(s, &one, -s)?.into_amps())?;
    let overlap = psi.inner(&b.apply(&psi)?)?;
    Ok(BakerDiagnostic {
        n,
        overlap,
        abs_overlap: overlap.norm(),
        unitarity_error: unitarity_error(&b.materialize()),
    })
}
