use crate::error::{PtmError, Result};
use crate::hilbert::{Kron, StateVector, C64, NORM_TOL};

use super::{CircuitProgram, Gate};

/// Encoder taking `(alpha|0> + beta|1>) (x) |0...0>` to
/// `alpha|0_TM> + beta|1_TM>`: H on qubit 1, fan-out CNOTs, then H on all.
pub fn ptm_encoder(n: u32) -> Result<CircuitProgram> {
    if n < 2 {
        return Err(PtmError::invalid("encoder needs at least two qubits"));
    }
    let mut prog = CircuitProgram::new(n, 0, 0);
    prog.push(Gate::H { qubit: 1 });
    prog.extend((2..=n as usize).map(|target| Gate::Cnot { control: 1, target }));
    prog.extend((1..=n as usize).map(|qubit| Gate::H { qubit }));
    Ok(prog)
}

/// `(alpha|0> + beta|1>) (x) |0...0>` on `n` qubits.
pub fn encoder_input(alpha: C64, beta: C64, n: u32) -> Result<StateVector> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(PtmError::NotNormalized { norm_sqr });
    }
    if n == 0 {
        return Err(PtmError::invalid("need at least one qubit"));
    }
    let head = StateVector::new(vec![alpha, beta])?;
    Ok(head.kron(&StateVector::zeros(n - 1)))
}
