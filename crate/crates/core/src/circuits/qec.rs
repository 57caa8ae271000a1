//! Three-qubit phase-flip correction, both for the repetition code in the
//! Hadamard basis and for a logical PTM state of order 3.
//!
//! Layout: data qubits 1..=3, ancillas 4 and 5, classical bits 0 and 1.
//! Ancilla 4 checks the parity of qubits 2 and 3, ancilla 5 that of 1 and 3,
//! so the big-endian syndrome value names the flipped qubit directly.

use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{fidelity_up_to_phase, Kron, StateVector, C64};
use crate::ptm_states::encode_logical;

use super::{run, CircuitProgram, Gate, MeasurementRecord};

const DATA: u32 = 3;
const ANCILLAS: u32 = 2;

/// Qubit named by a syndrome, `None` for `(0, 0)`.
pub fn syndrome_site(syndrome: [u8; 2]) -> Option<usize> {
    match (syndrome[0] << 1) | syndrome[1] {
        0 => None,
        v => Some(v as usize),
    }
}

/// Basis change, the two parity checks, and the classically controlled flip.
pub fn u_qec_gates() -> Vec<Gate> {
    vec![
        Gate::H { qubit: 1 },
        Gate::H { qubit: 2 },
        Gate::H { qubit: 3 },
        Gate::Cnot { control: 3, target: 4 },
        Gate::Cnot { control: 2, target: 4 },
        Gate::Measure { qubit: 4, cbit: 0 },
        Gate::Cnot { control: 3, target: 5 },
        Gate::Cnot { control: 1, target: 5 },
        Gate::Measure { qubit: 5, cbit: 1 },
        Gate::Corr {
            cbits: vec![0, 1],
            targets: vec![1, 2, 3],
        },
    ]
}

fn error_gate(error: Option<usize>) -> Result<Option<Gate>> {
    match error {
        None => Ok(None),
        Some(q @ 1..=3) => Ok(Some(Gate::Z { qubit: q })),
        Some(q) => Err(PtmError::invalid(format!("error site {q} is not in 1..=3"))),
    }
}

/// Hadamard encoding of `a|000> + b|111>`, an optional phase flip, then
/// `U_QEC`.
pub fn shor3_program(error: Option<usize>) -> Result<CircuitProgram> {
    let mut prog = CircuitProgram::new(DATA, ANCILLAS, 2);
    prog.extend((1..=3).map(|q| Gate::H { qubit: q }));
    prog.extend(error_gate(error)?);
    prog.extend(u_qec_gates());
    Ok(prog)
}

/// Phase flip directly on the logical PTM state, `U_QEC`, then `H` on every
/// data qubit.
pub fn ptm3_program(error: Option<usize>) -> Result<CircuitProgram> {
    let mut prog = CircuitProgram::new(DATA, ANCILLAS, 2);
    prog.extend(error_gate(error)?);
    prog.extend(u_qec_gates());
    prog.extend((1..=3).map(|q| Gate::H { qubit: q }));
    Ok(prog)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QecOutcome {
    pub recovered: StateVector,
    pub target: StateVector,
    pub syndrome: [u8; 2],
    pub decoded_site: Option<usize>,
    pub fidelity: f64,
    pub measurements: Vec<MeasurementRecord>,
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if !norm_sqr.is_finite() {
        return Err(PtmError::NonFinite("logical amplitudes"));
    }
    if (norm_sqr - 1.0).abs() > 1e-12 {
        return Err(PtmError::NotNormalized { norm_sqr });
    }
    Ok(())
}

fn execute(prog: &CircuitProgram, data: StateVector, target: StateVector, seed: u64) -> Result<QecOutcome> {
    let input = data.kron(&StateVector::zeros(ANCILLAS));
    let out = run(prog, &input, seed)?;
    let recovered = out.data_state(prog)?;
    let syndrome = [out.classical[0], out.classical[1]];
    Ok(QecOutcome {
        fidelity: fidelity_up_to_phase(&recovered, &target)?,
        recovered,
        target,
        syndrome,
        decoded_site: syndrome_site(syndrome),
        measurements: out.measurements,
    })
}

/// Target `a|000> + b|111>`.
pub fn shor3_run(alpha: C64, beta: C64, error: Option<usize>, seed: u64) -> Result<QecOutcome> {
    check_amplitudes(alpha, beta)?;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0] = alpha;
    amps[7] = beta;
    let logical = StateVector::new(amps)?;
    execute(&shor3_program(error)?, logical.clone(), logical, seed)
}

/// Target `a|0_TM> + b|1_TM>` of order 3.
pub fn ptm_qec_run(alpha: C64, beta: C64, error: Option<usize>, seed: u64) -> Result<QecOutcome> {
    check_amplitudes(alpha, beta)?;
    let logical = encode_logical(alpha, beta, DATA)?;
    execute(&ptm3_program(error)?, logical.clone(), logical, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{apply_pauli_in_place, PauliAxis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ERRORS: [Option<usize>; 4] = [None, Some(1), Some(2), Some(3)];

    fn random_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
        let v: Vec<f64> = (0..4).map(|_| rng.random::<f64>() - 0.5).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (C64::new(v[0] / n, v[1] / n), C64::new(v[2] / n, v[3] / n))
    }

    #[test]
    fn syndrome_map_is_injective() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = C64::new(s, 0.0);
        let syndromes: Vec<[u8; 2]> = ERRORS
            .iter()
            .map(|&e| shor3_run(a, a, e, 0).unwrap().syndrome)
            .collect();
        assert_eq!(syndromes, vec![[0, 0], [0, 1], [1, 0], [1, 1]]);
        for (e, s) in ERRORS.iter().zip(&syndromes) {
            assert_eq!(syndrome_site(*s), *e);
        }
    }

    #[test]
    fn no_error_leaves_state() {
        let (a, b) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let out = shor3_run(a, b, None, 3).unwrap();
        assert_eq!(out.syndrome, [0, 0]);
        assert!(out.recovered.max_abs_diff(&out.target).unwrap() < 1e-12);
        let out = ptm_qec_run(a, b, None, 3).unwrap();
        assert!(out.recovered.max_abs_diff(&out.target).unwrap() < 1e-12);
    }

    #[test]
    fn measurements_are_certain() {
        let (a, b) = (C64::new(0.6, 0.0), C64::new(0.8, 0.0));
        for e in ERRORS {
            let out = ptm_qec_run(a, b, e, 11).unwrap();
            assert!(out.measurements.iter().all(|m| m.deterministic));
        }
    }

    #[test]
    fn basis_logical_recovers() {
        for e in ERRORS {
            let out = shor3_run(C64::new(1.0, 0.0), C64::new(0.0, 0.0), e, 0).unwrap();
            assert!((out.recovered.amps()[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_states_recover() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..10 {
            let (a, b) = random_pair(&mut rng);
            for e in ERRORS {
                let shor = shor3_run(a, b, e, 1).unwrap();
                assert!(shor.fidelity >= 1.0 - 1e-10, "{e:?}: {}", shor.fidelity);
                let ptm = ptm_qec_run(a, b, e, 1).unwrap();
                assert!(ptm.fidelity >= 1.0 - 1e-10, "{e:?}: {}", ptm.fidelity);
                assert_eq!(ptm.decoded_site, e);
            }
        }
    }

    #[test]
    fn corrupted_state_is_distinguishable() {
        // without correction the flipped logical state is orthogonal-ish
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let logical = encode_logical(C64::new(s, 0.0), C64::new(s, 0.0), 3).unwrap();
        let mut bad = logical.clone();
        apply_pauli_in_place(bad.amps_mut(), 3, 1, PauliAxis::Z);
        assert!(fidelity_up_to_phase(&bad, &logical).unwrap() < 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = C64::new(1.0, 0.0);
        assert!(shor3_run(one, one, None, 0).is_err());
        assert!(shor3_run(one, C64::new(0.0, 0.0), Some(4), 0).is_err());
    }
}
