//! Gate-level statevector simulation.
//!
//! A [`CircuitProgram`] is an ordered gate list over `data + ancilla` qubits
//! (ancillas are the last sites) plus a classical register written by
//! measurements and read by classically-controlled corrections.

mod encoder;
mod qec;
mod qft;
mod rotation;

pub use encoder::{encoder_input, ptm_encoder};
pub use qec::{
    ptm3_program, ptm_qec_run, shor3_program, shor3_run, syndrome_site, u_qec_gates, QecOutcome,
};
pub use qft::{
    apply_inverse_qft, apply_qft, baker_diagnostic, baker_map, qft, qft_circuit, BakerDiagnostic,
};
pub use rotation::{xx_rotation_phase_check, XxRotationReport};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{
    apply_1q_in_place, apply_pauli_in_place, hadamard_matrix, site_mask, unitarity_error, PauliAxis,
    StateVector, C64, ONE, ZERO,
};

/// Measurement outcomes closer than this to 0 or 1 are taken as certain.
pub const DETERMINISTIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    H { qubit: usize },
    X { qubit: usize },
    Z { qubit: usize },
    Cnot { control: usize, target: usize },
    Cz { control: usize, target: usize },
    /// `diag(1, 1, 1, e^{i angle})` on (control, target).
    CPhase { control: usize, target: usize, angle: f64 },
    Swap { a: usize, b: usize },
    /// Dense unitary on `qubits` (first listed is most significant), row-major.
    Unitary { qubits: Vec<usize>, matrix: Vec<C64> },
    Measure { qubit: usize, cbit: usize },
    /// Reads `cbits` as a big-endian integer `i`; applies X to `targets[i-1]`
    /// when `i > 0`.
    Corr { cbits: Vec<usize>, targets: Vec<usize> },
}

impl Gate {
    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure { .. } | Gate::Corr { .. })
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H { qubit } | Gate::X { qubit } | Gate::Z { qubit } => vec![*qubit],
            Gate::Cnot { control, target }
            | Gate::Cz { control, target }
            | Gate::CPhase { control, target, .. } => vec![*control, *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Unitary { qubits, .. } => qubits.clone(),
            Gate::Measure { qubit, .. } => vec![*qubit],
            Gate::Corr { targets, .. } => targets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitProgram {
    pub data_qubits: u32,
    pub ancillas: u32,
    pub classical_bits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub cbit: usize,
    pub p_one: f64,
    pub outcome: u8,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub output: StateVector,
    pub classical: Vec<u8>,
    pub measurements: Vec<MeasurementRecord>,
}

impl CircuitProgram {
    pub fn new(data_qubits: u32, ancillas: u32, classical_bits: usize) -> Self {
        CircuitProgram {
            data_qubits,
            ancillas,
            classical_bits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> u32 {
        self.data_qubits + self.ancillas
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits()
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    /// Site ranges, distinct operands, and every classical read preceded by
    /// a measurement writing that bit.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits() as usize;
        let mut written = vec![false; self.classical_bits];
        for (pos, gate) in self.gates.iter().enumerate() {
            let qubits = gate.qubits();
            for &q in &qubits {
                if q == 0 || q > n {
                    return Err(PtmError::MalformedCircuit(format!(
                        "gate {pos}: qubit {q} out of range 1..={n}"
                    )));
                }
            }
            let mut sorted = qubits.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != qubits.len() && !matches!(gate, Gate::Corr { .. }) {
                return Err(PtmError::MalformedCircuit(format!(
                    "gate {pos}: repeated operand"
                )));
            }
            match gate {
                Gate::Unitary { qubits, matrix } => {
                    let d = 1usize << qubits.len();
                    if matrix.len() != d * d {
                        return Err(PtmError::MalformedCircuit(format!(
                            "gate {pos}: matrix has {} entries, expected {}",
                            matrix.len(),
                            d * d
                        )));
                    }
                }
                Gate::Measure { cbit, .. } => {
                    let slot = written.get_mut(*cbit).ok_or_else(|| {
                        PtmError::MalformedCircuit(format!("gate {pos}: classical bit {cbit} out of range"))
                    })?;
                    *slot = true;
                }
                Gate::Corr { cbits, targets } => {
                    for &c in cbits {
                        if !written.get(c).copied().unwrap_or(false) {
                            return Err(PtmError::MalformedCircuit(format!(
                                "gate {pos}: classical bit {c} read before any measurement"
                            )));
                        }
                    }
                    if cbits.len() >= usize::BITS as usize
                        || targets.len() + 1 < (1usize << cbits.len())
                    {
                        return Err(PtmError::MalformedCircuit(format!(
                            "gate {pos}: {} targets cannot cover {} classical values",
                            targets.len(),
                            1usize << cbits.len().min(16)
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Dense matrix of the leading run of unitary gates.
    pub fn unitary_segment(&self) -> Result<DMatrix<C64>> {
        self.validate()?;
        let dim = self.dim();
        let n = self.n_qubits();
        let mut m = DMatrix::zeros(dim, dim);
        let mut col = vec![ZERO; dim];
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = ZERO);
            col[j] = ONE;
            for gate in self.gates.iter().take_while(|g| g.is_unitary()) {
                apply_unitary_gate(&mut col, n, gate);
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn unitary_segment_error(&self) -> Result<f64> {
        Ok(unitarity_error(&self.unitary_segment()?))
    }
}

pub(crate) fn apply_unitary_gate(amps: &mut [C64], n: u32, gate: &Gate) {
    match gate {
        Gate::H { qubit } => apply_1q_in_place(amps, n, *qubit, &hadamard_matrix()),
        Gate::X { qubit } => apply_pauli_in_place(amps, n, *qubit, PauliAxis::X),
        Gate::Z { qubit } => apply_pauli_in_place(amps, n, *qubit, PauliAxis::Z),
        Gate::Cnot { control, target } => {
            let (c, t) = (site_mask(n, *control), site_mask(n, *target));
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::Cz { control, target } => {
            let mask = site_mask(n, *control) | site_mask(n, *target);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *a = -*a;
                }
            }
        }
        Gate::CPhase {
            control,
            target,
            angle,
        } => {
            let mask = site_mask(n, *control) | site_mask(n, *target);
            let phase = C64::from_polar(1.0, *angle);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *a *= phase;
                }
            }
        }
        Gate::Swap { a, b } => {
            let (ma, mb) = (site_mask(n, *a), site_mask(n, *b));
            for i in 0..amps.len() {
                if i & ma != 0 && i & mb == 0 {
                    amps.swap(i, (i & !ma) | mb);
                }
            }
        }
        Gate::Unitary { qubits, matrix } => apply_dense_gate(amps, n, qubits, matrix),
        Gate::Measure { .. } | Gate::Corr { .. } => {}
    }
}

fn apply_dense_gate(amps: &mut [C64], n: u32, qubits: &[usize], matrix: &[C64]) {
    let k = qubits.len();
    let d = 1usize << k;
    let masks: Vec<usize> = qubits.iter().map(|&q| site_mask(n, q)).collect();
    let all: usize = masks.iter().fold(0, |acc, m| acc | m);
    // local index r maps to a global offset; qubits[0] is the local MSB
    let offsets: Vec<usize> = (0..d)
        .map(|r| {
            masks
                .iter()
                .enumerate()
                .filter(|(b, _)| r & (1 << (k - 1 - b)) != 0)
                .fold(0, |acc, (_, m)| acc | m)
        })
        .collect();
    let mut local = vec![ZERO; d];
    for base in 0..amps.len() {
        if base & all != 0 {
            continue;
        }
        for (r, off) in offsets.iter().enumerate() {
            local[r] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = (0..d).map(|c| matrix[r * d + c] * local[c]).sum();
        }
    }
}

/// Execute `program` on `input`. Uncertain measurements are sampled from a
/// ChaCha stream seeded with `seed`; certain ones are projected directly.
pub fn run(program: &CircuitProgram, input: &StateVector, seed: u64) -> Result<RunOutcome> {
    program.validate()?;
    if input.dim() != program.dim() {
        return Err(PtmError::DimensionMismatch {
            expected: program.dim(),
            found: input.dim(),
        });
    }
    let n = program.n_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = input.clone();
    let mut classical = vec![0u8; program.classical_bits];
    let mut measurements = Vec::new();

    for gate in &program.gates {
        match gate {
            Gate::Measure { qubit, cbit } => {
                let mask = site_mask(n, *qubit);
                let p_one: f64 = state
                    .amps()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & mask != 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>()
                    / state.norm_sqr();
                let (outcome, deterministic) = if p_one <= DETERMINISTIC_TOL {
                    (0u8, true)
                } else if p_one >= 1.0 - DETERMINISTIC_TOL {
                    (1u8, true)
                } else {
                    (u8::from(rng.random::<f64>() < p_one), false)
                };
                for (i, a) in state.amps_mut().iter_mut().enumerate() {
                    if u8::from(i & mask != 0) != outcome {
                        *a = ZERO;
                    }
                }
                state.normalize()?;
                classical[*cbit] = outcome;
                measurements.push(MeasurementRecord {
                    qubit: *qubit,
                    cbit: *cbit,
                    p_one,
                    outcome,
                    deterministic,
                });
            }
            Gate::Corr { cbits, targets } => {
                let value = cbits
                    .iter()
                    .fold(0usize, |acc, &c| (acc << 1) | classical[c] as usize);
                if value > 0 {
                    apply_pauli_in_place(state.amps_mut(), n, targets[value - 1], PauliAxis::X);
                }
            }
            unitary => apply_unitary_gate(state.amps_mut(), n, unitary),
        }
    }
    Ok(RunOutcome {
        output: state,
        classical,
        measurements,
    })
}

impl RunOutcome {
    /// Data register state when the ancillas are left in a basis state.
    pub fn data_state(&self, program: &CircuitProgram) -> Result<StateVector> {
        let anc = program.ancillas as usize;
        let anc_dim = 1usize << anc;
        let amps = self.output.amps();
        let weight = |pattern: usize| -> f64 {
            amps.iter()
                .enumerate()
                .filter(|(i, _)| i % anc_dim == pattern)
                .map(|(_, a)| a.norm_sqr())
                .sum()
        };
        let (pattern, w) = (0..anc_dim)
            .map(|p| (p, weight(p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one ancilla pattern");
        if (w - self.output.norm_sqr()).abs() > 1e-10 {
            return Err(PtmError::invalid(
                "ancillas are entangled with the data register",
            ));
        }
        let data: Vec<C64> = amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i % anc_dim == pattern)
            .map(|(_, a)| *a)
            .collect();
        let mut psi = StateVector::unnormalized(data);
        psi.normalize()?;
        Ok(psi)
    }
}
