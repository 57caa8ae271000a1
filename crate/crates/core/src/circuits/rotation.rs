use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{PauliAxis, PauliString, StateVector, C64, I};
use crate::ptm_states::{ptm_state, Logical};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XxRotationReport {
    pub n: u32,
    pub k: usize,
    pub j: usize,
    pub theta: f64,
    /// Phase `arg <b_TM| U |b_TM>` for b = 0, 1.
    pub phases: [f64; 2],
    /// Largest amplitude-wise distance between `U|b_TM>` and `e^{i theta}|b_TM>`.
    pub max_deviation: f64,
    pub pass: bool,
}

/// `exp(i theta sigma_x^(k) sigma_x^(j))` acting on both logical states.
pub fn xx_rotation_phase_check(n: u32, k: usize, j: usize, theta: f64) -> Result<XxRotationReport> {
    if !theta.is_finite() {
        return Err(PtmError::NonFinite("rotation angle"));
    }
    let xx = PauliString::from_factors(n, &[(k, PauliAxis::X), (j, PauliAxis::X)])?;
    let expected_phase = C64::from_polar(1.0, theta);
    let mut phases = [0.0; 2];
    let mut max_deviation = 0.0f64;
    for (slot, label) in [Logical::Zero, Logical::One].into_iter().enumerate() {
        let psi = ptm_state(n, label)?.state();
        // (XX)^2 = 1, so exp(i theta XX) = cos(theta) + i sin(theta) XX
        let mut flipped = psi.amps().to_vec();
        xx.apply_in_place(&mut flipped);
        let out = StateVector::unnormalized(
            psi.amps()
                .iter()
                .zip(&flipped)
                .map(|(a, b)| a * theta.cos() + I * theta.sin() * b)
                .collect(),
        );
        phases[slot] = psi.inner(&out)?.arg();
        max_deviation = max_deviation.max(out.max_abs_diff(&psi.scaled(expected_phase))?);
    }
    Ok(XxRotationReport {
        n,
        k,
        j,
        theta,
        phases,
        max_deviation,
        pass: max_deviation <= 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::unitary_from_hamiltonian;

    // expm oracle: exp(i theta XX) = exp(-i (-XX) theta) via eigendecomposition
    fn dense_rotation(n: u32, k: usize, j: usize, theta: f64, psi: &StateVector) -> StateVector {
        let xx = PauliString::from_factors(n, &[(k, PauliAxis::X), (j, PauliAxis::X)])
            .unwrap()
            .materialize();
        let u = unitary_from_hamiltonian(&(-xx), theta);
        StateVector::unnormalized((u * psi.to_column()).as_slice().to_vec())
    }

    #[test]
    fn zero_angle_is_identity() {
        let r = xx_rotation_phase_check(3, 1, 2, 0.0).unwrap();
        assert!(r.pass && r.max_deviation == 0.0);
    }

    #[test]
    fn bell_pair_phase() {
        let theta = std::f64::consts::FRAC_PI_3;
        let r = xx_rotation_phase_check(2, 1, 2, theta).unwrap();
        assert!(r.pass);
        assert!((r.phases[0] - theta).abs() < 1e-12);
        let psi = ptm_state(2, Logical::Zero).unwrap().state();
        let oracle = dense_rotation(2, 1, 2, theta, &psi);
        let expected = psi.scaled(C64::from_polar(1.0, theta));
        assert!(oracle.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn four_qubit_phase() {
        let theta = 1.234;
        let r = xx_rotation_phase_check(4, 2, 3, theta).unwrap();
        assert!(r.pass);
        assert!((r.phases[1] - theta).abs() < 1e-12);
        let psi = ptm_state(4, Logical::One).unwrap().state();
        let oracle = dense_rotation(4, 2, 3, theta, &psi);
        assert!(oracle.max_abs_diff(&psi.scaled(C64::from_polar(1.0, theta))).unwrap() < 1e-12);
    }

    #[test]
    fn same_site_rotation() {
        assert!(xx_rotation_phase_check(3, 2, 2, 0.4).unwrap().pass);
        assert!(xx_rotation_phase_check(3, 2, 4, 0.4).is_err());
    }
}
