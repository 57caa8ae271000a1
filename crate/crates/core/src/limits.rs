//! Capacity limits for dense representations.
//!
//! Defaults can be raised by setting `PTM_MAX_QUBITS`, which overrides the
//! state-vector and density-matrix qubit limits together.

use crate::error::{PtmError, Result};

pub const MAX_QUBITS_ENV: &str = "PTM_MAX_QUBITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest order N for which `ptm_block` materializes 2^N bits.
    pub block_order: u32,
    /// Largest qubit count for dense state vectors.
    pub state_qubits: u32,
    /// Largest qubit count for dense operators (2^N x 2^N matrices).
    pub operator_qubits: u32,
    /// Largest qubit count for density matrices.
    pub density_qubits: u32,
    /// Largest order for the FFT spectrum path.
    pub fft_qubits: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            block_order: 30,
            state_qubits: 14,
            operator_qubits: 10,
            density_qubits: 7,
            fft_qubits: 22,
        }
    }
}

impl Limits {
    /// Defaults, with `PTM_MAX_QUBITS` applied when set to a valid integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(MAX_QUBITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            limits.state_qubits = n;
            limits.density_qubits = n;
            limits.operator_qubits = n;
            limits.block_order = limits.block_order.max(n);
            limits.fft_qubits = limits.fft_qubits.max(n);
        }
        limits
    }

    pub(crate) fn check(what: &'static str, requested: u32, limit: u32) -> Result<()> {
        if requested > limit {
            return Err(PtmError::Capacity {
                what,
                requested: requested as usize,
                limit: limit as usize,
            });
        }
        Ok(())
    }
}
