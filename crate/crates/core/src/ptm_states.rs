//! PTM logical states.
//!
//! A logical state is an equal-weight superposition over `E(N)` (logical 0)
//! or `O(N)` (logical 1). The amplitude is always `2^(-h/2)` for an integer
//! `h`, so states are stored as a support indicator plus `h` and only turned
//! into floating point when materialized. Recursive composition is then an
//! exact operation on the indicator.

use std::fmt;

use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::{StateVector, C64, NORM_TOL};
use crate::limits::Limits;
use crate::ptm_seq::ptm_block;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Logical {
    #[serde(rename = "0_TM")]
    Zero,
    #[serde(rename = "1_TM")]
    One,
}

impl Logical {
    pub fn other(self) -> Logical {
        match self {
            Logical::Zero => Logical::One,
            Logical::One => Logical::Zero,
        }
    }

    /// Value of `t_k` on this state's support.
    pub fn parity(self) -> u8 {
        match self {
            Logical::Zero => 0,
            Logical::One => 1,
        }
    }
}

impl fmt::Display for Logical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logical::Zero => "0_TM",
            Logical::One => "1_TM",
        })
    }
}

impl std::str::FromStr for Logical {
    type Err = PtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "0_TM" | "0tm" => Ok(Logical::Zero),
            "1" | "1_TM" | "1tm" => Ok(Logical::One),
            other => Err(PtmError::invalid(format!("unknown logical label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Carrier {
    Qubits,
    Qudit { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PtmLogical {
    order: u32,
    label: Logical,
    carrier: Carrier,
    indicator: Vec<u8>,
    half_exponent: u32,
}

/// `2^(-h/2)`, evaluated the same way for every caller.
pub fn dyadic_sqrt_amplitude(h: u32) -> f64 {
    let whole = 0.5f64.powi((h / 2) as i32);
    if h % 2 == 1 {
        whole * std::f64::consts::FRAC_1_SQRT_2
    } else {
        whole
    }
}

impl PtmLogical {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn label(&self) -> Logical {
        self.label
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn dim(&self) -> usize {
        self.indicator.len()
    }

    /// Amplitude on every support index.
    pub fn amplitude(&self) -> f64 {
        dyadic_sqrt_amplitude(self.half_exponent)
    }

    /// Squared amplitude as `(1, 2^h)`.
    pub fn amplitude_sqr_denominator_log2(&self) -> u32 {
        self.half_exponent
    }

    pub fn indicator(&self) -> &[u8] {
        &self.indicator
    }

    pub fn support(&self) -> Vec<usize> {
        self.indicator
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn state(&self) -> StateVector {
        let a = C64::new(self.amplitude(), 0.0);
        StateVector::unnormalized(
            self.indicator
                .iter()
                .map(|&b| if b == 1 { a } else { C64::new(0.0, 0.0) })
                .collect(),
        )
    }
}

fn indicator_for(order: u32, label: Logical) -> Result<Vec<u8>> {
    let block = ptm_block(order)?;
    Ok(block
        .bits()
        .iter()
        .map(|&t| u8::from(t == label.parity()))
        .collect())
}

pub fn ptm_state(order: u32, label: Logical) -> Result<PtmLogical> {
    if order == 0 {
        return Err(PtmError::invalid("PTM states need at least one qubit"));
    }
    Limits::check("state-vector qubits", order, Limits::from_env().state_qubits)?;
    Ok(PtmLogical {
        order,
        label,
        carrier: Carrier::Qubits,
        indicator: indicator_for(order, label)?,
        half_exponent: order - 1,
    })
}

/// Order `N + 1` pair from the order `N` pair.
pub fn ptm_compose(prev0: &PtmLogical, prev1: &PtmLogical) -> Result<(PtmLogical, PtmLogical)> {
    if prev0.order != prev1.order {
        return Err(PtmError::invalid(format!(
            "mismatched orders {} and {}",
            prev0.order, prev1.order
        )));
    }
    if prev0.label != Logical::Zero || prev1.label != Logical::One {
        return Err(PtmError::invalid("expected the (0_TM, 1_TM) pair in that order"));
    }
    if prev0.carrier != Carrier::Qubits || prev1.carrier != Carrier::Qubits {
        return Err(PtmError::invalid("recursive composition is defined on qubit registers"));
    }
    if prev0.half_exponent != prev1.half_exponent {
        return Err(PtmError::invalid("pair has mismatched amplitudes"));
    }
    let order = prev0.order + 1;
    Limits::check("state-vector qubits", order, Limits::from_env().state_qubits)?;

    // |0>(x)a + |1>(x)b, with the 1/sqrt(2) folded into the exponent
    let concat = |a: &[u8], b: &[u8]| -> Vec<u8> { a.iter().chain(b).copied().collect() };
    let h = prev0.half_exponent + 1;
    let next0 = PtmLogical {
        order,
        label: Logical::Zero,
        carrier: Carrier::Qubits,
        indicator: concat(&prev0.indicator, &prev1.indicator),
        half_exponent: h,
    };
    let next1 = PtmLogical {
        order,
        label: Logical::One,
        carrier: Carrier::Qubits,
        indicator: concat(&prev1.indicator, &prev0.indicator),
        half_exponent: h,
    };
    Ok((next0, next1))
}

/// Qudit logical state with amplitude `sqrt(2/d)`; `d` must be a power of two.
pub fn ptm_qudit_state(dim: usize, label: Logical) -> Result<PtmLogical> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(PtmError::NotPowerOfTwo(dim));
    }
    let order = dim.trailing_zeros();
    Limits::check("state-vector qubits", order, Limits::from_env().state_qubits)?;
    Ok(PtmLogical {
        order,
        label,
        carrier: Carrier::Qudit { dim },
        indicator: indicator_for(order, label)?,
        half_exponent: order - 1,
    })
}

/// `alpha |0_TM> + beta |1_TM>`.
pub fn encode_logical(alpha: C64, beta: C64, order: u32) -> Result<StateVector> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(PtmError::NotNormalized { norm_sqr });
    }
    let zero = ptm_state(order, Logical::Zero)?.state();
    let one = ptm_state(order, Logical::One)?.state();
    StateVector::new(zero.combine(alpha, &one, beta)?.into_amps())
}
