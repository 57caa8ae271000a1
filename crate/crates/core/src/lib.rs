//! Numerical toolkit for Prouhet-Thue-Morse (PTM) structures in quantum
//! information: the sequence and its exact identities, PTM logical states,
//! spin-operator properties, gate-level circuits (encoder, phase-flip
//! correction, QFT, baker map), open-system chain dynamics, the QFT spectrum
//! of PTM states, and PTM-weighted series.

pub mod circuits;
pub mod dynamics;
pub mod error;
pub mod fractal;
pub mod hilbert;
pub mod limits;
pub mod number_theory;
pub mod ptm_seq;
pub mod ptm_states;
pub mod report;
pub mod spin_ops;

pub use error::{PtmError, Result};
pub use hilbert::{DensityMatrix, Kron, OperatorSpec, PauliAxis, PauliString, StateVector, C64};
pub use limits::Limits;
pub use ptm_seq::{BitBlock, IndexPartition};
pub use ptm_states::{Logical, PtmLogical};
pub use report::Report;
