//! Simulation and resource accounting for CNOT gates built from a Heisenberg
//! exchange interaction whose strength is only approximately known.
//!
//! - [`su4`]: exact 4×4 operator algebra and the fidelity metric.
//! - [`pulse`]: term isolation, tilted rotations, BB1 and concatenated pulse
//!   sequences, and their simulation under a fractional coupling error.
//! - [`cost`]: gate-count recurrences and gate-time scheduling.
//! - [`exchange`]: tabulated couplings J(separation) and fractional errors.
//! - [`charplan`]: characterization budgets and decoherence penalties.

pub mod charplan;
pub mod cost;
pub mod error;
pub mod exchange;
pub mod pulse;
pub mod su4;

pub use error::{Error, Result};
pub use pulse::{ErrorModel, PulseSeq, PulseStep, SingleQubitRotation};
pub use su4::{Axis, Pauli, PauliAxis, PauliString, Qubit, TwoQubitOperator};
