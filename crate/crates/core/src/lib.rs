//! Simon's-algorithm benchmark toolkit.
//!
//! The crate is organized around the pipeline used by the experiments:
//!
//! 1. [`circuit`] — gate-level IR, the simple/complex Simon oracles, full
//!    circuit assembly and OpenQASM 2.0 export.
//! 2. [`transpile`] — coupling maps (including the 127-qubit heavy-hex
//!    preset), placement, and SWAP-insertion routing.
//! 3. [`sim`] — statevector simulation, ideal sampling, and Monte Carlo
//!    Pauli-trajectory noise with readout errors.
//! 4. [`gf2`] — boolean linear algebra for secret recovery.
//! 5. [`bench`] — the experiment harness: algorithmic error rates,
//!    CNOT-distance scans, extrapolation, and CSV/JSON reports.

pub mod bench;
pub mod circuit;
pub mod gf2;
pub mod sim;
pub mod transpile;

pub use circuit::{Bitstring, Circuit, GateOp, OracleKind};
