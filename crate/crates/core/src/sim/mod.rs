//! Statevector simulation with ideal sampling and Monte Carlo Pauli noise.
//!
//! Amplitudes are double-precision complex numbers; a `k`-qubit state holds
//! `2^k` of them, with qubit line 0 as the most significant index bit (so
//! basis index bits read left-to-right like the crate's bitstrings).

mod noise;
mod runner;

pub use noise::{
    builtin_devices, find_device, load_devices, noise_model_from_device, DeviceParams, NoiseModel,
};
pub use runner::{
    run_ideal, run_ideal_with_cap, run_noisy, run_noisy_fast, run_noisy_fast_with_cap,
    run_noisy_with_cap, shot_rng, ShotRecord, DEFAULT_QUBIT_CAP,
};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Bitstring, GateOp};

/// Below this state size the gate kernels stay single-threaded; the rayon
/// dispatch overhead dominates for small vectors.
const PARALLEL_DIM_THRESHOLD: usize = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("{qubits} qubits exceeds the configured cap of {cap} (2^{qubits} amplitudes)")]
    QubitCapExceeded { qubits: usize, cap: usize },
    #[error("cannot simulate a zero-qubit state")]
    EmptyState,
    #[error("qubit line {line} out of range for {qubits}-qubit state")]
    LineOutOfRange { line: usize, qubits: usize },
    #[error("measurement is not a unitary op; use a run function instead")]
    NotUnitary,
    #[error("circuit has no measurement ops; nothing to sample")]
    NoMeasurements,
    #[error("{what} = {value} is not a probability in [0, 1]")]
    InvalidProbability { what: &'static str, value: f64 },
    #[error("swap error multiplier {0} must be finite and >= 1")]
    InvalidMultiplier(f64),
    #[error("effective two-qubit error p2 * multiplier = {0} exceeds 1")]
    EffectiveErrorOverUnity(f64),
    #[error("device percentage {what} = {value} outside [0, 100]")]
    PercentOutOfRange { what: &'static str, value: f64 },
    #[error("unknown device {0:?}")]
    UnknownDevice(String),
    #[error("device file error: {0}")]
    DeviceFile(String),
}

/// One of the non-identity single-qubit Pauli operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// (has X component, has Z component) in the symplectic picture;
    /// Y carries both.
    pub fn components(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Pure state over `2^k` amplitudes.
#[derive(Clone, Debug)]
pub struct Statevector {
    amps: Vec<Complex64>,
    num_qubits: usize,
}

impl Statevector {
    /// The all-zeros computational basis state, guarded by the default
    /// memory cap.
    pub fn new(num_qubits: usize) -> Result<Self, SimError> {
        Self::new_with_cap(num_qubits, DEFAULT_QUBIT_CAP)
    }

    /// The all-zeros state with an explicit qubit cap. 2^26 amplitudes is
    /// roughly 1 GiB; raising the cap is the caller's memory decision.
    pub fn new_with_cap(num_qubits: usize, cap: usize) -> Result<Self, SimError> {
        if num_qubits == 0 {
            return Err(SimError::EmptyState);
        }
        if num_qubits > cap {
            return Err(SimError::QubitCapExceeded {
                qubits: num_qubits,
                cap,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { amps, num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Resets to |0...0> without reallocating.
    pub fn reset(&mut self) {
        self.amps.fill(Complex64::new(0.0, 0.0));
        self.amps[0] = Complex64::new(1.0, 0.0);
    }

    /// Index-bit position for a qubit line (line 0 is the MSB).
    fn bit(&self, line: usize) -> Result<usize, SimError> {
        if line >= self.num_qubits {
            return Err(SimError::LineOutOfRange {
                line,
                qubits: self.num_qubits,
            });
        }
        Ok(self.num_qubits - 1 - line)
    }

    /// Applies a unitary gate in place; each amplitude pair is touched once.
    pub fn apply(&mut self, op: &GateOp) -> Result<(), SimError> {
        match *op {
            GateOp::H { qubit } => {
                let mask = 1usize << self.bit(qubit)?;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(mask, |lo, hi| {
                    let sum = *lo + *hi;
                    let diff = *lo - *hi;
                    *lo = sum * s;
                    *hi = diff * s;
                });
            }
            GateOp::X { qubit } => self.apply_pauli(qubit, Pauli::X)?,
            GateOp::Cnot { control, target } => {
                let cm = 1usize << self.bit(control)?;
                let tm = 1usize << self.bit(target)?;
                self.permute_2q(cm.max(tm), |i| {
                    if (i & cm != 0) && (i & tm == 0) {
                        Some(i | tm)
                    } else {
                        None
                    }
                });
            }
            GateOp::Swap { a, b, .. } => {
                let am = 1usize << self.bit(a)?;
                let bm = 1usize << self.bit(b)?;
                self.permute_2q(am.max(bm), |i| {
                    if (i & am != 0) && (i & bm == 0) {
                        Some(i ^ am ^ bm)
                    } else {
                        None
                    }
                });
            }
            GateOp::Measure { .. } => return Err(SimError::NotUnitary),
        }
        Ok(())
    }

    /// Applies a Pauli operator to one line.
    pub fn apply_pauli(&mut self, line: usize, pauli: Pauli) -> Result<(), SimError> {
        let mask = 1usize << self.bit(line)?;
        match pauli {
            Pauli::X => self.for_each_pair(mask, std::mem::swap),
            Pauli::Y => self.for_each_pair(mask, |lo, hi| {
                let i = Complex64::new(0.0, 1.0);
                let new_lo = -i * *hi;
                let new_hi = i * *lo;
                *lo = new_lo;
                *hi = new_hi;
            }),
            Pauli::Z => self.for_each_pair(mask, |_, hi| *hi = -*hi),
        }
        Ok(())
    }

    /// Visits every amplitude pair (i, i | mask) with the mask bit clear in
    /// i. Blocks of size 2*mask are independent, which makes the parallel
    /// split both safe and bitwise deterministic.
    fn for_each_pair<F>(&mut self, mask: usize, f: F)
    where
        F: Fn(&mut Complex64, &mut Complex64) + Sync + Send,
    {
        let block = mask << 1;
        if self.amps.len() >= PARALLEL_DIM_THRESHOLD && self.amps.len() > block {
            self.amps.par_chunks_mut(block).for_each(|chunk| {
                let (lo_half, hi_half) = chunk.split_at_mut(mask);
                for (lo, hi) in lo_half.iter_mut().zip(hi_half.iter_mut()) {
                    f(lo, hi);
                }
            });
        } else if self.amps.len() > block {
            for chunk in self.amps.chunks_mut(block) {
                let (lo_half, hi_half) = chunk.split_at_mut(mask);
                for (lo, hi) in lo_half.iter_mut().zip(hi_half.iter_mut()) {
                    f(lo, hi);
                }
            }
        } else {
            // Single block: the pair loop itself is the parallel axis.
            let (lo_half, hi_half) = self.amps.split_at_mut(mask);
            if mask >= PARALLEL_DIM_THRESHOLD {
                lo_half
                    .par_iter_mut()
                    .zip(hi_half.par_iter_mut())
                    .for_each(|(lo, hi)| f(lo, hi));
            } else {
                for (lo, hi) in lo_half.iter_mut().zip(hi_half.iter_mut()) {
                    f(lo, hi);
                }
            }
        }
    }

    /// Applies an index permutation that only swaps within blocks of size
    /// 2*hi_mask. `pair_of(i)` must return the partner index for exactly
    /// one member of each transposed pair and None for everything else.
    fn permute_2q<F>(&mut self, hi_mask: usize, pair_of: F)
    where
        F: Fn(usize) -> Option<usize> + Sync + Send,
    {
        let block = hi_mask << 1;
        let run = |chunk: &mut [Complex64], base: usize| {
            for local in 0..chunk.len() {
                let i = base + local;
                if let Some(j) = pair_of(i) {
                    debug_assert!(j >= base && j < base + chunk.len());
                    chunk.swap(local, j - base);
                }
            }
        };
        if self.amps.len() >= PARALLEL_DIM_THRESHOLD && self.amps.len() > block {
            self.amps
                .par_chunks_mut(block)
                .enumerate()
                .for_each(|(c, chunk)| run(chunk, c * block));
        } else {
            for (c, chunk) in self.amps.chunks_mut(block).enumerate() {
                run(chunk, c * block);
            }
        }
    }
}

/// Draws one measurement outcome over all lines with Born-rule weights,
/// rendered MSB-left.
pub fn sample_measurement<R: rand::Rng>(state: &Statevector, rng: &mut R) -> Bitstring {
    let u: f64 = rng.random();
    let idx = sample_index_linear(state.amplitudes(), u);
    Bitstring::from_index(idx as u64, state.num_qubits())
}

/// Single-pass weighted draw: the first index whose cumulative probability
/// reaches `u`. Falls back to the last index against rounding shortfall.
pub(crate) fn sample_index_linear(amps: &[Complex64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if u < acc {
            return i;
        }
    }
    amps.len() - 1
}
