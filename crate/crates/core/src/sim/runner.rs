//! Shot execution: ideal sampling and noisy Monte Carlo runs.
//!
//! Randomness is reproducible by construction: every shot draws from its
//! own ChaCha stream derived from (master seed, shot index), so results are
//! identical across runs and thread counts, and shot batches can execute in
//! any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_index_linear, NoiseModel, Pauli, SimError, Statevector};
use crate::circuit::{Bitstring, Circuit, GateOp};

/// Default memory guard: 2^26 amplitudes is roughly 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// One measured outcome per register for a single shot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: usize,
    pub register1: Bitstring,
    pub register2: Bitstring,
}

/// The per-shot random stream for a run seed.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Unitary prefix simulated once, plus everything needed to turn sampled
/// indices into shot records.
struct Prepared {
    k: usize,
    unitary: Vec<GateOp>,
    measures: Vec<(usize, usize)>,
    num_clbits: usize,
    split: usize,
    cumulative: Vec<f64>,
}

impl Prepared {
    fn build(circuit: &Circuit, cap: usize) -> Result<Self, SimError> {
        let k = circuit.width();
        let mut state = Statevector::new_with_cap(k, cap)?;
        let mut unitary = Vec::new();
        let mut measures = Vec::new();
        for op in circuit.ops() {
            match *op {
                GateOp::Measure { qubit, clbit } => measures.push((qubit, clbit)),
                other => unitary.push(other),
            }
        }
        if measures.is_empty() {
            return Err(SimError::NoMeasurements);
        }
        for op in &unitary {
            state.apply(op)?;
        }
        let mut cumulative = Vec::with_capacity(state.dim());
        let mut acc = 0.0;
        for a in state.amplitudes() {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        Ok(Prepared {
            k,
            unitary,
            measures,
            num_clbits: circuit.num_clbits(),
            split: circuit.register_split(),
            cumulative,
        })
    }

    fn sample_cached(&self, u: f64) -> usize {
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }

    /// Extracts classical bits from a sampled basis index, applies optional
    /// readout flips and the Pauli-frame bit-flip mask, and splits the
    /// classical register.
    fn record<R: Rng>(
        &self,
        shot: usize,
        index: usize,
        flip_lines: u128,
        readout: f64,
        rng: &mut R,
    ) -> ShotRecord {
        let mut clbits = Bitstring::zeros(self.num_clbits);
        for &(qubit, clbit) in &self.measures {
            let mut bit = (index >> (self.k - 1 - qubit)) & 1 == 1;
            if flip_lines >> qubit & 1 == 1 {
                bit = !bit;
            }
            if readout > 0.0 && rng.random_bool(readout) {
                bit = !bit;
            }
            clbits.set(clbit, bit);
        }
        ShotRecord {
            shot,
            register1: clbits.slice(0, self.split),
            register2: clbits.slice(self.split, self.num_clbits),
        }
    }
}

/// A Pauli error drawn for one shot, to be applied after `after_op`.
/// Two-qubit errors carry an optional component per line.
#[derive(Clone, Copy, Debug)]
struct Injection {
    after_op: usize,
    first: (usize, Option<Pauli>),
    second: Option<(usize, Option<Pauli>)>,
}

fn one_qubit_pauli<R: Rng>(rng: &mut R) -> Pauli {
    Pauli::ALL[rng.random_range(0..3)]
}

/// Uniform draw over the 15 non-identity two-qubit Paulis.
fn two_qubit_pauli<R: Rng>(rng: &mut R) -> (Option<Pauli>, Option<Pauli>) {
    let v = rng.random_range(1..16u8);
    let component = |c: u8| match c {
        0 => None,
        1 => Some(Pauli::X),
        2 => Some(Pauli::Y),
        _ => Some(Pauli::Z),
    };
    (component(v / 4), component(v % 4))
}

/// Walks the unitary ops drawing error placements for one shot. Zero-rate
/// draws are skipped without consuming randomness, so a noiseless model
/// leaves the stream exactly where `run_ideal` expects it.
fn draw_injections<R: Rng>(ops: &[GateOp], model: &NoiseModel, rng: &mut R) -> Vec<Injection> {
    let mut plan = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match *op {
            GateOp::H { qubit } | GateOp::X { qubit } => {
                let p = model.p1();
                if p > 0.0 && rng.random_bool(p) {
                    plan.push(Injection {
                        after_op: i,
                        first: (qubit, Some(one_qubit_pauli(rng))),
                        second: None,
                    });
                }
            }
            GateOp::Cnot { control, target } => {
                let p = model.effective_p2(false);
                if p > 0.0 && rng.random_bool(p) {
                    let (a, b) = two_qubit_pauli(rng);
                    plan.push(Injection {
                        after_op: i,
                        first: (control, a),
                        second: Some((target, b)),
                    });
                }
            }
            GateOp::Swap { a, b, inserted } => {
                // Three CNOT applications' worth of noise per SWAP.
                let p = model.effective_p2(inserted);
                if p > 0.0 {
                    for _ in 0..3 {
                        if rng.random_bool(p) {
                            let (pa, pb) = two_qubit_pauli(rng);
                            plan.push(Injection {
                                after_op: i,
                                first: (a, pa),
                                second: Some((b, pb)),
                            });
                        }
                    }
                }
            }
            GateOp::Measure { .. } => {}
        }
    }
    plan
}

/// Full statevector trajectory for a shot with at least one injected error.
fn trajectory_index<R: Rng>(
    prep: &Prepared,
    plan: &[Injection],
    buffer: &mut Option<Statevector>,
    cap: usize,
    rng: &mut R,
) -> Result<usize, SimError> {
    let state = match buffer {
        Some(s) => {
            s.reset();
            s
        }
        None => buffer.insert(Statevector::new_with_cap(prep.k, cap)?),
    };
    let mut next = 0;
    for (i, op) in prep.unitary.iter().enumerate() {
        state.apply(op)?;
        while next < plan.len() && plan[next].after_op == i {
            let inj = &plan[next];
            if let (line, Some(p)) = inj.first {
                state.apply_pauli(line, p)?;
            }
            if let Some((line, Some(p))) = inj.second {
                state.apply_pauli(line, p)?;
            }
            next += 1;
        }
    }
    let u: f64 = rng.random();
    Ok(sample_index_linear(state.amplitudes(), u))
}

/// Propagates the injected Paulis through the remaining Clifford ops and
/// returns the X-component mask over lines: the set of measured lines whose
/// outcome bit is flipped relative to the ideal sample.
///
/// Every gate in this IR (H, X, CNOT, SWAP) is Clifford, so a trajectory's
/// final state is a Pauli operator times the ideal state and its
/// measurement distribution is the ideal one shifted by that X mask. This
/// path is exact, not an approximation.
fn propagate_frame(ops: &[GateOp], plan: &[Injection]) -> u128 {
    let mut x_mask: u128 = 0;
    let mut z_mask: u128 = 0;
    let mut next = 0;
    for (i, op) in ops.iter().enumerate() {
        match *op {
            GateOp::H { qubit } => {
                let bit = 1u128 << qubit;
                let x = x_mask & bit != 0;
                let z = z_mask & bit != 0;
                if x != z {
                    x_mask ^= bit;
                    z_mask ^= bit;
                }
            }
            GateOp::X { .. } => {}
            GateOp::Cnot { control, target } => {
                if x_mask >> control & 1 == 1 {
                    x_mask ^= 1 << target;
                }
                if z_mask >> target & 1 == 1 {
                    z_mask ^= 1 << control;
                }
            }
            GateOp::Swap { a, b, .. } => {
                for mask in [&mut x_mask, &mut z_mask] {
                    let bit_a = *mask >> a & 1;
                    let bit_b = *mask >> b & 1;
                    if bit_a != bit_b {
                        *mask ^= (1 << a) | (1 << b);
                    }
                }
            }
            GateOp::Measure { .. } => {}
        }
        while next < plan.len() && plan[next].after_op == i {
            let inj = &plan[next];
            for component in [Some(inj.first), inj.second].into_iter().flatten() {
                if let (line, Some(p)) = component {
                    let (x, z) = p.components();
                    if x {
                        x_mask ^= 1 << line;
                    }
                    if z {
                        z_mask ^= 1 << line;
                    }
                }
            }
            next += 1;
        }
    }
    x_mask
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NoisyEngine {
    Trajectory,
    PauliFrame,
}

fn run_noisy_engine(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: usize,
    seed: u64,
    cap: usize,
    engine: NoisyEngine,
) -> Result<Vec<ShotRecord>, SimError> {
    model.validate_effective()?;
    let prep = Prepared::build(circuit, cap)?;
    let readout = model.readout();
    (0..shots)
        .into_par_iter()
        .map_init(
            || None::<Statevector>,
            |buffer, shot| {
                let mut rng = shot_rng(seed, shot as u64);
                let plan = draw_injections(&prep.unitary, model, &mut rng);
                let (index, flips) = if plan.is_empty() {
                    let u: f64 = rng.random();
                    (prep.sample_cached(u), 0u128)
                } else {
                    match engine {
                        NoisyEngine::Trajectory => {
                            (trajectory_index(&prep, &plan, buffer, cap, &mut rng)?, 0)
                        }
                        NoisyEngine::PauliFrame => {
                            let flips = propagate_frame(&prep.unitary, &plan);
                            let u: f64 = rng.random();
                            (prep.sample_cached(u), flips)
                        }
                    }
                };
                Ok(prep.record(shot, index, flips, readout, &mut rng))
            },
        )
        .collect()
}

/// Simulates the unitary part once and samples `shots` outcomes from the
/// final state. Deterministic for a fixed seed.
pub fn run_ideal(circuit: &Circuit, shots: usize, seed: u64) -> Result<Vec<ShotRecord>, SimError> {
    run_ideal_with_cap(circuit, shots, seed, DEFAULT_QUBIT_CAP)
}

pub fn run_ideal_with_cap(
    circuit: &Circuit,
    shots: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<ShotRecord>, SimError> {
    let prep = Prepared::build(circuit, cap)?;
    Ok((0..shots)
        .map(|shot| {
            let mut rng = shot_rng(seed, shot as u64);
            let u: f64 = rng.random();
            prep.record(shot, prep.sample_cached(u), 0, 0.0, &mut rng)
        })
        .collect())
}

/// Monte Carlo noisy run: each shot is one stochastic Pauli trajectory,
/// resimulated through the statevector whenever an error fires. Shots with
/// no error events sample the cached ideal state, so a noiseless model
/// reproduces [`run_ideal`] record-for-record on the same seed.
pub fn run_noisy(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>, SimError> {
    run_noisy_with_cap(circuit, model, shots, seed, DEFAULT_QUBIT_CAP)
}

pub fn run_noisy_with_cap(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<ShotRecord>, SimError> {
    run_noisy_engine(circuit, model, shots, seed, cap, NoisyEngine::Trajectory)
}

/// Noisy run using Pauli-frame propagation instead of per-shot statevector
/// resimulation. Identically distributed to [`run_noisy`] for this crate's
/// (all-Clifford) gate set and orders of magnitude faster on large
/// registers; individual errored shots may differ from the trajectory
/// engine because the two sample through different mechanics.
pub fn run_noisy_fast(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>, SimError> {
    run_noisy_fast_with_cap(circuit, model, shots, seed, DEFAULT_QUBIT_CAP)
}

pub fn run_noisy_fast_with_cap(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<ShotRecord>, SimError> {
    run_noisy_engine(circuit, model, shots, seed, cap, NoisyEngine::PauliFrame)
}
