//! Shared fixtures and independent reference implementations used by the
//! integration suites. Everything here deliberately avoids the library's
//! own code paths where it serves as a cross-check.
//!
//! Each test target compiles this module separately, so not every helper
//! is used by every target.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsimon::circuit::{Circuit, GateOp};
use qsimon::sim::{NoiseModel, Statevector};
use qsimon::transpile::{route, validate_routed, CouplingMap, Layout, RoutedCircuit};

/// Simulates the unitary ops of a circuit from |0...0>.
pub fn statevector_of(circuit: &Circuit) -> Statevector {
    let mut state = Statevector::new_with_cap(circuit.width(), 30).unwrap();
    for op in circuit.ops() {
        if op.is_unitary() {
            state.apply(op).unwrap();
        }
    }
    state
}

/// Checks that simulating the routed circuit reproduces the original
/// statevector once the tracked output permutation is unwound: amplitude
/// `o` of the original must appear at the routed index that places each
/// logical bit at its final physical position, and every other routed
/// amplitude must vanish.
pub fn assert_routed_equivalent(original: &Circuit, routed: &RoutedCircuit, tolerance: f64) {
    let original_state = statevector_of(original);
    let routed_state = statevector_of(&routed.circuit);
    let w = original.width();
    let m = routed.circuit.width();
    let mut expected = vec![Complex64::new(0.0, 0.0); routed_state.dim()];
    for (o, amp) in original_state.amplitudes().iter().enumerate() {
        let mut r = 0usize;
        for line in 0..w {
            let bit = (o >> (w - 1 - line)) & 1;
            if bit == 1 {
                r |= 1 << (m - 1 - routed.final_layout.physical(line));
            }
        }
        expected[r] = *amp;
    }
    for (i, (actual, want)) in routed_state
        .amplitudes()
        .iter()
        .zip(expected.iter())
        .enumerate()
    {
        assert!(
            (actual - want).norm() < tolerance,
            "amplitude {i}: routed {actual}, expected {want}"
        );
    }
}

/// Random unitary-only circuit over `width` lines.
pub fn random_circuit(width: usize, ops: usize, rng: &mut impl Rng) -> Circuit {
    let mut circuit = Circuit::with_layout(width, 0, 0).unwrap();
    for _ in 0..ops {
        match rng.random_range(0..4) {
            0 => circuit.h(rng.random_range(0..width)).unwrap(),
            1 => circuit.x(rng.random_range(0..width)).unwrap(),
            _ => {
                let a = rng.random_range(0..width);
                let b = (a + rng.random_range(1..width)) % width;
                if rng.random_bool(0.7) {
                    circuit.cnot(a, b).unwrap();
                } else {
                    circuit.swap(a, b).unwrap();
                }
            }
        }
    }
    circuit
}

/// Random connected map on `k` qubits: a random spanning tree plus extra
/// edges.
pub fn random_connected_map(k: usize, rng: &mut impl Rng) -> CouplingMap {
    let mut edges = Vec::new();
    for v in 1..k {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..k {
        for b in a + 1..k {
            if rng.random_bool(0.15) && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    CouplingMap::from_edges(k, &edges).unwrap()
}

/// Routes `cases` random circuits over random connected maps and verifies
/// edge validity plus statevector equivalence under the tracked
/// permutation. Returns the number of routings that needed SWAPs.
pub fn routing_fuzz(cases: usize, seed: u64, tolerance: f64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut with_swaps = 0;
    for case in 0..cases {
        let k = rng.random_range(2..=10usize);
        let width = rng.random_range(2..=k);
        let map = random_connected_map(k, &mut rng);
        let circuit = random_circuit(width, rng.random_range(1..=30), &mut rng);
        let mut physical: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            physical.swap(i, rng.random_range(0..=i));
        }
        physical.truncate(width);
        let layout = Layout::new(physical, &map).unwrap();
        let routed = route(&circuit, &map, &layout).unwrap();
        assert!(
            validate_routed(&routed.circuit, &map).is_ok(),
            "case {case}: routed circuit violates the coupling map"
        );
        assert_routed_equivalent(&circuit, &routed, tolerance);
        if routed.inserted_swap_count > 0 {
            with_swaps += 1;
        }
    }
    with_swaps
}

/// Exact outcome-failure probability for a deterministic-outcome circuit
/// under the stochastic Pauli noise model, by direct enumeration.
///
/// Independent of the simulator: propagates every possible injected Pauli
/// through the remaining gates symbolically (X/Z component masks) and
/// convolves the per-draw flip distributions over the measured bits.
/// Includes readout flips. The circuit's noise-free outcome must be
/// deterministic for "failure" to be well defined, which holds for the
/// X-then-CNOT separation circuits this backs.
pub fn exact_failure_probability(circuit: &Circuit, model: &NoiseModel) -> f64 {
    let ops: Vec<GateOp> = circuit.ops().to_vec();
    let measures: Vec<(usize, usize)> = ops
        .iter()
        .filter_map(|op| match *op {
            GateOp::Measure { qubit, clbit } => Some((qubit, clbit)),
            _ => None,
        })
        .collect();
    let m = measures.len();
    assert!(m <= 16, "too many measured bits for enumeration");

    // Propagate a Pauli (as X/Z masks over lines) injected after op
    // `from`, returning its X mask at the end of the circuit.
    let propagate = |from: usize, mut x: u64, mut z: u64| -> u64 {
        for op in ops.iter().skip(from + 1) {
            match *op {
                GateOp::H { qubit } => {
                    let bx = x >> qubit & 1;
                    let bz = z >> qubit & 1;
                    if bx != bz {
                        x ^= 1 << qubit;
                        z ^= 1 << qubit;
                    }
                }
                GateOp::X { .. } => {}
                GateOp::Cnot { control, target } => {
                    if x >> control & 1 == 1 {
                        x ^= 1 << target;
                    }
                    if z >> target & 1 == 1 {
                        z ^= 1 << control;
                    }
                }
                GateOp::Swap { a, b, .. } => {
                    for mask in [&mut x, &mut z] {
                        let ba = *mask >> a & 1;
                        let bb = *mask >> b & 1;
                        if ba != bb {
                            *mask ^= (1 << a) | (1 << b);
                        }
                    }
                }
                GateOp::Measure { .. } => {}
            }
        }
        x
    };
    let flip_vector = |x_final: u64| -> usize {
        let mut v = 0usize;
        for (slot, &(qubit, _)) in measures.iter().enumerate() {
            if x_final >> qubit & 1 == 1 {
                v |= 1 << slot;
            }
        }
        v
    };

    // Single-qubit Paulis as (x, z) component pairs; index 0 is identity.
    const COMPONENTS: [(u64, u64); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

    let mut dist = vec![0.0f64; 1 << m];
    dist[0] = 1.0;
    let convolve = |dist: &mut Vec<f64>, fire_prob: f64, outcomes: &[(usize, f64)]| {
        if fire_prob == 0.0 {
            return;
        }
        let mut next = vec![0.0f64; dist.len()];
        for (v, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            next[v] += p * (1.0 - fire_prob);
            for &(w, pw) in outcomes {
                next[v ^ w] += p * fire_prob * pw;
            }
        }
        *dist = next;
    };

    for (i, op) in ops.iter().enumerate() {
        match *op {
            GateOp::H { qubit } | GateOp::X { qubit } => {
                let outcomes: Vec<(usize, f64)> = (1..4)
                    .map(|c| {
                        let (px, pz) = COMPONENTS[c];
                        (flip_vector(propagate(i, px << qubit, pz << qubit)), 1.0 / 3.0)
                    })
                    .collect();
                convolve(&mut dist, model.p1(), &outcomes);
            }
            GateOp::Cnot { control, target } | GateOp::Swap { a: control, b: target, .. } => {
                let (lines, draws, fire) = match *op {
                    GateOp::Swap { inserted, .. } => {
                        ((control, target), 3, model.effective_p2(inserted))
                    }
                    _ => ((control, target), 1, model.effective_p2(false)),
                };
                let outcomes: Vec<(usize, f64)> = (1..16)
                    .map(|c| {
                        let (ax, az) = COMPONENTS[c / 4];
                        let (bx, bz) = COMPONENTS[c % 4];
                        let x = (ax << lines.0) | (bx << lines.1);
                        let z = (az << lines.0) | (bz << lines.1);
                        (flip_vector(propagate(i, x, z)), 1.0 / 15.0)
                    })
                    .collect();
                for _ in 0..draws {
                    convolve(&mut dist, fire, &outcomes);
                }
            }
            GateOp::Measure { .. } => {}
        }
    }

    let r = model.readout();
    if r > 0.0 {
        for slot in 0..m {
            convolve(&mut dist, r, &[(1 << slot, 1.0)]);
        }
    }
    1.0 - dist[0]
}
