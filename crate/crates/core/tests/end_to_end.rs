//! Cross-module integration checks: oracle fragments against their
//! classical reference, full Simon circuits against the orthogonality
//! theorem, and recovery against brute-force enumeration.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsimon::circuit::{
    build_oracle_with_secret, build_simon_circuit, classical_oracle_eval_with_secret, emit_qasm,
    parse_qasm, Bitstring, Circuit, GateOp, OracleKind,
};
use qsimon::gf2::{brute_force_secret, dot_mod2, solve_secret, Basis};
use qsimon::sim::{run_ideal, Statevector};

const KINDS: [OracleKind; 2] = [OracleKind::Simple, OracleKind::Complex];

/// Prepares |x>|y>, applies the oracle fragment, and expects the basis
/// state |x>|f(x) XOR y>.
fn check_oracle_unitary_action(kind: OracleKind, secret: &Bitstring) {
    let n = secret.len();
    let fragment = build_oracle_with_secret(kind, secret).unwrap();
    for xv in 0u64..1 << n {
        let x = Bitstring::from_index(xv, n);
        let fx = classical_oracle_eval_with_secret(kind, secret, &x).unwrap();
        for yv in 0u64..1 << n {
            let mut state = Statevector::new(2 * n).unwrap();
            for line in 0..n {
                if x.get(line) {
                    state.apply(&GateOp::X { qubit: line }).unwrap();
                }
                if (yv >> (n - 1 - line)) & 1 == 1 {
                    state.apply(&GateOp::X { qubit: n + line }).unwrap();
                }
            }
            for op in fragment.ops() {
                state.apply(op).unwrap();
            }
            let expected_index = ((xv << n) | (fx.value() ^ yv)) as usize;
            for (i, amp) in state.amplitudes().iter().enumerate() {
                let want = if i == expected_index { 1.0 } else { 0.0 };
                assert!(
                    (amp.re - want).abs() < 1e-12 && amp.im.abs() < 1e-12,
                    "{kind:?} s={secret} x={x} y={yv:0n$b}: amplitude {i} = {amp}"
                );
            }
        }
    }
}

#[test]
fn oracle_unitary_action_matches_classical_reference() {
    for n in 2..=5 {
        for kind in KINDS {
            check_oracle_unitary_action(kind, &Bitstring::ones(n));
        }
    }
}

#[test]
fn oracle_unitary_action_with_arbitrary_secrets() {
    for secret in ["10", "1010", "0110", "10001"] {
        for kind in KINDS {
            check_oracle_unitary_action(kind, &secret.parse().unwrap());
        }
    }
}

/// Register-1 bits of a basis index in a width-2n circuit.
fn register1_of_index(index: usize, n: usize) -> u64 {
    (index >> n) as u64
}

#[test]
fn simon_statevector_outcomes_are_orthogonal_to_secret() {
    for n in 2..=4 {
        for kind in KINDS {
            let circuit = build_simon_circuit(n, kind).unwrap();
            let state = common::statevector_of(&circuit);
            let s = Bitstring::ones(n);
            for (i, amp) in state.amplitudes().iter().enumerate() {
                if amp.norm_sqr() > 1e-20 {
                    let z = Bitstring::from_index(register1_of_index(i, n), n);
                    assert_eq!(
                        dot_mod2(&z, &s).unwrap(),
                        0,
                        "{kind:?} n={n}: outcome {z} has weight {}",
                        amp.norm_sqr()
                    );
                }
            }
        }
    }
}

#[test]
fn simon_two_qubit_support_is_zero_and_three() {
    // n=2 complex: the only register-1 outcomes with support are 00 and 11.
    let circuit = build_simon_circuit(2, OracleKind::Complex).unwrap();
    let state = common::statevector_of(&circuit);
    let mut support: Vec<u64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, amp)| amp.norm_sqr() > 1e-20)
        .map(|(i, _)| register1_of_index(i, 2))
        .collect();
    support.sort_unstable();
    support.dedup();
    assert_eq!(support, vec![0b00, 0b11]);
}

#[test]
fn recovery_round_trip_matches_brute_force() {
    // Ideal Simon shots accumulated into a basis solve to the same secret
    // the classical enumeration finds, for both oracles at n <= 8.
    for n in 2..=8usize {
        for kind in KINDS {
            let circuit = build_simon_circuit(n, kind).unwrap();
            let records = run_ideal(&circuit, 40 * n, 1000 + n as u64).unwrap();
            let mut basis = Basis::new(n);
            for r in &records {
                if basis.rank() == n - 1 {
                    break;
                }
                if !r.register1.is_zero() {
                    basis.add_if_independent(&r.register1).unwrap();
                }
            }
            assert_eq!(basis.rank(), n - 1, "{kind:?} n={n} rank short");
            let solved = solve_secret(&basis).unwrap();
            let brute = brute_force_secret(
                |x| classical_oracle_eval_with_secret(kind, &Bitstring::ones(n), x).unwrap(),
                n,
            )
            .unwrap();
            assert_eq!(solved, brute, "{kind:?} n={n}");
            assert_eq!(solved, Bitstring::ones(n), "{kind:?} n={n}");
        }
    }
}

#[test]
fn ideal_rank_never_exceeds_n_minus_one() {
    // Orthogonal rows span at most an (n-1)-dimensional space; feeding
    // every ideal shot in can never reach full rank.
    let n = 6;
    let circuit = build_simon_circuit(n, OracleKind::Complex).unwrap();
    let records = run_ideal(&circuit, 2000, 77).unwrap();
    let mut basis = Basis::new(n);
    for r in &records {
        if !r.register1.is_zero() {
            basis.add_if_independent(&r.register1).unwrap();
        }
    }
    assert_eq!(basis.rank(), n - 1);
}

fn arbitrary_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..6, proptest::collection::vec((0u8..4, 0usize..1000, 0usize..1000), 0..40)).prop_map(
        |(width, raw_ops)| {
            let mut circuit = Circuit::with_layout(width, width, width / 2).unwrap();
            for (kind, a, b) in raw_ops {
                let a = a % width;
                let b = (a + 1 + b % (width - 1)) % width;
                match kind {
                    0 => circuit.h(a).unwrap(),
                    1 => circuit.x(a).unwrap(),
                    2 => circuit.cnot(a, b).unwrap(),
                    _ => circuit.swap(a, b).unwrap(),
                }
            }
            for q in 0..width {
                circuit.measure(q, q).unwrap();
            }
            circuit
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qasm_emission_round_trips(circuit in arbitrary_circuit()) {
        let text = emit_qasm(&circuit);
        let reparsed = parse_qasm(&text).unwrap();
        prop_assert_eq!(emit_qasm(&reparsed), text);
    }
}

#[test]
fn frame_and_trajectory_agree_on_routed_circuits() {
    // Distribution-level agreement of the two noisy engines on a circuit
    // with router-inserted SWAPs and a boosted multiplier.
    use qsimon::bench::algorithmic_error_rate;
    use qsimon::sim::{run_noisy, run_noisy_fast, NoiseModel};
    use qsimon::transpile::{place, route, CouplingMap, PlacementStrategy};

    let n = 4;
    let circuit = build_simon_circuit(n, OracleKind::Complex).unwrap();
    let map = CouplingMap::preset("eagle127").unwrap();
    let layout = place(&circuit, &map, PlacementStrategy::GreedySubgraph, 0).unwrap();
    let routed = route(&circuit, &map, &layout).unwrap();
    let (compact, _) = routed.compact();
    let model = NoiseModel::new(0.002, 0.05, 0.01)
        .unwrap()
        .with_swap_multiplier(3.0)
        .unwrap();
    let shots = 40_000;
    let secret = Bitstring::ones(n);
    let slow = algorithmic_error_rate(&run_noisy(&compact, &model, shots, 5).unwrap(), &secret).unwrap();
    let fast =
        algorithmic_error_rate(&run_noisy_fast(&compact, &model, shots, 6).unwrap(), &secret).unwrap();
    let sigma = (2.0 * 0.25 / shots as f64).sqrt();
    assert!(
        (slow - fast).abs() < 4.0 * sigma,
        "trajectory {slow} vs frame {fast}"
    );
}

#[test]
fn distance_two_cnot_routing_is_unitarily_equivalent() {
    // CNOT(0,2) on the 3-qubit line: one inserted SWAP, and the routed
    // circuit reproduces the original statevector under the tracked
    // permutation.
    use qsimon::transpile::{route, CouplingMap, Layout};
    let mut circuit = Circuit::with_layout(3, 0, 0).unwrap();
    circuit.h(0).unwrap();
    circuit.h(2).unwrap();
    circuit.cnot(0, 2).unwrap();
    let map = CouplingMap::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let routed = route(&circuit, &map, &Layout::identity(3)).unwrap();
    assert_eq!(routed.inserted_swap_count, 1);
    common::assert_routed_equivalent(&circuit, &routed, 1e-10);
}

#[test]
fn routed_simon_preserves_ideal_statistics() {
    // Routing must not change outcome statistics: the routed circuit's
    // ideal error rate stays exactly zero.
    use qsimon::bench::algorithmic_error_rate;
    use qsimon::transpile::{place, route, CouplingMap, PlacementStrategy};

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [3usize, 5, 7] {
        let circuit = build_simon_circuit(n, OracleKind::Complex).unwrap();
        let map = CouplingMap::preset("eagle127").unwrap();
        let layout =
            place(&circuit, &map, PlacementStrategy::GreedySubgraph, rng.random()).unwrap();
        let routed = route(&circuit, &map, &layout).unwrap();
        let (compact, _) = routed.compact();
        let records = run_ideal(&compact, 2000, 99).unwrap();
        let rate = algorithmic_error_rate(&records, &Bitstring::ones(n)).unwrap();
        assert_eq!(rate, 0.0, "n={n}");
    }
}
