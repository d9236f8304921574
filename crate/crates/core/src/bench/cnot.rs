//! CNOT failure rate as a function of qubit separation.

use serde::Serialize;

use super::BenchError;
use crate::circuit::Circuit;
use crate::sim::{run_noisy, NoiseModel, SimError};
use crate::transpile::{route, CouplingMap, Layout, TranspileError};

/// One target's result: observed Monte Carlo failure fraction next to the
/// first-order model prediction `1 - (1 - p2*m)^(3(d-1)+1)` (d-1 SWAPs of
/// three CNOTs each, plus the CNOT itself).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CnotDistanceRow {
    pub target: usize,
    pub distance: usize,
    pub shots: usize,
    pub observed_failure: f64,
    pub predicted_failure: f64,
}

/// For each target, prepares |1> on the control, routes a CNOT onto the
/// map, runs it under the noise model, and reports the fraction of shots
/// that failed to return |11>.
pub fn cnot_distance_experiment(
    map: &CouplingMap,
    model: &NoiseModel,
    control: usize,
    targets: &[usize],
    shots: usize,
    seed: u64,
) -> Result<Vec<CnotDistanceRow>, BenchError> {
    if shots == 0 {
        return Err(BenchError::Config("shots must be >= 1".to_string()));
    }
    let transpile_err = |source: TranspileError| BenchError::Transpile {
        n: 2,
        repetition: None,
        source,
    };
    let sim_err = |source: SimError| BenchError::Sim {
        n: 2,
        repetition: None,
        source,
    };
    let mut rows = Vec::with_capacity(targets.len());
    for (job, &target) in targets.iter().enumerate() {
        if target == control {
            return Err(BenchError::Config(format!(
                "target {target} coincides with the control"
            )));
        }
        let distance = map
            .shortest_path_distance(control, target)
            .map_err(transpile_err)?
            .ok_or(TranspileError::Unreachable { a: control, b: target })
            .map_err(transpile_err)?;

        let mut circuit = Circuit::with_layout(2, 2, 1).expect("split 1 of 2");
        circuit.x(0).expect("line 0");
        circuit.cnot(0, 1).expect("distinct lines");
        circuit.measure(0, 0).expect("clbit 0");
        circuit.measure(1, 1).expect("clbit 1");

        let layout = Layout::new(vec![control, target], map).map_err(transpile_err)?;
        let routed = route(&circuit, map, &layout).map_err(transpile_err)?;
        debug_assert_eq!(routed.inserted_swap_count, distance - 1);
        let (compact, _) = routed.compact();

        let records = run_noisy(&compact, model, shots, super::derive_seed(seed, &[job as u64]))
            .map_err(sim_err)?;
        let failures = records
            .iter()
            .filter(|r| !(r.register1.value() == 1 && r.register2.value() == 1))
            .count();

        let draws = 3 * (distance - 1) + 1;
        let q = model.p2() * model.swap_error_multiplier();
        rows.push(CnotDistanceRow {
            target,
            distance,
            shots,
            observed_failure: failures as f64 / shots as f64,
            predicted_failure: 1.0 - (1.0 - q).powi(draws as i32),
        });
    }
    Ok(rows)
}
