//! SWAP-insertion routing and routing validation.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{CouplingMap, Layout, TranspileError};
use crate::circuit::{Circuit, GateOp};

/// A circuit rewritten over physical qubit indices, with every two-qubit
/// gate on a coupling-map edge.
///
/// Classical bit targets are untouched by routing: a measurement of logical
/// line `q` becomes a measurement of `q`'s final physical position into the
/// same classical bit, so shot records need no output permutation fixup.
#[derive(Clone, Debug)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    /// Logical-to-physical assignment after all inserted SWAPs.
    pub final_layout: Layout,
    pub inserted_swap_count: usize,
}

impl RoutedCircuit {
    /// Re-indexes the routed circuit onto its active physical qubits only,
    /// so simulation pays for the qubits the circuit touches rather than
    /// the whole device. Returns the compact circuit and the sorted list of
    /// active physical qubits (compact line i = returned\[i\]).
    pub fn compact(&self) -> (Circuit, Vec<usize>) {
        let mut active: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.circuit.width()];
        for op in self.circuit.ops() {
            let (a, b) = op.qubits();
            for q in [Some(a), b].into_iter().flatten() {
                if !seen[q] {
                    seen[q] = true;
                    active.push(q);
                }
            }
        }
        active.sort_unstable();
        let mut dense = vec![usize::MAX; self.circuit.width()];
        for (i, &q) in active.iter().enumerate() {
            dense[q] = i;
        }
        let mut compacted = Circuit::with_layout(
            active.len(),
            self.circuit.num_clbits(),
            self.circuit.register_split(),
        )
        .expect("register split unchanged");
        for op in self.circuit.ops() {
            let remapped = match *op {
                GateOp::H { qubit } => GateOp::H { qubit: dense[qubit] },
                GateOp::X { qubit } => GateOp::X { qubit: dense[qubit] },
                GateOp::Cnot { control, target } => GateOp::Cnot {
                    control: dense[control],
                    target: dense[target],
                },
                GateOp::Swap { a, b, inserted } => GateOp::Swap {
                    a: dense[a],
                    b: dense[b],
                    inserted,
                },
                GateOp::Measure { qubit, clbit } => GateOp::Measure {
                    qubit: dense[qubit],
                    clbit,
                },
            };
            compacted.push(remapped).expect("compaction preserves validity");
        }
        (compacted, active)
    }
}

/// Routes a circuit onto a coupling map from the given initial layout.
///
/// Greedy per-gate strategy with no lookahead: a two-qubit gate on
/// non-adjacent physical qubits first moves its control (first operand)
/// along a shortest path with `d - 1` inserted SWAPs, then fires on the
/// final edge. Layout tracking is updated per SWAP, so the moves persist.
pub fn route(
    circuit: &Circuit,
    map: &CouplingMap,
    layout: &Layout,
) -> Result<RoutedCircuit, TranspileError> {
    if layout.len() != circuit.width() {
        return Err(TranspileError::LayoutWidthMismatch {
            got: layout.len(),
            expected: circuit.width(),
        });
    }
    if circuit.width() > map.num_qubits() {
        return Err(TranspileError::CircuitTooWide {
            width: circuit.width(),
            num_qubits: map.num_qubits(),
        });
    }

    let mut logical_at: Vec<usize> = layout.as_slice().to_vec();
    let mut resident: Vec<Option<usize>> = vec![None; map.num_qubits()];
    for (logical, &physical) in logical_at.iter().enumerate() {
        resident[physical] = Some(logical);
    }

    let mut routed = Circuit::with_layout(
        map.num_qubits(),
        circuit.num_clbits(),
        circuit.register_split(),
    )
    .expect("register split carries over");
    let mut inserted = 0usize;

    let swap_physical = |routed: &mut Circuit,
                             logical_at: &mut Vec<usize>,
                             resident: &mut Vec<Option<usize>>,
                             a: usize,
                             b: usize|
     -> Result<(), TranspileError> {
        routed
            .push(GateOp::Swap { a, b, inserted: true })
            .expect("swap on valid physical lines");
        let (la, lb) = (resident[a], resident[b]);
        if let Some(l) = la {
            logical_at[l] = b;
        }
        if let Some(l) = lb {
            logical_at[l] = a;
        }
        resident.swap(a, b);
        Ok(())
    };

    for op in circuit.ops() {
        match *op {
            GateOp::H { qubit } => routed.h(logical_at[qubit]).expect("valid line"),
            GateOp::X { qubit } => routed.x(logical_at[qubit]).expect("valid line"),
            GateOp::Measure { qubit, clbit } => routed
                .measure(logical_at[qubit], clbit)
                .expect("valid line"),
            GateOp::Cnot { .. } | GateOp::Swap { .. } => {
                let (first, second) = op.qubits();
                let second = second.expect("two-qubit op");
                let mut pa = logical_at[first];
                let pb = logical_at[second];
                if !map.contains_edge(pa, pb) {
                    let path = map
                        .shortest_path(pa, pb)?
                        .ok_or(TranspileError::Unreachable { a: pa, b: pb })?;
                    for hop in 0..path.len().saturating_sub(2) {
                        swap_physical(
                            &mut routed,
                            &mut logical_at,
                            &mut resident,
                            path[hop],
                            path[hop + 1],
                        )?;
                        inserted += 1;
                    }
                    pa = logical_at[first];
                    debug_assert!(map.contains_edge(pa, pb));
                }
                match *op {
                    GateOp::Cnot { .. } => routed.cnot(pa, pb).expect("valid edge"),
                    GateOp::Swap { .. } => routed
                        .push(GateOp::Swap { a: pa, b: pb, inserted: false })
                        .expect("valid edge"),
                    _ => unreachable!(),
                }
            }
        }
    }

    let final_layout = Layout::new(logical_at, map)?;
    Ok(RoutedCircuit {
        circuit: routed,
        initial_layout: layout.clone(),
        final_layout,
        inserted_swap_count: inserted,
    })
}

/// First coupling violation in a circuit, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoutingViolation {
    pub op_index: usize,
    pub a: usize,
    pub b: usize,
}

impl std::fmt::Display for RoutingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "op {} acts on ({}, {}), which is not a coupling-map edge",
            self.op_index, self.a, self.b
        )
    }
}

/// Passes iff every two-qubit op lies on a coupling-map edge. Failure is a
/// value, not an error.
pub fn validate_routed(circuit: &Circuit, map: &CouplingMap) -> Result<(), RoutingViolation> {
    for (op_index, op) in circuit.ops().iter().enumerate() {
        if let (a, Some(b)) = op.qubits() {
            if op.is_two_qubit() && !map.contains_edge(a, b) {
                return Err(RoutingViolation { op_index, a, b });
            }
        }
    }
    Ok(())
}

/// Physical-qubit usage summary of a routed circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutReport {
    /// Physical qubits allocated by the layout or touched by any op.
    pub active: Vec<usize>,
    /// Allocated qubits that no op touches.
    pub idle: Vec<usize>,
    /// Two-qubit interaction partners per touched physical qubit.
    pub partners: BTreeMap<usize, Vec<usize>>,
}

pub fn layout_report(routed: &RoutedCircuit, map: &CouplingMap) -> LayoutReport {
    let mut touched = vec![false; map.num_qubits()];
    let mut partners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for op in routed.circuit.ops() {
        let (a, b) = op.qubits();
        touched[a] = true;
        if let Some(b) = b {
            touched[b] = true;
            if op.is_two_qubit() {
                partners.entry(a).or_default().push(b);
                partners.entry(b).or_default().push(a);
            }
        }
    }
    for list in partners.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut allocated = vec![false; map.num_qubits()];
    for &p in routed.initial_layout.as_slice() {
        allocated[p] = true;
    }
    let active: Vec<usize> = (0..map.num_qubits())
        .filter(|&q| allocated[q] || touched[q])
        .collect();
    let idle: Vec<usize> = (0..map.num_qubits())
        .filter(|&q| allocated[q] && !touched[q])
        .collect();
    LayoutReport {
        active,
        idle,
        partners,
    }
}
