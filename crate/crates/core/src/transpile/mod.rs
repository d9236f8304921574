//! Placement and SWAP routing of circuits onto device coupling maps.

mod heavy_hex;
mod route;

pub use route::{layout_report, route, validate_routed, LayoutReport, RoutedCircuit, RoutingViolation};

use std::collections::VecDeque;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::circuit::Circuit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranspileError {
    #[error("coupling map must have at least one qubit")]
    EmptyMap,
    #[error("edge {index} is a self-loop on qubit {qubit}")]
    SelfLoop { index: usize, qubit: usize },
    #[error("edge {index} ({a}, {b}) duplicates an earlier edge")]
    DuplicateEdge { index: usize, a: usize, b: usize },
    #[error("edge {index} references qubit {qubit}, but the map has {num_qubits} qubits")]
    EdgeOutOfRange {
        index: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit map")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("unknown coupling-map preset {0:?}")]
    UnknownPreset(String),
    #[error("circuit width {width} exceeds the {num_qubits}-qubit map")]
    CircuitTooWide { width: usize, num_qubits: usize },
    #[error("layout maps {got} logical qubits, circuit has {expected}")]
    LayoutWidthMismatch { got: usize, expected: usize },
    #[error("layout is not injective: physical qubit {0} is used twice")]
    LayoutNotInjective(usize),
    #[error("physical qubits {a} and {b} are not connected; cannot route between them")]
    Unreachable { a: usize, b: usize },
    #[error("coupling-map document error: {0}")]
    MapFile(String),
}

/// Undirected connectivity graph over physical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct MapDocument {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
}

impl CouplingMap {
    /// Validates and normalizes an edge list. Self-loops, duplicates
    /// (in either orientation), and out-of-range indices are rejected with
    /// the offending edge position.
    pub fn from_edges(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self, TranspileError> {
        if num_qubits == 0 {
            return Err(TranspileError::EmptyMap);
        }
        let mut seen = std::collections::HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, &(a, b)) in edges.iter().enumerate() {
            for qubit in [a, b] {
                if qubit >= num_qubits {
                    return Err(TranspileError::EdgeOutOfRange {
                        index,
                        qubit,
                        num_qubits,
                    });
                }
            }
            if a == b {
                return Err(TranspileError::SelfLoop { index, qubit: a });
            }
            let edge = (a.min(b), a.max(b));
            if !seen.insert(edge) {
                return Err(TranspileError::DuplicateEdge { index, a, b });
            }
            normalized.push(edge);
        }
        normalized.sort_unstable();
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(CouplingMap {
            num_qubits,
            edges: normalized,
            adjacency,
        })
    }

    /// Parses the JSON document `{"num_qubits": N, "edges": [[a, b], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, TranspileError> {
        let doc: MapDocument =
            serde_json::from_str(text).map_err(|e| TranspileError::MapFile(e.to_string()))?;
        CouplingMap::from_edges(doc.num_qubits, &doc.edges)
    }

    pub fn load(path: &Path) -> Result<Self, TranspileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TranspileError::MapFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Complete graph on `k` physical qubits, as on trapped-ion hardware.
    pub fn all_to_all(k: usize) -> Result<Self, TranspileError> {
        if k == 0 {
            return Err(TranspileError::EmptyMap);
        }
        let mut edges = Vec::with_capacity(k * (k - 1) / 2);
        for a in 0..k {
            for b in a + 1..k {
                edges.push((a, b));
            }
        }
        CouplingMap::from_edges(k, &edges)
    }

    /// Named topology presets; currently the 127-qubit heavy-hex lattice
    /// of the Eagle chip family (`"eagle127"`).
    pub fn preset(name: &str) -> Result<Self, TranspileError> {
        match name.to_ascii_lowercase().as_str() {
            "eagle127" => {
                let (n, edges) = heavy_hex::eagle127_edges();
                CouplingMap::from_edges(n, &edges)
            }
            other => Err(TranspileError::UnknownPreset(other.to_string())),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors in ascending index order; the order is load-bearing for
    /// deterministic path tie-breaking.
    pub fn neighbors(&self, qubit: usize) -> &[usize] {
        &self.adjacency[qubit]
    }

    pub fn degree(&self, qubit: usize) -> usize {
        self.adjacency[qubit].len()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency
            .get(a)
            .is_some_and(|list| list.binary_search(&b).is_ok())
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), TranspileError> {
        if qubit >= self.num_qubits {
            return Err(TranspileError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Unweighted BFS distances from a source; `None` marks unreachable
    /// vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_qubits];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Hop count of a shortest path; 0 iff `a == b`, `None` if the pair is
    /// disconnected.
    pub fn shortest_path_distance(&self, a: usize, b: usize) -> Result<Option<usize>, TranspileError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Ok(Some(0));
        }
        Ok(self.distances_from(a)[b])
    }

    /// A shortest path from `a` to `b` inclusive. BFS expands neighbors in
    /// ascending order and keeps the first parent, so equal-length
    /// alternatives resolve to the lowest-index route.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Option<Vec<usize>>, TranspileError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Ok(Some(vec![a]));
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.num_qubits];
        parent[a] = Some(a);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    if w == b {
                        let mut path = vec![b];
                        let mut node = b;
                        while node != a {
                            node = parent[node].unwrap();
                            path.push(node);
                        }
                        path.reverse();
                        return Ok(Some(path));
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_some())
    }
}

/// Logical-to-physical qubit assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    logical_to_physical: Vec<usize>,
}

impl Layout {
    pub fn new(logical_to_physical: Vec<usize>, map: &CouplingMap) -> Result<Self, TranspileError> {
        let mut used = vec![false; map.num_qubits()];
        for &p in &logical_to_physical {
            map.check_qubit(p)?;
            if used[p] {
                return Err(TranspileError::LayoutNotInjective(p));
            }
            used[p] = true;
        }
        Ok(Layout { logical_to_physical })
    }

    pub fn identity(width: usize) -> Self {
        Layout {
            logical_to_physical: (0..width).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.logical_to_physical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logical_to_physical.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.logical_to_physical[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.logical_to_physical
    }
}

/// How initial qubit positions are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlacementStrategy {
    /// Logical line i on physical qubit i.
    Trivial,
    /// Grows a connected region around a central vertex, maximizing the
    /// number of interacting pairs that land on adjacent physical qubits.
    GreedySubgraph,
}

impl std::str::FromStr for PlacementStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "trivial" => Ok(PlacementStrategy::Trivial),
            "greedy" | "greedy-subgraph" => Ok(PlacementStrategy::GreedySubgraph),
            other => Err(format!("unknown placement strategy {other:?}")),
        }
    }
}

/// Chooses an initial layout. Deterministic for a fixed seed: the seed only
/// feeds tie-breaking among equally scored candidates.
pub fn place(
    circuit: &Circuit,
    map: &CouplingMap,
    strategy: PlacementStrategy,
    seed: u64,
) -> Result<Layout, TranspileError> {
    let width = circuit.width();
    if width > map.num_qubits() {
        return Err(TranspileError::CircuitTooWide {
            width,
            num_qubits: map.num_qubits(),
        });
    }
    match strategy {
        PlacementStrategy::Trivial => Ok(Layout::identity(width)),
        PlacementStrategy::GreedySubgraph => greedy_subgraph(circuit, map, seed),
    }
}

/// Interaction weight matrix of a circuit: counts of two-qubit gates per
/// logical pair.
fn interaction_weights(circuit: &Circuit) -> Vec<Vec<usize>> {
    let mut w = vec![vec![0usize; circuit.width()]; circuit.width()];
    for op in circuit.ops() {
        if let (a, Some(b)) = op.qubits() {
            if op.is_two_qubit() {
                w[a][b] += 1;
                w[b][a] += 1;
            }
        }
    }
    w
}

fn greedy_subgraph(
    circuit: &Circuit,
    map: &CouplingMap,
    seed: u64,
) -> Result<Layout, TranspileError> {
    let width = circuit.width();
    let weights = interaction_weights(circuit);
    let totals: Vec<usize> = weights.iter().map(|row| row.iter().sum()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick_tied = |candidates: Vec<usize>| -> usize {
        if candidates.len() == 1 {
            candidates[0]
        } else {
            candidates[rng.random_range(0..candidates.len())]
        }
    };

    // Most central among the highest-degree vertices: keeps the region
    // compact so routed paths stay short.
    let start_physical = {
        let max_degree = (0..map.num_qubits()).map(|q| map.degree(q)).max().unwrap();
        let mut best: Vec<usize> = Vec::new();
        let mut best_spread = usize::MAX;
        for q in (0..map.num_qubits()).filter(|&q| map.degree(q) == max_degree) {
            let spread: usize = map
                .distances_from(q)
                .iter()
                .map(|d| d.unwrap_or(map.num_qubits()))
                .sum();
            if spread < best_spread {
                best_spread = spread;
                best = vec![q];
            } else if spread == best_spread {
                best.push(q);
            }
        }
        pick_tied(best)
    };

    let mut assignment: Vec<Option<usize>> = vec![None; width];
    let mut occupied = vec![false; map.num_qubits()];
    let mut placed: Vec<usize> = Vec::new();
    let mut partner_distances: Vec<Option<Vec<Option<usize>>>> = vec![None; width];

    let first_logical = {
        let max_total = totals.iter().copied().max().unwrap_or(0);
        (0..width).find(|&l| totals[l] == max_total).unwrap_or(0)
    };
    assignment[first_logical] = Some(start_physical);
    occupied[start_physical] = true;
    placed.push(first_logical);

    while placed.len() < width {
        // Next logical qubit: heaviest interaction with the placed set.
        let next_logical = {
            let mut best: Vec<usize> = Vec::new();
            let mut best_key = (0usize, 0usize);
            for l in (0..width).filter(|&l| assignment[l].is_none()) {
                let to_placed: usize = placed.iter().map(|&p| weights[l][p]).sum();
                let key = (to_placed, totals[l]);
                if best.is_empty() || key > best_key {
                    best_key = key;
                    best = vec![l];
                } else if key == best_key {
                    best.push(l);
                }
            }
            pick_tied(best)
        };

        let partners: Vec<usize> = placed
            .iter()
            .copied()
            .filter(|&p| weights[next_logical][p] > 0)
            .collect();
        for &p in &partners {
            let phys = assignment[p].unwrap();
            if partner_distances[p].is_none() {
                partner_distances[p] = Some(map.distances_from(phys));
            }
        }

        // Score free vertices: adjacency weight first, then total weighted
        // distance to the placed partners (compactness), then distance to
        // the start vertex.
        let start_dist = map.distances_from(start_physical);
        let mut best: Vec<usize> = Vec::new();
        let mut best_key: Option<(isize, isize, isize)> = None;
        for candidate in (0..map.num_qubits()).filter(|&q| !occupied[q]) {
            let mut adjacency_weight = 0isize;
            let mut weighted_distance = 0isize;
            let mut reachable = true;
            for &p in &partners {
                let dists = partner_distances[p].as_ref().unwrap();
                match dists[candidate] {
                    Some(d) => {
                        if d == 1 {
                            adjacency_weight += weights[next_logical][p] as isize;
                        }
                        weighted_distance += (weights[next_logical][p] * d) as isize;
                    }
                    None => {
                        reachable = false;
                        break;
                    }
                }
            }
            if !reachable && !partners.is_empty() {
                continue;
            }
            let to_start = start_dist[candidate].unwrap_or(map.num_qubits()) as isize;
            let key = (adjacency_weight, -weighted_distance, -to_start);
            if best_key.is_none() || Some(key) > best_key {
                best_key = Some(key);
                best = vec![candidate];
            } else if Some(key) == best_key {
                best.push(candidate);
            }
        }
        // Every vertex may be unreachable from the partners only on a
        // disconnected map; fall back to any free vertex.
        if best.is_empty() {
            best = (0..map.num_qubits()).filter(|&q| !occupied[q]).collect();
        }
        let chosen = pick_tied(best);
        assignment[next_logical] = Some(chosen);
        occupied[chosen] = true;
        placed.push(next_logical);
    }

    let logical_to_physical: Vec<usize> = assignment.into_iter().map(|a| a.unwrap()).collect();
    Layout::new(logical_to_physical, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_simon_circuit;
    use crate::circuit::OracleKind;

    fn line_map(k: usize) -> CouplingMap {
        let edges: Vec<(usize, usize)> = (0..k - 1).map(|i| (i, i + 1)).collect();
        CouplingMap::from_edges(k, &edges).unwrap()
    }

    #[test]
    fn from_json_line_document() {
        let map = CouplingMap::from_json(r#"{"num_qubits": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(map.num_qubits(), 3);
        assert_eq!(map.num_edges(), 2);
        assert!(map.contains_edge(1, 0));
        assert!(!map.contains_edge(0, 2));
    }

    #[test]
    fn edge_validation_reports_location() {
        assert_eq!(
            CouplingMap::from_edges(3, &[(0, 1), (0, 0)]).unwrap_err(),
            TranspileError::SelfLoop { index: 1, qubit: 0 }
        );
        assert_eq!(
            CouplingMap::from_edges(3, &[(0, 1), (1, 0)]).unwrap_err(),
            TranspileError::DuplicateEdge { index: 1, a: 1, b: 0 }
        );
        assert_eq!(
            CouplingMap::from_edges(3, &[(0, 3)]).unwrap_err(),
            TranspileError::EdgeOutOfRange { index: 0, qubit: 3, num_qubits: 3 }
        );
    }

    #[test]
    fn all_to_all_edge_counts() {
        assert_eq!(CouplingMap::all_to_all(4).unwrap().num_edges(), 6);
        assert_eq!(CouplingMap::all_to_all(1).unwrap().num_edges(), 0);
        // The largest trapped-ion device in the comparison set.
        assert_eq!(CouplingMap::all_to_all(36).unwrap().num_edges(), 630);
    }

    #[test]
    fn eagle_preset_shape() {
        let map = CouplingMap::preset("eagle127").unwrap();
        assert_eq!(map.num_qubits(), 127);
        assert_eq!(map.num_edges(), 144);
        assert!(map.is_connected());
        assert!((0..127).all(|q| map.degree(q) <= 3));
        assert!(matches!(
            CouplingMap::preset("falcon27"),
            Err(TranspileError::UnknownPreset(_))
        ));
    }

    #[test]
    fn shortest_path_distance_examples() {
        let map = line_map(3);
        assert_eq!(map.shortest_path_distance(0, 2).unwrap(), Some(2));
        assert_eq!(map.shortest_path_distance(1, 1).unwrap(), Some(0));
        let full = CouplingMap::all_to_all(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let expected = if a == b { 0 } else { 1 };
                assert_eq!(full.shortest_path_distance(a, b).unwrap(), Some(expected));
            }
        }
        let disconnected = CouplingMap::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(disconnected.shortest_path_distance(0, 3).unwrap(), None);
        assert!(disconnected.shortest_path(1, 2).unwrap().is_none());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn distances_match_floyd_warshall() {
        // Independent all-pairs check against the BFS implementation.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let k = rng.random_range(2..=20usize);
            let mut edges = Vec::new();
            for a in 0..k {
                for b in a + 1..k {
                    if rng.random_bool(0.25) {
                        edges.push((a, b));
                    }
                }
            }
            let map = match CouplingMap::from_edges(k, &edges) {
                Ok(m) => m,
                Err(_) => continue,
            };
            const INF: usize = usize::MAX / 4;
            let mut dist = vec![vec![INF; k]; k];
            for v in 0..k {
                dist[v][v] = 0;
            }
            for &(a, b) in map.edges() {
                dist[a][b] = 1;
                dist[b][a] = 1;
            }
            for mid in 0..k {
                for a in 0..k {
                    for b in 0..k {
                        let via = dist[a][mid] + dist[mid][b];
                        if via < dist[a][b] {
                            dist[a][b] = via;
                        }
                    }
                }
            }
            for a in 0..k {
                for b in 0..k {
                    let expected = if dist[a][b] >= INF { None } else { Some(dist[a][b]) };
                    assert_eq!(map.shortest_path_distance(a, b).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn trivial_placement_is_identity() {
        let circuit = build_simon_circuit(2, OracleKind::Simple).unwrap();
        let map = CouplingMap::all_to_all(4).unwrap();
        let layout = place(&circuit, &map, PlacementStrategy::Trivial, 0).unwrap();
        assert_eq!(layout.as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn placement_rejects_wide_circuits() {
        let circuit = build_simon_circuit(3, OracleKind::Simple).unwrap();
        let map = CouplingMap::all_to_all(4).unwrap();
        assert_eq!(
            place(&circuit, &map, PlacementStrategy::Trivial, 0).unwrap_err(),
            TranspileError::CircuitTooWide { width: 6, num_qubits: 4 }
        );
    }

    #[test]
    fn greedy_beats_or_ties_every_layout_on_a_line() {
        // n=2 Simon on the 4-qubit line: exhaust all 4! layouts to find the
        // best achievable adjacent-pair count, then check greedy reaches it
        // and improves on at least two adjacent interacting pairs.
        let circuit = build_simon_circuit(2, OracleKind::Simple).unwrap();
        let map = line_map(4);
        let weights = interaction_weights(&circuit);
        let pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .filter(|&(a, b)| weights[a][b] > 0)
            .collect();
        let adjacent_count = |layout: &[usize]| {
            pairs
                .iter()
                .filter(|&&(a, b)| map.contains_edge(layout[a], layout[b]))
                .count()
        };

        let mut best = 0;
        let perm = [0usize, 1, 2, 3];
        let mut perms = vec![perm.to_vec()];
        // Heap's algorithm would be overkill; enumerate recursively.
        fn extend(acc: &mut Vec<Vec<usize>>, current: Vec<usize>, remaining: Vec<usize>) {
            if remaining.is_empty() {
                acc.push(current);
                return;
            }
            for (i, &r) in remaining.iter().enumerate() {
                let mut next = current.clone();
                next.push(r);
                let mut rest = remaining.clone();
                rest.remove(i);
                extend(acc, next, rest);
            }
        }
        perms.clear();
        extend(&mut perms, Vec::new(), (0..4).collect());
        for p in &perms {
            best = best.max(adjacent_count(p));
        }

        let greedy = place(&circuit, &map, PlacementStrategy::GreedySubgraph, 7).unwrap();
        let greedy_count = adjacent_count(greedy.as_slice());
        assert_eq!(greedy_count, best, "greedy layout {:?}", greedy.as_slice());
        assert!(greedy_count >= 2);
        let trivial_count = adjacent_count(&[0, 1, 2, 3]);
        assert!(greedy_count >= trivial_count);
    }

    #[test]
    fn placement_is_deterministic_per_seed() {
        let circuit = build_simon_circuit(4, OracleKind::Complex).unwrap();
        let map = CouplingMap::preset("eagle127").unwrap();
        let a = place(&circuit, &map, PlacementStrategy::GreedySubgraph, 5).unwrap();
        let b = place(&circuit, &map, PlacementStrategy::GreedySubgraph, 5).unwrap();
        assert_eq!(a, b);
    }
}
