//! Generator for the 127-qubit Eagle heavy-hex lattice.
//!
//! The lattice is seven horizontal rows of qubits joined by four-qubit
//! bridge columns. Bridge attachment columns alternate between
//! {0, 4, 8, 12} and {2, 6, 10, 14} from one inter-row gap to the next,
//! which is what keeps every vertex at degree three or less.

struct Row {
    base: usize,
    col_lo: usize,
    col_hi: usize,
}

impl Row {
    fn qubit_at(&self, col: usize) -> usize {
        debug_assert!((self.col_lo..=self.col_hi).contains(&col));
        self.base + col - self.col_lo
    }
}

/// Qubit count and edge list of the 127-qubit heavy-hex lattice.
pub(crate) fn eagle127_edges() -> (usize, Vec<(usize, usize)>) {
    let rows = [
        Row { base: 0, col_lo: 0, col_hi: 13 },
        Row { base: 18, col_lo: 0, col_hi: 14 },
        Row { base: 37, col_lo: 0, col_hi: 14 },
        Row { base: 56, col_lo: 0, col_hi: 14 },
        Row { base: 75, col_lo: 0, col_hi: 14 },
        Row { base: 94, col_lo: 0, col_hi: 14 },
        Row { base: 113, col_lo: 1, col_hi: 14 },
    ];
    let bridges: [(usize, [usize; 4]); 6] = [
        (14, [0, 4, 8, 12]),
        (33, [2, 6, 10, 14]),
        (52, [0, 4, 8, 12]),
        (71, [2, 6, 10, 14]),
        (90, [0, 4, 8, 12]),
        (109, [2, 6, 10, 14]),
    ];

    let mut edges = Vec::with_capacity(144);
    for row in &rows {
        for col in row.col_lo..row.col_hi {
            edges.push((row.qubit_at(col), row.qubit_at(col + 1)));
        }
    }
    for (gap, &(bridge_base, cols)) in bridges.iter().enumerate() {
        for (offset, &col) in cols.iter().enumerate() {
            let bridge = bridge_base + offset;
            edges.push((rows[gap].qubit_at(col), bridge));
            edges.push((bridge, rows[gap + 1].qubit_at(col)));
        }
    }
    (127, edges)
}
