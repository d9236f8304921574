//! Boolean linear algebra for secret recovery.
//!
//! Rows are bit-packed into single words (the harness never needs more
//! than 64 columns), so elimination steps are word-wide XORs.

use thiserror::Error;

use crate::circuit::Bitstring;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("basis rank {rank} is insufficient to solve for an n = {n} secret (need n - 1)")]
    InsufficientRank { rank: usize, n: usize },
    #[error("basis rank {rank} overdetermines an n = {n} secret: a non-orthogonal row was accepted")]
    Overdetermined { rank: usize, n: usize },
    #[error("function has no period: it is one-to-one over {0} bits")]
    NoPeriod(usize),
    #[error("enumeration over 2^{0} inputs exceeds the n <= 16 brute-force bound")]
    TooWide(usize),
}

/// Dot product modulo 2 of two equal-length bitstrings.
pub fn dot_mod2(a: &Bitstring, b: &Bitstring) -> Result<u8, Gf2Error> {
    if a.len() != b.len() {
        return Err(Gf2Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    Ok(((a.value() & b.value()).count_ones() & 1) as u8)
}

/// A plain collection of bit-packed rows of fixed width.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<u64>,
    n: usize,
}

impl Gf2Matrix {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "row width {n} exceeds 64");
        Gf2Matrix { rows: Vec::new(), n }
    }

    pub fn push(&mut self, row: &Bitstring) -> Result<(), Gf2Error> {
        if row.len() != self.n {
            return Err(Gf2Error::LengthMismatch { a: row.len(), b: self.n });
        }
        self.rows.push(row.value());
        Ok(())
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = Bitstring> + '_ {
        self.rows.iter().map(|&r| Bitstring::from_index(r, self.n))
    }
}

/// Rows in reduced row-echelon form over GF(2), with strictly increasing
/// pivot columns (column 0 is the leftmost bit).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Basis {
    rows: Vec<u64>,
    pivots: Vec<usize>,
    n: usize,
}

impl Basis {
    pub fn new(n: usize) -> Self {
        assert!(n > 0 && n <= 64, "basis width {n} out of range");
        Basis {
            rows: Vec::new(),
            pivots: Vec::new(),
            n,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = Bitstring> + '_ {
        self.rows.iter().map(|&r| Bitstring::from_index(r, self.n))
    }

    /// Column index (textual, leftmost = 0) of a packed row's leading bit.
    fn leading_column(&self, row: u64) -> usize {
        self.n - 1 - (63 - row.leading_zeros() as usize)
    }

    /// Incrementally eliminates `v` against the accumulated rows and keeps
    /// it if anything survives. Returns whether the vector was accepted;
    /// all-zero and dependent vectors are rejected (they carry no new
    /// information).
    pub fn add_if_independent(&mut self, v: &Bitstring) -> Result<bool, Gf2Error> {
        if v.len() != self.n {
            return Err(Gf2Error::LengthMismatch { a: v.len(), b: self.n });
        }
        let mut row = v.value();
        for (i, &pivot) in self.pivots.iter().enumerate() {
            let mask = 1u64 << (self.n - 1 - pivot);
            if row & mask != 0 {
                row ^= self.rows[i];
            }
        }
        if row == 0 {
            return Ok(false);
        }
        let pivot = self.leading_column(row);
        // Back-substitute so existing rows stay fully reduced.
        let mask = 1u64 << (self.n - 1 - pivot);
        for existing in &mut self.rows {
            if *existing & mask != 0 {
                *existing ^= row;
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, row);
        Ok(true)
    }
}

/// Solves for the secret once the basis has rank `n - 1`: the nullspace is
/// then one-dimensional and its unique nonzero vector is the secret.
pub fn solve_secret(basis: &Basis) -> Result<Bitstring, Gf2Error> {
    let n = basis.n;
    let rank = basis.rank();
    if rank + 1 < n {
        return Err(Gf2Error::InsufficientRank { rank, n });
    }
    if rank >= n {
        return Err(Gf2Error::Overdetermined { rank, n });
    }
    let free = (0..n)
        .find(|c| !basis.pivots.contains(c))
        .expect("rank n-1 leaves exactly one free column");
    let mut secret = Bitstring::zeros(n);
    secret.set(free, true);
    let free_mask = 1u64 << (n - 1 - free);
    for (row, &pivot) in basis.rows.iter().zip(&basis.pivots) {
        // Reduced rows read: x_pivot + row_free * x_free = 0.
        if row & free_mask != 0 {
            secret.set(pivot, true);
        }
    }
    debug_assert!(basis
        .rows()
        .all(|row| dot_mod2(&row, &secret) == Ok(0)));
    Ok(secret)
}

/// Independent reference: enumerates all inputs of a classical function,
/// finds a colliding pair, and returns their XOR. Limited to `n <= 16`.
pub fn brute_force_secret<F>(f: F, n: usize) -> Result<Bitstring, Gf2Error>
where
    F: Fn(&Bitstring) -> Bitstring,
{
    if n > 16 {
        return Err(Gf2Error::TooWide(n));
    }
    let mut seen: Vec<Option<u64>> = vec![None; 1 << n];
    for v in 0u64..1 << n {
        let x = Bitstring::from_index(v, n);
        let fx = f(&x).value() as usize;
        match seen[fx] {
            Some(prev) => {
                return Ok(Bitstring::from_index(prev ^ v, n));
            }
            None => seen[fx] = Some(v),
        }
    }
    Err(Gf2Error::NoPeriod(n))
}
