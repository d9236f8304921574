//! Circuit intermediate representation and Simon oracle construction.
//!
//! Bit-ordering convention used everywhere in this crate: bitstrings are
//! written MSB-left, and character `i` of the textual form corresponds to
//! qubit line `i`. A Simon circuit over register size `n` has `2n` lines;
//! register 1 is lines `[0, n)` and register 2 is lines `[n, 2n)`.

mod qasm;

pub use qasm::{emit_qasm, parse_qasm, QasmParseError};

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from circuit construction and classical oracle evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("Simon's problem requires register size n >= 2, got {0}")]
    RegisterTooSmall(usize),
    #[error("qubit index {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("classical bit index {clbit} out of range for {num_clbits} classical bits")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
    #[error("two-qubit gate requires distinct qubits, got {0} twice")]
    DuplicateQubit(usize),
    #[error("classical bit {0} is already the target of an earlier measurement")]
    DuplicateClbit(usize),
    #[error("unitary op at position {0} would follow a measurement; measurement is deferred to the end")]
    UnitaryAfterMeasure(usize),
    #[error("register split {split} exceeds classical bit count {num_clbits}")]
    BadRegisterSplit { split: usize, num_clbits: usize },
    #[error("bitstring length {got} does not match expected length {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("secret string must contain at least one 1 bit")]
    ZeroSecret,
    #[error("bitstring length {0} exceeds the supported maximum of 64")]
    TooLong(usize),
}

/// A fixed-length string of bits, at most 64 long.
///
/// Textual form is MSB-left: `Bitstring::from_str("10")` has bit 0 set and
/// bit 1 clear, and corresponds to qubit line 0 in state one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    bits: u64,
    len: usize,
}

impl Bitstring {
    /// All-zero string of the given length.
    pub fn zeros(len: usize) -> Self {
        assert!(len <= 64, "bitstring length {len} exceeds 64");
        Bitstring { bits: 0, len }
    }

    /// All-one string of the given length.
    pub fn ones(len: usize) -> Self {
        assert!(len <= 64 && len > 0, "bitstring length {len} out of range");
        Bitstring {
            bits: u64::MAX >> (64 - len),
            len,
        }
    }

    /// Builds a string from the low `len` bits of a basis-state index,
    /// MSB-left (bit 0 of the string is the highest of the `len` bits).
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "bitstring length {len} exceeds 64");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Bitstring {
            bits: index & mask,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Bit at textual position `i` (0 = leftmost = qubit line 0).
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.bits >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (self.len - 1 - i);
        if value {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    /// Bitwise XOR; both operands must have the same length.
    pub fn xor(&self, other: &Bitstring) -> Bitstring {
        assert_eq!(self.len, other.len, "xor of unequal-length bitstrings");
        Bitstring {
            bits: self.bits ^ other.bits,
            len: self.len,
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// The packed value, with textual bit 0 as the most significant of the
    /// `len` low bits. Equal to the basis-state index under the crate's
    /// line-0-is-MSB convention.
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Indices of the 1 bits, in textual order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// The substring covering textual positions `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Bitstring {
        assert!(start <= end && end <= self.len, "slice {start}..{end} out of range");
        let len = end - start;
        if len == 0 {
            return Bitstring::zeros(0);
        }
        Bitstring::from_index(self.bits >> (self.len - end), len)
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Bitstring {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > 64 {
            return Err(CircuitError::TooLong(s.len()));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(CircuitError::LengthMismatch {
                        got: s.len(),
                        expected: s.len(),
                    })
                }
            }
        }
        Ok(Bitstring { bits, len: s.len() })
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|_| D::Error::custom(format!("invalid bitstring {s:?}")))
    }
}

/// The two oracle constructions benchmarked against each other: `Complex`
/// maximizes the number of two-qubit gates for a given register size,
/// `Simple` minimizes it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Simple,
    Complex,
}

impl OracleKind {
    pub fn name(&self) -> &'static str {
        match self {
            OracleKind::Simple => "simple",
            OracleKind::Complex => "complex",
        }
    }
}

impl FromStr for OracleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(OracleKind::Simple),
            "complex" => Ok(OracleKind::Complex),
            other => Err(format!("unknown oracle kind {other:?} (expected simple or complex)")),
        }
    }
}

/// A single gate operation on circuit lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateOp {
    H { qubit: usize },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
    /// `inserted` marks SWAPs added by the router; the noise model applies
    /// the swap error multiplier only to those.
    Swap { a: usize, b: usize, inserted: bool },
    Measure { qubit: usize, clbit: usize },
}

impl GateOp {
    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateOp::Measure { .. })
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateOp::Cnot { .. } | GateOp::Swap { .. })
    }

    /// The qubit lines the op acts on.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            GateOp::H { qubit } | GateOp::X { qubit } | GateOp::Measure { qubit, .. } => {
                (qubit, None)
            }
            GateOp::Cnot { control, target } => (control, Some(target)),
            GateOp::Swap { a, b, .. } => (a, Some(b)),
        }
    }
}

/// An ordered list of gate operations over a fixed number of qubit lines.
///
/// Circuits are append-only while being built and treated as immutable
/// afterwards; all simulator and router entry points take `&Circuit`.
/// Measurements, when present, must come after every unitary op.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    width: usize,
    num_clbits: usize,
    register_split: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    /// A circuit with explicit width, classical bit count, and register
    /// split. The split partitions the classical bits into register 1
    /// (`[0, split)`) and register 2 (`[split, num_clbits)`).
    pub fn with_layout(
        width: usize,
        num_clbits: usize,
        register_split: usize,
    ) -> Result<Self, CircuitError> {
        if register_split > num_clbits {
            return Err(CircuitError::BadRegisterSplit {
                split: register_split,
                num_clbits,
            });
        }
        Ok(Circuit {
            width,
            num_clbits,
            register_split,
            ops: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn register_split(&self) -> usize {
        self.register_split
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_two_qubit()).count()
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(|op| !op.is_unitary())
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), CircuitError> {
        if qubit >= self.width {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                width: self.width,
            });
        }
        Ok(())
    }

    /// Appends an op, enforcing the structural invariants: indices in
    /// range, two-qubit gates on distinct lines, measurement deferred.
    pub fn push(&mut self, op: GateOp) -> Result<(), CircuitError> {
        let (q0, q1) = op.qubits();
        self.check_qubit(q0)?;
        if let Some(q1) = q1 {
            self.check_qubit(q1)?;
            if q0 == q1 {
                return Err(CircuitError::DuplicateQubit(q0));
            }
        }
        match op {
            GateOp::Measure { clbit, .. } => {
                if clbit >= self.num_clbits {
                    return Err(CircuitError::ClbitOutOfRange {
                        clbit,
                        num_clbits: self.num_clbits,
                    });
                }
                if self.ops.iter().any(
                    |o| matches!(o, GateOp::Measure { clbit: c, .. } if *c == clbit),
                ) {
                    return Err(CircuitError::DuplicateClbit(clbit));
                }
            }
            _ => {
                if self.has_measurements() {
                    return Err(CircuitError::UnitaryAfterMeasure(self.ops.len()));
                }
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn h(&mut self, qubit: usize) -> Result<(), CircuitError> {
        self.push(GateOp::H { qubit })
    }

    pub fn x(&mut self, qubit: usize) -> Result<(), CircuitError> {
        self.push(GateOp::X { qubit })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<(), CircuitError> {
        self.push(GateOp::Cnot { control, target })
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<(), CircuitError> {
        self.push(GateOp::Swap { a, b, inserted: false })
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<(), CircuitError> {
        self.push(GateOp::Measure { qubit, clbit })
    }

    /// Appends every op of `other`, which must have the same width.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for op in other.ops() {
            self.push(*op)?;
        }
        Ok(())
    }
}

/// An empty Simon circuit for register size `n`: width `2n` with the
/// register split at `n`. Rejects `n < 2`, below which Simon's problem is
/// trivial or undefined.
pub fn new_circuit(n: usize) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::RegisterTooSmall(n));
    }
    Circuit::with_layout(2 * n, 2 * n, n)
}

fn check_secret(secret: &Bitstring) -> Result<(), CircuitError> {
    if secret.len() < 2 {
        return Err(CircuitError::RegisterTooSmall(secret.len()));
    }
    if secret.is_zero() {
        return Err(CircuitError::ZeroSecret);
    }
    Ok(())
}

/// Oracle fragment with the minimal number of two-qubit gates for secret
/// `s = 1^n`: `f(x)_i = x_i XOR x_{i+1}` for `i < n-1` and `f(x)_{n-1} = 0`,
/// realized as the CNOT pair `(x_i -> y_i)`, `(x_{i+1} -> y_i)` per output.
/// Exactly `2(n-1)` gates.
pub fn build_simple_oracle(n: usize) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::RegisterTooSmall(n));
    }
    build_oracle_with_secret(OracleKind::Simple, &Bitstring::ones(n))
}

/// Oracle fragment with the maximal number of two-qubit gates for secret
/// `s = 1^n`: `f(x) = x XOR (x_0 * 1^n)`, realized as a copy layer
/// `(x_i -> y_i)` for every `i` followed by a conditional global flip
/// `(x_0 -> y_i)` for every `i`. Exactly `2n` gates. The adjacent CNOT pair
/// on `y_0` is kept: the circuit must stay the maximal-gate-count extreme,
/// so no cancellation is performed.
pub fn build_complex_oracle(n: usize) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::RegisterTooSmall(n));
    }
    build_oracle_with_secret(OracleKind::Complex, &Bitstring::ones(n))
}

/// Oracle fragment for an arbitrary nonzero secret.
///
/// For `s = 1^n` these reduce gate-for-gate to [`build_simple_oracle`] and
/// [`build_complex_oracle`]. For general `s` the constructions restrict the
/// same patterns to the support of `s`:
///
/// * simple — one CNOT pair per consecutive pair of support lines, plus a
///   single copy CNOT per zero line of `s` (`n + w - 2` gates for support
///   size `w`);
/// * complex — the full copy layer, then a flip of each support line
///   conditioned on the first support line (`n + w` gates).
///
/// Both yield a two-to-one `f` with `f(x) = f(x XOR s)` exactly.
pub fn build_oracle_with_secret(
    kind: OracleKind,
    secret: &Bitstring,
) -> Result<Circuit, CircuitError> {
    check_secret(secret)?;
    let n = secret.len();
    let support = secret.support();
    let mut circuit = new_circuit(n)?;
    match kind {
        OracleKind::Simple => {
            let mut out = 0;
            for pair in support.windows(2) {
                circuit.cnot(pair[0], n + out)?;
                circuit.cnot(pair[1], n + out)?;
                out += 1;
            }
            for z in (0..n).filter(|&i| !secret.get(i)) {
                circuit.cnot(z, n + out)?;
                out += 1;
            }
        }
        OracleKind::Complex => {
            for i in 0..n {
                circuit.cnot(i, n + i)?;
            }
            let pivot = support[0];
            for &i in &support {
                circuit.cnot(pivot, n + i)?;
            }
        }
    }
    Ok(circuit)
}

/// Classical evaluation of the oracle function for secret `1^n`; the
/// reference used by brute-force tests.
pub fn classical_oracle_eval(
    kind: OracleKind,
    n: usize,
    x: &Bitstring,
) -> Result<Bitstring, CircuitError> {
    if n < 2 {
        return Err(CircuitError::RegisterTooSmall(n));
    }
    classical_oracle_eval_with_secret(kind, &Bitstring::ones(n), x)
}

/// Classical evaluation of the oracle function for an arbitrary secret.
/// Agrees bit-for-bit with the unitary action of
/// [`build_oracle_with_secret`] on computational basis states.
pub fn classical_oracle_eval_with_secret(
    kind: OracleKind,
    secret: &Bitstring,
    x: &Bitstring,
) -> Result<Bitstring, CircuitError> {
    check_secret(secret)?;
    let n = secret.len();
    if x.len() != n {
        return Err(CircuitError::LengthMismatch {
            got: x.len(),
            expected: n,
        });
    }
    let support = secret.support();
    let mut out = Bitstring::zeros(n);
    match kind {
        OracleKind::Simple => {
            let mut slot = 0;
            for pair in support.windows(2) {
                out.set(slot, x.get(pair[0]) ^ x.get(pair[1]));
                slot += 1;
            }
            for z in (0..n).filter(|&i| !secret.get(i)) {
                out.set(slot, x.get(z));
                slot += 1;
            }
        }
        OracleKind::Complex => {
            out = if x.get(support[0]) { x.xor(secret) } else { *x };
        }
    }
    Ok(out)
}

/// The full Simon circuit for secret `1^n`: Hadamards on register 1, the
/// oracle fragment, Hadamards on register 1 again, then measurement of all
/// `2n` lines. Register 2 is not measured mid-circuit; all measurement is
/// deferred to the end.
pub fn build_simon_circuit(n: usize, kind: OracleKind) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::RegisterTooSmall(n));
    }
    build_simon_circuit_with_secret(kind, &Bitstring::ones(n))
}

/// Full Simon circuit for an arbitrary nonzero secret.
pub fn build_simon_circuit_with_secret(
    kind: OracleKind,
    secret: &Bitstring,
) -> Result<Circuit, CircuitError> {
    check_secret(secret)?;
    let n = secret.len();
    let mut circuit = new_circuit(n)?;
    for q in 0..n {
        circuit.h(q)?;
    }
    circuit.extend_from(&build_oracle_with_secret(kind, secret)?)?;
    for q in 0..n {
        circuit.h(q)?;
    }
    for q in 0..2 * n {
        circuit.measure(q, q)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn all_inputs(n: usize) -> impl Iterator<Item = Bitstring> {
        (0u64..1 << n).map(move |v| Bitstring::from_index(v, n))
    }

    /// Brute-force check that `f` is two-to-one with the given period.
    fn assert_two_to_one_with_period(kind: OracleKind, secret: &Bitstring) {
        let n = secret.len();
        let mut preimages: HashMap<u64, Vec<Bitstring>> = HashMap::new();
        for x in all_inputs(n) {
            let fx = classical_oracle_eval_with_secret(kind, secret, &x).unwrap();
            preimages.entry(fx.value()).or_default().push(x);
        }
        assert_eq!(preimages.len(), 1 << (n - 1), "image size for {kind:?} n={n}");
        for (_, xs) in preimages {
            assert_eq!(xs.len(), 2, "preimage count for {kind:?} n={n}");
            assert_eq!(xs[0].xor(&xs[1]), *secret, "period for {kind:?} n={n}");
        }
    }

    #[test]
    fn bitstring_text_round_trip() {
        let b: Bitstring = "10110".parse().unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.get(0));
        assert!(!b.get(1));
        assert_eq!(b.to_string(), "10110");
        assert_eq!(b.value(), 0b10110);
        assert_eq!(Bitstring::from_index(0b10110, 5), b);
    }

    #[test]
    fn bitstring_line_zero_is_msb() {
        // Bit i of the string corresponds to qubit line i.
        let b = Bitstring::from_index(0b10, 2);
        assert_eq!(b.to_string(), "10");
        assert!(b.get(0));
        assert!(!b.get(1));
    }

    #[test]
    fn new_circuit_dimensions() {
        let c = new_circuit(2).unwrap();
        assert_eq!(c.width(), 4);
        assert_eq!(c.register_split(), 2);
        assert!(c.is_empty());

        let c = new_circuit(12).unwrap();
        assert_eq!(c.width(), 24);

        assert_eq!(new_circuit(1), Err(CircuitError::RegisterTooSmall(1)));
    }

    #[test]
    fn push_validates_indices_and_order() {
        let mut c = new_circuit(2).unwrap();
        assert_eq!(
            c.h(4),
            Err(CircuitError::QubitOutOfRange { qubit: 4, width: 4 })
        );
        assert_eq!(c.cnot(1, 1), Err(CircuitError::DuplicateQubit(1)));
        c.measure(0, 0).unwrap();
        assert_eq!(c.h(0), Err(CircuitError::UnitaryAfterMeasure(1)));
        assert_eq!(c.measure(1, 0), Err(CircuitError::DuplicateClbit(0)));
    }

    #[test]
    fn simple_oracle_gate_pattern() {
        let c = build_simple_oracle(2).unwrap();
        assert_eq!(
            c.ops(),
            &[
                GateOp::Cnot { control: 0, target: 2 },
                GateOp::Cnot { control: 1, target: 2 },
            ]
        );

        assert_eq!(build_simple_oracle(3).unwrap().len(), 4);
        // 2(n-1) CNOTs by construction.
        for n in 2..=8 {
            assert_eq!(build_simple_oracle(n).unwrap().len(), 2 * (n - 1));
        }
    }

    #[test]
    fn complex_oracle_gate_pattern() {
        let c = build_complex_oracle(2).unwrap();
        assert_eq!(
            c.ops(),
            &[
                GateOp::Cnot { control: 0, target: 2 },
                GateOp::Cnot { control: 1, target: 3 },
                GateOp::Cnot { control: 0, target: 2 },
                GateOp::Cnot { control: 0, target: 3 },
            ]
        );
        assert_eq!(build_complex_oracle(12).unwrap().len(), 24);
    }

    #[test]
    fn complex_count_exceeds_simple_count() {
        for n in 2..=10 {
            let complex = build_complex_oracle(n).unwrap().len();
            let simple = build_simple_oracle(n).unwrap().len();
            assert!(complex > simple, "n={n}: {complex} <= {simple}");
        }
    }

    #[test]
    fn classical_eval_examples() {
        let eval = |kind, n, s: &str| {
            classical_oracle_eval(kind, n, &s.parse().unwrap())
                .unwrap()
                .to_string()
        };
        assert_eq!(eval(OracleKind::Complex, 3, "010"), "010");
        assert_eq!(eval(OracleKind::Complex, 3, "101"), "010");
        assert_eq!(eval(OracleKind::Simple, 3, "110"), "010");
        // 101 XOR 010 = 111 = s: the two preimages of 010 under the complex oracle.
        let a: Bitstring = "101".parse().unwrap();
        let b: Bitstring = "010".parse().unwrap();
        assert_eq!(a.xor(&b).to_string(), "111");
    }

    #[test]
    fn classical_eval_rejects_length_mismatch() {
        let x: Bitstring = "10".parse().unwrap();
        assert_eq!(
            classical_oracle_eval(OracleKind::Simple, 3, &x),
            Err(CircuitError::LengthMismatch { got: 2, expected: 3 })
        );
    }

    #[test]
    fn oracles_two_to_one_with_all_ones_period() {
        for n in 2..=10 {
            let secret = Bitstring::ones(n);
            assert_two_to_one_with_period(OracleKind::Simple, &secret);
            assert_two_to_one_with_period(OracleKind::Complex, &secret);
        }
    }

    #[test]
    fn oracles_two_to_one_with_arbitrary_secrets() {
        for n in 2..=6 {
            for v in 1u64..1 << n {
                let secret = Bitstring::from_index(v, n);
                assert_two_to_one_with_period(OracleKind::Simple, &secret);
                assert_two_to_one_with_period(OracleKind::Complex, &secret);
            }
        }
    }

    #[test]
    fn arbitrary_secret_gate_counts() {
        // n + w - 2 (simple) and n + w (complex) for support size w; the
        // two-gate spread between the extremes holds for every secret.
        for n in 2..=6 {
            for v in 1u64..1 << n {
                let secret = Bitstring::from_index(v, n);
                let w = secret.count_ones() as usize;
                let simple = build_oracle_with_secret(OracleKind::Simple, &secret).unwrap();
                let complex = build_oracle_with_secret(OracleKind::Complex, &secret).unwrap();
                assert_eq!(simple.len(), n + w - 2);
                assert_eq!(complex.len(), n + w);
            }
        }
    }

    #[test]
    fn simon_circuit_structure() {
        // H on register 1, oracle, H on register 1, measure everything:
        // 2 + 2 + 2 + 4 ops for the n=2 simple oracle.
        let c = build_simon_circuit(2, OracleKind::Simple).unwrap();
        assert_eq!(c.len(), 10);
        assert!(matches!(c.ops()[0], GateOp::H { qubit: 0 }));
        assert!(matches!(c.ops()[1], GateOp::H { qubit: 1 }));
        assert!(matches!(c.ops()[2], GateOp::Cnot { .. }));
        assert!(matches!(c.ops()[4], GateOp::H { qubit: 0 }));
        assert!(matches!(c.ops()[6], GateOp::Measure { qubit: 0, clbit: 0 }));
        assert!(matches!(c.ops()[9], GateOp::Measure { qubit: 3, clbit: 3 }));
        // No Hadamards touch register 2, and register 2 is not measured
        // before the final layer.
        let h_on_register2 = c
            .ops()
            .iter()
            .filter(|op| matches!(op, GateOp::H { qubit } if *qubit >= 2))
            .count();
        assert_eq!(h_on_register2, 0);
    }

    #[test]
    fn secret_validation() {
        let zero: Bitstring = "000".parse().unwrap();
        assert_eq!(
            build_oracle_with_secret(OracleKind::Simple, &zero),
            Err(CircuitError::ZeroSecret)
        );
        assert!(build_simon_circuit_with_secret(OracleKind::Complex, &"1".parse().unwrap()).is_err());
    }
}
