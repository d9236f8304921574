//! OpenQASM 2.0 export, plus a parser for the emitted subset.
//!
//! The emitter produces canonical text: emitting a parsed emission is
//! byte-identical to the original. Only the gates this crate uses are
//! supported (`h`, `x`, `cx`, `swap`, `measure`).

use thiserror::Error;

use super::{Circuit, GateOp};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QasmParseError {
    #[error("line {0}: missing OPENQASM 2.0 header")]
    MissingHeader(usize),
    #[error("line {0}: statement before register declaration")]
    MissingRegister(usize),
    #[error("line {line}: malformed statement {stmt:?}")]
    Malformed { line: usize, stmt: String },
    #[error("line {line}: unsupported gate {gate:?}")]
    UnsupportedGate { line: usize, gate: String },
    #[error("line {line}: {source}")]
    InvalidOp {
        line: usize,
        source: super::CircuitError,
    },
}

/// Renders the circuit as OpenQASM 2.0 text, one statement per op, in op
/// order.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", circuit.width()));
    if circuit.num_clbits() > 0 {
        out.push_str(&format!("creg c[{}];\n", circuit.num_clbits()));
    }
    for op in circuit.ops() {
        let stmt = match *op {
            GateOp::H { qubit } => format!("h q[{qubit}];"),
            GateOp::X { qubit } => format!("x q[{qubit}];"),
            GateOp::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            GateOp::Swap { a, b, .. } => format!("swap q[{a}],q[{b}];"),
            GateOp::Measure { qubit, clbit } => format!("measure q[{qubit}] -> c[{clbit}];"),
        };
        out.push_str(&stmt);
        out.push('\n');
    }
    out
}

fn parse_operand(token: &str, reg: char) -> Option<usize> {
    let token = token.trim();
    let rest = token.strip_prefix(reg)?;
    let rest = rest.strip_prefix('[')?;
    let rest = rest.strip_suffix(']')?;
    rest.parse().ok()
}

/// Parses the subset of OpenQASM 2.0 produced by [`emit_qasm`].
///
/// The register split of the returned circuit defaults to `width / 2`
/// (QASM carries no register-split information).
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmParseError> {
    let mut width: Option<usize> = None;
    let mut num_clbits = 0usize;
    let mut ops: Vec<(usize, GateOp)> = Vec::new();
    let mut saw_header = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find("//") {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let malformed = || QasmParseError::Malformed {
                line: line_no,
                stmt: stmt.to_string(),
            };
            if let Some(version) = stmt.strip_prefix("OPENQASM") {
                if version.trim() != "2.0" {
                    return Err(malformed());
                }
                saw_header = true;
            } else if stmt.starts_with("include") {
                continue;
            } else if let Some(decl) = stmt.strip_prefix("qreg") {
                width = Some(parse_operand(decl, 'q').ok_or_else(malformed)?);
            } else if let Some(decl) = stmt.strip_prefix("creg") {
                num_clbits = parse_operand(decl, 'c').ok_or_else(malformed)?;
            } else {
                if !saw_header {
                    return Err(QasmParseError::MissingHeader(line_no));
                }
                let (gate, args) = stmt.split_once(' ').ok_or_else(malformed)?;
                let op = match gate {
                    "h" | "x" => {
                        let qubit = parse_operand(args, 'q').ok_or_else(malformed)?;
                        if gate == "h" {
                            GateOp::H { qubit }
                        } else {
                            GateOp::X { qubit }
                        }
                    }
                    "cx" | "swap" => {
                        let (a, b) = args.split_once(',').ok_or_else(malformed)?;
                        let a = parse_operand(a, 'q').ok_or_else(malformed)?;
                        let b = parse_operand(b, 'q').ok_or_else(malformed)?;
                        if gate == "cx" {
                            GateOp::Cnot { control: a, target: b }
                        } else {
                            GateOp::Swap { a, b, inserted: false }
                        }
                    }
                    "measure" => {
                        let (q, c) = args.split_once("->").ok_or_else(malformed)?;
                        let qubit = parse_operand(q, 'q').ok_or_else(malformed)?;
                        let clbit = parse_operand(c, 'c').ok_or_else(malformed)?;
                        GateOp::Measure { qubit, clbit }
                    }
                    other => {
                        return Err(QasmParseError::UnsupportedGate {
                            line: line_no,
                            gate: other.to_string(),
                        })
                    }
                };
                ops.push((line_no, op));
            }
        }
    }

    if !saw_header {
        return Err(QasmParseError::MissingHeader(1));
    }
    let width = width.ok_or(QasmParseError::MissingRegister(1))?;
    let mut circuit = Circuit::with_layout(width, num_clbits, width.min(num_clbits) / 2)
        .map_err(|source| QasmParseError::InvalidOp { line: 1, source })?;
    for (line, op) in ops {
        circuit
            .push(op)
            .map_err(|source| QasmParseError::InvalidOp { line, source })?;
    }
    Ok(circuit)
}
