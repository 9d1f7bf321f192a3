//! OpenQASM 2.0 export of fusion circuits, plus a parser for the emitted
//! dialect so exported files can be re-simulated and checked for round-trip
//! fidelity.
//!
//! The exporter writes only `x`, `ry`, `cx`, and `ccx` gate lines (all in
//! `qelib1.inc`): controlled Y-rotations are expanded as
//! `CRY(θ) = RY(θ/2)·CX·RY(−θ/2)·CX`, since qelib1 defines no `cry`. Angles
//! are printed in the shortest decimal form that parses back to the same
//! float, so re-simulation is exact.

use std::fmt::Write as _;

use super::FusionError;
use crate::qsim::{Circuit, Gate, Instruction};

/// A parse failure, located by (1-based) source line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("QASM line {line}: {message}")]
pub struct QasmParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> QasmParseError {
    QasmParseError {
        line,
        message: message.into(),
    }
}

/// Serialize a fully lowered circuit as OpenQASM 2.0: header, `qreg`/`creg`
/// declarations, gate lines, then `measure` lines mapping measured qubit `k`
/// to classical bit `k`.
pub fn export_qasm(circuit: &Circuit) -> Result<String, FusionError> {
    let mut text = String::new();
    text.push_str("OPENQASM 2.0;\n");
    text.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(text, "qreg q[{}];", circuit.n_qubits());
    let creg = if circuit.measurements().is_empty() {
        circuit.n_qubits()
    } else {
        circuit.measurements().len()
    };
    let _ = writeln!(text, "creg c[{creg}];");
    for instruction in circuit.instructions() {
        let gate = match instruction {
            Instruction::Gate(gate) => gate,
            Instruction::Load { .. } => return Err(FusionError::UnloweredLoad),
        };
        match *gate {
            Gate::X { target } => {
                let _ = writeln!(text, "x q[{target}];");
            }
            Gate::Ry { target, theta } => {
                let _ = writeln!(text, "ry({theta}) q[{target}];");
            }
            Gate::Cnot { control, target } => {
                let _ = writeln!(text, "cx q[{control}],q[{target}];");
            }
            Gate::Cry {
                control,
                target,
                theta,
            } => {
                let half = theta / 2.0;
                let _ = writeln!(text, "ry({half}) q[{target}];");
                let _ = writeln!(text, "cx q[{control}],q[{target}];");
                let _ = writeln!(text, "ry({}) q[{target}];", -half);
                let _ = writeln!(text, "cx q[{control}],q[{target}];");
            }
            Gate::Toffoli {
                control_a,
                control_b,
                target,
            } => {
                let _ = writeln!(text, "ccx q[{control_a}],q[{control_b}],q[{target}];");
            }
        }
    }
    for (bit, &qubit) in circuit.measurements().iter().enumerate() {
        let _ = writeln!(text, "measure q[{qubit}] -> c[{bit}];");
    }
    Ok(text)
}

/// Parse the exported dialect back into a circuit. Supports exactly what the
/// exporter writes: one `q` quantum register, one `c` classical register, the
/// four gate names, and `measure` statements.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmParseError> {
    let mut saw_header = false;
    let mut circuit: Option<Circuit> = None;
    let mut creg_size: Option<usize> = None;
    let mut measured: Vec<Option<usize>> = Vec::new();

    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = match raw_line.find("//") {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let statement = line
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line_no, "statement does not end with ';'"))?
            .trim();

        if !saw_header {
            if statement == "OPENQASM 2.0" {
                saw_header = true;
                continue;
            }
            return Err(parse_err(line_no, "expected 'OPENQASM 2.0;' first"));
        }
        if statement.starts_with("include") {
            continue;
        }
        if let Some(rest) = statement.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(parse_err(line_no, "duplicate qreg declaration"));
            }
            let size = parse_register(rest.trim(), 'q', line_no)?;
            circuit = Some(
                Circuit::new(size)
                    .map_err(|e| parse_err(line_no, format!("bad qreg size: {e}")))?,
            );
            continue;
        }
        if let Some(rest) = statement.strip_prefix("creg") {
            let size = parse_register(rest.trim(), 'c', line_no)?;
            creg_size = Some(size);
            measured = vec![None; size];
            continue;
        }

        let circuit = circuit
            .as_mut()
            .ok_or_else(|| parse_err(line_no, "gate before qreg declaration"))?;
        if let Some(rest) = statement.strip_prefix("measure") {
            let (qubit, bit) = parse_measure(rest.trim(), line_no)?;
            let slots = measured
                .get_mut(bit)
                .ok_or_else(|| parse_err(line_no, format!("classical bit {bit} out of range")))?;
            if slots.is_some() {
                return Err(parse_err(
                    line_no,
                    format!("classical bit {bit} measured twice"),
                ));
            }
            *slots = Some(qubit);
            continue;
        }
        let gate = parse_gate(statement, line_no)?;
        circuit
            .push(gate)
            .map_err(|e| parse_err(line_no, format!("{e}")))?;
    }

    let mut circuit = circuit.ok_or_else(|| parse_err(text.lines().count(), "no qreg declared"))?;
    if creg_size.is_some() {
        // Measured classical bits must be a gap-free prefix of the creg.
        let mut qubits = Vec::new();
        let mut ended = false;
        for (bit, slot) in measured.iter().enumerate() {
            match (slot, ended) {
                (Some(q), false) => qubits.push(*q),
                (None, _) => ended = true,
                (Some(_), true) => {
                    return Err(parse_err(
                        0,
                        format!("classical bit {bit} assigned after a gap"),
                    ))
                }
            }
        }
        circuit
            .set_measurements(qubits)
            .map_err(|e| parse_err(0, format!("{e}")))?;
    }
    Ok(circuit)
}

fn parse_register(text: &str, name: char, line: usize) -> Result<usize, QasmParseError> {
    let expected = format!("{name}[");
    let inner = text
        .strip_prefix(&expected)
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected '{name}[<size>]', got '{text}'")))?;
    inner
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad register size '{inner}'")))
}

fn parse_operand(token: &str, line: usize) -> Result<usize, QasmParseError> {
    let inner = token
        .trim()
        .strip_prefix("q[")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected 'q[<index>]', got '{token}'")))?;
    inner
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad qubit index '{inner}'")))
}

fn parse_measure(text: &str, line: usize) -> Result<(usize, usize), QasmParseError> {
    let (lhs, rhs) = text
        .split_once("->")
        .ok_or_else(|| parse_err(line, "measure without '->'"))?;
    let qubit = parse_operand(lhs, line)?;
    let inner = rhs
        .trim()
        .strip_prefix("c[")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected 'c[<index>]', got '{rhs}'")))?;
    let bit = inner
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad classical index '{inner}'")))?;
    Ok((qubit, bit))
}

fn parse_gate(statement: &str, line: usize) -> Result<Gate, QasmParseError> {
    let (head, operands_text) = statement
        .split_once(char::is_whitespace)
        .ok_or_else(|| parse_err(line, format!("malformed gate statement '{statement}'")))?;
    let operands: Vec<usize> = operands_text
        .split(',')
        .map(|token| parse_operand(token, line))
        .collect::<Result<_, _>>()?;

    let arity_err = |want: usize| parse_err(line, format!("'{head}' expects {want} operand(s)"));
    if let Some(param) = head.strip_prefix("ry(") {
        let theta: f64 = param
            .strip_suffix(')')
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(|| parse_err(line, format!("bad ry parameter in '{head}'")))?;
        let [target] = operands[..] else {
            return Err(arity_err(1));
        };
        return Ok(Gate::Ry { target, theta });
    }
    match head {
        "x" => {
            let [target] = operands[..] else {
                return Err(arity_err(1));
            };
            Ok(Gate::X { target })
        }
        "cx" => {
            let [control, target] = operands[..] else {
                return Err(arity_err(2));
            };
            Ok(Gate::Cnot { control, target })
        }
        "ccx" => {
            let [control_a, control_b, target] = operands[..] else {
                return Err(arity_err(3));
            };
            Ok(Gate::Toffoli {
                control_a,
                control_b,
                target,
            })
        }
        other => Err(parse_err(line, format!("unsupported gate '{other}'"))),
    }
}
