use alloc::string::String;
use core::fmt::Write;

use super::ParameterizedCircuit;
use crate::qstate::GateKind;
use crate::Result;

/// Header lines emitted before the first gate.
pub const QASM2_HEADER_LINES: usize = 3;

/// OpenQASM 2.0 text with every parameter bound, one gate per line.
pub fn to_qasm2(circuit: &ParameterizedCircuit, params: &[f64]) -> Result<String> {
    circuit.check_params(params)?;
    let mut out = String::new();
    let _ = writeln!(out, "OPENQASM 2.0;");
    let _ = writeln!(out, "include \"qelib1.inc\";");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    for gate in circuit.gates() {
        let angle = gate.resolve(params);
        let _ = match gate.kind {
            GateKind::H { qubit } => writeln!(out, "h q[{qubit}];"),
            GateKind::X { qubit } => writeln!(out, "x q[{qubit}];"),
            GateKind::Ry { qubit } => writeln!(out, "ry({angle}) q[{qubit}];"),
            GateKind::Rz { qubit } => writeln!(out, "rz({angle}) q[{qubit}];"),
            GateKind::Rzz { a, b } => writeln!(out, "rzz({angle}) q[{a}],q[{b}];"),
            GateKind::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        };
    }
    Ok(out)
}
