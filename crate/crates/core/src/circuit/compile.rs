use alloc::vec::Vec;
use core::str::FromStr;

use super::{Gate, ParameterizedCircuit};
use crate::qstate::GateKind;
use crate::{Error, Result};

/// Two-qubit gate basis of a target device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// RZZ is native (trapped-ion style).
    RzzNative,
    /// Only CNOT is available; RZZ becomes CNOT, RZ, CNOT.
    CnotNative,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rzz" => Ok(Basis::RzzNative),
            "cnot" | "cx" => Ok(Basis::CnotNative),
            _ => Err(Error::Config("unknown basis (expected `rzz` or `cnot`)")),
        }
    }
}

/// Rewrites `circuit` into `basis`. Parameter slots are kept, so the
/// same parameter vector drives the compiled circuit.
pub fn compile_to_basis(circuit: &ParameterizedCircuit, basis: Basis) -> Result<ParameterizedCircuit> {
    match basis {
        Basis::RzzNative => Ok(circuit.clone()),
        Basis::CnotNative => {
            let mut gates = Vec::with_capacity(circuit.gates().len());
            for gate in circuit.gates() {
                match gate.kind {
                    GateKind::Rzz { a, b } => {
                        // exp(-i t ZZ/2) = CX(a,b) RZ_b(t) CX(a,b)
                        gates.push(Gate::fixed(GateKind::Cnot { control: a, target: b }));
                        gates.push(Gate { kind: GateKind::Rz { qubit: b }, angle: gate.angle });
                        gates.push(Gate::fixed(GateKind::Cnot { control: a, target: b }));
                    }
                    _ => gates.push(*gate),
                }
            }
            ParameterizedCircuit::new(circuit.num_qubits(), gates, circuit.num_params())
        }
    }
}
