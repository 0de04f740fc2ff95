//! Circuit text formats.

use std::str::FromStr;

use qcbm_core::circuit::{to_qasm2, Gate, ParameterizedCircuit};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// OpenQASM 2.0 with angles bound.
    Qasm2,
    /// Gate list with parameter slots plus the parameter vector.
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qasm2" | "qasm" => Ok(Self::Qasm2),
            "json" => Ok(Self::Json),
            _ => Err(Error::Format(s.to_string())),
        }
    }
}

/// Structured circuit document. Reimporting it restores the gate list and
/// every angle bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub num_qubits: usize,
    pub num_params: usize,
    pub gates: Vec<Gate>,
    pub params: Vec<f64>,
}

pub fn export_circuit(circuit: &ParameterizedCircuit, params: &[f64], format: ExportFormat) -> Result<String> {
    if params.len() != circuit.num_params() {
        return Err(qcbm_core::Error::ParameterCount { expected: circuit.num_params(), found: params.len() }.into());
    }
    match format {
        ExportFormat::Qasm2 => Ok(to_qasm2(circuit, params)?),
        ExportFormat::Json => {
            let doc = CircuitDocument {
                num_qubits: circuit.num_qubits(),
                num_params: circuit.num_params(),
                gates: circuit.gates().to_vec(),
                params: params.to_vec(),
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Parses and validates a structured document.
pub fn import_circuit(text: &str) -> Result<(ParameterizedCircuit, Vec<f64>)> {
    let doc: CircuitDocument = serde_json::from_str(text)?;
    let circuit = ParameterizedCircuit::new(doc.num_qubits, doc.gates, doc.num_params)?;
    if doc.params.len() != circuit.num_params() {
        return Err(qcbm_core::Error::ParameterCount { expected: circuit.num_params(), found: doc.params.len() }.into());
    }
    Ok((circuit, doc.params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcbm_core::circuit::QASM2_HEADER_LINES;
    use qcbm_core::qstate::GateKind;

    fn h_ry() -> (ParameterizedCircuit, Vec<f64>) {
        let mut c = ParameterizedCircuit::empty(2);
        c.push(Gate::fixed(GateKind::H { qubit: 0 })).unwrap();
        c.push(Gate::slot(GateKind::Ry { qubit: 1 }, 0)).unwrap();
        c.push(Gate::rotation(GateKind::Rz { qubit: 1 }, 0.1 + 0.2)).unwrap();
        (c, vec![std::f64::consts::PI / 3.0])
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let (c, p) = h_ry();
        let text = export_circuit(&c, &p, ExportFormat::Json).unwrap();
        let (c2, p2) = import_circuit(&text).unwrap();
        assert_eq!(c2, c);
        assert_eq!(p2[0].to_bits(), p[0].to_bits());
    }

    #[test]
    fn empty_and_line_counts() {
        let empty = ParameterizedCircuit::empty(3);
        let text = export_circuit(&empty, &[], ExportFormat::Qasm2).unwrap();
        assert_eq!(text.lines().count(), QASM2_HEADER_LINES);
        let (c, p) = h_ry();
        let text = export_circuit(&c, &p, ExportFormat::Qasm2).unwrap();
        assert_eq!(text.lines().count(), QASM2_HEADER_LINES + 3);
        let (back, _) = import_circuit(&export_circuit(&empty, &[], ExportFormat::Json).unwrap()).unwrap();
        assert_eq!(back, empty);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!("svg".parse::<ExportFormat>(), Err(Error::Format(_))));
        let (c, _) = h_ry();
        assert!(export_circuit(&c, &[], ExportFormat::Json).is_err());
        let tampered =
            r#"{"num_qubits":1,"num_params":1,"gates":[{"gate":"h","qubit":0,"angle":{"slot":0}}],"params":[0.0]}"#;
        assert!(import_circuit(tampered).is_err());
    }
}
