//! Parameterized circuits and the hierarchical grid ansatz.

mod ansatz;
mod compile;
mod layout;
mod qasm;
mod schedule;

use alloc::vec::Vec;

use crate::qstate::{GateKind, Statevector};
use crate::{Error, Result};

pub use ansatz::{append_layer, build_stage_circuit, initial_parameters, lift_parameters, stage_circuits};
pub use compile::{compile_to_basis, Basis};
pub use layout::GridLayout;
pub use qasm::{to_qasm2, QASM2_HEADER_LINES};
pub use schedule::{layers_for_budget, HierarchySchedule, Stage};

/// Where a gate takes its angle from.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Angle {
    Fixed(f64),
    Slot(usize),
}

/// A gate bound to its angle source. Fixed gates carry `Angle::Fixed(0.0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Gate {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: GateKind,
    pub angle: Angle,
}

impl Gate {
    pub fn fixed(kind: GateKind) -> Self {
        Gate { kind, angle: Angle::Fixed(0.0) }
    }

    pub fn rotation(kind: GateKind, angle: f64) -> Self {
        Gate { kind, angle: Angle::Fixed(angle) }
    }

    pub fn slot(kind: GateKind, slot: usize) -> Self {
        Gate { kind, angle: Angle::Slot(slot) }
    }

    #[inline]
    pub fn resolve(&self, params: &[f64]) -> f64 {
        match self.angle {
            Angle::Fixed(a) => a,
            Angle::Slot(s) => params[s],
        }
    }
}

/// An ordered gate list over `num_qubits` with `num_params` parameter slots.
///
/// Every slot below `num_params` is referenced by at least one gate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParameterizedCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    num_params: usize,
}

impl ParameterizedCircuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>, num_params: usize) -> Result<Self> {
        let circuit = Self { num_qubits, gates, num_params };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn empty(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new(), num_params: 0 }
    }

    /// Checks qubit ranges, slot ranges and slot coverage. Deserialized
    /// circuits must pass through here before use.
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::Capacity { requested: 0, max: crate::qstate::DEFAULT_MAX_QUBITS });
        }
        let mut used = alloc::vec![false; self.num_params];
        for gate in &self.gates {
            gate.kind.validate(self.num_qubits)?;
            match gate.angle {
                Angle::Slot(slot) => {
                    if !gate.kind.is_rotation() {
                        return Err(Error::SlotOnFixedGate);
                    }
                    if slot >= self.num_params {
                        return Err(Error::ParameterSlot { slot, num_params: self.num_params });
                    }
                    used[slot] = true;
                }
                Angle::Fixed(a) if !a.is_finite() => return Err(Error::NonFiniteAngle),
                Angle::Fixed(_) => {}
            }
        }
        match used.iter().position(|u| !u) {
            Some(slot) => Err(Error::UnusedParameterSlot(slot)),
            None => Ok(()),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    /// Appends a gate; slot gates must use `num_params()` or an existing slot.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.kind.validate(self.num_qubits)?;
        if let Angle::Slot(slot) = gate.angle {
            if !gate.kind.is_rotation() {
                return Err(Error::SlotOnFixedGate);
            }
            if slot > self.num_params {
                return Err(Error::ParameterSlot { slot, num_params: self.num_params });
            }
            if slot == self.num_params {
                self.num_params += 1;
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a rotation bound to a fresh slot and returns the slot.
    pub fn push_parameterized(&mut self, kind: GateKind) -> Result<usize> {
        let slot = self.num_params;
        self.push(Gate::slot(kind, slot))?;
        Ok(slot)
    }

    /// Number of RZZ and CNOT gates.
    pub fn count_two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_two_qubit()).count()
    }

    pub fn count_single_qubit_gates(&self) -> usize {
        self.gates.len() - self.count_two_qubit_gates()
    }

    /// Sorted list of qubits touched by at least one gate.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut touched = alloc::vec![false; self.num_qubits];
        for gate in &self.gates {
            let (qs, len) = gate.kind.qubits();
            for &q in &qs[..len] {
                touched[q] = true;
            }
        }
        (0..self.num_qubits).filter(|&q| touched[q]).collect()
    }

    /// Same circuit on a register holding only the touched qubits, in their
    /// original order. Returns the circuit and the original qubit of each
    /// compact qubit.
    pub fn compact(&self) -> Result<(ParameterizedCircuit, Vec<usize>)> {
        let active = self.active_qubits();
        if active.is_empty() {
            return Err(Error::Schedule("circuit touches no qubits"));
        }
        let mut rank = alloc::vec![usize::MAX; self.num_qubits];
        for (i, &q) in active.iter().enumerate() {
            rank[q] = i;
        }
        let gates = self.gates.iter().map(|g| Gate { kind: g.kind.map_qubits(|q| rank[q]), angle: g.angle }).collect();
        Ok((ParameterizedCircuit { num_qubits: active.len(), gates, num_params: self.num_params }, active))
    }

    /// True if `self`'s gate list is a prefix of `other`'s on the same register.
    pub fn is_prefix_of(&self, other: &ParameterizedCircuit) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_params <= other.num_params
            && other.gates.len() >= self.gates.len()
            && other.gates[..self.gates.len()] == self.gates[..]
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::ParameterCount { expected: self.num_params, found: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteAngle);
        }
        Ok(())
    }

    /// `U(params)|0...0>`, gates applied in list order.
    pub fn run(&self, params: &[f64]) -> Result<Statevector> {
        self.check_params(params)?;
        let mut state = Statevector::zero_state(self.num_qubits)?;
        self.apply_to(&mut state, params);
        Ok(state)
    }

    /// Applies the gates to an existing state. Parameters must already be
    /// validated.
    pub(crate) fn apply_to(&self, state: &mut Statevector, params: &[f64]) {
        for gate in &self.gates {
            state.apply_unchecked(gate.kind, gate.resolve(params));
        }
    }
}

/// Free-function form of [`ParameterizedCircuit::run`].
pub fn run_circuit(circuit: &ParameterizedCircuit, params: &[f64]) -> Result<Statevector> {
    circuit.run(params)
}

/// Free-function form of [`ParameterizedCircuit::count_two_qubit_gates`].
pub fn count_two_qubit_gates(circuit: &ParameterizedCircuit) -> usize {
    circuit.count_two_qubit_gates()
}
