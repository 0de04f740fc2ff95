//! Reverse-mode gradients through a circuit.
//!
//! For a cost `C(psi)` with cotangent `lambda` (so that `dC = 2 Re <lambda|dpsi>`),
//! one backward pass over the gate list yields every parameter derivative at
//! the price of about three forward simulations and two state buffers.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::{Angle, ParameterizedCircuit};
use crate::dist::{kl_terms, ProbabilityVector, KL_EPSILON};
use crate::qstate::Statevector;
use crate::{Error, Result};

/// Gradient of a cost given the final state `psi = U(params)|0>` and its
/// cotangent. Both buffers are consumed and rewound to the initial state.
pub(crate) fn backward_sweep(
    circuit: &ParameterizedCircuit,
    params: &[f64],
    mut psi: Statevector,
    mut lambda: Statevector,
) -> Vec<f64> {
    let mut grad = vec![0.0; circuit.num_params()];
    for gate in circuit.gates().iter().rev() {
        let angle = gate.resolve(params);
        if let Angle::Slot(slot) = gate.angle {
            grad[slot] += psi.generator_overlap(lambda.amplitudes(), gate.kind).im;
        }
        psi.apply_unchecked(gate.kind, -angle);
        lambda.apply_unchecked(gate.kind, -angle);
    }
    grad
}

fn check_target(circuit: &ParameterizedCircuit, target: &ProbabilityVector) -> Result<()> {
    if target.num_qubits() != circuit.num_qubits() {
        return Err(Error::Resolution { requested: circuit.num_qubits(), available: target.num_qubits() });
    }
    Ok(())
}

/// `KL(target | q_params)` at the circuit's native resolution.
pub fn kl_loss(circuit: &ParameterizedCircuit, params: &[f64], target: &ProbabilityVector) -> Result<f64> {
    check_target(circuit, target)?;
    let q = circuit.run(params)?.born_distribution();
    Ok(kl_terms(target.mass(), q.mass(), KL_EPSILON))
}

/// Loss and exact gradient, with `q` clamped at `epsilon` in the loss.
///
/// Outcomes where the clamp is active have a locally constant loss term and
/// contribute nothing to the gradient.
pub fn kl_loss_and_gradient(
    circuit: &ParameterizedCircuit,
    params: &[f64],
    target: &ProbabilityVector,
    epsilon: f64,
) -> Result<(f64, Vec<f64>)> {
    check_target(circuit, target)?;
    let psi = circuit.run(params)?;
    let mut loss = 0.0;
    let mut lambda = psi.clone();
    for (l, &p) in lambda.amplitudes_mut().iter_mut().zip(target.mass()) {
        let q = l.norm_sqr();
        if p > 0.0 {
            loss += p * libm::log(p / q.max(epsilon));
        }
        *l = if p > 0.0 && q >= epsilon { *l * (-p / q) } else { Complex64::new(0.0, 0.0) };
    }
    Ok((loss, backward_sweep(circuit, params, psi, lambda)))
}

/// Gradient of [`kl_loss`].
pub fn kl_gradient(circuit: &ParameterizedCircuit, params: &[f64], target: &ProbabilityVector) -> Result<Vec<f64>> {
    kl_loss_and_gradient(circuit, params, target, KL_EPSILON).map(|(_, g)| g)
}

/// `(<Z_qubit> - value)^2`, the value of `<Z_qubit>`, and the gradient.
pub(crate) fn z_mse_and_gradient(
    circuit: &ParameterizedCircuit,
    params: &[f64],
    qubit: usize,
    value: f64,
) -> Result<(f64, f64, Vec<f64>)> {
    let psi = circuit.run(params)?;
    let z = psi.z_expectation(qubit)?;
    let residual = z - value;
    let mask = 1usize << (circuit.num_qubits() - 1 - qubit);
    let mut lambda = psi.clone();
    for (i, l) in lambda.amplitudes_mut().iter_mut().enumerate() {
        let sign = if i & mask == 0 { 1.0 } else { -1.0 };
        *l *= 2.0 * residual * sign;
    }
    Ok((residual * residual, z, backward_sweep(circuit, params, psi, lambda)))
}
