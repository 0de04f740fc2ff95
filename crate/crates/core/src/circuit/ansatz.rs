use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::Range;

use super::schedule::layer_parameters;
use super::{GridLayout, HierarchySchedule, ParameterizedCircuit};
use crate::qstate::GateKind;
use crate::rng::{seeded, uniform};
use crate::{Error, Result};

/// Appends one variational layer over the leftmost `cols` columns: RY then
/// RZ on every qubit in layer order, then RZZ on every edge. Returns the
/// fresh parameter slots.
pub fn append_layer(circuit: &mut ParameterizedCircuit, layout: &GridLayout, cols: usize) -> Result<Range<usize>> {
    if circuit.num_qubits() != layout.num_qubits() {
        return Err(Error::Length { expected: layout.num_qubits(), found: circuit.num_qubits() });
    }
    let start = circuit.num_params();
    for qubit in layout.layer_order(cols) {
        circuit.push_parameterized(GateKind::Ry { qubit })?;
        circuit.push_parameterized(GateKind::Rz { qubit })?;
    }
    for (a, b) in layout.edges_in_columns(cols) {
        circuit.push_parameterized(GateKind::Rzz { a, b })?;
    }
    Ok(start..circuit.num_params())
}

/// Circuits for every stage of `schedule`, each a prefix of the next.
///
/// Stage `s` repeats all earlier gates, puts a fixed H on each qubit it
/// activates, then appends its layers over all active qubits.
pub fn stage_circuits(layout: &GridLayout, schedule: &HierarchySchedule) -> Result<Vec<ParameterizedCircuit>> {
    schedule.validate(layout)?;
    let mut circuit = ParameterizedCircuit::empty(layout.num_qubits());
    let mut out = Vec::with_capacity(schedule.len());
    let mut previous_cols = 0;
    for stage in schedule.stages() {
        for c in previous_cols..stage.columns {
            for qubit in layout.column(c) {
                circuit.push(super::Gate::fixed(GateKind::H { qubit }))?;
            }
        }
        for _ in 0..stage.layers {
            append_layer(&mut circuit, layout, stage.columns)?;
        }
        previous_cols = stage.columns;
        out.push(circuit.clone());
    }
    Ok(out)
}

/// Circuit of stage `stage` (0-based) of `schedule`.
pub fn build_stage_circuit(
    layout: &GridLayout,
    schedule: &HierarchySchedule,
    stage: usize,
) -> Result<ParameterizedCircuit> {
    if stage >= schedule.len() {
        return Err(Error::StageIndex { stage, stages: schedule.len() });
    }
    let mut all = stage_circuits(layout, schedule)?;
    all.truncate(stage + 1);
    Ok(all.pop().expect("stage index checked"))
}

/// Starting parameters of the first stage: the first layer is drawn
/// uniformly from `[0, 2pi)` with a seeded generator, every other slot is 0.
pub fn initial_parameters(layout: &GridLayout, schedule: &HierarchySchedule, seed: u64) -> Result<Vec<f64>> {
    schedule.validate(layout)?;
    let first = schedule.stages()[0];
    let total = first.layers * layer_parameters(layout, first.columns);
    let random = if first.layers > 0 { layer_parameters(layout, first.columns) } else { 0 };
    let mut rng = seeded(seed);
    Ok((0..total).map(|i| if i < random { TAU * uniform(&mut rng) } else { 0.0 }).collect())
}

/// Carries trained parameters into the next stage's circuit; new slots
/// start at exactly 0.
pub fn lift_parameters(
    prev_params: &[f64],
    prev: &ParameterizedCircuit,
    next: &ParameterizedCircuit,
) -> Result<Vec<f64>> {
    prev.check_params(prev_params)?;
    if !prev.is_prefix_of(next) {
        return Err(Error::PrefixViolation);
    }
    let mut params = Vec::with_capacity(next.num_params());
    params.extend_from_slice(prev_params);
    params.resize(next.num_params(), 0.0);
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Angle, Stage};
    use alloc::vec;

    fn six_qubit() -> GridLayout {
        GridLayout::new(3, 3).unwrap()
    }

    #[test]
    fn first_stage_of_six_qubit_layout() {
        let layout = six_qubit();
        let schedule = HierarchySchedule::uniform(&layout, 1, 10).unwrap();
        let c = build_stage_circuit(&layout, &schedule, 0).unwrap();
        assert_eq!(c.active_qubits(), vec![0, 3]);
        assert_eq!(c.count_two_qubit_gates(), 1);
        assert_eq!(c.num_params(), 2 * 2 + 1);
        assert!(matches!(build_stage_circuit(&layout, &schedule, 3), Err(Error::StageIndex { .. })));
    }

    #[test]
    fn new_qubits_get_h_before_parameterized_gates() {
        let layout = six_qubit();
        let schedule = HierarchySchedule::uniform(&layout, 2, 10).unwrap();
        let stages = stage_circuits(&layout, &schedule).unwrap();
        let prefix = stages[0].gates().len();
        let added = &stages[1].gates()[prefix..];
        for q in [4, 1] {
            let first_touch = added.iter().position(|g| {
                let (qs, n) = g.kind.qubits();
                qs[..n].contains(&q)
            });
            let gate = added[first_touch.unwrap()];
            assert_eq!(gate.kind, GateKind::H { qubit: q });
            assert_eq!(gate.angle, Angle::Fixed(0.0));
        }
    }

    #[test]
    fn stage_prefix_and_locality() {
        let layout = GridLayout::new(3, 4).unwrap();
        let schedule = HierarchySchedule::hierarchical(&layout, &[1, 2, 0, 1], &[1; 4]).unwrap();
        let stages = stage_circuits(&layout, &schedule).unwrap();
        for (s, c) in stages.iter().enumerate() {
            c.validate().unwrap();
            let allowed = layout.qubits_in_columns(s + 1);
            assert_eq!(c.active_qubits(), allowed);
            if s + 1 < stages.len() {
                assert!(c.is_prefix_of(&stages[s + 1]));
                assert!(c.gates().len() < stages[s + 1].gates().len());
            }
        }
        assert_eq!(stages.last().unwrap().num_params(), schedule.parameter_count(&layout));
        assert_eq!(stages.last().unwrap().count_two_qubit_gates(), schedule.two_qubit_gate_count(&layout));
    }

    #[test]
    fn flat_schedule_is_single_wide_stage() {
        let layout = six_qubit();
        let flat = HierarchySchedule::flat(&layout, 2, 5).unwrap();
        let c = build_stage_circuit(&layout, &flat, 0).unwrap();
        assert_eq!(c.active_qubits(), (0..6).collect::<Vec<_>>());
        assert_eq!(flat.stages(), &[Stage { columns: 3, layers: 2, iterations: 5 }]);
    }

    #[test]
    fn lift_examples() {
        let layout = six_qubit();
        let schedule = HierarchySchedule::hierarchical(&layout, &[1, 1, 1], &[1; 3]).unwrap();
        let stages = stage_circuits(&layout, &schedule).unwrap();
        let prev = [1.0, 2.0, 3.0, 4.0, 5.0];
        let lifted = lift_parameters(&prev, &stages[0], &stages[1]).unwrap();
        assert_eq!(lifted.len(), stages[1].num_params());
        assert_eq!(&lifted[..5], &prev);
        assert!(lifted[5..].iter().all(|&p| p == 0.0));

        let empty = ParameterizedCircuit::empty(6);
        let lifted = lift_parameters(&[], &empty, &stages[0]).unwrap();
        assert_eq!(lifted, vec![0.0; 5]);

        let wide = vec![0.0; stages[1].num_params()];
        assert_eq!(lift_parameters(&wide, &stages[1], &stages[0]), Err(Error::PrefixViolation));
    }

    #[test]
    fn initial_parameters_randomize_first_layer_only() {
        let layout = six_qubit();
        let schedule = HierarchySchedule::hierarchical(&layout, &[2, 1, 1], &[1; 3]).unwrap();
        let p = initial_parameters(&layout, &schedule, 17).unwrap();
        assert_eq!(p.len(), 10);
        assert!(p[..5].iter().all(|&x| (0.0..TAU).contains(&x) && x != 0.0));
        assert!(p[5..].iter().all(|&x| x == 0.0));
        assert_eq!(p, initial_parameters(&layout, &schedule, 17).unwrap());
        assert_ne!(p, initial_parameters(&layout, &schedule, 18).unwrap());
    }
}
