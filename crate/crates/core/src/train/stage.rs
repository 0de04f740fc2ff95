use alloc::vec::Vec;

use super::adam::{adam_step, AdamState};
use super::adjoint::kl_loss_and_gradient;
use super::{StageReport, TrainConfig, TrainObserver};
use crate::circuit::{
    initial_parameters, lift_parameters, stage_circuits, GridLayout, HierarchySchedule, ParameterizedCircuit,
};
use crate::dist::{tvd, ProbabilityVector};
use crate::imgio::{image_to_distribution, pool_to_bits, GrayImage};
use crate::{Error, Result};

/// Result of [`train_stage`].
#[derive(Debug, Clone, PartialEq)]
pub struct StageOutcome {
    /// Parameters with the lowest loss seen, including after the last step.
    pub params: Vec<f64>,
    pub best_loss: f64,
    /// Loss before each step.
    pub trace: Vec<f64>,
}

/// Runs `config.iterations` Adam steps on the KL loss.
pub fn train_stage(
    circuit: &ParameterizedCircuit,
    params0: &[f64],
    target: &ProbabilityVector,
    config: &TrainConfig,
) -> Result<StageOutcome> {
    config.validate()?;
    run_stage(circuit, params0, target, config, 0, &mut ())
}

fn run_stage(
    circuit: &ParameterizedCircuit,
    params0: &[f64],
    target: &ProbabilityVector,
    config: &TrainConfig,
    stage: usize,
    observer: &mut dyn TrainObserver,
) -> Result<StageOutcome> {
    let mut params = params0.to_vec();
    let mut state = AdamState::new(params.len());
    let mut trace = Vec::with_capacity(config.iterations);
    let mut best = (f64::INFINITY, params.clone());
    for iteration in 0..config.iterations {
        let (loss, grad) = kl_loss_and_gradient(circuit, &params, target, config.kl_epsilon)?;
        trace.push(loss);
        observer.iteration(stage, iteration, loss);
        if loss < best.0 {
            best = (loss, params.clone());
        }
        adam_step(&mut params, &grad, &mut state, config);
    }
    let (last, _) = kl_loss_and_gradient(circuit, &params, target, config.kl_epsilon)?;
    if last < best.0 {
        best = (last, params);
    }
    Ok(StageOutcome { params: best.1, best_loss: best.0, trace })
}

/// Trained circuit plus one report per stage.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub reports: Vec<StageReport>,
    /// Final stage circuit on the full register.
    pub circuit: ParameterizedCircuit,
    pub params: Vec<f64>,
}

impl TrainResult {
    /// Born distribution of the trained circuit.
    pub fn distribution(&self) -> Result<ProbabilityVector> {
        Ok(self.circuit.run(&self.params)?.born_distribution())
    }
}

/// Coarse-to-fine training of `image` under `schedule`.
pub fn hierarchical_train(
    image: &GrayImage,
    layout: &GridLayout,
    schedule: &HierarchySchedule,
    config: &TrainConfig,
) -> Result<TrainResult> {
    hierarchical_train_with(image, layout, schedule, config, &mut ())
}

/// [`hierarchical_train`] reporting progress to `observer`.
///
/// Each stage is simulated on its active qubits only. Its target is the
/// image pooled to the active row and column bits.
pub fn hierarchical_train_with(
    image: &GrayImage,
    layout: &GridLayout,
    schedule: &HierarchySchedule,
    config: &TrainConfig,
    observer: &mut dyn TrainObserver,
) -> Result<TrainResult> {
    config.validate()?;
    if GridLayout::for_image(image.height(), image.width())? != *layout {
        return Err(Error::Dimensions {
            height: image.height(),
            width: image.width(),
            reason: "image does not match the qubit layout",
        });
    }
    let n = layout.num_qubits();
    let full_target = image_to_distribution(image)?;
    let circuits = stage_circuits(layout, schedule)?;
    let mut params = initial_parameters(layout, schedule, config.seed)?;
    let mut reports = Vec::with_capacity(schedule.len());

    for (s, stage) in schedule.stages().iter().enumerate() {
        observer.stage_started(s);
        if s > 0 {
            params = lift_parameters(&params, &circuits[s - 1], &circuits[s])?;
        }
        let (compact, active) = circuits[s].compact()?;
        debug_assert_eq!(active, layout.qubits_in_columns(stage.columns));
        let (rows, cols) = layout.active_counts(stage.columns);
        let target = image_to_distribution(&pool_to_bits(image, rows, cols)?)?;
        let stage_config = TrainConfig { iterations: stage.iterations, ..*config };
        let outcome = run_stage(&compact, &params, &target, &stage_config, s, observer)?;
        params = outcome.params;

        let q = compact.run(&params)?.born_distribution();
        let tvd_full = tvd(&full_target, &q.expand_into_register(&active, n)?, n)?;
        reports.push(StageReport {
            stage: s,
            active_qubits: active.len(),
            kl_stage: outcome.best_loss,
            tvd_full,
            trace: outcome.trace,
            wall_time_seconds: observer.stage_finished(s),
        });
    }
    let circuit = circuits.into_iter().last().ok_or(Error::Schedule("no stages"))?;
    Ok(TrainResult { reports, circuit, params })
}

/// Baseline without hierarchy: `layers` layers over every qubit, trained
/// for `iterations` steps from a randomized first layer.
pub fn train_flat(
    image: &GrayImage,
    layout: &GridLayout,
    layers: usize,
    iterations: usize,
    config: &TrainConfig,
) -> Result<TrainResult> {
    let schedule = HierarchySchedule::flat(layout, layers, iterations)?;
    hierarchical_train(image, layout, &schedule, config)
}
