use std::time::Instant;

use qcbm_core::train::TrainObserver;

/// Observer that times each stage with the system clock and can print
/// progress to stderr.
#[derive(Debug, Default)]
pub struct StageClock {
    started: Option<Instant>,
    pub verbose: bool,
}

impl StageClock {
    pub fn new(verbose: bool) -> Self {
        Self { started: None, verbose }
    }
}

impl TrainObserver for StageClock {
    fn stage_started(&mut self, _stage: usize) {
        self.started = Some(Instant::now());
    }

    fn iteration(&mut self, stage: usize, iteration: usize, loss: f64) {
        if self.verbose && iteration % 100 == 0 {
            eprintln!("stage {stage} iteration {iteration} kl {loss:.6}");
        }
    }

    fn stage_finished(&mut self, _stage: usize) -> Option<f64> {
        self.started.take().map(|t| t.elapsed().as_secs_f64())
    }
}
