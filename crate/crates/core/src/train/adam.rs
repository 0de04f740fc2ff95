use alloc::vec;
use alloc::vec::Vec;

use libm::{pow, sqrt};

use super::TrainConfig;

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(num_params: usize) -> Self {
        Self { m: vec![0.0; num_params], v: vec![0.0; num_params], t: 0 }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(params: &mut [f64], grad: &[f64], state: &mut AdamState, config: &TrainConfig) {
    debug_assert_eq!(params.len(), grad.len());
    state.t += 1;
    let (b1, b2) = (config.beta1, config.beta2);
    let c1 = 1.0 - pow(b1, state.t as f64);
    let c2 = 1.0 - pow(b2, state.t as f64);
    for (((p, &g), m), v) in params.iter_mut().zip(grad).zip(&mut state.m).zip(&mut state.v) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        *p -= config.learning_rate * (*m / c1) / (sqrt(*v / c2) + config.adam_epsilon);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_no_op() {
        let config = TrainConfig::default();
        let mut params = [0.3, -0.7];
        let mut state = AdamState::new(2);
        adam_step(&mut params, &[0.0, 0.0], &mut state, &config);
        assert_eq!(params, [0.3, -0.7]);
        assert_eq!(state.t, 1);
    }

    #[test]
    fn constant_gradient_moves_against_it() {
        let config = TrainConfig::default();
        let mut params = [0.0];
        let mut state = AdamState::new(1);
        let mut last = 0.0;
        for _ in 0..20 {
            adam_step(&mut params, &[2.5], &mut state, &config);
            assert!(params[0] < last);
            last = params[0];
        }
    }

    #[test]
    fn quadratic_matches_scalar_oracle() {
        // f(x, y) = x^2 + 3 y^2
        let config = TrainConfig { learning_rate: 0.1, ..TrainConfig::default() };
        let mut params = [1.0, -2.0];
        let mut state = AdamState::new(2);

        let mut oracle = [1.0f64, -2.0];
        let (mut m, mut v) = ([0.0f64; 2], [0.0f64; 2]);
        for t in 1..=10 {
            let grad = [2.0 * params[0], 6.0 * params[1]];
            adam_step(&mut params, &grad, &mut state, &config);

            let g = [2.0 * oracle[0], 6.0 * oracle[1]];
            for i in 0..2 {
                m[i] = 0.9 * m[i] + 0.1 * g[i];
                v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
                let mh = m[i] / (1.0 - 0.9f64.powi(t));
                let vh = v[i] / (1.0 - 0.999f64.powi(t));
                oracle[i] -= 0.1 * mh / (vh.sqrt() + 1e-8);
            }
            for i in 0..2 {
                assert!((params[i] - oracle[i]).abs() < 1e-12);
            }
        }
    }
}
