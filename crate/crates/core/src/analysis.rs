//! Shot sampling and coarse-grained verification statistics.
//!
//! The central statistic compares single-qubit marginals `P_i` (probability
//! of reading qubit `i` as 0) between an experiment and the ideal state:
//! `L1 = sum_{i in S} |P_i - P*_i|`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{append_layer, GridLayout, ParameterizedCircuit};
use crate::dist::ProbabilityVector;
use crate::rng::{derive_seed, fair_zero_count, seeded, uniform};
use crate::train::{adam_step, z_mse_and_gradient, AdamState, TrainConfig};
use crate::{Error, Result};

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShotCounts {
    num_qubits: usize,
    total: u64,
    counts: BTreeMap<usize, u64>,
}

impl ShotCounts {
    pub fn new(num_qubits: usize, counts: BTreeMap<usize, u64>) -> Result<Self> {
        if let Some((&x, _)) = counts.iter().next_back() {
            if x >> num_qubits != 0 {
                return Err(Error::Length { expected: 1 << num_qubits, found: x + 1 });
            }
        }
        let total = counts.values().sum();
        Ok(Self { num_qubits, total, counts })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn get(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// Normalized histogram over all `2^n` outcomes.
    pub fn empirical_distribution(&self) -> Result<ProbabilityVector> {
        let mut weights = vec![0.0; 1 << self.num_qubits];
        for (&x, &c) in &self.counts {
            weights[x] = c as f64;
        }
        ProbabilityVector::from_weights(weights)
    }
}

/// `shots` independent draws from `p` by inverse-CDF sampling.
pub fn sample_shots(p: &ProbabilityVector, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &m in p.mass() {
        acc += m;
        cdf.push(acc);
    }
    // Rounding can leave the last entry just below 1; never land past the
    // final outcome with mass.
    let last = p.mass().iter().rposition(|&m| m > 0.0).ok_or(Error::InvalidMass)?;
    let mut rng = seeded(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = uniform(&mut rng) * acc;
        let x = cdf.partition_point(|&c| c <= u).min(last);
        *counts.entry(x).or_insert(0) += 1;
    }
    Ok(ShotCounts { num_qubits: p.num_qubits(), total: shots, counts })
}

fn check_subset(subset: &[usize], num_qubits: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    match subset.iter().find(|&&q| q >= num_qubits) {
        Some(&qubit) => Err(Error::QubitIndex { qubit, num_qubits }),
        None => Ok(()),
    }
}

/// Observed `P_i`: the fraction of shots with qubit `i` reading 0.
pub fn empirical_marginals(counts: &ShotCounts, subset: &[usize]) -> Result<Vec<f64>> {
    check_subset(subset, counts.num_qubits)?;
    if counts.total == 0 {
        return Err(Error::InvalidMass);
    }
    let n = counts.num_qubits;
    Ok(subset
        .iter()
        .map(|&q| {
            let mask = 1usize << (n - 1 - q);
            let zeros: u64 = counts.counts.iter().filter(|(x, _)| *x & mask == 0).map(|(_, c)| c).sum();
            zeros as f64 / counts.total as f64
        })
        .collect())
}

/// Exact `P*_i` of a distribution.
pub fn exact_marginals(p: &ProbabilityVector, subset: &[usize]) -> Result<Vec<f64>> {
    check_subset(subset, p.num_qubits())?;
    let n = p.num_qubits();
    Ok(subset
        .iter()
        .map(|&q| {
            let mask = 1usize << (n - 1 - q);
            let s: f64 = p.mass().iter().enumerate().filter(|(x, _)| x & mask == 0).map(|(_, m)| m).sum();
            s.clamp(0.0, 1.0)
        })
        .collect())
}

/// Observed and ideal marginals over a qubit subset.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarginalSet {
    pub subset: Vec<usize>,
    pub observed: Vec<f64>,
    pub ideal: Vec<f64>,
}

impl MarginalSet {
    pub fn new(subset: Vec<usize>, observed: Vec<f64>, ideal: Vec<f64>) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for v in [&observed, &ideal] {
            if v.len() != subset.len() {
                return Err(Error::Length { expected: subset.len(), found: v.len() });
            }
            if v.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidMass);
            }
        }
        Ok(Self { subset, observed, ideal })
    }

    pub fn l1(&self) -> f64 {
        self.observed.iter().zip(&self.ideal).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// `sum_i |P_i - P*_i|`.
pub fn l1_marginals(observed: &[f64], ideal: &[f64]) -> Result<f64> {
    if observed.len() != ideal.len() {
        return Err(Error::Length { expected: ideal.len(), found: observed.len() });
    }
    Ok(observed.iter().zip(ideal).map(|(a, b)| (a - b).abs()).sum())
}

/// L1 of a fully depolarized experiment, where every `P_i` is 0.5.
pub fn mixed_baseline_l1(ideal: &[f64]) -> f64 {
    ideal.iter().map(|p| (0.5 - p).abs()).sum()
}

/// Marginals of a completely noisy experiment paired with `ideal`.
pub fn depolarized_reference(subset: &[usize], ideal: &[f64]) -> Result<MarginalSet> {
    MarginalSet::new(subset.to_vec(), vec![0.5; subset.len()], ideal.to_vec())
}

/// Monte Carlo confidence level of the L1 statistic for a maximally mixed
/// experiment: the value that `percentile` percent of trials reach or
/// exceed, by nearest rank.
///
/// Each trial gives every qubit `shots` fair coin flips and measures L1
/// against `ideal`. An observed L1 below the returned value is then unlikely
/// to come from random bits. Trial `t` draws from its own generator seeded by
/// `derive_seed(seed, t)`.
pub fn finite_shot_percentile(ideal: &[f64], shots: u64, trials: usize, percentile: f64, seed: u64) -> Result<f64> {
    if !(percentile > 0.0 && percentile <= 100.0) {
        return Err(Error::Percentile);
    }
    if ideal.is_empty() {
        return Err(Error::EmptySubset);
    }
    if shots == 0 || trials == 0 {
        return Err(Error::Config("shots and trials must be at least 1"));
    }
    let mut values: Vec<f64> = (0..trials)
        .map(|t| {
            let mut rng = seeded(derive_seed(seed, t as u64));
            ideal.iter().map(|p| (fair_zero_count(&mut rng, shots) as f64 / shots as f64 - p).abs()).sum()
        })
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let rank = libm::ceil(percentile / 100.0 * trials as f64) as usize;
    Ok(values[rank.clamp(1, trials) - 1])
}

/// Distribution of the `k` leading bits.
pub fn top_bits_histogram(p: &ProbabilityVector, k: usize) -> Result<ProbabilityVector> {
    p.coarse_grain(k)
}

/// Shot counts aggregated over the `k` leading bits and normalized.
pub fn top_bits_histogram_counts(counts: &ShotCounts, k: usize) -> Result<ProbabilityVector> {
    let n = counts.num_qubits;
    if k > n {
        return Err(Error::Resolution { requested: k, available: n });
    }
    let mut weights = vec![0.0; 1 << k];
    for (&x, &c) in &counts.counts {
        weights[x >> (n - k)] += c as f64;
    }
    ProbabilityVector::from_weights(weights)
}

/// `|<Z>|` a readout qubit must reach to stand out from a mixed state.
pub const READOUT_THRESHOLD: f64 = 0.4;

/// Result of [`train_readout`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutOutcome {
    /// Extended circuit, or the input circuit when no training was needed.
    pub circuit: ParameterizedCircuit,
    pub params: Vec<f64>,
    /// The extreme (+1 or -1) that was targeted.
    pub target: f64,
    pub z_initial: f64,
    /// `<Z>` of the best parameters found.
    pub z_final: f64,
    pub iterations: usize,
    pub reached: bool,
}

/// Appends one variational layer and trains only its parameters so that
/// `<Z>` on `qubit` moves toward the nearer extreme, stopping once
/// `|<Z>| >= 0.4` or after `config.iterations` steps.
///
/// `qubit` must be the most significant row or column qubit of the block.
/// When `<Z>` is exactly 0 the +1 extreme is used.
pub fn train_readout(
    circuit: &ParameterizedCircuit,
    params: &[f64],
    layout: &GridLayout,
    qubit: usize,
    config: &TrainConfig,
) -> Result<ReadoutOutcome> {
    config.validate()?;
    if Some(qubit) != layout.vertical_qubit(0) && Some(qubit) != layout.horizontal_qubit(0) {
        return Err(Error::Config("readout qubit must be a most significant qubit"));
    }
    let z_initial = circuit.run(params)?.z_expectation(qubit)?;
    let target = if z_initial < 0.0 { -1.0 } else { 1.0 };
    if z_initial.abs() >= READOUT_THRESHOLD {
        return Ok(ReadoutOutcome {
            circuit: circuit.clone(),
            params: params.to_vec(),
            target,
            z_initial,
            z_final: z_initial,
            iterations: 0,
            reached: true,
        });
    }

    let mut extended = circuit.clone();
    let fresh = append_layer(&mut extended, layout, layout.columns())?;
    let mut full = params.to_vec();
    full.resize(extended.num_params(), 0.0);
    let mut state = AdamState::new(fresh.len());
    let mut best = (f64::INFINITY, z_initial, full.clone());
    let mut iterations = 0;
    while iterations < config.iterations {
        let (loss, z, grad) = z_mse_and_gradient(&extended, &full, qubit, target)?;
        if loss < best.0 {
            best = (loss, z, full.clone());
        }
        if z.abs() >= READOUT_THRESHOLD {
            break;
        }
        adam_step(&mut full[fresh.clone()], &grad[fresh.clone()], &mut state, config);
        iterations += 1;
    }
    let (loss, z, _) = z_mse_and_gradient(&extended, &full, qubit, target)?;
    if loss < best.0 {
        best = (loss, z, full);
    }
    let (_, z_final, params) = best;
    Ok(ReadoutOutcome {
        circuit: extended,
        params,
        target,
        z_initial,
        z_final,
        iterations,
        reached: z_final.abs() >= READOUT_THRESHOLD,
    })
}
