//! Probability vectors over bitstrings and the distances between them.
//!
//! Distances take a target resolution `m`: both arguments are first brought
//! to `2^m` outcomes with [`ProbabilityVector::at_resolution`], which either
//! marginalizes the least significant qubits or splits each outcome evenly
//! as if extra `|+>` qubits were appended.

use alloc::vec;
use alloc::vec::Vec;

use libm::{log, sqrt};

use crate::{Error, Result};

/// Lower clamp applied to model probabilities inside the KL divergence.
pub const KL_EPSILON: f64 = 1e-12;

/// Tolerance on the total mass of a normalized vector.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Normalized nonnegative mass over `2^n` outcomes plus the total it was
/// normalized from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    num_qubits: usize,
    mass: Vec<f64>,
    norm_constant: f64,
}

impl ProbabilityVector {
    /// Normalizes raw nonnegative weights, remembering their sum.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let num_qubits = crate::exact_log2(weights.len()).ok_or(Error::NotPowerOfTwo(weights.len()))?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMass);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidMass);
        }
        let mass = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { num_qubits, mass, norm_constant: total })
    }

    /// Wraps an already normalized vector (norm constant 1).
    pub fn from_mass(mass: Vec<f64>) -> Result<Self> {
        let num_qubits = crate::exact_log2(mass.len()).ok_or(Error::NotPowerOfTwo(mass.len()))?;
        if mass.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMass);
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMass);
        }
        Ok(Self { num_qubits, mass, norm_constant: 1.0 })
    }

    pub(crate) fn from_mass_unchecked(num_qubits: usize, mass: Vec<f64>) -> Self {
        debug_assert_eq!(mass.len(), 1usize << num_qubits);
        Self { num_qubits, mass, norm_constant: 1.0 }
    }

    pub fn uniform(num_qubits: usize) -> Self {
        let len = 1usize << num_qubits;
        Self::from_mass_unchecked(num_qubits, vec![1.0 / len as f64; len])
    }

    /// All mass on outcome `index`.
    pub fn delta(num_qubits: usize, index: usize) -> Result<Self> {
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::Length { expected: len, found: index });
        }
        let mut mass = vec![0.0; len];
        mass[index] = 1.0;
        Ok(Self::from_mass_unchecked(num_qubits, mass))
    }

    pub fn with_norm_constant(mut self, norm_constant: f64) -> Self {
        self.norm_constant = norm_constant;
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<f64> {
        self.mass
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Marginalizes the `n - m` least significant qubits.
    pub fn coarse_grain(&self, m: usize) -> Result<Self> {
        if m > self.num_qubits {
            return Err(Error::Resolution { requested: m, available: self.num_qubits });
        }
        let group = 1usize << (self.num_qubits - m);
        let mass = self.mass.chunks_exact(group).map(|c| c.iter().sum()).collect();
        Ok(Self { num_qubits: m, mass, norm_constant: self.norm_constant })
    }

    /// Splits each outcome evenly over `2^(m - n)` consecutive outcomes.
    pub fn expand(&self, m: usize) -> Result<Self> {
        if m < self.num_qubits {
            return Err(Error::Resolution { requested: m, available: self.num_qubits });
        }
        let group = 1usize << (m - self.num_qubits);
        let scale = 1.0 / group as f64;
        let mut mass = Vec::with_capacity(self.mass.len() * group);
        for &p in &self.mass {
            mass.extend(core::iter::repeat(p * scale).take(group));
        }
        Ok(Self { num_qubits: m, mass, norm_constant: self.norm_constant })
    }

    /// Brings the vector to `2^m` outcomes.
    pub fn at_resolution(&self, m: usize) -> Result<Self> {
        match m.cmp(&self.num_qubits) {
            core::cmp::Ordering::Less => self.coarse_grain(m),
            core::cmp::Ordering::Greater => self.expand(m),
            core::cmp::Ordering::Equal => Ok(self.clone()),
        }
    }

    /// Embeds this distribution into a wider register by placing every
    /// missing qubit in `|+>`.
    ///
    /// `positions[i]` is the register qubit carrying this vector's qubit `i`;
    /// positions must be strictly increasing and below `register_qubits`.
    pub fn expand_into_register(&self, positions: &[usize], register_qubits: usize) -> Result<Self> {
        if positions.len() != self.num_qubits {
            return Err(Error::Length { expected: self.num_qubits, found: positions.len() });
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Schedule("register positions must be strictly increasing"));
        }
        if let Some(&last) = positions.last() {
            if last >= register_qubits {
                return Err(Error::QubitIndex { qubit: last, num_qubits: register_qubits });
            }
        }
        let scale = 1.0 / (1usize << (register_qubits - self.num_qubits)) as f64;
        let shifts: Vec<usize> = positions.iter().map(|&q| register_qubits - 1 - q).collect();
        let mass = (0..1usize << register_qubits)
            .map(|x| {
                let local = shifts.iter().fold(0usize, |acc, &s| (acc << 1) | ((x >> s) & 1));
                self.mass[local] * scale
            })
            .collect();
        Ok(Self { num_qubits: register_qubits, mass, norm_constant: self.norm_constant })
    }
}

/// Integer index `x = sum_i b_i 2^(n-i)` of a bitstring, first bit most
/// significant.
pub fn index_of_bitstring(bits: &[u8]) -> Result<usize> {
    bits.iter().enumerate().try_fold(0usize, |acc, (position, &value)| match value {
        0 | 1 => Ok((acc << 1) | value as usize),
        _ => Err(Error::NonBinary { position, value }),
    })
}

fn aligned(p: &ProbabilityVector, q: &ProbabilityVector, m: usize) -> Result<(ProbabilityVector, ProbabilityVector)> {
    Ok((p.at_resolution(m)?, q.at_resolution(m)?))
}

/// `KL(p | q)` in nats at resolution `m`, with `q` clamped at [`KL_EPSILON`].
pub fn kl_divergence(p: &ProbabilityVector, q: &ProbabilityVector, m: usize) -> Result<f64> {
    kl_divergence_clamped(p, q, m, KL_EPSILON)
}

pub fn kl_divergence_clamped(p: &ProbabilityVector, q: &ProbabilityVector, m: usize, epsilon: f64) -> Result<f64> {
    let (p, q) = aligned(p, q, m)?;
    Ok(kl_terms(p.mass(), q.mass(), epsilon))
}

pub(crate) fn kl_terms(p: &[f64], q: &[f64], epsilon: f64) -> f64 {
    p.iter().zip(q).filter(|(pi, _)| **pi > 0.0).map(|(&pi, &qi)| pi * log(pi / qi.max(epsilon))).sum()
}

/// Total variation distance at resolution `m`.
pub fn tvd(p: &ProbabilityVector, q: &ProbabilityVector, m: usize) -> Result<f64> {
    let (p, q) = aligned(p, q, m)?;
    let d: f64 = p.mass().iter().zip(q.mass()).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

/// Classical fidelity `(sum_x sqrt(p q))^2` at resolution `m`.
pub fn classical_fidelity(p: &ProbabilityVector, q: &ProbabilityVector, m: usize) -> Result<f64> {
    let (p, q) = aligned(p, q, m)?;
    let s: f64 = p.mass().iter().zip(q.mass()).map(|(a, b)| sqrt(a * b)).sum();
    Ok((s * s).clamp(0.0, 1.0))
}
