//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of the amplitude index, so the basis
//! state `|b_1 ... b_n>` lives at `x = sum_i b_i 2^(n-i)`.
//!
//! Rotation conventions: `RY(t) = exp(-i t Y / 2)`, `RZ(t) = exp(-i t Z / 2)`
//! and `RZZ(t) = exp(-i t Z(x)Z / 2)`.

use alloc::vec;
use alloc::vec::Vec;

use libm::{cos, sin, sqrt};
use num_complex::Complex64;

use crate::dist::ProbabilityVector;
use crate::{Error, Result};

/// Default register cap: 2^24 complex doubles is 256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The gate set of the engine. Angles are supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "gate", rename_all = "lowercase"))]
pub enum GateKind {
    H { qubit: usize },
    X { qubit: usize },
    Ry { qubit: usize },
    Rz { qubit: usize },
    Rzz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
}

impl GateKind {
    /// True for the rotation gates that take an angle.
    pub fn is_rotation(&self) -> bool {
        matches!(self, GateKind::Ry { .. } | GateKind::Rz { .. } | GateKind::Rzz { .. })
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateKind::Rzz { .. } | GateKind::Cnot { .. })
    }

    /// Qubits the gate acts on, in operand order.
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            GateKind::H { qubit } | GateKind::X { qubit } | GateKind::Ry { qubit } | GateKind::Rz { qubit } => {
                ([qubit, qubit], 1)
            }
            GateKind::Rzz { a, b } => ([a, b], 2),
            GateKind::Cnot { control, target } => ([control, target], 2),
        }
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(usize) -> usize) -> GateKind {
        match *self {
            GateKind::H { qubit } => GateKind::H { qubit: f(qubit) },
            GateKind::X { qubit } => GateKind::X { qubit: f(qubit) },
            GateKind::Ry { qubit } => GateKind::Ry { qubit: f(qubit) },
            GateKind::Rz { qubit } => GateKind::Rz { qubit: f(qubit) },
            GateKind::Rzz { a, b } => GateKind::Rzz { a: f(a), b: f(b) },
            GateKind::Cnot { control, target } => GateKind::Cnot { control: f(control), target: f(target) },
        }
    }

    /// Checks qubit indices against a register width.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let (qs, len) = self.qubits();
        for &q in &qs[..len] {
            if q >= num_qubits {
                return Err(Error::QubitIndex { qubit: q, num_qubits });
            }
        }
        if len == 2 && qs[0] == qs[1] {
            return Err(Error::DuplicateQubit(qs[0]));
        }
        Ok(())
    }
}

/// Complex amplitudes of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>` on `n` qubits, capped at [`DEFAULT_MAX_QUBITS`].
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::zero_state_capped(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_state_capped(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > max_qubits {
            return Err(Error::Capacity { requested: num_qubits, max: max_qubits });
        }
        let mut amplitudes = vec![ZERO; 1usize << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Builds a state from arbitrary amplitudes, rescaling to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        let num_qubits = crate::exact_log2(len).ok_or(Error::NotPowerOfTwo(len))?;
        if num_qubits == 0 || num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: num_qubits, max: DEFAULT_MAX_QUBITS });
        }
        let norm = sqrt(amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidMass);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex { qubit, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// Applies one gate. `angle` is ignored for H, X and CNOT.
    pub fn apply_gate(&mut self, gate: GateKind, angle: f64) -> Result<()> {
        gate.validate(self.num_qubits)?;
        if gate.is_rotation() && !angle.is_finite() {
            return Err(Error::NonFiniteAngle);
        }
        self.apply_unchecked(gate, angle);
        Ok(())
    }

    /// Applies the inverse of `gate` at `angle`.
    pub fn apply_gate_inverse(&mut self, gate: GateKind, angle: f64) -> Result<()> {
        self.apply_gate(gate, -angle)
    }

    pub(crate) fn apply_unchecked(&mut self, gate: GateKind, angle: f64) {
        match gate {
            GateKind::H { qubit } => self.hadamard(qubit),
            GateKind::X { qubit } => self.pauli_x(qubit),
            GateKind::Ry { qubit } => self.ry(qubit, angle),
            GateKind::Rz { qubit } => self.rz(qubit, angle),
            GateKind::Rzz { a, b } => self.rzz(a, b, angle),
            GateKind::Cnot { control, target } => self.cnot(control, target),
        }
    }

    /// Calls `f(i, i | mask)` for every index pair differing only in `mask`.
    #[inline]
    fn for_pairs(&mut self, qubit: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let stride = self.mask(qubit);
        for chunk in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a, b);
            }
        }
    }

    fn hadamard(&mut self, qubit: usize) {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        self.for_pairs(qubit, |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * s;
            *b = (x - y) * s;
        });
    }

    fn pauli_x(&mut self, qubit: usize) {
        self.for_pairs(qubit, core::mem::swap);
    }

    fn ry(&mut self, qubit: usize, angle: f64) {
        let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
        self.for_pairs(qubit, |a, b| {
            let (x, y) = (*a, *b);
            *a = x * c - y * s;
            *b = x * s + y * c;
        });
    }

    fn rz(&mut self, qubit: usize, angle: f64) {
        let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
        let lower = Complex64::new(c, -s);
        let upper = Complex64::new(c, s);
        self.for_pairs(qubit, |a, b| {
            *a *= lower;
            *b *= upper;
        });
    }

    fn rzz(&mut self, qa: usize, qb: usize, angle: f64) {
        let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
        let even = Complex64::new(c, -s);
        let odd = Complex64::new(c, s);
        let (ma, mb) = (self.mask(qa), self.mask(qb));
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if ((i & ma) == 0) == ((i & mb) == 0) {
                *amp *= even;
            } else {
                *amp *= odd;
            }
        }
    }

    fn cnot(&mut self, control: usize, target: usize) {
        let (mc, mt) = (self.mask(control), self.mask(target));
        for i in 0..self.amplitudes.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amplitudes.swap(i, i | mt);
            }
        }
    }

    /// Born-rule distribution `|c(x)|^2`.
    pub fn born_distribution(&self) -> ProbabilityVector {
        let mass = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        ProbabilityVector::from_mass_unchecked(self.num_qubits, mass)
    }

    /// Probability of reading `qubit` as 0.
    pub fn marginal_prob0(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        let p: f64 = self.amplitudes.iter().enumerate().filter(|(i, _)| i & mask == 0).map(|(_, a)| a.norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// `<Z>` on one qubit, identical to `2 P_0 - 1`.
    pub fn z_expectation(&self, qubit: usize) -> Result<f64> {
        Ok(2.0 * self.marginal_prob0(qubit)? - 1.0)
    }

    /// `<other| G |self>` where `G` is the generator of a rotation gate.
    ///
    /// Used by the adjoint sweep: the derivative of `exp(-i t G / 2)` with
    /// respect to `t` contributes `Im <lambda|G|phi>` to the gradient.
    pub(crate) fn generator_overlap(&self, other: &[Complex64], gate: GateKind) -> Complex64 {
        let amps = &self.amplitudes;
        match gate {
            GateKind::Rz { qubit } => {
                let mask = self.mask(qubit);
                let mut acc = ZERO;
                for (i, (l, p)) in other.iter().zip(amps).enumerate() {
                    let term = l.conj() * p;
                    if i & mask == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
            GateKind::Rzz { a, b } => {
                let (ma, mb) = (self.mask(a), self.mask(b));
                let mut acc = ZERO;
                for (i, (l, p)) in other.iter().zip(amps).enumerate() {
                    let term = l.conj() * p;
                    if ((i & ma) == 0) == ((i & mb) == 0) {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
            GateKind::Ry { qubit } => {
                // Y|0> = i|1>, Y|1> = -i|0>.
                let stride = self.mask(qubit);
                let mut acc = ZERO;
                for (lc, pc) in other.chunks_exact(2 * stride).zip(amps.chunks_exact(2 * stride)) {
                    let (l0, l1) = lc.split_at(stride);
                    let (p0, p1) = pc.split_at(stride);
                    for j in 0..stride {
                        acc += l0[j].conj() * p1[j] * Complex64::new(0.0, -1.0);
                        acc += l1[j].conj() * p0[j] * Complex64::new(0.0, 1.0);
                    }
                }
                acc
            }
            _ => ZERO,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    use crate::rng::uniform;

    fn random_state(n: usize, seed: u64) -> Statevector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n).map(|_| Complex64::new(uniform(&mut rng) - 0.5, uniform(&mut rng) - 0.5)).collect();
        Statevector::from_amplitudes(amps).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn zero_state_examples() {
        let s = Statevector::zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), ZERO]);
        let s = Statevector::zero_state(2).unwrap();
        assert_eq!(s.amplitudes().len(), 4);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let s = Statevector::zero_state(21).unwrap();
        assert_eq!(s.amplitudes().len(), 2_097_152);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn zero_state_rejects_out_of_range() {
        assert!(matches!(Statevector::zero_state(0), Err(Error::Capacity { .. })));
        assert!(matches!(Statevector::zero_state(25), Err(Error::Capacity { .. })));
        assert!(Statevector::zero_state_capped(25, 26).is_ok());
    }

    #[test]
    fn hadamard_makes_plus() {
        let mut s = Statevector::zero_state(1).unwrap();
        s.apply_gate(GateKind::H { qubit: 0 }, 0.0).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], r, 1e-15));
        assert!(close(s.amplitudes()[1], r, 1e-15));
    }

    #[test]
    fn ry_pi_flips() {
        let mut s = Statevector::zero_state(1).unwrap();
        s.apply_gate(GateKind::Ry { qubit: 0 }, PI).unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rzz_phase_on_00() {
        let theta = 0.731;
        let mut s = Statevector::zero_state(2).unwrap();
        s.apply_gate(GateKind::Rzz { a: 0, b: 1 }, theta).unwrap();
        let expected = Complex64::new(cos(theta / 2.0), -sin(theta / 2.0));
        assert!(close(s.amplitudes()[0], expected, 1e-15));
    }

    #[test]
    fn cnot_and_x_move_basis_states() {
        let mut s = Statevector::zero_state(2).unwrap();
        s.apply_gate(GateKind::X { qubit: 0 }, 0.0).unwrap();
        s.apply_gate(GateKind::Cnot { control: 0, target: 1 }, 0.0).unwrap();
        assert_eq!(s.born_distribution().mass(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn invalid_gates_rejected() {
        let mut s = Statevector::zero_state(2).unwrap();
        assert_eq!(s.apply_gate(GateKind::H { qubit: 2 }, 0.0), Err(Error::QubitIndex { qubit: 2, num_qubits: 2 }));
        assert_eq!(s.apply_gate(GateKind::Rzz { a: 1, b: 1 }, 0.1), Err(Error::DuplicateQubit(1)));
        assert_eq!(s.apply_gate(GateKind::Ry { qubit: 0 }, f64::NAN), Err(Error::NonFiniteAngle));
    }

    #[test]
    fn born_distribution_examples() {
        let mut s = Statevector::zero_state(1).unwrap();
        s.apply_gate(GateKind::H { qubit: 0 }, 0.0).unwrap();
        let p = s.born_distribution();
        assert!((p.mass()[0] - 0.5).abs() < 1e-15 && (p.mass()[1] - 0.5).abs() < 1e-15);

        // |10>: first qubit is the most significant bit.
        let mut s = Statevector::zero_state(2).unwrap();
        s.apply_gate(GateKind::X { qubit: 0 }, 0.0).unwrap();
        assert_eq!(s.born_distribution().mass(), &[0.0, 0.0, 1.0, 0.0]);

        let s = random_state(3, 7);
        let p = s.born_distribution();
        for (m, a) in p.mass().iter().zip(s.amplitudes()) {
            assert_eq!(*m, a.re * a.re + a.im * a.im);
        }
        assert!((p.mass().iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn index_convention_for_every_basis_state() {
        let n = 4;
        for x in 0..1usize << n {
            let mut s = Statevector::zero_state(n).unwrap();
            for q in 0..n {
                if (x >> (n - 1 - q)) & 1 == 1 {
                    s.apply_gate(GateKind::X { qubit: q }, 0.0).unwrap();
                }
            }
            let bits: Vec<u8> = (0..n).map(|q| ((x >> (n - 1 - q)) & 1) as u8).collect();
            let idx = crate::dist::index_of_bitstring(&bits).unwrap();
            assert_eq!(idx, x);
            assert_eq!(s.born_distribution().mass()[idx], 1.0);
        }
    }

    #[test]
    fn marginals_and_z() {
        let s = Statevector::zero_state(1).unwrap();
        assert_eq!(s.marginal_prob0(0).unwrap(), 1.0);
        assert_eq!(s.z_expectation(0).unwrap(), 1.0);

        let mut s = Statevector::zero_state(2).unwrap();
        s.apply_gate(GateKind::H { qubit: 0 }, 0.0).unwrap();
        assert!((s.marginal_prob0(0).unwrap() - 0.5).abs() < 1e-15);
        assert!(s.z_expectation(0).unwrap().abs() < 1e-15);
        assert!(matches!(s.marginal_prob0(2), Err(Error::QubitIndex { .. })));
        assert!(matches!(s.z_expectation(5), Err(Error::QubitIndex { .. })));

        let s = random_state(3, 11);
        let p = s.born_distribution();
        for q in 0..3 {
            // Summation oracle over the complementary bits.
            let mut oracle = 0.0;
            for x in 0..8usize {
                if (x >> (2 - q)) & 1 == 0 {
                    oracle += p.mass()[x];
                }
            }
            let p0 = s.marginal_prob0(q).unwrap();
            assert!((p0 - oracle).abs() < 1e-14);
            assert!((s.z_expectation(q).unwrap() - (2.0 * p0 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn ry_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = random_state(3, 5);
        for _ in 0..100 {
            let theta = (uniform(&mut rng) - 0.5) * 4.0 * PI;
            let q = (uniform(&mut rng) * 3.0) as usize;
            let mut s = base.clone();
            s.apply_gate(GateKind::Ry { qubit: q }, theta).unwrap();
            s.apply_gate(GateKind::Ry { qubit: q }, -theta).unwrap();
            for (a, b) in s.amplitudes().iter().zip(base.amplitudes()) {
                assert!(close(*a, *b, 1e-10));
            }
        }
    }

    #[test]
    fn gates_preserve_norm_and_locality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut s = random_state(4, 1);
        for step in 0..200 {
            let q = step % 4;
            let r = (q + 1 + step % 3) % 4;
            let gate = match step % 6 {
                0 => GateKind::H { qubit: q },
                1 => GateKind::X { qubit: q },
                2 => GateKind::Ry { qubit: q },
                3 => GateKind::Rz { qubit: q },
                4 => GateKind::Rzz { a: q, b: r },
                _ => GateKind::Cnot { control: q, target: r },
            };
            let before = s.clone();
            s.apply_gate(gate, uniform(&mut rng) * 2.0 * PI).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            if let (qs, 1) = gate.qubits() {
                // Pairs that differ in other qubits keep their pair-norms.
                let mask = 1usize << (3 - qs[0]);
                for i in (0..16).filter(|i| i & mask == 0) {
                    let pre = before.amplitudes()[i].norm_sqr() + before.amplitudes()[i | mask].norm_sqr();
                    let post = s.amplitudes()[i].norm_sqr() + s.amplitudes()[i | mask].norm_sqr();
                    assert!((pre - post).abs() < 1e-12);
                }
            }
        }
    }
}
