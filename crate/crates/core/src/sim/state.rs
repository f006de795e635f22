// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex;
use rand::Rng;

use crate::circuit::{OneQubitGate, TwoQubitGate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix2<T> = [[Complex<T>; 2]; 2];
/// Two-qubit operator; basis index is `bit(first operand) + 2 * bit(second operand)`.
pub type Matrix4<T> = [[Complex<T>; 4]; 4];

/// Dense little-endian statevector: qubit `k` is bit `k` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

fn c<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

impl<T: Scalar> StateVector<T> {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amplitudes[0] = Complex::new(T::one(), T::zero());
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is one.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Simulation(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let state = Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let drift = (state.norm() - T::one()).abs();
        if drift > T::of(Self::NORM_TOLERANCE) {
            return Err(Error::Simulation(format!("state norm off by {drift}")));
        }
        Ok(state)
    }

    /// Haar-distributed random state (normalized complex Gaussian vector).
    pub fn random(num_qubits: usize, rng: &mut impl Rng) -> Self {
        let mut gaussian = || {
            // Box-Muller
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let mut amps: Vec<Complex<f64>> = (0..1usize << num_qubits)
            .map(|_| Complex::new(gaussian(), gaussian()))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self {
            num_qubits,
            amplitudes: amps
                .into_iter()
                .map(|a| Complex::new(T::of(a.re), T::of(a.im)))
                .collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Places this state's qubit `i` onto qubit `positions[i]` of a larger
    /// register of `total` qubits whose other qubits are `|0>`.
    pub fn embed(&self, positions: &[usize], total: usize) -> Self {
        assert_eq!(positions.len(), self.num_qubits);
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << total];
        for (x, amp) in self.amplitudes.iter().enumerate() {
            let mut y = 0usize;
            for (i, &p) in positions.iter().enumerate() {
                if x >> i & 1 == 1 {
                    y |= 1 << p;
                }
            }
            amplitudes[y] = *amp;
        }
        Self {
            num_qubits: total,
            amplitudes,
        }
    }

    pub fn apply_matrix2(&mut self, m: &Matrix2<T>, q: usize) {
        let mask = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | mask];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_matrix4(&mut self, m: &Matrix4<T>, q0: usize, q1: usize) {
        let (m0, m1) = (1usize << q0, 1usize << q1);
        let zero = Complex::new(T::zero(), T::zero());
        for i in 0..self.amplitudes.len() {
            if i & (m0 | m1) != 0 {
                continue;
            }
            let idx = [i, i | m0, i | m1, i | m0 | m1];
            let old = idx.map(|k| self.amplitudes[k]);
            for (row, &k) in idx.iter().enumerate() {
                self.amplitudes[k] = (0..4).fold(zero, |acc, col| acc + m[row][col] * old[col]);
            }
        }
    }

    pub fn apply_one(&mut self, gate: &OneQubitGate, q: usize) {
        self.apply_matrix2(&one_qubit_matrix(gate), q);
    }

    pub fn apply_two(&mut self, gate: &TwoQubitGate, q0: usize, q1: usize) {
        match gate {
            TwoQubitGate::Cnot => {
                let (c, t) = (1usize << q0, 1usize << q1);
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            TwoQubitGate::Swap => {
                let (a, b) = (1usize << q0, 1usize << q1);
                for i in 0..self.amplitudes.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amplitudes.swap(i, i ^ a ^ b);
                    }
                }
            }
            _ => self.apply_matrix4(&two_qubit_matrix(gate), q0, q1),
        }
    }

    /// Probability that qubit `q` reads 1.
    pub fn probability_one(&self, q: usize) -> T {
        let mask = 1usize << q;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `(P(0), P(1))` for qubit `q`, each summed directly and normalized by
    /// their total so neither is polluted by drift in the other.
    pub fn probabilities(&self, q: usize) -> (T, T) {
        let mask = 1usize << q;
        let (mut s0, mut s1) = (T::zero(), T::zero());
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i & mask == 0 {
                s0 += a.norm_sqr();
            } else {
                s1 += a.norm_sqr();
            }
        }
        let total = s0 + s1;
        if total <= T::zero() {
            return (T::zero(), T::zero());
        }
        (s0 / total, s1 / total)
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Returns the outcome
    /// probability; a zero-probability projection leaves the state untouched.
    pub fn project(&mut self, q: usize, outcome: bool) -> T {
        let mask = 1usize << q;
        let (p0, p1) = self.probabilities(q);
        let p = if outcome { p1 } else { p0 };
        if p <= T::zero() {
            return T::zero();
        }
        let kept: T = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & mask != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let scale = T::one() / kept.sqrt();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if (i & mask != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex::new(T::zero(), T::zero());
            }
        }
        p
    }
}

pub fn one_qubit_matrix<T: Scalar>(gate: &OneQubitGate) -> Matrix2<T> {
    let z = c::<T>(0.0, 0.0);
    let one = c::<T>(1.0, 0.0);
    let phase = |t: f64| c::<T>(t.cos(), t.sin());
    match *gate {
        OneQubitGate::H => {
            let h = c::<T>(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        OneQubitGate::X => [[z, one], [one, z]],
        OneQubitGate::Z => [[one, z], [z, -one]],
        OneQubitGate::S => [[one, z], [z, c(0.0, 1.0)]],
        OneQubitGate::T => [[one, z], [z, phase(std::f64::consts::FRAC_PI_4)]],
        OneQubitGate::Rz(t) => [[phase(-t / 2.0), z], [z, phase(t / 2.0)]],
        OneQubitGate::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        OneQubitGate::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        OneQubitGate::U3(theta, phi, lambda) => {
            let (s, co) = (theta / 2.0).sin_cos();
            [
                [c(co, 0.0), -phase(lambda) * T::of(s)],
                [phase(phi) * T::of(s), phase(phi + lambda) * T::of(co)],
            ]
        }
    }
}

/// Matrix of a two-qubit gate with the first operand as the low bit.
pub fn two_qubit_matrix<T: Scalar>(gate: &TwoQubitGate) -> Matrix4<T> {
    let z = c::<T>(0.0, 0.0);
    let one = c::<T>(1.0, 0.0);
    let mut m = [[z; 4]; 4];
    match gate {
        TwoQubitGate::Cnot => {
            m[0][0] = one;
            m[2][2] = one;
            m[1][3] = one;
            m[3][1] = one;
        }
        TwoQubitGate::Cz => {
            for i in 0..3 {
                m[i][i] = one;
            }
            m[3][3] = -one;
        }
        TwoQubitGate::Swap => {
            m[0][0] = one;
            m[3][3] = one;
            m[1][2] = one;
            m[2][1] = one;
        }
        TwoQubitGate::Rzz(theta) => {
            let (s, co) = (theta / 2.0).sin_cos();
            let even = c::<T>(co, -s);
            let odd = c::<T>(co, s);
            m[0][0] = even;
            m[1][1] = odd;
            m[2][2] = odd;
            m[3][3] = even;
        }
        TwoQubitGate::Cu(u) => {
            let u = u.matrix();
            let cv = |x: num_complex::Complex64| c::<T>(x.re, x.im);
            m[0][0] = one;
            m[2][2] = one;
            // control is bit 0: indices 1 (target 0) and 3 (target 1)
            m[1][1] = cv(u[0][0]);
            m[1][3] = cv(u[0][1]);
            m[3][1] = cv(u[1][0]);
            m[3][3] = cv(u[1][1]);
        }
    }
    m
}
