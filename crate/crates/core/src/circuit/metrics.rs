// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{asap_layers, build_dag, Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Class of an ASAP layer for temporal-depth accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerClass {
    /// Only single-qubit gates, measurements, resets or conditional Paulis.
    SingleQubit,
    /// At least one native two-qubit gate and no teleported gate.
    TwoQubit,
    /// At least one teleported (virtual-edge) two-qubit gate.
    Teleported,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerProfile {
    pub n_1q: usize,
    pub n_2q: usize,
    pub n_tele: usize,
}

impl LayerProfile {
    pub fn total(&self) -> usize {
        self.n_1q + self.n_2q + self.n_tele
    }
}

/// Layer durations and two-qubit error probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingErrorModel<T> {
    pub t_1q: T,
    pub t_2q: T,
    pub t_tele: T,
    pub p_2q: T,
    pub p_tele: T,
}

impl<T: Scalar> TimingErrorModel<T> {
    pub const TELE_TIME_FACTOR: f64 = 3.0;
    pub const TELE_ERROR_FACTOR: f64 = 10.0;

    pub fn new(t_1q: T, t_2q: T, t_tele: T, p_2q: T, p_tele: T) -> Result<Self> {
        let model = Self {
            t_1q,
            t_2q,
            t_tele,
            p_2q,
            p_tele,
        };
        model.validate()?;
        Ok(model)
    }

    /// Teleported time and error derived from native values by the given factors.
    pub fn from_factors(
        t_1q: T,
        t_2q: T,
        p_2q: T,
        time_factor: T,
        error_factor: T,
    ) -> Result<Self> {
        Self::new(t_1q, t_2q, time_factor * t_2q, p_2q, error_factor * p_2q)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        let one = T::one();
        for (name, t) in [
            ("t_1q", self.t_1q),
            ("t_2q", self.t_2q),
            ("t_tele", self.t_tele),
        ] {
            if !(t > zero) || !t.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "{name} must be positive, got {t}"
                )));
            }
        }
        for (name, p) in [("p_2q", self.p_2q), ("p_tele", self.p_tele)] {
            if !(p >= zero && p < one) {
                return Err(Error::InvalidModel(format!(
                    "{name} must lie in [0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Default for TimingErrorModel<T> {
    /// `t_2q = 1`, `t_1q = 0.1`, `t_tele = 3 t_2q`, `p_2q = 0.01`, `p_tele = 10 p_2q`.
    fn default() -> Self {
        let t_2q = T::one();
        let p_2q = T::of(0.01);
        Self {
            t_1q: T::of(0.1),
            t_2q,
            t_tele: T::of(Self::TELE_TIME_FACTOR) * t_2q,
            p_2q,
            p_tele: T::of(Self::TELE_ERROR_FACTOR) * p_2q,
        }
    }
}

/// Two-qubit gate accounting for a circuit. SWAPs count as three CNOTs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    /// All two-qubit gates, virtual markers included.
    pub n_cnot: usize,
    /// Virtual markers plus distinct expanded teleport groups.
    pub n_tele: usize,
    /// Two-qubit gates with both operands among the data qubits.
    pub n_cnot_data: usize,
    /// Native two-qubit gates on any operands.
    pub n_g: usize,
    pub n_measure: usize,
    pub n_reset: usize,
}

fn classify(circuit: &Circuit, layer: &[usize]) -> LayerClass {
    let gates = layer.iter().map(|&i| &circuit.gates[i]);
    let mut class = LayerClass::SingleQubit;
    for g in gates {
        match g.kind {
            GateKind::VirtualTwoQubit { .. } => return LayerClass::Teleported,
            GateKind::TwoQubit(_) => class = LayerClass::TwoQubit,
            _ => {}
        }
    }
    class
}

/// Per-class layer counts of the ASAP layering.
pub fn layer_profile(circuit: &Circuit) -> Result<LayerProfile> {
    let dag = build_dag(circuit)?;
    let mut profile = LayerProfile::default();
    for layer in asap_layers(&dag) {
        match classify(circuit, &layer) {
            LayerClass::SingleQubit => profile.n_1q += 1,
            LayerClass::TwoQubit => profile.n_2q += 1,
            LayerClass::Teleported => profile.n_tele += 1,
        }
    }
    Ok(profile)
}

/// Plain layer depth.
pub fn depth(circuit: &Circuit) -> Result<usize> {
    Ok(asap_layers(&build_dag(circuit)?).len())
}

/// Layer counts weighted by per-class durations.
pub fn temporal_depth<T: Scalar>(circuit: &Circuit, model: &TimingErrorModel<T>) -> Result<T> {
    Ok(profile_duration(&layer_profile(circuit)?, model))
}

pub(crate) fn profile_duration<T: Scalar>(
    profile: &LayerProfile,
    model: &TimingErrorModel<T>,
) -> T {
    model.t_1q * T::of_usize(profile.n_1q)
        + model.t_2q * T::of_usize(profile.n_2q)
        + model.t_tele * T::of_usize(profile.n_tele)
}

pub fn gate_counts(circuit: &Circuit, data_qubits: &BTreeSet<usize>) -> GateCounts {
    let mut counts = GateCounts::default();
    let mut groups = BTreeSet::new();
    let is_data = |g: &Gate| g.qubits.iter().all(|q| data_qubits.contains(q));
    for g in &circuit.gates {
        if let Some(group) = g.group {
            groups.insert(group);
        }
        match &g.kind {
            GateKind::TwoQubit(two) => {
                let w = two.cnot_weight();
                counts.n_cnot += w;
                counts.n_g += w;
                if is_data(g) {
                    counts.n_cnot_data += w;
                }
            }
            GateKind::VirtualTwoQubit { .. } => {
                counts.n_cnot += 1;
                counts.n_tele += 1;
                if is_data(g) {
                    counts.n_cnot_data += 1;
                }
            }
            GateKind::Measure(_) => counts.n_measure += 1,
            GateKind::Reset => counts.n_reset += 1,
            _ => {}
        }
    }
    counts.n_tele += groups.len();
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, TwoQubitGate};

    fn vcx(a: usize, b: usize) -> Gate {
        Gate::virtual_two(TwoQubitGate::Cnot, a, b, 0)
    }

    fn model() -> TimingErrorModel<f64> {
        TimingErrorModel::new(0.1, 1.0, 3.0, 0.01, 0.1).unwrap()
    }

    #[test]
    fn profile_examples() {
        let c = Circuit::with_gates(1, 0, vec![Gate::h(0)]);
        assert_eq!(
            layer_profile(&c).unwrap(),
            LayerProfile {
                n_1q: 1,
                n_2q: 0,
                n_tele: 0
            }
        );
        // native and virtual in the same layer: teleported wins
        let c = Circuit::with_gates(4, 0, vec![Gate::cx(0, 1), vcx(2, 3)]);
        assert_eq!(
            layer_profile(&c).unwrap(),
            LayerProfile {
                n_1q: 0,
                n_2q: 0,
                n_tele: 1
            }
        );
        let c = Circuit::with_gates(3, 0, vec![Gate::h(0), Gate::cx(0, 1), vcx(0, 2)]);
        assert_eq!(
            layer_profile(&c).unwrap(),
            LayerProfile {
                n_1q: 1,
                n_2q: 1,
                n_tele: 1
            }
        );
    }

    #[test]
    fn temporal_depth_examples() {
        assert_eq!(temporal_depth(&Circuit::new(2, 0), &model()).unwrap(), 0.0);
        let one = Circuit::with_gates(2, 0, vec![Gate::cx(0, 1)]);
        assert_eq!(temporal_depth(&one, &model()).unwrap(), 1.0);
        let seq = Circuit::with_gates(3, 0, vec![Gate::h(0), Gate::cx(0, 1), vcx(0, 2)]);
        assert!((temporal_depth(&seq, &model()).unwrap() - 4.1).abs() < 1e-12);
        let seq32 = temporal_depth::<f32>(
            &seq,
            &TimingErrorModel::new(0.1f32, 1.0, 3.0, 0.01, 0.1).unwrap(),
        )
        .unwrap();
        assert!((seq32 - 4.1).abs() < 1e-6);
    }

    #[test]
    fn default_model_ratios() {
        let m = TimingErrorModel::<f64>::default();
        assert_eq!(m.t_tele, 3.0 * m.t_2q);
        assert!((m.p_tele - 10.0 * m.p_2q).abs() < 1e-15);
        assert!(TimingErrorModel::new(0.1, 0.0, 3.0, 0.01, 0.1).is_err());
        assert!(TimingErrorModel::new(0.1, 1.0, 3.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn counting_rule() {
        let c = Circuit::with_gates(3, 0, vec![Gate::cx(0, 1), Gate::cx(1, 2)]);
        let counts = gate_counts(&c, &[0, 1].into());
        assert_eq!(counts.n_cnot, 2);
        assert_eq!(counts.n_cnot_data, 1);
        assert_eq!(counts.n_g, 2);
        let swap = Circuit::with_gates(2, 0, vec![Gate::swap(0, 1)]);
        let counts = gate_counts(&swap, &[0, 1].into());
        assert_eq!((counts.n_cnot, counts.n_g, counts.n_cnot_data), (3, 3, 3));
    }
}
