// SPDX-License-Identifier: Apache-2.0

//! Circuit intermediate representation, dependency DAG, layering and metrics.

mod dag;
pub mod format;
mod gate;
mod metrics;

pub use dag::{asap_layers, build_dag, Dag, Wire};
pub use gate::{Basis, Gate, GateKind, OneQubitGate, Pauli, TwoQubitGate, Unitary2};
pub(crate) use metrics::profile_duration;
pub use metrics::{
    depth, gate_counts, layer_profile, temporal_depth, GateCounts, LayerClass, LayerProfile,
    TimingErrorModel,
};

use crate::error::{Error, Result};

/// Ordered gate list over qubit and classical-bit wires.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub gates: Vec<Gate>,
    /// Physical qubits that hold algorithm state, when known.
    pub data_qubits: Option<Vec<usize>>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            num_qubits,
            num_clbits,
            gates: Vec::new(),
            data_qubits: None,
        }
    }

    pub fn with_gates(num_qubits: usize, num_clbits: usize, gates: Vec<Gate>) -> Self {
        Self {
            gates,
            ..Self::new(num_qubits, num_clbits)
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Checks index bounds, operand arity and distinctness, and that every
    /// classical bit is written by a measurement before it is read.
    pub fn validate(&self) -> Result<()> {
        let mut written = vec![false; self.num_clbits];
        for (index, gate) in self.gates.iter().enumerate() {
            let fail = |reason: String| Error::InvalidCircuit {
                gate: index,
                reason,
            };
            let (qubits, clbits) = gate.expected_arity();
            if gate.qubits.len() != qubits {
                return Err(fail(format!(
                    "{} expects {qubits} qubit(s), got {}",
                    gate.name(),
                    gate.qubits.len()
                )));
            }
            match clbits {
                Some(n) if gate.clbits.len() != n => {
                    return Err(fail(format!(
                        "{} expects {n} classical bit(s), got {}",
                        gate.name(),
                        gate.clbits.len()
                    )))
                }
                None if gate.clbits.is_empty() => {
                    return Err(fail("conditional gate reads no classical bits".into()))
                }
                _ => {}
            }
            if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.num_qubits) {
                return Err(fail(format!(
                    "qubit {q} out of range (circuit has {})",
                    self.num_qubits
                )));
            }
            if gate.qubits.len() == 2 && gate.qubits[0] == gate.qubits[1] {
                return Err(fail(format!("repeated qubit {}", gate.qubits[0])));
            }
            if let Some(&b) = gate.clbits.iter().find(|&&b| b >= self.num_clbits) {
                return Err(fail(format!(
                    "classical bit {b} out of range (circuit has {})",
                    self.num_clbits
                )));
            }
            match gate.kind {
                GateKind::Measure(_) => written[gate.clbits[0]] = true,
                GateKind::ConditionalPauli { .. } => {
                    let mut seen = gate.clbits.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    if seen.len() != gate.clbits.len() {
                        return Err(fail("condition names a classical bit twice".into()));
                    }
                    if let Some(&b) = gate.clbits.iter().find(|&&b| !written[b]) {
                        return Err(fail(format!(
                            "classical bit {b} read before any measurement writes it"
                        )));
                    }
                }
                _ => {}
            }
        }
        if let Some(data) = &self.data_qubits {
            if let Some(&q) = data.iter().find(|&&q| q >= self.num_qubits) {
                return Err(Error::InvalidCircuit {
                    gate: self.gates.len(),
                    reason: format!("data qubit {q} out of range"),
                });
            }
        }
        Ok(())
    }

    /// True when no virtual-edge markers remain.
    pub fn is_physical(&self) -> bool {
        !self.gates.iter().any(Gate::is_virtual)
    }

    /// True when the circuit has no measurement, reset or classical control.
    pub fn is_static(&self) -> bool {
        self.gates.iter().all(|g| {
            matches!(
                g.kind,
                GateKind::OneQubit(_) | GateKind::TwoQubit(_) | GateKind::VirtualTwoQubit { .. }
            )
        })
    }

    /// Replaces each native SWAP by three alternating CNOTs.
    pub fn lower_swaps(&self) -> Self {
        let mut out = Self {
            gates: Vec::with_capacity(self.gates.len()),
            ..self.clone()
        };
        for gate in &self.gates {
            match gate.kind {
                GateKind::TwoQubit(TwoQubitGate::Swap) => {
                    let (a, b) = (gate.qubits[0], gate.qubits[1]);
                    for (c, t) in [(a, b), (b, a), (a, b)] {
                        let mut cx = Gate::cx(c, t);
                        cx.group = gate.group;
                        out.gates.push(cx);
                    }
                }
                _ => out.gates.push(gate.clone()),
            }
        }
        out
    }
}
