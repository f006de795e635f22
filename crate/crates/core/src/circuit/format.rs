// SPDX-License-Identifier: Apache-2.0

//! Versioned JSON circuit documents.
//!
//! ```json
//! {"version": 1, "num_qubits": 2, "num_clbits": 1, "data_qubits": [0, 1],
//!  "gates": [{"kind": "one_qubit", "name": "h", "qubits": [0]},
//!            {"kind": "measure", "name": "z", "qubits": [0], "clbits": [0]},
//!            {"kind": "conditional_pauli", "name": "x", "qubits": [1],
//!             "condition": {"bits": [0], "parity": 1}}]}
//! ```
//!
//! Virtual markers carry an `edge` index and teleport-expanded gates a `group` index.

use serde::{Deserialize, Serialize};

use super::{Basis, Circuit, Gate, GateKind, OneQubitGate, Pauli, TwoQubitGate};
use crate::error::{Error, Result};

pub const CIRCUIT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CircuitDoc {
    version: u32,
    num_qubits: usize,
    num_clbits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    data_qubits: Option<Vec<usize>>,
    gates: Vec<GateDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindDoc {
    OneQubit,
    TwoQubit,
    VirtualTwoQubit,
    Measure,
    Reset,
    ConditionalPauli,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConditionDoc {
    bits: Vec<usize>,
    parity: u8,
}

#[derive(Debug, Serialize, Deserialize)]
struct GateDoc {
    kind: KindDoc,
    name: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    clbits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    condition: Option<ConditionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<usize>,
}

fn to_doc(gate: &Gate) -> GateDoc {
    let mut doc = GateDoc {
        kind: KindDoc::OneQubit,
        name: String::new(),
        qubits: gate.qubits.clone(),
        clbits: Vec::new(),
        params: Vec::new(),
        condition: None,
        edge: None,
        group: gate.group,
    };
    match &gate.kind {
        GateKind::OneQubit(g) => {
            doc.name = g.name().into();
            doc.params = g.params();
        }
        GateKind::TwoQubit(g) => {
            doc.kind = KindDoc::TwoQubit;
            doc.name = g.name().into();
            doc.params = g.params();
        }
        GateKind::VirtualTwoQubit { gate: g, edge } => {
            doc.kind = KindDoc::VirtualTwoQubit;
            doc.name = g.name().into();
            doc.params = g.params();
            doc.edge = Some(*edge);
        }
        GateKind::Measure(basis) => {
            doc.kind = KindDoc::Measure;
            doc.name = match basis {
                Basis::Z => "z",
                Basis::X => "x",
            }
            .into();
            doc.clbits = gate.clbits.clone();
        }
        GateKind::Reset => {
            doc.kind = KindDoc::Reset;
            doc.name = "reset".into();
        }
        GateKind::ConditionalPauli { pauli, parity } => {
            doc.kind = KindDoc::ConditionalPauli;
            doc.name = match pauli {
                Pauli::X => "x",
                Pauli::Z => "z",
            }
            .into();
            doc.condition = Some(ConditionDoc {
                bits: gate.clbits.clone(),
                parity: u8::from(*parity),
            });
        }
    }
    doc
}

fn from_doc(index: usize, doc: GateDoc) -> Result<Gate> {
    let bad = |reason: String| Error::InvalidCircuit {
        gate: index,
        reason,
    };
    let unknown = || bad(format!("unknown {:?} gate '{}'", doc.kind, doc.name));
    let two = |doc: &GateDoc| -> Result<TwoQubitGate> {
        TwoQubitGate::from_name(&doc.name, &doc.params)
            .map_err(|e| bad(e.to_string()))?
            .ok_or_else(unknown)
    };
    let (kind, clbits) = match doc.kind {
        KindDoc::OneQubit => (
            GateKind::OneQubit(
                OneQubitGate::from_name(&doc.name, &doc.params).ok_or_else(unknown)?,
            ),
            Vec::new(),
        ),
        KindDoc::TwoQubit => (GateKind::TwoQubit(two(&doc)?), Vec::new()),
        KindDoc::VirtualTwoQubit => {
            let edge = doc
                .edge
                .ok_or_else(|| bad("virtual gate without edge index".into()))?;
            (
                GateKind::VirtualTwoQubit {
                    gate: two(&doc)?,
                    edge,
                },
                Vec::new(),
            )
        }
        KindDoc::Measure => {
            let basis = match doc.name.as_str() {
                "z" => Basis::Z,
                "x" => Basis::X,
                _ => return Err(unknown()),
            };
            (GateKind::Measure(basis), doc.clbits.clone())
        }
        KindDoc::Reset => (GateKind::Reset, Vec::new()),
        KindDoc::ConditionalPauli => {
            let pauli = match doc.name.as_str() {
                "x" => Pauli::X,
                "z" => Pauli::Z,
                _ => return Err(unknown()),
            };
            let cond = doc
                .condition
                .as_ref()
                .ok_or_else(|| bad("conditional gate without condition".into()))?;
            let parity = match cond.parity {
                0 => false,
                1 => true,
                p => return Err(bad(format!("parity must be 0 or 1, got {p}"))),
            };
            (
                GateKind::ConditionalPauli { pauli, parity },
                cond.bits.clone(),
            )
        }
    };
    Ok(Gate {
        kind,
        qubits: doc.qubits,
        clbits,
        group: doc.group,
    })
}

pub fn to_json(circuit: &Circuit) -> Result<String> {
    let doc = CircuitDoc {
        version: CIRCUIT_FORMAT_VERSION,
        num_qubits: circuit.num_qubits,
        num_clbits: circuit.num_clbits,
        data_qubits: circuit.data_qubits.clone(),
        gates: circuit.gates.iter().map(to_doc).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses and validates a circuit document.
pub fn from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = serde_json::from_str(text)?;
    if doc.version != CIRCUIT_FORMAT_VERSION {
        return Err(Error::Version {
            found: doc.version,
            expected: CIRCUIT_FORMAT_VERSION,
        });
    }
    let gates = doc
        .gates
        .into_iter()
        .enumerate()
        .map(|(i, g)| from_doc(i, g))
        .collect::<Result<Vec<_>>>()?;
    let circuit = Circuit {
        num_qubits: doc.num_qubits,
        num_clbits: doc.num_clbits,
        gates,
        data_qubits: doc.data_qubits,
    };
    circuit.validate()?;
    Ok(circuit)
}

pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Circuit> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_file(circuit: &Circuit, path: impl AsRef<std::path::Path>) -> Result<()> {
    let mut text = to_json(circuit)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
