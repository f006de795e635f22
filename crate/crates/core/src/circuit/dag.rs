// SPDX-License-Identifier: Apache-2.0

use super::Circuit;
use crate::error::Result;

/// A qubit or classical-bit wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Qubit(usize),
    Clbit(usize),
}

/// An arc `from -> to` along `wire`; `from` is the previous gate on that wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub wire: Wire,
}

/// Wire-dependency graph of a circuit. Node `i` is gate `i`; arcs always point
/// from a lower to a higher index, so gate order is a topological order.
#[derive(Clone, Debug, Default)]
pub struct Dag {
    arcs: Vec<Arc>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl Dag {
    pub fn num_nodes(&self) -> usize {
        self.preds.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Distinct predecessors of `node`, ascending.
    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.preds[node]
    }

    /// Distinct successors of `node`, ascending.
    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succs[node]
    }
}

pub fn build_dag(circuit: &Circuit) -> Result<Dag> {
    circuit.validate()?;
    let n = circuit.gates.len();
    let mut last_on_qubit: Vec<Option<usize>> = vec![None; circuit.num_qubits];
    let mut last_on_clbit: Vec<Option<usize>> = vec![None; circuit.num_clbits];
    let mut dag = Dag {
        arcs: Vec::new(),
        preds: vec![Vec::new(); n],
        succs: vec![Vec::new(); n],
    };
    for (index, gate) in circuit.gates.iter().enumerate() {
        let qubit_wires = gate.qubits.iter().map(|&q| Wire::Qubit(q));
        let clbit_wires = gate.clbits.iter().map(|&b| Wire::Clbit(b));
        for wire in qubit_wires.chain(clbit_wires) {
            let slot = match wire {
                Wire::Qubit(q) => &mut last_on_qubit[q],
                Wire::Clbit(b) => &mut last_on_clbit[b],
            };
            if let Some(from) = slot.replace(index) {
                dag.arcs.push(Arc {
                    from,
                    to: index,
                    wire,
                });
                if !dag.preds[index].contains(&from) {
                    dag.preds[index].push(from);
                    dag.succs[from].push(index);
                }
            }
        }
        dag.preds[index].sort_unstable();
    }
    Ok(dag)
}

/// Groups gates into ASAP layers: a gate sits one layer after its latest predecessor.
pub fn asap_layers(dag: &Dag) -> Vec<Vec<usize>> {
    let mut level = vec![0usize; dag.num_nodes()];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for node in 0..dag.num_nodes() {
        let l = dag.preds[node]
            .iter()
            .map(|&p| level[p] + 1)
            .max()
            .unwrap_or(0);
        level[node] = l;
        if layers.len() <= l {
            layers.resize_with(l + 1, Vec::new);
        }
        layers[l].push(node);
    }
    layers
}
