// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{cached_cnot_template, synthesize, TemplateKind};
use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::router::RoutedCircuit;
use crate::topology::CouplingMap;

/// Replaces every virtual-edge marker of a routed circuit by its teleport template.
pub fn expand_teleportations(routed: &RoutedCircuit, map: &CouplingMap) -> Result<Circuit> {
    expand_circuit(&routed.circuit, map)
}

/// Replaces every virtual-edge marker by a template instance on the edge's
/// auxiliary path. Each instance gets fresh classical bits and its own group tag.
pub fn expand_circuit(circuit: &Circuit, map: &CouplingMap) -> Result<Circuit> {
    let edges = map.virtual_edges();
    let aux: BTreeSet<usize> = edges
        .iter()
        .flat_map(|e| e.aux_path().iter().copied())
        .collect();
    let mut out = Circuit {
        gates: Vec::with_capacity(circuit.gates.len()),
        ..circuit.clone()
    };
    let mut next_group = circuit
        .gates
        .iter()
        .filter_map(|g| g.group)
        .max()
        .map_or(0, |g| g + 1);
    for (index, gate) in circuit.gates.iter().enumerate() {
        let fail = |reason: String| Error::Expansion {
            gate: index,
            reason,
        };
        let (two, edge) = match &gate.kind {
            GateKind::VirtualTwoQubit { gate, edge } => (gate, *edge),
            _ => {
                if let Some(q) = gate.qubits.iter().find(|q| aux.contains(q)) {
                    return Err(fail(format!(
                        "qubit {q} is reserved for a teleportation path"
                    )));
                }
                out.gates.push(gate.clone());
                continue;
            }
        };
        let ve = edges
            .get(edge)
            .ok_or_else(|| fail(format!("unknown virtual edge {edge}")))?;
        let (c, t) = (gate.qubits[0], gate.qubits[1]);
        let (u, v) = ve.endpoints();
        if !((c == u && t == v) || (c == v && t == u)) {
            return Err(fail(format!(
                "operands ({c}, {t}) do not match virtual edge {edge} = ({u}, {v})"
            )));
        }
        let kind = TemplateKind::for_gate(two)
            .ok_or_else(|| fail(format!("{} cannot be teleported", two.name())))?;
        let n = ve.n_aux();
        let template = match kind {
            TemplateKind::Cnot => cached_cnot_template(n)?,
            _ => std::sync::Arc::new(synthesize(n, kind)?),
        };
        let path = ve.path_from(c);
        let physical = |q: usize| match q {
            0 => c,
            q if q == n + 1 => t,
            q => path[q - 1],
        };
        let offset = out.num_clbits;
        out.num_clbits += template.body.num_clbits;
        for g in &template.body.gates {
            let mut g = g.remap_qubits(physical);
            for b in &mut g.clbits {
                *b += offset;
            }
            g.group = Some(next_group);
            out.gates.push(g);
        }
        next_group += 1;
    }
    Ok(out)
}
