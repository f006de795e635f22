// SPDX-License-Identifier: Apache-2.0

//! Constant-depth teleported two-qubit gates over auxiliary chains and the
//! pass that splices them into routed circuits.
//!
//! Body qubits are ordered `[control, a_1, ..., a_N, target]`; classical bit
//! `i - 1` records the measurement of `a_i`.

mod expand;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::circuit::{Circuit, Gate, GateKind, Pauli, TwoQubitGate, Unitary2};
use crate::error::{Error, Result};

pub use expand::{expand_circuit, expand_teleportations};

/// Moments in the CNOT schedule: prep, two entangling layers, two measurement
/// rounds, last correction.
pub const CNOT_SCHEDULE_LEN: usize = 6;
/// Moments in the controlled-gate schedule: the CNOT fan-out, the gate, then
/// the X-basis readout of the copy.
pub const CU_SCHEDULE_LEN: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TemplateKind {
    Cnot,
    Cu(Unitary2),
    Rzz(f64),
    /// Controlled-Z, realized with a native CZ in place of a general controlled-U.
    Cz,
}

impl TemplateKind {
    /// Kind able to carry a given two-qubit gate; SWAP has none.
    pub fn for_gate(gate: &TwoQubitGate) -> Option<Self> {
        match *gate {
            TwoQubitGate::Cnot => Some(Self::Cnot),
            TwoQubitGate::Cz => Some(Self::Cz),
            TwoQubitGate::Rzz(theta) => Some(Self::Rzz(theta)),
            TwoQubitGate::Cu(u) => Some(Self::Cu(u)),
            TwoQubitGate::Swap => None,
        }
    }

    /// The two-qubit gate this template implements between control and target.
    pub fn gate(&self) -> TwoQubitGate {
        match *self {
            Self::Cnot => TwoQubitGate::Cnot,
            Self::Cu(u) => TwoQubitGate::Cu(u),
            Self::Rzz(theta) => TwoQubitGate::Rzz(theta),
            Self::Cz => TwoQubitGate::Cz,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeleportTemplate {
    pub kind: TemplateKind,
    pub n_aux: usize,
    pub body: Circuit,
    /// Gate indices of `body` grouped into parallel moments; moments may be
    /// empty for short chains.
    pub schedule: Vec<Vec<usize>>,
    /// CNOTs with an operand on the control or target.
    pub data_touching_cnots: usize,
    /// Length of `schedule`; independent of `n_aux`.
    pub quantum_layer_depth: usize,
}

impl TeleportTemplate {
    pub fn control(&self) -> usize {
        0
    }

    pub fn target(&self) -> usize {
        self.n_aux + 1
    }
}

/// Gates of a chain that fans `c`'s computational value out to `end` along
/// `inner` (all starting in `|0>`), split into the first five moments.
struct Fanout {
    moments: Vec<Vec<Gate>>,
    z_bits: Vec<usize>,
    x_bits: Vec<usize>,
    z_aux: Vec<usize>,
    x_aux: Vec<usize>,
}

/// Vertices `v_0 = control, v_1..v_k = inner, v_{k+1} = end`. Odd chain edges
/// host Bell pairs (H on the left vertex, then CNOT); even edges link them.
/// Odd-position auxiliaries are read in Z, even-position ones in X.
fn fanout(control: usize, inner: &[usize], end: usize) -> Fanout {
    let chain: Vec<usize> = std::iter::once(control)
        .chain(inner.iter().copied())
        .chain(std::iter::once(end))
        .collect();
    let k = inner.len();
    let mut moments = vec![Vec::new(); 5];
    let mut out = Fanout {
        moments: Vec::new(),
        z_bits: Vec::new(),
        x_bits: Vec::new(),
        z_aux: Vec::new(),
        x_aux: Vec::new(),
    };
    for j in 0..=k {
        let (a, b) = (chain[j], chain[j + 1]);
        if j % 2 == 1 {
            moments[0].push(Gate::h(a));
            moments[1].push(Gate::cx(a, b));
        } else {
            moments[2].push(Gate::cx(a, b));
        }
    }
    for (i, &a) in inner.iter().enumerate() {
        let bit = i;
        if (i + 1) % 2 == 1 {
            moments[3].push(Gate::measure(a, bit));
            out.z_bits.push(bit);
            out.z_aux.push(a);
        } else {
            moments[3].push(Gate::h(a));
            moments[4].push(Gate::measure(a, bit));
            out.x_bits.push(bit);
            out.x_aux.push(a);
        }
    }
    out.moments = moments;
    out
}

fn assemble(kind: TemplateKind, n_aux: usize, moments: Vec<Vec<Gate>>) -> TeleportTemplate {
    let mut body = Circuit::new(n_aux + 2, n_aux);
    body.data_qubits = Some(vec![0, n_aux + 1]);
    let mut schedule = Vec::with_capacity(moments.len());
    for moment in moments {
        let start = body.gates.len();
        body.gates.extend(moment);
        schedule.push((start..body.gates.len()).collect());
    }
    let t = n_aux + 1;
    let data_touching_cnots = body
        .gates
        .iter()
        .filter(|g| matches!(g.kind, GateKind::TwoQubit(TwoQubitGate::Cnot)))
        .filter(|g| g.qubits.iter().any(|&q| q == 0 || q == t))
        .count();
    TeleportTemplate {
        kind,
        n_aux,
        body,
        quantum_layer_depth: schedule.len(),
        schedule,
        data_touching_cnots,
    }
}

/// Teleported CNOT from qubit 0 to qubit `n_aux + 1` through `n_aux` auxiliaries.
pub fn synth_teleported_cnot(n_aux: usize) -> Result<TeleportTemplate> {
    if n_aux == 0 {
        return Err(Error::Teleport(
            "a teleported CNOT needs at least one auxiliary; use a native CNOT".into(),
        ));
    }
    let t = n_aux + 1;
    let inner: Vec<usize> = (1..=n_aux).collect();
    let f = fanout(0, &inner, t);
    let mut moments = f.moments;
    moments.push(Vec::new());
    if !f.z_bits.is_empty() {
        moments[4].push(Gate::conditional(Pauli::X, t, f.z_bits.clone(), true));
    }
    moments[4].extend(f.z_aux.iter().map(|&a| Gate::reset(a)));
    if !f.x_bits.is_empty() {
        moments[5].push(Gate::conditional(Pauli::Z, 0, f.x_bits.clone(), true));
    }
    moments[5].extend(f.x_aux.iter().map(|&a| Gate::reset(a)));
    debug_assert_eq!(moments.len(), CNOT_SCHEDULE_LEN);
    Ok(assemble(TemplateKind::Cnot, n_aux, moments))
}

/// Teleported controlled-U, RZZ or CZ: the control value is fanned out to
/// `a_N`, the gate acts on `(a_N, target)`, and `a_N` is read in the X basis.
pub fn synth_teleported_cu(n_aux: usize, kind: TemplateKind) -> Result<TeleportTemplate> {
    if n_aux == 0 {
        return Err(Error::Teleport(
            "a teleported controlled gate needs at least one auxiliary".into(),
        ));
    }
    if kind == TemplateKind::Cnot {
        return Err(Error::Teleport(
            "CNOT uses the dedicated CNOT template".into(),
        ));
    }
    let t = n_aux + 1;
    let copy = n_aux;
    let inner: Vec<usize> = (1..n_aux).collect();
    let f = fanout(0, &inner, copy);
    let mut moments = f.moments;
    moments.resize(CU_SCHEDULE_LEN, Vec::new());
    if !f.z_bits.is_empty() {
        moments[4].push(Gate::conditional(Pauli::X, copy, f.z_bits.clone(), true));
    }
    moments[4].extend(f.z_aux.iter().map(|&a| Gate::reset(a)));
    moments[5].push(Gate::two(kind.gate(), copy, t));
    moments[5].extend(f.x_aux.iter().map(|&a| Gate::reset(a)));
    moments[6].push(Gate::h(copy));
    let copy_bit = n_aux - 1;
    moments[7].push(Gate::measure(copy, copy_bit));
    let mut z_bits = f.x_bits;
    z_bits.push(copy_bit);
    moments[8].push(Gate::conditional(Pauli::Z, 0, z_bits, true));
    moments[8].push(Gate::reset(copy));
    Ok(assemble(kind, n_aux, moments))
}

/// Template for any teleportable gate kind.
pub fn synthesize(n_aux: usize, kind: TemplateKind) -> Result<TeleportTemplate> {
    match kind {
        TemplateKind::Cnot => synth_teleported_cnot(n_aux),
        _ => synth_teleported_cu(n_aux, kind),
    }
}

/// Shared CNOT templates keyed by chain length; parameterized kinds are cheap
/// to rebuild and are not cached.
pub fn cached_cnot_template(n_aux: usize) -> Result<Arc<TeleportTemplate>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<TeleportTemplate>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("template cache poisoned").get(&n_aux) {
        return Ok(Arc::clone(t));
    }
    let template = Arc::new(synth_teleported_cnot(n_aux)?);
    let mut guard = cache.write().expect("template cache poisoned");
    Ok(Arc::clone(guard.entry(n_aux).or_insert(template)))
}
