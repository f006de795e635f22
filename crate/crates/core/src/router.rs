// SPDX-License-Identifier: Apache-2.0

//! SABRE-style SWAP insertion over a coupling map that may carry virtual edges.
//!
//! Routing is confined to the data region (the image of the initial layout),
//! so auxiliary qubits stay untouched for teleportation. Pairs joined by a
//! virtual edge count as distance 1; SWAPs are only placed on native edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{build_dag, Circuit, Gate, GateKind, TwoQubitGate};
use crate::error::{Error, Result};
use crate::topology::{CouplingMap, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RouterParams {
    pub extended_set_size: usize,
    pub extended_weight: f64,
    pub decay_increment: f64,
    pub decay_reset_interval: usize,
    pub seed: u64,
}

impl Default for RouterParams {
    fn default() -> Self {
        Self {
            extended_set_size: 20,
            extended_weight: 0.5,
            decay_increment: 0.001,
            decay_reset_interval: 5,
            seed: 0,
        }
    }
}

impl RouterParams {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("extended_weight", self.extended_weight),
            ("decay_increment", self.decay_increment),
        ] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::RoutingInfeasible(format!(
                    "{name} must lie in [0, 1], got {w}"
                )));
            }
        }
        if self.decay_reset_interval == 0 {
            return Err(Error::RoutingInfeasible(
                "decay_reset_interval must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutedCircuit {
    /// Physical circuit; gates on virtual edges are `VirtualTwoQubit` markers.
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swap_count: usize,
    /// Marker count per virtual-edge endpoint pair `(u, v)`, `u < v`.
    pub virtual_uses: BTreeMap<(usize, usize), usize>,
}

/// Violations found by [`validate_routing`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RoutingReport {
    pub pass: bool,
    /// `(gate index, reason)`.
    pub violations: Vec<(usize, String)>,
}

struct State<'a> {
    map: &'a CouplingMap,
    /// logical -> physical
    l2p: Vec<usize>,
    /// physical -> logical
    p2l: Vec<Option<usize>>,
    dist: BTreeMap<usize, Vec<usize>>,
    decay: Vec<f64>,
}

impl State<'_> {
    fn d(&self, a: usize, b: usize) -> usize {
        self.dist[&a][b]
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l[a] = lb;
        self.p2l[b] = la;
        if let Some(l) = la {
            self.l2p[l] = b;
        }
        if let Some(l) = lb {
            self.l2p[l] = a;
        }
    }
}

/// Routes `circuit` (over logical qubits) onto `map` starting from `initial`.
pub fn route(
    circuit: &Circuit,
    map: &CouplingMap,
    initial: &Layout,
    params: &RouterParams,
) -> Result<RoutedCircuit> {
    params.validate()?;
    initial.validate_for(map)?;
    if circuit.num_qubits > initial.len() {
        return Err(Error::InvalidLayout(format!(
            "layout places {} qubits, circuit uses {}",
            initial.len(),
            circuit.num_qubits
        )));
    }
    if !circuit.is_physical() {
        return Err(Error::RoutingInfeasible(
            "input already contains virtual-edge markers".into(),
        ));
    }
    let dag = build_dag(circuit)?;
    let region = initial.data_set();

    // native distances inside the data region, shortened to 1 across virtual edges
    let mut dist = BTreeMap::new();
    for &p in &region {
        let row = map.distances_within(p, |q| region.contains(&q));
        let mut out = vec![usize::MAX; map.num_physical()];
        for &q in &region {
            out[q] = row[q].ok_or_else(|| {
                Error::RoutingInfeasible(format!(
                    "data qubits {p} and {q} are not connected through data qubits"
                ))
            })?;
        }
        dist.insert(p, out);
    }
    for e in map.virtual_edges() {
        let (u, v) = e.endpoints();
        if region.contains(&u) && region.contains(&v) {
            dist.get_mut(&u).expect("region")[v] = 1;
            dist.get_mut(&v).expect("region")[u] = 1;
        }
    }
    let region_edges: Vec<(usize, usize)> = map
        .native_edges()
        .iter()
        .copied()
        .filter(|(a, b)| region.contains(a) && region.contains(b))
        .collect();

    let mut p2l = vec![None; map.num_physical()];
    for (l, &p) in initial.mapping().iter().enumerate() {
        p2l[p] = Some(l);
    }
    let mut st = State {
        map,
        l2p: initial.mapping().to_vec(),
        p2l,
        dist,
        decay: vec![1.0; map.num_physical()],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut out = Circuit::new(map.num_physical(), circuit.num_clbits);
    out.data_qubits = Some(region.iter().copied().collect());
    let mut swap_count = 0;
    let mut virtual_uses = BTreeMap::new();

    let n = circuit.gates.len();
    let mut remaining: Vec<usize> = (0..n).map(|g| dag.predecessors(g).len()).collect();
    let mut front: BTreeSet<usize> = (0..n).filter(|&g| remaining[g] == 0).collect();
    let mut swaps_since_progress = 0usize;
    let mut swaps_since_reset = 0usize;
    let stall_limit = 10 * region.len().max(2);

    while !front.is_empty() {
        // execute everything executable, repeatedly
        let mut progressed = false;
        loop {
            let ready: Vec<usize> = front
                .iter()
                .copied()
                .filter(|&g| executable(&st, &circuit.gates[g]))
                .collect();
            if ready.is_empty() {
                break;
            }
            for g in ready {
                front.remove(&g);
                emit(&st, &circuit.gates[g], &mut out, &mut virtual_uses);
                for &s in dag.successors(g) {
                    remaining[s] -= 1;
                    if remaining[s] == 0 {
                        front.insert(s);
                    }
                }
            }
            progressed = true;
        }
        if front.is_empty() {
            break;
        }
        if progressed {
            swaps_since_progress = 0;
            st.decay.iter_mut().for_each(|d| *d = 1.0);
        }

        let blocked: Vec<usize> = front.iter().copied().collect();
        if swaps_since_progress >= stall_limit {
            // release valve: walk the closest blocked gate together along a shortest path
            let &g = blocked
                .iter()
                .min_by_key(|&&g| {
                    let q = &circuit.gates[g].qubits;
                    (st.d(st.l2p[q[0]], st.l2p[q[1]]), g)
                })
                .expect("front is non-empty");
            let q = &circuit.gates[g].qubits;
            let path = shortest_path(map, &region, st.l2p[q[0]], st.l2p[q[1]]);
            for w in path.windows(2).take(path.len().saturating_sub(2)) {
                out.push(Gate::swap(w[0], w[1]));
                st.swap(w[0], w[1]);
                swap_count += 1;
            }
            swaps_since_progress = 0;
            continue;
        }

        let extended = extended_set(circuit, &dag, &front, &remaining, params.extended_set_size);
        let active: BTreeSet<usize> = blocked
            .iter()
            .flat_map(|&g| circuit.gates[g].qubits.iter().map(|&l| st.l2p[l]))
            .collect();
        let candidates: Vec<(usize, usize)> = region_edges
            .iter()
            .copied()
            .filter(|(a, b)| active.contains(a) || active.contains(b))
            .collect();
        let mut best = Vec::new();
        let mut best_score = f64::INFINITY;
        for &(a, b) in &candidates {
            st.swap(a, b);
            let score = st.decay[a].max(st.decay[b])
                * (sum_distance(&st, circuit, &blocked) / blocked.len() as f64
                    + if extended.is_empty() {
                        0.0
                    } else {
                        params.extended_weight * sum_distance(&st, circuit, &extended)
                            / extended.len() as f64
                    });
            st.swap(a, b);
            if score < best_score - 1e-12 {
                best_score = score;
                best.clear();
                best.push((a, b));
            } else if (score - best_score).abs() <= 1e-12 {
                best.push((a, b));
            }
        }
        let &(a, b) = best.choose(&mut rng).ok_or_else(|| {
            Error::RoutingInfeasible("no SWAP candidate touches the blocked gates".into())
        })?;
        out.push(Gate::swap(a, b));
        st.swap(a, b);
        swap_count += 1;
        swaps_since_progress += 1;
        swaps_since_reset += 1;
        st.decay[a] += params.decay_increment;
        st.decay[b] += params.decay_increment;
        if swaps_since_reset >= params.decay_reset_interval {
            swaps_since_reset = 0;
            st.decay.iter_mut().for_each(|d| *d = 1.0);
        }
    }

    let final_layout = Layout::new(st.l2p.clone())?;
    Ok(RoutedCircuit {
        circuit: out,
        initial_layout: initial.clone(),
        final_layout,
        swap_count,
        virtual_uses,
    })
}

fn executable(st: &State<'_>, gate: &Gate) -> bool {
    if !gate.is_two_qubit() {
        return true;
    }
    let (a, b) = (st.l2p[gate.qubits[0]], st.l2p[gate.qubits[1]]);
    st.map.is_native(a, b) || st.map.virtual_edge_between(a, b).is_some()
}

fn emit(
    st: &State<'_>,
    gate: &Gate,
    out: &mut Circuit,
    uses: &mut BTreeMap<(usize, usize), usize>,
) {
    let placed = gate.remap_qubits(|l| st.l2p[l]);
    match &placed.kind {
        GateKind::TwoQubit(two) => {
            let (a, b) = (placed.qubits[0], placed.qubits[1]);
            if st.map.is_native(a, b) {
                out.push(placed);
            } else {
                let edge = st
                    .map
                    .virtual_edge_between(a, b)
                    .expect("executable gate sits on an edge");
                *uses.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                let mut marker = Gate::virtual_two(*two, a, b, edge);
                marker.group = placed.group;
                out.push(marker);
            }
        }
        _ => {
            out.push(placed);
        }
    }
}

fn sum_distance(st: &State<'_>, circuit: &Circuit, gates: &[usize]) -> f64 {
    gates
        .iter()
        .map(|&g| {
            let q = &circuit.gates[g].qubits;
            st.d(st.l2p[q[0]], st.l2p[q[1]]) as f64
        })
        .sum()
}

/// Upcoming two-qubit gates reached breadth-first from the front layer.
fn extended_set(
    circuit: &Circuit,
    dag: &crate::circuit::Dag,
    front: &BTreeSet<usize>,
    remaining: &[usize],
    limit: usize,
) -> Vec<usize> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut pending: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = front.iter().copied().collect();
    while let Some(g) = queue.pop_front() {
        for &s in dag.successors(g) {
            let left = pending.entry(s).or_insert(remaining[s]);
            *left -= 1;
            if *left == 0 {
                if circuit.gates[s].is_two_qubit() {
                    out.push(s);
                    if out.len() >= limit {
                        return out;
                    }
                }
                queue.push_back(s);
            }
        }
    }
    out
}

/// Shortest native path from `a` to `b` inside `region`, lexicographically smallest.
fn shortest_path(map: &CouplingMap, region: &BTreeSet<usize>, a: usize, b: usize) -> Vec<usize> {
    let dist = map.distances_within(b, |q| region.contains(&q));
    let mut path = vec![a];
    let mut cur = a;
    while cur != b {
        let d = dist[cur].expect("region is connected");
        cur = *map
            .neighbors(cur)
            .iter()
            .find(|&&n| region.contains(&n) && dist[n] == Some(d - 1))
            .expect("a neighbour is one step closer");
        path.push(cur);
    }
    path
}

/// Checks that every two-qubit gate sits on a native edge or, as a marker, on
/// the virtual edge it names, and that SWAPs use native edges only.
pub fn validate_routing(routed: &RoutedCircuit, map: &CouplingMap) -> RoutingReport {
    let mut violations = Vec::new();
    let mut uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, g) in routed.circuit.gates.iter().enumerate() {
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= map.num_physical()) {
            violations.push((i, format!("qubit {q} outside the map")));
            continue;
        }
        match &g.kind {
            GateKind::TwoQubit(two) => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                if !map.is_native(a, b) {
                    let what = if *two == TwoQubitGate::Swap {
                        "SWAP"
                    } else {
                        two.name()
                    };
                    violations.push((i, format!("{what} on non-native pair ({a}, {b})")));
                }
            }
            GateKind::VirtualTwoQubit { gate, edge } => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                match map.virtual_edges().get(*edge) {
                    Some(e) if e.endpoints() == (a.min(b), a.max(b)) => {
                        if *gate == TwoQubitGate::Swap {
                            violations.push((i, "SWAP on a virtual edge".into()));
                        }
                        *uses.entry(e.endpoints()).or_insert(0) += 1;
                    }
                    _ => violations.push((
                        i,
                        format!("marker on ({a}, {b}) does not match virtual edge {edge}"),
                    )),
                }
            }
            _ => {}
        }
    }
    if uses != routed.virtual_uses {
        violations.push((
            routed.circuit.gates.len(),
            "recorded virtual-edge uses disagree with the markers".into(),
        ));
    }
    RoutingReport {
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{extend_with_virtual, line_map, VirtualEdge};

    fn map5cycle_line() -> CouplingMap {
        // 0-1-2 data line with aux 3 bridging 0 and 2
        CouplingMap::new(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap()
    }

    #[test]
    fn native_circuit_is_untouched() {
        let c = Circuit::with_gates(3, 0, vec![Gate::h(0), Gate::cx(0, 1), Gate::cx(2, 1)]);
        let r = route(
            &c,
            &line_map(3).unwrap(),
            &Layout::identity(3),
            &RouterParams::default(),
        )
        .unwrap();
        assert_eq!(r.swap_count, 0);
        assert_eq!(r.circuit.gates, c.gates);
        assert_eq!(r.final_layout, Layout::identity(3));
    }

    #[test]
    fn one_swap_on_three_line() {
        let c = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2)]);
        let map = line_map(3).unwrap();
        let r = route(&c, &map, &Layout::identity(3), &RouterParams::default()).unwrap();
        assert_eq!(r.swap_count, 1);
        assert_eq!(r.circuit.len(), 2);
        assert!(validate_routing(&r, &map).pass);
    }

    #[test]
    fn virtual_edge_is_used_directly() {
        let map = map5cycle_line();
        let ext = extend_with_virtual(&map, &[VirtualEdge::new(0, 2, vec![3])]).unwrap();
        let c = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2)]);
        let r = route(&c, &ext, &Layout::identity(3), &RouterParams::default()).unwrap();
        assert_eq!(r.swap_count, 0);
        assert!(r.circuit.gates[0].is_virtual());
        assert_eq!(r.virtual_uses, BTreeMap::from([((0, 2), 1)]));
        assert!(validate_routing(&r, &ext).pass);
    }

    #[test]
    fn validation_catches_bad_gates() {
        let map = line_map(3).unwrap();
        let bad = RoutedCircuit {
            circuit: Circuit::with_gates(3, 0, vec![Gate::h(1), Gate::cx(0, 2)]),
            initial_layout: Layout::identity(3),
            final_layout: Layout::identity(3),
            swap_count: 0,
            virtual_uses: BTreeMap::new(),
        };
        let report = validate_routing(&bad, &map);
        assert!(!report.pass);
        assert_eq!(report.violations[0].0, 1);
        let ext =
            extend_with_virtual(&map5cycle_line(), &[VirtualEdge::new(0, 2, vec![3])]).unwrap();
        let swap = RoutedCircuit {
            circuit: Circuit::with_gates(
                4,
                0,
                vec![Gate::virtual_two(TwoQubitGate::Swap, 0, 2, 0)],
            ),
            virtual_uses: BTreeMap::from([((0, 2), 1)]),
            ..bad
        };
        assert!(!validate_routing(&swap, &ext).pass);
    }

    #[test]
    fn disconnected_region_is_infeasible() {
        let map = line_map(4).unwrap();
        let c = Circuit::with_gates(2, 0, vec![Gate::cx(0, 1)]);
        let layout = Layout::new(vec![0, 2]).unwrap();
        assert!(matches!(
            route(&c, &map, &layout, &RouterParams::default()),
            Err(Error::RoutingInfeasible(_))
        ));
    }

    #[test]
    fn seeds_are_deterministic() {
        let c = Circuit::with_gates(
            5,
            0,
            vec![
                Gate::cx(0, 4),
                Gate::cx(1, 3),
                Gate::cx(4, 2),
                Gate::cx(0, 3),
            ],
        );
        let map = line_map(5).unwrap();
        let p = RouterParams::default().with_seed(9);
        let a = route(&c, &map, &Layout::identity(5), &p).unwrap();
        let b = route(&c, &map, &Layout::identity(5), &p).unwrap();
        assert_eq!(a, b);
    }
}
