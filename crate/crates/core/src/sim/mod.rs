// SPDX-License-Identifier: Apache-2.0

//! Dense statevector simulation with mid-circuit measurement, exhaustive
//! branch enumeration and equivalence oracles.

mod state;

use std::collections::BTreeSet;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Basis, Circuit, GateKind, OneQubitGate, Pauli};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::teleport::TeleportTemplate;
use crate::topology::Layout;

pub use state::{one_qubit_matrix, two_qubit_matrix, Matrix2, Matrix4, StateVector};

/// At most this many measurements per enumerated circuit (2^20 branches).
pub const MAX_MEASUREMENTS: usize = 20;
/// Largest register the equivalence oracle will allocate.
pub const MAX_SIM_QUBITS: usize = 24;
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-9;
/// Outcome probabilities below this are treated as impossible.
const ZERO_PROBABILITY: f64 = 1e-14;

/// Drift allowance: the nominal bound, widened for low-precision scalars.
fn drift_tolerance<T: Scalar>() -> T {
    T::of(NORM_DRIFT_TOLERANCE).max(T::epsilon() * T::of(64.0))
}

/// One leaf of the measurement-outcome tree.
#[derive(Clone, Debug)]
pub struct Branch<T> {
    /// Outcomes of the measurements in the order they were encountered.
    pub outcomes: Vec<bool>,
    /// Final classical register.
    pub clbits: Vec<bool>,
    pub probability: T,
    pub state: StateVector<T>,
    /// Set when an outcome along this branch was impossible; `state` is then arbitrary.
    pub zero_probability: bool,
}

struct Pending<T> {
    next: usize,
    state: StateVector<T>,
    outcomes: Vec<bool>,
    clbits: Vec<bool>,
    probability: T,
    /// Reached through an impossible outcome; emitted without further simulation.
    dead: bool,
}

/// Enumerates every measurement-outcome branch depth-first, outcome 0 first.
pub fn enumerate_branches<T: Scalar>(
    circuit: &Circuit,
    input: &StateVector<T>,
) -> Result<Vec<Branch<T>>> {
    circuit.validate()?;
    if input.num_qubits() != circuit.num_qubits {
        return Err(Error::Simulation(format!(
            "state has {} qubits, circuit {}",
            input.num_qubits(),
            circuit.num_qubits
        )));
    }
    if !circuit.is_physical() {
        return Err(Error::Simulation(
            "virtual-edge markers must be expanded before simulation".into(),
        ));
    }
    let measurements = circuit
        .gates
        .iter()
        .filter(|g| matches!(g.kind, GateKind::Measure(_)))
        .count();
    if measurements > MAX_MEASUREMENTS {
        return Err(Error::BranchCap {
            measurements,
            cap: MAX_MEASUREMENTS,
        });
    }

    let zero_p = T::of(ZERO_PROBABILITY);
    let mut leaves = Vec::new();
    let mut stack = vec![Pending {
        next: 0,
        state: input.clone(),
        outcomes: Vec::new(),
        clbits: vec![false; circuit.num_clbits],
        probability: T::one(),
        dead: false,
    }];
    while let Some(mut node) = stack.pop() {
        while !node.dead && node.next < circuit.gates.len() {
            let gate = &circuit.gates[node.next];
            node.next += 1;
            let q = gate.qubits[0];
            match &gate.kind {
                GateKind::OneQubit(g) => node.state.apply_one(g, q),
                GateKind::TwoQubit(g) => node.state.apply_two(g, q, gate.qubits[1]),
                GateKind::VirtualTwoQubit { .. } => unreachable!("rejected above"),
                GateKind::ConditionalPauli { pauli, parity } => {
                    let value = gate
                        .clbits
                        .iter()
                        .fold(false, |acc, &b| acc ^ node.clbits[b]);
                    if value == *parity {
                        let p = match pauli {
                            Pauli::X => OneQubitGate::X,
                            Pauli::Z => OneQubitGate::Z,
                        };
                        node.state.apply_one(&p, q);
                    }
                }
                GateKind::Measure(basis) => {
                    if *basis == Basis::X {
                        node.state.apply_one(&OneQubitGate::H, q);
                    }
                    let (p0, p1) = node.state.probabilities(q);
                    let bit = gate.clbits[0];
                    // outcome 1 waits on the stack so outcome 0 is explored first
                    let mut child = Pending {
                        next: node.next,
                        state: node.state.clone(),
                        outcomes: node.outcomes.clone(),
                        clbits: node.clbits.clone(),
                        probability: node.probability * p1,
                        dead: p1 <= zero_p,
                    };
                    finish_measure(&mut child, q, bit, true, *basis);
                    stack.push(child);
                    node.probability *= p0;
                    node.dead = p0 <= zero_p;
                    finish_measure(&mut node, q, bit, false, *basis);
                }
                GateKind::Reset => {
                    // an undetermined qubit splits the branch without recording an outcome
                    let (p0, p1) = node.state.probabilities(q);
                    if p0 > zero_p && p1 > zero_p {
                        let mut child = Pending {
                            next: node.next,
                            state: node.state.clone(),
                            outcomes: node.outcomes.clone(),
                            clbits: node.clbits.clone(),
                            probability: node.probability * p1,
                            dead: false,
                        };
                        child.state.project(q, true);
                        child.state.apply_one(&OneQubitGate::X, q);
                        stack.push(child);
                        node.probability *= p0;
                        node.state.project(q, false);
                    } else if p1 > zero_p {
                        node.state.project(q, true);
                        node.state.apply_one(&OneQubitGate::X, q);
                    } else {
                        node.state.project(q, false);
                    }
                }
            }
        }
        let dead = node.dead;
        let drift = (node.state.norm() - T::one()).abs();
        if !dead && drift > drift_tolerance::<T>() {
            return Err(Error::Simulation(format!("norm drift {drift}")));
        }
        leaves.push(Branch {
            outcomes: node.outcomes,
            clbits: node.clbits,
            probability: if dead { T::zero() } else { node.probability },
            state: node.state,
            zero_probability: dead,
        });
    }
    Ok(leaves)
}

fn finish_measure<T: Scalar>(
    node: &mut Pending<T>,
    q: usize,
    bit: usize,
    outcome: bool,
    basis: Basis,
) {
    node.outcomes.push(outcome);
    node.clbits[bit] = outcome;
    if node.dead {
        return;
    }
    node.state.project(q, outcome);
    if basis == Basis::X {
        node.state.apply_one(&OneQubitGate::H, q);
    }
}

/// Result of an equivalence check.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub trials: usize,
    /// Largest `1 - |<expected|branch>|` seen over all trials and branches.
    pub max_deviation: f64,
    /// Branch probabilities per trial, in enumeration order.
    pub branch_probabilities: Vec<Vec<f64>>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    fn new(trials: usize) -> Self {
        Self {
            pass: true,
            trials,
            max_deviation: 0.0,
            branch_probabilities: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn record<T: Scalar>(
        &mut self,
        trial: usize,
        branches: &[Branch<T>],
        expected: &StateVector<T>,
        tol: T,
    ) {
        let mut probs = Vec::with_capacity(branches.len());
        let total: T = branches.iter().map(|b| b.probability).sum();
        if (total - T::one()).abs() > drift_tolerance::<T>() {
            self.pass = false;
            self.failures.push(format!(
                "trial {trial}: branch probabilities sum to {total}"
            ));
        }
        for branch in branches {
            probs.push(branch.probability.to_f64().unwrap_or(f64::NAN));
            if branch.zero_probability {
                continue;
            }
            let overlap = expected.inner(&branch.state).norm();
            let deviation = T::one() - overlap;
            let dev = deviation.to_f64().unwrap_or(f64::INFINITY);
            if dev > self.max_deviation {
                self.max_deviation = dev;
            }
            if deviation > tol {
                self.pass = false;
                let bits: String = branch
                    .outcomes
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect();
                self.failures.push(format!(
                    "trial {trial}, outcomes {bits}: deviation {dev:.3e}"
                ));
            }
        }
        self.branch_probabilities.push(probs);
    }
}

/// Checks every branch of `template` against the two-qubit `target`
/// (basis index `bit(control) + 2 * bit(target)`) on random data inputs.
/// Auxiliaries start in `|0>` and must return there.
pub fn verify_teleport<T: Scalar>(
    template: &TeleportTemplate,
    target: &Matrix4<T>,
    trials: usize,
    tol: T,
    seed: u64,
) -> Result<VerifyReport> {
    let body = &template.body;
    let n = body.num_qubits;
    let (c, t) = (0, n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::new(trials);
    for trial in 0..trials {
        let psi = StateVector::<T>::random(2, &mut rng);
        let mut out = psi.clone();
        out.apply_matrix4(target, 0, 1);
        let input = psi.embed(&[c, t], n);
        let expected = out.embed(&[c, t], n);
        let branches = enumerate_branches(body, &input)?;
        report.record(trial, &branches, &expected, tol);
    }
    Ok(report)
}

/// Checks that `final_circuit`, a physical circuit, implements the static
/// logical circuit `original` placed by `initial` and read out through
/// `final_layout`, on every branch, with all other touched qubits back in `|0>`.
pub fn verify_routed_equivalence<T: Scalar>(
    original: &Circuit,
    final_circuit: &Circuit,
    initial: &Layout,
    final_layout: &Layout,
    trials: usize,
    tol: T,
    seed: u64,
) -> Result<VerifyReport> {
    if !original.is_static() || !original.is_physical() {
        return Err(Error::Simulation(
            "reference circuit must be static and contain no virtual markers".into(),
        ));
    }
    let n = original.num_qubits;
    if initial.len() != n || final_layout.len() != n {
        return Err(Error::InvalidLayout(format!(
            "layouts map {} and {} qubits, reference circuit has {n}",
            initial.len(),
            final_layout.len()
        )));
    }
    if initial.data_set() != final_layout.data_set() {
        return Err(Error::InvalidLayout(
            "initial and final layouts occupy different physical qubits".into(),
        ));
    }
    let bound = final_circuit.num_qubits;
    if let Some(&p) = initial.mapping().iter().find(|&&p| p >= bound) {
        return Err(Error::InvalidLayout(format!(
            "physical qubit {p} outside the {bound}-qubit circuit"
        )));
    }
    final_circuit.validate()?;

    // compact onto the qubits that matter
    let mut active: BTreeSet<usize> = initial.data_set();
    for g in &final_circuit.gates {
        active.extend(g.qubits.iter().copied());
    }
    if active.len() > MAX_SIM_QUBITS {
        return Err(Error::Simulation(format!(
            "{} active qubits exceed the simulator limit of {MAX_SIM_QUBITS}",
            active.len()
        )));
    }
    let index: Vec<usize> = active.iter().copied().collect();
    let position = |p: usize| index.binary_search(&p).expect("active qubit");
    let mut compact = final_circuit.clone();
    compact.num_qubits = index.len();
    compact.data_qubits = None;
    compact.gates = final_circuit
        .gates
        .iter()
        .map(|g| g.remap_qubits(position))
        .collect();
    let start: Vec<usize> = initial.mapping().iter().map(|&p| position(p)).collect();
    let end: Vec<usize> = final_layout
        .mapping()
        .iter()
        .map(|&p| position(p))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::new(trials);
    for trial in 0..trials {
        let psi = StateVector::<T>::random(n, &mut rng);
        let reference = enumerate_branches(original, &psi)?;
        let out = &reference[0].state;
        let input = psi.embed(&start, index.len());
        let expected = out.embed(&end, index.len());
        let branches = enumerate_branches(&compact, &input)?;
        report.record(trial, &branches, &expected, tol);
    }
    Ok(report)
}

/// Probability-weighted outcome histogram keyed by the final classical register.
pub fn outcome_distribution<T: Scalar>(branches: &[Branch<T>]) -> Vec<(Vec<bool>, T)> {
    let mut dist: std::collections::BTreeMap<Vec<bool>, T> = std::collections::BTreeMap::new();
    for b in branches.iter().filter(|b| !b.zero_probability) {
        *dist.entry(b.clbits.clone()).or_insert_with(T::zero) += b.probability;
    }
    dist.into_iter().collect()
}

/// `Complex` helper for building target matrices.
pub fn cplx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}
