// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtg_core::circuit::{Circuit, Gate, GateKind, Pauli, TwoQubitGate, Unitary2};
use rtg_core::sim::{enumerate_branches, verify_routed_equivalence, verify_teleport, Matrix4};
use rtg_core::teleport::{
    synth_teleported_cnot, synth_teleported_cu, TeleportTemplate, TemplateKind,
};
use rtg_core::topology::{extend_with_virtual, CouplingMap, Layout, VirtualEdge};
use rtg_core::State;

const Z: Complex64 = Complex64::new(0.0, 0.0);
const O: Complex64 = Complex64::new(1.0, 0.0);

// basis index = bit(control) + 2 * bit(target)
fn cnot() -> Matrix4<f64> {
    [[O, Z, Z, Z], [Z, Z, Z, O], [Z, Z, O, Z], [Z, O, Z, Z]]
}

fn controlled(u: &Unitary2) -> Matrix4<f64> {
    let m = u.matrix();
    [
        [O, Z, Z, Z],
        [Z, m[0][0], Z, m[0][1]],
        [Z, Z, O, Z],
        [Z, m[1][0], Z, m[1][1]],
    ]
}

fn rzz(theta: f64) -> Matrix4<f64> {
    let even = Complex64::from_polar(1.0, -theta / 2.0);
    let odd = Complex64::from_polar(1.0, theta / 2.0);
    [
        [even, Z, Z, Z],
        [Z, odd, Z, Z],
        [Z, Z, odd, Z],
        [Z, Z, Z, even],
    ]
}

fn random_unitary(rng: &mut impl Rng) -> Unitary2 {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(v[0] / n, v[1] / n);
    let b = Complex64::new(v[2] / n, v[3] / n);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Unitary2::new([
        [phase * a, -phase * b.conj()],
        [phase * b, phase * a.conj()],
    ])
    .unwrap()
}

#[test]
fn cnot_templates_every_branch() {
    for n in 1..=8 {
        let t = synth_teleported_cnot(n).unwrap();
        let r = verify_teleport(&t, &cnot(), 20, 1e-9, n as u64).unwrap();
        assert!(r.pass, "N={n}: {:?}", r.failures);
        assert!(r.branch_probabilities.iter().all(|p| p.len() == 1 << n));
    }
}

#[test]
fn outcome_distribution_is_uniform() {
    for n in 1..=6 {
        let t = synth_teleported_cnot(n).unwrap();
        let r = verify_teleport(&t, &cnot(), 20, 1e-9, 100 + n as u64).unwrap();
        let expected = 1.0 / (1u64 << n) as f64;
        for probs in &r.branch_probabilities {
            for p in probs {
                assert!((p - expected).abs() < 1e-9, "N={n}: {p}");
            }
        }
    }
}

#[test]
fn controlled_templates_every_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=6 {
        for _ in 0..3 {
            let u = random_unitary(&mut rng);
            let t = synth_teleported_cu(n, TemplateKind::Cu(u)).unwrap();
            let r = verify_teleport(&t, &controlled(&u), 5, 1e-9, 7).unwrap();
            assert!(r.pass, "CU N={n}: {:?}", r.failures);
            let theta = rng.gen_range(-3.0..3.0);
            let t = synth_teleported_cu(n, TemplateKind::Rzz(theta)).unwrap();
            let r = verify_teleport(&t, &rzz(theta), 5, 1e-9, 8).unwrap();
            assert!(r.pass, "RZZ N={n}: {:?}", r.failures);
        }
        let t = synth_teleported_cu(n, TemplateKind::Cz).unwrap();
        assert!(
            verify_teleport(&t, &controlled(&Unitary2::pauli_z()), 5, 1e-9, 9)
                .unwrap()
                .pass
        );
    }
}

#[test]
fn identity_unitary_acts_as_identity() {
    let ident: Matrix4<f64> = [[O, Z, Z, Z], [Z, O, Z, Z], [Z, Z, O, Z], [Z, Z, Z, O]];
    for n in 1..=4 {
        let t = synth_teleported_cu(n, TemplateKind::Cu(Unitary2::identity())).unwrap();
        assert!(verify_teleport(&t, &ident, 10, 1e-9, 3).unwrap().pass);
    }
}

#[test]
fn non_unitary_is_rejected() {
    assert!(Unitary2::new([[O, O], [Z, O]]).is_err());
}

#[test]
fn flipped_parity_is_caught() {
    for n in 1..=4 {
        let mut t = synth_teleported_cnot(n).unwrap();
        let g = t
            .body
            .gates
            .iter_mut()
            .find(|g| matches!(g.kind, GateKind::ConditionalPauli { .. }))
            .unwrap();
        if let GateKind::ConditionalPauli { parity, .. } = &mut g.kind {
            *parity = !*parity;
        }
        let r = verify_teleport(&t, &cnot(), 5, 1e-9, 1).unwrap();
        assert!(!r.pass);
        assert!(r.max_deviation > 0.2, "N={n}: {}", r.max_deviation);
    }
}

/// The single-auxiliary construction with the auxiliary read in the X basis:
/// CNOT(c,a); CNOT(a,t); H(a); M(a); Z on c if set; reset.
#[test]
fn x_basis_single_auxiliary_variant() {
    let mut body = Circuit::new(3, 1);
    body.gates = vec![
        Gate::cx(0, 1),
        Gate::cx(1, 2),
        Gate::h(1),
        Gate::measure(1, 0),
        Gate::conditional(Pauli::Z, 0, vec![0], true),
        Gate::reset(1),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let psi = State::random(2, &mut rng);
        let input = psi.embed(&[0, 2], 3);
        let mut expected = psi.clone();
        expected.apply_matrix4(&cnot(), 0, 1);
        let expected = expected.embed(&[0, 2], 3);
        let branches = enumerate_branches(&body, &input).unwrap();
        assert_eq!(branches.len(), 2);
        for b in branches {
            assert!((b.probability - 0.5).abs() < 1e-9);
            assert!(expected.fidelity(&b.state) > 1.0 - 1e-9);
        }
    }
}

/// CNOT(c,a); CU(a,t); H(a); M(a); Z on c if set; reset.
#[test]
fn x_basis_single_auxiliary_controlled_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let u = random_unitary(&mut rng);
        let mut body = Circuit::new(3, 1);
        body.gates = vec![
            Gate::cx(0, 1),
            Gate::cu(u, 1, 2),
            Gate::h(1),
            Gate::measure(1, 0),
            Gate::conditional(Pauli::Z, 0, vec![0], true),
            Gate::reset(1),
        ];
        let psi = State::random(2, &mut rng);
        let mut expected = psi.clone();
        expected.apply_matrix4(&controlled(&u), 0, 1);
        let expected = expected.embed(&[0, 2], 3);
        for b in enumerate_branches(&body, &psi.embed(&[0, 2], 3)).unwrap() {
            assert!(expected.fidelity(&b.state) > 1.0 - 1e-9);
        }
    }
}

fn counts(t: &TeleportTemplate) -> (usize, usize, usize, usize) {
    let cnots = t
        .body
        .gates
        .iter()
        .filter(|g| matches!(g.kind, GateKind::TwoQubit(TwoQubitGate::Cnot)))
        .count();
    let other2q = t.body.gates.iter().filter(|g| g.is_two_qubit()).count() - cnots;
    let measures = t
        .body
        .gates
        .iter()
        .filter(|g| matches!(g.kind, GateKind::Measure(_)))
        .count();
    let resets = t
        .body
        .gates
        .iter()
        .filter(|g| matches!(g.kind, GateKind::Reset))
        .count();
    (cnots, other2q, measures, resets)
}

#[test]
fn resource_counts() {
    for n in 1..=20 {
        let t = synth_teleported_cnot(n).unwrap();
        assert_eq!(counts(&t), (n + 1, 0, n, n));
        assert_eq!(t.data_touching_cnots, 2);
        let t = synth_teleported_cu(n, TemplateKind::Rzz(0.5)).unwrap();
        assert_eq!(counts(&t), (n, 1, n, n));
        // the controlled gate touches the target and one auxiliary
        let g = t
            .body
            .gates
            .iter()
            .find(|g| matches!(g.kind, GateKind::TwoQubit(TwoQubitGate::Rzz(_))))
            .unwrap();
        assert_eq!(g.qubits, vec![n, n + 1]);
    }
}

/// Expanded markers behave like the ideal gates they stand for.
#[test]
fn expansion_preserves_semantics() {
    // data 0-1-2-3 line; auxiliaries 4,5,6 bridge 0 and 3
    let map =
        CouplingMap::new(7, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 3)]).unwrap();
    let edge = VirtualEdge::new(0, 3, vec![4, 5, 6]);
    let ext = extend_with_virtual(&map, &[edge]).unwrap();
    let theta = 0.83;
    let mut routed = Circuit::new(7, 0);
    routed.gates = vec![
        Gate::h(0),
        Gate::virtual_two(TwoQubitGate::Cnot, 3, 0, 0),
        Gate::rz(0.4, 3),
        Gate::virtual_two(TwoQubitGate::Rzz(theta), 0, 3, 0),
        Gate::cx(1, 2),
    ];
    let expanded = rtg_core::teleport::expand_circuit(&routed, &ext).unwrap();
    assert!(expanded.is_physical());
    assert_eq!(expanded.num_clbits, 6);
    for g in expanded.gates.iter().filter(|g| g.is_two_qubit()) {
        assert!(map.is_native(g.qubits[0], g.qubits[1]));
    }
    let ideal = Circuit::with_gates(
        4,
        0,
        vec![
            Gate::h(0),
            Gate::cx(3, 0),
            Gate::rz(0.4, 3),
            Gate::rzz(theta, 0, 3),
            Gate::cx(1, 2),
        ],
    );
    let layout = Layout::identity(4);
    let r = verify_routed_equivalence(&ideal, &expanded, &layout, &layout, 10, 1e-9, 4).unwrap();
    assert!(r.pass, "{:?}", r.failures);
    let counts = rtg_core::circuit::gate_counts(&expanded, &[0, 1, 2, 3].into());
    assert_eq!(counts.n_tele, 2);
}

#[test]
fn expansion_errors() {
    let map = CouplingMap::new(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
    let ext = extend_with_virtual(&map, &[VirtualEdge::new(0, 2, vec![3])]).unwrap();
    let unknown = Circuit::with_gates(4, 0, vec![Gate::virtual_two(TwoQubitGate::Cnot, 0, 2, 5)]);
    assert!(rtg_core::teleport::expand_circuit(&unknown, &ext).is_err());
    let busy = Circuit::with_gates(
        4,
        0,
        vec![Gate::virtual_two(TwoQubitGate::Cnot, 0, 2, 0), Gate::h(3)],
    );
    assert!(rtg_core::teleport::expand_circuit(&busy, &ext).is_err());
    let none = Circuit::with_gates(4, 0, vec![Gate::cx(0, 1)]);
    assert_eq!(
        rtg_core::teleport::expand_circuit(&none, &ext).unwrap(),
        none
    );
}

#[test]
fn reuse_waits_for_resets() {
    let map = CouplingMap::new(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
    let ext = extend_with_virtual(&map, &[VirtualEdge::new(0, 2, vec![3])]).unwrap();
    let twice = Circuit::with_gates(
        4,
        0,
        vec![
            Gate::virtual_two(TwoQubitGate::Cnot, 0, 2, 0),
            Gate::virtual_two(TwoQubitGate::Cnot, 2, 0, 0),
        ],
    );
    let e = rtg_core::teleport::expand_circuit(&twice, &ext).unwrap();
    let last_reset_first = e
        .gates
        .iter()
        .rposition(|g| g.group == Some(0) && matches!(g.kind, GateKind::Reset))
        .unwrap();
    let first_use_second = e
        .gates
        .iter()
        .position(|g| g.group == Some(1) && g.qubits.contains(&3))
        .unwrap();
    assert!(last_reset_first < first_use_second);
    let ideal = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2), Gate::cx(2, 0)]);
    let layout = Layout::identity(3);
    assert!(
        verify_routed_equivalence(&ideal, &e, &layout, &layout, 5, 1e-9, 2)
            .unwrap()
            .pass
    );
}
