// SPDX-License-Identifier: Apache-2.0

//! One PASS/FAIL line per acceptance criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtg_core::bench::{generate, BenchSpec, Family};
use rtg_core::circuit::{
    temporal_depth, Circuit, Gate, GateCounts, GateKind, TwoQubitGate, Unitary2,
};
use rtg_core::router::validate_routing;
use rtg_core::rtg::{
    error_cost, evaluate_subset, filter_candidates, reduction_percent, required_pairs, rtg_search,
    Mode, RtgConfig, SubsetEvaluation, TeleportKind,
};
use rtg_core::sim::{verify_routed_equivalence, verify_teleport, Matrix4};
use rtg_core::teleport::{synth_teleported_cnot, synth_teleported_cu, TemplateKind};
use rtg_core::topology::{
    auxiliary_qubits, enumerate_virtual_edges, heavy_hex_eagle, CouplingMap, Layout, VirtualEdge,
};
use rtg_core::{Search, TimingModel};

fn report(id: &str, pass: bool, detail: impl AsRef<str>) {
    println!(
        "{id} {} {}",
        if pass { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
}

const Z: Complex64 = Complex64::new(0.0, 0.0);
const O: Complex64 = Complex64::new(1.0, 0.0);

fn cnot_matrix() -> Matrix4<f64> {
    [[O, Z, Z, Z], [Z, Z, Z, O], [Z, Z, O, Z], [Z, O, Z, Z]]
}

fn controlled_matrix(u: &Unitary2) -> Matrix4<f64> {
    let m = u.matrix();
    [
        [O, Z, Z, Z],
        [Z, m[0][0], Z, m[0][1]],
        [Z, Z, O, Z],
        [Z, m[1][0], Z, m[1][1]],
    ]
}

fn rzz_matrix(theta: f64) -> Matrix4<f64> {
    let e = Complex64::from_polar(1.0, -theta / 2.0);
    let o = Complex64::from_polar(1.0, theta / 2.0);
    [[e, Z, Z, Z], [Z, o, Z, Z], [Z, Z, o, Z], [Z, Z, Z, e]]
}

fn random_unitary(rng: &mut impl Rng) -> Unitary2 {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(v[0] / n, v[1] / n);
    let b = Complex64::new(v[2] / n, v[3] / n);
    let ph = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    Unitary2::new([[ph * a, -ph * b.conj()], [ph * b, ph * a.conj()]]).unwrap()
}

#[test]
fn a1_teleport_correctness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        let t = synth_teleported_cnot(n).unwrap();
        let r = verify_teleport(&t, &cnot_matrix(), 20, 1e-9, 1000 + n as u64).unwrap();
        worst = worst.max(r.max_deviation);
        if !r.pass {
            failures.push(format!("cnot N={n}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let unitaries: Vec<Unitary2> = (0..10).map(|_| random_unitary(&mut rng)).collect();
    let angles: Vec<f64> = (0..10)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    for n in 1..=6 {
        for (i, u) in unitaries.iter().enumerate() {
            let t = synth_teleported_cu(n, TemplateKind::Cu(*u)).unwrap();
            let r = verify_teleport(&t, &controlled_matrix(u), 2, 1e-9, i as u64).unwrap();
            worst = worst.max(r.max_deviation);
            if !r.pass {
                failures.push(format!("cu#{i} N={n}"));
            }
        }
        for (i, &theta) in angles.iter().enumerate() {
            let t = synth_teleported_cu(n, TemplateKind::Rzz(theta)).unwrap();
            let r = verify_teleport(&t, &rzz_matrix(theta), 2, 1e-9, i as u64).unwrap();
            worst = worst.max(r.max_deviation);
            if !r.pass {
                failures.push(format!("rzz#{i} N={n}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        "A1",
        pass,
        format!(
            "max deviation {worst:.2e}, {:.1}s, failures {failures:?}",
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn a2_resource_counts() {
    let mut bad = Vec::new();
    let count = |c: &Circuit, f: &dyn Fn(&Gate) -> bool| c.gates.iter().filter(|g| f(g)).count();
    let is_cnot = |g: &Gate| matches!(g.kind, GateKind::TwoQubit(TwoQubitGate::Cnot));
    let is_measure = |g: &Gate| matches!(g.kind, GateKind::Measure(_));
    for n in 1..=20 {
        let t = synth_teleported_cnot(n).unwrap();
        let (c, t_q) = (t.control(), t.target());
        let touching = t
            .body
            .gates
            .iter()
            .filter(|g| is_cnot(g) && (g.qubits.contains(&c) || g.qubits.contains(&t_q)))
            .count();
        if count(&t.body, &is_cnot) != n + 1 || count(&t.body, &is_measure) != n || touching != 2 {
            bad.push(format!("cnot N={n}"));
        }
        for kind in [
            TemplateKind::Rzz(0.3),
            TemplateKind::Cu(Unitary2::pauli_z()),
        ] {
            let t = synth_teleported_cu(n, kind).unwrap();
            let controlled = count(&t.body, &|g| {
                matches!(
                    g.kind,
                    GateKind::TwoQubit(TwoQubitGate::Rzz(_) | TwoQubitGate::Cu(_))
                )
            });
            if count(&t.body, &is_cnot) != n || controlled != 1 || count(&t.body, &is_measure) != n
            {
                bad.push(format!("{kind:?} N={n}"));
            }
        }
    }
    report("A2", bad.is_empty(), format!("N=1..20, mismatches {bad:?}"));
    assert!(bad.is_empty());
}

#[test]
fn a3_constant_depth() {
    let cnot: BTreeSet<usize> = (1..=20)
        .map(|n| synth_teleported_cnot(n).unwrap().quantum_layer_depth)
        .collect();
    let cu: BTreeSet<usize> = (1..=20)
        .map(|n| {
            synth_teleported_cu(n, TemplateKind::Rzz(0.7))
                .unwrap()
                .quantum_layer_depth
        })
        .collect();
    let pass = cnot.len() == 1 && cu.len() == 1;
    report(
        "A3",
        pass,
        format!("cnot depths {cnot:?}, cu depths {cu:?}"),
    );
    assert!(pass);
}

/// `1 - (1-p)^a (1-q)^b` through log1p/expm1, which keeps full relative precision.
fn error_cost_oracle(n_g: usize, n_tele: usize, p: f64, q: f64) -> f64 {
    -(n_g as f64 * (-p).ln_1p() + n_tele as f64 * (-q).ln_1p()).exp_m1()
}

#[test]
fn a4_cost_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut depth_ok = 0;
    for _ in 0..50 {
        // dyadic durations keep the hand sum exact in any order
        let t_1q = rng.gen_range(1..16) as f64 / 16.0;
        let t_2q = rng.gen_range(1..16) as f64 / 8.0;
        let t_tele = rng.gen_range(1..16) as f64 / 4.0;
        let model = TimingModel::new(t_1q, t_2q, t_tele, 0.01, 0.1).unwrap();
        // every layer touches qubit 0, so each gate is its own layer
        let mut c = Circuit::new(3, 0);
        let mut hand = 0.0;
        for _ in 0..rng.gen_range(0..40) {
            match rng.gen_range(0..3) {
                0 => {
                    c.push(Gate::h(0));
                    hand += t_1q;
                }
                1 => {
                    c.push(Gate::cx(0, 1));
                    hand += t_2q;
                }
                _ => {
                    c.push(Gate::virtual_two(TwoQubitGate::Cnot, 0, 2, 0));
                    hand += t_tele;
                }
            }
        }
        if temporal_depth(&c, &model).unwrap() == hand {
            depth_ok += 1;
        }
    }
    let mut worst: f64 = 0.0;
    let mut cases: Vec<(usize, usize, f64)> = vec![(20, 1, 0.01)];
    while cases.len() < 50 {
        cases.push((
            rng.gen_range(0..500),
            rng.gen_range(0..20),
            rng.gen_range(1e-5..0.09),
        ));
    }
    for (n_g, n_tele, p) in cases {
        let model = TimingModel::from_factors(0.1, 1.0, p, 3.0, 10.0).unwrap();
        let counts = GateCounts {
            n_g,
            n_tele,
            ..Default::default()
        };
        let got = error_cost(&counts, &model);
        worst = worst.max((got - error_cost_oracle(n_g, n_tele, p, 10.0 * p)).abs());
    }
    let worked = error_cost(
        &GateCounts {
            n_g: 20,
            n_tele: 1,
            ..Default::default()
        },
        &TimingModel::default(),
    );
    let pass = depth_ok == 50 && worst <= 1e-12 && (worked - 0.26388).abs() < 1e-5;
    report(
        "A4",
        pass,
        format!("temporal depth exact {depth_ok}/50, error cost max |diff| {worst:.2e}, worked value {worked:.6}"),
    );
    assert!(pass);
}

/// Data line 0-1-2-3-4; auxiliaries 5-6-7-8 bridge 0 to 4 and 6 also reaches 2.
fn nine_vertex_map() -> CouplingMap {
    CouplingMap::new(
        9,
        [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 4),
            (6, 2),
        ],
    )
    .unwrap()
}

#[test]
fn a5_end_to_end_semantics() {
    let start = Instant::now();
    let map = nine_vertex_map();
    let mut details = Vec::new();
    let mut pass = true;
    let mut dj = BenchSpec::new(Family::Dj, 5, 0);
    dj.mask = Some(0b1111);
    for spec in [dj, BenchSpec::new(Family::Ghz, 4, 0)] {
        let c = generate(&spec).unwrap();
        let layout = Layout::identity(spec.n);
        let config = RtgConfig {
            max_subset_size: 2,
            ..RtgConfig::default()
        };
        let r = rtg_search(&c, &map, &layout, &TimingModel::default(), &config).unwrap();
        let v = verify_routed_equivalence(
            &c,
            &r.expanded,
            &r.best.routed.initial_layout,
            &r.best.routed.final_layout,
            20,
            1e-6,
            55,
        )
        .unwrap();
        pass &= v.pass;
        details.push(format!(
            "{}({}) teleports {} max deviation {:.2e}",
            spec.family, spec.n, r.expanded_metrics.counts.n_tele, v.max_deviation
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    report(
        "A5",
        pass,
        format!("{}, {:.1}s", details.join("; "), elapsed.as_secs_f64()),
    );
    assert!(pass);
}

struct SuiteRun {
    family: Family,
    n: usize,
    mode: Mode,
    result: Search,
}

const SIZES: std::ops::RangeInclusive<usize> = 9..=15;

fn suite_config(mode: Mode) -> RtgConfig {
    RtgConfig {
        mode,
        ..RtgConfig::default()
    }
}

fn suite() -> &'static Vec<SuiteRun> {
    static RUNS: OnceLock<Vec<SuiteRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let map = heavy_hex_eagle().unwrap();
        let model = TimingModel::default();
        let mut runs = Vec::new();
        for family in Family::ALL {
            for n in SIZES {
                let c = generate(&BenchSpec::new(family, n, 0)).unwrap();
                let layout = Layout::line(18, n);
                for mode in [Mode::Plain, Mode::NoiseAware] {
                    let result =
                        rtg_search(&c, &map, &layout, &model, &suite_config(mode)).unwrap();
                    runs.push(SuiteRun {
                        family,
                        n,
                        mode,
                        result,
                    });
                }
            }
        }
        runs
    })
}

#[test]
fn a6_dominance() {
    let runs = suite();
    let plain: Vec<&SuiteRun> = runs.iter().filter(|r| r.mode == Mode::Plain).collect();
    let noisy: Vec<&SuiteRun> = runs.iter().filter(|r| r.mode == Mode::NoiseAware).collect();
    let d_ok = runs
        .iter()
        .filter(|r| r.result.best.d_t <= r.result.baseline.d_t)
        .count();
    let e_ok = noisy
        .iter()
        .filter(|r| r.result.best.c_2q <= r.result.baseline.c_2q)
        .count();
    let improved = plain
        .iter()
        .filter(|r| r.result.best.d_t < r.result.baseline.d_t)
        .count();
    let pass = d_ok == runs.len() && e_ok == noisy.len();
    report(
        "A6",
        pass,
        format!(
            "d_t not worse {d_ok}/{}, noise-aware c_2q not worse {e_ok}/{}, plain runs improved {improved}/{}",
            runs.len(),
            noisy.len(),
            plain.len()
        ),
    );
    assert!(pass);
}

#[test]
fn a7_dj_depth_reduction() {
    let start = Instant::now();
    let map = heavy_hex_eagle().unwrap();
    let mut reductions = Vec::new();
    for n in SIZES {
        let c = generate(&BenchSpec::new(Family::Dj, n, 0)).unwrap();
        let r = rtg_search(
            &c,
            &map,
            &Layout::line(18, n),
            &TimingModel::default(),
            &suite_config(Mode::Plain),
        )
        .unwrap();
        reductions.push(reduction_percent(
            r.baseline.metrics.depth as f64,
            r.expanded_metrics.depth as f64,
        ));
    }
    let positive = reductions.iter().filter(|&&x| x > 0.0).count();
    let in_range = reductions.iter().filter(|&&x| x > 0.0).all(|&x| x <= 40.0);
    let elapsed = start.elapsed();
    let pass = positive >= 4 && in_range && elapsed < Duration::from_secs(900);
    let shown: Vec<String> = reductions.iter().map(|x| format!("{x:.1}")).collect();
    report(
        "A7",
        pass,
        format!(
            "DJ 9..15 expanded depth reduction % [{}], positive {positive}/7, {:.1}s",
            shown.join(", "),
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

/// Path cap long enough for the 11-auxiliary bypasses of the Eagle line layout.
const QAOA_PATH_LEN: usize = 12;

#[test]
fn a8_qaoa_data_cnots() {
    let map = heavy_hex_eagle().unwrap();
    let mut lines = Vec::new();
    let mut ok_long = 0;
    for max_path_len in [QAOA_PATH_LEN, RtgConfig::default().max_path_len] {
        let config = RtgConfig {
            teleport_kind: TeleportKind::ControlledU,
            max_path_len,
            ..suite_config(Mode::Plain)
        };
        let mut rows = Vec::new();
        let (mut ok, mut strict) = (0, 0);
        for n in SIZES {
            let c = generate(&BenchSpec::new(Family::QaoaMaxCut, n, 0)).unwrap();
            let r = rtg_search(
                &c,
                &map,
                &Layout::line(18, n),
                &TimingModel::default(),
                &config,
            )
            .unwrap();
            let data = r.expanded_metrics.counts.n_cnot_data;
            let base = r.baseline.metrics.counts.n_cnot;
            ok += usize::from(data <= base);
            strict += usize::from(data < base);
            rows.push(format!("{n}:{data}/{base}"));
        }
        if max_path_len == QAOA_PATH_LEN {
            ok_long = ok;
        }
        lines.push(format!(
            "path cap {max_path_len}: [{}] {ok}/7 not above, {strict}/7 below",
            rows.join(" ")
        ));
    }
    let pass = ok_long >= 5;
    report(
        "A8",
        pass,
        format!("QAOA data CNOTs / baseline CNOTs, {}", lines.join("; ")),
    );
    assert!(pass);
}

/// Small instance: data line `0..n`, auxiliaries `n..m` wired at random.
fn small_instance(rng: &mut impl Rng) -> (CouplingMap, Layout, Circuit) {
    let n = rng.gen_range(3..6);
    let m = n + rng.gen_range(2..5);
    let mut edges: BTreeSet<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    for a in n..m {
        let b = rng.gen_range(0..a);
        edges.insert((b, a));
    }
    for _ in 0..rng.gen_range(0..4) {
        let a = rng.gen_range(n..m);
        let b = rng.gen_range(0..m);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let map = CouplingMap::new(m, edges).unwrap();
    let mut c = Circuit::new(n, 0);
    for _ in 0..rng.gen_range(3..12) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        match rng.gen_range(0..3) {
            0 => c.push(Gate::h(a)),
            1 => c.push(Gate::rzz(rng.gen_range(-1.0..1.0), a, b)),
            _ => c.push(Gate::cx(a, b)),
        };
    }
    (map, Layout::identity(n), c)
}

fn disjoint(subset: &[VirtualEdge]) -> bool {
    let mut seen = BTreeSet::new();
    subset.iter().all(|e| e.qubits().all(|q| seen.insert(q)))
}

#[test]
fn a9_brute_force_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let model = TimingModel::default();
    let mut agreed = 0;
    let mut instances = 0;
    let mut with_choice = 0;
    while instances < 20 {
        let (map, layout, c) = small_instance(&mut rng);
        if auxiliary_qubits(&map, &layout).is_empty() {
            continue;
        }
        let config = RtgConfig {
            max_subset_size: 6,
            ..RtgConfig::default()
        };
        let candidates = enumerate_virtual_edges(&map, &layout, config.max_path_len);
        let filtered = filter_candidates(
            &candidates,
            &required_pairs(&c, &layout, &map),
            &config,
            &map,
        );
        if filtered.len() > 6 {
            continue;
        }
        instances += 1;
        if !filtered.is_empty() {
            with_choice += 1;
        }
        let mut best: Option<SubsetEvaluation<f64>> = None;
        for bits in 0u32..1 << filtered.len() {
            let subset: Vec<VirtualEdge> = (0..filtered.len())
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| filtered[i].clone())
                .collect();
            if !disjoint(&subset) {
                continue;
            }
            if let Some(e) = evaluate_subset(&c, &map, &layout, &subset, &model, &config).unwrap() {
                if best
                    .as_ref()
                    .is_none_or(|b| (e.d_t, e.c_2q) < (b.d_t, b.c_2q))
                {
                    best = Some(e);
                }
            }
        }
        let best = best.unwrap();
        let r = rtg_search(&c, &map, &layout, &model, &config).unwrap();
        if (r.best.d_t, r.best.c_2q) == (best.d_t, best.c_2q) {
            agreed += 1;
        }
    }
    let pass = agreed == instances;
    report(
        "A9",
        pass,
        format!("{agreed}/{instances} agree ({with_choice} with at least one candidate)"),
    );
    assert!(pass);
}

#[test]
fn a10_routing_validity() {
    let runs = suite();
    let config = RtgConfig::default();
    let mut bad: BTreeMap<String, usize> = BTreeMap::new();
    let eagle = heavy_hex_eagle().unwrap();
    for run in runs {
        let r = &run.result;
        let tag = format!("{}({}) {:?}", run.family, run.n, run.mode);
        if !validate_routing(&r.baseline.routed, &eagle).pass
            || !validate_routing(&r.best.routed, &r.map).pass
        {
            *bad.entry(format!("{tag} routing")).or_default() += 1;
        }
        if !r.expanded.is_physical()
            || r.expanded
                .gates
                .iter()
                .filter(|g| g.is_two_qubit())
                .any(|g| !eagle.is_native(g.qubits[0], g.qubits[1]))
        {
            *bad.entry(format!("{tag} non-native")).or_default() += 1;
        }
        if r.best
            .routed
            .virtual_uses
            .values()
            .any(|&u| u > config.reuse_limit)
        {
            *bad.entry(format!("{tag} reuse")).or_default() += 1;
        }
    }
    let pass = bad.is_empty();
    report(
        "A10",
        pass,
        format!("{} runs checked, problems {bad:?}", runs.len()),
    );
    assert!(pass);
}
