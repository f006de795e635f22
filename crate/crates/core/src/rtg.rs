// SPDX-License-Identifier: Apache-2.0

//! Virtual-edge subset search: pick the teleportation connections that
//! minimize temporal depth (and, in noise-aware mode, error cost) of the routed circuit.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bench::lower_rzz;
use crate::circuit::{
    depth, gate_counts, layer_profile, profile_duration, Circuit, GateCounts, LayerProfile,
    TimingErrorModel,
};
use crate::error::{Error, Result};
use crate::router::{route, RoutedCircuit, RouterParams};
use crate::scalar::Scalar;
use crate::teleport::expand_circuit;
use crate::topology::{
    auxiliary_qubits, enumerate_virtual_edges, extend_with_virtual, CouplingMap, Layout,
    VirtualEdge, DEFAULT_MAX_PATH_LEN,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Minimize temporal depth.
    Plain,
    /// Require no loss in depth or error cost, then minimize their weighted normalized sum.
    NoiseAware,
}

/// How RZZ gates are teleported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportKind {
    /// RZZ is lowered to CNOT, RZ, CNOT before routing; only CNOTs are teleported.
    Cnot,
    /// RZZ stays whole and is teleported with the controlled-gate template.
    ControlledU,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RtgConfig {
    pub mode: Mode,
    /// Largest subset size `K`.
    pub max_subset_size: usize,
    /// Most markers allowed per virtual edge `R`.
    pub reuse_limit: usize,
    pub closeness_radius: usize,
    pub max_path_len: usize,
    /// Seeded router trials per subset `T`.
    pub trials_per_subset: usize,
    pub base_seed: u64,
    pub w_d: f64,
    pub w_e: f64,
    pub teleport_kind: TeleportKind,
    pub router: RouterParams,
}

impl Default for RtgConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Plain,
            max_subset_size: 3,
            reuse_limit: 2,
            closeness_radius: 1,
            max_path_len: DEFAULT_MAX_PATH_LEN,
            trials_per_subset: 5,
            base_seed: 0,
            w_d: 1.0,
            w_e: 1.0,
            teleport_kind: TeleportKind::ControlledU,
            router: RouterParams::default(),
        }
    }
}

impl RtgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reuse_limit == 0 || self.trials_per_subset == 0 || self.max_path_len == 0 {
            return Err(Error::InvalidModel(
                "reuse limit, trial count and path length must be at least 1".into(),
            ));
        }
        if !(self.w_d >= 0.0 && self.w_e >= 0.0) {
            return Err(Error::InvalidModel("weights must be non-negative".into()));
        }
        Ok(())
    }

    /// Router seed of trial `k`; the same for every subset.
    pub fn trial_seed(&self, k: usize) -> u64 {
        self.base_seed
            .wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// Counts and depths measured on the metric form of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metrics<T> {
    pub depth: usize,
    pub temporal_depth: T,
    pub profile: LayerProfile,
    pub counts: GateCounts,
    pub c_2q: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsetEvaluation<T> {
    pub subset: Vec<VirtualEdge>,
    pub d_t: T,
    pub c_2q: T,
    pub best_seed: u64,
    pub routed: RoutedCircuit,
    pub metrics: Metrics<T>,
    /// Trials discarded for using an edge more than the reuse limit.
    pub rejected_trials: usize,
}

#[derive(Clone, Debug)]
pub struct RtgResult<T> {
    pub baseline: SubsetEvaluation<T>,
    pub best: SubsetEvaluation<T>,
    /// Coupling map extended with the chosen subset.
    pub map: CouplingMap,
    pub expanded: Circuit,
    pub expanded_metrics: Metrics<T>,
    pub candidates: Vec<VirtualEdge>,
    pub filtered: Vec<VirtualEdge>,
    pub required: BTreeMap<(usize, usize), usize>,
    pub subsets_evaluated: usize,
}

/// `1 - (1 - p_2q)^n_g * (1 - p_tele)^n_tele`.
pub fn error_cost<T: Scalar>(counts: &GateCounts, model: &TimingErrorModel<T>) -> T {
    let native = (T::one() - model.p_2q).powi(counts.n_g as i32);
    let tele = (T::one() - model.p_tele).powi(counts.n_tele as i32);
    T::one() - native * tele
}

/// Form on which all metrics are taken: SWAPs as three CNOTs, native RZZ as CNOT, RZ, CNOT.
pub fn metric_form(circuit: &Circuit) -> Circuit {
    lower_rzz(&circuit.lower_swaps())
}

pub fn measure<T: Scalar>(
    circuit: &Circuit,
    data: &BTreeSet<usize>,
    model: &TimingErrorModel<T>,
) -> Result<Metrics<T>> {
    let form = metric_form(circuit);
    let profile = layer_profile(&form)?;
    let counts = gate_counts(&form, data);
    Ok(Metrics {
        depth: depth(&form)?,
        temporal_depth: profile_duration(&profile, model),
        profile,
        counts,
        c_2q: error_cost(&counts, model),
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Physical pairs of two-qubit gates that are not natively adjacent under
/// the initial layout, with multiplicity.
pub fn required_pairs(
    circuit: &Circuit,
    layout: &Layout,
    map: &CouplingMap,
) -> BTreeMap<(usize, usize), usize> {
    let mut pairs = BTreeMap::new();
    for g in circuit.gates.iter().filter(|g| g.is_two_qubit()) {
        let (a, b) = (layout.physical(g.qubits[0]), layout.physical(g.qubits[1]));
        if !map.is_native(a, b) {
            *pairs.entry(ordered(a, b)).or_insert(0) += 1;
        }
    }
    pairs
}

/// Keeps candidates that are required or whose endpoints each lie within the
/// closeness radius of a required pair's endpoints; then drops those whose
/// own pair is required more often than the reuse limit.
pub fn filter_candidates(
    candidates: &[VirtualEdge],
    required: &BTreeMap<(usize, usize), usize>,
    config: &RtgConfig,
    map: &CouplingMap,
) -> Vec<VirtualEdge> {
    let r = config.closeness_radius;
    let mut dist_cache: BTreeMap<usize, Vec<Option<usize>>> = BTreeMap::new();
    let mut near = |a: usize, b: usize| {
        dist_cache.entry(a).or_insert_with(|| map.distances_from(a))[b].is_some_and(|d| d <= r)
    };
    candidates
        .iter()
        .filter(|e| {
            let (u, v) = e.endpoints();
            if required.contains_key(&(u, v)) {
                return true;
            }
            required
                .keys()
                .any(|&(p, q)| (near(u, p) && near(v, q)) || (near(u, q) && near(v, p)))
        })
        .filter(|e| required.get(&e.endpoints()).copied().unwrap_or(0) <= config.reuse_limit)
        .cloned()
        .collect()
}

/// The empty subset, then every pairwise qubit-disjoint subset of size
/// `1..=k` in order of size and then of member indices.
pub fn enumerate_subsets(filtered: &[VirtualEdge], k: usize) -> Vec<Vec<VirtualEdge>> {
    let n = filtered.len();
    let clash: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && filtered[i].shares_qubit_with(&filtered[j]).is_some())
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for size in 1..=k.min(n) {
        let mut pick = Vec::with_capacity(size);
        extend_subsets(&clash, size, 0, &mut pick, &mut |p| {
            out.push(p.iter().map(|&i| filtered[i].clone()).collect())
        });
    }
    out
}

fn extend_subsets(
    clash: &[Vec<bool>],
    size: usize,
    from: usize,
    pick: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if pick.len() == size {
        emit(pick);
        return;
    }
    for i in from..clash.len() {
        if pick.iter().all(|&j| !clash[i][j]) {
            pick.push(i);
            extend_subsets(clash, size, i + 1, pick, emit);
            pick.pop();
        }
    }
}

/// Routes `circuit` on `map` extended by `subset` with every trial seed and keeps
/// the trial of least temporal depth (then error cost, then trial order).
/// `None` when every trial exceeds the reuse limit.
pub fn evaluate_subset<T: Scalar>(
    circuit: &Circuit,
    map: &CouplingMap,
    layout: &Layout,
    subset: &[VirtualEdge],
    model: &TimingErrorModel<T>,
    config: &RtgConfig,
) -> Result<Option<SubsetEvaluation<T>>> {
    let extended = extend_with_virtual(map, subset)?;
    let data = layout.data_set();
    let mut best: Option<SubsetEvaluation<T>> = None;
    let mut rejected = 0;
    for k in 0..config.trials_per_subset {
        let seed = config.trial_seed(k);
        let routed = route(circuit, &extended, layout, &config.router.with_seed(seed))?;
        if routed
            .virtual_uses
            .values()
            .any(|&u| u > config.reuse_limit)
        {
            rejected += 1;
            continue;
        }
        let metrics = measure(&routed.circuit, &data, model)?;
        let better = match &best {
            None => true,
            Some(b) => (metrics.temporal_depth, metrics.c_2q) < (b.d_t, b.c_2q),
        };
        if better {
            best = Some(SubsetEvaluation {
                subset: subset.to_vec(),
                d_t: metrics.temporal_depth,
                c_2q: metrics.c_2q,
                best_seed: seed,
                routed,
                metrics,
                rejected_trials: 0,
            });
        }
    }
    Ok(best.map(|mut b| {
        b.rejected_trials = rejected;
        b
    }))
}

fn subset_key(subset: &[VirtualEdge]) -> Vec<(usize, usize)> {
    subset.iter().map(VirtualEdge::endpoints).collect()
}

/// Strict preference between evaluations under `mode`, relative to `baseline`.
fn better<T: Scalar>(
    a: &SubsetEvaluation<T>,
    b: &SubsetEvaluation<T>,
    baseline: &SubsetEvaluation<T>,
    config: &RtgConfig,
) -> bool {
    let tie = |a: &SubsetEvaluation<T>, b: &SubsetEvaluation<T>| {
        (a.subset.len(), subset_key(&a.subset)) < (b.subset.len(), subset_key(&b.subset))
    };
    match config.mode {
        Mode::Plain => match (a.d_t, a.c_2q).partial_cmp(&(b.d_t, b.c_2q)) {
            Some(std::cmp::Ordering::Less) => true,
            Some(std::cmp::Ordering::Equal) => tie(a, b),
            _ => false,
        },
        Mode::NoiseAware => {
            let score = |e: &SubsetEvaluation<T>| {
                let norm = |x: T, base: T| {
                    if base > T::zero() {
                        x / base
                    } else {
                        T::zero()
                    }
                };
                T::of(config.w_d) * norm(e.d_t, baseline.d_t)
                    + T::of(config.w_e) * norm(e.c_2q, baseline.c_2q)
            };
            let (sa, sb) = (score(a), score(b));
            if sa < sb {
                true
            } else if sa == sb {
                match (a.d_t, a.c_2q).partial_cmp(&(b.d_t, b.c_2q)) {
                    Some(std::cmp::Ordering::Less) => true,
                    Some(std::cmp::Ordering::Equal) => tie(a, b),
                    _ => false,
                }
            } else {
                false
            }
        }
    }
}

fn feasible<T: Scalar>(
    e: &SubsetEvaluation<T>,
    baseline: &SubsetEvaluation<T>,
    mode: Mode,
) -> bool {
    match mode {
        Mode::Plain => true,
        Mode::NoiseAware => e.d_t <= baseline.d_t && e.c_2q <= baseline.c_2q,
    }
}

/// Picks the preferred evaluation; the baseline (empty subset) is always eligible.
pub fn select<'a, T: Scalar>(
    baseline: &'a SubsetEvaluation<T>,
    evaluations: &'a [SubsetEvaluation<T>],
    config: &RtgConfig,
) -> &'a SubsetEvaluation<T> {
    let mut best = baseline;
    for e in evaluations {
        if feasible(e, baseline, config.mode) && better(e, best, baseline, config) {
            best = e;
        }
    }
    best
}

/// Full search: baseline routing, candidate enumeration and filtering, subset
/// evaluation, selection and teleport expansion.
pub fn rtg_search<T: Scalar>(
    circuit: &Circuit,
    map: &CouplingMap,
    layout: &Layout,
    model: &TimingErrorModel<T>,
    config: &RtgConfig,
) -> Result<RtgResult<T>> {
    config.validate()?;
    model.validate()?;
    let circuit = match config.teleport_kind {
        TeleportKind::Cnot => lower_rzz(circuit),
        TeleportKind::ControlledU => circuit.clone(),
    };
    let baseline = evaluate_subset(&circuit, map, layout, &[], model, config)?
        .expect("without virtual edges no trial can exceed the reuse limit");

    let aux = auxiliary_qubits(map, layout);
    let candidates = if aux.is_empty() {
        Vec::new()
    } else {
        enumerate_virtual_edges(map, layout, config.max_path_len)
    };
    let required = required_pairs(&circuit, layout, map);
    let filtered = filter_candidates(&candidates, &required, config, map);
    let subsets = enumerate_subsets(&filtered, config.max_subset_size);

    let evaluated: Vec<Option<SubsetEvaluation<T>>> = subsets[1..]
        .par_iter()
        .map(|s| evaluate_subset(&circuit, map, layout, s, model, config))
        .collect::<Result<_>>()?;
    let evaluations: Vec<SubsetEvaluation<T>> = evaluated.into_iter().flatten().collect();
    let best = select(&baseline, &evaluations, config).clone();

    let extended = extend_with_virtual(map, &best.subset)?;
    let expanded = expand_circuit(&best.routed.circuit, &extended)?;
    let expanded_metrics = measure(&expanded, &layout.data_set(), model)?;
    Ok(RtgResult {
        baseline,
        best,
        map: extended,
        expanded,
        expanded_metrics,
        candidates,
        filtered,
        required,
        subsets_evaluated: subsets.len(),
    })
}

/// `100 * (1 - new / old)`; zero when `old` is zero.
pub fn reduction_percent(old: f64, new: f64) -> f64 {
    if old == 0.0 {
        0.0
    } else {
        100.0 * (1.0 - new / old)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::topology::line_map;

    fn tri() -> CouplingMap {
        // data line 0-1-2, auxiliary 3 bridging 0 and 2
        CouplingMap::new(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap()
    }

    #[test]
    fn error_cost_examples() {
        let m = TimingErrorModel::<f64>::default();
        let c = |n_g, n_tele| GateCounts {
            n_g,
            n_tele,
            ..Default::default()
        };
        assert_eq!(error_cost(&c(0, 0), &m), 0.0);
        assert!((error_cost(&c(1, 0), &m) - 0.01).abs() < 1e-15);
        assert!((error_cost(&c(20, 1), &m) - 0.263_883_756_162_492_4).abs() < 1e-12);
    }

    #[test]
    fn required_pair_multiplicity() {
        let c = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2); 3]);
        let map = line_map(3).unwrap();
        let req = required_pairs(&c, &Layout::identity(3), &map);
        assert_eq!(req, BTreeMap::from([((0, 2), 3)]));
        let native = Circuit::with_gates(3, 0, vec![Gate::cx(0, 1)]);
        assert!(required_pairs(&native, &Layout::identity(3), &map).is_empty());
    }

    #[test]
    fn filter_rules() {
        let map = tri();
        let e = VirtualEdge::new(0, 2, vec![3]);
        let config = RtgConfig::default();
        let once = BTreeMap::from([((0, 2), 1)]);
        assert_eq!(
            filter_candidates(std::slice::from_ref(&e), &once, &config, &map).len(),
            1
        );
        let thrice = BTreeMap::from([((0, 2), 3)]);
        assert!(filter_candidates(std::slice::from_ref(&e), &thrice, &config, &map).is_empty());
        // one hop away on both ends
        let line = line_map(6).unwrap();
        let near = BTreeMap::from([((1, 4), 1)]);
        let cand = VirtualEdge::new(0, 5, vec![]);
        assert_eq!(
            filter_candidates(std::slice::from_ref(&cand), &near, &config, &line).len(),
            1
        );
        let far = BTreeMap::from([((2, 3), 1)]);
        assert!(filter_candidates(&[cand], &far, &config, &line).is_empty());
    }

    #[test]
    fn subset_enumeration() {
        let a = VirtualEdge::new(0, 2, vec![10]);
        let b = VirtualEdge::new(4, 6, vec![11]);
        let c = VirtualEdge::new(5, 7, vec![10]);
        assert_eq!(enumerate_subsets(&[], 3), vec![Vec::<VirtualEdge>::new()]);
        assert_eq!(
            enumerate_subsets(&[a.clone(), b.clone()], 2),
            vec![
                vec![],
                vec![a.clone()],
                vec![b.clone()],
                vec![a.clone(), b.clone()]
            ]
        );
        assert_eq!(
            enumerate_subsets(&[a.clone(), c.clone()], 2),
            vec![vec![], vec![a], vec![c]]
        );
    }

    #[test]
    fn single_long_cnot_prefers_teleport() {
        let c = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2)]);
        let layout = Layout::identity(3);
        let model = TimingErrorModel::<f64>::default();
        let config = RtgConfig::default();
        let r = rtg_search(&c, &tri(), &layout, &model, &config).unwrap();
        assert_eq!(r.baseline.d_t, 4.0);
        assert_eq!(r.best.d_t, 3.0);
        assert_eq!(r.best.subset.len(), 1);
        assert!(r.expanded.is_physical());
        let slow = TimingErrorModel::new(0.1, 1.0, 10.0, 0.01, 0.1).unwrap();
        let r = rtg_search(&c, &tri(), &layout, &slow, &config).unwrap();
        assert!(r.best.subset.is_empty());
        assert_eq!(r.best.d_t, 4.0);
    }
}
