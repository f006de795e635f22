// SPDX-License-Identifier: Apache-2.0

//! Run reports and the aggregate table built from them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use rtg_core::rtg::{reduction_percent, Metrics, RtgConfig, TeleportKind};
use rtg_core::{Search, TimingModel};

use crate::Failure;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    /// `baseline`, `rtg` or `rtg-noise`.
    pub mode: String,
    pub circuit: CircuitInfo,
    pub topology: String,
    pub layout: Vec<usize>,
    pub model: ModelEcho,
    pub search: SearchEcho,
    pub virtual_edges: Vec<EdgeEcho>,
    pub metrics: StageMetrics,
    pub depth_reduction_percent: Reductions,
    pub files: Vec<String>,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitInfo {
    /// `bench:FAMILY:N:SEED` or the input path.
    pub source: String,
    pub num_qubits: usize,
    pub num_gates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelEcho {
    pub t_1q: f64,
    pub t_2q: f64,
    pub t_tele: f64,
    pub p_2q: f64,
    pub p_tele: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchEcho {
    pub max_subset_size: usize,
    pub reuse_limit: usize,
    pub closeness_radius: usize,
    pub max_path_len: usize,
    pub trials_per_subset: usize,
    pub base_seed: u64,
    pub best_seed: u64,
    pub teleport_kind: String,
    pub candidates: usize,
    pub filtered: usize,
    pub subsets_evaluated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEcho {
    pub endpoints: [usize; 2],
    pub path: Vec<usize>,
    /// Teleported gates routed onto this edge.
    pub uses: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub depth: usize,
    pub temporal_depth: f64,
    pub n_cnot: usize,
    pub n_tele: usize,
    pub n_cnot_data: usize,
    pub n_measure: usize,
    pub n_reset: usize,
    pub c_2q: f64,
    pub swap_count: usize,
}

impl MetricsRow {
    pub fn new(m: &Metrics<f64>, swap_count: usize) -> Self {
        Self {
            depth: m.depth,
            temporal_depth: m.temporal_depth,
            n_cnot: m.counts.n_cnot,
            n_tele: m.counts.n_tele,
            n_cnot_data: m.counts.n_cnot_data,
            n_measure: m.counts.n_measure,
            n_reset: m.counts.n_reset,
            c_2q: m.c_2q,
            swap_count,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageMetrics {
    pub baseline: MetricsRow,
    /// Routed with virtual edges, teleports still as single gates.
    pub best: MetricsRow,
    pub expanded: MetricsRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub depth: f64,
    pub temporal_depth: f64,
}

impl Reduction {
    fn between(old: &MetricsRow, new: &MetricsRow) -> Self {
        Self {
            depth: reduction_percent(old.depth as f64, new.depth as f64),
            temporal_depth: reduction_percent(old.temporal_depth, new.temporal_depth),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reductions {
    /// Routed with teleports as single gates, against the baseline.
    pub expected: Reduction,
    /// Expanded circuit against the baseline.
    #[serde(rename = "impl")]
    pub implementation: Reduction,
}

pub struct ReportInput<'a> {
    pub mode: &'a str,
    pub circuit: CircuitInfo,
    pub topology: String,
    pub model: &'a TimingModel,
    pub config: &'a RtgConfig,
    pub result: &'a Search,
    pub files: Vec<String>,
    pub wall_time_s: f64,
}

pub fn build(input: ReportInput<'_>) -> RunReport {
    let r = input.result;
    let swaps = r.best.routed.swap_count;
    let metrics = StageMetrics {
        baseline: MetricsRow::new(&r.baseline.metrics, r.baseline.routed.swap_count),
        best: MetricsRow::new(&r.best.metrics, swaps),
        expanded: MetricsRow::new(&r.expanded_metrics, swaps),
    };
    let c = input.config;
    RunReport {
        version: REPORT_FORMAT_VERSION,
        mode: input.mode.to_string(),
        circuit: input.circuit,
        topology: input.topology,
        layout: r.best.routed.initial_layout.mapping().to_vec(),
        model: ModelEcho {
            t_1q: input.model.t_1q,
            t_2q: input.model.t_2q,
            t_tele: input.model.t_tele,
            p_2q: input.model.p_2q,
            p_tele: input.model.p_tele,
        },
        search: SearchEcho {
            max_subset_size: c.max_subset_size,
            reuse_limit: c.reuse_limit,
            closeness_radius: c.closeness_radius,
            max_path_len: c.max_path_len,
            trials_per_subset: c.trials_per_subset,
            base_seed: c.base_seed,
            best_seed: r.best.best_seed,
            teleport_kind: match c.teleport_kind {
                TeleportKind::Cnot => "cnot",
                TeleportKind::ControlledU => "cu",
            }
            .to_string(),
            candidates: r.candidates.len(),
            filtered: r.filtered.len(),
            subsets_evaluated: r.subsets_evaluated,
        },
        virtual_edges: r
            .best
            .subset
            .iter()
            .map(|e| {
                let (u, v) = e.endpoints();
                EdgeEcho {
                    endpoints: [u, v],
                    path: e.aux_path().to_vec(),
                    uses: r
                        .best
                        .routed
                        .virtual_uses
                        .get(&(u, v))
                        .copied()
                        .unwrap_or(0),
                }
            })
            .collect(),
        depth_reduction_percent: Reductions {
            expected: Reduction::between(&metrics.baseline, &metrics.best),
            implementation: Reduction::between(&metrics.baseline, &metrics.expanded),
        },
        metrics,
        files: input.files,
        wall_time_s: input.wall_time_s,
    }
}

/// One line of the aggregate table.
#[derive(Debug, Serialize)]
struct Row<'a> {
    circuit: &'a str,
    n: usize,
    mode: &'a str,
    baseline_depth: usize,
    expected_depth: usize,
    impl_depth: usize,
    reduction_expected_d_t_pct: String,
    reduction_impl_depth_pct: String,
    baseline_d_t: f64,
    best_d_t: f64,
    baseline_cnot: usize,
    impl_cnot: usize,
    impl_cnot_data: usize,
    n_tele: usize,
    baseline_c_2q: String,
    best_c_2q: String,
    virtual_edges: usize,
}

/// CSV table, one row per report, sorted by circuit source then size.
pub fn write_table(reports: &[RunReport], out: impl Write) -> Result<(), Failure> {
    let mut sorted: Vec<&RunReport> = reports.iter().collect();
    sorted.sort_by(|a, b| {
        (family_of(&a.circuit.source), a.circuit.num_qubits, &a.mode).cmp(&(
            family_of(&b.circuit.source),
            b.circuit.num_qubits,
            &b.mode,
        ))
    });
    let mut w = csv::Writer::from_writer(out);
    for r in sorted {
        let m = &r.metrics;
        let d = &r.depth_reduction_percent;
        w.serialize(Row {
            circuit: family_of(&r.circuit.source),
            n: r.circuit.num_qubits,
            mode: &r.mode,
            baseline_depth: m.baseline.depth,
            expected_depth: m.best.depth,
            impl_depth: m.expanded.depth,
            reduction_expected_d_t_pct: format!("{:.1}", d.expected.temporal_depth),
            reduction_impl_depth_pct: format!("{:.1}", d.implementation.depth),
            baseline_d_t: m.baseline.temporal_depth,
            best_d_t: m.best.temporal_depth,
            baseline_cnot: m.baseline.n_cnot,
            impl_cnot: m.expanded.n_cnot,
            impl_cnot_data: m.expanded.n_cnot_data,
            n_tele: m.best.n_tele,
            baseline_c_2q: format!("{:.4}", m.baseline.c_2q),
            best_c_2q: format!("{:.4}", m.best.c_2q),
            virtual_edges: r.virtual_edges.len(),
        })
        .map_err(|e| Failure::io(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::io(e.to_string()))
}

/// `bench:dj:9:0` -> `dj`; file sources are kept whole.
fn family_of(source: &str) -> &str {
    source
        .strip_prefix("bench:")
        .and_then(|s| s.split(':').next())
        .unwrap_or(source)
}
