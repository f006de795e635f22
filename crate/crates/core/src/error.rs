// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A circuit failed structural validation at the named gate.
    #[error("invalid circuit at gate {gate}: {reason}")]
    InvalidCircuit { gate: usize, reason: String },

    #[error("invalid timing/error model: {0}")]
    InvalidModel(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    /// Two virtual edges in one subset claim the same physical qubit.
    #[error("virtual edges {first} and {second} share qubit {qubit}")]
    OverlappingEdges {
        first: usize,
        second: usize,
        qubit: usize,
    },

    #[error("routing infeasible: {0}")]
    RoutingInfeasible(String),

    #[error("teleport synthesis: {0}")]
    Teleport(String),

    #[error("expansion failed at gate {gate}: {reason}")]
    Expansion { gate: usize, reason: String },

    #[error("simulation: {0}")]
    Simulation(String),

    #[error("branch cap exceeded: {measurements} measurements allow more than 2^{cap} branches")]
    BranchCap { measurements: usize, cap: usize },

    #[error("invalid benchmark parameters: {0}")]
    Bench(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("cannot export: {0}")]
    Export(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
