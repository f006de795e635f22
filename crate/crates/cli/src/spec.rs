// SPDX-License-Identifier: Apache-2.0

//! Parsing of `--topology` and `--layout` values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use rtg_core::topology::{heavy_hex_eagle, line_map, CouplingMap, Layout};

use crate::Failure;

pub const LAYOUTS_FORMAT_VERSION: u32 = 1;

/// Initial and final placements of a routed run, as written to `layouts.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LayoutsDoc {
    pub version: u32,
    pub initial: Vec<usize>,
    #[serde(rename = "final")]
    pub final_: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_final: Option<Vec<usize>>,
}

impl LayoutsDoc {
    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        let doc: Self = serde_json::from_str(&text)
            .map_err(|e| Failure::new("format", format!("{}: {e}", path.display())))?;
        if doc.version != LAYOUTS_FORMAT_VERSION {
            return Err(Failure::new(
                "format",
                format!(
                    "{}: layouts version {} (expected {LAYOUTS_FORMAT_VERSION})",
                    path.display(),
                    doc.version
                ),
            ));
        }
        Ok(doc)
    }
}

/// `eagle127`, `line:N` or `file:PATH`; returns the map and an identifier for reports.
pub fn parse_topology(value: &str) -> Result<(CouplingMap, String), Failure> {
    if value == "eagle127" {
        return Ok((heavy_hex_eagle()?, value.to_string()));
    }
    if let Some(n) = value.strip_prefix("line:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::usage(format!("bad line length in '{value}'")))?;
        return Ok((line_map(n)?, value.to_string()));
    }
    if let Some(path) = value.strip_prefix("file:") {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{path}: {e}")))?;
        return Ok((CouplingMap::from_json(&text)?, value.to_string()));
    }
    Err(Failure::new(
        "unknown_topology",
        format!("unknown topology '{value}'; expected eagle127, line:N or file:PATH"),
    ))
}

/// `line:A-B`, `identity` or `file:PATH` (a layouts document; its initial placement).
/// Placements longer than the circuit keep their first `num_qubits` entries.
pub fn parse_layout(value: &str, num_qubits: usize) -> Result<Layout, Failure> {
    let mapping: Vec<usize> = if value == "identity" {
        (0..num_qubits).collect()
    } else if let Some(range) = value.strip_prefix("line:") {
        let (a, b) = range
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| {
                Failure::usage(format!("bad layout range '{value}'; expected line:A-B"))
            })?;
        if b < a {
            return Err(Failure::usage(format!("empty layout range '{value}'")));
        }
        (a..=b).collect()
    } else if let Some(path) = value.strip_prefix("file:") {
        LayoutsDoc::read(Path::new(path))?.initial
    } else {
        return Err(Failure::usage(format!(
            "unknown layout '{value}'; expected line:A-B, identity or file:PATH"
        )));
    };
    if mapping.len() < num_qubits {
        return Err(Failure::new(
            "invalid_layout",
            format!(
                "layout '{value}' places {} qubits, circuit has {num_qubits}",
                mapping.len()
            ),
        ));
    }
    Ok(Layout::new(mapping[..num_qubits].to_vec())?)
}
