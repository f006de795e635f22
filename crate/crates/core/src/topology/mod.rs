// SPDX-License-Identifier: Apache-2.0

//! Physical connectivity graphs, layouts and teleportation-backed virtual edges.

mod virtual_edges;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use virtual_edges::{enumerate_virtual_edges, extend_with_virtual, VirtualEdge};

/// Default cap on the number of auxiliary qubits in a virtual-edge path.
pub const DEFAULT_MAX_PATH_LEN: usize = 8;

pub const TOPOLOGY_FORMAT_VERSION: u32 = 1;

const EAGLE_127: &str = include_str!("../../data/eagle127.json");

/// Undirected physical coupling graph plus an optional set of virtual edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_physical: usize,
    native_edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    virtual_edges: Vec<VirtualEdge>,
    name: Option<String>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CouplingMap {
    pub fn new(
        num_physical: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut native_edges = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidTopology(format!("self-loop on qubit {a}")));
            }
            if a >= num_physical || b >= num_physical {
                return Err(Error::InvalidTopology(format!(
                    "edge ({a}, {b}) exceeds {num_physical} qubits"
                )));
            }
            native_edges.insert(ordered(a, b));
        }
        let mut adjacency = vec![Vec::new(); num_physical];
        for &(a, b) in &native_edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(Self {
            num_physical,
            native_edges,
            adjacency,
            virtual_edges: Vec::new(),
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    /// Native edges as ordered pairs `(a, b)` with `a < b`.
    pub fn native_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.native_edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn is_native(&self, a: usize, b: usize) -> bool {
        self.native_edges.contains(&ordered(a, b))
    }

    pub fn virtual_edges(&self) -> &[VirtualEdge] {
        &self.virtual_edges
    }

    /// Index of the virtual edge joining `a` and `b`, in either orientation.
    pub fn virtual_edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = ordered(a, b);
        self.virtual_edges.iter().position(|e| e.endpoints() == key)
    }

    /// Native shortest-path distances from `source`; `None` where unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        self.distances_within(source, |_| true)
    }

    /// BFS distances from `source` through vertices accepted by `allowed`.
    pub fn distances_within(
        &self,
        source: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_physical];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            for &v in &self.adjacency[u] {
                if dist[v].is_none() && allowed(v) {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Native distance between two qubits.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a)[b]
    }

    pub(crate) fn set_virtual_edges(&mut self, edges: Vec<VirtualEdge>) {
        self.virtual_edges = edges;
    }

    /// Parses a topology document: `{"version": 1, "num_qubits": n, "edges": [[a, b], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TopologyDoc = serde_json::from_str(text)?;
        if doc.version != TOPOLOGY_FORMAT_VERSION {
            return Err(Error::Version {
                found: doc.version,
                expected: TOPOLOGY_FORMAT_VERSION,
            });
        }
        if let Some(names) = &doc.names {
            if names.len() != doc.num_qubits {
                return Err(Error::InvalidTopology(format!(
                    "{} names for {} qubits",
                    names.len(),
                    doc.num_qubits
                )));
            }
        }
        let map = Self::new(doc.num_qubits, doc.edges.iter().map(|e| (e[0], e[1])))?;
        Ok(match doc.name {
            Some(name) => map.with_name(name),
            None => map,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TopologyDoc {
            version: TOPOLOGY_FORMAT_VERSION,
            name: self.name.clone(),
            num_qubits: self.num_physical,
            edges: self.native_edges.iter().map(|&(a, b)| [a, b]).collect(),
            names: None,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TopologyDoc {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

/// Path graph `0 - 1 - ... - (n-1)`.
pub fn line_map(n: usize) -> Result<CouplingMap> {
    if n < 2 {
        return Err(Error::InvalidTopology(format!(
            "line map needs at least 2 qubits, got {n}"
        )));
    }
    Ok(CouplingMap::new(n, (0..n - 1).map(|i| (i, i + 1)))?.with_name(format!("line:{n}")))
}

/// The 127-qubit heavy-hexagon Eagle coupling map with standard vertex numbering.
pub fn heavy_hex_eagle() -> Result<CouplingMap> {
    CouplingMap::from_json(EAGLE_127)
}

/// Injective assignment of logical qubits to physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    mapping: Vec<usize>,
}

impl Layout {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let distinct: BTreeSet<_> = mapping.iter().collect();
        if distinct.len() != mapping.len() {
            return Err(Error::InvalidLayout(format!(
                "mapping {mapping:?} is not injective"
            )));
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Logical `i` placed on physical `start + i`.
    pub fn line(start: usize, n: usize) -> Self {
        Self {
            mapping: (start..start + n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.mapping[logical]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Image of the mapping: the physical qubits that hold data.
    pub fn data_set(&self) -> BTreeSet<usize> {
        self.mapping.iter().copied().collect()
    }

    pub fn validate_for(&self, map: &CouplingMap) -> Result<()> {
        match self.mapping.iter().find(|&&p| p >= map.num_physical()) {
            Some(p) => Err(Error::InvalidLayout(format!(
                "physical qubit {p} outside a {}-qubit map",
                map.num_physical()
            ))),
            None => Ok(()),
        }
    }

    /// Exchanges whichever logical qubits sit on physical `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        for p in &mut self.mapping {
            if *p == a {
                *p = b;
            } else if *p == b {
                *p = a;
            }
        }
    }
}

/// Physical qubits not holding data.
pub fn auxiliary_qubits(map: &CouplingMap, layout: &Layout) -> BTreeSet<usize> {
    let data = layout.data_set();
    (0..map.num_physical())
        .filter(|q| !data.contains(q))
        .collect()
}
