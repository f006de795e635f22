// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{auxiliary_qubits, CouplingMap, Layout};
use crate::error::{Error, Result};

/// A non-native data pair joined through a chain of auxiliary qubits.
///
/// Stored with `u < v`; `aux_path` runs from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VirtualEdge {
    u: usize,
    v: usize,
    aux_path: Vec<usize>,
}

impl VirtualEdge {
    /// Builds an edge from `a` to `b` through `aux_path` (given in `a -> b` order).
    pub fn new(a: usize, b: usize, mut aux_path: Vec<usize>) -> Self {
        if a < b {
            Self {
                u: a,
                v: b,
                aux_path,
            }
        } else {
            aux_path.reverse();
            Self {
                u: b,
                v: a,
                aux_path,
            }
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn aux_path(&self) -> &[usize] {
        &self.aux_path
    }

    /// Teleportation distance: the number of auxiliary qubits.
    pub fn n_aux(&self) -> usize {
        self.aux_path.len()
    }

    /// Endpoints and auxiliaries.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        [self.u, self.v]
            .into_iter()
            .chain(self.aux_path.iter().copied())
    }

    /// Auxiliary path ordered starting next to `from`, which must be an endpoint.
    pub fn path_from(&self, from: usize) -> Vec<usize> {
        if from == self.u {
            self.aux_path.clone()
        } else {
            debug_assert_eq!(from, self.v);
            self.aux_path.iter().rev().copied().collect()
        }
    }

    pub fn shares_qubit_with(&self, other: &VirtualEdge) -> Option<usize> {
        self.qubits().find(|q| other.qubits().any(|r| r == *q))
    }

    fn check_in(&self, map: &CouplingMap) -> Result<()> {
        let bad = |why: String| {
            Err(Error::InvalidTopology(format!(
                "virtual edge ({}, {}): {why}",
                self.u, self.v
            )))
        };
        if self.aux_path.is_empty() {
            return bad("empty auxiliary path".into());
        }
        let n = map.num_physical();
        if let Some(q) = self.qubits().find(|&q| q >= n) {
            return bad(format!("qubit {q} outside the map"));
        }
        if map.is_native(self.u, self.v) {
            return bad("endpoints are natively coupled".into());
        }
        let mut seen: Vec<usize> = self.qubits().collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.aux_path.len() + 2 {
            return bad("path revisits a qubit".into());
        }
        let chain: Vec<usize> = std::iter::once(self.u)
            .chain(self.aux_path.iter().copied())
            .chain(std::iter::once(self.v))
            .collect();
        if let Some(w) = chain.windows(2).find(|w| !map.is_native(w[0], w[1])) {
            return bad(format!("hop {}-{} is not a native edge", w[0], w[1]));
        }
        Ok(())
    }
}

/// For every non-adjacent data pair reachable through at most `max_len`
/// auxiliaries, one virtual edge along a shortest such path. Ties go to the
/// lexicographically smallest vertex sequence. Output is sorted by endpoints.
pub fn enumerate_virtual_edges(
    map: &CouplingMap,
    layout: &Layout,
    max_len: usize,
) -> Vec<VirtualEdge> {
    let aux = auxiliary_qubits(map, layout);
    let data: Vec<usize> = layout.data_set().into_iter().collect();
    let mut edges = Vec::new();
    for (i, &u) in data.iter().enumerate() {
        // BFS over auxiliaries only; sorted adjacency makes each first-found
        // parent chain the lexicographically smallest shortest path.
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &a in map.neighbors(u) {
            if aux.contains(&a) {
                dist.insert(a, 1);
                queue.push_back(a);
            }
        }
        while let Some(a) = queue.pop_front() {
            let d = dist[&a];
            if d == max_len {
                continue;
            }
            for &b in map.neighbors(a) {
                if aux.contains(&b) && !dist.contains_key(&b) {
                    dist.insert(b, d + 1);
                    parent.insert(b, a);
                    queue.push_back(b);
                }
            }
        }
        let path_to = |mut a: usize| {
            let mut path = vec![a];
            while let Some(&p) = parent.get(&a) {
                path.push(p);
                a = p;
            }
            path.reverse();
            path
        };
        for &v in &data[i + 1..] {
            if map.is_native(u, v) {
                continue;
            }
            let best = map
                .neighbors(v)
                .iter()
                .filter_map(|a| dist.get(a).map(|&d| (d, path_to(*a))))
                .min();
            if let Some((_, path)) = best {
                edges.push(VirtualEdge::new(u, v, path));
            }
        }
    }
    edges
}

/// Copy of `map` whose virtual edges are exactly `subset`.
///
/// Members must be valid paths in `map` and pairwise qubit-disjoint.
pub fn extend_with_virtual(map: &CouplingMap, subset: &[VirtualEdge]) -> Result<CouplingMap> {
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (index, edge) in subset.iter().enumerate() {
        edge.check_in(map)?;
        for q in edge.qubits() {
            if let Some(&first) = owner.get(&q) {
                return Err(Error::OverlappingEdges {
                    first,
                    second: index,
                    qubit: q,
                });
            }
            owner.insert(q, index);
        }
    }
    let mut extended = map.clone();
    extended.set_virtual_edges(subset.to_vec());
    Ok(extended)
}
