// SPDX-License-Identifier: Apache-2.0

//! Seeded benchmark circuit generators and the RZZ lowering.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, Gate, GateKind, TwoQubitGate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Dj,
    Ghz,
    GraphState,
    Qft,
    QftEntangled,
    QaoaMaxCut,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Dj,
        Family::Ghz,
        Family::GraphState,
        Family::Qft,
        Family::QftEntangled,
        Family::QaoaMaxCut,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dj => "dj",
            Self::Ghz => "ghz",
            Self::GraphState => "graphstate",
            Self::Qft => "qft",
            Self::QftEntangled => "qftentangled",
            Self::QaoaMaxCut => "qaoa",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "dj" | "deutschjozsa" => Self::Dj,
            "ghz" => Self::Ghz,
            "graphstate" | "graph" => Self::GraphState,
            "qft" => Self::Qft,
            "qftentangled" => Self::QftEntangled,
            "qaoa" | "qaoamaxcut" | "maxcut" => Self::QaoaMaxCut,
            _ => return Err(Error::Bench(format!("unknown benchmark family '{s}'"))),
        })
    }
}

/// Interaction graph for graph-state and QAOA circuits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum GraphChoice {
    /// Seeded 3-regular graph for even `n`; for odd `n` every vertex has
    /// degree 3 except one of degree 2.
    #[default]
    Auto,
    /// Seeded 3-regular graph; odd `n` is an error.
    Regular,
    Edges(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// QAOA rounds.
    pub rounds: usize,
    /// QAOA `(gamma, beta)` per round; seeded when absent.
    pub angles: Option<Vec<(f64, f64)>>,
    /// Deutsch-Jozsa oracle mask over the `n - 1` inputs; seeded when absent.
    pub mask: Option<u64>,
    pub graph: GraphChoice,
}

impl BenchSpec {
    pub const DEFAULT_QAOA_ROUNDS: usize = 2;

    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            rounds: Self::DEFAULT_QAOA_ROUNDS,
            angles: None,
            mask: None,
            graph: GraphChoice::Auto,
        }
    }
}

impl FromStr for BenchSpec {
    type Err = Error;

    /// `FAMILY:N[:SEED]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::Bench(format!("expected FAMILY:N[:SEED], got '{s}'")));
        }
        let family = parts[0].parse()?;
        let n = parts[1]
            .parse()
            .map_err(|_| Error::Bench(format!("bad qubit count '{}'", parts[1])))?;
        let seed = match parts.get(2) {
            Some(p) => p
                .parse()
                .map_err(|_| Error::Bench(format!("bad seed '{p}'")))?,
            None => 0,
        };
        Ok(Self::new(family, n, seed))
    }
}

pub fn generate(spec: &BenchSpec) -> Result<Circuit> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::Bench(format!("need at least 2 qubits, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut c = Circuit::new(n, 0);
    match spec.family {
        Family::Dj => {
            let mask = dj_mask(spec, &mut rng)?;
            let flag = n - 1;
            c.push(Gate::x(flag));
            for q in 0..n {
                c.push(Gate::h(q));
            }
            for q in 0..n - 1 {
                if mask >> q & 1 == 1 {
                    c.push(Gate::cx(q, flag));
                }
            }
            for q in 0..n - 1 {
                c.push(Gate::h(q));
            }
        }
        Family::Ghz => ghz(&mut c),
        Family::GraphState => {
            let edges = graph(spec, &mut rng)?;
            for q in 0..n {
                c.push(Gate::h(q));
            }
            for (a, b) in edges {
                c.push(Gate::cz(a, b));
            }
        }
        Family::Qft => qft(&mut c),
        Family::QftEntangled => {
            ghz(&mut c);
            qft(&mut c);
        }
        Family::QaoaMaxCut => {
            let edges = graph(spec, &mut rng)?;
            let angles = match &spec.angles {
                Some(a) if a.len() == spec.rounds => a.clone(),
                Some(a) => {
                    return Err(Error::Bench(format!(
                        "{} angle pairs for {} rounds",
                        a.len(),
                        spec.rounds
                    )))
                }
                None => (0..spec.rounds)
                    .map(|_| (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI / 2.0)))
                    .collect(),
            };
            for q in 0..n {
                c.push(Gate::h(q));
            }
            for (gamma, beta) in angles {
                for &(a, b) in &edges {
                    c.push(Gate::rzz(gamma, a, b));
                }
                for q in 0..n {
                    c.push(Gate::rx(beta, q));
                }
            }
        }
    }
    Ok(c)
}

fn dj_mask(spec: &BenchSpec, rng: &mut ChaCha8Rng) -> Result<u64> {
    let inputs = spec.n - 1;
    if inputs > 63 {
        return Err(Error::Bench(format!(
            "oracle mask supports at most 63 inputs, got {inputs}"
        )));
    }
    let full = (1u64 << inputs) - 1;
    match spec.mask {
        Some(m) if m != 0 && m & !full == 0 => Ok(m),
        Some(m) => Err(Error::Bench(format!(
            "mask {m:#b} must be nonzero and fit {inputs} inputs"
        ))),
        None => loop {
            let m = rng.gen::<u64>() & full;
            if m != 0 {
                break Ok(m);
            }
        },
    }
}

fn ghz(c: &mut Circuit) {
    c.push(Gate::h(0));
    for q in 0..c.num_qubits - 1 {
        c.push(Gate::cx(q, q + 1));
    }
}

/// H and controlled phases, each phase lowered to RZ and two CNOTs; no final reversal.
fn qft(c: &mut Circuit) {
    let n = c.num_qubits;
    for i in 0..n {
        c.push(Gate::h(i));
        for j in i + 1..n {
            let lambda = PI / f64::from(1u32 << (j - i).min(31));
            controlled_phase(c, lambda, j, i);
        }
    }
}

/// `CP(lambda)` up to global phase.
fn controlled_phase(c: &mut Circuit, lambda: f64, a: usize, b: usize) {
    c.push(Gate::rz(lambda / 2.0, a));
    c.push(Gate::cx(a, b));
    c.push(Gate::rz(-lambda / 2.0, b));
    c.push(Gate::cx(a, b));
    c.push(Gate::rz(lambda / 2.0, b));
}

fn graph(spec: &BenchSpec, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let n = spec.n;
    match &spec.graph {
        GraphChoice::Edges(edges) => {
            let mut seen = BTreeSet::new();
            for &(a, b) in edges {
                if a == b || a >= n || b >= n || !seen.insert((a.min(b), a.max(b))) {
                    return Err(Error::Bench(format!("bad graph edge ({a}, {b})")));
                }
            }
            Ok(edges.clone())
        }
        GraphChoice::Regular if n % 2 == 1 => Err(Error::Bench(format!(
            "no 3-regular graph on an odd number of vertices ({n})"
        ))),
        _ if n < 4 => Err(Error::Bench(format!(
            "degree-3 graphs need at least 4 vertices, got {n}"
        ))),
        _ => {
            let mut degrees = vec![3; n];
            if n % 2 == 1 {
                degrees[n - 1] = 2;
            }
            random_graph(&degrees, rng)
        }
    }
}

/// Simple graph with the given degree sequence by the pairing model with rejection.
pub fn random_graph(degrees: &[usize], rng: &mut impl Rng) -> Result<Vec<(usize, usize)>> {
    let stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    if stubs.len() % 2 == 1 {
        return Err(Error::Bench("degree sum is odd".into()));
    }
    'attempt: for _ in 0..10_000 {
        let mut s = stubs.clone();
        s.shuffle(rng);
        let mut edges = BTreeSet::new();
        for pair in s.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !edges.insert((a, b)) {
                continue 'attempt;
            }
        }
        return Ok(edges.into_iter().collect());
    }
    Err(Error::Bench(format!(
        "no simple graph found for degrees {degrees:?}"
    )))
}

/// Replaces each native `RZZ(theta)(a, b)` by `CNOT(a, b); RZ(theta)(b); CNOT(a, b)`.
pub fn lower_rzz(circuit: &Circuit) -> Circuit {
    let mut out = Circuit {
        gates: Vec::with_capacity(circuit.gates.len()),
        ..circuit.clone()
    };
    for g in &circuit.gates {
        match g.kind {
            GateKind::TwoQubit(TwoQubitGate::Rzz(theta)) => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                for mut lowered in [Gate::cx(a, b), Gate::rz(theta, b), Gate::cx(a, b)] {
                    lowered.group = g.group;
                    out.gates.push(lowered);
                }
            }
            _ => out.gates.push(g.clone()),
        }
    }
    out
}
