// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-qubit gate vocabulary. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OneQubitGate {
    H,
    X,
    Z,
    S,
    T,
    Rz(f64),
    Rx(f64),
    Ry(f64),
    U3(f64, f64, f64),
}

impl OneQubitGate {
    pub fn name(&self) -> &'static str {
        match self {
            Self::H => "h",
            Self::X => "x",
            Self::Z => "z",
            Self::S => "s",
            Self::T => "t",
            Self::Rz(_) => "rz",
            Self::Rx(_) => "rx",
            Self::Ry(_) => "ry",
            Self::U3(..) => "u3",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Rz(a) | Self::Rx(a) | Self::Ry(a) => vec![a],
            Self::U3(a, b, c) => vec![a, b, c],
            _ => Vec::new(),
        }
    }

    pub fn from_name(name: &str, params: &[f64]) -> Option<Self> {
        let gate = match (name, params) {
            ("h", []) => Self::H,
            ("x", []) => Self::X,
            ("z", []) => Self::Z,
            ("s", []) => Self::S,
            ("t", []) => Self::T,
            ("rz", [a]) => Self::Rz(*a),
            ("rx", [a]) => Self::Rx(*a),
            ("ry", [a]) => Self::Ry(*a),
            ("u3", [a, b, c]) => Self::U3(*a, *b, *c),
            _ => return None,
        };
        Some(gate)
    }
}

/// A 2x2 complex matrix checked to be unitary; the target operation of a controlled-U.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2([[Complex64; 2]; 2]);

impl Unitary2 {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        let m = matrix;
        // U^dagger U == I
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += m[k][i].conj() * m[k][j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                if (acc - Complex64::new(expected, 0.0)).norm() > Self::TOLERANCE {
                    return Err(Error::Teleport(format!(
                        "matrix is not unitary (deviation {:.3e} at [{i}][{j}])",
                        (acc - Complex64::new(expected, 0.0)).norm()
                    )));
                }
            }
        }
        Ok(Self(matrix))
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self([[one, zero], [zero, one]])
    }

    pub fn pauli_z() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self([[one, zero], [zero, -one]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }

    /// Row-major real/imaginary pairs: `[re00, im00, re01, im01, re10, im10, re11, im11]`.
    pub fn to_params(&self) -> Vec<f64> {
        self.0
            .iter()
            .flat_map(|row| row.iter().flat_map(|c| [c.re, c.im]))
            .collect()
    }

    pub fn from_params(params: &[f64]) -> Result<Self> {
        if params.len() != 8 {
            return Err(Error::Teleport(format!(
                "controlled-U needs 8 real parameters, got {}",
                params.len()
            )));
        }
        let c = |i: usize| Complex64::new(params[2 * i], params[2 * i + 1]);
        Self::new([[c(0), c(1)], [c(2), c(3)]])
    }
}

/// Two-qubit gate vocabulary. The first operand is the control where that applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwoQubitGate {
    Cnot,
    Cz,
    Swap,
    Rzz(f64),
    Cu(Unitary2),
}

impl TwoQubitGate {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cnot => "cx",
            Self::Cz => "cz",
            Self::Swap => "swap",
            Self::Rzz(_) => "rzz",
            Self::Cu(_) => "cu",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            Self::Rzz(theta) => vec![*theta],
            Self::Cu(u) => u.to_params(),
            _ => Vec::new(),
        }
    }

    pub fn from_name(name: &str, params: &[f64]) -> Result<Option<Self>> {
        Ok(Some(match (name, params) {
            ("cx", []) => Self::Cnot,
            ("cz", []) => Self::Cz,
            ("swap", []) => Self::Swap,
            ("rzz", [theta]) => Self::Rzz(*theta),
            ("cu", p) => Self::Cu(Unitary2::from_params(p)?),
            _ => return Ok(None),
        }))
    }

    /// Number of native CNOTs this gate stands for in gate-count accounting.
    pub fn cnot_weight(&self) -> usize {
        match self {
            Self::Swap => 3,
            _ => 1,
        }
    }

    /// Symmetric gates act identically with operands exchanged.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Self::Cz | Self::Swap | Self::Rzz(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    OneQubit(OneQubitGate),
    TwoQubit(TwoQubitGate),
    /// A two-qubit gate executed over a virtual edge; replaced by a teleport during expansion.
    VirtualTwoQubit {
        gate: TwoQubitGate,
        edge: usize,
    },
    /// Writes its outcome to the gate's single classical bit.
    Measure(Basis),
    Reset,
    /// Applies `pauli` iff the XOR of the gate's classical bits equals `parity`.
    ConditionalPauli {
        pauli: Pauli,
        parity: bool,
    },
}

/// One instruction of a [`Circuit`](super::Circuit).
///
/// `clbits` holds the written bit for a measurement and the read set for a
/// conditional Pauli. `group` tags gates that belong to one teleport instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub clbits: Vec<usize>,
    pub group: Option<usize>,
}

impl Gate {
    fn new(kind: GateKind, qubits: Vec<usize>, clbits: Vec<usize>) -> Self {
        Self {
            kind,
            qubits,
            clbits,
            group: None,
        }
    }

    pub fn one(gate: OneQubitGate, q: usize) -> Self {
        Self::new(GateKind::OneQubit(gate), vec![q], Vec::new())
    }

    pub fn two(gate: TwoQubitGate, a: usize, b: usize) -> Self {
        Self::new(GateKind::TwoQubit(gate), vec![a, b], Vec::new())
    }

    pub fn virtual_two(gate: TwoQubitGate, a: usize, b: usize, edge: usize) -> Self {
        Self::new(
            GateKind::VirtualTwoQubit { gate, edge },
            vec![a, b],
            Vec::new(),
        )
    }

    pub fn h(q: usize) -> Self {
        Self::one(OneQubitGate::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::one(OneQubitGate::X, q)
    }

    pub fn z(q: usize) -> Self {
        Self::one(OneQubitGate::Z, q)
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self::one(OneQubitGate::Rz(theta), q)
    }

    pub fn rx(theta: f64, q: usize) -> Self {
        Self::one(OneQubitGate::Rx(theta), q)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(TwoQubitGate::Cnot, control, target)
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::two(TwoQubitGate::Cz, a, b)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::two(TwoQubitGate::Swap, a, b)
    }

    pub fn rzz(theta: f64, a: usize, b: usize) -> Self {
        Self::two(TwoQubitGate::Rzz(theta), a, b)
    }

    pub fn cu(u: Unitary2, control: usize, target: usize) -> Self {
        Self::two(TwoQubitGate::Cu(u), control, target)
    }

    pub fn measure(q: usize, bit: usize) -> Self {
        Self::new(GateKind::Measure(Basis::Z), vec![q], vec![bit])
    }

    pub fn measure_x(q: usize, bit: usize) -> Self {
        Self::new(GateKind::Measure(Basis::X), vec![q], vec![bit])
    }

    pub fn reset(q: usize) -> Self {
        Self::new(GateKind::Reset, vec![q], Vec::new())
    }

    /// Pauli on `q` applied iff XOR of `bits` equals `parity`.
    pub fn conditional(pauli: Pauli, q: usize, bits: Vec<usize>, parity: bool) -> Self {
        Self::new(GateKind::ConditionalPauli { pauli, parity }, vec![q], bits)
    }

    pub fn with_group(mut self, group: usize) -> Self {
        self.group = Some(group);
        self
    }

    /// Native or virtual two-qubit gate payload, if any.
    pub fn two_qubit(&self) -> Option<&TwoQubitGate> {
        match &self.kind {
            GateKind::TwoQubit(g) | GateKind::VirtualTwoQubit { gate: g, .. } => Some(g),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.two_qubit().is_some()
    }

    pub fn is_virtual(&self) -> bool {
        matches!(self.kind, GateKind::VirtualTwoQubit { .. })
    }

    pub fn is_native_two_qubit(&self) -> bool {
        matches!(self.kind, GateKind::TwoQubit(_))
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            GateKind::OneQubit(g) => g.name(),
            GateKind::TwoQubit(g) | GateKind::VirtualTwoQubit { gate: g, .. } => g.name(),
            GateKind::Measure(Basis::Z) => "measure",
            GateKind::Measure(Basis::X) => "measure_x",
            GateKind::Reset => "reset",
            GateKind::ConditionalPauli {
                pauli: Pauli::X, ..
            } => "cond_x",
            GateKind::ConditionalPauli {
                pauli: Pauli::Z, ..
            } => "cond_z",
        }
    }

    /// Same gate with qubit indices passed through `map`.
    pub fn remap_qubits(&self, map: impl Fn(usize) -> usize) -> Self {
        Self {
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn expected_arity(&self) -> (usize, Option<usize>) {
        match &self.kind {
            GateKind::OneQubit(_) | GateKind::Reset => (1, Some(0)),
            GateKind::TwoQubit(_) | GateKind::VirtualTwoQubit { .. } => (2, Some(0)),
            GateKind::Measure(_) => (1, Some(1)),
            GateKind::ConditionalPauli { .. } => (1, None),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let params = match &self.kind {
            GateKind::OneQubit(g) => g.params(),
            GateKind::TwoQubit(g) | GateKind::VirtualTwoQubit { gate: g, .. } => g.params(),
            _ => Vec::new(),
        };
        if !params.is_empty() {
            let p: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", p.join(", "))?;
        }
        let q: Vec<String> = self.qubits.iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", q.join(", "))?;
        match &self.kind {
            GateKind::Measure(_) => write!(f, " -> c{}", self.clbits[0])?,
            GateKind::ConditionalPauli { parity, .. } => {
                let b: Vec<String> = self.clbits.iter().map(|b| format!("c{b}")).collect();
                write!(f, " if {} == {}", b.join(" ^ "), u8::from(*parity))?;
            }
            GateKind::VirtualTwoQubit { edge, .. } => write!(f, " [virtual edge {edge}]")?,
            _ => {}
        }
        Ok(())
    }
}
