// SPDX-License-Identifier: Apache-2.0

//! Qubit routing with teleported gates.
//!
//! A SABRE-style router is extended with *virtual edges*: data-qubit pairs
//! joined through chains of otherwise idle auxiliary qubits, on which a
//! two-qubit gate is executed by constant-depth gate teleportation. The
//! [`rtg`] search picks which virtual edges to offer the router using a
//! temporal-depth and error-cost model, and [`teleport`] expands the chosen
//! teleportations into measurements, resets and parity-conditioned Paulis.
//! Everything is checkable with the branch-enumerating simulator in [`sim`].
//!
//! ```
//! use rtg_core::circuit::{Circuit, Gate};
//! use rtg_core::rtg::{rtg_search, RtgConfig};
//! use rtg_core::topology::{CouplingMap, Layout};
//! use rtg_core::TimingModel;
//!
//! // data line 0-1-2 with an idle qubit 3 bridging 0 and 2
//! let map = CouplingMap::new(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
//! let circuit = Circuit::with_gates(3, 0, vec![Gate::cx(0, 2)]);
//! let result = rtg_search(
//!     &circuit,
//!     &map,
//!     &Layout::identity(3),
//!     &TimingModel::default(),
//!     &RtgConfig::default(),
//! )
//! .unwrap();
//! assert_eq!(result.best.d_t, 3.0);
//! assert_eq!(result.baseline.d_t, 4.0);
//! ```

pub mod bench;
pub mod circuit;
pub mod error;
pub mod qasm;
pub mod router;
pub mod rtg;
pub mod scalar;
pub mod sim;
pub mod teleport;
pub mod topology;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type State = sim::StateVector<f64>;
pub type StateF32 = sim::StateVector<f32>;
pub type TimingModel = circuit::TimingErrorModel<f64>;
pub type TimingModelF32 = circuit::TimingErrorModel<f32>;
pub type Search = rtg::RtgResult<f64>;
