//! Qubit relaxation channels driven by thermal and squeezed reservoirs.
//!
//! The crate builds completely positive qubit maps from relaxation rates
//! (1/T1, 1/T2, a squeezing-induced 1/T3, equilibrium inversion w_eq),
//! evolves states exactly through the damping basis, extracts operator-sum
//! decompositions, and computes information and entanglement figures of
//! merit: image ellipsoids, minimal output entropy, one-shot Holevo
//! capacity, and the separability time of a shared Bell pair.

pub mod capacity;
pub mod channels;
pub mod damping;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod kraus;
pub mod lindblad;
pub mod mat;
pub mod rk4;
pub mod state;
pub mod tol;

pub use channels::{ChannelConfig, ChannelKind, RateParams, ReservoirParams};
pub use error::{Error, Result};
pub use mat::CMat;
pub use state::QubitState;
