//! Desk-scale verification: reference oracles, a statevector simulator,
//! entanglement entropy and operator Schmidt ranks.

pub mod entropy;
pub mod oracle;
pub mod schmidt;
pub mod statevector;

pub use entropy::{entanglement_entropy, entropy_profile, EntropyProfile};
pub use oracle::{brute_force_paths, components, flood_fill_sides};
pub use schmidt::{embed, operator_schmidt_rank, operator_schmidt_values};
pub use statevector::{cphase, fsim, simulate_statevector, simulate_with, GateModel, SingleQubitSet, StateVector};
