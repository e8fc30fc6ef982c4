//! Design toolkit for random quantum circuits on Sycamore-like lattices.
//!
//! The pipeline runs bottom-up: a [`lattice::Lattice`] and its
//! [`dual::DualGraph`] define where gates may act, [`pattern`] turns a
//! [`pattern::PatternCode`] into a per-cycle [`pattern::CircuitLayout`],
//! [`sfa`] estimates the Schrödinger-Feynman simulation cost of a layout over
//! all admissible cuts, and [`search`] ranks every pattern code by that cost.
//! [`fidelity`] predicts the XEB fidelity of a design and [`verify`] holds the
//! desk-scale oracles and simulators used to check the rest.

pub mod design;
pub mod document;
pub mod dual;
pub mod error;
pub mod fidelity;
pub mod lattice;
pub mod pattern;
pub mod search;
pub mod sfa;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{build_lattice, parse_coords, Coord, Family, Lattice, LatticeParams, LatticeSpec, Region};
