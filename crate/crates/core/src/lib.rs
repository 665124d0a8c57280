//! Probe-qubit detection of quantum critical points in small Ising chains.
//!
//! A probe qubit coupled to the chain splits it into two branches that see
//! the longitudinal field shifted by `+eps` and `-eps`. The squared overlap of
//! the two branch states drops near a critical point. This crate builds the
//! Hamiltonians, ground states and two measurement protocols (conditional
//! preparation at a level crossing, split evolution at an avoided crossing),
//! exact and Trotterized, plus a gate-level engine and a sweep CLI.

pub mod circuit;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod numfmt;
pub mod probe_protocol;
pub mod spin_model;
pub mod sweep;

pub use error::{Error, Result};
