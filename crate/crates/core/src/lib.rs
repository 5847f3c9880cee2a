//! SIS epidemics on dynamic switching networks.
//!
//! The crate is organised around the pieces needed to decide whether an
//! epidemic dies out when the contact network changes at every step:
//!
//! * [`netmodel`]: graphs, random generators, edge-list I/O and the
//!   dominant eigenvalue of nonnegative matrices.
//! * [`switching`]: policies that pick the adjacency matrix used at each step.
//! * [`meanfield`]: the deterministic infection-probability map, its
//!   equilibria and its linearisation at the origin.
//! * [`spectral`]: joint-spectral-radius brackets and the die-out criteria
//!   built on them.
//! * [`montecarlo`]: agent-based stochastic SIS runs and parameter sweeps.

pub mod error;
pub mod matrix;
pub mod meanfield;
pub mod montecarlo;
pub mod netmodel;
pub mod rng;
pub mod spectral;
pub mod switching;

pub use error::{Error, Result};
pub use matrix::{Matrix, NormKind};
pub use netmodel::{EpidemicParams, Graph};
