//! Exact finite-temperature treatment of small Anderson impurity models, the
//! measurement statistics of phase-estimation circuits fed with their Gibbs
//! states, reconstruction of the one-particle Green's function from those
//! statistics, and a DMFT self-consistency loop that can use either the exact
//! or the reconstructed Green's function as its impurity solver.

pub mod dmft;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod lehmann;
pub mod qavg;
pub mod qpe;

pub use error::{CoreError, Result};
