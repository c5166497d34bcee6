//! Entanglement potentials of photon-number qubits.
//!
//! A single-mode state `σ(p, x)` spanned by the vacuum and the single-photon
//! Fock state is mixed with the vacuum on a beam splitter; the entanglement of
//! the two-mode output (negativity, concurrence, relative entropy of
//! entanglement) quantifies the nonclassicality of `σ`. The crate provides the
//! measures, the state families that bound them, local damping channels, the
//! optimizations behind the boundary curves, and a Monte-Carlo scanner.

pub mod boundaries;
pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod output;
pub mod potentials;
pub mod scan;
pub mod states;

pub use error::{Error, Result};
