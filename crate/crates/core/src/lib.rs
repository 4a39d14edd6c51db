//! Simulator for state-independent Peres-Mermin contextuality on one photon
//! carrying a path qubit and a polarization qubit.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command line live in the companion `contextuality-cli` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod experiment;
pub mod nchv;
pub mod optics;
pub mod pm_square;
pub mod qcore;
pub mod state_catalog;

pub use error::{Error, Result};
