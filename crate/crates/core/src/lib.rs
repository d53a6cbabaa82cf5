//! Coherent Ising machine simulation and traffic assignment as Ising
//! minimization.

pub mod baselines;
pub mod cim;
pub mod compiler;
pub mod config;
pub mod error;
pub mod ising;
pub mod maxcut;
pub mod traffic;

pub use error::{Error, Result};
