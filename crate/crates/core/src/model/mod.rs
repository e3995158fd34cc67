//! Chain parameters, the finite-chain Hamiltonian and the non-Bloch algebra.

pub mod beta;
pub mod hamiltonian;
pub mod params;
pub mod topology;

pub use beta::{beta_exact, beta_taylor, chi_component, theta_of, BetaPair};
pub use hamiltonian::{build_hamiltonian, hamiltonian_for, ComplexMatrix};
pub use params::{ChainParams, Side, SystemSize};
pub use topology::{classify_topology, winding_number, GapClass, TopologySigns};
