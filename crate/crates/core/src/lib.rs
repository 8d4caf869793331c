//! Classical simulation toolkit for plaquette-scale lattice QED: encoded
//! Hamiltonians, measurement partitioning, ansatz statevector simulation with
//! shot noise, derivative-free global optimization, and independent analytic
//! oracles (exact diagonalization, degenerate perturbation theory, a
//! weak-coupling solver).

pub mod encoding;
pub mod error;
pub mod hamiltonian;
pub mod opt;
pub mod oracle;
pub mod pauli;
pub mod measure;
pub mod sim;
pub mod special;
pub mod vqe;

pub use error::Error;
pub use hamiltonian::{Model, ModelKind, ModelParams};
pub use pauli::{PauliString, PauliSum};
