//! Independent ground truth: sector-restricted exact diagonalization,
//! observables, the arbitrary-order degenerate perturbation engine with the
//! jump-coordinate estimate, the weak-coupling matter solver, and
//! perturbative tails for the periodic-boundary model.

pub mod ed;
pub mod pbc_pt;
pub mod perturb;
pub mod weak;

pub use ed::{exact_ground, entanglement_entropy, plaquette_expval, running_coupling, SpectrumResult};
pub use perturb::{estimate_gc, perturb, EffectiveObcModel, PerturbationState, SubspaceLabel};
pub use weak::{weak_coupling_matter, WeakCouplingState};
