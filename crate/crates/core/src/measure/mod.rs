//! Measurement machinery: commuting-set partition, diagonalizing Clifford
//! circuits, shot allocation and the sampled energy estimator.

pub mod clifford;
pub mod estimate;
pub mod partition;

pub use clifford::{synth_diag_circuit, EntanglingGate};
pub use estimate::{estimate_energy, EnergyEstimate, ShotCount};
pub use partition::{allocate_shots, build_plan, partition, CommutingSet, MeasurementPlan};
