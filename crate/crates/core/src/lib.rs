//! Two qubits ultrastrongly coupled to a leaky cavity mode: Rabi and
//! Jaynes–Cummings models, standard and dressed-state Lindblad dynamics, and
//! the entanglement quantifiers used to study qubit–cavity correlations.

pub mod checks;
pub mod cli;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod policy;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use policy::NumericPolicy;
