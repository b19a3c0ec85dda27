//! Band spectra of zigzag and armchair nanotube tight-binding Hamiltonians
//! in an axial magnetic field with a periodic axial potential.
//!
//! The Hamiltonian splits into `N` periodic Jacobi channels: scalar
//! channels for the zigzag tube ([`zigzag`]) and 2×2-block channels for the
//! armchair tube ([`armchair`]). [`spectral`] computes their bands,
//! [`asymptotics`] evaluates closed-form edge and width predictions and
//! [`oracle`] cross-checks the decomposition against the full finite Hamiltonian.

pub mod armchair;
pub mod asymptotics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod spectral;
pub mod zigzag;

pub use error::{Error, Result};
pub use model::{
    effective_period, flat_field_amplitudes, magnetic_phase, ArmchairModel, MagneticField, Model,
    PotentialProfile, ZigzagModel,
};
