//! Faraday B-term optical rotation from a two-state quantized-field model.
//!
//! Light in mode 1 (polarization ê⁽¹⁾) scatters forward into the orthogonal
//! mode 2 through a molecule dressed by a static magnetic field. The rotation
//! angle follows from the transition amplitude between |n(1)⟩ and
//! |(n−1)(1); 1(2)⟩, and every perturbative route is checked against exact
//! diagonalization and exact Fock-space evolution in [`fock_oracle`].

pub mod amplitude;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock_oracle;
pub mod model;
pub mod perturbation;

pub use error::{Error, Result};
pub use model::{
    consts, detect_degeneracy, load_model, ExperimentConfig, FieldConfig, MolecularModel, PhysicalConstants,
    Tolerances, UnitSystem, Vec3,
};
