//! Simulation of OAM-enhanced angular-displacement estimation with a
//! two-mode squeezed vacuum input and parity detection.
//!
//! - [`gaussian`]: Gaussian states, symplectic propagation, Wigner
//!   function, parity, uniform loss.
//! - [`interferometer`]: optical elements, the 4- and 8-dimensional
//!   pipelines, closed-form signals.
//! - [`sensitivity`]: error-propagation sensitivity, optimisation and
//!   reference limits.
//! - [`fock`]: truncated Fock-space oracle for the lossless signal.
//! - [`validation`]: the cross-check suite behind `oam-parity validate`.
//! - [`cli`]: command-line front end producing CSV data.

pub mod cli;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod sensitivity;
pub mod validation;

pub use error::{Error, Result};
pub use gaussian::{GaussianState, SymplecticTransform};
pub use interferometer::{NoiseConfig, Scenario, Variant};
pub use sensitivity::{LimitSet, Optimum, SensitivityPoint};
