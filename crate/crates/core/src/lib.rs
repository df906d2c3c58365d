//! Photon wave mechanics built from a k-space position-operator construction.
//!
//! The crate is organised around a discrete, pole-avoiding wave-vector grid:
//!
//! - [`kspace`] — grids, complex vector fields, finite-difference gradient
//!   and Fourier synthesis to real space;
//! - [`polarization`] — spin-1 matrices, frame rotations and the helicity
//!   unit-vector bases e⁽χ⁾, with their angular-momentum decomposition;
//! - [`posop`] — the position operator family r̂^(α), its eigenvector and
//!   commutator diagnostics, inner products and the similarity map between
//!   α-bases;
//! - [`quantum`] — mode-coefficient photon states truncated at two photons,
//!   one- and two-photon wave-function synthesis, time evolution and the
//!   field/potential/Riemann-Silberstein identifications;
//! - [`observables`] — number and current densities, continuity checks,
//!   momentum and angular-momentum functionals, photodetection comparison;
//! - [`beams`] — Bessel and paraxial vortex beams with their angular
//!   momentum budgets.

pub mod algebra;
pub mod beams;
pub mod bessel;
pub mod constants;
pub mod error;
pub mod kspace;
pub mod observables;
pub mod polarization;
pub mod posop;
pub mod quantum;
pub mod summation;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use kspace::{Axis, Domain, KGrid, ResidualMask, VectorField3};
pub use polarization::{Helicity, PolarizationBasis};
pub use posop::Alpha;
