//! Discrete wave-vector grids, per-point spherical geometry, and the
//! spectral / finite-difference calculus used by every other module.

mod field;
mod grid;
mod spectral;

pub use field::{Domain, VectorField3};
pub use grid::{spherical_frame, Axis, KGrid, KPoint, ResidualMask, SphericalFrame};
pub use spectral::{fourier_to_rspace, k_gradient};
