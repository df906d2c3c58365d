//! Physical constants.

use crate::error::{Error, Result};

/// Speed of light, action, permittivity and permeability used throughout.
///
/// Natural units (c = ħ = ε₀ = 1) are the default; SI values are available
/// by construction. The vacuum relation c²ε₀μ₀ = 1 is enforced whenever a
/// set is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub eps0: f64,
    pub mu0: f64,
}

impl PhysicalConstants {
    /// Natural units: c = ħ = ε₀ = μ₀ = 1.
    pub fn natural() -> Self {
        Self {
            c: 1.0,
            hbar: 1.0,
            eps0: 1.0,
            mu0: 1.0,
        }
    }

    /// 2019 SI values. ε₀ is derived as 1/(μ₀c²) so the vacuum relation
    /// holds exactly in floating point.
    pub fn si() -> Self {
        let c = 299_792_458.0_f64;
        let mu0 = 1.256_637_062_12e-6_f64;
        Self {
            c,
            hbar: 1.054_571_817e-34,
            eps0: 1.0 / (mu0 * c * c),
            mu0,
        }
    }

    /// Validating constructor for custom unit systems.
    pub fn new(c: f64, hbar: f64, eps0: f64, mu0: f64) -> Result<Self> {
        if !(c > 0.0 && hbar > 0.0 && eps0 > 0.0 && mu0 > 0.0) {
            return Err(Error::InvalidParameter(
                "constants must all be positive".into(),
            ));
        }
        let product = c * c * eps0 * mu0;
        if (product - 1.0).abs() > 1e-12 {
            return Err(Error::InconsistentConstants(product));
        }
        Ok(Self { c, hbar, eps0, mu0 })
    }

    /// Dispersion ω = c|k| of free-space modes.
    #[inline]
    pub fn omega(&self, k_mag: f64) -> f64 {
        self.c * k_mag
    }
}
