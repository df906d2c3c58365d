//! Complex 3-vector fields over a grid.

use std::sync::Arc;

use crate::algebra::{cdot, norm_sq, C64, CV3};
use crate::error::{Error, Result};
use crate::kspace::grid::KGrid;
use crate::summation::{CompensatedComplexSum, CompensatedSum};

/// Which space the samples live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    K,
    R,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::K => "k-space",
            Domain::R => "r-space",
        }
    }
}

/// A complex 3-vector sample per grid point. Carrier for wave functions,
/// potentials and field strengths in either domain.
#[derive(Debug, Clone)]
pub struct VectorField3 {
    domain: Domain,
    grid: Arc<KGrid>,
    pub values: Vec<CV3>,
}

impl VectorField3 {
    pub fn zeros(grid: Arc<KGrid>, domain: Domain) -> Self {
        let n = grid.num_points();
        Self {
            domain,
            grid,
            values: vec![CV3::zeros(); n],
        }
    }

    pub fn from_values(grid: Arc<KGrid>, domain: Domain, values: Vec<CV3>) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.num_points()
            )));
        }
        Ok(Self {
            domain,
            grid,
            values,
        })
    }

    /// Build by evaluating `f` at every grid point index (in parallel; the
    /// output order is the index order regardless of thread count).
    pub fn from_fn(grid: Arc<KGrid>, domain: Domain, f: impl Fn(usize) -> CV3 + Sync + Send) -> Self {
        use rayon::prelude::*;
        let values = (0..grid.num_points())
            .into_par_iter()
            .map(f)
            .collect();
        Self {
            domain,
            grid,
            values,
        }
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    #[inline]
    pub fn grid(&self) -> &Arc<KGrid> {
        &self.grid
    }

    pub fn require_domain(&self, domain: Domain) -> Result<()> {
        if self.domain != domain {
            return Err(Error::DomainMismatch {
                expected: domain.name(),
                got: self.domain.name(),
            });
        }
        Ok(())
    }

    pub fn require_same_grid(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.grid, &other.grid) {
            // Distinct allocations with identical parameters still count.
            let a = &self.grid;
            let b = &other.grid;
            if a.n_per_axis() != b.n_per_axis()
                || a.box_length() != b.box_length()
                || a.offset() != b.offset()
            {
                return Err(Error::GridMismatch(
                    "fields live on different grids".into(),
                ));
            }
        }
        Ok(())
    }

    /// Pointwise scaling by a complex function of the point index.
    pub fn scaled_by(&self, f: impl Fn(usize) -> C64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * f(i))
            .collect();
        Self {
            domain: self.domain,
            grid: Arc::clone(&self.grid),
            values,
        }
    }

    /// Σ over points of conj(self)·other (unit weight per point).
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.require_same_grid(other)?;
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.name(),
                got: other.domain.name(),
            });
        }
        let mut acc = CompensatedComplexSum::new();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc.add(cdot(a, b));
        }
        Ok(acc.value())
    }

    /// Σ |F|² with unit weight.
    pub fn norm_sq_sum(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for v in &self.values {
            acc.add(norm_sq(v));
        }
        acc.value()
    }

    /// √(Σ |F|²).
    pub fn norm(&self) -> f64 {
        self.norm_sq_sum().sqrt()
    }

    /// √(Σ_kept |F|²) over a keep-mask.
    pub fn masked_norm(&self, keep: &[bool]) -> f64 {
        let mut acc = CompensatedSum::new();
        for (v, &k) in self.values.iter().zip(keep) {
            if k {
                acc.add(norm_sq(v));
            }
        }
        acc.value().sqrt()
    }

    /// √(Σ w_k |F_k|²) for non-negative per-point weights.
    pub fn weighted_norm(&self, weights: &[f64]) -> f64 {
        let mut acc = CompensatedSum::new();
        for (v, &w) in self.values.iter().zip(weights) {
            if w > 0.0 {
                acc.add(w * norm_sq(v));
            }
        }
        acc.value().sqrt()
    }

    /// Largest |F| over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| norm_sq(v).sqrt())
            .fold(0.0, f64::max)
    }

    /// self − other.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            domain: self.domain,
            grid: Arc::clone(&self.grid),
            values,
        })
    }

    /// Relative longitudinal content max_k |k̂·F| / max_k |F| (k-space).
    pub fn longitudinal_content(&self) -> Result<f64> {
        self.require_domain(Domain::K)?;
        let scale = self.max_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let mut worst = 0.0f64;
        for (p, v) in self.grid.points().iter().zip(&self.values) {
            let along = crate::algebra::dot_rc(&p.khat, v).norm();
            worst = worst.max(along);
        }
        Ok(worst / scale)
    }

    /// Project out the longitudinal part: F ← F − k̂(k̂·F).
    pub fn project_transverse(&mut self) -> Result<()> {
        self.require_domain(Domain::K)?;
        let grid = Arc::clone(&self.grid);
        for (p, v) in grid.points().iter().zip(self.values.iter_mut()) {
            let along = crate::algebra::dot_rc(&p.khat, v);
            *v -= crate::algebra::complexify(&p.khat) * along;
        }
        Ok(())
    }
}
