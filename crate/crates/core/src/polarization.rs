//! Spin-1 matrices, frame rotations, and the helicity unit-vector bases.

use std::sync::Arc;

use nalgebra::Matrix3;

use crate::algebra::{complexify, cross_rc, C64, CM3, CV3, I, RV3};
use crate::error::{Error, Result};
use crate::kspace::KGrid;

/// Helicity label σ = ±1 of a transverse mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Helicity::Plus => 0,
            Helicity::Minus => 1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            other => Err(Error::InvalidParameter(format!(
                "helicity must be +1 or -1, got {other}"
            ))),
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

/// Cartesian spin-1 matrices (S_i)_{jk} = −i ε_{ijk} and the helicity
/// projection k̂·S.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub sx: CM3,
    pub sy: CM3,
    pub sz: CM3,
}

impl SpinMatrices {
    pub fn new() -> Self {
        let z = C64::new(0.0, 0.0);
        let mi = -I;
        let pi = I;
        // (S_x)_{jk} = -i eps_{1jk}: nonzero at (y,z) = -i, (z,y) = +i
        let sx = CM3::new(z, z, z, z, z, mi, z, pi, z);
        let sy = CM3::new(z, z, pi, z, z, z, mi, z, z);
        let sz = CM3::new(z, mi, z, pi, z, z, z, z, z);
        Self { sx, sy, sz }
    }

    /// Helicity matrix S_k = k̂·S.
    pub fn helicity(&self, khat: &RV3) -> CM3 {
        self.sx * C64::new(khat.x, 0.0)
            + self.sy * C64::new(khat.y, 0.0)
            + self.sz * C64::new(khat.z, 0.0)
    }
}

impl Default for SpinMatrices {
    fn default() -> Self {
        Self::new()
    }
}

/// Action of S_k on a vector without building the matrix: (k̂·S)v = i k̂×v.
#[inline]
pub fn apply_helicity_matrix(khat: &RV3, v: &CV3) -> CV3 {
    cross_rc(khat, v) * I
}

/// Rotation D(θ, φ) = exp(−iS_z φ)·exp(−iS_y θ). In the Cartesian spin-1
/// representation these exponentials are the ordinary rotation matrices
/// R_z(φ)R_y(θ), so the closed form is exact. Maps ẑ → k̂, x̂ → θ̂, ŷ → φ̂.
pub fn rotation_d(theta: f64, phi: f64) -> CM3 {
    rotation_d_real(theta, phi).map(|x| C64::new(x, 0.0))
}

/// Real form of [`rotation_d`].
pub fn rotation_d_real(theta: f64, phi: f64) -> Matrix3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let ry = Matrix3::new(ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct);
    let rz = Matrix3::new(cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0);
    rz * ry
}

/// Euler-angle twist χ applied about k̂: e⁽χ⁾ = e^{−iσχ} e⁽⁰⁾.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiMode {
    /// χ = 0: the plain (θ̂ + iσφ̂)/√2 basis.
    Zero,
    /// χ = −mφ with integer m (keeps the basis single-valued in φ).
    MPhi(i64),
}

impl ChiMode {
    pub fn chi(&self, _theta: f64, phi: f64) -> f64 {
        match self {
            ChiMode::Zero => 0.0,
            ChiMode::MPhi(m) => -(*m as f64) * phi,
        }
    }
}

/// The transverse unit-vector field e⁽χ⁾_{k,σ} for both helicities on a
/// grid. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PolarizationBasis {
    grid: Arc<KGrid>,
    chi: ChiMode,
    /// Indexed [σ][point].
    vectors: [Vec<CV3>; 2],
}

impl PolarizationBasis {
    /// The χ = 0 basis e⁽⁰⁾_{k,σ} = (θ̂ + iσφ̂)/√2, equal to D(θ,φ) applied
    /// to (x̂ + iσŷ)/√2.
    pub fn e0(grid: Arc<KGrid>) -> Self {
        let mut vectors = [
            Vec::with_capacity(grid.num_points()),
            Vec::with_capacity(grid.num_points()),
        ];
        for p in grid.points() {
            for sigma in Helicity::BOTH {
                let s = sigma.value();
                let v = (complexify(&p.theta_hat) + complexify(&p.phi_hat) * (I * s))
                    / C64::new(2f64.sqrt(), 0.0);
                vectors[sigma.index()].push(v);
            }
        }
        Self {
            grid,
            chi: ChiMode::Zero,
            vectors,
        }
    }

    /// Twist the e⁽⁰⁾ basis by χ: multiplies each vector by e^{−iσχ(θ,φ)}.
    pub fn apply_chi(&self, chi: ChiMode) -> Result<Self> {
        if self.chi != ChiMode::Zero {
            return Err(Error::InvalidParameter(
                "apply_chi expects the e0 basis as input".into(),
            ));
        }
        Ok(self.twisted(|theta, phi| chi.chi(theta, phi), chi))
    }

    /// Twist by an arbitrary χ(θ, φ). The resulting basis is tagged with
    /// `label` for bookkeeping.
    pub fn apply_chi_fn(&self, chi: impl Fn(f64, f64) -> f64, label: ChiMode) -> Result<Self> {
        if self.chi != ChiMode::Zero {
            return Err(Error::InvalidParameter(
                "apply_chi expects the e0 basis as input".into(),
            ));
        }
        Ok(self.twisted(chi, label))
    }

    fn twisted(&self, chi: impl Fn(f64, f64) -> f64, label: ChiMode) -> Self {
        let mut vectors = [
            Vec::with_capacity(self.grid.num_points()),
            Vec::with_capacity(self.grid.num_points()),
        ];
        for (idx, p) in self.grid.points().iter().enumerate() {
            let x = chi(p.theta, p.phi);
            for sigma in Helicity::BOTH {
                let phase = (-I * sigma.value() * x).exp();
                vectors[sigma.index()].push(self.vectors[sigma.index()][idx] * phase);
            }
        }
        Self {
            grid: Arc::clone(&self.grid),
            chi: label,
            vectors,
        }
    }

    /// Basis built from a CLI-style χ choice.
    pub fn with_chi(grid: Arc<KGrid>, chi: ChiMode) -> Self {
        match chi {
            ChiMode::Zero => Self::e0(grid),
            mode => Self::e0(grid).apply_chi(mode).expect("e0 input"),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<KGrid> {
        &self.grid
    }

    #[inline]
    pub fn chi_mode(&self) -> ChiMode {
        self.chi
    }

    #[inline]
    pub fn vector(&self, sigma: Helicity, idx: usize) -> &CV3 {
        &self.vectors[sigma.index()][idx]
    }

    #[inline]
    pub fn vectors(&self, sigma: Helicity) -> &[CV3] {
        &self.vectors[sigma.index()]
    }
}

/// Longitudinal unit vector e_{k,0} = k̂ (helicity 0). Not part of any
/// physical basis here; photons are transverse. Kept for tests.
pub fn longitudinal_vector(khat: &RV3) -> CV3 {
    complexify(khat)
}

/// Explicit three-term expansion of e^{(−mφ)}_{k,σ}:
///   (x̂−iŷ)/(2√2)·(cosθ−σ)·e^{i(mσ+1)φ}
///   − ẑ/√2·sinθ·e^{imσφ}
///   + (x̂+iŷ)/(2√2)·(cosθ+σ)·e^{i(mσ−1)φ}.
/// Used as an independent cross-check of `apply_chi`.
pub fn e_m_explicit(theta: f64, phi: f64, m: i64, sigma: Helicity) -> CV3 {
    let s = sigma.value();
    let ms = m as f64 * s;
    let (sin_t, cos_t) = theta.sin_cos();
    let sqrt2 = 2f64.sqrt();
    let xm = CV3::new(C64::new(1.0, 0.0), -I, C64::new(0.0, 0.0)) / C64::new(2.0 * sqrt2, 0.0);
    let xp = CV3::new(C64::new(1.0, 0.0), I, C64::new(0.0, 0.0)) / C64::new(2.0 * sqrt2, 0.0);
    let zv = CV3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    xm * C64::new(cos_t - s, 0.0) * (I * (ms + 1.0) * phi).exp()
        - zv * C64::new(sin_t / sqrt2, 0.0) * (I * ms * phi).exp()
        + xp * C64::new(cos_t + s, 0.0) * (I * (ms - 1.0) * phi).exp()
}

/// One (s_z, l_z) channel of a helicity unit vector's angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmEntry {
    pub s_z: i64,
    pub l_z: i64,
    pub amplitude: f64,
}

/// The three-channel AM decomposition of e^{(−mφ)}_{k,σ}: amplitudes
/// (cosθ−σ)/2, sinθ/√2, (cosθ+σ)/2 on {s_z, l_z} = {−1, mσ+1}, {0, mσ},
/// {+1, mσ−1}. Every channel has s_z + l_z = mσ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmDecomposition {
    pub entries: [AmEntry; 3],
}

impl AmDecomposition {
    pub fn total_jz(&self) -> i64 {
        self.entries[0].s_z + self.entries[0].l_z
    }

    pub fn sum_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.amplitude * e.amplitude).sum()
    }

    /// Mean spin projection Σ amp²·s_z (equals σ·cosθ).
    pub fn mean_sz(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.amplitude * e.amplitude * e.s_z as f64)
            .sum()
    }
}

pub fn am_decomposition(theta: f64, m: i64, sigma: Helicity) -> AmDecomposition {
    let s = sigma.value();
    let ms = match sigma {
        Helicity::Plus => m,
        Helicity::Minus => -m,
    };
    let cos_t = theta.cos();
    let sin_t = theta.sin();
    AmDecomposition {
        entries: [
            AmEntry {
                s_z: -1,
                l_z: ms + 1,
                amplitude: (cos_t - s) / 2.0,
            },
            AmEntry {
                s_z: 0,
                l_z: ms,
                amplitude: sin_t / 2f64.sqrt(),
            },
            AmEntry {
                s_z: 1,
                l_z: ms - 1,
                amplitude: (cos_t + s) / 2.0,
            },
        ],
    }
}
