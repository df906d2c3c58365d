//! JSON scenario configuration. Unknown keys are rejected everywhere so a
//! typo cannot silently change a run.

use std::sync::Arc;

use anyhow::{bail, Context};
use nalgebra::Vector3;
use num_complex::Complex;
use photonwm_core::beams::{BeamKind, BeamSpec, RadialEnvelope};
use photonwm_core::polarization::{ChiMode, Helicity, PolarizationBasis};
use photonwm_core::quantum::{ModeId, PhotonState};
use photonwm_core::{KGrid, PhysicalConstants};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub grid: GridConfig,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default)]
    pub state: Option<StateConfig>,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(default = "default_units")]
    pub units: String,
    /// Half-step offset; disabling it puts points on the singular loci and
    /// construction fails with a diagnostic.
    #[serde(default = "default_true")]
    pub offset: bool,
}

fn default_units() -> String {
    "natural".to_string()
}

fn default_true() -> bool {
    true
}

impl GridConfig {
    pub fn constants(&self) -> anyhow::Result<PhysicalConstants> {
        match self.units.as_str() {
            "natural" => Ok(PhysicalConstants::natural()),
            "si" => Ok(PhysicalConstants::si()),
            other => bail!("unknown units '{other}' (expected 'natural' or 'si')"),
        }
    }

    pub fn build(&self) -> anyhow::Result<Arc<KGrid>> {
        let constants = self.constants()?;
        let grid = KGrid::with_offset(self.n, self.l, constants, self.offset)
            .context("grid construction failed")?;
        Ok(Arc::new(grid))
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    #[serde(default)]
    pub chi: ChiConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ChiConfig {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "m_phi")]
    MPhi { m: i64 },
}

impl Default for ChiConfig {
    fn default() -> Self {
        ChiConfig::Zero
    }
}

impl ChiConfig {
    pub fn mode(&self) -> ChiMode {
        match self {
            ChiConfig::Zero => ChiMode::Zero,
            ChiConfig::MPhi { m } => ChiMode::MPhi(*m),
        }
    }

    pub fn build(&self, grid: &Arc<KGrid>) -> PolarizationBasis {
        PolarizationBasis::with_chi(Arc::clone(grid), self.mode())
    }
}

/// One sparse coefficient entry: k_index holds the integer mode triplet m
/// per axis, with k = (m + ½)Δk.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub k_index: [i64; 3],
    pub sigma: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairCoefficientEntry {
    pub a: ModeRef,
    pub b: ModeRef,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRef {
    pub k_index: [i64; 3],
    pub sigma: i64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "generator", deny_unknown_fields)]
pub enum StateConfig {
    #[serde(rename = "localized")]
    Localized { sigma: i64, r0: [f64; 3] },
    #[serde(rename = "gaussian_packet")]
    GaussianPacket {
        sigma: i64,
        k_center: [f64; 3],
        width: f64,
        #[serde(default)]
        r0: [f64; 3],
    },
    #[serde(rename = "single_mode")]
    SingleMode { sigma: i64, k_index: [i64; 3] },
    #[serde(rename = "two_mode_pair")]
    TwoModePair { a: ModeRef, b: ModeRef },
    #[serde(rename = "coefficients")]
    Coefficients {
        #[serde(default)]
        c1: Vec<CoefficientEntry>,
        #[serde(default)]
        c2: Vec<PairCoefficientEntry>,
    },
}

fn mode_index(grid: &KGrid, k_index: [i64; 3]) -> anyhow::Result<usize> {
    let n = grid.n_per_axis() as i64;
    let half = n / 2;
    let mut ids = [0usize; 3];
    for (axis, m) in k_index.iter().enumerate() {
        let i = m + half;
        if i < 0 || i >= n {
            bail!(
                "k_index component {m} out of range [{}, {}]",
                -half,
                n - 1 - half
            );
        }
        ids[axis] = i as usize;
    }
    Ok(grid.flat_index(ids[0], ids[1], ids[2]))
}

fn mode_ref(grid: &KGrid, r: &ModeRef) -> anyhow::Result<ModeId> {
    Ok(ModeId::new(
        mode_index(grid, r.k_index)?,
        Helicity::from_value(r.sigma)?,
    ))
}

impl StateConfig {
    pub fn build(&self, grid: &Arc<KGrid>) -> anyhow::Result<PhotonState> {
        let st = match self {
            StateConfig::Localized { sigma, r0 } => PhotonState::localized(
                Arc::clone(grid),
                Helicity::from_value(*sigma)?,
                Vector3::from(*r0),
            ),
            StateConfig::GaussianPacket {
                sigma,
                k_center,
                width,
                r0,
            } => PhotonState::gaussian_packet(
                Arc::clone(grid),
                Helicity::from_value(*sigma)?,
                Vector3::from(*k_center),
                *width,
                Vector3::from(*r0),
            )?,
            StateConfig::SingleMode { sigma, k_index } => PhotonState::single_mode(
                Arc::clone(grid),
                mode_index(grid, *k_index)?,
                Helicity::from_value(*sigma)?,
            ),
            StateConfig::TwoModePair { a, b } => PhotonState::two_mode_pair(
                Arc::clone(grid),
                mode_ref(grid, a)?,
                mode_ref(grid, b)?,
            ),
            StateConfig::Coefficients { c1, c2 } => {
                let mut st = PhotonState::vacuum(Arc::clone(grid));
                st.c0 = Complex::new(0.0, 0.0);
                for e in c1 {
                    st.set_c1(
                        Helicity::from_value(e.sigma)?,
                        mode_index(grid, e.k_index)?,
                        Complex::new(e.re, e.im),
                    );
                }
                for e in c2 {
                    st.add_c2(
                        mode_ref(grid, &e.a)?,
                        mode_ref(grid, &e.b)?,
                        Complex::new(e.re, e.im),
                    );
                }
                st.normalized()
            }
        };
        Ok(st)
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub operator_check: Option<OperatorCheckConfig>,
    #[serde(default)]
    pub localized: Option<LocalizedConfig>,
    #[serde(default)]
    pub evolve: Option<EvolveConfig>,
    #[serde(default)]
    pub density: Option<DensityConfig>,
    #[serde(default)]
    pub functionals: Option<FunctionalsConfig>,
    #[serde(default)]
    pub two_photon: Option<TwoPhotonConfig>,
    #[serde(default)]
    pub beam_am: Option<BeamAmConfig>,
    #[serde(default)]
    pub glauber: Option<GlauberConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorCheckConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// number of random transverse test fields per check
    #[serde(default = "default_fields")]
    pub fields: usize,
    #[serde(default)]
    pub tolerances: OperatorTolerances,
}

fn default_seed() -> u64 {
    1
}

fn default_fields() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorTolerances {
    #[serde(default = "default_order")]
    pub eigenvector_min_order: f64,
    #[serde(default = "default_order")]
    pub commutator_min_order: f64,
    #[serde(default = "default_adjoint")]
    pub adjoint_max_defect: f64,
    #[serde(default = "default_ip")]
    pub inner_product_max_defect: f64,
}

fn default_order() -> f64 {
    1.9
}

fn default_adjoint() -> f64 {
    1e-3
}

fn default_ip() -> f64 {
    1e-12
}

impl Default for OperatorTolerances {
    fn default() -> Self {
        Self {
            eigenvector_min_order: default_order(),
            commutator_min_order: default_order(),
            adjoint_max_defect: default_adjoint(),
            inner_product_max_defect: default_ip(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizedConfig {
    pub r0: [f64; 3],
    pub sigma: i64,
    pub alpha: f64,
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub winding: WindingConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindingConfig {
    /// loop radius in r-grid cells
    #[serde(default = "default_loop_radius")]
    pub radius_cells: f64,
    #[serde(default = "default_loop_samples")]
    pub samples: usize,
}

fn default_loop_radius() -> f64 {
    // the localized kernel's first null sits one cell out; stay inside it
    0.5
}

fn default_loop_samples() -> usize {
    128
}

impl Default for WindingConfig {
    fn default() -> Self {
        Self {
            radius_cells: default_loop_radius(),
            samples: default_loop_samples(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub dt: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub alpha: f64,
    #[serde(default)]
    pub t: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalsConfig {
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub origin: [f64; 3],
    /// origin displacement for the J(origin) − J(origin+s) = s×P diagnostic
    #[serde(default = "default_shift")]
    pub origin_shift: [f64; 3],
}

fn default_shift() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPhotonConfig {
    pub alpha: f64,
    #[serde(default)]
    pub t: f64,
    #[serde(default = "default_coarsen")]
    pub coarsen: usize,
    #[serde(default)]
    pub product_limit: Option<usize>,
}

fn default_coarsen() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BeamAmConfig {
    pub kind: String,
    pub omega: f64,
    pub k_z: f64,
    pub l_z: i64,
    pub sigma: i64,
    pub envelope: EnvelopeConfig,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_n_radial")]
    pub n_radial: usize,
    #[serde(default)]
    pub aperture: Option<f64>,
}

fn default_r_max() -> f64 {
    16.0
}

fn default_n_radial() -> usize {
    2048
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum EnvelopeConfig {
    #[serde(rename = "gaussian")]
    Gaussian { waist: f64 },
    #[serde(rename = "flat_top")]
    FlatTop { radius: f64, edge: f64 },
    #[serde(rename = "ring")]
    Ring { r0: f64, width: f64 },
}

impl EnvelopeConfig {
    pub fn build(&self) -> RadialEnvelope {
        match self {
            EnvelopeConfig::Gaussian { waist } => RadialEnvelope::Gaussian { waist: *waist },
            EnvelopeConfig::FlatTop { radius, edge } => RadialEnvelope::FlatTop {
                radius: *radius,
                edge: *edge,
            },
            EnvelopeConfig::Ring { r0, width } => RadialEnvelope::Ring {
                r0: *r0,
                width: *width,
            },
        }
    }
}

impl BeamAmConfig {
    pub fn build(&self, constants: PhysicalConstants) -> anyhow::Result<BeamSpec> {
        let kind = match self.kind.as_str() {
            "paraxial" => BeamKind::Paraxial,
            "bessel" => BeamKind::Bessel,
            other => bail!("unknown beam kind '{other}'"),
        };
        Ok(BeamSpec {
            kind,
            omega: self.omega,
            k_z: self.k_z,
            l_z: self.l_z,
            sigma: Helicity::from_value(self.sigma)?,
            envelope: self.envelope.build(),
            constants,
        })
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GlauberConfig {
    pub omega_bar: f64,
    pub bandwidths: Vec<f64>,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default)]
    pub detector: DetectorConfig,
}

fn default_modes() -> usize {
    129
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    #[serde(default = "default_dz")]
    pub delta_z: f64,
    #[serde(default = "default_da")]
    pub delta_a: f64,
    #[serde(default)]
    pub z: f64,
    #[serde(default)]
    pub t: f64,
}

fn default_dz() -> f64 {
    0.01
}

fn default_da() -> f64 {
    1.0
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            delta_z: default_dz(),
            delta_a: default_da(),
            z: 0.0,
            t: 0.0,
        }
    }
}
