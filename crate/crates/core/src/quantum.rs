//! Mode-coefficient photon states (vacuum + one- + two-photon sectors),
//! wave-function synthesis, time evolution, and the field / potential /
//! Riemann-Silberstein identifications with Maxwell residual checks.

use std::sync::Arc;

use crate::algebra::{cross_rc, C64, CV3, I, RV3};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::kspace::{fourier_to_rspace, Domain, KGrid, VectorField3};
use crate::polarization::{Helicity, PolarizationBasis};
use crate::posop::Alpha;
use crate::summation::{CompensatedComplexSum, CompensatedSum};

/// Identifies one mode (k grid point, helicity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId {
    pub point: usize,
    pub sigma_index: usize,
}

impl ModeId {
    pub fn new(point: usize, sigma: Helicity) -> Self {
        Self {
            point,
            sigma_index: sigma.index(),
        }
    }

    pub fn sigma(&self) -> Helicity {
        if self.sigma_index == 0 {
            Helicity::Plus
        } else {
            Helicity::Minus
        }
    }
}

/// One two-photon coefficient c_{k,σ;k′,σ′} on the canonically ordered
/// (mode_a ≤ mode_b) unordered pair.
#[derive(Debug, Clone, Copy)]
pub struct PairEntry {
    pub a: ModeId,
    pub b: ModeId,
    pub amp: C64,
}

/// State vector truncated at two photons:
///   |Ψ⟩ = c₀|0⟩ + Σ c_{k,σ} a†|0⟩ + (1/2!) Σ √N c_{k,σ;k′,σ′} a†a†|0⟩,
/// N = 1 + δ_{kk′}δ_{σσ′}. The c₂ coefficients are stored once per
/// unordered pair (they are symmetric by definition), so the norm is
/// |c₀|² + Σ|c₁|² + Σ_{pairs}|c₂|².
#[derive(Debug, Clone)]
pub struct PhotonState {
    grid: Arc<KGrid>,
    pub c0: C64,
    /// Dense one-photon amplitudes, indexed [σ-block][point].
    c1: [Vec<C64>; 2],
    /// Sparse two-photon amplitudes on ordered-index pairs.
    c2: Vec<PairEntry>,
}

impl PhotonState {
    pub fn vacuum(grid: Arc<KGrid>) -> Self {
        let n = grid.num_points();
        Self {
            grid,
            c0: C64::new(1.0, 0.0),
            c1: [vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n]],
            c2: Vec::new(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<KGrid> {
        &self.grid
    }

    #[inline]
    pub fn c1(&self, sigma: Helicity, point: usize) -> C64 {
        self.c1[sigma.index()][point]
    }

    pub fn set_c1(&mut self, sigma: Helicity, point: usize, amp: C64) {
        self.c1[sigma.index()][point] = amp;
    }

    #[inline]
    pub fn c1_block(&self, sigma: Helicity) -> &[C64] {
        &self.c1[sigma.index()]
    }

    #[inline]
    pub fn c2_entries(&self) -> &[PairEntry] {
        &self.c2
    }

    /// Add a two-photon amplitude for the unordered pair {a, b}; amplitudes
    /// on the same pair accumulate.
    pub fn add_c2(&mut self, a: ModeId, b: ModeId, amp: C64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if let Some(e) = self.c2.iter_mut().find(|e| e.a == lo && e.b == hi) {
            e.amp += amp;
        } else {
            self.c2.push(PairEntry { a: lo, b: hi, amp });
        }
    }

    /// |c₀|² + Σ|c₁|² + Σ_pairs |c₂|².
    pub fn norm_sq(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(self.c0.norm_sqr());
        for block in &self.c1 {
            for c in block {
                acc.add(c.norm_sqr());
            }
        }
        for e in &self.c2 {
            acc.add(e.amp.norm_sqr());
        }
        acc.value()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            let s = C64::new(1.0 / n, 0.0);
            self.c0 *= s;
            for block in self.c1.iter_mut() {
                for c in block.iter_mut() {
                    *c *= s;
                }
            }
            for e in self.c2.iter_mut() {
                e.amp *= s;
            }
        }
        self
    }

    /// Photon-number expectation ⟨N̂⟩ = Σ|c₁|² + 2Σ|c₂|² (normalized state).
    pub fn photon_number(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for block in &self.c1 {
            for c in block {
                acc.add(c.norm_sqr());
            }
        }
        for e in &self.c2 {
            acc.add(2.0 * e.amp.norm_sqr());
        }
        acc.value()
    }

    /// Free evolution by dt: c₁ → e^{−iω dt} c₁, c₂ → e^{−i(ω+ω′)dt} c₂.
    /// c₀ is stationary. Exactly norm-preserving.
    pub fn evolve(&self, dt: f64) -> Self {
        let grid = &self.grid;
        let phase = |point: usize| (-I * grid.point(point).omega * dt).exp();
        let mut out = self.clone();
        for sigma in Helicity::BOTH {
            for (point, c) in out.c1[sigma.index()].iter_mut().enumerate() {
                *c *= phase(point);
            }
        }
        for e in out.c2.iter_mut() {
            e.amp *= phase(e.a.point) * phase(e.b.point);
        }
        out
    }

    /// A single occupied mode.
    pub fn single_mode(grid: Arc<KGrid>, k_point: usize, sigma: Helicity) -> Self {
        let mut st = Self::vacuum(grid);
        st.c0 = C64::new(0.0, 0.0);
        st.set_c1(sigma, k_point, C64::new(1.0, 0.0));
        st
    }

    /// One-photon Gaussian packet: c ∝ exp(−|k−k̄|²/(2w²)) e^{−ik·r₀} in a
    /// single helicity block.
    pub fn gaussian_packet(
        grid: Arc<KGrid>,
        sigma: Helicity,
        k_center: RV3,
        width: f64,
        r0: RV3,
    ) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "packet width must be positive, got {width}"
            )));
        }
        let mut st = Self::vacuum(Arc::clone(&grid));
        st.c0 = C64::new(0.0, 0.0);
        for (idx, p) in grid.points().iter().enumerate() {
            let dk = p.k - k_center;
            let w = (-dk.norm_squared() / (2.0 * width * width)).exp();
            st.set_c1(sigma, idx, (-I * p.k.dot(&r0)).exp() * w);
        }
        Ok(st.normalized())
    }

    /// The localized state with c_{k,σ} ∝ e^{−ik·r₀}: every mode weighted
    /// equally, phases pointing at r₀.
    pub fn localized(grid: Arc<KGrid>, sigma: Helicity, r0: RV3) -> Self {
        let mut st = Self::vacuum(Arc::clone(&grid));
        st.c0 = C64::new(0.0, 0.0);
        for (idx, p) in grid.points().iter().enumerate() {
            st.set_c1(sigma, idx, (-I * p.k.dot(&r0)).exp());
        }
        st.normalized()
    }

    /// Two-photon product-like state with both photons specified.
    pub fn two_mode_pair(grid: Arc<KGrid>, a: ModeId, b: ModeId) -> Self {
        let mut st = Self::vacuum(grid);
        st.c0 = C64::new(0.0, 0.0);
        st.add_c2(a, b, C64::new(1.0, 0.0));
        st.normalized()
    }
}

/// A synthesized one-photon wave function Ψ^(α)_σ(r, t), kept in both
/// domains: `modal` holds the k-space coefficients ω^α e⁽χ⁾ c e^{−iωt}/√V,
/// `spatial` their Fourier synthesis on the conjugate r-grid. Spectral
/// derivatives act on `modal`; densities and functionals read `spatial`.
#[derive(Debug, Clone)]
pub struct WaveField {
    pub alpha: Alpha,
    pub sigma: Helicity,
    pub t: f64,
    pub modal: VectorField3,
    pub spatial: VectorField3,
}

impl WaveField {
    #[inline]
    pub fn grid(&self) -> &Arc<KGrid> {
        self.modal.grid()
    }
}

/// Ψ^(α)_σ(r,t) = Σ_k c_{k,σ} e⁽χ⁾_{k,σ} ω^α e^{i(k·r − ωt)}/√V.
pub fn synthesize_one_photon(
    state: &PhotonState,
    basis: &PolarizationBasis,
    alpha: Alpha,
    sigma: Helicity,
    t: f64,
) -> Result<WaveField> {
    if state.grid().num_points() != basis.grid().num_points()
        || state.grid().box_length() != basis.grid().box_length()
    {
        return Err(Error::GridMismatch(
            "state and basis live on different grids".into(),
        ));
    }
    let grid = Arc::clone(state.grid());
    let a = alpha.value();
    let g2 = Arc::clone(&grid);
    let modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, |idx| {
        let p = g2.point(idx);
        let c = state.c1(sigma, idx);
        basis.vector(sigma, idx) * (c * p.omega.powf(a) * (-I * p.omega * t).exp())
    });
    let spatial = fourier_to_rspace(&modal)?;
    Ok(WaveField {
        alpha,
        sigma,
        t,
        modal,
        spatial,
    })
}

/// Synthesize a derived field by mapping each modal coefficient, then
/// re-projecting to r-space.
fn synthesize_mapped(base: &WaveField, f: impl Fn(usize, &CV3) -> CV3 + Sync + Send) -> Result<VectorField3> {
    let grid = Arc::clone(base.grid());
    let modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, |idx| {
        f(idx, &base.modal.values[idx])
    });
    fourier_to_rspace(&modal)
}

/// Spectral time derivative: modal coefficients × (−iω).
pub fn time_derivative_field(base: &WaveField) -> Result<VectorField3> {
    let grid = Arc::clone(base.grid());
    synthesize_mapped(base, |idx, v| v * (-I * grid.point(idx).omega))
}

/// Spectral curl: modal coefficients × (ik×).
pub fn curl_field(base: &WaveField) -> Result<VectorField3> {
    let grid = Arc::clone(base.grid());
    synthesize_mapped(base, |idx, v| cross_rc(&grid.point(idx).k, v) * I)
}

/// Spectral gradient component: modal coefficients × (ik_a).
pub fn gradient_field(base: &WaveField, axis: crate::kspace::Axis) -> Result<VectorField3> {
    let grid = Arc::clone(base.grid());
    synthesize_mapped(base, |idx, v| v * (I * grid.point(idx).k[axis.index()]))
}

/// ‖i∂_tΨ − σc∇×Ψ‖ / ‖Ψ‖ over the r-grid. Both sides are evaluated
/// spectrally, so the residual reduces mode-wise to the identity
/// i k̂ × e = σ e and vanishes to round-off for any α.
pub fn wave_equation_residual(
    state: &PhotonState,
    basis: &PolarizationBasis,
    alpha: Alpha,
    sigma: Helicity,
    t: f64,
) -> Result<f64> {
    let psi = synthesize_one_photon(state, basis, alpha, sigma, t)?;
    let dt = time_derivative_field(&psi)?;
    let curl = curl_field(&psi)?;
    let c = psi.grid().constants().c;
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (idx, psi_v) in psi.spatial.values.iter().enumerate() {
        let lhs = dt.values[idx] * I;
        let rhs = curl.values[idx] * C64::new(sigma.value() * c, 0.0);
        num.add(crate::algebra::norm_sq(&(lhs - rhs)));
        den.add(crate::algebra::norm_sq(psi_v));
    }
    Ok((num.value() / den.value()).sqrt())
}

/// ‖i∂_tΨ^(−1/2) − Ψ^(+1/2)‖ / ‖Ψ^(+1/2)‖: the field-potential link.
pub fn field_potential_link_residual(
    state: &PhotonState,
    basis: &PolarizationBasis,
    sigma: Helicity,
    t: f64,
) -> Result<f64> {
    let minus = synthesize_one_photon(state, basis, Alpha::MinusHalf, sigma, t)?;
    let plus = synthesize_one_photon(state, basis, Alpha::PlusHalf, sigma, t)?;
    let dt = time_derivative_field(&minus)?;
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (idx, plus_v) in plus.spatial.values.iter().enumerate() {
        let lhs = dt.values[idx] * I;
        num.add(crate::algebra::norm_sq(&(lhs - plus_v)));
        den.add(crate::algebra::norm_sq(plus_v));
    }
    Ok((num.value() / den.value()).sqrt())
}

/// The positive-frequency field set of one helicity:
///   A⁺ = √(ħ/2ε₀) Ψ^(−1/2),   D⁺ = i√(ħε₀/2) Ψ^(+1/2),
///   B⁺ = ∇×A⁺,   E⁺ = D⁺/ε₀,   F⁺ = D⁺/√(2ε₀) + iσ B⁺/√(2μ₀).
#[derive(Debug, Clone)]
pub struct FieldSet {
    pub sigma: Helicity,
    pub t: f64,
    pub a_plus: WaveField,
    pub d_plus: WaveField,
    pub b_plus: VectorField3,
    pub b_modal: VectorField3,
    pub e_plus: VectorField3,
    pub rs: VectorField3,
}

/// Build the field set from a (Ψ^(−1/2), Ψ^(+1/2)) pair of the same state.
pub fn field_identifications(
    psi_minus: &WaveField,
    psi_plus: &WaveField,
    constants: &PhysicalConstants,
) -> Result<FieldSet> {
    if psi_minus.alpha != Alpha::MinusHalf || psi_plus.alpha != Alpha::PlusHalf {
        return Err(Error::AlphaMismatch(format!(
            "field identifications need (-1/2, +1/2), got ({}, {})",
            psi_minus.alpha.label(),
            psi_plus.alpha.label()
        )));
    }
    if psi_minus.sigma != psi_plus.sigma || psi_minus.t != psi_plus.t {
        return Err(Error::AlphaMismatch(
            "field pair must share helicity and time".into(),
        ));
    }
    let sigma = psi_minus.sigma;
    let grid = Arc::clone(psi_minus.grid());

    let a_scale = C64::new((constants.hbar / (2.0 * constants.eps0)).sqrt(), 0.0);
    let d_scale = I * (constants.hbar * constants.eps0 / 2.0).sqrt();

    let scale_field = |wf: &WaveField, s: C64| -> WaveField {
        WaveField {
            alpha: wf.alpha,
            sigma: wf.sigma,
            t: wf.t,
            modal: wf.modal.scaled_by(|_| s),
            spatial: wf.spatial.scaled_by(|_| s),
        }
    };
    let a_plus = scale_field(psi_minus, a_scale);
    let d_plus = scale_field(psi_plus, d_scale);

    let g2 = Arc::clone(&grid);
    let a_modal = a_plus.modal.clone();
    let b_modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, move |idx| {
        cross_rc(&g2.point(idx).k, &a_modal.values[idx]) * I
    });
    let b_plus = fourier_to_rspace(&b_modal)?;
    let e_plus = d_plus
        .spatial
        .scaled_by(|_| C64::new(1.0 / constants.eps0, 0.0));
    let rs_d = 1.0 / (2.0 * constants.eps0).sqrt();
    let rs_b = sigma.value() / (2.0 * constants.mu0).sqrt();
    let mut rs = d_plus.spatial.scaled_by(|_| C64::new(rs_d, 0.0));
    for (v, b) in rs.values.iter_mut().zip(&b_plus.values) {
        *v += b * (I * rs_b);
    }
    Ok(FieldSet {
        sigma,
        t: psi_minus.t,
        a_plus,
        d_plus,
        b_plus,
        b_modal,
        e_plus,
        rs,
    })
}

/// Relative defects of the definite-helicity identities
/// D⁺/√ε₀ = iσB⁺/√μ₀ and F⁺ = √2·D⁺/√ε₀.
#[derive(Debug, Clone, Copy)]
pub struct HelicityIdentityReport {
    pub db_defect: f64,
    pub rs_defect: f64,
}

pub fn helicity_identity_defects(
    fields: &FieldSet,
    constants: &PhysicalConstants,
) -> HelicityIdentityReport {
    let mut db_num = CompensatedSum::new();
    let mut rs_num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    let s = fields.sigma.value();
    for (idx, d) in fields.d_plus.spatial.values.iter().enumerate() {
        let lhs = d * C64::new(1.0 / constants.eps0.sqrt(), 0.0);
        let rhs = fields.b_plus.values[idx] * (I * s / constants.mu0.sqrt());
        db_num.add(crate::algebra::norm_sq(&(lhs - rhs)));
        let rs_expect = lhs * C64::new(2f64.sqrt(), 0.0);
        rs_num.add(crate::algebra::norm_sq(
            &(fields.rs.values[idx] - rs_expect),
        ));
        den.add(crate::algebra::norm_sq(&lhs));
    }
    let den = den.value().max(f64::MIN_POSITIVE);
    HelicityIdentityReport {
        db_defect: (db_num.value() / den).sqrt(),
        rs_defect: (rs_num.value() / den).sqrt(),
    }
}

/// Relative spectral norms of the four vacuum Maxwell residuals for a
/// definite-helicity field set: ∇·D⁺, ∇·B⁺, ∇×E⁺ + ∂_tB⁺, ∇×H⁺ − ∂_tD⁺.
#[derive(Debug, Clone, Copy)]
pub struct MaxwellReport {
    pub div_d: f64,
    pub div_b: f64,
    pub faraday: f64,
    pub ampere: f64,
}

impl MaxwellReport {
    pub fn max(&self) -> f64 {
        self.div_d
            .max(self.div_b)
            .max(self.faraday)
            .max(self.ampere)
    }
}

pub fn maxwell_residuals(
    fields: &FieldSet,
    constants: &PhysicalConstants,
) -> Result<MaxwellReport> {
    let grid = Arc::clone(fields.a_plus.grid());

    // scalar divergences, synthesized from ik·modal
    let div_norm = |modal: &VectorField3| -> Result<(f64, f64)> {
        let g2 = Arc::clone(&grid);
        let m2 = modal.clone();
        let div_modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, move |idx| {
            let v = crate::algebra::dot_rc(&g2.point(idx).k, &m2.values[idx]) * I;
            CV3::new(v, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
        });
        let div_r = fourier_to_rspace(&div_modal)?;
        let g3 = Arc::clone(&grid);
        let scale_modal = modal.scaled_by(move |idx| C64::new(g3.point(idx).mag, 0.0));
        Ok((div_r.norm(), scale_modal.norm().max(f64::MIN_POSITIVE)))
    };

    let (div_d_num, div_d_scale) = div_norm(&fields.d_plus.modal)?;
    let (div_b_num, div_b_scale) = div_norm(&fields.b_modal)?;

    // Faraday: ∇×E⁺ + ∂_tB⁺
    let g2 = Arc::clone(&grid);
    let e_modal = fields
        .d_plus
        .modal
        .scaled_by(|_| C64::new(1.0 / constants.eps0, 0.0));
    let curl_e_modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, move |idx| {
        cross_rc(&g2.point(idx).k, &e_modal.values[idx]) * I
    });
    let curl_e = fourier_to_rspace(&curl_e_modal)?;
    let g3 = Arc::clone(&grid);
    let dt_b_modal = fields
        .b_modal
        .scaled_by(move |idx| -I * g3.point(idx).omega);
    let dt_b = fourier_to_rspace(&dt_b_modal)?;
    let mut faraday = curl_e;
    for (v, b) in faraday.values.iter_mut().zip(&dt_b.values) {
        *v += b;
    }
    let mut curl_e_scale = CompensatedSum::new();
    let g6 = Arc::clone(&grid);
    for (idx, v) in fields.d_plus.modal.values.iter().enumerate() {
        let k = g6.point(idx).mag / constants.eps0;
        curl_e_scale.add(crate::algebra::norm_sq(v) * k * k);
    }
    let faraday_scale = curl_e_scale.value().sqrt().max(f64::MIN_POSITIVE);

    // Ampère (vacuum): ∇×H⁺ − ∂_tD⁺, H⁺ = B⁺/μ₀
    let g4 = Arc::clone(&grid);
    let b_modal = fields.b_modal.clone();
    let curl_h_modal = VectorField3::from_fn(Arc::clone(&grid), Domain::K, move |idx| {
        cross_rc(&g4.point(idx).k, &b_modal.values[idx]) * (I / constants.mu0)
    });
    let curl_h = fourier_to_rspace(&curl_h_modal)?;
    let g5 = Arc::clone(&grid);
    let dt_d_modal = fields
        .d_plus
        .modal
        .scaled_by(move |idx| -I * g5.point(idx).omega);
    let dt_d = fourier_to_rspace(&dt_d_modal)?;
    let ampere = curl_h.difference(&dt_d)?;
    let mut curl_h_scale = CompensatedSum::new();
    let g7 = Arc::clone(&grid);
    for (idx, v) in fields.b_modal.values.iter().enumerate() {
        let k = g7.point(idx).mag / constants.mu0;
        curl_h_scale.add(crate::algebra::norm_sq(v) * k * k);
    }
    let ampere_scale = curl_h_scale.value().sqrt().max(f64::MIN_POSITIVE);

    Ok(MaxwellReport {
        div_d: div_d_num / div_d_scale,
        div_b: div_b_num / div_b_scale,
        faraday: faraday.norm() / faraday_scale,
        ampere: ampere.norm() / ampere_scale,
    })
}

/// Two-photon wave function Ψ^(α)_{σσ′;jj′}(r, r′; t, t) sampled on a
/// coarsened product grid. Storage layout: [ri][rj][j][j′] flattened.
#[derive(Debug, Clone)]
pub struct TwoPhotonWaveField {
    pub alpha: Alpha,
    pub sigma: (Helicity, Helicity),
    pub t: f64,
    /// Flat r-grid indices of the coarsened subgrid (same for r and r′).
    pub sub_indices: Vec<usize>,
    /// Riemann weight of one coarse cell, (coarsen·Δr)³.
    pub cell_volume: f64,
    pub values: Vec<C64>,
}

impl TwoPhotonWaveField {
    #[inline]
    pub fn value(&self, ri: usize, rj: usize, j: usize, jp: usize) -> C64 {
        let n = self.sub_indices.len();
        self.values[((ri * n + rj) * 3 + j) * 3 + jp]
    }

    pub fn n_sub(&self) -> usize {
        self.sub_indices.len()
    }
}

/// Default memory guard for the product grid (complex values).
pub const DEFAULT_PRODUCT_LIMIT: usize = 20_000_000;

/// Evaluate the symmetrized two-photon sum
///   Ψ(r,σ,j; r′,σ′,j′; t) = Σ_{(a,b) ordered} √N_ab c_ab (ω_aω_b)^α
///       e_{a,j} e_{b,j′} E_a(r,t) E_b(r′,t),  E_k(r,t) = e^{i(k·r−ωt)}/√V,
/// restricted to the ordered pairs whose helicities match (σ, σ′). The
/// √N = √2 factor on doubly occupied modes comes out of the Wick
/// contraction of ⟨0|ψψ a†a†|0⟩; exchange symmetry is automatic.
pub fn synthesize_two_photon(
    state: &PhotonState,
    basis: &PolarizationBasis,
    alpha: Alpha,
    sigmas: (Helicity, Helicity),
    t: f64,
    coarsen: usize,
    product_limit: Option<usize>,
) -> Result<TwoPhotonWaveField> {
    if coarsen == 0 {
        return Err(Error::InvalidParameter("coarsen must be >= 1".into()));
    }
    let grid = Arc::clone(state.grid());
    let n = grid.n_per_axis();
    let per_axis: Vec<usize> = (0..n).step_by(coarsen).collect();
    let n_sub = per_axis.len().pow(3);
    let total = n_sub * n_sub * 9;
    let limit = product_limit.unwrap_or(DEFAULT_PRODUCT_LIMIT);
    if total > limit {
        return Err(Error::ProductGridTooLarge {
            requested: total,
            limit,
        });
    }
    let mut sub_indices = Vec::with_capacity(n_sub);
    for &ix in &per_axis {
        for &iy in &per_axis {
            for &iz in &per_axis {
                sub_indices.push(grid.flat_index(ix, iy, iz));
            }
        }
    }

    let a_exp = alpha.value();
    let inv_sqrt_v = 1.0 / grid.volume().sqrt();
    let mut values = vec![C64::new(0.0, 0.0); total];

    let mode_table = |mode: ModeId| -> Vec<C64> {
        let p = grid.point(mode.point);
        sub_indices
            .iter()
            .map(|&ridx| {
                let r = grid.r_point(ridx);
                (I * (p.k.dot(&r) - p.omega * t)).exp() * inv_sqrt_v
            })
            .collect()
    };

    let mut ordered: Vec<(ModeId, ModeId, C64)> = Vec::new();
    for e in state.c2_entries() {
        let root_n = if e.a == e.b { 2f64.sqrt() } else { 1.0 };
        ordered.push((e.a, e.b, e.amp * root_n));
        if e.a != e.b {
            ordered.push((e.b, e.a, e.amp * root_n));
        }
    }

    for (a, b, amp) in ordered {
        if a.sigma() != sigmas.0 || b.sigma() != sigmas.1 {
            continue;
        }
        let pa = grid.point(a.point);
        let pb = grid.point(b.point);
        let weight = amp * (pa.omega * pb.omega).powf(a_exp);
        let ea = *basis.vector(a.sigma(), a.point);
        let eb = *basis.vector(b.sigma(), b.point);
        let ta = mode_table(a);
        let tb = mode_table(b);
        for (ri, &pha) in ta.iter().enumerate() {
            for (rj, &phb) in tb.iter().enumerate() {
                let base = (ri * n_sub + rj) * 9;
                let w = weight * pha * phb;
                for j in 0..3 {
                    for jp in 0..3 {
                        values[base + j * 3 + jp] += w * ea[j] * eb[jp];
                    }
                }
            }
        }
    }

    Ok(TwoPhotonWaveField {
        alpha,
        sigma: sigmas,
        t,
        sub_indices,
        cell_volume: (coarsen as f64 * grid.delta_r()).powi(3),
        values,
    })
}

/// Max |Ψ_{σσ′}(r,r′,j,j′) − Ψ_{σ′σ}(r′,r,j′,j)| over the product grid:
/// the exchange-symmetry defect between the two σ-ordered syntheses.
pub fn exchange_asymmetry(a: &TwoPhotonWaveField, b: &TwoPhotonWaveField) -> Result<f64> {
    if a.sigma.0 != b.sigma.1 || a.sigma.1 != b.sigma.0 || a.alpha != b.alpha {
        return Err(Error::AlphaMismatch(
            "exchange check needs the (σ,σ′) and (σ′,σ) syntheses of one α".into(),
        ));
    }
    if a.n_sub() != b.n_sub() {
        return Err(Error::GridMismatch("different product subgrids".into()));
    }
    let n = a.n_sub();
    let mut worst = 0.0f64;
    for ri in 0..n {
        for rj in 0..n {
            for j in 0..3 {
                for jp in 0..3 {
                    let d = (a.value(ri, rj, j, jp) - b.value(rj, ri, jp, j)).norm();
                    worst = worst.max(d);
                }
            }
        }
    }
    Ok(worst)
}

/// Brute-force oracle for the two-photon amplitude: evaluates
/// ⟨0| ψ̂_{r,σ,j}(t) ψ̂_{r′,σ′,j′}(t) |Ψ⟩ by expanding both annihilation
/// operators over the occupied modes and contracting
/// ⟨0|a_q a_p a†_m a†_n|0⟩ = δ_{qm}δ_{pn} + δ_{qn}δ_{pm}. Independent of
/// `synthesize_two_photon`.
#[allow(clippy::too_many_arguments)]
pub fn two_photon_amplitude_bruteforce(
    state: &PhotonState,
    basis: &PolarizationBasis,
    alpha: Alpha,
    r1: RV3,
    sigma1: Helicity,
    j1: usize,
    r2: RV3,
    sigma2: Helicity,
    j2: usize,
    t: f64,
) -> C64 {
    let grid = state.grid();
    let a_exp = alpha.value();
    let inv_sqrt_v = 1.0 / grid.volume().sqrt();
    let mut acc = CompensatedComplexSum::new();
    for e in state.c2_entries() {
        // |Ψ⟩ holds (1/2!) Σ_{(m,n) ordered} √N c_mn a†_m a†_n |0⟩; each
        // ordered assignment meets both Wick pairings of ⟨0|a_q a_p ...|0⟩.
        let root_n = if e.a == e.b { 2f64.sqrt() } else { 1.0 };
        let ordered: &[(ModeId, ModeId)] = if e.a == e.b {
            &[(e.a, e.a)]
        } else {
            &[(e.a, e.b), (e.b, e.a)]
        };
        for &(m, n) in ordered {
            for (q, p) in [(m, n), (n, m)] {
                if q.sigma() != sigma1 || p.sigma() != sigma2 {
                    continue;
                }
                let kq = grid.point(q.point);
                let kp = grid.point(p.point);
                let eq = basis.vector(q.sigma(), q.point)[j1];
                let ep = basis.vector(p.sigma(), p.point)[j2];
                let phase_q = (I * (kq.k.dot(&r1) - kq.omega * t)).exp() * inv_sqrt_v;
                let phase_p = (I * (kp.k.dot(&r2) - kp.omega * t)).exp() * inv_sqrt_v;
                let w = (kq.omega * kp.omega).powf(a_exp);
                acc.add(e.amp * root_n * w * eq * ep * phase_q * phase_p * 0.5);
            }
        }
    }
    acc.value()
}
