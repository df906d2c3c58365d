//! Subcommand implementations. Each returns `Ok(true)` when all enforced
//! tolerances pass, `Ok(false)` on a check failure (exit 1), and `Err` for
//! configuration problems (exit 2).

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use nalgebra::Vector3;
use num_complex::Complex;
use serde::Serialize;

use photonwm_core::algebra::{cdot, norm_sq, C64, CV3, I};
use photonwm_core::beams::{am_density, aperture_demo, RadialGrid};
use photonwm_core::kspace::ResidualMask;
use photonwm_core::observables::{
    angular_momentum_functional, continuity_residual, density, field_sets_for_state,
    glauber_bandwidth_sweep, momentum_functional, momentum_mode_sum, two_photon_marginal,
    DensityInput, Detector,
};
use photonwm_core::polarization::Helicity;
use photonwm_core::posop::{
    adjoint_check, commutator_check, eigenvector_residual, inner_product,
    random_transverse_field, similarity_map, Alpha, InnerProductMode, PositionEigenstate,
    TransversePolicy,
};
use photonwm_core::quantum::{
    exchange_asymmetry, synthesize_one_photon, synthesize_two_photon, PhotonState,
};
use photonwm_core::Axis;

use crate::config::*;
use crate::output::{fmt_f64, write_json, CsvWriter};

fn alpha_from(v: f64) -> anyhow::Result<Alpha> {
    Alpha::from_value(v).map_err(|e| anyhow!(e))
}

// ---------------------------------------------------------------- operator-check

#[derive(Serialize)]
struct OperatorCheckReport {
    grid_coarse: usize,
    grid_fine: usize,
    seed: u64,
    mask: MaskInfo,
    tolerances: OperatorTolerances,
    eigenvector_orders: Vec<EigenOrderRow>,
    commutator_orders: Vec<CommOrderRow>,
    adjoint: AdjointRow,
    inner_product_defect: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MaskInfo {
    eigenvector_boundary_layers: usize,
    eigenvector_core_fraction: f64,
    commutator_boundary_layers: usize,
    commutator_core_fraction: f64,
    commutator_smooth_weight: bool,
}

#[derive(Serialize)]
struct EigenOrderRow {
    alpha: String,
    sigma: i64,
    r: [f64; 3],
    axis: &'static str,
    coarse: f64,
    fine: f64,
    order: f64,
    pass: bool,
}

#[derive(Serialize)]
struct CommOrderRow {
    alpha: String,
    axes: String,
    rms_coarse: f64,
    rms_fine: f64,
    order: f64,
    pass: bool,
}

#[derive(Serialize)]
struct AdjointRow {
    hermitian_defect: f64,
    pair_defect: f64,
    boundary_content: f64,
    pass: bool,
}

pub fn cmd_operator_check(
    cfg: &ScenarioConfig,
    config_hash: &str,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .operator_check
        .clone()
        .ok_or_else(|| anyhow!("config has no run.operator_check block"))?;
    let seed = seed_override.unwrap_or(run.seed);
    let tol = run.tolerances.clone();

    let coarse = cfg.grid.build()?;
    let fine_cfg = GridConfig {
        n: cfg.grid.n * 2,
        l: cfg.grid.l * 2.0,
        units: cfg.grid.units.clone(),
        offset: cfg.grid.offset,
    };
    let fine = fine_cfg.build()?;
    let basis_coarse = cfg.basis.chi.build(&coarse);
    let basis_fine = cfg.basis.chi.build(&fine);

    let eig_mask = ResidualMask::standard();
    let comm_mask = ResidualMask::double_smooth();
    let mut pass = true;

    // eigenvector convergence, three r values scaled to the coarse box
    let l = coarse.box_length();
    let rs = [
        Vector3::new(l / 25.0, 0.0, 0.0),
        Vector3::new(l / 25.0, 2.0 * l / 25.0, 3.0 * l / 25.0),
        Vector3::new(-2.0 * l / 25.0, l / 50.0, -1.5 * l / 25.0),
    ];
    let mut eig_rows = Vec::new();
    for alpha in Alpha::ALL {
        for sigma in Helicity::BOTH {
            for r in rs {
                let stc = PositionEigenstate::new(&basis_coarse, r, sigma, alpha, 0.0);
                let stf = PositionEigenstate::new(&basis_fine, r, sigma, alpha, 0.0);
                let rc = eigenvector_residual(&stc, &eig_mask).map_err(|e| anyhow!(e))?;
                let rf = eigenvector_residual(&stf, &eig_mask).map_err(|e| anyhow!(e))?;
                for axis in Axis::ALL {
                    let i = axis.index();
                    let order = (rc[i] / rf[i]).log2();
                    let ok = order >= tol.eigenvector_min_order;
                    pass &= ok;
                    eig_rows.push(EigenOrderRow {
                        alpha: alpha.label().to_string(),
                        sigma: sigma.value() as i64,
                        r: [r.x, r.y, r.z],
                        axis: axis.name(),
                        coarse: rc[i],
                        fine: rf[i],
                        order,
                        pass: ok,
                    });
                }
            }
        }
    }

    // commutator convergence, rms over seeded fields
    let mut comm_rows = Vec::new();
    for alpha in Alpha::ALL {
        for (i, j) in [(Axis::X, Axis::Y), (Axis::Y, Axis::Z), (Axis::Z, Axis::X)] {
            let mut rms = [0.0f64; 2];
            for s in 0..run.fields as u64 {
                for (gi, g) in [&coarse, &fine].iter().enumerate() {
                    let f = random_transverse_field(g, seed.wrapping_add(s), 0.25);
                    let r = commutator_check(alpha, &f, (i, j), TransversePolicy::Error, &comm_mask)
                        .map_err(|e| anyhow!(e))?;
                    rms[gi] += r * r;
                }
            }
            let order = (rms[0] / rms[1]).log2() / 2.0;
            let ok = order >= tol.commutator_min_order;
            pass &= ok;
            comm_rows.push(CommOrderRow {
                alpha: alpha.label().to_string(),
                axes: format!("{}{}", i.name(), j.name()),
                rms_coarse: (rms[0] / run.fields as f64).sqrt(),
                rms_fine: (rms[1] / run.fields as f64).sqrt(),
                order,
                pass: ok,
            });
        }
    }

    // adjoint structure on the coarse grid
    let f = random_transverse_field(&coarse, seed.wrapping_add(101), 0.25);
    let g = random_transverse_field(&coarse, seed.wrapping_add(202), 0.25);
    let adj = adjoint_check(&f, &g).map_err(|e| anyhow!(e))?;
    let adj_ok = adj.hermitian_defect < tol.adjoint_max_defect
        && adj.pair_defect < tol.adjoint_max_defect * 10.0
        && adj.supports_summation_by_parts();
    pass &= adj_ok;

    // similarity inner-product identity
    let mut ip_defect = 0.0f64;
    for s in 0..10u64 {
        let a = random_transverse_field(&coarse, seed.wrapping_add(300 + s), 0.4);
        let b = random_transverse_field(&coarse, seed.wrapping_add(400 + s), 0.4);
        let lp = inner_product(&a, &b, InnerProductMode::LandauPeierls).map_err(|e| anyhow!(e))?;
        let a_up = similarity_map(&a, Alpha::Zero, Alpha::PlusHalf).map_err(|e| anyhow!(e))?;
        let b_dn = similarity_map(&b, Alpha::Zero, Alpha::MinusHalf).map_err(|e| anyhow!(e))?;
        let bi =
            inner_product(&a_up, &b_dn, InnerProductMode::Biorthonormal).map_err(|e| anyhow!(e))?;
        ip_defect = ip_defect.max((lp - bi).norm() / (a.norm() * b.norm()));
    }
    let ip_ok = ip_defect < tol.inner_product_max_defect;
    pass &= ip_ok;

    let report = OperatorCheckReport {
        grid_coarse: coarse.n_per_axis(),
        grid_fine: fine.n_per_axis(),
        seed,
        mask: MaskInfo {
            eigenvector_boundary_layers: eig_mask.boundary_layers,
            eigenvector_core_fraction: eig_mask.core_fraction,
            commutator_boundary_layers: comm_mask.boundary_layers,
            commutator_core_fraction: comm_mask.core_fraction,
            commutator_smooth_weight: comm_mask.smooth,
        },
        tolerances: tol,
        eigenvector_orders: eig_rows,
        commutator_orders: comm_rows,
        adjoint: AdjointRow {
            hermitian_defect: adj.hermitian_defect,
            pair_defect: adj.pair_defect,
            boundary_content: adj.boundary_content,
            pass: adj_ok,
        },
        inner_product_defect: ip_defect,
        pass,
    };
    write_json(
        &out_dir.join("operator_check.json"),
        config_hash,
        "operator-check",
        report,
    )?;
    Ok(pass)
}

// ---------------------------------------------------------------- localized

#[derive(Serialize)]
struct LocalizedReport {
    r0: [f64; 3],
    sigma: i64,
    alpha: String,
    t: f64,
    chi_m: Option<i64>,
    peak_r: [f64; 3],
    peak_density: f64,
    peak_at_r0: bool,
    winding: Vec<WindingRow>,
}

#[derive(Serialize)]
struct WindingRow {
    spin_component: i64,
    expected: i64,
    measured: Option<i64>,
    loop_radius: f64,
    min_amplitude: f64,
}

pub fn cmd_localized(
    cfg: &ScenarioConfig,
    config_hash: &str,
    out_dir: &Path,
) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .localized
        .clone()
        .ok_or_else(|| anyhow!("config has no run.localized block"))?;
    let grid = cfg.grid.build()?;
    let basis = cfg.basis.chi.build(&grid);
    let sigma = Helicity::from_value(run.sigma).map_err(|e| anyhow!(e))?;
    let alpha = alpha_from(run.alpha)?;
    let r0 = Vector3::from(run.r0);
    let state = PhotonState::localized(Arc::clone(&grid), sigma, r0);
    let wf =
        synthesize_one_photon(&state, &basis, alpha, sigma, run.t).map_err(|e| anyhow!(e))?;

    // field map CSV
    let mut csv = CsvWriter::new(
        config_hash,
        &[
            ("subcommand", "localized".to_string()),
            ("alpha", alpha.label().to_string()),
            ("sigma", format!("{}", run.sigma)),
        ],
    );
    csv.header(&[
        "x", "y", "z", "re_px", "im_px", "re_py", "im_py", "re_pz", "im_pz", "density",
    ]);
    for idx in 0..grid.num_points() {
        let r = grid.r_point(idx);
        let v = &wf.spatial.values[idx];
        csv.row(&[
            fmt_f64(r.x),
            fmt_f64(r.y),
            fmt_f64(r.z),
            fmt_f64(v.x.re),
            fmt_f64(v.x.im),
            fmt_f64(v.y.re),
            fmt_f64(v.y.im),
            fmt_f64(v.z.re),
            fmt_f64(v.z.im),
            fmt_f64(norm_sq(v)),
        ]);
    }
    csv.write(&out_dir.join("localized.csv"))?;

    // peak location
    let mut peak = (0.0f64, 0usize);
    for (idx, v) in wf.spatial.values.iter().enumerate() {
        let d = norm_sq(v);
        if d > peak.0 {
            peak = (d, idx);
        }
    }
    let peak_r = grid.r_point(peak.1);

    // vortex diagnostic: phase winding of the spin components around a loop
    // centred on r0. Spin component s has expected winding mσ − s.
    let m = match cfg.basis.chi.mode() {
        photonwm_core::polarization::ChiMode::MPhi(m) => Some(m),
        photonwm_core::polarization::ChiMode::Zero => None,
    };
    let loop_radius = run.winding.radius_cells * grid.delta_r();
    let a_exp = alpha.value();
    let eval_at = |r: Vector3<f64>| -> CV3 {
        let mut acc = CV3::zeros();
        for idx in 0..grid.num_points() {
            let p = grid.point(idx);
            let c = state.c1(sigma, idx);
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let phase = (I * (p.k.dot(&r) - p.omega * run.t)).exp();
            acc += basis.vector(sigma, idx) * (c * p.omega.powf(a_exp) * phase);
        }
        acc / Complex::new(grid.volume().sqrt(), 0.0)
    };
    let spin_vectors: [(i64, CV3); 3] = [
        (
            1,
            CV3::new(
                C64::new(1.0 / 2f64.sqrt(), 0.0),
                I / 2f64.sqrt(),
                C64::new(0.0, 0.0),
            ),
        ),
        (0, CV3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0))),
        (
            -1,
            CV3::new(
                C64::new(1.0 / 2f64.sqrt(), 0.0),
                -I / 2f64.sqrt(),
                C64::new(0.0, 0.0),
            ),
        ),
    ];
    let samples = run.winding.samples.max(16);
    let mut loop_values: Vec<CV3> = Vec::with_capacity(samples);
    for s in 0..samples {
        let phi = 2.0 * PI * s as f64 / samples as f64;
        let r = r0 + Vector3::new(loop_radius * phi.cos(), loop_radius * phi.sin(), 0.0);
        loop_values.push(eval_at(r));
    }
    let ms = m.unwrap_or(0) * run.sigma;
    let mut winding_rows = Vec::new();
    for (s_z, e_s) in spin_vectors {
        let amps: Vec<C64> = loop_values.iter().map(|v| cdot(&e_s, v)).collect();
        let min_amp = amps.iter().map(|a| a.norm()).fold(f64::MAX, f64::min);
        let scale = amps.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
        let measured = if min_amp > 1e-6 * scale.max(1e-300) {
            let mut total = 0.0f64;
            for i in 0..samples {
                let a = amps[i];
                let b = amps[(i + 1) % samples];
                let mut d = b.arg() - a.arg();
                while d > PI {
                    d -= 2.0 * PI;
                }
                while d < -PI {
                    d += 2.0 * PI;
                }
                total += d;
            }
            Some((total / (2.0 * PI)).round() as i64)
        } else {
            None
        };
        winding_rows.push(WindingRow {
            spin_component: s_z,
            expected: ms - s_z,
            measured,
            loop_radius,
            min_amplitude: min_amp,
        });
    }

    let report = LocalizedReport {
        r0: run.r0,
        sigma: run.sigma,
        alpha: alpha.label().to_string(),
        t: run.t,
        chi_m: m,
        peak_r: [peak_r.x, peak_r.y, peak_r.z],
        peak_density: peak.0,
        peak_at_r0: (peak_r - r0).norm() < grid.delta_r() / 2.0,
        winding: winding_rows,
    };
    write_json(&out_dir.join("localized.json"), config_hash, "localized", report)?;
    Ok(true)
}

// ---------------------------------------------------------------- evolve

#[derive(Serialize)]
struct EvolveReport {
    dt: f64,
    norm_before: f64,
    norm_after: f64,
    photon_number: f64,
    coefficients_csv: String,
}

pub fn cmd_evolve(cfg: &ScenarioConfig, config_hash: &str, out_dir: &Path) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .evolve
        .clone()
        .ok_or_else(|| anyhow!("config has no run.evolve block"))?;
    let grid = cfg.grid.build()?;
    let state = cfg
        .state
        .as_ref()
        .ok_or_else(|| anyhow!("evolve needs a state block"))?
        .build(&grid)?;
    let before = state.norm_sq();
    let evolved = state.evolve(run.dt);
    let after = evolved.norm_sq();

    let mut csv = CsvWriter::new(config_hash, &[("subcommand", "evolve".to_string())]);
    csv.header(&["mx", "my", "mz", "sigma", "re", "im"]);
    let half = (grid.n_per_axis() / 2) as i64;
    for sigma in Helicity::BOTH {
        for (idx, c) in evolved.c1_block(sigma).iter().enumerate() {
            if c.norm_sqr() > 0.0 {
                let (ix, iy, iz) = grid.cartesian_index(idx);
                csv.row(&[
                    format!("{}", ix as i64 - half),
                    format!("{}", iy as i64 - half),
                    format!("{}", iz as i64 - half),
                    format!("{}", sigma.value() as i64),
                    fmt_f64(c.re),
                    fmt_f64(c.im),
                ]);
            }
        }
    }
    csv.write(&out_dir.join("evolve.csv"))?;
    let report = EvolveReport {
        dt: run.dt,
        norm_before: before,
        norm_after: after,
        photon_number: evolved.photon_number(),
        coefficients_csv: "evolve.csv".to_string(),
    };
    write_json(&out_dir.join("evolve.json"), config_hash, "evolve", report)?;
    Ok((after - before).abs() < 1e-12 * before.max(1.0))
}

// ---------------------------------------------------------------- density

#[derive(Serialize)]
struct DensityReportJson {
    alpha: String,
    t: f64,
    total_n_re: f64,
    total_n_im: f64,
    total_j_re: [f64; 3],
    max_im_n: f64,
    mode_sum_number: f64,
    parseval_defect: f64,
    continuity_relative_norm: f64,
    min_n0: Option<f64>,
}

pub fn cmd_density(cfg: &ScenarioConfig, config_hash: &str, out_dir: &Path) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .density
        .clone()
        .ok_or_else(|| anyhow!("config has no run.density block"))?;
    let grid = cfg.grid.build()?;
    let basis = cfg.basis.chi.build(&grid);
    let alpha = alpha_from(run.alpha)?;
    let state = cfg
        .state
        .as_ref()
        .ok_or_else(|| anyhow!("density needs a state block"))?
        .build(&grid)?;

    let mut fields = Vec::new();
    for sigma in Helicity::BOTH {
        if state.c1_block(sigma).iter().any(|c| c.norm_sqr() > 0.0) {
            let a = synthesize_one_photon(&state, &basis, alpha, sigma, run.t)
                .map_err(|e| anyhow!(e))?;
            let b = synthesize_one_photon(&state, &basis, alpha.negated(), sigma, run.t)
                .map_err(|e| anyhow!(e))?;
            fields.push((a, b));
        }
    }
    if fields.is_empty() {
        bail!("state has no one-photon content");
    }
    let inputs: Vec<DensityInput> = fields
        .iter()
        .map(|(a, b)| DensityInput {
            psi_alpha: a,
            psi_neg_alpha: b,
        })
        .collect();
    let rep = density(alpha, &inputs).map_err(|e| anyhow!(e))?;
    let cont = continuity_residual(&state, &basis, alpha, run.t).map_err(|e| anyhow!(e))?;

    let mut csv = CsvWriter::new(
        config_hash,
        &[
            ("subcommand", "density".to_string()),
            ("alpha", alpha.label().to_string()),
        ],
    );
    csv.header(&[
        "x",
        "y",
        "z",
        "n_re",
        "n_im",
        "jx_re",
        "jx_im",
        "jy_re",
        "jy_im",
        "jz_re",
        "jz_im",
        "continuity_abs",
    ]);
    for idx in 0..grid.num_points() {
        let r = grid.r_point(idx);
        let n = rep.n[idx];
        let j = &rep.j[idx];
        csv.row(&[
            fmt_f64(r.x),
            fmt_f64(r.y),
            fmt_f64(r.z),
            fmt_f64(n.re),
            fmt_f64(n.im),
            fmt_f64(j.x.re),
            fmt_f64(j.x.im),
            fmt_f64(j.y.re),
            fmt_f64(j.y.im),
            fmt_f64(j.z.re),
            fmt_f64(j.z.im),
            fmt_f64(cont.residual[idx].norm()),
        ]);
    }
    csv.write(&out_dir.join("density.csv"))?;

    let mode_sum = state.photon_number();
    let parseval_defect = (rep.total_n.re - mode_sum).abs();
    let min_n0 = if alpha == Alpha::Zero {
        Some(rep.n.iter().map(|z| z.re).fold(f64::MAX, f64::min))
    } else {
        None
    };
    let report = DensityReportJson {
        alpha: alpha.label().to_string(),
        t: run.t,
        total_n_re: rep.total_n.re,
        total_n_im: rep.total_n.im,
        total_j_re: [rep.total_j.x.re, rep.total_j.y.re, rep.total_j.z.re],
        max_im_n: rep.max_im_n,
        mode_sum_number: mode_sum,
        parseval_defect,
        continuity_relative_norm: cont.relative_norm,
        min_n0,
    };
    write_json(&out_dir.join("density.json"), config_hash, "density", report)?;

    let pass = parseval_defect < 1e-10 * mode_sum.max(1.0)
        && cont.relative_norm < 1e-9
        && min_n0.map_or(true, |m| m >= -1e-12);
    Ok(pass)
}

// ---------------------------------------------------------------- functionals

#[derive(Serialize)]
struct FunctionalsReport {
    t: f64,
    origin: [f64; 3],
    p: [f64; 3],
    p_mode_sum: [f64; 3],
    p_defect: f64,
    p_imag_defect: f64,
    j_total: [f64; 3],
    j_orbital: [f64; 3],
    j_spin: [f64; 3],
    j_imag_defect: f64,
    origin_shift: [f64; 3],
    j_shifted: [f64; 3],
    shift_identity_defect: f64,
}

pub fn cmd_functionals(
    cfg: &ScenarioConfig,
    config_hash: &str,
    out_dir: &Path,
) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .functionals
        .clone()
        .ok_or_else(|| anyhow!("config has no run.functionals block"))?;
    let grid = cfg.grid.build()?;
    let basis = cfg.basis.chi.build(&grid);
    let state = cfg
        .state
        .as_ref()
        .ok_or_else(|| anyhow!("functionals needs a state block"))?
        .build(&grid)?;
    let sets = field_sets_for_state(&state, &basis, run.t).map_err(|e| anyhow!(e))?;
    let refs: Vec<_> = sets.iter().collect();
    let origin = Vector3::from(run.origin);
    let shift = Vector3::from(run.origin_shift);
    let p = momentum_functional(&refs).map_err(|e| anyhow!(e))?;
    let p_oracle = momentum_mode_sum(&state);
    let j0 = angular_momentum_functional(&refs, origin).map_err(|e| anyhow!(e))?;
    let j1 = angular_momentum_functional(&refs, origin + shift).map_err(|e| anyhow!(e))?;
    let shift_defect =
        (j1.j_total - (j0.j_total - shift.cross(&p.p))).norm() / j0.j_total.norm().max(1.0);

    let mut csv = CsvWriter::new(config_hash, &[("subcommand", "functionals".to_string())]);
    csv.header(&["axis", "p", "p_mode_sum", "j_orbital", "j_spin", "j_total"]);
    for (axis, name) in [(0, "x"), (1, "y"), (2, "z")] {
        csv.row(&[
            name.to_string(),
            fmt_f64(p.p[axis]),
            fmt_f64(p_oracle[axis]),
            fmt_f64(j0.j_orbital[axis]),
            fmt_f64(j0.j_spin[axis]),
            fmt_f64(j0.j_total[axis]),
        ]);
    }
    csv.write(&out_dir.join("functionals.csv"))?;

    let p_defect = (p.p - p_oracle).norm() / p_oracle.norm().max(1.0);
    let report = FunctionalsReport {
        t: run.t,
        origin: run.origin,
        p: [p.p.x, p.p.y, p.p.z],
        p_mode_sum: [p_oracle.x, p_oracle.y, p_oracle.z],
        p_defect,
        p_imag_defect: p.imag_defect,
        j_total: [j0.j_total.x, j0.j_total.y, j0.j_total.z],
        j_orbital: [j0.j_orbital.x, j0.j_orbital.y, j0.j_orbital.z],
        j_spin: [j0.j_spin.x, j0.j_spin.y, j0.j_spin.z],
        j_imag_defect: j0.imag_defect,
        origin_shift: run.origin_shift,
        j_shifted: [j1.j_total.x, j1.j_total.y, j1.j_total.z],
        shift_identity_defect: shift_defect,
    };
    write_json(
        &out_dir.join("functionals.json"),
        config_hash,
        "functionals",
        report,
    )?;
    Ok(p_defect < 1e-10 && shift_defect < 1e-10)
}

// ---------------------------------------------------------------- two-photon

#[derive(Serialize)]
struct TwoPhotonReport {
    alpha: String,
    t: f64,
    coarsen: usize,
    subgrid_points: usize,
    exchange_asymmetry: f64,
    exchange_scale: f64,
    total_by_sigma: Vec<f64>,
    total_number: f64,
}

pub fn cmd_two_photon(
    cfg: &ScenarioConfig,
    config_hash: &str,
    out_dir: &Path,
) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .two_photon
        .clone()
        .ok_or_else(|| anyhow!("config has no run.two_photon block"))?;
    let grid = cfg.grid.build()?;
    let basis = cfg.basis.chi.build(&grid);
    let alpha = alpha_from(run.alpha)?;
    let state = cfg
        .state
        .as_ref()
        .ok_or_else(|| anyhow!("two-photon needs a state block"))?
        .build(&grid)?;
    if state.c2_entries().is_empty() {
        bail!("state has no two-photon content");
    }

    // exchange asymmetry across σ-orderings
    let mut asym = 0.0f64;
    let mut scale = 0.0f64;
    for (s1, s2) in [
        (Helicity::Plus, Helicity::Plus),
        (Helicity::Plus, Helicity::Minus),
        (Helicity::Minus, Helicity::Plus),
        (Helicity::Minus, Helicity::Minus),
    ] {
        let ab = synthesize_two_photon(
            &state,
            &basis,
            alpha,
            (s1, s2),
            run.t,
            run.coarsen,
            run.product_limit,
        )
        .map_err(|e| anyhow!(e))?;
        let ba = synthesize_two_photon(
            &state,
            &basis,
            alpha,
            (s2, s1),
            run.t,
            run.coarsen,
            run.product_limit,
        )
        .map_err(|e| anyhow!(e))?;
        asym = asym.max(exchange_asymmetry(&ab, &ba).map_err(|e| anyhow!(e))?);
        scale = scale.max(ab.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }

    // σ-resolved marginals, integrated
    let mut totals = Vec::new();
    let mut marginals = Vec::new();
    let mut sub_indices = Vec::new();
    for s1 in Helicity::BOTH {
        let mut pairs = Vec::new();
        for s2 in Helicity::BOTH {
            let a = synthesize_two_photon(
                &state,
                &basis,
                alpha,
                (s1, s2),
                run.t,
                run.coarsen,
                run.product_limit,
            )
            .map_err(|e| anyhow!(e))?;
            let b = synthesize_two_photon(
                &state,
                &basis,
                alpha.negated(),
                (s1, s2),
                run.t,
                run.coarsen,
                run.product_limit,
            )
            .map_err(|e| anyhow!(e))?;
            pairs.push((a, b));
        }
        let refs: Vec<_> = pairs.iter().map(|(a, b)| (a, b)).collect();
        let marg = two_photon_marginal(&refs).map_err(|e| anyhow!(e))?;
        totals.push(marg.total.re);
        sub_indices = marg.sub_indices.clone();
        marginals.push(marg);
    }
    let total: f64 = totals.iter().sum();

    let mut csv = CsvWriter::new(
        config_hash,
        &[
            ("subcommand", "two-photon".to_string()),
            ("alpha", alpha.label().to_string()),
            ("coarsen", format!("{}", run.coarsen)),
        ],
    );
    csv.header(&["x", "y", "z", "n_sigma_plus_re", "n_sigma_minus_re", "n_re"]);
    for (row, &ridx) in sub_indices.iter().enumerate() {
        let r = grid.r_point(ridx);
        let np = marginals[0].n[row].re;
        let nm = marginals[1].n[row].re;
        csv.row(&[
            fmt_f64(r.x),
            fmt_f64(r.y),
            fmt_f64(r.z),
            fmt_f64(np),
            fmt_f64(nm),
            fmt_f64(np + nm),
        ]);
    }
    csv.write(&out_dir.join("two_photon.csv"))?;

    let report = TwoPhotonReport {
        alpha: alpha.label().to_string(),
        t: run.t,
        coarsen: run.coarsen,
        subgrid_points: sub_indices.len(),
        exchange_asymmetry: asym,
        exchange_scale: scale,
        total_by_sigma: totals,
        total_number: total,
    };
    write_json(
        &out_dir.join("two_photon.json"),
        config_hash,
        "two-photon",
        report,
    )?;
    Ok(asym <= 1e-12 * scale && (total - 2.0).abs() < 0.04)
}

// ---------------------------------------------------------------- beam-am

#[derive(Serialize)]
struct BeamAmReport {
    l_z: i64,
    sigma: i64,
    per_photon_jz: f64,
    expected_per_photon_jz: f64,
    per_photon_defect: f64,
    total_jz: f64,
    total_jz_orbital: f64,
    total_jz_spin: f64,
    total_n: f64,
    aperture: Option<ApertureJson>,
}

#[derive(Serialize)]
struct ApertureJson {
    radius: f64,
    transmitted_fraction: f64,
    per_photon_jz_after: f64,
    edge_radius: f64,
    edge_value: f64,
}

pub fn cmd_beam_am(cfg: &ScenarioConfig, config_hash: &str, out_dir: &Path) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .beam_am
        .clone()
        .ok_or_else(|| anyhow!("config has no run.beam_am block"))?;
    let constants = cfg.grid.constants()?;
    let spec = run.build(constants)?;
    let grid = RadialGrid::new(run.r_max, run.n_radial).map_err(|e| anyhow!(e))?;
    let prof = am_density(&spec, &grid, None).map_err(|e| anyhow!(e))?;

    let mut csv = CsvWriter::new(
        config_hash,
        &[
            ("subcommand", "beam-am".to_string()),
            ("l_z", format!("{}", run.l_z)),
            ("sigma", format!("{}", run.sigma)),
        ],
    );
    csv.header(&[
        "r",
        "u_sq",
        "n",
        "jz_orbital",
        "jz_spin",
        "jz_total",
        "cumulative_jz",
        "cumulative_n",
    ]);
    let mut cum_j = 0.0;
    let mut cum_n = 0.0;
    for i in 0..grid.n {
        cum_j += grid.weight(i) * (prof.j_orbital[i] + prof.j_spin[i]);
        cum_n += grid.weight(i) * prof.n[i];
        csv.row(&[
            fmt_f64(grid.r(i)),
            fmt_f64(prof.u_sq[i]),
            fmt_f64(prof.n[i]),
            fmt_f64(prof.j_orbital[i]),
            fmt_f64(prof.j_spin[i]),
            fmt_f64(prof.jz(i)),
            fmt_f64(cum_j),
            fmt_f64(cum_n),
        ]);
    }
    csv.write(&out_dir.join("beam_am.csv"))?;

    let expected = run.l_z as f64 + Helicity::from_value(run.sigma).map_err(|e| anyhow!(e))?.value();
    let defect = (prof.per_photon_jz - expected).abs() / expected.abs().max(1.0);

    let aperture = match run.aperture {
        Some(radius) => {
            let rep = aperture_demo(&spec, &grid, radius).map_err(|e| anyhow!(e))?;
            Some(ApertureJson {
                radius,
                transmitted_fraction: rep.transmitted,
                per_photon_jz_after: rep.after.per_photon_jz,
                edge_radius: rep.edge_radius,
                edge_value: rep.edge_value,
            })
        }
        None => None,
    };

    let report = BeamAmReport {
        l_z: run.l_z,
        sigma: run.sigma,
        per_photon_jz: prof.per_photon_jz,
        expected_per_photon_jz: expected,
        per_photon_defect: defect,
        total_jz: prof.total_jz,
        total_jz_orbital: prof.total_jz_orbital,
        total_jz_spin: prof.total_jz_spin,
        total_n: prof.total_n,
        aperture,
    };
    write_json(&out_dir.join("beam_am.json"), config_hash, "beam-am", report)?;
    Ok(defect < 5e-3)
}

// ---------------------------------------------------------------- glauber

#[derive(Serialize)]
struct GlauberReport {
    omega_bar: f64,
    modes: usize,
    rows: Vec<GlauberRow>,
    monotone: bool,
}

#[derive(Serialize)]
struct GlauberRow {
    bandwidth: f64,
    ratio: f64,
    deviation: f64,
    im_fraction: f64,
    beyond_approximation_regime: bool,
}

pub fn cmd_glauber(cfg: &ScenarioConfig, config_hash: &str, out_dir: &Path) -> anyhow::Result<bool> {
    let run = cfg
        .run
        .glauber
        .clone()
        .ok_or_else(|| anyhow!("config has no run.glauber block"))?;
    let constants = cfg.grid.constants()?;
    let det = Detector {
        delta_z: run.detector.delta_z,
        delta_a: run.detector.delta_a,
        z: run.detector.z,
        t: run.detector.t,
    };
    let sweep = glauber_bandwidth_sweep(run.omega_bar, &run.bandwidths, run.modes, &det, &constants)
        .map_err(|e| anyhow!(e))?;
    for (bw, _) in &sweep {
        if *bw > 0.5 {
            eprintln!("warning: bandwidth {bw} exceeds the narrowband approximation regime (0.5)");
        }
    }
    let mut monotone = true;
    for w in sweep.windows(2) {
        monotone &= w[1].1.deviation > w[0].1.deviation;
    }

    let mut csv = CsvWriter::new(config_hash, &[("subcommand", "glauber".to_string())]);
    csv.header(&["bandwidth", "ratio", "deviation", "im_fraction"]);
    for (bw, pt) in &sweep {
        csv.row(&[
            fmt_f64(*bw),
            fmt_f64(pt.ratio),
            fmt_f64(pt.deviation),
            fmt_f64(pt.im_fraction),
        ]);
    }
    csv.write(&out_dir.join("glauber.csv"))?;

    let rows = sweep
        .iter()
        .map(|(bw, pt)| GlauberRow {
            bandwidth: *bw,
            ratio: pt.ratio,
            deviation: pt.deviation,
            im_fraction: pt.im_fraction,
            beyond_approximation_regime: *bw > 0.5,
        })
        .collect();
    let report = GlauberReport {
        omega_bar: run.omega_bar,
        modes: run.modes,
        rows,
        monotone,
    };
    write_json(&out_dir.join("glauber.json"), config_hash, "glauber", report)?;
    Ok(monotone)
}

pub fn read_config(path: &Path) -> anyhow::Result<(ScenarioConfig, String)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg: ScenarioConfig = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing {}", path.display()))?;
    use sha2::Digest;
    let digest = sha2::Sha256::digest(&bytes);
    let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok((cfg, hash))
}
