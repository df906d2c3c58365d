//! Finite-difference gradient in k and Fourier synthesis to r-space.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::algebra::{C64, CV3, I};
use crate::error::Result;
use crate::kspace::field::{Domain, VectorField3};
use crate::kspace::grid::Axis;

/// Central-difference ∂/∂k_axis, componentwise. Interior points are O(Δk²);
/// the two boundary faces fall back to one-sided O(Δk) stencils, which is
/// why residual norms exclude the outermost layer.
pub fn k_gradient(field: &VectorField3, axis: Axis) -> Result<VectorField3> {
    field.require_domain(Domain::K)?;
    let grid = Arc::clone(field.grid());
    let n = grid.n_per_axis();
    let dk = grid.delta_k();
    let stride = match axis {
        Axis::X => n * n,
        Axis::Y => n,
        Axis::Z => 1,
    };
    let axis_len = n;
    let mut out = VectorField3::zeros(Arc::clone(&grid), Domain::K);
    let vals = &field.values;
    for idx in 0..grid.num_points() {
        let (ix, iy, iz) = grid.cartesian_index(idx);
        let pos = match axis {
            Axis::X => ix,
            Axis::Y => iy,
            Axis::Z => iz,
        };
        let g: CV3 = if pos == 0 {
            (vals[idx + stride] - vals[idx]) / Complex::new(dk, 0.0)
        } else if pos == axis_len - 1 {
            (vals[idx] - vals[idx - stride]) / Complex::new(dk, 0.0)
        } else {
            (vals[idx + stride] - vals[idx - stride]) / Complex::new(2.0 * dk, 0.0)
        };
        out.values[idx] = g;
    }
    Ok(out)
}

/// Evaluate Σ_k F(k) e^{ik·r} / √V on the conjugate centred r-grid.
///
/// With storage index i per axis, k = (i − h + s)Δk (h = ⌊N/2⌋, s = ½ when
/// offset) and r = (j − h)Δr, the phase splits exactly as
///   k·r = (2π/N)·i·(j−h) + (2π/N)(s−h)(j−h),
/// so the sum is a plain unnormalised inverse DFT read out at the shifted
/// bin (j−h) mod N, times the per-axis ramp e^{i(2π/N)(s−h)(j−h)}. No
/// approximation is involved; the half-step offset is absorbed in the ramp.
pub fn fourier_to_rspace(field: &VectorField3) -> Result<VectorField3> {
    field.require_domain(Domain::K)?;
    let grid = Arc::clone(field.grid());
    let n = grid.n_per_axis();
    let npts = grid.num_points();
    let inv_sqrt_v = 1.0 / grid.volume().sqrt();
    let h = (n / 2) as i64;
    let s = if grid.offset() { 0.5 } else { 0.0 };

    let mut comps: [Vec<C64>; 3] = [
        Vec::with_capacity(npts),
        Vec::with_capacity(npts),
        Vec::with_capacity(npts),
    ];
    for v in &field.values {
        comps[0].push(v.x);
        comps[1].push(v.y);
        comps[2].push(v.z);
    }

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(n);
    let mut buf = vec![C64::new(0.0, 0.0); n];

    for comp in comps.iter_mut() {
        // axis z: contiguous lanes, independent of each other
        {
            use rayon::prelude::*;
            let fft_ref = &fft;
            comp.par_chunks_mut(n).for_each(|lane| {
                let mut local = lane.to_vec();
                fft_ref.process(&mut local);
                lane.copy_from_slice(&local);
            });
        }
        // axis y: stride n
        for ix in 0..n {
            for iz in 0..n {
                let base = ix * n * n + iz;
                for iy in 0..n {
                    buf[iy] = comp[base + iy * n];
                }
                fft.process(&mut buf);
                for iy in 0..n {
                    comp[base + iy * n] = buf[iy];
                }
            }
        }
        // axis x: stride n²
        for iy in 0..n {
            for iz in 0..n {
                let base = iy * n + iz;
                for ix in 0..n {
                    buf[ix] = comp[base + ix * n * n];
                }
                fft.process(&mut buf);
                for ix in 0..n {
                    comp[base + ix * n * n] = buf[ix];
                }
            }
        }
    }

    // Per-axis ramp and shifted-bin lookup tables.
    let mut ramp = Vec::with_capacity(n);
    let mut src = Vec::with_capacity(n);
    for j in 0..n {
        let b = j as i64 - h;
        let angle = (2.0 * PI / n as f64) * (s - h as f64) * b as f64;
        ramp.push((I * angle).exp());
        src.push((b.rem_euclid(n as i64)) as usize);
    }

    let mut out = VectorField3::zeros(Arc::clone(&grid), Domain::R);
    for idx in 0..npts {
        let (jx, jy, jz) = grid.cartesian_index(idx);
        let from = (src[jx] * n + src[jy]) * n + src[jz];
        let phase = ramp[jx] * ramp[jy] * ramp[jz] * inv_sqrt_v;
        out.values[idx] = CV3::new(comps[0][from], comps[1][from], comps[2][from]) * phase;
    }
    Ok(out)
}
