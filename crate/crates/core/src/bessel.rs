//! Bessel functions of the first kind, J_n, for beam profiles.
//!
//! Ascending series at small argument, Miller's backward recurrence with
//! the Σ J₀ + 2ΣJ₂ₖ = 1 normalisation at large argument (the standard
//! stability direction: upward recurrence is unstable for n > x).

/// J_n(x) for integer n (any sign) and real x.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let (n_abs, sign_n) = if n < 0 {
        (-n as u64, if n % 2 != 0 { -1.0 } else { 1.0 })
    } else {
        (n as u64, 1.0)
    };
    let (x_abs, sign_x) = if x < 0.0 {
        (-x, if n_abs % 2 == 1 { -1.0 } else { 1.0 })
    } else {
        (x, 1.0)
    };
    sign_n * sign_x * bessel_j_nonneg(n_abs, x_abs)
}

fn bessel_j_nonneg(n: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= 12.0_f64.max(n as f64 / 2.0) {
        bessel_series(n, x)
    } else {
        bessel_miller(n, x)
    }
}

/// Σ_m (−1)^m / (m! (m+n)!) (x/2)^{2m+n}; converges fast for x ≲ n or
/// moderate x.
fn bessel_series(n: u64, x: f64) -> f64 {
    let half = x / 2.0;
    // first term: (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let x2 = half * half;
    for m in 1..400 {
        term *= -x2 / (m as f64 * (m as f64 + n as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller's algorithm: downward recurrence from above the turning point,
/// normalised by J₀(x) + 2Σ_{k≥1} J₂ₖ(x) = 1.
fn bessel_miller(n: u64, x: f64) -> f64 {
    let start = ((n as f64).max(x) + 1.5 * (40.0 + x).sqrt() + 20.0) as u64;
    let start = start + (start % 2); // even start simplifies the norm sum
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut result = if n >= start { 0.0 } else { f64::NAN };
    let mut norm = 0.0_f64;
    for m in (0..=start).rev() {
        let jm1 = (2.0 * (m as f64 + 1.0) / x) * j - jp1;
        jp1 = j;
        j = jm1;
        // after this step, j = J_m, jp1 = J_{m+1}
        if m % 2 == 0 {
            norm += if m == 0 { j } else { 2.0 * j };
        }
        if m as u64 == n {
            result = j;
        }
        // rescale to avoid overflow
        if j.abs() > 1e250 {
            j /= 1e250;
            jp1 /= 1e250;
            norm /= 1e250;
            result /= 1e250;
        }
    }
    result / norm
}

/// Bisection root-find of J_n on [lo, hi] using the ascending series only —
/// an oracle path independent of the recurrence evaluation.
pub fn bessel_zero_by_series(n: u64, lo: f64, hi: f64) -> Option<f64> {
    let f = |x: f64| bessel_series(n, x);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fa * fb > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a) < 1e-15 {
            return Some(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    Some(0.5 * (a + b))
}
