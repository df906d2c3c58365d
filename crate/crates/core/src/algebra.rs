//! Small complex-vector helpers shared across modules.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CV3 = Vector3<C64>;
pub type RV3 = Vector3<f64>;
pub type CM3 = Matrix3<C64>;

pub const I: C64 = Complex::new(0.0, 1.0);

/// Promote a real vector to a complex one.
#[inline]
pub fn complexify(v: &RV3) -> CV3 {
    v.map(|x| C64::new(x, 0.0))
}

/// Bra-ket dot product Σ conj(aᵢ)·bᵢ.
#[inline]
pub fn cdot(a: &CV3, b: &CV3) -> C64 {
    a.x.conj() * b.x + a.y.conj() * b.y + a.z.conj() * b.z
}

/// Unconjugated dot product Σ aᵢ·bᵢ.
#[inline]
pub fn dot_unconj(a: &CV3, b: &CV3) -> C64 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

/// Cross product of a real vector with a complex one.
#[inline]
pub fn cross_rc(a: &RV3, b: &CV3) -> CV3 {
    CV3::new(
        b.z * a.y - b.y * a.z,
        b.x * a.z - b.z * a.x,
        b.y * a.x - b.x * a.y,
    )
}

/// Cross product conj(a) × b.
#[inline]
pub fn cross_conj(a: &CV3, b: &CV3) -> CV3 {
    CV3::new(
        a.y.conj() * b.z - a.z.conj() * b.y,
        a.z.conj() * b.x - a.x.conj() * b.z,
        a.x.conj() * b.y - a.y.conj() * b.x,
    )
}

/// Dot of a real vector with a complex one.
#[inline]
pub fn dot_rc(a: &RV3, b: &CV3) -> C64 {
    b.x * a.x + b.y * a.y + b.z * a.z
}

/// Squared Euclidean norm Σ |vᵢ|².
#[inline]
pub fn norm_sq(v: &CV3) -> f64 {
    v.x.norm_sqr() + v.y.norm_sqr() + v.z.norm_sqr()
}

/// Apply a real 3×3 matrix to a complex vector.
#[inline]
pub fn apply_real_matrix(m: &Matrix3<f64>, v: &CV3) -> CV3 {
    CV3::new(
        v.x * m[(0, 0)] + v.y * m[(0, 1)] + v.z * m[(0, 2)],
        v.x * m[(1, 0)] + v.y * m[(1, 1)] + v.z * m[(1, 2)],
        v.x * m[(2, 0)] + v.y * m[(2, 1)] + v.z * m[(2, 2)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cross_matches_real_case() {
        let a = RV3::new(1.0, 2.0, 3.0);
        let b = RV3::new(-2.0, 0.5, 4.0);
        let cb = complexify(&b);
        let c = cross_rc(&a, &cb);
        let expect = a.cross(&b);
        for i in 0..3 {
            assert_relative_eq!(c[i].re, expect[i], epsilon = 1e-15);
            assert_relative_eq!(c[i].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cdot_conjugates_bra() {
        let a = CV3::new(I, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let b = CV3::new(I, C64::new(2.0, 0.0), C64::new(0.0, 0.0));
        // conj(i)*i + 1*2 = 1 + 2
        assert_relative_eq!(cdot(&a, &b).re, 3.0, epsilon = 1e-15);
        assert_relative_eq!(cdot(&a, &b).im, 0.0, epsilon = 1e-15);
    }
}
