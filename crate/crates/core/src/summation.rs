//! Order-robust accumulation.
//!
//! Grid reductions must agree to ~1e-12 regardless of point order, so all
//! sums over grid points go through Neumaier-compensated accumulators
//! instead of bare `+=` loops.

use num_complex::Complex;

/// Neumaier (improved Kahan) compensated sum for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum for complex values (independent real/imag accumulators).
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex<f64>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Compensated sum of an iterator of complex values.
pub fn sum_c64<I: IntoIterator<Item = Complex<f64>>>(iter: I) -> Complex<f64> {
    let mut acc = CompensatedComplexSum::new();
    for z in iter {
        acc.add(z);
    }
    acc.value()
}
