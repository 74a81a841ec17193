//! Row-parallel 2-D FFT on square row-major buffers.
//!
//! Each row is transformed independently and reductions elsewhere are
//! sequential, so results do not depend on the rayon schedule.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn plan(&self, inverse: bool) -> &Arc<dyn Fft<f64>> {
        if inverse {
            &self.inv
        } else {
            &self.fwd
        }
    }

    /// Unnormalised 1-D transform of every row.
    pub fn rows(&self, data: &mut [Complex64], inverse: bool) {
        let plan = self.plan(inverse);
        let len = plan.get_inplace_scratch_len();
        data.par_chunks_mut(self.n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); len],
            |scratch, row| plan.process_with_scratch(row, scratch),
        );
    }

    /// `F(a, b) = sum_ij data[i, j] exp(-2 pi i (i a + j b) / n)`, or the
    /// unnormalised inverse.
    pub fn full(&self, data: &mut Vec<Complex64>, inverse: bool) {
        self.rows(data, inverse);
        *data = transpose(data, self.n);
        self.rows(data, inverse);
        *data = transpose(data, self.n);
    }
}

pub(crate) fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = data[i * n + j];
        }
    });
    out
}

/// Signed integer frequency of FFT bin `a`.
pub(crate) fn signed_bin(a: usize, n: usize) -> f64 {
    if a < n / 2 {
        a as f64
    } else {
        a as f64 - n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_single_mode() {
        let n = 64;
        let fft = Fft2::new(n);
        let mut d: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let orig = d.clone();
        fft.full(&mut d, false);
        fft.full(&mut d, true);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a / (n * n) as f64 - b).norm() < 1e-12);
        }
        // exp(2 pi i (3 i - 5 j) / n) lands in bin (3, n - 5)
        let mut m: Vec<Complex64> = (0..n * n)
            .map(|k| {
                let (i, j) = ((k / n) as f64, (k % n) as f64);
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (3.0 * i - 5.0 * j) / n as f64)
            })
            .collect();
        fft.full(&mut m, false);
        assert!((m[3 * n + n - 5].re - (n * n) as f64).abs() < 1e-9);
        assert_eq!(signed_bin(n - 5, n), -5.0);
    }
}
