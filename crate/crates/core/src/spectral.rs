//! Periodic differentiation by the discrete Fourier transform.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::lie::Mat;
use crate::par::*;

/// Differentiates periodic samples on `[0, 2π)`. The Nyquist mode is
/// dropped so real data stays real.
#[derive(Clone)]
pub struct SpectralDiff {
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl SpectralDiff {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place `d/dφ`, applied `order` times in Fourier space.
    pub fn apply(&self, buf: &mut [Complex64], order: u32) {
        let n = self.len;
        debug_assert_eq!(buf.len(), n);
        self.fwd.process(buf);
        let scale = 1.0 / n as f64;
        for (j, c) in buf.iter_mut().enumerate() {
            let k = if j < n / 2 {
                j as f64
            } else if j > n / 2 {
                j as f64 - n as f64
            } else {
                *c = Complex64::new(0.0, 0.0);
                continue;
            };
            *c *= Complex64::new(0.0, k).powu(order) * scale;
        }
        self.inv.process(buf);
    }

    /// Entrywise derivative of a periodic sequence of matrices.
    pub fn matrices<const N: usize>(&self, samples: &[Mat<N>], order: u32) -> Vec<Mat<N>> {
        let n = self.len;
        let entries: Vec<Vec<Complex64>> = (0..N * N)
            .into_par_iter()
            .map(|e| {
                let (r, c) = (e / N, e % N);
                let mut buf: Vec<Complex64> = samples.iter().map(|m| m[(r, c)]).collect();
                self.apply(&mut buf, order);
                buf
            })
            .collect();
        (0..n)
            .map(|k| Mat::<N>::from_fn(|r, c| entries[r * N + c][k]))
            .collect()
    }
}
