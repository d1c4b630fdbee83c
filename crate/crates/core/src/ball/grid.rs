//! The spherical product grid on B³, its derivative stencils and its
//! quadrature weights.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lie::Mat;
use crate::par::*;
use crate::spectral::SpectralDiff;
use crate::CoreError;

/// Nodes at `r_i = (i+½)/Nr`, `θ_j = (j+½)π/Nθ`, `φ_k = 2πk/Nφ`, stored with
/// `φ` fastest: `index = (i·Nθ + j)·Nφ + k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BallGrid {
    #[serde(rename = "Nr")]
    pub nr: usize,
    #[serde(rename = "Ntheta")]
    pub nt: usize,
    #[serde(rename = "Nphi")]
    pub np: usize,
}

/// Endpoint corrections per side of the radial rule.
const RADIAL_CORRECTIONS: usize = 4;

impl BallGrid {
    pub fn new(nr: usize, nt: usize, np: usize) -> Result<Self, CoreError> {
        if nr < 2 * RADIAL_CORRECTIONS {
            return Err(CoreError::InvalidGrid(format!("Nr = {nr} is below 8")));
        }
        if nt < 4 {
            return Err(CoreError::InvalidGrid(format!("Ntheta = {nt} is below 4")));
        }
        if np < 8 || !np.is_multiple_of(2) {
            return Err(CoreError::InvalidGrid(format!("Nphi = {np} must be even and at least 8")));
        }
        Ok(Self { nr, nt, np })
    }

    pub fn cube(n: usize) -> Result<Self, CoreError> {
        Self::new(n, n, n)
    }

    pub fn len(&self) -> usize {
        self.nr * self.nt * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sphere_len(&self) -> usize {
        self.nt * self.np
    }

    pub fn r(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.nr as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * PI / self.nt as f64
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.np as f64
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.nt + j) * self.np + k
    }

    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let k = idx % self.np;
        let rest = idx / self.np;
        (rest / self.nt, rest % self.nt, k)
    }

    /// `(r, θ, φ)` of a node.
    pub fn position(&self, idx: usize) -> (f64, f64, f64) {
        let (i, j, k) = self.coords(idx);
        (self.r(i), self.theta(j), self.phi(k))
    }

    /// Cartesian coordinates of a node.
    pub fn cartesian(&self, idx: usize) -> [f64; 3] {
        let (r, t, p) = self.position(idx);
        [r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()]
    }

    pub fn describe(&self) -> String {
        format!("{}x{}x{}", self.nr, self.nt, self.np)
    }

    /// Weights for `∫₀¹ g(r) dr`: the midpoint rule plus corrections on the
    /// first and last four nodes, fixed so that `1, r, …, r⁷` integrate
    /// exactly.
    pub fn radial_weights(&self) -> Vec<f64> {
        let n = self.nr;
        let h = 1.0 / n as f64;
        let m = RADIAL_CORRECTIONS;
        let nodes: Vec<usize> = (0..m).chain(n - m..n).collect();
        let a = DMatrix::from_fn(2 * m, 2 * m, |p, c| self.r(nodes[c]).powi(p as i32));
        let b = DVector::from_fn(2 * m, |p, _| {
            let midpoint: f64 = (0..n).map(|i| h * self.r(i).powi(p as i32)).sum();
            1.0 / (p as f64 + 1.0) - midpoint
        });
        let delta = a.lu().solve(&b).expect("Vandermonde system on distinct nodes is regular");
        let mut w = vec![h; n];
        for (c, &i) in nodes.iter().enumerate() {
            w[i] += delta[c];
        }
        w
    }

    /// Fejér's first rule on `θ_j`: weights for `∫₀^π g(θ) sin θ dθ`.
    pub fn polar_weights(&self) -> Vec<f64> {
        let n = self.nt;
        (0..n)
            .map(|j| {
                let t = self.theta(j);
                let s: f64 = (1..=n / 2).map(|k| (2.0 * k as f64 * t).cos() / (4.0 * (k * k) as f64 - 1.0)).sum();
                2.0 / n as f64 * (1.0 - 2.0 * s)
            })
            .collect()
    }

    pub fn azimuth_weight(&self) -> f64 {
        2.0 * PI / self.np as f64
    }
}

/// Fourth-order first-derivative stencil at node `i` of `n`, as
/// `(node, weight)` pairs to be divided by the spacing.
pub(crate) fn fd4(i: usize, n: usize) -> [(usize, f64); 5] {
    let c = 1.0 / 12.0;
    let first = [-25.0 * c, 48.0 * c, -36.0 * c, 16.0 * c, -3.0 * c];
    let second = [-3.0 * c, -10.0 * c, 18.0 * c, -6.0 * c, c];
    let fwd = |w: [f64; 5]| std::array::from_fn(|o| (o, w[o]));
    let bwd = |w: [f64; 5]| std::array::from_fn(|o| (n - 1 - o, -w[o]));
    match i {
        0 => fwd(first),
        1 => fwd(second),
        _ if i + 1 == n => bwd(first),
        _ if i + 2 == n => bwd(second),
        _ => [(i - 2, c), (i - 1, -8.0 * c), (i, 0.0), (i + 1, 8.0 * c), (i + 2, -c)],
    }
}

/// Lagrange weights on the outermost five radial nodes for the value
/// (`order = 0`) or the radial derivative times `h` (`order = 1`) at `r = 1`.
pub(crate) fn outer_weights(order: u32) -> [f64; 5] {
    let t: [f64; 5] = std::array::from_fn(|m| -(m as f64 + 0.5));
    std::array::from_fn(|m| {
        let denom: f64 = (0..5).filter(|&l| l != m).map(|l| t[m] - t[l]).product();
        match order {
            0 => (0..5).filter(|&l| l != m).map(|l| -t[l]).product::<f64>() / denom,
            _ => (0..5)
                .filter(|&l| l != m)
                .map(|skip| (0..5).filter(|&l| l != m && l != skip).map(|l| -t[l]).product::<f64>())
                .sum::<f64>()
                / denom,
        }
    })
}

pub(crate) fn d_r<const N: usize>(g: &BallGrid, data: &[Mat<N>]) -> Vec<Mat<N>> {
    let inv_h = g.nr as f64;
    (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = g.coords(idx);
            fd4(i, g.nr)
                .iter()
                .fold(Mat::<N>::zeros(), |acc, &(o, w)| acc + data[g.index(o, j, k)] * Complex64::new(w * inv_h, 0.0))
        })
        .collect()
}

/// `∂_θ` of a quantity that continues evenly over the poles: the meridian
/// through `φ` and `φ + π` is a full periodic circle sampled uniformly.
pub(crate) fn d_theta<const N: usize>(g: &BallGrid, data: &[Mat<N>]) -> Vec<Mat<N>> {
    let (nt, np) = (g.nt, g.np);
    let diff = SpectralDiff::new(2 * nt);
    let lines: Vec<Vec<Mat<N>>> = (0..g.nr * np)
        .into_par_iter()
        .map(|line| {
            let (i, k) = (line / np, line % np);
            let opposite = (k + np / 2) % np;
            let ext: Vec<Mat<N>> = (0..2 * nt)
                .map(|m| if m < nt { data[g.index(i, m, k)] } else { data[g.index(i, 2 * nt - 1 - m, opposite)] })
                .collect();
            let mut d = diff.matrices(&ext, 1);
            d.truncate(nt);
            d
        })
        .collect();
    let mut out = vec![Mat::<N>::zeros(); g.len()];
    for (line, vals) in lines.into_iter().enumerate() {
        let (i, k) = (line / np, line % np);
        for (j, v) in vals.into_iter().enumerate() {
            out[g.index(i, j, k)] = v;
        }
    }
    out
}

pub(crate) fn d_phi<const N: usize>(g: &BallGrid, data: &[Mat<N>]) -> Vec<Mat<N>> {
    let diff = SpectralDiff::new(g.np);
    let lines: Vec<Vec<Mat<N>>> = data.par_chunks(g.np).map(|line| diff.matrices(line, 1)).collect();
    lines.into_iter().flatten().collect()
}
