//! Matrix-valued differential forms on the ball grid.
//!
//! Components live in the orthonormal coframe `e^r = dr`, `e^θ = r dθ`,
//! `e^φ = r sin θ dφ`, one per increasing multi-index: `[r, θ, φ]` for
//! 1-forms, `[rθ, rφ, θφ]` for 2-forms and `[rθφ]` for 3-forms. Scalar
//! forms are `PForm<1>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{d_phi, d_r, d_theta, outer_weights, BallGrid};
use crate::lie::Mat;
use crate::par::*;
use crate::CoreError;

const INDICES: [&[&[usize]]; 4] = [&[&[]], &[&[0], &[1], &[2]], &[&[0, 1], &[0, 2], &[1, 2]], &[&[0, 1, 2]]];

/// Component slot of a sorted multi-index.
fn slot(idx: &[usize]) -> usize {
    INDICES[idx.len()].iter().position(|s| *s == idx).expect("sorted multi-index")
}

/// Sign of the shuffle that sorts `a ++ b`, or `None` when they overlap.
fn shuffle_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, f64)> {
    if a.iter().any(|i| b.contains(i)) {
        return None;
    }
    let inversions = a.iter().map(|i| b.iter().filter(|j| *j < i).count()).sum::<usize>();
    let mut k: Vec<usize> = a.iter().chain(b).copied().collect();
    k.sort_unstable();
    Some((k, if inversions % 2 == 0 { 1.0 } else { -1.0 }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PForm<const N: usize> {
    grid: BallGrid,
    degree: usize,
    comps: Vec<Vec<Mat<N>>>,
}

/// Values of a quantity on the boundary sphere `r = 1`, sampled at the
/// grid's `(θ_j, φ_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereData<const N: usize> {
    pub nt: usize,
    pub np: usize,
    pub values: Vec<Mat<N>>,
}

fn c(s: f64) -> Complex64 {
    Complex64::new(s, 0.0)
}

impl<const N: usize> PForm<N> {
    pub fn new(grid: BallGrid, degree: usize, comps: Vec<Vec<Mat<N>>>) -> Result<Self, CoreError> {
        if degree > 3 {
            return Err(CoreError::Degree(degree));
        }
        if comps.len() != INDICES[degree].len() || comps.iter().any(|v| v.len() != grid.len()) {
            return Err(CoreError::InvalidGrid(format!(
                "{}-form components do not match grid {}",
                degree,
                grid.describe()
            )));
        }
        Ok(Self { grid, degree, comps })
    }

    pub fn zero(grid: BallGrid, degree: usize) -> Result<Self, CoreError> {
        let comps = vec![vec![Mat::<N>::zeros(); grid.len()]; INDICES.get(degree).ok_or(CoreError::Degree(degree))?.len()];
        Self::new(grid, degree, comps)
    }

    /// Components given pointwise as functions of `(r, θ, φ)`.
    pub fn from_fn(grid: BallGrid, degree: usize, f: impl Fn(usize, f64, f64, f64) -> Mat<N> + Sync) -> Result<Self, CoreError> {
        let n = INDICES.get(degree).ok_or(CoreError::Degree(degree))?.len();
        let comps = (0..n)
            .map(|comp| {
                (0..grid.len())
                    .into_par_iter()
                    .map(|idx| {
                        let (r, t, p) = grid.position(idx);
                        f(comp, r, t, p)
                    })
                    .collect()
            })
            .collect();
        Self::new(grid, degree, comps)
    }

    pub fn grid(&self) -> BallGrid {
        self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Vec<Mat<N>>] {
        &self.comps
    }

    pub fn component(&self, idx: &[usize]) -> &[Mat<N>] {
        &self.comps[slot(idx)]
    }

    fn compatible(&self, other: &Self) -> Result<(), CoreError> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch(self.grid.describe(), other.grid.describe()));
        }
        if self.degree != other.degree {
            return Err(CoreError::Degree(other.degree));
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(&Mat<N>) -> Mat<N> + Sync) -> Self {
        Self {
            grid: self.grid,
            degree: self.degree,
            comps: self.comps.iter().map(|v| v.par_iter().map(&f).collect()).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Mat<N>, &Mat<N>) -> Mat<N> + Sync) -> Result<Self, CoreError> {
        self.compatible(other)?;
        Ok(Self {
            grid: self.grid,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.par_iter().zip(b.par_iter()).map(|(x, y)| f(x, y)).collect())
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|a| a * s)
    }

    /// Pointwise `g⁻¹ α g` for unitary samples `g`.
    pub fn conjugate(&self, g: &[Mat<N>]) -> Result<Self, CoreError> {
        if g.len() != self.grid.len() {
            return Err(CoreError::GridMismatch(self.grid.describe(), format!("{} samples", g.len())));
        }
        Ok(Self {
            grid: self.grid,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|v| v.par_iter().zip(g.par_iter()).map(|(a, g)| g.adjoint() * a * g).collect())
                .collect(),
        })
    }

    /// Pointwise trace, as a scalar form.
    pub fn trace(&self) -> PForm<1> {
        PForm {
            grid: self.grid,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|v| v.par_iter().map(|m| Mat::<1>::new(m.trace())).collect())
                .collect(),
        }
    }

    /// Largest entry modulus over all components and nodes.
    pub fn norm_max(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|v| v.iter())
            .map(crate::lie::max_abs)
            .fold(0.0, f64::max)
    }

    /// `√(∫ Σ |α_I|² dV)` with the entrywise Frobenius norm.
    pub fn norm_l2(&self) -> f64 {
        let w = NodeWeights::new(self.grid);
        let s: f64 = self
            .comps
            .iter()
            .map(|v| v.iter().enumerate().map(|(idx, m)| w.volume(idx) * m.norm_squared()).sum::<f64>())
            .sum();
        s.sqrt()
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<Self, CoreError> {
        let g = self.grid;
        let rs: Vec<f64> = (0..g.len()).map(|idx| g.position(idx).0).collect();
        let ss: Vec<f64> = (0..g.len()).map(|idx| g.position(idx).1.sin()).collect();
        let weigh = |v: &[Mat<N>], f: &(dyn Fn(usize) -> f64 + Sync)| -> Vec<Mat<N>> {
            v.par_iter().enumerate().map(|(idx, m)| m * c(f(idx))).collect()
        };
        let comps = match self.degree {
            0 => {
                let x = &self.comps[0];
                vec![
                    d_r(&g, x),
                    weigh(&d_theta(&g, x), &|i| 1.0 / rs[i]),
                    weigh(&d_phi(&g, x), &|i| 1.0 / (rs[i] * ss[i])),
                ]
            }
            1 => {
                let a_r = &self.comps[0];
                let a_t = weigh(&self.comps[1], &|i| rs[i]);
                let a_p = weigh(&self.comps[2], &|i| rs[i] * ss[i]);
                let b_rt = sub(&d_r(&g, &a_t), &d_theta(&g, a_r));
                let b_rp = sub(&d_r(&g, &a_p), &d_phi(&g, a_r));
                let b_tp = sub(&d_theta(&g, &a_p), &d_phi(&g, &a_t));
                vec![
                    weigh(&b_rt, &|i| 1.0 / rs[i]),
                    weigh(&b_rp, &|i| 1.0 / (rs[i] * ss[i])),
                    weigh(&b_tp, &|i| 1.0 / (rs[i] * rs[i] * ss[i])),
                ]
            }
            2 => {
                let b_rt = weigh(&self.comps[0], &|i| rs[i]);
                let b_rp = weigh(&self.comps[1], &|i| rs[i] * ss[i]);
                let b_tp = weigh(&self.comps[2], &|i| rs[i] * rs[i] * ss[i]);
                let top = add(&sub(&d_r(&g, &b_tp), &d_theta(&g, &b_rp)), &d_phi(&g, &b_rt));
                vec![weigh(&top, &|i| 1.0 / (rs[i] * rs[i] * ss[i]))]
            }
            d => return Err(CoreError::Degree(d)),
        };
        Self::new(g, self.degree + 1, comps)
    }

    /// `α ∧ β` with matrix products of the components.
    pub fn wedge(&self, other: &Self) -> Result<Self, CoreError> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch(self.grid.describe(), other.grid.describe()));
        }
        let degree = self.degree + other.degree;
        if degree > 3 {
            return Err(CoreError::Degree(degree));
        }
        let mut terms: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); INDICES[degree].len()];
        for (a, ia) in INDICES[self.degree].iter().enumerate() {
            for (b, ib) in INDICES[other.degree].iter().enumerate() {
                if let Some((k, sign)) = shuffle_sign(ia, ib) {
                    terms[slot(&k)].push((a, b, sign));
                }
            }
        }
        let comps = terms
            .iter()
            .map(|list| {
                (0..self.grid.len())
                    .into_par_iter()
                    .map(|idx| {
                        list.iter().fold(Mat::<N>::zeros(), |acc, &(a, b, s)| {
                            acc + self.comps[a][idx] * other.comps[b][idx] * c(s)
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(self.grid, degree, comps)
    }

    /// Matrix commutator extended by the wedge: `α∧β − β∧α`.
    pub fn commutator(&self, other: &Self) -> Result<Self, CoreError> {
        self.wedge(other)?.sub(&other.wedge(self)?)
    }

    /// Component values extrapolated to `r = 1` from the outermost five
    /// radial nodes.
    pub fn boundary_values(&self, comp: usize) -> SphereData<N> {
        extrapolate(&self.grid, &self.comps[comp], 0)
    }

    /// `∂_r` of a component at `r = 1`, from the same five nodes.
    pub fn boundary_radial_derivative(&self, comp: usize) -> SphereData<N> {
        let mut d = extrapolate(&self.grid, &self.comps[comp], 1);
        let nr = self.grid.nr as f64;
        for v in &mut d.values {
            *v *= c(nr);
        }
        d
    }

    /// Pullback of a 2-form to the boundary sphere: its `θφ` component at
    /// `r = 1`, the coefficient of the area element.
    pub fn tangential_boundary(&self) -> Result<SphereData<N>, CoreError> {
        if self.degree != 2 {
            return Err(CoreError::Degree(self.degree));
        }
        Ok(self.boundary_values(2))
    }
}

#[derive(Serialize, Deserialize)]
struct FormDoc {
    n: usize,
    degree: usize,
    #[serde(flatten)]
    grid: BallGrid,
    components: Vec<Vec<[f64; 2]>>,
}

impl<const N: usize> PForm<N> {
    /// `{"n", "degree", "Nr", "Ntheta", "Nphi", "components"}`, one list of
    /// row-major `[re, im]` entries per component.
    pub fn to_json(&self) -> String {
        let components = self
            .comps
            .iter()
            .map(|v| v.iter().flat_map(|m| (0..N * N).map(move |e| [m[(e / N, e % N)].re, m[(e / N, e % N)].im])).collect())
            .collect();
        let doc = FormDoc { n: N, degree: self.degree, grid: self.grid, components };
        serde_json::to_string(&doc).expect("form document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let doc: FormDoc = serde_json::from_str(text).map_err(|e| CoreError::Serde(e.to_string()))?;
        let grid = BallGrid::new(doc.grid.nr, doc.grid.nt, doc.grid.np)?;
        if doc.n != N || doc.components.iter().any(|c| c.len() != grid.len() * N * N) {
            return Err(CoreError::Serde("sizes in the document are inconsistent".into()));
        }
        let comps = doc
            .components
            .iter()
            .map(|c| {
                c.chunks(N * N)
                    .map(|e| Mat::<N>::from_fn(|r, col| Complex64::new(e[r * N + col][0], e[r * N + col][1])))
                    .collect()
            })
            .collect();
        Self::new(grid, doc.degree, comps)
    }
}

fn add<const N: usize>(a: &[Mat<N>], b: &[Mat<N>]) -> Vec<Mat<N>> {
    a.par_iter().zip(b.par_iter()).map(|(x, y)| x + y).collect()
}

fn sub<const N: usize>(a: &[Mat<N>], b: &[Mat<N>]) -> Vec<Mat<N>> {
    a.par_iter().zip(b.par_iter()).map(|(x, y)| x - y).collect()
}

pub(crate) fn extrapolate<const N: usize>(g: &BallGrid, data: &[Mat<N>], order: u32) -> SphereData<N> {
    let w = outer_weights(order);
    let values = (0..g.sphere_len())
        .map(|s| {
            let (j, k) = (s / g.np, s % g.np);
            (0..5).fold(Mat::<N>::zeros(), |acc, m| acc + data[g.index(g.nr - 1 - m, j, k)] * c(w[m]))
        })
        .collect();
    SphereData { nt: g.nt, np: g.np, values }
}

/// Product quadrature weights per node, volume element included.
pub(crate) struct NodeWeights {
    grid: BallGrid,
    radial: Vec<f64>,
    polar: Vec<f64>,
}

impl NodeWeights {
    pub(crate) fn new(grid: BallGrid) -> Self {
        Self { grid, radial: grid.radial_weights(), polar: grid.polar_weights() }
    }

    pub(crate) fn volume(&self, idx: usize) -> f64 {
        let (i, j, _) = self.grid.coords(idx);
        let r = self.grid.r(i);
        self.radial[i] * r * r * self.polar[j] * self.grid.azimuth_weight()
    }
}

/// `∫_{B³} ρ` for a scalar 3-form.
pub fn integrate_volume(rho: &PForm<1>) -> Result<Complex64, CoreError> {
    if rho.degree != 3 {
        return Err(CoreError::Degree(rho.degree));
    }
    let w = NodeWeights::new(rho.grid);
    let terms: Vec<Complex64> = rho.comps[0].par_iter().enumerate().map(|(idx, m)| m[(0, 0)] * w.volume(idx)).collect();
    Ok(terms.into_iter().sum())
}

/// `∫_{S²} σ` for the area-element coefficient `σ` of a scalar 2-form on
/// the unit sphere.
pub fn integrate_boundary(sigma: &SphereData<1>) -> Complex64 {
    let grid = BallGrid { nr: 0, nt: sigma.nt, np: sigma.np };
    let polar = grid.polar_weights();
    let dphi = grid.azimuth_weight();
    sigma
        .values
        .iter()
        .enumerate()
        .map(|(s, m)| m[(0, 0)] * (polar[s / sigma.np] * dphi))
        .sum()
}

impl<const N: usize> SphereData<N> {
    pub fn trace(&self) -> SphereData<1> {
        SphereData { nt: self.nt, np: self.np, values: self.values.iter().map(|m| Mat::<1>::new(m.trace())).collect() }
    }

    pub fn constant(nt: usize, np: usize, m: Mat<N>) -> Self {
        Self { nt, np, values: vec![m; nt * np] }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| crate::lie::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the mean value.
    pub fn spread(&self) -> f64 {
        let mean = self.values.iter().fold(Mat::<N>::zeros(), |a, m| a + m) * c(1.0 / self.values.len() as f64);
        self.values.iter().map(|m| crate::lie::max_abs(&(m - mean))).fold(0.0, f64::max)
    }
}
