//! Algebra- and group-valued fields on the ball grid, with the three
//! boundary classes and their seeded generators.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::form::{extrapolate, PForm, SphereData};
use super::grid::BallGrid;
use crate::lie::{exponential, random_algebra_with, AlgebraElement, GroupElement, Mat};
use crate::par::*;
use crate::CoreError;

/// Behaviour at `r = 1`, ordered from most to least constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryClass {
    /// Constant on the sphere with vanishing radial derivative.
    Loop,
    /// Vanishing radial derivative only.
    Flattened,
    Free,
}

impl BoundaryClass {
    /// The weaker of two classes, which is what sums and products keep.
    pub fn join(self, other: Self) -> Self {
        self.max(other)
    }
}

/// A seeded sum of plane waves `Σ b_w sin(k_w·X + c_w)` with `b_w` drawn
/// on the su(n) basis, `k_w` uniform in `[-K, K]³` and `c_w` uniform in
/// `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveSpec {
    pub waves: usize,
    pub max_wavenumber: f64,
    pub amplitude: f64,
}

impl Default for WaveSpec {
    fn default() -> Self {
        Self { waves: 4, max_wavenumber: 2.0, amplitude: 0.8 }
    }
}

struct PlaneWaves<const N: usize> {
    terms: Vec<(AlgebraElement<N>, [f64; 3], f64)>,
}

impl<const N: usize> PlaneWaves<N> {
    fn draw(rng: &mut ChaCha8Rng, spec: &WaveSpec) -> Self {
        let norm = spec.amplitude / (spec.waves.max(1) as f64).sqrt();
        let terms = (0..spec.waves)
            .map(|_| {
                let b = random_algebra_with::<N, _>(rng).scale(norm);
                let k = std::array::from_fn(|_| rng.random_range(-spec.max_wavenumber..=spec.max_wavenumber));
                let phase = rng.random_range(0.0..2.0 * PI);
                (b, k, phase)
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, x: [f64; 3]) -> Mat<N> {
        self.terms.iter().fold(Mat::<N>::zeros(), |acc, (b, k, c)| {
            acc + b.matrix() * Complex64::new((k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + c).sin(), 0.0)
        })
    }
}

/// Applies the boundary window of `class` to plane waves at `X`.
fn windowed<const N: usize>(p: &PlaneWaves<N>, class: BoundaryClass, x: [f64; 3]) -> Mat<N> {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    match class {
        BoundaryClass::Free => p.eval(x),
        BoundaryClass::Flattened => {
            let s = (3.0 - r2) / 2.0;
            p.eval([x[0] * s, x[1] * s, x[2] * s])
        }
        BoundaryClass::Loop => p.eval(x) * Complex64::new((1.0 - r2).powi(2), 0.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallAlgebraField<const N: usize> {
    grid: BallGrid,
    samples: Vec<AlgebraElement<N>>,
    class: BoundaryClass,
}

impl<const N: usize> BallAlgebraField<N> {
    pub fn new(grid: BallGrid, samples: Vec<AlgebraElement<N>>, class: BoundaryClass) -> Result<Self, CoreError> {
        if samples.len() != grid.len() {
            return Err(CoreError::GridMismatch(grid.describe(), format!("{} samples", samples.len())));
        }
        Ok(Self { grid, samples, class })
    }

    /// Samples from a function of Cartesian position.
    pub fn from_cartesian(grid: BallGrid, class: BoundaryClass, f: impl Fn([f64; 3]) -> AlgebraElement<N> + Sync) -> Self {
        let samples = (0..grid.len()).into_par_iter().map(|idx| f(grid.cartesian(idx))).collect();
        Self { grid, samples, class }
    }

    pub fn zero(grid: BallGrid) -> Self {
        Self { grid, samples: vec![AlgebraElement::zero(); grid.len()], class: BoundaryClass::Loop }
    }

    /// Seeded smooth field of the given class: plane waves as in
    /// [`WaveSpec`], composed with `X ↦ X(3 − r²)/2` for the flattened class
    /// and multiplied by `(1 − r²)²` for the loop class.
    pub fn random(grid: BallGrid, class: BoundaryClass, seed: u64, spec: &WaveSpec) -> Result<Self, CoreError> {
        if N < 2 {
            return Err(CoreError::DimensionTooSmall(N));
        }
        let waves = PlaneWaves::<N>::draw(&mut ChaCha8Rng::seed_from_u64(seed), spec);
        Ok(Self::from_cartesian(grid, class, |x| AlgebraElement::from_matrix_unchecked(windowed(&waves, class, x))))
    }

    pub fn grid(&self) -> BallGrid {
        self.grid
    }

    pub fn class(&self) -> BoundaryClass {
        self.class
    }

    pub fn samples(&self) -> &[AlgebraElement<N>] {
        &self.samples
    }

    pub fn matrices(&self) -> Vec<Mat<N>> {
        self.samples.iter().map(|s| *s.matrix()).collect()
    }

    fn same_grid(&self, other: &Self) -> Result<(), CoreError> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch(self.grid.describe(), other.grid.describe()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&AlgebraElement<N>, &AlgebraElement<N>) -> AlgebraElement<N> + Sync) -> Result<Self, CoreError> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.par_iter().zip(other.samples.par_iter()).map(|(a, b)| f(a, b)).collect(),
            class: self.class.join(other.class),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(|a| a.scale(s)).collect(), class: self.class }
    }

    /// Pointwise `[x, y]`.
    pub fn bracket(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a.bracket(b))
    }

    /// Pointwise `f⁻¹ x f`.
    pub fn adjoint(&self, f: &BallGroupField<N>) -> Result<Self, CoreError> {
        if self.grid != f.grid {
            return Err(CoreError::GridMismatch(self.grid.describe(), f.grid.describe()));
        }
        Ok(Self {
            grid: self.grid,
            samples: self.samples.par_iter().zip(f.samples.par_iter()).map(|(x, g)| g.adjoint_action(x)).collect(),
            class: self.class.join(f.class),
        })
    }

    /// The field as a 0-form.
    pub fn form(&self) -> PForm<N> {
        PForm::new(self.grid, 0, vec![self.matrices()]).expect("samples match the grid")
    }

    pub fn d(&self) -> PForm<N> {
        self.form().d().expect("0-forms are differentiable")
    }

    /// `(spread of the values, largest |∂_r|)` at `r = 1`, both from the
    /// outermost radial nodes.
    pub fn boundary_defect(&self) -> (f64, f64) {
        let f = self.form();
        let radial = f.boundary_radial_derivative(0).values.iter().map(crate::lie::max_abs).fold(0.0, f64::max);
        (f.boundary_values(0).spread(), radial)
    }

    pub fn to_json(&self) -> String {
        BallDoc::encode(self.grid, self.class, N, self.samples.iter().map(|s| s.matrix()))
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let (grid, class, mats) = BallDoc::decode::<N>(text)?;
        Self::new(grid, mats.into_iter().map(AlgebraElement::new).collect::<Result<_, _>>()?, class)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallGroupField<const N: usize> {
    grid: BallGrid,
    samples: Vec<GroupElement<N>>,
    class: BoundaryClass,
}

impl<const N: usize> BallGroupField<N> {
    pub fn new(grid: BallGrid, samples: Vec<GroupElement<N>>, class: BoundaryClass) -> Result<Self, CoreError> {
        if samples.len() != grid.len() {
            return Err(CoreError::GridMismatch(grid.describe(), format!("{} samples", samples.len())));
        }
        Ok(Self { grid, samples, class })
    }

    pub fn identity(grid: BallGrid) -> Self {
        Self { grid, samples: vec![GroupElement::identity(); grid.len()], class: BoundaryClass::Loop }
    }

    /// Pointwise exponential; the class carries over.
    pub fn exp(chi: &BallAlgebraField<N>) -> Self {
        Self { grid: chi.grid, samples: chi.samples.par_iter().map(exponential).collect(), class: chi.class }
    }

    /// `exp` of [`BallAlgebraField::random`].
    pub fn random(grid: BallGrid, class: BoundaryClass, seed: u64, spec: &WaveSpec) -> Result<Self, CoreError> {
        Ok(Self::exp(&BallAlgebraField::random(grid, class, seed, spec)?))
    }

    pub fn grid(&self) -> BallGrid {
        self.grid
    }

    pub fn class(&self) -> BoundaryClass {
        self.class
    }

    pub fn samples(&self) -> &[GroupElement<N>] {
        &self.samples
    }

    pub fn matrices(&self) -> Vec<Mat<N>> {
        self.samples.iter().map(|s| *s.matrix()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CoreError> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch(self.grid.describe(), other.grid.describe()));
        }
        Ok(Self {
            grid: self.grid,
            samples: self.samples.par_iter().zip(other.samples.par_iter()).map(|(a, b)| a.mul(b)).collect(),
            class: self.class.join(other.class),
        })
    }

    pub fn inverse(&self) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(GroupElement::inverse).collect(), class: self.class }
    }

    /// The field as a matrix-valued 0-form (not in the Lie algebra).
    pub fn form(&self) -> PForm<N> {
        PForm::new(self.grid, 0, vec![self.matrices()]).expect("samples match the grid")
    }

    pub fn to_json(&self) -> String {
        BallDoc::encode(self.grid, self.class, N, self.samples.iter().map(|s| s.matrix()))
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let (grid, class, mats) = BallDoc::decode::<N>(text)?;
        Self::new(grid, mats.into_iter().map(GroupElement::new).collect::<Result<_, _>>()?, class)
    }
}

/// A group-valued field on the boundary sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGroupField<const N: usize> {
    pub nt: usize,
    pub np: usize,
    pub samples: Vec<GroupElement<N>>,
}

impl<const N: usize> SphereGroupField<N> {
    pub fn mul(&self, other: &Self) -> Self {
        Self { nt: self.nt, np: self.np, samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| crate::lie::max_abs(&(a.matrix() - b.matrix())))
            .fold(0.0, f64::max)
    }

    /// Largest distance from the first sample.
    pub fn spread(&self) -> f64 {
        let first = self.samples[0].matrix();
        self.samples.iter().map(|s| crate::lie::max_abs(&(s.matrix() - first))).fold(0.0, f64::max)
    }
}

/// Nearest point of SU(n) to a nearly special unitary matrix: the unitary
/// polar factor, rescaled by the principal `n`-th root of its determinant.
fn project_su<const N: usize>(m: &Mat<N>) -> GroupElement<N> {
    let svd = DMatrix::from_iterator(N, N, m.iter().copied()).svd(true, true);
    let u = svd.u.expect("requested U") * svd.v_t.expect("requested V^T");
    let det = u.determinant();
    let fix = (det.ln() / N as f64).exp().inv();
    GroupElement::from_matrix_unchecked(Mat::<N>::from_iterator(u.iter().map(|z| z * fix)))
}

/// The quotient map to boundary values: samples extrapolated to `r = 1`
/// and projected back onto the group.
pub fn restrict_boundary<const N: usize>(f: &BallGroupField<N>) -> SphereGroupField<N> {
    let raw: SphereData<N> = extrapolate(&f.grid, &f.matrices(), 0);
    SphereGroupField { nt: raw.nt, np: raw.np, samples: raw.values.iter().map(project_su).collect() }
}

/// A seeded smooth 1-form: Cartesian components drawn as independent plane
/// wave sums, expressed in the spherical coframe.
pub fn random_potential<const N: usize>(grid: BallGrid, seed: u64, spec: &WaveSpec) -> Result<PForm<N>, CoreError> {
    if N < 2 {
        return Err(CoreError::DimensionTooSmall(N));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps: [PlaneWaves<N>; 3] = std::array::from_fn(|_| PlaneWaves::draw(&mut rng, spec));
    PForm::from_fn(grid, 1, |comp, r, t, p| {
        let x = [r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()];
        let e = match comp {
            0 => [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()],
            1 => [t.cos() * p.cos(), t.cos() * p.sin(), -t.sin()],
            _ => [-p.sin(), p.cos(), 0.0],
        };
        (0..3).fold(Mat::<N>::zeros(), |acc, a| acc + comps[a].eval(x) * Complex64::new(e[a], 0.0))
    })
}

#[derive(Serialize, Deserialize)]
struct BallDoc {
    n: usize,
    #[serde(rename = "N")]
    nodes: usize,
    #[serde(flatten)]
    grid: BallGrid,
    boundary_class: BoundaryClass,
    samples: Vec<[f64; 2]>,
}

impl BallDoc {
    fn encode<'a, const N: usize>(grid: BallGrid, class: BoundaryClass, n: usize, mats: impl Iterator<Item = &'a Mat<N>>) -> String {
        let samples = mats
            .flat_map(|m| (0..N * N).map(move |e| [m[(e / N, e % N)].re, m[(e / N, e % N)].im]))
            .collect();
        let doc = BallDoc { n, nodes: grid.len(), grid, boundary_class: class, samples };
        serde_json::to_string(&doc).expect("field document serializes")
    }

    fn decode<const N: usize>(text: &str) -> Result<(BallGrid, BoundaryClass, Vec<Mat<N>>), CoreError> {
        let doc: BallDoc = serde_json::from_str(text).map_err(|e| CoreError::Serde(e.to_string()))?;
        let grid = BallGrid::new(doc.grid.nr, doc.grid.nt, doc.grid.np)?;
        if doc.n != N || doc.nodes != grid.len() || doc.samples.len() != grid.len() * N * N {
            return Err(CoreError::Serde("sizes in the document are inconsistent".into()));
        }
        let mats = doc
            .samples
            .chunks(N * N)
            .map(|c| Mat::<N>::from_fn(|r, col| Complex64::new(c[r * N + col][0], c[r * N + col][1])))
            .collect();
        Ok((grid, doc.boundary_class, mats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_join() {
        assert_eq!(BoundaryClass::Loop.join(BoundaryClass::Flattened), BoundaryClass::Flattened);
        assert_eq!(BoundaryClass::Free.join(BoundaryClass::Loop), BoundaryClass::Free);
    }

    #[test]
    fn generators_meet_their_boundary_conditions() {
        let spec = WaveSpec::default();
        let defect = |n: usize, class| {
            BallAlgebraField::<2>::random(BallGrid::cube(n).unwrap(), class, 1, &spec).unwrap().boundary_defect()
        };
        let (loop24, loop48) = (defect(24, BoundaryClass::Loop), defect(48, BoundaryClass::Loop));
        assert!(loop48.0 < loop24.0 / 16.0 && loop48.0 < 1e-5, "{loop24:?} {loop48:?}");
        assert!(loop48.1 < loop24.1 / 8.0 && loop48.1 < 1e-3, "{loop24:?} {loop48:?}");
        let (flat24, flat48) = (defect(24, BoundaryClass::Flattened), defect(48, BoundaryClass::Flattened));
        assert!(flat48.0 > 1e-2, "{flat48:?}");
        assert!(flat48.1 < flat24.1 / 8.0 && flat48.1 < 1e-3, "{flat24:?} {flat48:?}");
        assert!(defect(24, BoundaryClass::Free).1 > 1e-2);
    }

    #[test]
    fn json_round_trip() {
        let g = BallGrid::new(8, 4, 8).unwrap();
        let x = BallAlgebraField::<2>::random(g, BoundaryClass::Flattened, 5, &WaveSpec::default()).unwrap();
        let back = BallAlgebraField::<2>::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        let text = x.to_json();
        assert!(text.contains("\"Ntheta\":4") && text.contains("\"boundary_class\":\"flattened\""));
        let f = BallGroupField::exp(&x);
        assert_eq!(BallGroupField::<2>::from_json(&f.to_json()).unwrap(), f);
        assert!(BallGroupField::<2>::from_json(&text).is_err());
    }

    #[test]
    fn projection_keeps_group_elements() {
        let g = crate::lie::exponential(&crate::lie::random_algebra::<3>(4).unwrap());
        let p = project_su(g.matrix());
        assert!(crate::lie::max_abs(&(p.matrix() - g.matrix())) < 1e-13);
    }
}
