//! Fields on the circle, the 1D Kac-Moody cocycle
//! `ω(x, y) = (1/2π) ∫ tr x y′ dφ`, and the path coboundary
//! `θ(z) = ∫₀¹ ω(f_t⁻¹ḟ_t, f_t⁻¹ z f_t) dt` with its closed form
//! `−(1/2π) ∫ tr f₁′f₁⁻¹ z dφ`.
//!
//! Samples sit at `φ_k = 2πk/L`. Derivatives in φ are spectral, so for
//! smooth fields the only visible error in a path computation comes from
//! the time direction.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lie::{exponential, random_algebra_with, AlgebraElement, GroupElement, Mat};
use crate::par::*;
use crate::spectral::SpectralDiff;
use crate::CoreError;

/// `1/2π`, the normalization in front of the circle cocycle.
pub const KM_PREFACTOR: f64 = 1.0 / (2.0 * PI);

/// Largest tolerated imaginary part of the raw cocycle sum.
pub const REALITY_TOL: f64 = 1e-10;

fn check_len(len: usize) -> Result<(), CoreError> {
    if len < 8 || !len.is_multiple_of(2) {
        return Err(CoreError::InvalidGrid(format!("circle grid needs an even size ≥ 8, got {len}")));
    }
    Ok(())
}

fn same_len(a: usize, b: usize) -> Result<(), CoreError> {
    if a != b {
        return Err(CoreError::GridMismatch(format!("N={a}"), format!("N={b}")));
    }
    Ok(())
}

/// Grid angles `2πk/len`.
pub fn angles(len: usize) -> impl Iterator<Item = f64> {
    (0..len).map(move |k| 2.0 * PI * k as f64 / len as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleAlgebraField<const N: usize> {
    samples: Vec<AlgebraElement<N>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleGroupField<const N: usize> {
    samples: Vec<GroupElement<N>>,
}

impl<const N: usize> CircleAlgebraField<N> {
    pub fn new(samples: Vec<AlgebraElement<N>>) -> Result<Self, CoreError> {
        check_len(samples.len())?;
        Ok(Self { samples })
    }

    pub fn from_fn(len: usize, f: impl Fn(f64) -> AlgebraElement<N>) -> Result<Self, CoreError> {
        Self::new(angles(len).map(f).collect())
    }

    pub fn constant(len: usize, x: AlgebraElement<N>) -> Result<Self, CoreError> {
        Self::from_fn(len, |_| x)
    }

    pub fn zero(len: usize) -> Result<Self, CoreError> {
        Self::constant(len, AlgebraElement::zero())
    }

    /// `Σ_{m=0}^{bandwidth} a_m cos mφ + b_m sin mφ` with coefficients drawn
    /// by [`random_algebra_with`] from ChaCha8 seeded with `seed`, damped
    /// by `amplitude / (1 + m)`.
    pub fn random_band_limited(seed: u64, len: usize, bandwidth: usize, amplitude: f64) -> Result<Self, CoreError> {
        if N < 2 {
            return Err(CoreError::DimensionTooSmall(N));
        }
        if 2 * bandwidth >= len {
            return Err(CoreError::InvalidGrid(format!(
                "bandwidth {bandwidth} is not resolved on {len} samples"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(AlgebraElement<N>, AlgebraElement<N>)> = (0..=bandwidth)
            .map(|m| {
                let w = amplitude / (1.0 + m as f64);
                let a = random_algebra_with::<N, _>(&mut rng).scale(w);
                let b = random_algebra_with::<N, _>(&mut rng).scale(if m == 0 { 0.0 } else { w });
                (a, b)
            })
            .collect();
        Self::from_fn(len, |phi| {
            modes.iter().enumerate().fold(AlgebraElement::zero(), |acc, (m, (a, b))| {
                let mphi = m as f64 * phi;
                acc.add(&a.scale(mphi.cos())).add(&b.scale(mphi.sin()))
            })
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[AlgebraElement<N>] {
        &self.samples
    }

    fn matrices(&self) -> Vec<Mat<N>> {
        self.samples.iter().map(|s| *s.matrix()).collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&AlgebraElement<N>, &AlgebraElement<N>) -> AlgebraElement<N>) -> Result<Self, CoreError> {
        same_len(self.len(), other.len())?;
        Ok(Self { samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { samples: self.samples.iter().map(|a| a.scale(s)).collect() }
    }

    /// Pointwise `[x, y]`.
    pub fn bracket(&self, other: &Self) -> Result<Self, CoreError> {
        self.zip_with(other, |a, b| a.bracket(b))
    }

    pub fn max_distance(&self, other: &Self) -> Result<f64, CoreError> {
        same_len(self.len(), other.len())?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| a.sub(b).norm_max()).fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> String {
        FieldDoc::encode(N, self.samples.iter().map(|s| s.matrix())).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let mats = FieldDoc::from_json(text)?.decode::<N>()?;
        Self::new(mats.into_iter().map(AlgebraElement::new).collect::<Result<_, _>>()?)
    }
}

impl<const N: usize> CircleGroupField<N> {
    pub fn new(samples: Vec<GroupElement<N>>) -> Result<Self, CoreError> {
        check_len(samples.len())?;
        Ok(Self { samples })
    }

    pub fn from_fn(len: usize, f: impl Fn(f64) -> GroupElement<N>) -> Result<Self, CoreError> {
        Self::new(angles(len).map(f).collect())
    }

    pub fn identity(len: usize) -> Result<Self, CoreError> {
        Self::from_fn(len, |_| GroupElement::identity())
    }

    /// Pointwise exponential of an algebra field.
    pub fn exp(z: &CircleAlgebraField<N>) -> Self {
        Self { samples: z.samples.par_iter().map(exponential).collect() }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[GroupElement<N>] {
        &self.samples
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CoreError> {
        same_len(self.len(), other.len())?;
        Ok(Self { samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a.mul(b)).collect() })
    }

    pub fn inverse(&self) -> Self {
        Self { samples: self.samples.iter().map(GroupElement::inverse).collect() }
    }

    pub fn max_distance(&self, other: &Self) -> Result<f64, CoreError> {
        same_len(self.len(), other.len())?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| crate::lie::max_abs(&(a.matrix() - b.matrix())))
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> String {
        FieldDoc::encode(N, self.samples.iter().map(|s| s.matrix())).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let mats = FieldDoc::from_json(text)?.decode::<N>()?;
        Self::new(mats.into_iter().map(GroupElement::new).collect::<Result<_, _>>()?)
    }
}

/// Wire format shared by algebra and group fields: matrix entries
/// row-major within a sample, samples in grid order.
#[derive(Serialize, Deserialize)]
struct FieldDoc {
    n: usize,
    #[serde(rename = "N")]
    len: usize,
    samples: Vec<[f64; 2]>,
}

impl FieldDoc {
    fn encode<'a, const N: usize>(n: usize, mats: impl Iterator<Item = &'a Mat<N>>) -> Self {
        let mut samples = Vec::new();
        let mut len = 0;
        for m in mats {
            len += 1;
            for r in 0..N {
                for c in 0..N {
                    samples.push([m[(r, c)].re, m[(r, c)].im]);
                }
            }
        }
        Self { n, len, samples }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field document serializes")
    }

    fn from_json(text: &str) -> Result<Self, CoreError> {
        serde_json::from_str(text).map_err(|e| CoreError::Serde(e.to_string()))
    }

    fn decode<const N: usize>(&self) -> Result<Vec<Mat<N>>, CoreError> {
        if self.n != N {
            return Err(CoreError::Serde(format!("matrix size {} where {N} was expected", self.n)));
        }
        if self.samples.len() != self.len * N * N {
            return Err(CoreError::Serde(format!(
                "{} entries for {} samples of size {N}",
                self.samples.len(),
                self.len
            )));
        }
        Ok(self
            .samples
            .chunks(N * N)
            .map(|c| Mat::<N>::from_fn(|r, col| Complex64::new(c[r * N + col][0], c[r * N + col][1])))
            .collect())
    }
}

/// Entrywise `d/dφ`.
pub fn spectral_derivative<const N: usize>(x: &CircleAlgebraField<N>) -> CircleAlgebraField<N> {
    let d = SpectralDiff::new(x.len());
    CircleAlgebraField {
        samples: d.matrices(&x.matrices(), 1).into_iter().map(AlgebraElement::from_matrix_unchecked).collect(),
    }
}

fn derivative_mats<const N: usize>(ms: &[Mat<N>]) -> Vec<Mat<N>> {
    SpectralDiff::new(ms.len()).matrices(ms, 1)
}

/// `(2π/L) Σ_k tr(a_k b_k)` summed in index order.
fn circle_integral<const N: usize>(a: &[Mat<N>], b: &[Mat<N>]) -> Complex64 {
    let terms: Vec<Complex64> = a.par_iter().zip(b.par_iter()).map(|(p, q)| (p * q).trace()).collect();
    let s: Complex64 = terms.into_iter().sum();
    s * (2.0 * PI / a.len() as f64)
}

fn km_matrices<const N: usize>(x: &[Mat<N>], y: &[Mat<N>], prefactor: f64) -> Result<f64, CoreError> {
    let v = circle_integral(x, &derivative_mats(y)) * prefactor;
    if v.im.abs() > REALITY_TOL {
        return Err(CoreError::ImaginaryPart(v.im));
    }
    Ok(v.re)
}

/// The cocycle before the reality check, as a complex number.
pub fn km_cocycle_raw<const N: usize>(x: &CircleAlgebraField<N>, y: &CircleAlgebraField<N>) -> Result<Complex64, CoreError> {
    same_len(x.len(), y.len())?;
    Ok(circle_integral(&x.matrices(), &derivative_mats(&y.matrices())) * KM_PREFACTOR)
}

pub fn km_cocycle<const N: usize>(x: &CircleAlgebraField<N>, y: &CircleAlgebraField<N>) -> Result<f64, CoreError> {
    km_cocycle_with(x, y, KM_PREFACTOR)
}

pub fn km_cocycle_with<const N: usize>(x: &CircleAlgebraField<N>, y: &CircleAlgebraField<N>, prefactor: f64) -> Result<f64, CoreError> {
    same_len(x.len(), y.len())?;
    km_matrices(&x.matrices(), &y.matrices(), prefactor)
}

/// Pointwise `f⁻¹ x f`.
pub fn adjoint_transform<const N: usize>(
    x: &CircleAlgebraField<N>,
    f: &CircleGroupField<N>,
) -> Result<CircleAlgebraField<N>, CoreError> {
    same_len(x.len(), f.len())?;
    Ok(CircleAlgebraField {
        samples: x.samples.iter().zip(&f.samples).map(|(x, f)| f.adjoint_action(x)).collect(),
    })
}

/// A path `t ↦ f_t` sampled at `t_j = j/T`, starting at the identity.
#[derive(Clone, Debug)]
pub struct GroupPath<const N: usize> {
    frames: Vec<CircleGroupField<N>>,
}

impl<const N: usize> GroupPath<N> {
    pub fn new(frames: Vec<CircleGroupField<N>>) -> Result<Self, CoreError> {
        if frames.len() < 3 {
            return Err(CoreError::PathTooShort { steps: frames.len().saturating_sub(1), scheme: "a path" });
        }
        let len = frames[0].len();
        for f in &frames[1..] {
            same_len(len, f.len())?;
        }
        let dev = frames[0].max_distance(&CircleGroupField::identity(len)?)?;
        if dev > crate::lie::INVARIANT_TOL {
            return Err(CoreError::PathNotBased(dev));
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[CircleGroupField<N>] {
        &self.frames
    }

    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn grid_len(&self) -> usize {
        self.frames[0].len()
    }

    pub fn endpoint(&self) -> &CircleGroupField<N> {
        &self.frames[self.steps()]
    }
}

/// `f_t = exp(t z)` pointwise.
pub fn exp_path<const N: usize>(z: &CircleAlgebraField<N>, steps: usize) -> Result<GroupPath<N>, CoreError> {
    if steps < 2 {
        return Err(CoreError::PathTooShort { steps, scheme: "exp_path" });
    }
    let frames = (0..=steps)
        .into_par_iter()
        .map(|j| CircleGroupField::exp(&z.scale(j as f64 / steps as f64)))
        .collect();
    GroupPath::new(frames)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    #[default]
    Simpson,
    Trapezoid,
}

/// Finite-difference stencil for `ḟ_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TimeStencil {
    /// Three points, one-sided at `t = 0, 1`.
    Second,
    /// Five points, one-sided near `t = 0, 1`.
    #[default]
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PathOptions {
    pub quadrature: Quadrature,
    pub stencil: TimeStencil,
}

fn time_weights(steps: usize, q: Quadrature) -> Result<Vec<f64>, CoreError> {
    let h = 1.0 / steps as f64;
    match q {
        Quadrature::Trapezoid => Ok((0..=steps).map(|j| if j == 0 || j == steps { h / 2.0 } else { h }).collect()),
        Quadrature::Simpson => {
            if !steps.is_multiple_of(2) {
                return Err(CoreError::PathTooShort { steps, scheme: "Simpson (needs an even step count)" });
            }
            Ok((0..=steps)
                .map(|j| {
                    if j == 0 || j == steps {
                        h / 3.0
                    } else if j % 2 == 1 {
                        4.0 * h / 3.0
                    } else {
                        2.0 * h / 3.0
                    }
                })
                .collect())
        }
    }
}

/// Coefficients `(offset, weight)` of `h · d/dt` at frame `j`.
fn stencil(j: usize, steps: usize, s: TimeStencil) -> Vec<(usize, f64)> {
    let mirror = |pts: &[(usize, f64)]| pts.iter().map(|&(o, w)| (steps - o, -w)).collect::<Vec<_>>();
    match s {
        TimeStencil::Second => {
            let start = [(0, -1.5), (1, 2.0), (2, -0.5)];
            if j == 0 {
                start.to_vec()
            } else if j == steps {
                mirror(&start)
            } else {
                vec![(j - 1, -0.5), (j + 1, 0.5)]
            }
        }
        TimeStencil::Fourth => {
            let c = 1.0 / 12.0;
            let first = [(0, -25.0 * c), (1, 48.0 * c), (2, -36.0 * c), (3, 16.0 * c), (4, -3.0 * c)];
            let second = [(0, -3.0 * c), (1, -10.0 * c), (2, 18.0 * c), (3, -6.0 * c), (4, c)];
            match j {
                0 => first.to_vec(),
                1 => second.to_vec(),
                _ if j == steps => mirror(&first),
                _ if j + 1 == steps => mirror(&second),
                _ => vec![(j - 2, c), (j - 1, -8.0 * c), (j + 1, 8.0 * c), (j + 2, -c)],
            }
        }
    }
}

/// `∫₀¹ ω(f_t⁻¹ḟ_t, f_t⁻¹ z f_t) dt` with `ḟ_t` from finite differences.
pub fn path_coboundary<const N: usize>(
    path: &GroupPath<N>,
    z: &CircleAlgebraField<N>,
    opts: PathOptions,
) -> Result<f64, CoreError> {
    same_len(path.grid_len(), z.len())?;
    let steps = path.steps();
    let needed = match opts.stencil {
        TimeStencil::Second => 2,
        TimeStencil::Fourth => 4,
    };
    if steps < needed {
        return Err(CoreError::PathTooShort { steps, scheme: "the time stencil" });
    }
    let weights = time_weights(steps, opts.quadrature)?;
    let inv_h = steps as f64;
    let len = z.len();
    let values: Vec<f64> = (0..=steps)
        .into_par_iter()
        .map(|j| {
            let f = &path.frames[j];
            let coeffs = stencil(j, steps, opts.stencil);
            let u: Vec<Mat<N>> = (0..len)
                .map(|k| {
                    let dot = coeffs
                        .iter()
                        .fold(Mat::<N>::zeros(), |acc, &(o, w)| acc + path.frames[o].samples[k].matrix() * Complex64::new(w * inv_h, 0.0));
                    f.samples[k].matrix().adjoint() * dot
                })
                .collect();
            let adz: Vec<Mat<N>> = (0..len).map(|k| *f.samples[k].adjoint_action(&z.samples[k]).matrix()).collect();
            km_matrices(&u, &adz, KM_PREFACTOR)
        })
        .collect::<Result<_, _>>()?;
    Ok(values.iter().zip(&weights).map(|(v, w)| v * w).sum())
}

/// `−(1/2π) ∫ tr f₁′f₁⁻¹ z dφ`.
pub fn closed_form_coboundary<const N: usize>(f1: &CircleGroupField<N>, z: &CircleAlgebraField<N>) -> Result<f64, CoreError> {
    same_len(f1.len(), z.len())?;
    let fm: Vec<Mat<N>> = f1.samples.iter().map(|g| *g.matrix()).collect();
    let df = derivative_mats(&fm);
    let mc: Vec<Mat<N>> = df.iter().zip(&fm).map(|(d, f)| d * f.adjoint()).collect();
    let v = circle_integral(&mc, &z.matrices()) * (-KM_PREFACTOR);
    if v.im.abs() > REALITY_TOL {
        return Err(CoreError::ImaginaryPart(v.im));
    }
    Ok(v.re)
}

/// `|ω(Ad_f x, Ad_f y) − ω(x, y) + θ_f([x, y])|`.
pub fn conjugation_identity_residual<const N: usize>(
    f1: &CircleGroupField<N>,
    x: &CircleAlgebraField<N>,
    y: &CircleAlgebraField<N>,
) -> Result<f64, CoreError> {
    let lhs = km_cocycle(&adjoint_transform(x, f1)?, &adjoint_transform(y, f1)?)?;
    let rhs = km_cocycle(x, y)?;
    let theta = closed_form_coboundary(f1, &x.bracket(y)?)?;
    Ok((lhs - rhs + theta).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::i_sigma;

    fn s3(len: usize, f: impl Fn(f64) -> f64) -> CircleAlgebraField<2> {
        CircleAlgebraField::from_fn(len, |p| i_sigma(3).scale(f(p))).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(CircleAlgebraField::<2>::zero(6).is_err());
        assert!(CircleAlgebraField::<2>::zero(9).is_err());
        assert!(CircleAlgebraField::<2>::zero(8).is_ok());
        let a = CircleAlgebraField::<2>::zero(8).unwrap();
        let b = CircleAlgebraField::<2>::zero(10).unwrap();
        assert!(matches!(km_cocycle(&a, &b), Err(CoreError::GridMismatch(_, _))));
    }

    #[test]
    fn sigma3_cocycle_value() {
        let v = km_cocycle(&s3(64, f64::cos), &s3(64, f64::sin)).unwrap();
        assert!((v + 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn stencils_differentiate_polynomials_exactly() {
        for s in [TimeStencil::Second, TimeStencil::Fourth] {
            let degree = if s == TimeStencil::Second { 2 } else { 4 };
            let steps = 10;
            for j in 0..=steps {
                let got: f64 = stencil(j, steps, s)
                    .iter()
                    .map(|&(o, w)| w * (o as f64).powi(degree))
                    .sum();
                let want = degree as f64 * (j as f64).powi(degree - 1);
                assert!((got - want).abs() < 1e-9, "{s:?} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn sigma3_path_and_closed_form() {
        let zt = s3(64, f64::sin);
        let z = s3(64, f64::cos);
        let path = exp_path(&zt, 200).unwrap();
        let p = path_coboundary(&path, &z, PathOptions::default()).unwrap();
        let c = closed_form_coboundary(path.endpoint(), &z).unwrap();
        assert!((p - 1.0).abs() < 1e-10, "{p}");
        assert!((c - 1.0).abs() < 1e-12, "{c}");
    }

    #[test]
    fn path_must_start_at_identity() {
        let g = CircleGroupField::exp(&s3(8, |_| 1.0));
        let e = CircleGroupField::<2>::identity(8).unwrap();
        assert!(matches!(GroupPath::new(vec![g, e.clone(), e]), Err(CoreError::PathNotBased(_))));
        assert!(exp_path(&s3(8, f64::sin), 1).is_err());
    }

    #[test]
    fn simpson_needs_even_steps() {
        let path = exp_path(&s3(8, f64::sin), 5).unwrap();
        let z = s3(8, f64::cos);
        assert!(path_coboundary(&path, &z, PathOptions::default()).is_err());
        let trap = PathOptions { quadrature: Quadrature::Trapezoid, ..Default::default() };
        assert!(path_coboundary(&path, &z, trap).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let x = CircleAlgebraField::<2>::random_band_limited(3, 16, 3, 1.0).unwrap();
        let back = CircleAlgebraField::<2>::from_json(&x.to_json()).unwrap();
        assert_eq!(x, back);
        let g = CircleGroupField::exp(&x);
        assert_eq!(CircleGroupField::<2>::from_json(&g.to_json()).unwrap(), g);
        assert!(CircleAlgebraField::<3>::from_json(&x.to_json()).is_err());
        assert!(CircleGroupField::<2>::from_json(&x.to_json()).is_err());
    }
}
