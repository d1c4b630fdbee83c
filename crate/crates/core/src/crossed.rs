//! Crossed modules `δ: H → G` with a right action `h ↦ h^g` of `G` on `H`,
//! checked on seeded samples against
//!
//! * equivariance: `δ(h^g) = g⁻¹ δ(h) g`,
//! * Peiffer: `h^{δ(h′)} = h′⁻¹ h h′`,
//!
//! plus the homomorphism conditions that make the pair a crossed module in
//! the first place. Samples are drawn sequentially from one ChaCha8 stream
//! and evaluated in parallel; the maximum is order independent.

use crate::circle::{CircleAlgebraField, CircleGroupField};
use crate::lie::{exponential, i_sigma, max_abs, random_algebra_with, GroupElement, Mat};
use crate::par::*;
use crate::CoreError;
use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const AXIOM_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 200;

/// A group element with the operations the checker needs.
pub trait Element: Clone + Send + Sync {
    fn mul(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Max-norm distance of the underlying matrices.
    fn distance(&self, other: &Self) -> f64;
}

impl<const N: usize> Element for GroupElement<N> {
    fn mul(&self, other: &Self) -> Self {
        GroupElement::mul(self, other)
    }

    fn inverse(&self) -> Self {
        GroupElement::inverse(self)
    }

    fn distance(&self, other: &Self) -> f64 {
        max_abs(&(self.matrix() - other.matrix()))
    }
}

/// A unitary matrix without the determinant constraint.
impl<const N: usize> Element for Mat<N> {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inverse(&self) -> Self {
        self.adjoint()
    }

    fn distance(&self, other: &Self) -> f64 {
        max_abs(&(self - other))
    }
}

impl Element for Matrix3<f64> {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inverse(&self) -> Self {
        self.transpose()
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).amax()
    }
}

impl<const N: usize> Element for CircleGroupField<N> {
    fn mul(&self, other: &Self) -> Self {
        CircleGroupField::mul(self, other).expect("fields on the same circle grid")
    }

    fn inverse(&self) -> Self {
        CircleGroupField::inverse(self)
    }

    fn distance(&self, other: &Self) -> f64 {
        self.max_distance(other).unwrap_or(f64::INFINITY)
    }
}

pub trait CrossedModule: Send + Sync {
    type H: Element;
    type G: Element;

    fn name(&self) -> String;
    fn delta(&self, h: &Self::H) -> Self::G;
    /// The right action `h^g`.
    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H;
    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H;
    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G;

    /// Membership test for `H` inside its ambient type, used to confirm that
    /// sampled products stay in `H`.
    fn in_h(&self, _h: &Self::H) -> Result<(), CoreError> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Peiffer,
    Equivariance,
    Homomorphism,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Peiffer => "peiffer",
            Axiom::Equivariance => "equivariance",
            Axiom::Homomorphism => "homomorphism",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub instance: String,
    pub axiom: Axiom,
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

impl AxiomReport {
    fn new(instance: String, axiom: Axiom, deviations: Vec<f64>) -> Self {
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        AxiomReport { instance, axiom, samples: deviations.len(), max_deviation, pass: max_deviation <= AXIOM_TOL }
    }
}

fn closed<C: CrossedModule + ?Sized>(c: &C, hs: &[C::H]) -> Result<(), CoreError> {
    for h in hs {
        c.in_h(h)?;
    }
    for pair in hs.windows(2) {
        c.in_h(&pair[0].mul(&pair[1]))?;
        c.in_h(&pair[0].inverse())?;
    }
    Ok(())
}

/// `max ‖h^{δ(h′)} − h′⁻¹ h h′‖` over `samples` pairs.
pub fn check_peiffer<C: CrossedModule + ?Sized>(c: &C, samples: usize, seed: u64) -> Result<AxiomReport, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(C::H, C::H)> = (0..samples).map(|_| (c.sample_h(&mut rng), c.sample_h(&mut rng))).collect();
    let hs: Vec<C::H> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    closed(c, &hs)?;
    let dev: Vec<f64> = pairs
        .par_iter()
        .map(|(h, hp)| c.act(&c.delta(hp), h).distance(&hp.inverse().mul(h).mul(hp)))
        .collect();
    Ok(AxiomReport::new(c.name(), Axiom::Peiffer, dev))
}

/// `max ‖δ(h^g) − g⁻¹ δ(h) g‖` over `samples` pairs.
pub fn check_equivariance<C: CrossedModule + ?Sized>(c: &C, samples: usize, seed: u64) -> Result<AxiomReport, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(C::G, C::H)> = (0..samples).map(|_| (c.sample_g(&mut rng), c.sample_h(&mut rng))).collect();
    let hs: Vec<C::H> = pairs.iter().map(|(_, h)| h.clone()).collect();
    closed(c, &hs)?;
    let dev: Vec<f64> = pairs
        .par_iter()
        .map(|(g, h)| c.delta(&c.act(g, h)).distance(&g.inverse().mul(&c.delta(h)).mul(g)))
        .collect();
    Ok(AxiomReport::new(c.name(), Axiom::Equivariance, dev))
}

/// Largest failure among `δ(h₁h₂) = δ(h₁)δ(h₂)`, `(h₁h₂)^g = h₁^g h₂^g`
/// and `h^{g₁g₂} = (h^{g₁})^{g₂}`.
pub fn check_homomorphism<C: CrossedModule + ?Sized>(c: &C, samples: usize, seed: u64) -> Result<AxiomReport, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..samples)
        .map(|_| (c.sample_h(&mut rng), c.sample_h(&mut rng), c.sample_g(&mut rng), c.sample_g(&mut rng)))
        .collect();
    let hs: Vec<C::H> = draws.iter().flat_map(|(a, b, _, _)| [a.clone(), b.clone()]).collect();
    closed(c, &hs)?;
    let dev: Vec<f64> = draws
        .par_iter()
        .map(|(h1, h2, g1, g2)| {
            let h12 = h1.mul(h2);
            let delta = c.delta(&h12).distance(&c.delta(h1).mul(&c.delta(h2)));
            let in_h = c.act(g1, &h12).distance(&c.act(g1, h1).mul(&c.act(g1, h2)));
            let in_g = c.act(&g1.mul(g2), h1).distance(&c.act(g2, &c.act(g1, h1)));
            delta.max(in_h).max(in_g)
        })
        .collect();
    Ok(AxiomReport::new(c.name(), Axiom::Homomorphism, dev))
}

/// Object-safe view of a [`CrossedModule`], so instances with different
/// element types fit in one list.
pub trait AxiomCheck: Send + Sync {
    fn name(&self) -> String;
    fn check(&self, axiom: Axiom, samples: usize, seed: u64) -> Result<AxiomReport, CoreError>;

    /// Peiffer and equivariance, in that order.
    fn check_both(&self, samples: usize, seed: u64) -> Result<[AxiomReport; 2], CoreError> {
        Ok([self.check(Axiom::Peiffer, samples, seed)?, self.check(Axiom::Equivariance, samples, seed)?])
    }
}

impl<C: CrossedModule> AxiomCheck for C {
    fn name(&self) -> String {
        CrossedModule::name(self)
    }

    fn check(&self, axiom: Axiom, samples: usize, seed: u64) -> Result<AxiomReport, CoreError> {
        match axiom {
            Axiom::Peiffer => check_peiffer(self, samples, seed),
            Axiom::Equivariance => check_equivariance(self, samples, seed),
            Axiom::Homomorphism => check_homomorphism(self, samples, seed),
        }
    }
}

fn random_su<const N: usize>(rng: &mut ChaCha8Rng) -> GroupElement<N> {
    exponential(&random_algebra_with::<N, _>(rng).scale(2.0))
}

fn conjugate<const N: usize>(g: &Mat<N>, h: &Mat<N>) -> Mat<N> {
    g.adjoint() * h * g
}

/// `H = G = SU(n)`, `δ = id`, `h^g = g⁻¹hg`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityConjugation<const N: usize>;

impl<const N: usize> CrossedModule for IdentityConjugation<N> {
    type H = GroupElement<N>;
    type G = GroupElement<N>;

    fn name(&self) -> String {
        format!("su{N}-identity-conjugation")
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        *h
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        GroupElement::from_matrix_unchecked(conjugate(g.matrix(), h.matrix()))
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        random_su(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        random_su(rng)
    }
}

/// The normal subgroup `SU(n) ⊴ U(n)` with `δ` the inclusion.
#[derive(Clone, Copy, Debug, Default)]
pub struct NormalInclusion<const N: usize>;

impl<const N: usize> CrossedModule for NormalInclusion<N> {
    type H = GroupElement<N>;
    type G = Mat<N>;

    fn name(&self) -> String {
        format!("su{N}-in-u{N}-inclusion")
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        *h.matrix()
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        GroupElement::from_matrix_unchecked(conjugate(g, h.matrix()))
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        random_su(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        let phase: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        random_su::<N>(rng).matrix() * Complex64::from_polar(1.0, phase)
    }

    fn in_h(&self, h: &Self::H) -> Result<(), CoreError> {
        GroupElement::new(*h.matrix()).map(|_| ())
    }
}

/// `SU(2) → SO(3) = Aut(SU(2))` with `δ = Ad` and a rotation acting on
/// `a₀ + a·iσ` through its transpose on the vector part `a`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AdjointSu2;

impl AdjointSu2 {
    fn vector(x: &Mat<2>) -> [f64; 3] {
        std::array::from_fn(|b| -0.5 * (i_sigma(b + 1).matrix() * x).trace().re)
    }
}

impl CrossedModule for AdjointSu2 {
    type H = GroupElement<2>;
    type G = Matrix3<f64>;

    fn name(&self) -> String {
        "su2-adjoint-so3".into()
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        let hm = h.matrix();
        Matrix3::from_fn(|b, a| Self::vector(&(hm * i_sigma(a + 1).matrix() * hm.adjoint()))[b])
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        let hm = h.matrix();
        let a0 = 0.5 * hm.trace().re;
        let v = Self::vector(hm);
        let w = g.transpose() * nalgebra::Vector3::new(v[0], v[1], v[2]);
        let m = (0..3).fold(Mat::<2>::identity() * Complex64::new(a0, 0.0), |m, b| {
            m + i_sigma(b + 1).matrix() * Complex64::new(w[b], 0.0)
        });
        GroupElement::from_matrix_unchecked(m)
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        random_su(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        self.delta(&random_su(rng))
    }
}

/// Circle mapping groups: `H` the based loops `f(0) = 1`, which form the
/// kernel of restriction to the base point, `G` all maps `S¹ → SU(n)`,
/// `δ` the inclusion and pointwise conjugation.
#[derive(Clone, Copy, Debug)]
pub struct LoopInclusion<const N: usize> {
    pub len: usize,
    pub bandwidth: usize,
}

impl<const N: usize> Default for LoopInclusion<N> {
    fn default() -> Self {
        LoopInclusion { len: 32, bandwidth: 4 }
    }
}

impl<const N: usize> LoopInclusion<N> {
    fn algebra(&self, rng: &mut ChaCha8Rng) -> CircleAlgebraField<N> {
        CircleAlgebraField::random_band_limited(rng.random(), self.len, self.bandwidth, 1.0)
            .expect("band limit checked at construction")
    }
}

impl<const N: usize> CrossedModule for LoopInclusion<N> {
    type H = CircleGroupField<N>;
    type G = CircleGroupField<N>;

    fn name(&self) -> String {
        format!("circle-su{N}-loop-inclusion")
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        h.clone()
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        g.inverse().mul(h).and_then(|p| p.mul(g)).expect("fields on the same circle grid")
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        let x = self.algebra(rng);
        let base = CircleAlgebraField::constant(self.len, x.samples()[0].scale(-1.0)).expect("same grid");
        CircleGroupField::exp(&x.add(&base).expect("same grid"))
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        CircleGroupField::exp(&self.algebra(rng))
    }

    fn in_h(&self, h: &Self::H) -> Result<(), CoreError> {
        let dev = max_abs(&(h.samples()[0].matrix() - Mat::<N>::identity()));
        if dev > AXIOM_TOL {
            return Err(CoreError::PathNotBased(dev));
        }
        Ok(())
    }
}

/// Any instance with its action replaced by `h^g := h`. A crossed module
/// only when `H` is abelian, so the checks must reject it otherwise.
#[derive(Clone, Copy, Debug)]
pub struct TrivialAction<C>(pub C);

impl<C: CrossedModule> CrossedModule for TrivialAction<C> {
    type H = C::H;
    type G = C::G;

    fn name(&self) -> String {
        format!("{}+trivial-action", self.0.name())
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        self.0.delta(h)
    }

    fn act(&self, _g: &Self::G, h: &Self::H) -> Self::H {
        h.clone()
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        self.0.sample_h(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        self.0.sample_g(rng)
    }

    fn in_h(&self, h: &Self::H) -> Result<(), CoreError> {
        self.0.in_h(h)
    }
}

pub fn builtin_instances() -> Vec<Box<dyn AxiomCheck>> {
    vec![
        Box::new(IdentityConjugation::<2>),
        Box::new(NormalInclusion::<3>),
        Box::new(AdjointSu2),
        Box::new(LoopInclusion::<2>::default()),
    ]
}

/// The builtins with the action corrupted, each of which must fail.
pub fn mutated_instances() -> Vec<Box<dyn AxiomCheck>> {
    vec![
        Box::new(TrivialAction(IdentityConjugation::<2>)),
        Box::new(TrivialAction(NormalInclusion::<3>)),
        Box::new(TrivialAction(AdjointSu2)),
        Box::new(TrivialAction(LoopInclusion::<2>::default())),
    ]
}
