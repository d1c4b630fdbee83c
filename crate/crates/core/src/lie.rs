//! su(n) and SU(n) as fixed-size complex matrices.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CoreError;

pub type Mat<const N: usize> = SMatrix<Complex64, N, N>;

/// Tolerance for the defining invariants of algebra and group elements.
pub const INVARIANT_TOL: f64 = 1e-12;

fn dynamic<const N: usize>(m: &Mat<N>) -> DMatrix<Complex64> {
    DMatrix::from_iterator(N, N, m.iter().copied())
}

pub fn max_abs<const N: usize>(m: &Mat<N>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// An element of su(n): anti-Hermitian and traceless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement<const N: usize>(Mat<N>);

/// An element of SU(n): unitary with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement<const N: usize>(Mat<N>);

impl<const N: usize> AlgebraElement<N> {
    /// Validate both invariants, scaled by the size of the entries.
    pub fn new(m: Mat<N>) -> Result<Self, CoreError> {
        let scale = max_abs(&m).max(1.0);
        let herm = max_abs(&(m + m.adjoint()));
        if herm > INVARIANT_TOL * scale {
            return Err(CoreError::NotAntiHermitian(herm));
        }
        let tr = m.trace().norm();
        if tr > INVARIANT_TOL * scale {
            return Err(CoreError::NotTraceless(tr));
        }
        Ok(Self(m))
    }

    /// Wrap a matrix produced by an operation that preserves su(n) up to
    /// rounding (brackets, sums, conjugation, entrywise derivatives).
    pub fn from_matrix_unchecked(m: Mat<N>) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self(Mat::<N>::zeros())
    }

    pub fn matrix(&self) -> &Mat<N> {
        &self.0
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self(self.0 * other.0 - other.0 * self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0 - other.0)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        max_abs(&self.0)
    }
}

impl<const N: usize> GroupElement<N> {
    pub fn new(m: Mat<N>) -> Result<Self, CoreError> {
        let dev = max_abs(&(m * m.adjoint() - Mat::<N>::identity()));
        if dev > INVARIANT_TOL {
            return Err(CoreError::NotUnitary(dev));
        }
        let det = (dynamic(&m).determinant() - Complex64::new(1.0, 0.0)).norm();
        if det > INVARIANT_TOL {
            return Err(CoreError::DeterminantNotOne(det));
        }
        Ok(Self(m))
    }

    pub fn from_matrix_unchecked(m: Mat<N>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Mat::<N>::identity())
    }

    pub fn matrix(&self) -> &Mat<N> {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// The inverse, which for a unitary matrix is its adjoint.
    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Right adjoint action `f⁻¹ x f`.
    pub fn adjoint_action(&self, x: &AlgebraElement<N>) -> AlgebraElement<N> {
        AlgebraElement(self.0.adjoint() * x.0 * self.0)
    }
}

/// `exp(x)` through the eigendecomposition of the Hermitian matrix `-i x`:
/// `exp(x) = V diag(e^{iλ}) V†`.
pub fn exponential<const N: usize>(x: &AlgebraElement<N>) -> GroupElement<N> {
    let i = Complex64::new(0.0, 1.0);
    let h: Mat<N> = x.0 * (-i);
    let h = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = dynamic(&h).symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (i * l).exp()));
    let g = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    GroupElement(Mat::<N>::from_iterator(g.iter().copied()))
}

/// Generalized Gell-Mann basis multiplied by `i`: `N² - 1` anti-Hermitian
/// traceless matrices, orthonormal for `⟨a, b⟩ = ½ tr(a† b)`. For `N = 2`
/// this is `iσ₁, iσ₂, iσ₃`.
pub fn su_basis<const N: usize>() -> Vec<AlgebraElement<N>> {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(N * N - 1);
    for a in 0..N {
        for b in a + 1..N {
            let mut s = Mat::<N>::zeros();
            s[(a, b)] = one;
            s[(b, a)] = one;
            out.push(AlgebraElement(s * i));
            let mut t = Mat::<N>::zeros();
            t[(a, b)] = -i;
            t[(b, a)] = i;
            out.push(AlgebraElement(t * i));
        }
    }
    for l in 1..N {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = Mat::<N>::zeros();
        for k in 0..l {
            d[(k, k)] = Complex64::new(norm, 0.0);
        }
        d[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(AlgebraElement(d * i));
    }
    out
}

/// Pauli matrices times `i`, indexed 1..=3.
pub fn i_sigma(k: usize) -> AlgebraElement<2> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let m = match k {
        1 => Mat::<2>::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)),
        2 => Mat::<2>::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)),
        3 => Mat::<2>::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    };
    AlgebraElement(m)
}

/// Draw an element with coefficients uniform in `[-1, 1]` on
/// [`su_basis`], from a caller-owned generator.
pub fn random_algebra_with<const N: usize, R: Rng>(rng: &mut R) -> AlgebraElement<N> {
    let mut m = Mat::<N>::zeros();
    for b in su_basis::<N>() {
        let c: f64 = rng.random_range(-1.0..=1.0);
        m += b.0 * Complex64::new(c, 0.0);
    }
    AlgebraElement(m)
}

/// Seeded draw: ChaCha8 seeded with `seed_from_u64(seed)`, then
/// [`random_algebra_with`].
pub fn random_algebra<const N: usize>(seed: u64) -> Result<AlgebraElement<N>, CoreError> {
    if N < 2 {
        return Err(CoreError::DimensionTooSmall(N));
    }
    Ok(random_algebra_with(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Anything that is a square matrix of the right size.
pub trait AsMatrix<const N: usize> {
    fn as_matrix(&self) -> &Mat<N>;
}

impl<const N: usize> AsMatrix<N> for AlgebraElement<N> {
    fn as_matrix(&self) -> &Mat<N> {
        &self.0
    }
}

impl<const N: usize> AsMatrix<N> for GroupElement<N> {
    fn as_matrix(&self) -> &Mat<N> {
        &self.0
    }
}

impl<const N: usize> AsMatrix<N> for Mat<N> {
    fn as_matrix(&self) -> &Mat<N> {
        self
    }
}

/// `tr(m₁ m₂ … m_k)`.
pub fn trace_product<const N: usize, M: AsMatrix<N>>(ms: &[M]) -> Result<Complex64, CoreError> {
    let (first, rest) = ms.split_first().ok_or(CoreError::EmptyProduct)?;
    let p = rest.iter().fold(*first.as_matrix(), |acc, m| acc * m.as_matrix());
    Ok(p.trace())
}
