//! Numerical side of the cocycle laboratory.
//!
//! * [`lie`]: su(n) and SU(n) as const-generic `n × n` complex matrices.
//! * [`circle`]: fields on S¹, the Kac-Moody 2-cocycle and the path
//!   coboundary with its closed form.
//! * [`ball`]: a spherical product grid on B³, differential forms on it,
//!   the Mickelsson-Faddeev cocycle, its coboundaries and the surface term.
//! * [`crossed`]: the two crossed-module axioms checked on sampled groups.
//!
//! Per-sample work runs on rayon when the `parallel` feature is enabled
//! (the default). Reductions always sum in index order, so results do not
//! depend on the thread count.
//!
//! ```
//! use cocycle_core::circle::{km_cocycle, CircleAlgebraField};
//! use cocycle_core::lie::i_sigma;
//!
//! let x = CircleAlgebraField::from_fn(64, |phi| i_sigma(3).scale(phi.cos())).unwrap();
//! let y = CircleAlgebraField::from_fn(64, |phi| i_sigma(3).scale(phi.sin())).unwrap();
//! assert!((km_cocycle(&x, &y).unwrap() + 1.0).abs() < 1e-12);
//! ```

pub mod ball;
pub mod circle;
pub mod crossed;
pub mod lie;
mod par;
pub mod spectral;

pub use lie::{exponential, random_algebra, su_basis, trace_product, AlgebraElement, GroupElement, Mat};

/// Convergence order `log(e₁/e₂) / log(n₂/n₁)` observed between a coarse
/// resolution `n₁` with error `e₁` and a finer `n₂` with error `e₂`.
pub fn observed_order(coarse: (f64, f64), fine: (f64, f64)) -> f64 {
    (coarse.1 / fine.1).ln() / (fine.0 / coarse.0).ln()
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("matrix is not anti-Hermitian (deviation {0:.3e})")]
    NotAntiHermitian(f64),
    #[error("matrix is not traceless (|tr| = {0:.3e})")]
    NotTraceless(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("determinant differs from 1 by {0:.3e}")]
    DeterminantNotOne(f64),
    #[error("matrix size {0} is below the minimum of 2")]
    DimensionTooSmall(usize),
    #[error("trace of an empty product")]
    EmptyProduct,
    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(String, String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("imaginary part {0:.3e} exceeds tolerance")]
    ImaginaryPart(f64),
    #[error("{steps} time steps are too few for {scheme}")]
    PathTooShort { steps: usize, scheme: &'static str },
    #[error("path does not start at the identity (deviation {0:.3e})")]
    PathNotBased(f64),
    #[error("form degree {0} is not supported here")]
    Degree(usize),
    #[error("boundary condition violated: {0}")]
    BoundaryClass(String),
    #[error("serialization: {0}")]
    Serde(String),
}
