//! The Mickelsson-Faddeev cocycle `θ(A; x, y) = c ∫ tr A[dx, dy]`, the
//! Chevalley-Eilenberg coboundary on cochains of the potential, the three
//! λ-cochains and the surface term left by `δθ` on the ball.
//!
//! Brackets of forms are matrix commutators extended by the wedge, so
//! `[dx, dy] = dx∧dy − dy∧dx` and the cocycle is antisymmetric in `(x, y)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{BallAlgebraField, BallGroupField, BoundaryClass};
use super::form::{integrate_boundary, integrate_volume, PForm};
use crate::CoreError;

/// `i/24π`.
pub fn mf_prefactor() -> Complex64 {
    Complex64::new(0.0, 1.0 / (24.0 * PI))
}

/// `i/24π²`, the normalization more common in the literature.
pub fn mf_prefactor_literature() -> Complex64 {
    Complex64::new(0.0, 1.0 / (24.0 * PI * PI))
}

/// Step of the central difference used for cochains of unknown shape.
pub const LIE_STEP: f64 = 1e-5;

/// `dx∧dy − dy∧dx`.
pub fn graded_bracket_d<const N: usize>(x: &BallAlgebraField<N>, y: &BallAlgebraField<N>) -> Result<PForm<N>, CoreError> {
    x.d().commutator(&y.d())
}

fn mf_raw<const N: usize>(a: &PForm<N>, dx: &PForm<N>, dy: &PForm<N>) -> Result<Complex64, CoreError> {
    integrate_volume(&a.wedge(&dx.commutator(dy)?)?.trace())
}

pub fn mf_cocycle<const N: usize>(a: &PForm<N>, x: &BallAlgebraField<N>, y: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
    mf_cocycle_with(a, x, y, mf_prefactor())
}

pub fn mf_cocycle_with<const N: usize>(
    a: &PForm<N>,
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    prefactor: Complex64,
) -> Result<Complex64, CoreError> {
    if a.degree() != 1 {
        return Err(CoreError::Degree(a.degree()));
    }
    Ok(mf_raw(a, &x.d(), &y.d())? * prefactor)
}

/// `L_x A = [A, x] + dx`.
#[allow(non_snake_case)]
pub fn lie_derivative_A<const N: usize>(a: &PForm<N>, x: &BallAlgebraField<N>) -> Result<PForm<N>, CoreError> {
    if a.grid() != x.grid() {
        return Err(CoreError::GridMismatch(a.grid().describe(), x.grid().describe()));
    }
    a.commutator(&x.form())?.add(&x.d())
}

/// `ω = (df) f⁻¹`.
pub fn maurer_cartan<const N: usize>(f: &BallGroupField<N>) -> PForm<N> {
    f.form().d().and_then(|df| df.wedge(&f.inverse().form())).expect("0-form derivative and product")
}

/// `∫ tr A∧ω∧[ω, z]`.
pub fn lambda_1<const N: usize>(a: &PForm<N>, omega: &PForm<N>, z: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
    integrate_volume(&a.wedge(omega)?.wedge(&omega.commutator(&z.form())?)?.trace())
}

/// `∫ tr [ω, A]∧dz`.
pub fn lambda_2<const N: usize>(a: &PForm<N>, omega: &PForm<N>, z: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
    integrate_volume(&omega.commutator(a)?.wedge(&z.d())?.trace())
}

/// `∫ tr ω∧ω∧ω z`.
pub fn lambda_3<const N: usize>(omega: &PForm<N>, z: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
    integrate_volume(&omega.wedge(omega)?.wedge(omega)?.wedge(&z.form())?.trace())
}

/// How a cochain depends on the potential `A`, which fixes how `L_x`
/// reaches it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dependence {
    Linear,
    Affine,
    Constant,
    /// Differentiated numerically with step [`LIE_STEP`].
    General,
}

type Eval1<const N: usize> = dyn Fn(&PForm<N>, &BallAlgebraField<N>) -> Result<Complex64, CoreError> + Send + Sync;
type Eval2<const N: usize> = dyn Fn(&PForm<N>, &BallAlgebraField<N>, &BallAlgebraField<N>) -> Result<Complex64, CoreError> + Send + Sync;
type Eval3<const N: usize> =
    dyn Fn(&PForm<N>, &BallAlgebraField<N>, &BallAlgebraField<N>, &BallAlgebraField<N>) -> Result<Complex64, CoreError> + Send + Sync;

/// `λ(A; z)`.
#[derive(Clone)]
pub struct Cochain1<const N: usize> {
    eval: Arc<Eval1<N>>,
    pub dependence: Dependence,
}

/// `θ(A; x, y)`.
#[derive(Clone)]
pub struct Cochain2<const N: usize> {
    eval: Arc<Eval2<N>>,
    pub dependence: Dependence,
}

/// `η(A; x, y, z)`, the image of [`ce_coboundary_2`].
#[derive(Clone)]
pub struct Cochain3<const N: usize> {
    eval: Arc<Eval3<N>>,
}

impl<const N: usize> fmt::Debug for Cochain1<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain1({:?})", self.dependence)
    }
}

impl<const N: usize> fmt::Debug for Cochain2<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain2({:?})", self.dependence)
    }
}

impl<const N: usize> Cochain1<N> {
    pub fn new(
        dependence: Dependence,
        eval: impl Fn(&PForm<N>, &BallAlgebraField<N>) -> Result<Complex64, CoreError> + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(eval), dependence }
    }

    pub fn zero() -> Self {
        Self::new(Dependence::Constant, |_, _| Ok(Complex64::new(0.0, 0.0)))
    }

    pub fn eval(&self, a: &PForm<N>, z: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
        (self.eval)(a, z)
    }
}

impl<const N: usize> Cochain2<N> {
    pub fn new(
        dependence: Dependence,
        eval: impl Fn(&PForm<N>, &BallAlgebraField<N>, &BallAlgebraField<N>) -> Result<Complex64, CoreError> + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(eval), dependence }
    }

    pub fn eval(&self, a: &PForm<N>, x: &BallAlgebraField<N>, y: &BallAlgebraField<N>) -> Result<Complex64, CoreError> {
        (self.eval)(a, x, y)
    }
}

impl<const N: usize> Cochain3<N> {
    pub fn eval(
        &self,
        a: &PForm<N>,
        x: &BallAlgebraField<N>,
        y: &BallAlgebraField<N>,
        z: &BallAlgebraField<N>,
    ) -> Result<Complex64, CoreError> {
        (self.eval)(a, x, y, z)
    }
}

/// Derivative of `c(A)` along `v`.
fn along<const N: usize>(
    dependence: Dependence,
    a: &PForm<N>,
    v: &PForm<N>,
    c: impl Fn(&PForm<N>) -> Result<Complex64, CoreError>,
) -> Result<Complex64, CoreError> {
    match dependence {
        Dependence::Linear => c(v),
        Dependence::Affine => Ok(c(&a.add(v)?)? - c(a)?),
        Dependence::Constant => Ok(Complex64::new(0.0, 0.0)),
        Dependence::General => {
            let h = Complex64::new(LIE_STEP, 0.0);
            let plus = c(&a.add(&v.scale(h))?)?;
            let minus = c(&a.sub(&v.scale(h))?)?;
            Ok((plus - minus) / (2.0 * LIE_STEP))
        }
    }
}

/// `δλ(A; x, y) = L_x λ(A; y) − L_y λ(A; x) − λ(A; [x, y])`.
pub fn ce_coboundary_1<const N: usize>(lambda: &Cochain1<N>) -> Cochain2<N> {
    let dep = lambda.dependence;
    let l = lambda.clone();
    let out_dep = match dep {
        Dependence::Constant => Dependence::Constant,
        Dependence::General => Dependence::General,
        _ => Dependence::Affine,
    };
    Cochain2::new(out_dep, move |a, x, y| {
        let lx = along(dep, a, &lie_derivative_A(a, x)?, |b| l.eval(b, y))?;
        let ly = along(dep, a, &lie_derivative_A(a, y)?, |b| l.eval(b, x))?;
        Ok(lx - ly - l.eval(a, &x.bracket(y)?)?)
    })
}

/// `δθ(A; x, y, z) = L_x θ(y, z) − L_y θ(x, z) + L_z θ(x, y)
/// − θ([x, y], z) + θ([x, z], y) − θ([y, z], x)`.
pub fn ce_coboundary_2<const N: usize>(theta: &Cochain2<N>) -> Cochain3<N> {
    let dep = theta.dependence;
    let t = theta.clone();
    Cochain3 {
        eval: Arc::new(move |a, x, y, z| {
            let l1 = along(dep, a, &lie_derivative_A(a, x)?, |b| t.eval(b, y, z))?;
            let l2 = along(dep, a, &lie_derivative_A(a, y)?, |b| t.eval(b, x, z))?;
            let l3 = along(dep, a, &lie_derivative_A(a, z)?, |b| t.eval(b, x, y))?;
            let b1 = t.eval(a, &x.bracket(y)?, z)?;
            let b2 = t.eval(a, &x.bracket(z)?, y)?;
            let b3 = t.eval(a, &y.bracket(z)?, x)?;
            Ok(l1 - l2 + l3 - b1 + b2 - b3)
        }),
    }
}

/// The cocycle as a cochain, linear in `A`.
pub fn mf_cochain<const N: usize>(prefactor: Complex64) -> Cochain2<N> {
    Cochain2::new(Dependence::Linear, move |a, x, y| mf_cocycle_with(a, x, y, prefactor))
}

/// `λ₁`, `λ₂` or `λ₃` (selected by `which` in `1..=3`) for a fixed
/// Maurer-Cartan form.
pub fn lambda_cochain<const N: usize>(which: usize, omega: PForm<N>) -> Result<Cochain1<N>, CoreError> {
    let omega = Arc::new(omega);
    Ok(match which {
        1 => Cochain1::new(Dependence::Linear, move |a, z| lambda_1(a, &omega, z)),
        2 => Cochain1::new(Dependence::Linear, move |a, z| lambda_2(a, &omega, z)),
        3 => Cochain1::new(Dependence::Constant, move |_, z| lambda_3(&omega, z)),
        other => return Err(CoreError::Degree(other)),
    })
}

/// `A ↦ f⁻¹Af + f⁻¹df`.
pub fn gauge_transform<const N: usize>(a: &PForm<N>, f: &BallGroupField<N>) -> Result<PForm<N>, CoreError> {
    let finv_df = f.inverse().form().wedge(&f.form().d()?)?;
    a.conjugate(&f.matrices())?.add(&finv_df)
}

/// The cocycle at `(A^f; x^f, y^f)`, by direct substitution.
pub fn conjugated_cocycle<const N: usize>(
    a: &PForm<N>,
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    f: &BallGroupField<N>,
) -> Result<Complex64, CoreError> {
    conjugated_cocycle_with(a, x, y, f, mf_prefactor())
}

pub fn conjugated_cocycle_with<const N: usize>(
    a: &PForm<N>,
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    f: &BallGroupField<N>,
    prefactor: Complex64,
) -> Result<Complex64, CoreError> {
    mf_cocycle_with(&gauge_transform(a, f)?, &x.adjoint(f)?, &y.adjoint(f)?, prefactor)
}

/// `|θ^f − θ + Σ sᵢ δλᵢ(A; x, y)| / 24π`, with `θ` taken without its
/// prefactor. `signs` are the coefficients `sᵢ`.
pub fn invariance_residual<const N: usize>(
    a: &PForm<N>,
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    f: &BallGroupField<N>,
    signs: [i32; 3],
) -> Result<f64, CoreError> {
    for (name, field) in [("x", x), ("y", y)] {
        if field.class() != BoundaryClass::Loop {
            return Err(CoreError::BoundaryClass(format!("{name} is {:?}, the identity needs loop class", field.class())));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut total = conjugated_cocycle_with(a, x, y, f, one)? - mf_cocycle_with(a, x, y, one)?;
    let omega = maurer_cartan(f);
    for (i, s) in signs.iter().enumerate() {
        let dl = ce_coboundary_1(&lambda_cochain(i + 1, omega.clone())?);
        total += dl.eval(a, x, y)? * (*s as f64);
    }
    Ok(total.norm() / (24.0 * PI))
}

fn cyclic_boundary<const N: usize>(
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    z: &BallAlgebraField<N>,
    middle: f64,
) -> Result<Complex64, CoreError> {
    let (dx, dy, dz) = (x.d(), y.d(), z.d());
    let t1 = x.form().wedge(&dy.commutator(&dz)?)?;
    let t2 = y.form().wedge(&dz.commutator(&dx)?)?.scale(Complex64::new(middle, 0.0));
    let t3 = z.form().wedge(&dx.commutator(&dy)?)?;
    let sigma = t1.add(&t2)?.add(&t3)?.tangential_boundary()?;
    Ok(integrate_boundary(&sigma.trace()) * mf_prefactor())
}

/// `(i/24π) ∫_{S²} tr x[dy,dz] + y[dz,dx] + z[dx,dy]`.
pub fn boundary_term<const N: usize>(
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    z: &BallAlgebraField<N>,
) -> Result<Complex64, CoreError> {
    cyclic_boundary(x, y, z, 1.0)
}

/// The same surface integral with the middle term subtracted.
pub fn boundary_term_printed<const N: usize>(
    x: &BallAlgebraField<N>,
    y: &BallAlgebraField<N>,
    z: &BallAlgebraField<N>,
) -> Result<Complex64, CoreError> {
    cyclic_boundary(x, y, z, -1.0)
}
