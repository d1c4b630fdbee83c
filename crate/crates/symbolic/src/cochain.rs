//! Chevalley-Eilenberg coboundary of cochains written as trace expressions.
//!
//! A 1-cochain `λ(A; z)` is an expression in the placeholder `z`; a
//! 2-cochain `θ(A; x, y)` uses `x` and `y`. The module action on the
//! potential is `L_x A = [A, x] + dx`; `ω` and the other arguments are
//! inert.

use std::collections::BTreeMap;

use crate::atom::{Atom, Base, FieldSym};
use crate::expr::SymExpr;
use crate::poly::Poly;
use crate::SymbolicError;

fn field(s: FieldSym) -> Poly {
    Poly::atom(Atom::Field(s))
}

fn commutator(a: &Poly, b: &Poly) -> Poly {
    a.mul(b).sub(&b.mul(a))
}

/// `L_x` applied to a trace expression: the derivative along `[A, x] + dx`
/// in the potential slot.
pub fn lie_derivative(e: &SymExpr, x: FieldSym) -> Result<SymExpr, SymbolicError> {
    let a = Poly::atom(Atom::Pot);
    let dir = commutator(&a, &field(x)).add(&Poly::atom(Atom::DField(x)));
    let p = e.to_poly().derive_along(Base::Pot, &dir);
    Ok(SymExpr::trace(&p, e.domain())?.with_pi_power(e.pi_power()))
}

fn subst(e: &SymExpr, pairs: &[(FieldSym, Poly)]) -> Result<SymExpr, SymbolicError> {
    let map: BTreeMap<Base, Poly> = pairs.iter().map(|(s, p)| (Base::Field(*s), p.clone())).collect();
    e.substitute(&map)
}

fn require(e: &SymExpr, s: FieldSym) -> Result<(), SymbolicError> {
    if e.contains_base(Base::Field(s)) {
        Ok(())
    } else {
        Err(SymbolicError::MissingPlaceholder(s.name()))
    }
}

fn forbid(e: &SymExpr, s: FieldSym) -> Result<(), SymbolicError> {
    if e.contains_base(Base::Field(s)) {
        Err(SymbolicError::Syntax {
            pos: 0,
            msg: format!("'{}' is reserved for coboundary arguments", s.name()),
        })
    } else {
        Ok(())
    }
}

/// Formal coboundary.
///
/// * arity 1: `δλ(A; x, y) = L_x λ(A; y) - L_y λ(A; x) - λ(A; [x, y])`
/// * arity 2: `δθ(A; x, y, z) = L_x θ(y, z) - L_y θ(x, z) + L_z θ(x, y)
///   - θ([x, y], z) + θ([x, z], y) - θ([y, z], x)`
///
/// The zero expression maps to zero for either arity.
pub fn ce_coboundary_sym(e: &SymExpr, arity: usize) -> Result<SymExpr, SymbolicError> {
    let (x, y, z) = (FieldSym::X, FieldSym::Y, FieldSym::Z);
    if !(1..=2).contains(&arity) {
        return Err(SymbolicError::Arity(arity));
    }
    if e.is_zero() {
        return Ok(e.clone());
    }
    let out = match arity {
        1 => {
            require(e, z)?;
            forbid(e, x)?;
            forbid(e, y)?;
            let at = |arg: Poly| subst(e, &[(z, arg)]);
            let lx = lie_derivative(&at(field(y))?, x)?;
            let ly = lie_derivative(&at(field(x))?, y)?;
            let br = at(commutator(&field(x), &field(y)))?;
            lx.sub(&ly)?.sub(&br)?
        }
        _ => {
            require(e, x)?;
            require(e, y)?;
            forbid(e, z)?;
            let at = |a: Poly, b: Poly| subst(e, &[(x, a), (y, b)]);
            let (fx, fy, fz) = (field(x), field(y), field(z));
            let t1 = lie_derivative(&at(fy.clone(), fz.clone())?, x)?;
            let t2 = lie_derivative(&at(fx.clone(), fz.clone())?, y)?;
            let t3 = lie_derivative(&at(fx.clone(), fy.clone())?, z)?;
            let t4 = at(commutator(&fx, &fy), fz.clone())?;
            let t5 = at(commutator(&fx, &fz), fy.clone())?;
            let t6 = at(commutator(&fy, &fz), fx.clone())?;
            t1.sub(&t2)?.add(&t3)?.sub(&t4)?.add(&t5)?.sub(&t6)?
        }
    };
    Ok(out)
}
