//! Exact engine for Lie-algebra-valued differential forms under an
//! integrated trace.
//!
//! Expressions are sums of cyclic trace words in graded atoms (`A`, `dA`,
//! `ω`, 0-form fields and their differentials, the conjugator `f` and its
//! inverse) with Gaussian-rational coefficients. The kernel canonicalizes
//! words under cyclic rotation with Koszul signs, differentiates by the
//! graded Leibniz rule, and decides equality modulo Stokes-exact terms by
//! exact linear algebra.
//!
//! ```
//! use cocycle_symbolic::parse;
//!
//! let e = parse("∫ tr A [dx,dy]").unwrap();
//! assert_eq!(e.len(), 2);
//! ```

pub mod atom;
pub mod certificate;
pub mod cochain;
pub mod coeff;
pub mod conjugation;
pub mod expr;
mod par;
pub mod parse;
pub mod path;
pub mod poly;
pub mod stokes;
pub mod word;

pub use atom::{Atom, Base, FieldSym};
pub use certificate::{Certificate, DecompositionEntry};
pub use cochain::ce_coboundary_sym;
pub use coeff::GaussQ;
pub use conjugation::{derive_boundary_term, verify_conjugation_invariance, ConjugationReport, BoundaryReport, Pairing};
pub use expr::{Domain, SymExpr};
pub use parse::{parse, Parser};
pub use path::{path_coboundary_sym, PathCertificate};
pub use poly::{BracketConvention, Poly};
pub use stokes::{equal_mod_exact, stokes_reduce, StokesOptions, StokesResult};
pub use word::TraceWord;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol '{sym}' at position {pos}")]
    UnknownSymbol { pos: usize, sym: char },
    #[error("words of degree {0} and {1} cannot share an expression")]
    MixedDegree(u32, u32),
    #[error("domain mismatch: {0:?} vs {1:?}")]
    DomainMismatch(Domain, Domain),
    #[error("expressions carry different powers of π")]
    PrefactorMismatch,
    #[error("form degree {0} exceeds the supported maximum")]
    DegreeOverflow(u32),
    #[error("expression already contains conjugator atoms")]
    AlreadyConjugated,
    #[error("word length bound {bound} exceeded (needed {needed})")]
    LengthBound { needed: usize, bound: usize },
    #[error("coboundary of arity {0} is not supported")]
    Arity(usize),
    #[error("cochain does not contain the placeholder argument '{0}'")]
    MissingPlaceholder(char),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}
