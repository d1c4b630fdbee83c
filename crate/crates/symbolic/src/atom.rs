//! Graded atoms and the global atom order.

use std::fmt;

/// Names available for Lie-algebra-valued 0-form fields, in declaration order.
pub const FIELD_NAMES: [char; 5] = ['x', 'y', 'z', 'u', 'v'];

/// A 0-form field symbol, identified by its index into [`FIELD_NAMES`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSym(u8);

impl FieldSym {
    pub const X: FieldSym = FieldSym(0);
    pub const Y: FieldSym = FieldSym(1);
    pub const Z: FieldSym = FieldSym(2);
    pub const U: FieldSym = FieldSym(3);
    pub const V: FieldSym = FieldSym(4);

    pub fn from_char(c: char) -> Option<Self> {
        FIELD_NAMES
            .iter()
            .position(|&n| n == c)
            .map(|i| FieldSym(i as u8))
    }

    pub fn name(self) -> char {
        FIELD_NAMES[self.0 as usize]
    }
}

/// The base symbol an atom is built on, ignoring exterior derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Pot,
    Field(FieldSym),
    Conj,
    ConjInv,
}

/// A generator of the graded word algebra.
///
/// The derived `Ord` (declaration order, then field index) is the global atom
/// order used to pick canonical cyclic rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Background potential `A` (degree 1).
    Pot,
    /// `dA` (degree 2).
    DPot,
    /// Right-invariant Maurer-Cartan form `ω = df f⁻¹` (degree 1).
    Omega,
    /// A 0-form field.
    Field(FieldSym),
    /// Exterior derivative of a 0-form field (degree 1).
    DField(FieldSym),
    /// Group-valued conjugator `f` (degree 0).
    Conj,
    /// Its inverse `f⁻¹` (degree 0).
    ConjInv,
}

impl Atom {
    pub fn degree(self) -> u32 {
        match self {
            Atom::Pot | Atom::Omega | Atom::DField(_) => 1,
            Atom::DPot => 2,
            Atom::Field(_) | Atom::Conj | Atom::ConjInv => 0,
        }
    }

    /// Base symbol, or `None` for ω, whose count changes under `d`.
    pub fn base(self) -> Option<Base> {
        match self {
            Atom::Pot | Atom::DPot => Some(Base::Pot),
            Atom::Field(s) | Atom::DField(s) => Some(Base::Field(s)),
            Atom::Conj => Some(Base::Conj),
            Atom::ConjInv => Some(Base::ConjInv),
            Atom::Omega => None,
        }
    }

    pub fn is_derived(self) -> bool {
        matches!(self, Atom::DPot | Atom::DField(_))
    }
}

impl Base {
    pub fn raw(self) -> Atom {
        match self {
            Base::Pot => Atom::Pot,
            Base::Field(s) => Atom::Field(s),
            Base::Conj => Atom::Conj,
            Base::ConjInv => Atom::ConjInv,
        }
    }

    /// The derived atom, when `d` of the base is itself an atom.
    pub fn derived(self) -> Option<Atom> {
        match self {
            Base::Pot => Some(Atom::DPot),
            Base::Field(s) => Some(Atom::DField(s)),
            Base::Conj | Base::ConjInv => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pot => write!(f, "A"),
            Atom::DPot => write!(f, "dA"),
            Atom::Omega => write!(f, "ω"),
            Atom::Field(s) => write!(f, "{}", s.name()),
            Atom::DField(s) => write!(f, "d{}", s.name()),
            Atom::Conj => write!(f, "f"),
            Atom::ConjInv => write!(f, "f⁻¹"),
        }
    }
}
