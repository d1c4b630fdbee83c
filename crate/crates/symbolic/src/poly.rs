//! Noncommutative graded polynomials: linear combinations of atom words
//! before any trace is taken.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, Base};
use crate::coeff::GaussQ;

pub type Word = Vec<Atom>;

/// How the commutator sugar `[a, b]` expands for form-valued arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketConvention {
    /// `[a, b] = ab - ba` regardless of form degree.
    MatrixCommutator,
    /// `[a, b] = ab - (-1)^{|a||b|} ba`.
    GradedCommutator,
}

impl BracketConvention {
    pub const ALL: [BracketConvention; 2] = [
        BracketConvention::MatrixCommutator,
        BracketConvention::GradedCommutator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BracketConvention::MatrixCommutator => "matrix-commutator",
            BracketConvention::GradedCommutator => "graded-commutator",
        }
    }
}

pub fn word_degree(w: &[Atom]) -> u32 {
    w.iter().map(|a| a.degree()).sum()
}

/// A finite sum of words with Gaussian-rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Word, GaussQ>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: GaussQ) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn one() -> Self {
        Self::scalar(GaussQ::one())
    }

    pub fn atom(a: Atom) -> Self {
        Self::word(vec![a])
    }

    pub fn word(w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &GaussQ::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &GaussQ)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degree shared by all words, or `None` when empty or inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// True when the polynomial is a pure scalar (only the empty word).
    pub fn as_scalar(&self) -> Option<GaussQ> {
        match self.terms.len() {
            0 => Some(GaussQ::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: &GaussQ) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&GaussQ::from_int(-1))
    }

    pub fn scale(&self, c: &GaussQ) -> Poly {
        let mut out = Poly::zero();
        for (w, k) in &self.terms {
            out.add_term(w.clone(), &(k * c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// The bracket `[self, other]` under the given convention.
    pub fn bracket(&self, other: &Poly, conv: BracketConvention) -> Poly {
        let mut out = Poly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1 * c2;
                let mut ab = w1.clone();
                ab.extend_from_slice(w2);
                out.add_term(ab, &c);
                let mut ba = w2.clone();
                ba.extend_from_slice(w1);
                let odd = word_degree(w1) * word_degree(w2) % 2 == 1;
                let sign = match conv {
                    BracketConvention::GradedCommutator if odd => 1,
                    _ => -1,
                };
                out.add_term(ba, &(&c * &GaussQ::from_int(sign)));
            }
        }
        out
    }

    /// Exterior derivative by the graded Leibniz rule, with
    /// `d(dx) = 0`, `dω = ω ω`, `df = ω f` and `d(f⁻¹) = -f⁻¹ ω`.
    pub fn differentiate(&self) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            let mut prefix_degree = 0;
            for (i, a) in w.iter().enumerate() {
                let sign = if prefix_degree % 2 == 0 { 1 } else { -1 };
                let da = d_atom(*a);
                if !da.is_zero() {
                    let left = Poly::word(w[..i].to_vec());
                    let right = Poly::word(w[i + 1..].to_vec());
                    let piece = left.mul(&da).mul(&right);
                    out = out.add(&piece.scale(&(c * &GaussQ::from_int(sign))));
                }
                prefix_degree += a.degree();
            }
        }
        out
    }

    /// Simultaneous substitution of base symbols. Raw atoms are replaced by the
    /// image and derived atoms by its derivative; unmapped atoms are kept.
    pub fn substitute(&self, map: &BTreeMap<Base, Poly>) -> Poly {
        let derived: BTreeMap<Base, Poly> = map
            .iter()
            .map(|(b, p)| (*b, p.differentiate()))
            .collect();
        let image = |a: Atom| -> Poly {
            match a.base() {
                Some(b) if map.contains_key(&b) => {
                    if a.is_derived() {
                        derived[&b].clone()
                    } else {
                        map[&b].clone()
                    }
                }
                _ => Poly::atom(a),
            }
        };
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            let mut acc = Poly::scalar(c.clone());
            for a in w {
                acc = acc.mul(&image(*a));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Directional derivative along `dir` in the slot of `base`: each
    /// occurrence is replaced in turn (raw by `dir`, derived by `d dir`).
    pub fn derive_along(&self, base: Base, dir: &Poly) -> Poly {
        let ddir = dir.differentiate();
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            for (i, a) in w.iter().enumerate() {
                if a.base() != Some(base) {
                    continue;
                }
                let rep = if a.is_derived() { &ddir } else { dir };
                let left = Poly::word(w[..i].to_vec());
                let right = Poly::word(w[i + 1..].to_vec());
                out = out.add(&left.mul(rep).mul(&right).scale(c));
            }
        }
        out
    }

    /// Drop every word containing an atom with the given base.
    pub fn without_base(&self, base: Base) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            if !w.iter().any(|a| a.base() == Some(base)) {
                out.add_term(w.clone(), c);
            }
        }
        out
    }

    /// Keep only words containing an atom with the given base.
    pub fn with_base(&self, base: Base) -> Poly {
        self.sub(&self.without_base(base))
    }
}

fn d_atom(a: Atom) -> Poly {
    match a {
        Atom::Pot => Poly::atom(Atom::DPot),
        Atom::Field(s) => Poly::atom(Atom::DField(s)),
        Atom::DPot | Atom::DField(_) => Poly::zero(),
        Atom::Omega => Poly::word(vec![Atom::Omega, Atom::Omega]),
        Atom::Conj => Poly::word(vec![Atom::Omega, Atom::Conj]),
        Atom::ConjInv => Poly::word(vec![Atom::ConjInv, Atom::Omega]).neg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::FieldSym;

    fn x() -> Poly {
        Poly::atom(Atom::Field(FieldSym::X))
    }

    #[test]
    fn d_squared_vanishes_on_basic_words() {
        let w = Poly::word(vec![Atom::Pot, Atom::Omega, Atom::Field(FieldSym::X), Atom::Conj]);
        assert!(w.differentiate().differentiate().is_zero());
        let finv = Poly::atom(Atom::ConjInv);
        let conj = finv.mul(&x()).mul(&Poly::atom(Atom::Conj));
        assert!(conj.differentiate().differentiate().is_zero());
    }

    #[test]
    fn d_of_conjugated_field() {
        // d(f⁻¹ x f) = -f⁻¹ ω x f + f⁻¹ dx f + f⁻¹ x ω f
        let finv = Poly::atom(Atom::ConjInv);
        let f = Poly::atom(Atom::Conj);
        let om = Poly::atom(Atom::Omega);
        let dx = Poly::atom(Atom::DField(FieldSym::X));
        let lhs = finv.mul(&x()).mul(&f).differentiate();
        let rhs = finv
            .mul(&om)
            .mul(&x())
            .mul(&f)
            .neg()
            .add(&finv.mul(&dx).mul(&f))
            .add(&finv.mul(&x()).mul(&om).mul(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_conventions_differ_on_odd_pairs() {
        let dx = Poly::atom(Atom::DField(FieldSym::X));
        let dy = Poly::atom(Atom::DField(FieldSym::Y));
        let m = dx.bracket(&dy, BracketConvention::MatrixCommutator);
        let g = dx.bracket(&dy, BracketConvention::GradedCommutator);
        assert_eq!(m.len(), 2);
        assert_eq!(g.len(), 2);
        assert_ne!(m, g);
        // 0-form arguments agree.
        let y = Poly::atom(Atom::Field(FieldSym::Y));
        assert_eq!(
            x().bracket(&y, BracketConvention::MatrixCommutator),
            x().bracket(&y, BracketConvention::GradedCommutator)
        );
    }

    #[test]
    fn derive_along_is_linear_part() {
        // A x A along B gives B x A + A x B.
        let a = Poly::atom(Atom::Pot);
        let p = a.mul(&x()).mul(&a);
        let b = Poly::atom(Atom::Omega);
        let got = p.derive_along(Base::Pot, &b);
        let want = b.mul(&x()).mul(&a).add(&a.mul(&x()).mul(&b));
        assert_eq!(got, want);
    }
}
