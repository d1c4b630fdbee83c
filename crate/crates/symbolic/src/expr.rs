//! Integrated trace expressions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, Base};
use crate::coeff::GaussQ;
use crate::poly::Poly;
use crate::word::TraceWord;
use crate::SymbolicError;

/// Largest form degree the kernel manipulates.
pub const MAX_DEGREE: u32 = 4;

/// Integration domain of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// Closed circle.
    S1,
    /// Closed 3-sphere (or the ball with everything vanishing on the boundary).
    S3,
    /// The 3-ball with its boundary sphere.
    B3,
    /// The boundary 2-sphere of the ball.
    BoundaryB3,
}

impl Domain {
    pub fn dimension(self) -> u32 {
        match self {
            Domain::S1 => 1,
            Domain::S3 | Domain::B3 => 3,
            Domain::BoundaryB3 => 2,
        }
    }

    pub fn is_closed(self) -> bool {
        !matches!(self, Domain::B3)
    }

    pub fn boundary(self) -> Option<Domain> {
        match self {
            Domain::B3 => Some(Domain::BoundaryB3),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Domain::S1 => "S1",
            Domain::S3 => "S3",
            Domain::B3 => "B3",
            Domain::BoundaryB3 => "dB3",
        }
    }
}

/// `π^k ∫_domain tr Σ c_w w`, with every word in canonical rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymExpr {
    domain: Domain,
    pi_power: i32,
    terms: BTreeMap<TraceWord, GaussQ>,
}

impl SymExpr {
    pub fn zero(domain: Domain) -> Self {
        Self {
            domain,
            pi_power: 0,
            terms: BTreeMap::new(),
        }
    }

    /// Take the trace of a word polynomial and canonicalize.
    pub fn trace(p: &Poly, domain: Domain) -> Result<Self, SymbolicError> {
        let mut out = Self::zero(domain);
        for (w, c) in p.terms() {
            out.add_raw(w, c);
        }
        out.check_homogeneous()?;
        Ok(out)
    }

    pub fn with_pi_power(mut self, k: i32) -> Self {
        self.pi_power = k;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn on_domain(&self, domain: Domain) -> Self {
        Self {
            domain,
            ..self.clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceWord, &GaussQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &TraceWord) -> GaussQ {
        self.terms.get(w).cloned().unwrap_or_else(GaussQ::zero)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|w| w.total_degree())
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    fn check_homogeneous(&self) -> Result<(), SymbolicError> {
        let mut degrees = self.terms.keys().map(|w| w.total_degree());
        if let Some(d) = degrees.next() {
            if let Some(other) = degrees.find(|&e| e != d) {
                return Err(SymbolicError::MixedDegree(d, other));
            }
        }
        Ok(())
    }

    /// Add `c · tr(raw)` after canonicalization.
    pub(crate) fn add_raw(&mut self, raw: &[Atom], c: &GaussQ) {
        if let Some((w, s)) = TraceWord::canonical(raw) {
            self.add_canonical(w, &(c * &GaussQ::from_int(s as i64)));
        }
    }

    pub(crate) fn add_canonical(&mut self, w: TraceWord, c: &GaussQ) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn compatible(&self, other: &SymExpr) -> Result<(), SymbolicError> {
        if self.domain != other.domain {
            return Err(SymbolicError::DomainMismatch(self.domain, other.domain));
        }
        if !self.is_zero() && !other.is_zero() {
            if self.pi_power != other.pi_power {
                return Err(SymbolicError::PrefactorMismatch);
            }
            if self.degree() != other.degree() {
                return Err(SymbolicError::MixedDegree(
                    self.degree().unwrap_or(0),
                    other.degree().unwrap_or(0),
                ));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &SymExpr) -> Result<SymExpr, SymbolicError> {
        self.compatible(other)?;
        let mut out = self.clone();
        if out.is_zero() {
            out.pi_power = other.pi_power;
        }
        for (w, c) in &other.terms {
            out.add_canonical(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymExpr) -> Result<SymExpr, SymbolicError> {
        self.add(&other.scale(&GaussQ::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussQ) -> SymExpr {
        let mut out = SymExpr::zero(self.domain).with_pi_power(self.pi_power);
        for (w, k) in &self.terms {
            out.add_canonical(w.clone(), &(k * c));
        }
        out
    }

    /// Re-canonicalize every word. Expressions are kept canonical on
    /// construction, so this is idempotent by design of the representation.
    pub fn canonicalize(&self) -> SymExpr {
        let mut out = SymExpr::zero(self.domain).with_pi_power(self.pi_power);
        for (w, c) in &self.terms {
            out.add_raw(w.atoms(), c);
        }
        out
    }

    /// The word polynomial `Σ c_w w` (one representative per trace class).
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.atoms().to_vec(), c);
        }
        p
    }

    /// `d` applied under the trace.
    pub fn differentiate(&self) -> Result<SymExpr, SymbolicError> {
        if let Some(d) = self.degree() {
            if d + 1 > MAX_DEGREE {
                return Err(SymbolicError::DegreeOverflow(d + 1));
            }
        }
        Ok(SymExpr::trace(&self.to_poly().differentiate(), self.domain)?
            .with_pi_power(self.pi_power))
    }

    /// Simultaneous substitution of base symbols inside the trace.
    pub fn substitute(&self, map: &BTreeMap<Base, Poly>) -> Result<SymExpr, SymbolicError> {
        Ok(SymExpr::trace(&self.to_poly().substitute(map), self.domain)?
            .with_pi_power(self.pi_power))
    }

    pub fn contains_base(&self, base: Base) -> bool {
        self.terms
            .keys()
            .any(|w| w.atoms().iter().any(|a| a.base() == Some(base)))
    }

    /// Right conjugation by `f`: `A ↦ f⁻¹ A f + f⁻¹ df` and every 0-form
    /// field `x ↦ f⁻¹ x f`, followed by `df = ω f` and cyclic cancellation.
    pub fn substitute_action(&self) -> Result<SymExpr, SymbolicError> {
        if self.contains_base(Base::Conj) || self.contains_base(Base::ConjInv) {
            return Err(SymbolicError::AlreadyConjugated);
        }
        let finv = Poly::atom(Atom::ConjInv);
        let f = Poly::atom(Atom::Conj);
        let mut map = BTreeMap::new();
        let a_image = finv
            .mul(&Poly::atom(Atom::Pot))
            .mul(&f)
            .add(&finv.mul(&f.differentiate()));
        map.insert(Base::Pot, a_image);
        for w in self.terms.keys() {
            for a in w.atoms() {
                if let Some(b @ Base::Field(_)) = a.base() {
                    map.entry(b)
                        .or_insert_with(|| finv.mul(&Poly::atom(b.raw())).mul(&f));
                }
            }
        }
        self.substitute(&map)
    }

    /// Set the conjugator to the identity: `f, f⁻¹ ↦ 1` and `ω ↦ 0`.
    pub fn at_identity(&self) -> SymExpr {
        let mut out = SymExpr::zero(self.domain).with_pi_power(self.pi_power);
        for (w, c) in &self.terms {
            if w.atoms().contains(&Atom::Omega) {
                continue;
            }
            let kept: Vec<Atom> = w
                .atoms()
                .iter()
                .copied()
                .filter(|a| !matches!(a, Atom::Conj | Atom::ConjInv))
                .collect();
            out.add_raw(&kept, c);
        }
        out
    }

    /// The part of the expression made of words containing `base`.
    pub fn with_base(&self, base: Base) -> SymExpr {
        let mut out = SymExpr::zero(self.domain).with_pi_power(self.pi_power);
        for (w, c) in &self.terms {
            if w.atoms().iter().any(|a| a.base() == Some(base)) {
                out.add_canonical(w.clone(), c);
            }
        }
        out
    }

    pub fn without_base(&self, base: Base) -> SymExpr {
        let mut out = SymExpr::zero(self.domain).with_pi_power(self.pi_power);
        for (w, c) in &self.terms {
            if !w.atoms().iter().any(|a| a.base() == Some(base)) {
                out.add_canonical(w.clone(), c);
            }
        }
        out
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power != 0 {
            write!(f, "π^{} ", self.pi_power)?;
        }
        write!(f, "∫ tr")?;
        if self.terms.is_empty() {
            return write!(f, " 0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let minus_one = GaussQ::from_int(-1);
            if c.is_one() {
                write!(f, "{}", if i == 0 { " " } else { " + " })?;
            } else if *c == minus_one {
                write!(f, "{}", if i == 0 { " -" } else { " - " })?;
            } else if c.is_real() && c.re < num_rational::BigRational::from_integer(0.into()) {
                write!(f, "{}{} ", if i == 0 { " -" } else { " - " }, -c)?;
            } else if c.is_real() {
                write!(f, "{}{} ", if i == 0 { " " } else { " + " }, c)?;
            } else {
                let shown = match c.to_string() {
                    s if s.starts_with('(') => s,
                    s => format!("({s})"),
                };
                write!(f, "{}{} ", if i == 0 { " " } else { " + " }, shown)?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}
