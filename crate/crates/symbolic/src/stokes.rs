//! Reduction modulo Stokes-exact terms.
//!
//! For a degree-`D` expression the exact span is generated by `d tr u` for
//! every trace word `u` of degree `D - 1` with the same base content (the
//! multiset of non-ω symbols, counting `x` and `dx` alike). Each generator
//! is expanded, and the span is put in echelon form with the pivot of every
//! row at its largest word. Subtracting pivot rows from the top down yields
//! a remainder with no pivot words, which is unique.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::{Atom, Base};
use crate::certificate::{Certificate, DecompositionEntry};
use crate::coeff::GaussQ;
use crate::expr::{Domain, SymExpr};
use crate::par::*;
use crate::poly::Poly;
use crate::word::TraceWord;
use crate::SymbolicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StokesOptions {
    /// Longest candidate word (in atoms) allowed in the exact span.
    pub max_len: usize,
}

impl Default for StokesOptions {
    fn default() -> Self {
        Self { max_len: 8 }
    }
}

/// `input = remainder + Σ a_u d(tr u)`.
#[derive(Clone, Debug)]
pub struct StokesResult {
    pub remainder: SymExpr,
    pub decomposition: Vec<(TraceWord, GaussQ)>,
    /// On a domain with boundary, `Σ a_u tr u` on the boundary.
    pub boundary: Option<SymExpr>,
}

impl StokesResult {
    pub fn exact_part(&self, domain: Domain, pi_power: i32) -> Result<SymExpr, SymbolicError> {
        exact_combination(&self.decomposition, domain, pi_power)
    }
}

/// `Σ a_u d(tr u)` as an expression.
pub fn exact_combination(
    decomposition: &[(TraceWord, GaussQ)],
    domain: Domain,
    pi_power: i32,
) -> Result<SymExpr, SymbolicError> {
    let mut p = Poly::zero();
    for (u, a) in decomposition {
        p = p.add(&Poly::word(u.atoms().to_vec()).differentiate().scale(a));
    }
    Ok(SymExpr::trace(&p, domain)?.with_pi_power(pi_power))
}

type Row = BTreeMap<TraceWord, GaussQ>;

struct Echelon {
    /// pivot word -> (row normalized to pivot coefficient 1, candidate combination)
    rows: BTreeMap<TraceWord, (Row, Row)>,
}

fn axpy(target: &mut Row, a: &GaussQ, x: &Row) {
    for (w, c) in x {
        let add = a * c;
        let entry = target.entry(w.clone()).or_insert_with(GaussQ::zero);
        *entry += &add;
        if entry.is_zero() {
            target.remove(w);
        }
    }
}

impl Echelon {
    fn new() -> Self {
        Self { rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: Row, mut combo: Row) {
        loop {
            let Some((lead, c)) = row.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                return;
            };
            match self.rows.get(&lead) {
                Some((prow, pcombo)) => {
                    let a = -c;
                    axpy(&mut row, &a, prow);
                    axpy(&mut combo, &a, pcombo);
                }
                None => {
                    let inv = c.recip().expect("nonzero lead");
                    let row: Row = row.into_iter().map(|(w, k)| (w, &k * &inv)).collect();
                    let combo: Row = combo.into_iter().map(|(w, k)| (w, &k * &inv)).collect();
                    self.rows.insert(lead, (row, combo));
                    return;
                }
            }
        }
    }

    /// Returns the remainder and the combination of candidates subtracted.
    fn reduce(&self, mut e: Row) -> (Row, Row) {
        let mut used = Row::new();
        let mut bound: Option<TraceWord> = None;
        loop {
            let next = e
                .iter()
                .rev()
                .filter(|(w, _)| bound.as_ref().is_none_or(|b| *w < b))
                .find(|(w, _)| self.rows.contains_key(*w))
                .map(|(w, c)| (w.clone(), c.clone()));
            let Some((w, c)) = next else {
                return (e, used);
            };
            let (prow, pcombo) = &self.rows[&w];
            axpy(&mut e, &-c.clone(), prow);
            axpy(&mut used, &c, pcombo);
            bound = Some(w);
        }
    }
}

/// Non-ω bases of a word, sorted, with conjugators counted.
fn content(w: &[Atom]) -> Vec<Base> {
    let mut c: Vec<Base> = w.iter().filter_map(|a| a.base()).collect();
    c.sort();
    c
}

fn distinct_permutations(atoms: &[Atom]) -> Vec<Vec<Atom>> {
    let mut counts: BTreeMap<Atom, usize> = BTreeMap::new();
    for a in atoms {
        *counts.entry(*a).or_default() += 1;
    }
    let keys: Vec<Atom> = counts.keys().copied().collect();
    let mut remaining: Vec<usize> = keys.iter().map(|k| counts[k]).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(atoms.len());
    fn rec(keys: &[Atom], rem: &mut [usize], cur: &mut Vec<Atom>, n: usize, out: &mut Vec<Vec<Atom>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..keys.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(keys[i]);
                rec(keys, rem, cur, n, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    rec(&keys, &mut remaining, &mut cur, atoms.len(), &mut out);
    out
}

/// All canonical trace words of the given degree built on `content`.
fn candidates(content: &[Base], degree: u32, max_len: usize) -> Result<BTreeSet<TraceWord>, SymbolicError> {
    let mut choices: Vec<Vec<Atom>> = vec![Vec::new()];
    for b in content {
        let mut next = Vec::new();
        for prefix in &choices {
            let mut options = vec![b.raw()];
            if let Some(d) = b.derived() {
                options.push(d);
            }
            for o in options {
                let mut p = prefix.clone();
                p.push(o);
                next.push(p);
            }
        }
        choices = next;
    }
    let mut out = BTreeSet::new();
    for mut atoms in choices {
        let s: u32 = atoms.iter().map(|a| a.degree()).sum();
        if s > degree {
            continue;
        }
        let k = (degree - s) as usize;
        atoms.extend(std::iter::repeat_n(Atom::Omega, k));
        if atoms.len() > max_len {
            return Err(SymbolicError::LengthBound { needed: atoms.len(), bound: max_len });
        }
        for perm in distinct_permutations(&atoms) {
            if let Some((w, _)) = TraceWord::canonical(&perm) {
                out.insert(w);
            }
        }
    }
    Ok(out)
}

/// Reduce `e` modulo the Stokes-exact span.
///
/// On a closed domain the remainder is zero exactly when `∫ e` vanishes
/// for every field configuration by Stokes' theorem. On the ball, the exact
/// part is moved to the boundary sphere and returned in
/// [`StokesResult::boundary`].
pub fn stokes_reduce(e: &SymExpr, opts: StokesOptions) -> Result<StokesResult, SymbolicError> {
    let domain = e.domain();
    let Some(degree) = e.degree() else {
        return Ok(StokesResult {
            remainder: e.clone(),
            decomposition: Vec::new(),
            boundary: domain.boundary().map(|b| SymExpr::zero(b).with_pi_power(e.pi_power())),
        });
    };
    if let Some(needed) = e.terms().map(|(w, _)| w.len()).max().filter(|&l| l > opts.max_len) {
        return Err(SymbolicError::LengthBound { needed, bound: opts.max_len });
    }
    let mut pool = BTreeSet::new();
    if degree > 0 {
        let contents: BTreeSet<Vec<Base>> = e.terms().map(|(w, _)| content(w.atoms())).collect();
        for c in &contents {
            pool.extend(candidates(c, degree - 1, opts.max_len)?);
        }
    }
    let pool: Vec<TraceWord> = pool.into_iter().collect();
    let rows: Vec<Result<(TraceWord, Row), SymbolicError>> = pool
        .par_iter()
        .map(|u| {
            let de = SymExpr::trace(&Poly::word(u.atoms().to_vec()).differentiate(), domain)?;
            Ok((u.clone(), de.terms().map(|(w, c)| (w.clone(), c.clone())).collect()))
        })
        .collect();
    let mut ech = Echelon::new();
    for r in rows {
        let (u, row) = r?;
        let mut combo = Row::new();
        combo.insert(u, GaussQ::one());
        ech.insert(row, combo);
    }
    let target: Row = e.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    let (rem, used) = ech.reduce(target);
    let mut remainder = SymExpr::zero(domain).with_pi_power(e.pi_power());
    for (w, c) in rem {
        remainder.add_canonical(w, &c);
    }
    let decomposition: Vec<(TraceWord, GaussQ)> = used.into_iter().collect();
    let boundary = match domain.boundary() {
        Some(b) => {
            let mut s = SymExpr::zero(b).with_pi_power(e.pi_power());
            for (u, a) in &decomposition {
                s.add_canonical(u.clone(), a);
            }
            Some(s)
        }
        None => None,
    };
    Ok(StokesResult { remainder, decomposition, boundary })
}

/// Decide `∫ e1 = ∫ e2` modulo Stokes-exact terms on a closed domain.
pub fn equal_mod_exact(
    e1: &SymExpr,
    e2: &SymExpr,
    opts: StokesOptions,
) -> Result<(bool, Certificate), SymbolicError> {
    if !e1.domain().is_closed() {
        return Err(SymbolicError::DomainMismatch(e1.domain(), Domain::S3));
    }
    let diff = e1.sub(e2)?;
    let red = stokes_reduce(&diff, opts)?;
    let verified = red.remainder.is_zero();
    let cert = Certificate {
        identity: format!("{e1} ≡ {e2}"),
        domain: e1.domain(),
        conventions: BTreeMap::new(),
        lhs: e1.to_string(),
        rhs: e2.to_string(),
        exact_decomposition: DecompositionEntry::from_pairs(&red.decomposition)?,
        residual: DecompositionEntry::from_pairs(
            &red.remainder.terms().map(|(w, c)| (w.clone(), c.clone())).collect::<Vec<_>>(),
        )?,
        steps: Vec::new(),
        diffs: Vec::new(),
        verified,
    };
    Ok((verified, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::Parser;
    use crate::poly::BracketConvention;

    fn p(domain: Domain, s: &str) -> SymExpr {
        Parser::new(BracketConvention::MatrixCommutator, domain).parse(s).unwrap()
    }

    #[test]
    fn total_derivative_on_circle_vanishes() {
        let e = p(Domain::S1, "∫ tr dx y + x dy");
        let r = stokes_reduce(&e, StokesOptions::default()).unwrap();
        assert!(r.remainder.is_zero());
        let replay = r.exact_part(Domain::S1, 0).unwrap();
        assert_eq!(replay, e);
    }

    #[test]
    fn reflexive_with_empty_decomposition() {
        let e = p(Domain::S3, "∫ tr A[dx,dy]");
        let (ok, cert) = equal_mod_exact(&e, &e, StokesOptions::default()).unwrap();
        assert!(ok);
        assert!(cert.exact_decomposition.is_empty());
    }

    #[test]
    fn non_exact_term_survives() {
        // tr(x dy) on the circle is the Kac-Moody density: not exact.
        let e = p(Domain::S1, "∫ tr x dy");
        let r = stokes_reduce(&e, StokesOptions::default()).unwrap();
        assert_eq!(r.remainder, e);
    }

    #[test]
    fn integration_by_parts_on_circle() {
        let a = p(Domain::S1, "∫ tr x dy");
        let b = p(Domain::S1, "∫ tr -dx y");
        assert!(equal_mod_exact(&a, &b, StokesOptions::default()).unwrap().0);
    }

    #[test]
    fn ball_exact_form_moves_to_boundary() {
        let e = p(Domain::B3, "∫ tr d(x dy dz)");
        let r = stokes_reduce(&e, StokesOptions::default()).unwrap();
        assert!(r.remainder.is_zero());
        let want = p(Domain::BoundaryB3, "∫ tr x dy dz");
        let (ok, _) = equal_mod_exact(r.boundary.as_ref().unwrap(), &want, StokesOptions::default()).unwrap();
        assert!(ok);
    }

    #[test]
    fn length_bound_is_reported() {
        let e = p(Domain::S3, "∫ tr ω^3 x");
        let r = stokes_reduce(&e, StokesOptions { max_len: 3 });
        assert!(matches!(r, Err(SymbolicError::LengthBound { .. })));
    }
}
