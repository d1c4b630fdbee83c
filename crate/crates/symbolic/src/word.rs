//! Cyclic trace words in canonical rotation.

use std::fmt;

use crate::atom::Atom;
use crate::poly::word_degree;

/// A word under the trace, stored in its canonical rotation.
///
/// Canonical means: cyclically adjacent `f f⁻¹` pairs removed, then the
/// lexicographically least rotation in the global atom order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord(Vec<Atom>);

impl TraceWord {
    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        word_degree(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Canonicalize a raw word. Returns the canonical word and the sign
    /// picked up by the rotation, or `None` when the trace vanishes
    /// identically (a symmetry of the word forces `tr w = -tr w`).
    pub fn canonical(raw: &[Atom]) -> Option<(TraceWord, i32)> {
        let reduced = cancel_conjugators(raw);
        let total = word_degree(&reduced);
        let len = reduced.len();
        if len == 0 {
            return Some((TraceWord(reduced), 1));
        }
        let mut best: Option<(Vec<Atom>, i32)> = None;
        let mut prefix_degree = 0u32;
        for k in 0..len {
            let sign = rotation_sign(prefix_degree, total);
            let mut rot = reduced[k..].to_vec();
            rot.extend_from_slice(&reduced[..k]);
            match &best {
                None => best = Some((rot, sign)),
                Some((b, s)) => match rot.cmp(b) {
                    std::cmp::Ordering::Less => best = Some((rot, sign)),
                    std::cmp::Ordering::Equal if *s != sign => return None,
                    _ => {}
                },
            }
            prefix_degree += reduced[k].degree();
        }
        best.map(|(w, s)| (TraceWord(w), s))
    }

    /// Build from atoms already known to be canonical. Used by the parser of
    /// certificate words; re-canonicalizes defensively.
    pub fn from_atoms(atoms: &[Atom]) -> Option<(TraceWord, i32)> {
        Self::canonical(atoms)
    }
}

/// Koszul sign for moving a prefix of degree `p` past the remaining `total - p`.
pub fn rotation_sign(p: u32, total: u32) -> i32 {
    if (p * (total - p)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn is_cancel_pair(a: Atom, b: Atom) -> bool {
    matches!(
        (a, b),
        (Atom::Conj, Atom::ConjInv) | (Atom::ConjInv, Atom::Conj)
    )
}

/// Remove cyclically adjacent `f f⁻¹` / `f⁻¹ f` pairs until none remain.
fn cancel_conjugators(raw: &[Atom]) -> Vec<Atom> {
    let mut w = raw.to_vec();
    loop {
        let n = w.len();
        if n < 2 {
            return w;
        }
        let hit = (0..n).find(|&i| is_cancel_pair(w[i], w[(i + 1) % n]));
        match hit {
            None => return w,
            Some(i) if i + 1 < n => {
                w.drain(i..i + 2);
            }
            Some(_) => {
                // pair wraps around: last and first
                w.pop();
                w.remove(0);
            }
        }
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::FieldSym;
    use proptest::prelude::*;

    const X: Atom = Atom::Field(FieldSym::X);
    const DX: Atom = Atom::DField(FieldSym::X);
    const DY: Atom = Atom::DField(FieldSym::Y);

    #[test]
    fn conjugators_cancel_cyclically() {
        let (w, s) = TraceWord::canonical(&[Atom::ConjInv, X, Atom::Conj]).unwrap();
        assert_eq!(w.atoms(), &[X]);
        assert_eq!(s, 1);
    }

    #[test]
    fn odd_odd_rotation_is_negative() {
        let (a, sa) = TraceWord::canonical(&[DX, DY]).unwrap();
        let (b, sb) = TraceWord::canonical(&[DY, DX]).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, -sb);
    }

    #[test]
    fn self_antisymmetric_words_vanish() {
        assert!(TraceWord::canonical(&[DX, DX]).is_none());
        assert!(TraceWord::canonical(&[Atom::Omega; 2]).is_none());
        assert!(TraceWord::canonical(&[Atom::Omega; 4]).is_none());
        assert!(TraceWord::canonical(&[Atom::Omega; 3]).is_some());
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        prop_oneof![
            Just(Atom::Pot),
            Just(Atom::DPot),
            Just(Atom::Omega),
            Just(X),
            Just(DX),
            Just(Atom::Field(FieldSym::Y)),
            Just(DY),
        ]
    }

    proptest! {
        // Every rotation of a word has the same canonical form, and the stored
        // sign equals the product of single-atom Koszul steps.
        #[test]
        fn rotation_signs_match_stepwise_koszul(w in prop::collection::vec(arb_atom(), 1..=6)) {
            let total = word_degree(&w);
            let base = TraceWord::canonical(&w);
            let mut cur = w.clone();
            let mut stepwise = 1;
            for _ in 0..w.len() {
                let head = cur.remove(0);
                stepwise *= rotation_sign(head.degree(), total);
                cur.push(head);
                let rot = TraceWord::canonical(&cur);
                match (&base, rot) {
                    (None, None) => {}
                    (Some((bw, bs)), Some((rw, rs))) => {
                        prop_assert_eq!(bw, &rw);
                        // tr(w) = stepwise * tr(cur)
                        prop_assert_eq!(*bs, stepwise * rs);
                    }
                    _ => prop_assert!(false, "vanishing differs across rotations"),
                }
            }
        }
    }
}
