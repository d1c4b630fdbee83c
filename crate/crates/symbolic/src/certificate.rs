//! Replayable certificates of identities modulo exact terms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coeff::GaussQ;
use crate::expr::{Domain, SymExpr};
use crate::parse::Parser;
use crate::poly::BracketConvention;
use crate::stokes::exact_combination;
use crate::word::TraceWord;
use crate::SymbolicError;

/// One generator `coeff · d(tr word)` of the exact part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub word: String,
    /// `[re_num, re_den, im_num, im_den]`.
    pub coeff: [i64; 4],
}

impl DecompositionEntry {
    pub fn from_pairs(pairs: &[(TraceWord, GaussQ)]) -> Result<Vec<Self>, SymbolicError> {
        pairs
            .iter()
            .map(|(w, c)| {
                let coeff = c
                    .to_i64_parts()
                    .ok_or_else(|| SymbolicError::Certificate(format!("coefficient {c} overflows i64")))?;
                Ok(Self { word: w.to_string(), coeff })
            })
            .collect()
    }

    fn decode(&self, domain: Domain) -> Result<(TraceWord, GaussQ), SymbolicError> {
        let c = GaussQ::from_i64_parts(self.coeff)
            .ok_or_else(|| SymbolicError::Certificate(format!("zero denominator for {}", self.word)))?;
        let p = Parser::new(BracketConvention::MatrixCommutator, domain).parse_poly(&self.word)?;
        let mut words = p.terms();
        match (words.next(), words.next()) {
            (Some((w, k)), None) if k.is_one() => {
                let (tw, s) = TraceWord::canonical(w)
                    .ok_or_else(|| SymbolicError::Certificate(format!("vanishing word {}", self.word)))?;
                Ok((tw, &c * &GaussQ::from_int(s as i64)))
            }
            _ => Err(SymbolicError::Certificate(format!("not a single word: {}", self.word))),
        }
    }
}

/// A claimed identity `lhs ≡ rhs`, the exact generators that witness it, and
/// the conventions under which it was derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub identity: String,
    pub domain: Domain,
    pub conventions: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub exact_decomposition: Vec<DecompositionEntry>,
    /// Words of `lhs - rhs` left after removing the exact part.
    pub residual: Vec<DecompositionEntry>,
    pub steps: Vec<String>,
    pub diffs: Vec<String>,
    pub verified: bool,
}

impl Certificate {
    /// Recompute `lhs - rhs - Σ a_u d(tr u)` with the kernel and compare it
    /// with the recorded residual.
    pub fn replay(&self) -> Result<bool, SymbolicError> {
        let parser = Parser::new(BracketConvention::MatrixCommutator, self.domain);
        let lhs = parser.parse(&self.lhs)?;
        let rhs = parser.parse(&self.rhs)?;
        let diff = lhs.sub(&rhs)?;
        let pairs = self
            .exact_decomposition
            .iter()
            .map(|e| e.decode(self.domain))
            .collect::<Result<Vec<_>, _>>()?;
        let pi = if diff.is_zero() { 0 } else { diff.pi_power() };
        let exact = exact_combination(&pairs, self.domain, pi)?;
        let left = diff.sub(&exact)?;
        let mut residual = SymExpr::zero(self.domain).with_pi_power(pi);
        for e in &self.residual {
            let (w, c) = e.decode(self.domain)?;
            residual.add_canonical(w, &c);
        }
        let replayed = left.sub(&residual)?.is_zero();
        Ok(replayed && (residual.is_zero() == self.verified))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SymbolicError> {
        serde_json::from_str(text).map_err(|e| SymbolicError::Certificate(e.to_string()))
    }

    /// Human-readable derivation listing.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "identity: {}", self.identity);
        let _ = writeln!(out, "domain:   {}", self.domain.label());
        if !self.conventions.is_empty() {
            let _ = writeln!(out, "conventions:");
            for (k, v) in &self.conventions {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        for s in &self.steps {
            let _ = writeln!(out, "  * {s}");
        }
        if self.exact_decomposition.is_empty() {
            let _ = writeln!(out, "exact part: identical expressions");
        } else {
            let _ = writeln!(out, "exact part (Σ c · d tr w):");
            for e in &self.exact_decomposition {
                let c = GaussQ::from_i64_parts(e.coeff).map(|c| c.to_string()).unwrap_or_else(|| "?".into());
                let _ = writeln!(out, "  {c:>12}  d tr({})", e.word);
            }
        }
        if !self.residual.is_empty() {
            let _ = writeln!(out, "residual:");
            for e in &self.residual {
                let c = GaussQ::from_i64_parts(e.coeff).map(|c| c.to_string()).unwrap_or_else(|| "?".into());
                let _ = writeln!(out, "  {c:>12}  tr({})", e.word);
            }
        }
        for d in &self.diffs {
            let _ = writeln!(out, "  diff: {d}");
        }
        let _ = writeln!(out, "verified: {}", self.verified);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::stokes::{equal_mod_exact, StokesOptions};

    #[test]
    fn round_trip_and_replay() {
        let a = parse("∫ tr ω dx dy").unwrap();
        let b = parse("∫ tr ω dx dy + d(ω x dy)").unwrap();
        let (ok, cert) = equal_mod_exact(&a, &b, StokesOptions::default()).unwrap();
        assert!(ok);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(back.replay().unwrap());
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let a = parse("∫ tr A dx ω").unwrap();
        let b = parse("∫ tr A dx ω + d(A x ω)").unwrap();
        let (ok, mut cert) = equal_mod_exact(&a, &b, StokesOptions::default()).unwrap();
        assert!(ok);
        assert!(!cert.exact_decomposition.is_empty());
        cert.exact_decomposition[0].coeff[0] += 1;
        assert!(!cert.replay().unwrap());
    }

    #[test]
    fn empty_decomposition_renders_identical() {
        let a = parse("∫ tr A[dx,dy]").unwrap();
        let (_, cert) = equal_mod_exact(&a, &a, StokesOptions::default()).unwrap();
        assert!(cert.render().contains("identical expressions"));
    }

    #[test]
    fn corrupt_json_is_an_error() {
        assert!(Certificate::from_json("{not json").is_err());
    }
}
