//! Text grammar for integrated trace expressions.
//!
//! ```text
//! document  = [ prefactor ] integral "tr" sum
//! integral  = "∫" | "int"
//! prefactor = { "(" | ")" | "-" | number | "i" | pi | "/" denom }
//! denom     = number { pi } | pi { pi }
//! pi        = ( "π" | "pi" ) [ "^" [ "-" ] digits ]
//! sum       = [ sign ] product { sign product }
//! sign      = "+" | "-" | "−"
//! product   = power { power }
//! power     = primary [ "^" [ "-" ] digits ]
//! primary   = number [ "/" number ] | "i" | atom | "d" letter
//!           | "d" ( "(" sum ")" | "[" sum "," sum "]" )
//!           | "(" sum ")" | "[" sum "," sum "]"
//! atom      = "A" | "x" | "y" | "z" | "u" | "v" | "f" | "ω" | "w"
//! ```
//!
//! Juxtaposition is the wedge/matrix product. `f^-1` (or `f⁻¹`) is the
//! inverse conjugator. Superscript digits are accepted as powers. The
//! commutator `[a, b]` expands according to the parser's
//! [`BracketConvention`].

use crate::atom::{Atom, FieldSym};
use crate::coeff::GaussQ;
use crate::expr::{Domain, SymExpr};
use crate::poly::{BracketConvention, Poly};
use crate::SymbolicError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Integral,
    Trace,
    Number(i64),
    Imag,
    Pi,
    Atom(Atom),
    D,
    Plus,
    Minus,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Sup(i32),
}

fn letter_atom(c: char) -> Option<Atom> {
    match c {
        'A' => Some(Atom::Pot),
        'f' => Some(Atom::Conj),
        'ω' | 'w' => Some(Atom::Omega),
        other => FieldSym::from_char(other).map(Atom::Field),
    }
}

fn superscript_digit(c: char) -> Option<i32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c).map(|p| p as i32)
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let is_word_char = |c: char| c.is_alphabetic();
    let keyword = |i: usize, kw: &str| -> bool {
        let kc: Vec<char> = kw.chars().collect();
        chars.len() >= i + kc.len()
            && chars[i..i + kc.len()] == kc[..]
            && chars.get(i + kc.len()).is_none_or(|c| !is_word_char(*c))
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '∫' => Some(Tok::Integral),
            'π' => Some(Tok::Pi),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '*' | '·' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c == '⁻' {
            let mut j = i + 1;
            let mut v = 0;
            let mut any = false;
            while let Some(d) = chars.get(j).and_then(|c| superscript_digit(*c)) {
                v = v * 10 + d;
                j += 1;
                any = true;
            }
            if !any {
                return Err(SymbolicError::Syntax { pos, msg: "dangling superscript minus".into() });
            }
            out.push((pos, Tok::Sup(-v)));
            i = j;
            continue;
        }
        if superscript_digit(c).is_some() {
            let mut v = 0;
            while let Some(d) = chars.get(i).and_then(|c| superscript_digit(*c)) {
                v = v * 10 + d;
                i += 1;
            }
            out.push((pos, Tok::Sup(v)));
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: i64 = 0;
            while let Some(d) = chars.get(i).and_then(|c| c.to_digit(10)) {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as i64))
                    .ok_or_else(|| SymbolicError::Syntax { pos, msg: "number too large".into() })?;
                i += 1;
            }
            out.push((pos, Tok::Number(v)));
            continue;
        }
        if keyword(i, "tr") {
            out.push((pos, Tok::Trace));
            i += 2;
            continue;
        }
        if keyword(i, "int") {
            out.push((pos, Tok::Integral));
            i += 3;
            continue;
        }
        if keyword(i, "pi") {
            out.push((pos, Tok::Pi));
            i += 2;
            continue;
        }
        if c == 'i' {
            out.push((pos, Tok::Imag));
            i += 1;
            continue;
        }
        if c == 'd' {
            match chars.get(i + 1) {
                Some('(') | Some('[') => {
                    out.push((pos, Tok::D));
                    i += 1;
                }
                Some(&n) => {
                    let a = letter_atom(n).ok_or(SymbolicError::UnknownSymbol { pos: pos + 1, sym: n })?;
                    let da = match a {
                        Atom::Pot => Atom::DPot,
                        Atom::Field(s) => Atom::DField(s),
                        _ => {
                            return Err(SymbolicError::Syntax {
                                pos,
                                msg: format!("d{n} is not an atom; write d(...) instead"),
                            })
                        }
                    };
                    out.push((pos, Tok::Atom(da)));
                    i += 2;
                }
                None => return Err(SymbolicError::Syntax { pos, msg: "dangling d".into() }),
            }
            continue;
        }
        match letter_atom(c) {
            Some(a) => {
                out.push((pos, Tok::Atom(a)));
                i += 1;
            }
            None => return Err(SymbolicError::UnknownSymbol { pos, sym: c }),
        }
    }
    Ok(out)
}

/// Parser configuration: bracket convention and integration domain.
#[derive(Clone, Copy, Debug)]
pub struct Parser {
    pub convention: BracketConvention,
    pub domain: Domain,
}

impl Default for Parser {
    fn default() -> Self {
        Self {
            convention: BracketConvention::MatrixCommutator,
            domain: Domain::S3,
        }
    }
}

impl Parser {
    pub fn new(convention: BracketConvention, domain: Domain) -> Self {
        Self { convention, domain }
    }

    pub fn parse(&self, text: &str) -> Result<SymExpr, SymbolicError> {
        let toks = lex(text)?;
        let end = text.chars().count();
        let mut st = State { toks, idx: 0, end, conv: self.convention };
        if st.toks.is_empty() {
            return Err(SymbolicError::Syntax { pos: 0, msg: "empty expression".into() });
        }
        let (coeff, pi_power) = st.prefactor()?;
        st.expect(Tok::Integral, "expected ∫")?;
        st.expect(Tok::Trace, "expected tr")?;
        let body = st.sum()?;
        if st.idx < st.toks.len() {
            return Err(SymbolicError::Syntax { pos: st.pos(), msg: "unexpected trailing input".into() });
        }
        Ok(SymExpr::trace(&body.scale(&coeff), self.domain)?.with_pi_power(pi_power))
    }

    /// Parse a bare polynomial (no integral, no trace), e.g. `[A,x] + dx`.
    pub fn parse_poly(&self, text: &str) -> Result<Poly, SymbolicError> {
        let toks = lex(text)?;
        let end = text.chars().count();
        let mut st = State { toks, idx: 0, end, conv: self.convention };
        if st.toks.is_empty() {
            return Err(SymbolicError::Syntax { pos: 0, msg: "empty expression".into() });
        }
        let p = st.sum()?;
        if st.idx < st.toks.len() {
            return Err(SymbolicError::Syntax { pos: st.pos(), msg: "unexpected trailing input".into() });
        }
        Ok(p)
    }
}

/// Parse with the default configuration (matrix commutator, closed S³).
pub fn parse(text: &str) -> Result<SymExpr, SymbolicError> {
    Parser::default().parse(text)
}

struct State {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    conv: BracketConvention,
}

impl State {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, t: Tok, msg: &str) -> Result<(), SymbolicError> {
        if self.peek() == Some(&t) {
            self.idx += 1;
            Ok(())
        } else {
            Err(SymbolicError::Syntax { pos: self.pos(), msg: msg.into() })
        }
    }

    fn exponent(&mut self) -> Result<Option<i32>, SymbolicError> {
        match self.peek() {
            Some(Tok::Sup(v)) => {
                let v = *v;
                self.idx += 1;
                Ok(Some(v))
            }
            Some(Tok::Caret) => {
                self.idx += 1;
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.idx += 1;
                    true
                } else {
                    false
                };
                match self.bump() {
                    Some(Tok::Number(n)) if n <= 64 => Ok(Some(if neg { -(n as i32) } else { n as i32 })),
                    _ => Err(SymbolicError::Syntax { pos: self.pos(), msg: "expected exponent".into() }),
                }
            }
            _ => Ok(None),
        }
    }

    fn pi_factor(&mut self) -> Result<i32, SymbolicError> {
        Ok(self.exponent()?.unwrap_or(1))
    }

    fn prefactor(&mut self) -> Result<(GaussQ, i32), SymbolicError> {
        let mut coeff = GaussQ::one();
        let mut pi = 0;
        loop {
            match self.peek() {
                Some(Tok::Integral) | None => break,
                Some(Tok::LParen) | Some(Tok::RParen) | Some(Tok::Star) => {
                    self.idx += 1;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    coeff = -coeff;
                }
                Some(Tok::Number(n)) => {
                    let n = *n;
                    self.idx += 1;
                    coeff = &coeff * &GaussQ::from_int(n);
                }
                Some(Tok::Imag) => {
                    self.idx += 1;
                    coeff = &coeff * &GaussQ::i();
                }
                Some(Tok::Pi) => {
                    self.idx += 1;
                    pi += self.pi_factor()?;
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let mut any = false;
                    loop {
                        match self.peek() {
                            Some(Tok::Number(n)) if !any => {
                                let n = *n;
                                self.idx += 1;
                                coeff = coeff
                                    .div(&GaussQ::from_int(n))
                                    .ok_or(SymbolicError::Syntax { pos: self.pos(), msg: "division by zero".into() })?;
                                any = true;
                            }
                            Some(Tok::Pi) => {
                                self.idx += 1;
                                pi -= self.pi_factor()?;
                                any = true;
                            }
                            _ => break,
                        }
                    }
                    if !any {
                        return Err(SymbolicError::Syntax { pos: self.pos(), msg: "expected denominator".into() });
                    }
                }
                _ => {
                    return Err(SymbolicError::Syntax {
                        pos: self.pos(),
                        msg: "unexpected token before integral".into(),
                    })
                }
            }
        }
        Ok((coeff, pi))
    }

    fn sum(&mut self) -> Result<Poly, SymbolicError> {
        let mut acc = Poly::zero();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Plus) => self.idx += 1,
            Some(Tok::Minus) => {
                self.idx += 1;
                sign = -1;
            }
            _ => {}
        }
        loop {
            let p = self.product()?;
            acc = if sign > 0 { acc.add(&p) } else { acc.sub(&p) };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, SymbolicError> {
        let mut acc: Option<Poly> = None;
        loop {
            match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) | Some(Tok::RParen) | Some(Tok::RBracket)
                | Some(Tok::Comma) | None => break,
                Some(Tok::Star) => {
                    self.idx += 1;
                    continue;
                }
                _ => {}
            }
            let f = self.power()?;
            acc = Some(match acc {
                None => f,
                Some(a) => a.mul(&f),
            });
        }
        acc.ok_or_else(|| SymbolicError::Syntax { pos: self.pos(), msg: "expected a term".into() })
    }

    fn power(&mut self) -> Result<Poly, SymbolicError> {
        let start = self.pos();
        let (p, is_conj) = self.primary()?;
        match self.exponent()? {
            None => Ok(p),
            Some(-1) if is_conj => Ok(Poly::atom(Atom::ConjInv)),
            Some(k) if k >= 0 => Ok(p.pow(k as u32)),
            Some(_) => Err(SymbolicError::Syntax { pos: start, msg: "negative powers are only defined for f".into() }),
        }
    }

    fn primary(&mut self) -> Result<(Poly, bool), SymbolicError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Number(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.idx += 1;
                    match self.bump() {
                        Some(Tok::Number(0)) => Err(SymbolicError::Syntax { pos, msg: "division by zero".into() }),
                        Some(Tok::Number(d)) => Ok((Poly::scalar(GaussQ::from_ratio(n, d)), false)),
                        _ => Err(SymbolicError::Syntax { pos: self.pos(), msg: "expected denominator".into() }),
                    }
                } else {
                    Ok((Poly::scalar(GaussQ::from_int(n)), false))
                }
            }
            Some(Tok::Imag) => Ok((Poly::scalar(GaussQ::i()), false)),
            Some(Tok::Atom(a)) => Ok((Poly::atom(a), a == Atom::Conj)),
            Some(Tok::LParen) => {
                let s = self.sum()?;
                self.expect(Tok::RParen, "expected )")?;
                Ok((s, false))
            }
            Some(Tok::LBracket) => Ok((self.bracket_tail()?, false)),
            Some(Tok::D) => match self.bump() {
                Some(Tok::LParen) => {
                    let s = self.sum()?;
                    self.expect(Tok::RParen, "expected )")?;
                    Ok((s.differentiate(), false))
                }
                Some(Tok::LBracket) => Ok((self.bracket_tail()?.differentiate(), false)),
                _ => Err(SymbolicError::Syntax { pos, msg: "expected ( or [ after d".into() }),
            },
            Some(Tok::Pi) => Err(SymbolicError::Syntax { pos, msg: "π is only allowed in the prefactor".into() }),
            _ => Err(SymbolicError::Syntax { pos, msg: "expected a factor".into() }),
        }
    }

    fn bracket_tail(&mut self) -> Result<Poly, SymbolicError> {
        let a = self.sum()?;
        self.expect(Tok::Comma, "expected , in commutator")?;
        let b = self.sum()?;
        self.expect(Tok::RBracket, "expected ]")?;
        Ok(a.bracket(&b, self.conv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_cubed_z_is_one_word() {
        let e = parse("∫ tr ω^3 z").unwrap();
        assert_eq!(e.len(), 1);
        let (w, c) = e.terms().next().unwrap();
        assert_eq!(w.to_string(), "ω ω ω z");
        assert!(c.is_one());
    }

    #[test]
    fn mf_integrand_has_two_words() {
        let e = parse("∫ tr A [dx,dy]").unwrap();
        assert_eq!(e.len(), 2);
        let coeffs: Vec<String> = e.terms().map(|(w, c)| format!("{c} {w}")).collect();
        assert_eq!(coeffs, ["1 A dx dy", "-1 A dy dx"]);
    }

    #[test]
    fn empty_is_syntax_error() {
        assert!(matches!(parse(""), Err(SymbolicError::Syntax { .. })));
        assert!(matches!(parse("   "), Err(SymbolicError::Syntax { .. })));
    }

    #[test]
    fn unknown_symbol_reports_position() {
        match parse("∫ tr A q") {
            Err(SymbolicError::UnknownSymbol { pos, sym }) => {
                assert_eq!(sym, 'q');
                assert_eq!(pos, 7);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prefactor_and_inverse_conjugator() {
        let e = parse("(i/24π) ∫ tr f⁻¹ x f").unwrap();
        assert_eq!(e.pi_power(), -1);
        assert_eq!(e.len(), 1);
        let (w, c) = e.terms().next().unwrap();
        assert_eq!(w.to_string(), "x");
        assert_eq!(c.to_string(), "1/24i");
        assert_eq!(parse("∫ tr f^-1 x f").unwrap().without_base(crate::atom::Base::Pot).len(), 1);
    }

    #[test]
    fn mixed_degree_is_rejected() {
        assert!(matches!(parse("∫ tr x dy + dx dy"), Err(SymbolicError::MixedDegree(..))));
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "∫ tr A[dx,dy]",
            "(i/24π) ∫ tr x[dy,dz] - y[dz,dx] + z[dx,dy]",
            "∫ tr (1/2 + 3i) A ω x y - 5/7 ω dx y",
            "∫ tr ω^3[x,y]",
        ] {
            let e = parse(text).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }

    #[test]
    fn differential_operator_applies_leibniz() {
        let a = parse("∫ tr A d[x,y]").unwrap();
        let b = parse("∫ tr A (dx y + x dy - dy x - y dx)").unwrap();
        assert_eq!(a, b);
    }
}
