//! Formal path derivation of `ωᶠ - ω = δθ` for an abstract 2-cocycle.
//!
//! Terms are integer combinations of `ω(a, b)` and `L_c ω(a, b)` where the
//! arguments are built from three symbols by brackets: `X = f_t⁻¹ x f_t`,
//! `Y = f_t⁻¹ y f_t` and `U = f_t⁻¹ ḟ_t`. `L_c` is the derivative of the
//! cocycle in its group slot `g f_t` along `c`. The script:
//!
//! 1. writes `ωᶠ - ω = ∫₀¹ d/dt ω(g f_t; X, Y) dt` (needs `f_0 = e`);
//! 2. expands `d/dt` with `Ẋ = [X, U]`, `Ẏ = [Y, U]`;
//! 3. eliminates `L_U ω(X, Y)` with the cocycle identity `δω(U, X, Y) = 0`;
//! 4. compares the integrand with `δθ(x, y)` for
//!    `θ(g; z) = ∫₀¹ ω(g f_t; U, f_t⁻¹ z f_t) dt`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Alg {
    Sym(char),
    Br(Box<Alg>, Box<Alg>),
}

impl Alg {
    fn sym(c: char) -> Self {
        Alg::Sym(c)
    }

    fn br(a: &Alg, b: &Alg) -> Self {
        Alg::Br(Box::new(a.clone()), Box::new(b.clone()))
    }

    /// Canonical form under antisymmetry of the bracket, with sign, or
    /// `None` when it vanishes.
    fn canonical(&self) -> Option<(Alg, i64)> {
        match self {
            Alg::Sym(_) => Some((self.clone(), 1)),
            Alg::Br(a, b) => {
                let (a, sa) = a.canonical()?;
                let (b, sb) = b.canonical()?;
                match a.cmp(&b) {
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Less => Some((Alg::br(&a, &b), sa * sb)),
                    std::cmp::Ordering::Greater => Some((Alg::br(&b, &a), -sa * sb)),
                }
            }
        }
    }

    fn contains(&self, c: char) -> bool {
        match self {
            Alg::Sym(s) => *s == c,
            Alg::Br(a, b) => a.contains(c) || b.contains(c),
        }
    }

    /// Time derivative: `Ẋ = [X, U]`, `Ẏ = [Y, U]`.
    fn dot(&self) -> Vec<(Alg, i64)> {
        match self {
            Alg::Sym(c @ ('X' | 'Y')) => vec![(Alg::br(&Alg::sym(*c), &Alg::sym('U')), 1)],
            Alg::Sym(_) => unreachable!("only X and Y are transported"),
            Alg::Br(a, b) => {
                let mut out: Vec<(Alg, i64)> = a.dot().into_iter().map(|(da, s)| (Alg::br(&da, b), s)).collect();
                out.extend(b.dot().into_iter().map(|(db, s)| (Alg::br(a, &db), s)));
                out
            }
        }
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alg::Sym(c) => write!(f, "{c}"),
            Alg::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    /// Direction of the group-slot derivative, if any.
    pub lie: Option<Alg>,
    pub a: Alg,
    pub b: Alg,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.lie {
            write!(f, "L_{l} ")?;
        }
        write!(f, "ω({}, {})", self.a, self.b)
    }
}

/// Integer combination of cocycle terms in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comb(BTreeMap<Term, i64>);

impl Comb {
    fn add_term(&mut self, lie: Option<&Alg>, a: &Alg, b: &Alg, c: i64) {
        let lie = match lie {
            None => None,
            Some(l) => match l.canonical() {
                None => return,
                Some((l, s)) => Some((l, s)),
            },
        };
        let (Some((a, sa)), Some((b, sb))) = (a.canonical(), b.canonical()) else {
            return;
        };
        let mut sign = c * sa * sb * lie.as_ref().map_or(1, |(_, s)| *s);
        let (a, b) = match a.cmp(&b) {
            std::cmp::Ordering::Equal => return,
            std::cmp::Ordering::Less => (a, b),
            std::cmp::Ordering::Greater => {
                sign = -sign;
                (b, a)
            }
        };
        let t = Term { lie: lie.map(|(l, _)| l), a, b };
        let e = self.0.entry(t.clone()).or_insert(0);
        *e += sign;
        if *e == 0 {
            self.0.remove(&t);
        }
    }

    fn omega(a: &Alg, b: &Alg, c: i64) -> Self {
        let mut out = Comb::default();
        out.add_term(None, a, b, c);
        out
    }

    fn lie_omega(l: &Alg, a: &Alg, b: &Alg, c: i64) -> Self {
        let mut out = Comb::default();
        out.add_term(Some(l), a, b, c);
        out
    }

    fn plus(mut self, other: &Comb) -> Self {
        for (t, c) in &other.0 {
            self.add_term(t.lie.as_ref(), &t.a, &t.b, *c);
        }
        self
    }

    fn scaled(&self, k: i64) -> Self {
        let mut out = Comb::default();
        for (t, c) in &self.0 {
            out.add_term(t.lie.as_ref(), &t.a, &t.b, c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn coeff(&self, t: &Term) -> i64 {
        self.0.get(t).copied().unwrap_or(0)
    }

    /// Drop every term mentioning `c` (used for the constant path, `U = 0`).
    fn without(&self, c: char) -> Self {
        Comb(
            self.0
                .iter()
                .filter(|(t, _)| !(t.a.contains(c) || t.b.contains(c) || t.lie.as_ref().is_some_and(|l| l.contains(c))))
                .map(|(t, k)| (t.clone(), *k))
                .collect(),
        )
    }
}

impl fmt::Display for Comb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.0.iter().enumerate() {
            match (i, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{} ", c.abs())?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `δω(a, b, c)`, which vanishes for a cocycle.
fn cocycle_identity(a: &Alg, b: &Alg, c: &Alg) -> Comb {
    Comb::lie_omega(a, b, c, 1)
        .plus(&Comb::lie_omega(b, a, c, -1))
        .plus(&Comb::lie_omega(c, a, b, 1))
        .plus(&Comb::omega(&Alg::br(a, b), c, -1))
        .plus(&Comb::omega(&Alg::br(a, c), b, 1))
        .plus(&Comb::omega(&Alg::br(b, c), a, -1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub label: String,
    pub expression: String,
    /// The corresponding printed display, when there is one.
    pub printed: Option<String>,
    pub matches_printed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub identity: String,
    pub theta: String,
    pub steps: Vec<PathStep>,
    pub side_conditions: Vec<String>,
    pub diffs: Vec<String>,
    pub verified: bool,
}

impl PathCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Re-run the script and compare.
    pub fn replay(&self) -> bool {
        path_coboundary_sym() == *self
    }

    pub fn render(&self) -> String {
        let mut out = format!("identity: {}\nθ(g; z) = {}\n", self.identity, self.theta);
        for s in &self.steps {
            out.push_str(&format!("  {}: {}\n", s.label, s.expression));
            if let (Some(p), Some(m)) = (&s.printed, s.matches_printed) {
                out.push_str(&format!("      printed: {p} [{}]\n", if m { "match" } else { "differs" }));
            }
        }
        for c in &self.side_conditions {
            out.push_str(&format!("  requires: {c}\n"));
        }
        for d in &self.diffs {
            out.push_str(&format!("  diff: {d}\n"));
        }
        out.push_str(&format!("verified: {}\n", self.verified));
        out
    }
}

/// Run the derivation.
pub fn path_coboundary_sym() -> PathCertificate {
    let (x, y, u) = (Alg::sym('X'), Alg::sym('Y'), Alg::sym('U'));
    let mut steps = Vec::new();
    let mut diffs = Vec::new();

    // d/dt ω(g f_t; X, Y): group slot, then each transported argument.
    let mut ddt = Comb::lie_omega(&u, &x, &y, 1);
    for (dx, s) in x.dot() {
        ddt = ddt.plus(&Comb::omega(&dx, &y, s));
    }
    for (dy, s) in y.dot() {
        ddt = ddt.plus(&Comb::omega(&x, &dy, s));
    }
    let printed_split = Comb::lie_omega(&u, &x, &y, 1)
        .plus(&Comb::omega(&Alg::br(&x, &u), &y, 1))
        .plus(&Comb::omega(&x, &Alg::br(&y, &u), 1));
    steps.push(PathStep {
        label: "ωᶠ - ω = ∫₀¹ d/dt ω(g f_t; X, Y) dt, integrand".into(),
        expression: ddt.to_string(),
        printed: Some(printed_split.to_string()),
        matches_printed: Some(ddt == printed_split),
    });

    let identity = cocycle_identity(&u, &x, &y);
    let lead = Term { lie: Some(u.clone()), a: x.clone(), b: y.clone() };
    let k = ddt.coeff(&lead) / identity.coeff(&lead);
    let reduced = ddt.clone().plus(&identity.scaled(-k));
    steps.push(PathStep {
        label: "subtract δω(U, X, Y) = 0".into(),
        expression: reduced.to_string(),
        printed: None,
        matches_printed: None,
    });

    let printed_final = Comb::omega(&u, &Alg::br(&x, &y), -1)
        .plus(&Comb::lie_omega(&x, &u, &y, 1))
        .plus(&Comb::lie_omega(&y, &u, &x, 1));
    let printed_ok = reduced == printed_final;
    steps.push(PathStep {
        label: "result after the cocycle identity".into(),
        expression: reduced.to_string(),
        printed: Some(printed_final.to_string()),
        matches_printed: Some(printed_ok),
    });
    if !printed_ok {
        let delta = reduced.clone().plus(&printed_final.scaled(-1));
        diffs.push(format!("derived minus printed: {delta}"));
    }

    // δθ(x, y) = L_x θ(y) - L_y θ(x) - θ([x, y]); moving L_x through the
    // path integral transports it to L_X, and θ's arguments are (U, Ad z).
    let delta_theta = Comb::lie_omega(&x, &u, &y, 1)
        .plus(&Comb::lie_omega(&y, &u, &x, -1))
        .plus(&Comb::omega(&u, &Alg::br(&x, &y), -1));
    let cob_ok = reduced == delta_theta;
    steps.push(PathStep {
        label: "δθ(x, y) integrand".into(),
        expression: delta_theta.to_string(),
        printed: None,
        matches_printed: Some(cob_ok),
    });

    let constant_path_ok = ddt.without('U').is_zero() && reduced.without('U').is_zero() && delta_theta.without('U').is_zero();
    steps.push(PathStep {
        label: "constant path (U = 0): both sides".into(),
        expression: format!("{} = {}", ddt.without('U'), delta_theta.without('U')),
        printed: None,
        matches_printed: Some(constant_path_ok),
    });

    PathCertificate {
        identity: "ωᶠ(g; x, y) - ω(g; x, y) = δθ(g; x, y)".into(),
        theta: "∫₀¹ ω(g f_t; f_t⁻¹ ḟ_t, f_t⁻¹ z f_t) dt".into(),
        steps,
        side_conditions: vec![
            "f_0 = e, so the t = 0 endpoint of the fundamental theorem is ω itself".into(),
            "x or y periodic, so the boundary terms hidden in the cocycle identity vanish".into(),
        ],
        diffs,
        verified: cob_ok && constant_path_ok,
    }
}
