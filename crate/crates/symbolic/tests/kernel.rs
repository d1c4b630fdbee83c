use cocycle_symbolic::*;
use proptest::prelude::*;

fn zero_form() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::Field(FieldSym::X)),
        Just(Atom::Field(FieldSym::Y)),
        Just(Atom::Field(FieldSym::Z)),
        Just(Atom::Conj),
        Just(Atom::ConjInv),
    ]
}

fn one_form() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::Pot),
        Just(Atom::Omega),
        Just(Atom::DField(FieldSym::X)),
        Just(Atom::DField(FieldSym::Y)),
        Just(Atom::DField(FieldSym::Z)),
    ]
}

/// A word of exact form degree `degree`, with up to `extra` 0-form atoms
/// spliced in at arbitrary positions.
fn word(degree: usize, extra: usize) -> impl Strategy<Value = Vec<Atom>> {
    (
        prop::collection::vec(one_form(), degree),
        prop::collection::vec((zero_form(), any::<prop::sample::Index>()), 0..=extra),
    )
        .prop_map(|(mut w, zs)| {
            for (z, at) in zs {
                let i = at.index(w.len() + 1);
                w.insert(i, z);
            }
            w
        })
}

fn coeff() -> impl Strategy<Value = GaussQ> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| &GaussQ::from_ratio(n, d) + &(&GaussQ::i() * &GaussQ::from_int(im)))
}

fn expr(domain: Domain, degree: usize, extra: usize, terms: usize) -> impl Strategy<Value = SymExpr> {
    prop::collection::vec((word(degree, extra), coeff()), 1..=terms).prop_map(move |ts| {
        let mut p = Poly::zero();
        for (w, c) in ts {
            p.add_term(w, &c);
        }
        SymExpr::trace(&p, domain).unwrap()
    })
}

fn exact(degree: usize, extra: usize) -> impl Strategy<Value = SymExpr> {
    expr(Domain::S3, degree, extra, 2).prop_map(|u| u.differentiate().unwrap())
}

fn opts() -> StokesOptions {
    StokesOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(e in expr(Domain::S3, 3, 3, 4)) {
        let once = e.canonicalize();
        prop_assert_eq!(&once, &e);
        prop_assert_eq!(once.canonicalize().to_string(), once.to_string());
    }

    #[test]
    fn d_squared_vanishes(e in expr(Domain::S3, 2, 3, 3)) {
        prop_assert!(e.differentiate().unwrap().differentiate().unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes_from_degree_one(e in expr(Domain::S1, 1, 2, 3)) {
        prop_assert!(e.differentiate().unwrap().differentiate().unwrap().is_zero());
    }

    #[test]
    fn print_parse_round_trip(e in expr(Domain::S3, 3, 2, 3)) {
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(again.on_domain(Domain::S3), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_reassembles_input(e in expr(Domain::S3, 3, 2, 3)) {
        let red = stokes_reduce(&e, opts()).unwrap();
        let back = red.remainder.add(&red.exact_part(Domain::S3, e.pi_power()).unwrap()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn exact_terms_reduce_to_zero(u in exact(2, 2)) {
        prop_assert!(stokes_reduce(&u, opts()).unwrap().remainder.is_zero());
    }

    #[test]
    fn equality_mod_exact_is_an_equivalence(
        e in expr(Domain::S3, 3, 2, 3),
        other in expr(Domain::S3, 3, 2, 2),
        u1 in exact(2, 2),
        u2 in exact(2, 2),
    ) {
        let e2 = e.add(&u1).unwrap();
        let e3 = e2.sub(&u2).unwrap();
        let eq = |a: &SymExpr, b: &SymExpr| equal_mod_exact(a, b, opts()).unwrap().0;
        prop_assert!(eq(&e, &e));
        prop_assert!(eq(&e, &e2) && eq(&e2, &e));
        prop_assert!(eq(&e2, &e3) && eq(&e, &e3));
        prop_assert_eq!(eq(&e, &other), eq(&other, &e));
        prop_assert_eq!(eq(&e2, &other), eq(&e, &other));
    }

    #[test]
    fn certificates_replay(e in expr(Domain::S3, 3, 2, 2), u in exact(2, 2)) {
        let (ok, cert) = equal_mod_exact(&e.add(&u).unwrap(), &e, opts()).unwrap();
        prop_assert!(ok && cert.verified);
        prop_assert!(cert.replay().unwrap());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert!(back.replay().unwrap());
    }
}

#[test]
fn conjugators_cancel_under_trace() {
    let e = parse("∫ tr f⁻¹ x f").unwrap();
    assert_eq!(e, parse("∫ tr x").unwrap());
    assert!(parse("∫ tr dx dy + dy dx").unwrap().is_zero());
}

#[test]
fn action_on_potential_pairing() {
    let e = parse("∫ tr A dx").unwrap();
    let ef = e.substitute_action().unwrap();
    assert!(!ef.contains_base(Base::Conj) && !ef.contains_base(Base::ConjInv), "{ef}");
    assert_eq!(ef.at_identity(), e);
}

#[test]
fn action_then_identity_restores_every_cochain() {
    for text in ["∫ tr A [dx,dy]", "∫ tr A dx dy", "∫ tr x dy dz"] {
        let e = parse(text).unwrap();
        assert_eq!(e.substitute_action().unwrap().at_identity(), e, "{text}");
    }
    for text in ["∫ tr A ω [ω,z]", "∫ tr [ω,A] dz", "∫ tr ω^3 z"] {
        assert!(parse(text).unwrap().substitute_action().unwrap().at_identity().is_zero(), "{text}");
    }
    let conj = parse("∫ tr f x f⁻¹ dy dz").unwrap();
    assert_eq!(conj.substitute_action(), Err(SymbolicError::AlreadyConjugated));
}

#[test]
fn leibniz_on_omega_cubed() {
    let e = parse("∫ tr ω^3").unwrap();
    let d = e.differentiate().unwrap();
    assert!(d.terms().all(|(w, _)| w.atoms().iter().all(|a| *a == Atom::Omega) && w.len() == 4));
    assert!(parse("∫ tr dx").unwrap().differentiate().unwrap().is_zero());
}

#[test]
fn coboundary_arity_errors() {
    let l = parse("∫ tr ω^3 z").unwrap();
    assert!(matches!(ce_coboundary_sym(&l, 3), Err(SymbolicError::Arity(3))));
    let no_z = parse("∫ tr ω^3 x").unwrap();
    assert!(matches!(ce_coboundary_sym(&no_z, 1), Err(SymbolicError::MissingPlaceholder('z'))));
}

#[test]
fn conjugation_certificate_is_deterministic() {
    let a = verify_conjugation_invariance(opts()).unwrap();
    let b = verify_conjugation_invariance(opts()).unwrap();
    assert!(a.verified());
    assert_eq!(a.certificate.to_json(), b.certificate.to_json());
    assert_eq!(a.theta_f_diff.to_string(), b.theta_f_diff.to_string());
    assert!(a.certificate.replay().unwrap());
    assert!(a.certificate.render().contains(a.convention.unwrap().name()));
}

#[test]
fn boundary_derivation_is_deterministic() {
    let a = derive_boundary_term(opts()).unwrap();
    let b = derive_boundary_term(opts()).unwrap();
    assert_eq!(a.cyclic_certificate.to_json(), b.cyclic_certificate.to_json());
    assert!(a.cyclic_matches && a.a_independent);
    assert!(a.bulk_remainder.is_zero());
}

#[test]
fn path_derivation_replays() {
    let cert = path_coboundary_sym();
    assert!(cert.replay());
    assert_eq!(cert.to_json(), path_coboundary_sym().to_json());
}
