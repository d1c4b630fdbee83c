use cocycle_core::crossed::*;
use cocycle_core::lie::{GroupElement, Mat};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `δ ≡ 1` and `h^g = h` on SU(2).
struct Trivial;

impl CrossedModule for Trivial {
    type H = GroupElement<2>;
    type G = GroupElement<2>;

    fn name(&self) -> String {
        "trivial".into()
    }

    fn delta(&self, _h: &Self::H) -> Self::G {
        GroupElement::identity()
    }

    fn act(&self, _g: &Self::G, h: &Self::H) -> Self::H {
        *h
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        IdentityConjugation::<2>.sample_h(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        IdentityConjugation::<2>.sample_g(rng)
    }
}

/// `δ(h) = det(h)·1` on U(3) with conjugation: not injective and lands in
/// the center.
struct DeterminantCenter;

impl CrossedModule for DeterminantCenter {
    type H = Mat<3>;
    type G = Mat<3>;

    fn name(&self) -> String {
        "det-center".into()
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        Mat::<3>::identity() * h.determinant()
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        g.adjoint() * h * g
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        NormalInclusion::<3>.sample_g(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        NormalInclusion::<3>.sample_g(rng)
    }
}

/// Identity-conjugation with `δ(h) = h⁻¹`, which is still equivariant.
struct InvertedDelta;

impl CrossedModule for InvertedDelta {
    type H = GroupElement<2>;
    type G = GroupElement<2>;

    fn name(&self) -> String {
        "inverted-delta".into()
    }

    fn delta(&self, h: &Self::H) -> Self::G {
        h.inverse()
    }

    fn act(&self, g: &Self::G, h: &Self::H) -> Self::H {
        IdentityConjugation::<2>.act(g, h)
    }

    fn sample_h(&self, rng: &mut ChaCha8Rng) -> Self::H {
        IdentityConjugation::<2>.sample_h(rng)
    }

    fn sample_g(&self, rng: &mut ChaCha8Rng) -> Self::G {
        IdentityConjugation::<2>.sample_g(rng)
    }
}

#[test]
fn builtins_pass_every_axiom() {
    for inst in builtin_instances() {
        for axiom in [Axiom::Peiffer, Axiom::Equivariance, Axiom::Homomorphism] {
            let r = inst.check(axiom, DEFAULT_SAMPLES, 11).unwrap();
            assert_eq!(r.samples, DEFAULT_SAMPLES);
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn identity_conjugation_is_exact() {
    let [p, e] = IdentityConjugation::<3>.check_both(DEFAULT_SAMPLES, 1).unwrap();
    assert!(p.max_deviation < 1e-14 && e.max_deviation < 1e-14, "{p:?} {e:?}");
}

#[test]
fn mutated_actions_fail() {
    for inst in mutated_instances() {
        let [p, e] = inst.check_both(DEFAULT_SAMPLES, 5).unwrap();
        assert!(!p.pass && p.max_deviation > 1e-3, "{p:?}");
        assert!(!e.pass, "{e:?}");
    }
}

#[test]
fn corrupted_delta_fails_peiffer_only() {
    let [p, e] = InvertedDelta.check_both(DEFAULT_SAMPLES, 3).unwrap();
    assert!(e.pass, "{e:?}");
    assert!(!p.pass && p.max_deviation > 1e-3, "{p:?}");
    assert!(!check_homomorphism(&InvertedDelta, 50, 3).unwrap().pass);
}

#[test]
fn trivial_module_is_equivariant() {
    assert!(check_equivariance(&Trivial, DEFAULT_SAMPLES, 2).unwrap().pass);
    assert!(check_homomorphism(&Trivial, DEFAULT_SAMPLES, 2).unwrap().pass);
    assert!(!check_peiffer(&Trivial, DEFAULT_SAMPLES, 2).unwrap().pass);
}

#[test]
fn determinant_into_center_is_equivariant() {
    let r = check_equivariance(&DeterminantCenter, DEFAULT_SAMPLES, 4).unwrap();
    assert!(r.pass, "{r:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (g, h) = (DeterminantCenter.sample_g(&mut rng), DeterminantCenter.sample_h(&mut rng));
    let lhs = DeterminantCenter.delta(&DeterminantCenter.act(&g, &h));
    let z = h.determinant();
    assert!(lhs.distance(&(Mat::<3>::identity() * z)) < 1e-12);
    assert!((z.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn kernel_of_delta_is_central() {
    let minus = GroupElement::<2>::new(-Mat::<2>::identity()).unwrap();
    let one = nalgebra::Matrix3::<f64>::identity();
    assert!(AdjointSu2.delta(&minus).distance(&one) < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..DEFAULT_SAMPLES {
        let h = AdjointSu2.sample_h(&mut rng);
        assert!(AdjointSu2.act(&AdjointSu2.delta(&minus), &h).distance(&h) < 1e-14);
        assert!(minus.mul(&h).distance(&h.mul(&minus)) < 1e-14);
    }
}

#[test]
fn adjoint_image_is_a_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let r = AdjointSu2.delta(&AdjointSu2.sample_h(&mut rng));
        assert!((r.transpose() * r - nalgebra::Matrix3::identity()).amax() < 1e-13);
        assert!((r.determinant() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn loop_samples_are_based_and_closed() {
    let inst = LoopInclusion::<2>::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = inst.sample_h(&mut rng);
    let b = inst.sample_h(&mut rng);
    let g = inst.sample_g(&mut rng);
    for h in [&a, &b, &Element::mul(&a, &b), &inst.act(&g, &a)] {
        inst.in_h(h).unwrap();
    }
    assert!(inst.in_h(&g).is_err());
    assert!(inst.delta(&a).distance(&a) == 0.0);
}

#[test]
fn unit_scalars_commute_with_everything() {
    let u = Mat::<3>::identity() * Complex64::from_polar(1.0, 0.7);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = NormalInclusion::<3>.sample_h(&mut rng);
    assert!(NormalInclusion::<3>.act(&u, &h).distance(&h) < 1e-14);
}

#[test]
fn reports_are_deterministic_and_serializable() {
    let a = AdjointSu2.check_both(64, 13).unwrap();
    let b = AdjointSu2.check_both(64, 13).unwrap();
    assert_eq!(a, b);
    let text = serde_json::to_string(&a[0]).unwrap();
    assert!(text.contains("\"axiom\":\"peiffer\""));
    assert_eq!(serde_json::from_str::<AxiomReport>(&text).unwrap(), a[0]);
}
