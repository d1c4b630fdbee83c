use cocycle_core::circle::*;
use cocycle_core::lie::{i_sigma, random_algebra};
use proptest::prelude::*;

fn band(seed: u64, len: usize) -> CircleAlgebraField<2> {
    CircleAlgebraField::random_band_limited(seed, len, 3, 0.7).unwrap()
}

fn s3(len: usize, f: impl Fn(f64) -> f64) -> CircleAlgebraField<2> {
    CircleAlgebraField::from_fn(len, |p| i_sigma(3).scale(f(p))).unwrap()
}

fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

#[test]
fn derivative_examples() {
    let d = spectral_derivative(&CircleAlgebraField::constant(32, random_algebra::<2>(1).unwrap()).unwrap());
    assert!(d.max_distance(&CircleAlgebraField::zero(32).unwrap()).unwrap() < 1e-13);
    let d = spectral_derivative(&s3(32, f64::sin));
    assert!(d.max_distance(&s3(32, f64::cos)).unwrap() < 1e-12);
    let dd = spectral_derivative(&spectral_derivative(&s3(32, f64::cos)));
    assert!(dd.max_distance(&s3(32, |p| -p.cos())).unwrap() < 1e-12);
}

#[test]
fn sigma3_cocycle_matches_fine_quadrature() {
    let coarse = km_cocycle(&s3(16, f64::cos), &s3(16, f64::sin)).unwrap();
    let fine = km_cocycle(&s3(1024, f64::cos), &s3(1024, f64::sin)).unwrap();
    assert!((coarse + 1.0).abs() < 1e-12);
    assert!((coarse - fine).abs() < 1e-12);
}

#[test]
fn adjoint_examples() {
    let x = band(4, 32);
    let e = CircleGroupField::identity(32).unwrap();
    assert!(adjoint_transform(&x, &e).unwrap().max_distance(&x).unwrap() < 1e-15);
    let f = CircleGroupField::exp(&s3(32, f64::sin));
    let c = s3(32, |_| 1.0);
    assert!(adjoint_transform(&c, &f).unwrap().max_distance(&c).unwrap() < 1e-14);
}

#[test]
fn exp_path_examples() {
    let zero = CircleAlgebraField::<2>::zero(16).unwrap();
    let p = exp_path(&zero, 4).unwrap();
    let e = CircleGroupField::identity(16).unwrap();
    assert!(p.frames().iter().all(|f| f.max_distance(&e).unwrap() == 0.0));
    let z = band(2, 16);
    let p = exp_path(&z, 6).unwrap();
    assert!(p.endpoint().max_distance(&CircleGroupField::exp(&z)).unwrap() < 1e-14);
}

#[test]
fn path_coboundary_trivial_cases() {
    let z = band(5, 32);
    let flat = exp_path(&CircleAlgebraField::zero(32).unwrap(), 8).unwrap();
    assert_eq!(path_coboundary(&flat, &z, PathOptions::default()).unwrap(), 0.0);
    let p = exp_path(&band(6, 32), 8).unwrap();
    let v = path_coboundary(&p, &CircleAlgebraField::zero(32).unwrap(), PathOptions::default()).unwrap();
    assert_eq!(v, 0.0);
    let closed = closed_form_coboundary(&CircleGroupField::identity(32).unwrap(), &z).unwrap();
    assert_eq!(closed, 0.0);
}

#[test]
fn sigma3_family_hits_one() {
    let path = exp_path(&s3(64, f64::sin), 200).unwrap();
    let z = s3(64, f64::cos);
    let p = path_coboundary(&path, &z, PathOptions::default()).unwrap();
    let c = closed_form_coboundary(path.endpoint(), &z).unwrap();
    assert!((p - 1.0).abs() <= 1e-6);
    assert!((c - 1.0).abs() <= 1e-12);
    assert!((p - c).abs() <= 1e-6);
}

#[test]
fn random_paths_match_closed_form() {
    for seed in 0..4 {
        let zt = band(100 + seed, 128);
        let z = band(200 + seed, 128);
        let path = exp_path(&zt, 400).unwrap();
        let p = path_coboundary(&path, &z, PathOptions::default()).unwrap();
        let c = closed_form_coboundary(path.endpoint(), &z).unwrap();
        assert!((p - c).abs() <= 1e-8, "seed {seed}: {p} vs {c}");
    }
}

#[test]
fn time_quadrature_orders() {
    let zt = band(11, 64);
    let z = band(12, 64);
    let exact = closed_form_coboundary(&CircleGroupField::exp(&zt), &z).unwrap();
    let cases = [
        (Quadrature::Trapezoid, TimeStencil::Fourth, 1.8),
        (Quadrature::Simpson, TimeStencil::Fourth, 3.5),
        (Quadrature::Trapezoid, TimeStencil::Second, 1.8),
    ];
    for (quadrature, stencil, min_order) in cases {
        let opts = PathOptions { quadrature, stencil };
        let err: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&t| (path_coboundary(&exp_path(&zt, t).unwrap(), &z, opts).unwrap() - exact).abs())
            .collect();
        for w in err.windows(2) {
            let q = order(w[0], w[1]);
            assert!(q >= min_order, "{opts:?}: errors {err:?}, order {q}");
        }
    }
}

#[test]
fn second_order_stencil_caps_simpson() {
    let zt = band(11, 64);
    let z = band(12, 64);
    let exact = closed_form_coboundary(&CircleGroupField::exp(&zt), &z).unwrap();
    let opts = PathOptions { quadrature: Quadrature::Simpson, stencil: TimeStencil::Second };
    let e32 = (path_coboundary(&exp_path(&zt, 32).unwrap(), &z, opts).unwrap() - exact).abs();
    let e64 = (path_coboundary(&exp_path(&zt, 64).unwrap(), &z, opts).unwrap() - exact).abs();
    assert!(order(e32, e64) < 3.0);
}

#[test]
fn conjugation_identity_over_seeds() {
    for seed in 0..20 {
        let f = CircleGroupField::exp(&band(300 + seed, 128));
        let x = band(400 + seed, 128);
        let y = band(500 + seed, 128);
        let r = conjugation_identity_residual(&f, &x, &y).unwrap();
        assert!(r <= 1e-8, "seed {seed}: {r}");
    }
    let x = band(1, 64);
    let f = CircleGroupField::exp(&band(2, 64));
    assert!(conjugation_identity_residual(&CircleGroupField::identity(64).unwrap(), &x, &band(3, 64)).unwrap() < 1e-13);
    assert!(conjugation_identity_residual(&f, &x, &x).unwrap() < 1e-13);
}

#[test]
fn su3_fields_work_too() {
    let f = CircleGroupField::exp(&CircleAlgebraField::<3>::random_band_limited(1, 64, 3, 0.5).unwrap());
    let x = CircleAlgebraField::<3>::random_band_limited(2, 64, 3, 1.0).unwrap();
    let y = CircleAlgebraField::<3>::random_band_limited(3, 64, 3, 1.0).unwrap();
    assert!(conjugation_identity_residual(&f, &x, &y).unwrap() < 1e-9);
}

fn cyclic_sum(x: &CircleAlgebraField<2>, y: &CircleAlgebraField<2>, z: &CircleAlgebraField<2>) -> f64 {
    km_cocycle(&x.bracket(y).unwrap(), z).unwrap()
        + km_cocycle(&y.bracket(z).unwrap(), x).unwrap()
        + km_cocycle(&z.bracket(x).unwrap(), y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antisymmetric_and_real(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (band(s1, 64), band(s2, 64));
        let xy = km_cocycle(&x, &y).unwrap();
        let yx = km_cocycle(&y, &x).unwrap();
        prop_assert!((xy + yx).abs() <= 1e-12);
        prop_assert!(km_cocycle_raw(&x, &y).unwrap().im.abs() <= 1e-10);
        prop_assert!(km_cocycle(&x, &x).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn two_cocycle_law(s in any::<u64>()) {
        let (x, y, z) = (band(s, 64), band(s ^ 1, 64), band(s ^ 2, 64));
        prop_assert!(cyclic_sum(&x, &y, &z).abs() <= 1e-10);
    }

    #[test]
    fn path_coboundary_is_linear(s in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let path = exp_path(&band(s, 32), 16).unwrap();
        let (z1, z2) = (band(s ^ 7, 32), band(s ^ 8, 32));
        let opts = PathOptions::default();
        let lhs = path_coboundary(&path, &z1.scale(a).add(&z2.scale(b)).unwrap(), opts).unwrap();
        let rhs = a * path_coboundary(&path, &z1, opts).unwrap() + b * path_coboundary(&path, &z2, opts).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn trace_invariance_under_adjoint(s in any::<u64>()) {
        let f = CircleGroupField::exp(&band(s, 16));
        let (x, y) = (band(s ^ 3, 16), band(s ^ 4, 16));
        let (ax, ay) = (adjoint_transform(&x, &f).unwrap(), adjoint_transform(&y, &f).unwrap());
        for k in 0..16 {
            let before = (x.samples()[k].matrix() * y.samples()[k].matrix()).trace();
            let after = (ax.samples()[k].matrix() * ay.samples()[k].matrix()).trace();
            prop_assert!((before - after).norm() <= 1e-12);
        }
    }
}

#[test]
fn cocycle_law_on_fixed_triples() {
    for s in 0..50u64 {
        assert!(cyclic_sum(&band(3 * s, 64), &band(3 * s + 1, 64), &band(3 * s + 2, 64)).abs() <= 1e-10);
    }
}
