//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL`
//! line before asserting; run with `--nocapture` to see them.

use cocycle_core::ball::{self, BallAlgebraField, BoundaryClass, WaveSpec};
use cocycle_lab::{run_suite, Bound, RunReport, Suite, SuiteConfig};
use cocycle_symbolic::{derive_boundary_term, verify_conjugation_invariance, StokesOptions};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn verdict(n: usize, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn run(cfg: SuiteConfig) -> (RunReport, Duration) {
    let start = Instant::now();
    let report = run_suite(&cfg).unwrap();
    (report, start.elapsed())
}

/// The refinement study 16³ → 32³ → 48³, shared by criteria 6 to 8.
fn refinement() -> &'static RunReport {
    static REPORT: OnceLock<RunReport> = OnceLock::new();
    REPORT.get_or_init(|| run(SuiteConfig { suite: Suite::Converge, converge: vec![16, 32, 48], ball_seeds: 5, ..Default::default() }).0)
}

/// Every gating record whose name starts with `prefix`, which must exist.
fn gating<'a>(report: &'a RunReport, prefix: &str) -> Vec<&'a cocycle_lab::Record> {
    let v: Vec<_> = report.records.iter().filter(|r| r.name.starts_with(prefix) && r.gates()).collect();
    assert!(!v.is_empty(), "no record named {prefix}*");
    v
}

fn orders(report: &RunReport, name: &str) -> Vec<f64> {
    gating(report, &format!("order:{name}")).iter().map(|r| r.order.unwrap_or(f64::NAN)).collect()
}

#[test]
fn criterion_01_conjugation_identity_is_certified() {
    let start = Instant::now();
    let conj = verify_conjugation_invariance(StokesOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let ok = conj.satisfying.len() == 1 && conj.certificate.verified && conj.certificate.replay().unwrap() && elapsed < Duration::from_secs(120);
    verdict(1, ok, format!("assignments {:?}, signs {:?}, {:.2} s", conj.satisfying, conj.signs, elapsed.as_secs_f64()));
}

#[test]
#[ignore = "the printed surface expression subtracts the middle term; the derived boundary term is cyclic with all plus signs"]
fn criterion_02_boundary_term_matches_printed_form() {
    let b = derive_boundary_term(StokesOptions::default()).unwrap();
    let detail = format!("derived {} ; printed form matches: {}", b.boundary, b.printed_matches);
    verdict(2, b.bulk_remainder.is_zero() && b.printed_matches, detail);
}

#[test]
fn criterion_02_derived_boundary_term_is_cyclic() {
    let b = derive_boundary_term(StokesOptions::default()).unwrap();
    assert!(b.bulk_remainder.is_zero() && b.a_independent && b.cyclic_matches, "{}", b.boundary);
    assert!(!b.printed_matches);
    assert!(!b.printed_certificate.verified);
}

#[test]
fn criterion_03_path_coboundary_matches_closed_form() {
    let (small, t_small) = run(SuiteConfig { suite: Suite::Oned, n: 64, steps: 200, ..Default::default() });
    let (large, t_large) = run(SuiteConfig { suite: Suite::Oned, n: 128, steps: 400, ..Default::default() });
    let s = small.record("path_vs_closed_form_sigma3").unwrap();
    let c = small.record("closed_form_sigma3").unwrap();
    let r = large.record("path_vs_closed_form_random").unwrap();
    let (es, er) = (s.residual.unwrap(), r.residual.unwrap());
    let ok = es <= 1e-6 && (c.value.unwrap() - 1.0).abs() < 1e-10 && er <= 1e-8 && t_small + t_large < Duration::from_secs(5);
    verdict(3, ok, format!("σ₃ N=64 T=200 error {es:.2e}; random N=128 T=400 error {er:.2e}"));
}

#[test]
fn criterion_04_conjugation_identity_on_the_circle() {
    let (r, _) = run(SuiteConfig { suite: Suite::Oned, n: 128, circle_seeds: 20, ..Default::default() });
    let rec = r.record("conjugation_identity_residual").unwrap();
    let worst = rec.residual.unwrap();
    verdict(4, worst <= 1e-8 && r.config.circle_seeds >= 20, format!("worst residual {worst:.2e} over {} seeds", r.config.circle_seeds));
}

#[test]
fn criterion_05_kac_moody_cocycle_law() {
    let (r, _) = run(SuiteConfig { suite: Suite::Oned, triples: 50, ..Default::default() });
    let worst = r.record("km_cocycle_law").unwrap().residual.unwrap();
    verdict(5, worst <= 1e-10, format!("worst cyclic sum {worst:.2e} over {} triples", r.config.triples));
}

#[test]
fn criterion_06_coboundary_is_the_boundary_term() {
    let start = Instant::now();
    let (single, _) = run(SuiteConfig { suite: Suite::Threed, grid: [32; 3], ..Default::default() });
    let t32 = start.elapsed();
    let r = refinement();
    let flat = orders(r, "dtheta_vs_boundary_term");
    let lp = orders(r, "dtheta_loop");
    let dep = gating(r, "dtheta_a_dependence");
    let ok = flat.iter().chain(&lp).all(|&q| q >= 1.8)
        && dep.iter().all(|d| d.pass)
        && single.record("dtheta_vs_boundary_term").unwrap().pass
        && t32 < Duration::from_secs(300);
    verdict(6, ok, format!("flattened orders {flat:.2?}, loop orders {lp:.2?}, 32³ in {:.1} s", t32.as_secs_f64()));
}

#[test]
fn criterion_07_invariance_converges() {
    let r = refinement();
    let recs = gating(r, "order:invariance_residual");
    let q: Vec<f64> = recs.iter().map(|x| x.order.unwrap_or(f64::NAN)).collect();
    let ok = r.config.ball_seeds >= 5 && recs.iter().all(|x| x.pass && x.bound == Bound::AtLeast);
    verdict(7, ok, format!("orders {q:.2?} over {} seeds", r.config.ball_seeds));
}

#[test]
fn criterion_08_structure_checks() {
    let r = refinement();
    let mc = orders(r, "structure_equation");
    let floor = gating(r, "d_squared");
    let (single, _) = run(SuiteConfig { suite: Suite::Threed, grid: [24; 3], ..Default::default() });
    let reality = single.record("mf_reality").unwrap();
    let anti = single.record("mf_antisymmetry").unwrap();

    let grid = ball::BallGrid::cube(24).unwrap();
    let spec = WaveSpec::default();
    let x = BallAlgebraField::<3>::random(grid, BoundaryClass::Free, 1, &spec).unwrap();
    let y = BallAlgebraField::<3>::random(grid, BoundaryClass::Free, 2, &spec).unwrap();
    let a = ball::random_potential::<3>(grid, 3, &spec).unwrap();
    let exact = ball::mf_cocycle(&a, &x, &y).unwrap() + ball::mf_cocycle(&a, &y, &x).unwrap();

    let ok = mc.iter().all(|&q| q >= 1.8) && floor.iter().all(|d| d.pass) && reality.pass && anti.pass && exact.norm() == 0.0;
    verdict(8, ok, format!("dω−ω∧ω orders {mc:.2?}; d² ≤ {:.1e}; Im θ {:.1e}", floor.iter().filter_map(|d| d.residual).fold(0.0, f64::max), reality.residual.unwrap()));
}

#[test]
fn criterion_09_crossed_module_axioms() {
    let (r, _) = run(SuiteConfig { suite: Suite::Crossed, samples: 200, ..Default::default() });
    let builtin = gating(&r, "crossed:");
    let mutated = gating(&r, "mutation:");
    let ok = builtin.iter().all(|x| x.pass && x.tolerance == Some(1e-10)) && mutated.iter().all(|x| x.pass && x.bound == Bound::Exceeds);
    let worst = builtin.iter().filter_map(|x| x.residual).fold(0.0, f64::max);
    verdict(9, ok, format!("{} builtin checks, worst {worst:.1e}; {} mutation checks fail as expected", builtin.len(), mutated.len()));
}

#[test]
fn criterion_10_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_cocycle-lab");
    let mut bytes = Vec::new();
    for k in 0..2 {
        let (out, csv) = (dir.path().join(format!("r{k}.json")), dir.path().join(format!("r{k}.csv")));
        let status = Command::new(exe)
            .args(["run", "--suite", "all", "--grid", "12", "--seed", "3", "--n", "64", "--steps", "100"])
            .args(["--out".as_ref(), out.as_os_str(), "--csv".as_ref(), csv.as_os_str()])
            .arg("--config")
            .arg(write_config(dir.path()))
            .status()
            .unwrap();
        assert!(matches!(status.code(), Some(0 | 1)), "{status}");
        bytes.push((std::fs::read(out).unwrap(), std::fs::read(csv).unwrap()));
    }
    verdict(10, bytes[0] == bytes[1], format!("{} report bytes, {} csv bytes", bytes[0].0.len(), bytes[0].1.len()));
}

fn write_config(dir: &std::path::Path) -> std::path::PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, r#"{"converge": [8, 12], "ball_seeds": 2, "circle_seeds": 4, "triples": 8, "samples": 50, "min_order": 0.5}"#).unwrap();
    p
}
