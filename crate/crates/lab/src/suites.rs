use crate::config::{Prefactor, Suite, SuiteConfig};
use crate::report::{Record, RunReport};
use crate::LabError;
use cocycle_core::ball::{self, BallAlgebraField, BallGrid, BallGroupField, BoundaryClass, WaveSpec};
use cocycle_core::circle::{self, CircleAlgebraField, CircleGroupField, PathOptions};
use cocycle_core::crossed::{builtin_instances, mutated_instances, Axiom};
use cocycle_core::lie::i_sigma;
use cocycle_core::{observed_order, CoreError};
use cocycle_symbolic::{derive_boundary_term, path_coboundary_sym, verify_conjugation_invariance, StokesOptions};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::collections::BTreeMap;

type Certificates = BTreeMap<String, Value>;
type Metric = fn(&BallMeasure) -> f64;

impl From<CoreError> for LabError {
    fn from(e: CoreError) -> Self {
        LabError::Compute(e.to_string())
    }
}

impl From<cocycle_symbolic::SymbolicError> for LabError {
    fn from(e: cocycle_symbolic::SymbolicError) -> Self {
        LabError::Compute(e.to_string())
    }
}

/// Seed of the `k`-th draw derived from the run seed.
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(k)
}

/// Run every suite named by `config.suite`, in a fixed order.
pub fn run_suite(config: &SuiteConfig) -> Result<RunReport, LabError> {
    config.validate()?;
    let mut records = Vec::new();
    let mut certs = Certificates::new();
    let wanted = |s: Suite| config.suite == s || config.suite == Suite::All;
    if wanted(Suite::Oned) {
        records.extend(oned(config)?);
    }
    if wanted(Suite::Symbolic) {
        records.extend(symbolic(&mut certs)?);
    }
    if wanted(Suite::Crossed) {
        records.extend(crossed(config)?);
    }
    if wanted(Suite::Threed) {
        records.extend(threed(config)?);
    }
    if wanted(Suite::Converge) {
        records.extend(converge(config)?);
    }
    Ok(RunReport::new(config.clone(), records, certs))
}

fn band(seed: u64, n: usize) -> Result<CircleAlgebraField<2>, LabError> {
    Ok(CircleAlgebraField::random_band_limited(seed, n, 3, 0.7)?)
}

fn sigma3(n: usize, f: fn(f64) -> f64) -> Result<CircleAlgebraField<2>, LabError> {
    Ok(CircleAlgebraField::from_fn(n, |p| i_sigma(3).scale(f(p)))?)
}

fn oned(c: &SuiteConfig) -> Result<Vec<Record>, LabError> {
    let (n, t, seed) = (c.n, c.steps, c.seed);
    let grid = format!("N={n},T={t}");
    let inputs = json!({ "n": n, "steps": t, "seed": seed });
    let mut out = Vec::new();

    let km = circle::km_cocycle(&sigma3(n, f64::cos)?, &sigma3(n, f64::sin)?)?;
    out.push(Record::check("km_sigma3", &grid, &inputs).value(km).at_most((km + 1.0).abs(), c.tol_cocycle));

    let path = circle::exp_path(&sigma3(n, f64::sin)?, t)?;
    let z = sigma3(n, f64::cos)?;
    let p = circle::path_coboundary(&path, &z, PathOptions::default())?;
    let closed = circle::closed_form_coboundary(path.endpoint(), &z)?;
    out.push(Record::check("closed_form_sigma3", &grid, &inputs).value(closed).at_most((closed - 1.0).abs(), c.tol_cocycle));
    out.push(Record::check("path_vs_closed_form_sigma3", &grid, &inputs).value(p).at_most((p - closed).abs(), c.tol_sigma3));

    let path = circle::exp_path(&band(sub_seed(seed, 1), n)?, t)?;
    let z = band(sub_seed(seed, 2), n)?;
    let p = circle::path_coboundary(&path, &z, PathOptions::default())?;
    let closed = circle::closed_form_coboundary(path.endpoint(), &z)?;
    out.push(Record::check("path_vs_closed_form_random", &grid, &inputs).value(p).at_most((p - closed).abs(), c.tol_path));

    let mut worst = 0.0f64;
    for k in 0..c.circle_seeds as u64 {
        let f = CircleGroupField::exp(&band(sub_seed(seed, 100 + 3 * k), n)?);
        let x = band(sub_seed(seed, 101 + 3 * k), n)?;
        let y = band(sub_seed(seed, 102 + 3 * k), n)?;
        worst = worst.max(circle::conjugation_identity_residual(&f, &x, &y)?);
    }
    let inputs_seeds = json!({ "n": n, "seed": seed, "seeds": c.circle_seeds });
    out.push(Record::check("conjugation_identity_residual", &grid, &inputs_seeds).value(worst).at_most(worst, c.tol_conjugation));

    let (mut law, mut anti) = (0.0f64, 0.0f64);
    for k in 0..c.triples as u64 {
        let x = band(sub_seed(seed, 10_000 + 3 * k), n)?;
        let y = band(sub_seed(seed, 10_001 + 3 * k), n)?;
        let z = band(sub_seed(seed, 10_002 + 3 * k), n)?;
        let cyc = circle::km_cocycle(&x, &y.bracket(&z)?)? + circle::km_cocycle(&y, &z.bracket(&x)?)? + circle::km_cocycle(&z, &x.bracket(&y)?)?;
        law = law.max(cyc.abs());
        anti = anti.max((circle::km_cocycle(&x, &y)? + circle::km_cocycle(&y, &x)?).abs());
    }
    let inputs_triples = json!({ "n": n, "seed": seed, "triples": c.triples });
    out.push(Record::check("km_cocycle_law", &grid, &inputs_triples).value(law).at_most(law, c.tol_cocycle));
    out.push(Record::check("km_antisymmetry", &grid, &inputs_triples).value(anti).at_most(anti, c.tol_cocycle));
    Ok(out)
}

fn symbolic(certs: &mut Certificates) -> Result<Vec<Record>, LabError> {
    let opts = StokesOptions::default();
    let inputs = json!({ "max_len": opts.max_len });
    let mut out = Vec::new();

    let conj = verify_conjugation_invariance(opts)?;
    out.push(Record::check("conjugation_unique_assignment", "", &inputs).value(conj.satisfying.len() as f64).holds(conj.satisfying.len() == 1));
    out.push(Record::check("conjugation_unique_pairing", "", &inputs).value(conj.pairing_solutions as f64).holds(conj.pairing_solutions == 1 && conj.pairing.len() == 3));
    out.push(Record::check("conjugation_certificate_replay", "", &inputs).holds(conj.certificate.verified && conj.certificate.replay()?));
    out.push(Record::check("conjugation_a_free_remainder", "", &inputs).holds(conj.a_free_matches));
    out.push(
        Record::check("conjugation_theta_f_display", "", &inputs)
            .value(conj.theta_f_diff.len() as f64)
            .diagnostic(conj.theta_f_diff.len() as f64, conj.theta_f_display_matches),
    );
    certs.insert("conjugation".into(), serde_json::to_value(&conj.certificate).expect("certificate is plain data"));

    let b = derive_boundary_term(opts)?;
    let derived = b.bulk_remainder.is_zero() && b.a_independent && b.cyclic_matches && b.cyclic_certificate.replay()?;
    out.push(Record::check("boundary_term_derived", "", &inputs).value(b.boundary.len() as f64).holds(derived));
    out.push(Record::check("boundary_term_printed", "", &inputs).diagnostic(if b.printed_matches { 0.0 } else { 1.0 }, b.printed_matches));
    certs.insert("boundary_cyclic".into(), serde_json::to_value(&b.cyclic_certificate).expect("plain data"));
    certs.insert("boundary_printed".into(), serde_json::to_value(&b.printed_certificate).expect("plain data"));

    let path = path_coboundary_sym();
    out.push(Record::check("path_coboundary_derivation", "", &json!({})).value(path.steps.len() as f64).holds(path.replay()));
    out.push(Record::check("path_printed_final_display", "", &json!({})).diagnostic(path.diffs.len() as f64, path.diffs.is_empty()));
    certs.insert("path".into(), serde_json::to_value(&path).expect("plain data"));
    Ok(out)
}

fn crossed(c: &SuiteConfig) -> Result<Vec<Record>, LabError> {
    let inputs = json!({ "samples": c.samples, "seed": c.seed });
    let mut out = Vec::new();
    for inst in builtin_instances() {
        for axiom in [Axiom::Peiffer, Axiom::Equivariance, Axiom::Homomorphism] {
            let r = inst.check(axiom, c.samples, c.seed)?;
            out.push(Record::check(format!("crossed:{}:{axiom}", r.instance), "", &inputs).value(r.max_deviation).at_most(r.max_deviation, c.tol_axiom));
        }
    }
    for inst in mutated_instances() {
        for axiom in [Axiom::Peiffer, Axiom::Equivariance] {
            let r = inst.check(axiom, c.samples, c.seed)?;
            out.push(Record::check(format!("mutation:{}:{axiom}", r.instance), "", &inputs).value(r.max_deviation).exceeds(r.max_deviation, c.tol_axiom));
        }
    }
    Ok(out)
}

/// Everything the 3D suites measure on one grid, with the standard
/// prefactor.
struct BallMeasure {
    theta: Complex64,
    theta_swapped: Complex64,
    d2: f64,
    structure: f64,
    dtheta_flat: [Complex64; 2],
    boundary: Complex64,
    boundary_printed: Complex64,
    dtheta_loop: Complex64,
    invariance: Vec<f64>,
}

fn measure(g: BallGrid, seed: u64, seeds: usize, signs: [i32; 3]) -> Result<BallMeasure, LabError> {
    let spec = WaveSpec::default();
    let pot = |k| ball::random_potential::<3>(g, sub_seed(seed, k), &spec);
    let alg = |class, k| BallAlgebraField::<3>::random(g, class, sub_seed(seed, k), &spec);
    let grp = |k| BallGroupField::<3>::random(g, BoundaryClass::Free, sub_seed(seed, k), &spec);
    let rel = |num: f64, den: f64| if den > 0.0 { num / den } else { num };

    let (a1, a2) = (pot(1)?, pot(2)?);
    let (x, y, z) = (alg(BoundaryClass::Loop, 3)?, alg(BoundaryClass::Loop, 4)?, alg(BoundaryClass::Loop, 5)?);
    let theta = ball::mf_cocycle(&a1, &x, &y)?;
    let theta_swapped = ball::mf_cocycle(&a1, &y, &x)?;

    let free = alg(BoundaryClass::Free, 6)?;
    let dd_x = rel(free.d().d()?.norm_l2(), free.form().norm_l2());
    let dd_a = rel(a1.d()?.d()?.norm_l2(), a1.norm_l2());
    let omega = ball::maurer_cartan(&grp(7)?);
    let structure = omega.d()?.sub(&omega.wedge(&omega)?)?.norm_l2();

    let dtheta = ball::ce_coboundary_2(&ball::mf_cochain::<3>(ball::mf_prefactor()));
    let (fx, fy, fz) = (alg(BoundaryClass::Flattened, 8)?, alg(BoundaryClass::Flattened, 9)?, alg(BoundaryClass::Flattened, 10)?);
    let dtheta_flat = [dtheta.eval(&a1, &fx, &fy, &fz)?, dtheta.eval(&a2, &fx, &fy, &fz)?];
    let boundary = ball::boundary_term(&fx, &fy, &fz)?;
    let boundary_printed = ball::boundary_term_printed(&fx, &fy, &fz)?;
    let dtheta_loop = dtheta.eval(&a1, &x, &y, &z)?;

    let invariance = (0..seeds as u64)
        .map(|k| {
            let b = 100 + 4 * k;
            let r = ball::invariance_residual(&pot(b)?, &alg(BoundaryClass::Loop, b + 1)?, &alg(BoundaryClass::Loop, b + 2)?, &grp(b + 3)?, signs)?;
            Ok(r)
        })
        .collect::<Result<Vec<f64>, LabError>>()?;

    Ok(BallMeasure {
        theta,
        theta_swapped,
        d2: dd_x.max(dd_a),
        structure,
        dtheta_flat,
        boundary,
        boundary_printed,
        dtheta_loop,
        invariance,
    })
}

fn certified_signs() -> Result<[i32; 3], LabError> {
    verify_conjugation_invariance(StokesOptions::default())?
        .signs
        .ok_or_else(|| LabError::Compute("the symbolic engine found no unique sign assignment".into()))
}

fn prefactor_scale(p: Prefactor) -> f64 {
    match p {
        Prefactor::Standard => 1.0,
        Prefactor::Literature => 1.0 / std::f64::consts::PI,
    }
}

fn threed(c: &SuiteConfig) -> Result<Vec<Record>, LabError> {
    let g = c.ball_grid()?;
    let signs = certified_signs()?;
    let m = measure(g, c.seed, 1, signs)?;
    let label = g.describe();
    let inputs = json!({ "grid": c.grid, "seed": c.seed, "signs": signs });
    let s = prefactor_scale(c.prefactor);
    let rec = |name: &str| Record::check(name, &label, &inputs);
    let bnorm = m.boundary.norm();
    let mut out = vec![
        rec("mf_reality").value(m.theta.re * s).at_most(m.theta.im.abs(), c.tol_reality * m.theta.norm()),
        rec("mf_antisymmetry").value(m.theta.re * s).at_most((m.theta + m.theta_swapped).norm(), 0.0),
        rec("d_squared").value(m.d2).at_most(m.d2, c.tol_floor),
        rec("structure_equation").value(m.structure).diagnostic(m.structure, true),
    ];
    let err = (m.dtheta_flat[0] - m.boundary).norm();
    out.push(rec("dtheta_vs_boundary_term").value(m.dtheta_flat[0].re * s).at_most(err, c.tol_relative * bnorm));
    let dep = (m.dtheta_flat[0] - m.dtheta_flat[1]).norm();
    out.push(rec("dtheta_a_dependence").value(dep * s).at_most(dep, c.tol_relative * bnorm));
    let printed = (m.dtheta_flat[0] - m.boundary_printed).norm();
    out.push(rec("dtheta_vs_printed_boundary_term").value(m.boundary_printed.re * s).diagnostic(printed, printed <= c.tol_relative * bnorm));
    let lp = m.dtheta_loop.norm();
    out.push(rec("dtheta_loop").value(lp * s).at_most(lp, c.tol_relative * m.theta.norm()));
    let inv = m.invariance[0];
    out.push(rec("invariance_residual").value(inv).at_most(inv, c.tol_relative * m.theta.norm()));
    Ok(out)
}

fn converge(c: &SuiteConfig) -> Result<Vec<Record>, LabError> {
    let signs = certified_signs()?;
    let mut levels = Vec::new();
    for &n in &c.converge {
        levels.push((n, measure(BallGrid::cube(n)?, c.seed, c.ball_seeds, signs)?));
    }
    let inputs = json!({ "converge": c.converge, "seed": c.seed, "ball_seeds": c.ball_seeds, "signs": signs });
    let mut out = Vec::new();

    let series: [(&str, Metric); 3] = [
        ("structure_equation", |m| m.structure),
        ("dtheta_vs_boundary_term", |m| (m.dtheta_flat[0] - m.boundary).norm()),
        ("dtheta_loop", |m| m.dtheta_loop.norm()),
    ];
    for (name, f) in series {
        push_series(&mut out, c, &levels, name, &inputs, f);
    }
    for k in 0..c.ball_seeds {
        push_series(&mut out, c, &levels, &format!("invariance_residual[{k}]"), &inputs, |m| m.invariance[k]);
    }
    for (n, m) in &levels {
        let label = format!("{n}^3");
        out.push(Record::check("d_squared", &label, &inputs).value(m.d2).at_most(m.d2, c.tol_floor));
        let err = (m.dtheta_flat[0] - m.boundary).norm().max((m.dtheta_flat[1] - m.boundary).norm());
        let dep = (m.dtheta_flat[0] - m.dtheta_flat[1]).norm();
        out.push(Record::check("dtheta_a_dependence", &label, &inputs).value(dep).at_most(dep, err));
    }
    for w in levels.windows(2) {
        let q = observed_order((w[0].0 as f64, w[0].1.d2), (w[1].0 as f64, w[1].1.d2));
        let grid = format!("{}^3->{}^3", w[0].0, w[1].0);
        out.push(Record::check("order:d_squared", grid, &inputs).value(w[1].1.d2).order(q).diagnostic(q, true));
    }
    Ok(out)
}

/// One record per level with the error, then one order record per
/// refinement step that must reach `min_order`.
fn push_series(
    out: &mut Vec<Record>,
    c: &SuiteConfig,
    levels: &[(usize, BallMeasure)],
    name: &str,
    inputs: &Value,
    f: impl Fn(&BallMeasure) -> f64,
) {
    for (n, m) in levels {
        out.push(Record::check(name, format!("{n}^3"), inputs).value(f(m)).diagnostic(f(m), true));
    }
    for w in levels.windows(2) {
        let (coarse, fine) = ((w[0].0 as f64, f(&w[0].1)), (w[1].0 as f64, f(&w[1].1)));
        let q = observed_order(coarse, fine);
        out.push(
            Record::check(format!("order:{name}"), format!("{}^3->{}^3", w[0].0, w[1].0), inputs)
                .value(fine.1)
                .order(q)
                .at_least(q, c.min_order),
        );
    }
}

/// Render a certificate file, or every certificate embedded in a report.
pub fn render_certificates(text: &str) -> Result<String, LabError> {
    let v: Value = serde_json::from_str(text).map_err(|e| LabError::Certificate(e.to_string()))?;
    if let Some(map) = v.get("certificates").and_then(Value::as_object) {
        let mut out = String::new();
        for (name, cert) in map {
            out.push_str(&format!("== {name} ==\n{}\n", render_one(cert)?));
        }
        if map.is_empty() {
            out.push_str("report carries no certificates\n");
        }
        return Ok(out);
    }
    render_one(&v)
}

fn render_one(v: &Value) -> Result<String, LabError> {
    if let Ok(c) = serde_json::from_value::<cocycle_symbolic::Certificate>(v.clone()) {
        return Ok(c.render());
    }
    serde_json::from_value::<cocycle_symbolic::PathCertificate>(v.clone())
        .map(|c| c.render())
        .map_err(|e| LabError::Certificate(format!("not a certificate: {e}")))
}
