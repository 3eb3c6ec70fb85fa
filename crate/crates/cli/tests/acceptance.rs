//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! wall time against the pinned limit; the test fails if any line fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use genformal::dolbeault::{verify_btransform_ops, verify_symp_transform, GradedSection};
use genformal::examples::{build_blowup, build_cpn, check_blowup_weights, check_eps_invariance, hodge_report, quotient_type, Scene};
use genformal::gcs::kahler::gk_check;
use genformal::gcs::{standard_omega, two_form_matrix, Gcs};
use genformal::linalg::same_span;
use genformal::polyforms::{d, exp_nilpotent, TwistData};
use genformal::sample::{self, Shape};
use genformal::scalars::poly::complete_point;
use genformal::scalars::{Point, Qi, Var};
use genformal::spinor::{Chart, QForm};
use genformal::Error;
use genformal_cli::checks::{registry, Context, Outcome, Selection, Suite};
use genformal_cli::commands::{load_scene, verify_scene, VerifyOptions};
use genformal_cli::report::Status;
use rand::Rng;

type Verdict = Result<String, String>;

/// (title, time limit in seconds, body).
type Criterion = (&'static str, u64, fn() -> Verdict);

const SEED: u64 = 0x5eed;

fn scene_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(format!("{name}.json"))
}

fn scene(name: &str) -> Scene {
    load_scene(&scene_path(name)).unwrap()
}

fn cp3() -> Scene {
    build_cpn(3, &Qi::from_frac(1, 100)).unwrap()
}

fn run_check(ctx: &Context, name: &str) -> Outcome {
    let c = registry().into_iter().find(|c| c.name() == name).unwrap_or_else(|| panic!("no check {name}"));
    c.run(ctx).unwrap_or_else(|e| Outcome::fail(format!("error: {e}")))
}

/// All named checks must pass.
fn require_pass(ctx: &Context, names: &[&str]) -> Result<(), String> {
    for name in names {
        let out = run_check(ctx, name);
        if out.status != Status::Pass {
            return Err(format!("{name}: {:?} {}", out.status, out.witness.unwrap_or_default()));
        }
    }
    Ok(())
}

/// The named check must fail and name a witness.
fn require_fail(ctx: &Context, name: &str) -> Result<String, String> {
    let out = run_check(ctx, name);
    match (out.status, out.witness) {
        (Status::Fail, Some(w)) if !w.is_empty() => Ok(w),
        (s, w) => Err(format!("{name} on {}: expected a failure with witness, got {s:?} {w:?}", ctx.scene.name)),
    }
}

fn dense(chart: &Chart, forms: &[QForm]) -> Vec<Vec<Qi>> {
    forms.iter().map(|f| (0..=chart.full_mask()).map(|m| f.get(m)).collect()).collect()
}

fn random_point(rng: &mut impl Rng, chart: &Chart) -> Point {
    let mut p = Point::new();
    for v in chart.vars() {
        if matches!(v, Var::Z(_) | Var::X(_)) {
            p.insert(v, Qi::from_parts((rng.gen_range(-3..=3), rng.gen_range(1..=3)), (rng.gen_range(-3..=3), 2)));
        }
    }
    if !chart.is_complex() {
        for x in p.values_mut() {
            *x = Qi::from_rational(x.re.clone());
        }
    }
    complete_point(&p).unwrap()
}

fn complex_grading() -> Verdict {
    let chart = Chart::complex(2);
    let n = chart.n();
    let g = Gcs::standard_complex(chart).grading().map_err(|e| e.to_string())?;
    let mut dims = Vec::new();
    for k in -2..=2i64 {
        let u = g.eigenbasis(k).map_err(|e| e.to_string())?;
        dims.push(u.len());
        let expected: Vec<QForm> = (0..=chart.full_mask())
            .filter(|m| {
                let p = (m & ((1 << n) - 1)).count_ones() as i64;
                let q = (m >> n).count_ones() as i64;
                q - p == k
            })
            .map(QForm::basis)
            .collect();
        if !same_span(&dense(&chart, &u), &dense(&chart, &expected)) {
            return Err(format!("U^{k} is not the sum of Λ^(p,q) with q − p = {k}"));
        }
    }
    if dims != [1, 4, 6, 4, 1] {
        return Err(format!("dims {dims:?}"));
    }
    Ok(format!("dims {dims:?}"))
}

fn symplectic_grading() -> Verdict {
    let mut checked = 0;
    for chart in [Chart::real(2), Chart::real(4), Chart::complex(1), Chart::complex(2)] {
        let n = chart.n() as i64;
        let omega = standard_omega(&chart);
        let g = Gcs::from_symplectic(chart, &omega).and_then(|j| j.grading()).map_err(|e| e.to_string())?;
        for k in -n..=n {
            let u = g.eigenbasis(k).map_err(|e| e.to_string())?;
            let moved = (0..=chart.full_mask())
                .filter(|m| m.count_ones() as i64 == n + k)
                .map(|m| {
                    let t = genformal::dolbeault::symp_transform(&omega, &QForm::basis(m).lift())?;
                    t.as_constant().ok_or_else(|| Error::InvalidParameter("non-constant".into()))
                })
                .collect::<genformal::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            if !same_span(&dense(&chart, &u), &dense(&chart, &moved)) {
                return Err(format!("{chart:?}: U^{k} ≠ e^(iω)e^(Λ/2i)Λ^{}", n + k));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} graded pieces on ℝ², ℝ⁴, ℂ, ℂ²"))
}

fn symp_transform_identities() -> Verdict {
    let mut rng = sample::rng(SEED);
    let shape = Shape { max_degree: 3, max_terms: 2, coeff_bound: 3 };
    let mut total = 0;
    for chart in [Chart::real(2), Chart::real(4)] {
        let omega = standard_omega(&chart);
        let mut done = 0;
        while done < 20 {
            let a = sample::form(&mut rng, &chart, shape, 3);
            if a.degrees().len() < 2 {
                continue;
            }
            let r = verify_symp_transform(&chart, &omega, &a).map_err(|e| e.to_string())?;
            if !r.pass() {
                return Err(format!("{chart:?} sample {done}: {r:?}"));
            }
            done += 1;
        }
        total += done;
    }
    Ok(format!("{total} mixed-degree forms"))
}

fn b_transform_laws() -> Verdict {
    let mut rng = sample::rng(SEED);
    let charts = [Chart::complex(1), Chart::complex(2), Chart::real(2), Chart::real(4)];
    let tw = TwistData::zero();
    let mut pairs = 0;
    for i in 0..12 {
        let chart = charts[i % 4];
        let j = if (i / 4) % 2 == 0 { Gcs::standard_complex(chart) } else { Gcs::standard_symplectic(chart) };
        let constant = sample::form_of_degree(&mut rng, &chart, 2, Shape { max_degree: 0, max_terms: 1, coeff_bound: 3 }, 2);
        let theta = sample::form_of_degree(&mut rng, &chart, 1, Shape { max_degree: 2, max_terms: 2, coeff_bound: 3 }, 2);
        let half = constant.add(&d(&chart, &theta));
        let b = half.add(&chart.conj_form(&half));
        if b.is_zero() {
            continue;
        }
        let err = |e: Error| format!("pair {i}: {e}");
        let jb = j.b_transform(&two_form_matrix(&chart, &b)).map_err(err)?;
        let pt = random_point(&mut rng, &chart);
        let (t, tb) = (j.type_of(Some(&pt)).map_err(err)?, jb.type_of(Some(&pt)).map_err(err)?);
        if t != tb {
            return Err(format!("pair {i}: type {t} becomes {tb}"));
        }
        let g = j.grading().map_err(err)?;
        let gb_pt = Gcs::from_constant(chart, &jb.at(Some(&pt)).map_err(err)?).and_then(|x| x.grading()).map_err(err)?;
        let minus_b = b.scale(&Qi::from_int(-1));
        let n = chart.n() as i64;
        let mut sections = Vec::new();
        for k in -n..=n {
            let u = g.eigenbasis(k).map_err(err)?;
            let moved = u
                .iter()
                .map(|e| exp_nilpotent(|v| minus_b.wedge(v), &e.lift()).eval(&pt))
                .collect::<genformal::Result<Vec<_>>>()
                .map_err(err)?;
            if !same_span(&dense(&chart, &gb_pt.eigenbasis(k).map_err(err)?), &dense(&chart, &moved)) {
                return Err(format!("pair {i}: U_B^{k} ≠ e^(−B)∧U^{k}"));
            }
            if let Some(e) = u.first() {
                let f = sample::poly(&mut rng, &chart.vars(), Shape { max_degree: 2, max_terms: 2, coeff_bound: 3 });
                sections.push(GradedSection::new(&g, e.lift().scale_poly(&f), k).map_err(err)?);
            }
        }
        let r = verify_btransform_ops(&j, &b, &sections, &tw).map_err(err)?;
        if let Some((s, op)) = r.failure {
            return Err(format!("pair {i}, section {s}: {op}_B ≠ e^(−B){op}e^B"));
        }
        pairs += 1;
    }
    if pairs < 10 {
        return Err(format!("only {pairs} pairs"));
    }
    Ok(format!("{pairs} (J, B) pairs"))
}

fn moment_and_courant() -> Verdict {
    let s = cp3();
    let ctx = Context::new(&s, SEED);
    require_pass(&ctx, &["equivariant.moment-map", "core.courant-integrable", "core.closedness"])?;
    let broken = scene("broken_moment");
    let w1 = require_fail(&Context::new(&broken, SEED), "equivariant.moment-map")?;
    let nonholo = scene("cp3_nonholomorphic");
    let nctx = Context::new(&nonholo, SEED);
    let w2 = require_fail(&nctx, "core.closedness")?;
    let w3 = require_fail(&nctx, "core.courant-integrable")?;
    Ok(format!("controls: [{w1}] [{w2}] [{w3}]"))
}

const OPERATOR_IDENTITIES: [&str; 6] = [
    "equivariant.dh-a-anticommute",
    "equivariant.a-del-anticommute",
    "equivariant.leibniz",
    "equivariant.dg-square",
    "equivariant.delbar-g-del",
    "equivariant.b-conjugation",
];

fn operator_identities() -> Verdict {
    let s = cp3();
    let mut ctx = Context::new(&s, SEED);
    ctx.samples = 10;
    ctx.max_degree = 4;
    let eq = s.equivariant().map_err(|e| e.to_string())?;
    let got = ctx.cartan_samples(&eq).len();
    if got < 10 {
        return Err(format!("only {got} Cartan samples"));
    }
    require_pass(&ctx, &OPERATOR_IDENTITIES)?;
    Ok(format!("{} identities × {got} samples, degree ≤ 4", OPERATOR_IDENTITIES.len()))
}

fn type_values() -> Verdict {
    let s = cp3();
    let n = 3;
    let (mut on, mut off) = (0, 0);
    for p in &s.points {
        let p = s.complete(p).map_err(|e| e.to_string())?;
        let t = quotient_type(&s, &p).map_err(|e| e.to_string())?;
        let product = &p[&Var::Z(0)] * &p[&Var::Z(1)];
        let expected = if product.is_zero() {
            on += 1;
            n
        } else {
            off += 1;
            n - 2
        };
        if (t.omega, t.eps) != (0, expected) {
            return Err(format!("at {p:?}: ({}, {}), expected (0, {expected})", t.omega, t.eps));
        }
    }
    if on + off < 6 || on == 0 || off == 0 {
        return Err(format!("{on} points on the locus, {off} off it"));
    }
    Ok(format!("{} points: {on} on z0z1 = 0, {off} off", on + off))
}

fn gk_positivity() -> Verdict {
    let s = cp3();
    if s.points.is_empty() {
        return Err("scene has no sample points".into());
    }
    require_pass(&Context::new(&s, SEED), &["core.gk-positivity"])?;
    for n in 1..=3 {
        let chart = Chart::complex(n);
        gk_check(&Gcs::standard_symplectic(chart), &Gcs::standard_complex(chart), None)
            .map_err(|e| format!("flat pair on ℂ^{n}: {e}"))?;
    }
    Ok(format!("{} CP³ points and flat ℂ¹..ℂ³", s.points.len()))
}

fn double_complex_engine() -> Verdict {
    let s = cp3();
    let mut ctx = Context::new(&s, SEED);
    ctx.complexes = 1000;
    require_pass(&ctx, &["doublecomplex.e-infinity", "doublecomplex.ddelta-models", "doublecomplex.degeneration"])?;
    Ok(format!("{} random complexes, {} Hodge-pair models", ctx.complexes, ctx.complexes / 5))
}

fn hodge_reports() -> Verdict {
    let r = hodge_report(&cp3()).map_err(|e| e.to_string())?;
    for p in -3..=3i64 {
        for q in -3..=3i64 {
            let want = usize::from(q == 0 && p % 2 != 0);
            if r.get(p, q) != want {
                return Err(format!("CP³: h^({p},{q}) = {}, expected {want}", r.get(p, q)));
            }
        }
    }
    if r.total() != 4 {
        return Err(format!("CP³ total {}", r.total()));
    }
    let b = hodge_report(&build_blowup(3, None, &Qi::from_frac(1, 100)).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if b.row() != [1, 0, 2, 0, 2, 0, 1] {
        return Err(format!("blow-up row {:?}", b.row()));
    }
    if let Some((k, _)) = r.entries.iter().chain(&b.entries).find(|(_, e)| e.note.is_empty()) {
        return Err(format!("entry {k:?} has no note"));
    }
    Ok(format!("CP³ total {}, blow-up row {:?}", r.total(), b.row()))
}

fn blowup_scene() -> Verdict {
    let c = Qi::from_frac(1, 100);
    let w = |v: &[i64]| v.iter().map(|&x| Qi::from_int(x)).collect::<Vec<_>>();
    for (lambda, cond) in [([1, 1, 3, 4, 0], 'a'), ([1, 2, 3, 4, 5], 'b'), ([0, 4, 2, 3, 1], 'c')] {
        match check_blowup_weights(3, &w(&lambda)) {
            Err(Error::WeightConditionViolated { condition, .. }) if condition == cond => {}
            other => return Err(format!("λ = {lambda:?}: expected condition {cond}, got {other:?}")),
        }
    }
    let s = build_blowup(3, None, &c).map_err(|e| e.to_string())?;
    check_eps_invariance(&s).map_err(|e| e.to_string())?;
    for suite in [Suite::Core, Suite::Equivariant] {
        let opts = VerifyOptions { suite: Selection::One(suite), ..VerifyOptions::default() };
        let report = verify_scene(&s, &opts).map_err(|e| e.to_string())?;
        if let Some(bad) = report.checks.iter().find(|r| r.status == Status::Fail) {
            return Err(format!("{}: {}", bad.name, bad.witness.clone().unwrap_or_default()));
        }
    }
    Ok(format!("spinor dim {}, core and equivariant suites pass", s.chart.spinor_dim()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("complex grading", 1, complex_grading),
        ("symplectic grading", 5, symplectic_grading),
        ("symplectic transform identities", 30, symp_transform_identities),
        ("B-transform laws", 30, b_transform_laws),
        ("moment map and Courant integrability", 120, moment_and_courant),
        ("equivariant operator identities", 300, operator_identities),
        ("quotient type values", 60, type_values),
        ("generalized Kähler positivity", 60, gk_positivity),
        ("double-complex engine", 120, double_complex_engine),
        ("Hodge reports", 60, hodge_reports),
        ("blow-up scene", 600, blowup_scene),
    ];
    let mut failed = Vec::new();
    for (i, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let verdict = match verdict {
            Ok(info) if took > Duration::from_secs(limit) => Err(format!("{info}; over the time limit")),
            v => v,
        };
        let (tag, info) = match &verdict {
            Ok(info) => ("PASS", info.clone()),
            Err(why) => ("FAIL", why.clone()),
        };
        println!("{tag} {:>2}. {title} ({:.2}s / {limit}s): {info}", i + 1, took.as_secs_f64());
        if verdict.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
