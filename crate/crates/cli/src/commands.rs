//! Subcommand bodies, returning exit codes and output instead of printing.

use std::collections::BTreeMap;
use std::path::Path;

use genformal::examples::{hodge_report, quotient_type, Scene};
use genformal::scalars::parse::parse_scalar;
use genformal::scalars::{Point, Var};
use genformal::Error;
use rayon::prelude::*;

use crate::checks::{select, Context, Outcome, Selection};
use crate::report::{CheckRecord, Report, Status};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn input_error(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn load_scene(path: &Path) -> Result<Scene, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Scene::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suite: Selection,
    pub seed: u64,
    pub max_degree: u32,
    pub samples: usize,
    pub complexes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { suite: Selection::All, seed: 0x5eed, max_degree: 4, samples: 10, complexes: 1000 }
    }
}

/// Runs the selected suites on a loaded scene.
pub fn verify_scene(scene: &Scene, opts: &VerifyOptions) -> genformal::Result<Report> {
    let ctx = Context {
        scene,
        seed: opts.seed,
        max_degree: opts.max_degree,
        samples: opts.samples,
        complexes: opts.complexes,
    };
    let records = select(opts.suite)
        .par_iter()
        .map(|c| {
            let out = c.run(&ctx).unwrap_or_else(|e| Outcome::fail(format!("error: {e}")));
            CheckRecord { name: c.name().into(), anchor: c.anchor().into(), status: out.status, witness: out.witness }
        })
        .collect();
    Ok(Report::new(scene.name.clone(), scene.content_hash()?, opts.suite.to_string(), opts.seed, records))
}

pub fn verify(path: &Path, opts: &VerifyOptions, json: Option<&Path>) -> Output {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(e) => return Output::input_error(e),
    };
    let report = match verify_scene(&scene, opts) {
        Ok(r) => r,
        Err(e) => return Output::input_error(e),
    };
    if let Some(p) = json {
        if let Err(e) = std::fs::write(p, report.to_json()) {
            return Output::input_error(format!("{}: {e}", p.display()));
        }
    }
    let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
    Output { code, stdout: report.render(), stderr: String::new() }
}

/// Parses `{"z0": "1", "z2": "3/5"}`.
pub fn parse_point(src: &str) -> Result<Point, String> {
    let raw: BTreeMap<String, String> = serde_json::from_str(src).map_err(|e| format!("--at: {e}"))?;
    let mut pt = Point::new();
    for (k, v) in raw {
        let var = Var::parse(&k).ok_or_else(|| format!("--at: unknown variable `{k}`"))?;
        pt.insert(var, parse_scalar(&v).map_err(|e| format!("--at: {e}"))?);
    }
    Ok(pt)
}

pub fn types(path: &Path, at: &str) -> Output {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(e) => return Output::input_error(e),
    };
    let pt = match parse_point(at) {
        Ok(p) => p,
        Err(e) => return Output::input_error(e),
    };
    match quotient_type(&scene, &pt) {
        Ok(t) => Output {
            code: EXIT_PASS,
            stdout: format!(
                "J_ε: upstairs {}, quotient {}\nJ_ω: upstairs {}, quotient {}\ndim(𝔱_M ∩ π(L_ε)) = {}\n",
                t.upstairs_eps, t.eps, t.upstairs_omega, t.omega, t.intersection
            ),
            stderr: String::new(),
        },
        Err(e) => Output::input_error(e),
    }
}

pub fn hodge(path: &Path) -> Output {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(e) => return Output::input_error(e),
    };
    match hodge_report(&scene) {
        Ok(h) => Output { code: EXIT_PASS, stdout: h.table(), stderr: String::new() },
        Err(e @ Error::HypothesisNotVerified(_)) => {
            Output { code: EXIT_FAIL, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(e) => Output::input_error(e),
    }
}

/// Any failing record makes the run fail; skipped ones do not.
pub fn summary(report: &Report) -> (usize, usize, usize) {
    let count = |s| report.checks.iter().filter(|c| c.status == s).count();
    (count(Status::Pass), count(Status::Fail), count(Status::Skip))
}
