//! Verification checks behind `genformal verify`, grouped into suites.

mod core;
mod doublecomplex;
mod equivariant;

use std::fmt;
use std::str::FromStr;

use genformal::equivariant::{CartanElement, Equivariant, IdentityReport};
use genformal::examples::Scene;
use genformal::sample::{self, SampleRng, Shape};
use genformal::scalars::Qi;
use genformal::spinor::rep::AnyGrading;
use genformal::spinor::PolyForm;
use genformal::Result;
use rand::Rng;

use crate::report::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Core,
    Equivariant,
    DoubleComplex,
}

/// Suite selector on the command line; `all` runs every registered check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl FromStr for Selection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "core" => Ok(Selection::One(Suite::Core)),
            "equivariant" => Ok(Selection::One(Suite::Equivariant)),
            "doublecomplex" => Ok(Selection::One(Suite::DoubleComplex)),
            "all" => Ok(Selection::All),
            _ => Err(format!("unknown suite `{s}` (core, equivariant, doublecomplex, all)")),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selection::One(Suite::Core) => "core",
            Selection::One(Suite::Equivariant) => "equivariant",
            Selection::One(Suite::DoubleComplex) => "doublecomplex",
            Selection::All => "all",
        })
    }
}

/// Inputs shared by every check in one run.
pub struct Context<'a> {
    pub scene: &'a Scene,
    pub seed: u64,
    /// Polynomial degree of random coefficients.
    pub max_degree: u32,
    /// Random samples per identity.
    pub samples: usize,
    /// Random finite double complexes for the engine checks.
    pub complexes: usize,
}

impl<'a> Context<'a> {
    pub fn new(scene: &'a Scene, seed: u64) -> Self {
        Self { scene, seed, max_degree: 4, samples: 10, complexes: 1000 }
    }

    pub fn rng(&self) -> SampleRng {
        sample::rng(self.seed)
    }

    pub fn shape(&self) -> Shape {
        Shape { max_degree: self.max_degree, max_terms: 2, coeff_bound: 3 }
    }

    /// Nonzero invariant Cartan elements.
    pub fn cartan_samples(&self, eq: &Equivariant) -> Vec<CartanElement> {
        let mut rng = self.rng();
        (0..self.samples * 4)
            .map(|_| eq.sample_invariant(&mut rng, self.shape(), 2, 3))
            .filter(|e| !e.is_zero())
            .take(self.samples)
            .collect()
    }

    /// (f·e, k) with e an eigenform of the constant grading and f random.
    pub fn graded_samples(&self, g: &AnyGrading) -> Vec<(PolyForm, i64)> {
        let AnyGrading::Constant(c) = g else {
            return Vec::new();
        };
        let mut rng = self.rng();
        let vars = self.scene.chart.vars();
        let n = c.n() as i64;
        let mut out = Vec::new();
        while out.len() < self.samples {
            let k = rng.gen_range(-n..=n);
            let basis = c.eigenbasis(k);
            if basis.is_empty() {
                continue;
            }
            let e = &basis[rng.gen_range(0..basis.len())];
            out.push((e.lift().scale_poly(&sample::poly(&mut rng, &vars, self.shape())), k));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn pass() -> Self {
        Self { status: Status::Pass, witness: None }
    }

    pub fn fail(w: impl Into<String>) -> Self {
        Self { status: Status::Fail, witness: Some(w.into()) }
    }

    pub fn skip(why: impl Into<String>) -> Self {
        Self { status: Status::Skip, witness: Some(why.into()) }
    }

    pub fn from_bool(ok: bool, w: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass()
        } else {
            Self::fail(w())
        }
    }

    pub fn from_identity(r: IdentityReport) -> Self {
        match r.failure {
            None if r.checked == 0 => Self::fail("no samples were generated"),
            None => Self::pass(),
            Some((i, w)) => Self::fail(format!("sample {i}: {w}")),
        }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn suite(&self) -> Suite;
    /// The statement being checked.
    fn anchor(&self) -> &'static str;
    fn run(&self, ctx: &Context) -> Result<Outcome>;
}

macro_rules! check {
    ($ty:ident, $name:literal, $suite:expr, $anchor:literal, |$ctx:ident| $body:block) => {
        pub struct $ty;

        impl $crate::checks::Check for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn suite(&self) -> $crate::checks::Suite {
                $suite
            }
            fn anchor(&self) -> &'static str {
                $anchor
            }
            fn run(&self, $ctx: &$crate::checks::Context) -> genformal::Result<$crate::checks::Outcome> $body
        }
    };
}
pub(crate) use check;

pub fn registry() -> Vec<Box<dyn Check>> {
    let mut v: Vec<Box<dyn Check>> = Vec::new();
    v.extend(core::checks());
    v.extend(equivariant::checks());
    v.extend(doublecomplex::checks());
    v
}

pub fn select(sel: Selection) -> Vec<Box<dyn Check>> {
    registry()
        .into_iter()
        .filter(|c| match sel {
            Selection::All => true,
            Selection::One(s) => c.suite() == s,
        })
        .collect()
}

pub(crate) fn minus_half_i() -> Qi {
    Qi::from_frac(-1, 2).mul_i()
}
