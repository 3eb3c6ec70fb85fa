//! Seeded random inputs for brute-force identity checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalars::{Monomial, Poly, Qi, Var};
use crate::spinor::{Chart, GenVector, PVector, PolyForm};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_degree: u32,
    pub max_terms: usize,
    pub coeff_bound: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Self { max_degree: 2, max_terms: 3, coeff_bound: 3 }
    }
}

pub fn coefficient(rng: &mut SampleRng, bound: i64) -> Qi {
    loop {
        let re = rng.gen_range(-bound..=bound);
        let im = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=2);
        let c = Qi::from_parts((re, den), (im, den));
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn poly(rng: &mut SampleRng, vars: &[Var], shape: Shape) -> Poly {
    let mut p = Poly::zero();
    let terms = rng.gen_range(1..=shape.max_terms);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=shape.max_degree);
        let pairs: Vec<(Var, u32)> = (0..deg).map(|_| (vars[rng.gen_range(0..vars.len())], 1)).collect();
        p.add_assign_ref(&Poly::term(coefficient(rng, shape.coeff_bound), Monomial::from_pairs(pairs)));
    }
    p
}

/// Random form with a few monomial-masked terms.
pub fn form(rng: &mut SampleRng, chart: &Chart, shape: Shape, terms: usize) -> PolyForm {
    let vars = chart.vars();
    let mut f = PolyForm::zero();
    for _ in 0..terms.max(1) {
        let mask = rng.gen_range(0..=chart.full_mask());
        f.add_term(mask, poly(rng, &vars, shape));
    }
    f
}

/// Random homogeneous form of degree `k`.
pub fn form_of_degree(rng: &mut SampleRng, chart: &Chart, k: u32, shape: Shape, terms: usize) -> PolyForm {
    let vars = chart.vars();
    let masks: Vec<u32> = (0..=chart.full_mask()).filter(|m| m.count_ones() == k).collect();
    let mut f = PolyForm::zero();
    if masks.is_empty() {
        return f;
    }
    for _ in 0..terms.max(1) {
        let mask = masks[rng.gen_range(0..masks.len())];
        f.add_term(mask, poly(rng, &vars, shape));
    }
    f
}

pub fn vector_field(rng: &mut SampleRng, chart: &Chart, shape: Shape) -> Vec<Poly> {
    let vars = chart.vars();
    (0..chart.m)
        .map(|_| if rng.gen_bool(0.6) { poly(rng, &vars, shape) } else { Poly::zero() })
        .collect()
}

pub fn section(rng: &mut SampleRng, chart: &Chart, shape: Shape) -> PVector {
    let mut c = vector_field(rng, chart, shape);
    c.extend(vector_field(rng, chart, shape));
    GenVector::new(c)
}

/// Closed 3-form `d(f·e^a∧e^b)`.
pub fn closed_cubic(rng: &mut SampleRng, chart: &Chart, shape: Shape) -> PolyForm {
    crate::polyforms::d(chart, &form_of_degree(rng, chart, 2, shape, 2))
}
