use genformal::doublecomplex::generate::{
    dots_and_squares, hodge_pair_model, horizontal_arrow, random_complex, staircase, zigzag_with_dot,
};
use genformal::doublecomplex::{check_ddelta, quasi_iso_check, spectral_pages, total_cohomology, FiniteDoubleComplex};
use rand::Rng;

use super::{check, Check, Outcome, Suite};

fn converges(k: &FiniteDoubleComplex) -> Option<String> {
    let h = total_cohomology(k);
    let e = spectral_pages(k, 1).infinity_by_degree();
    let h: Vec<(i32, usize)> = h.into_iter().filter(|(_, d)| *d > 0).collect();
    let e: Vec<(i32, usize)> = e.into_iter().filter(|(_, d)| *d > 0).collect();
    (h != e).then(|| format!("H(Tot) = {h:?} but E_∞ = {e:?}"))
}

check!(
    SceneComplex,
    "doublecomplex.scene",
    Suite::DoubleComplex,
    "E_∞ of the shipped complex matches H(Tot); Dδ-lemma when δ is given",
    |ctx| {
        let Some(spec) = &ctx.scene.double_complex else {
            return Ok(Outcome::skip("scene has no double complex"));
        };
        let k = spec.build()?;
        if let Some(w) = converges(&k) {
            return Ok(Outcome::fail(w));
        }
        if k.delta().is_some() {
            let r = check_ddelta(&k)?;
            if r.contradicts_lemma() {
                return Ok(Outcome::fail(format!("hypotheses hold but the conclusion fails: {r:?}")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    EInfinity,
    "doublecomplex.e-infinity",
    Suite::DoubleComplex,
    "Σ_{p+q=k} dim E_∞^{p,q} = dim H^k(Tot) for bounded complexes",
    |ctx| {
        let mut rng = ctx.rng();
        for i in 0..ctx.complexes {
            let k = random_complex(&mut rng);
            if let Some(w) = converges(&k) {
                return Ok(Outcome::fail(format!("complex {i}: {w}")));
            }
            if !spectral_pages(&k, 3).monotone() {
                return Ok(Outcome::fail(format!("complex {i}: page dimensions increase")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    DdeltaModels,
    "doublecomplex.ddelta-models",
    Suite::DoubleComplex,
    "(a) im d ∩ ker δ = ker d ∩ im δ = im dδ and (b) E_1 = E_∞ imply the Dδ conclusion",
    |ctx| {
        let mut rng = ctx.rng();
        let count = (ctx.complexes / 5).max(1);
        for i in 0..count {
            let k = hodge_pair_model(&mut rng);
            let r = check_ddelta(&k)?;
            if !(r.hypothesis_a && r.hypothesis_b && r.conclusion) {
                return Ok(Outcome::fail(format!("model {i}: {r:?}")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    Degeneration,
    "doublecomplex.degeneration",
    Suite::DoubleComplex,
    "nonzero d_1 and d_2 are detected (E_1 ≠ E_2, E_2 ≠ E_3)",
    |_ctx| {
        let p = spectral_pages(&horizontal_arrow(), 2);
        if p.pages[1] == p.pages[2] {
            return Ok(Outcome::fail("E_1 = E_2 on a complex with a horizontal arrow"));
        }
        let p = spectral_pages(&staircase(), 3);
        Ok(Outcome::from_bool(p.pages[2] != p.pages[3], || "E_2 = E_3 on the staircase".into()))
    }
);

check!(
    QuasiIso,
    "doublecomplex.quasi-iso",
    Suite::DoubleComplex,
    "(ker ∂, ∂̄) ↪ (K, ∂̄) ↠ (H_∂, ∂̄) are quasi-isomorphisms for dots and squares",
    |ctx| {
        let mut rng = ctx.rng();
        for i in 0..ctx.samples {
            let pieces = rng.gen_range(1..=4);
            let r = quasi_iso_check(&dots_and_squares(&mut rng, pieces))?;
            if !(r.inclusion_iso && r.projection_iso) {
                return Ok(Outcome::fail(format!("model {i}: {r:?}")));
            }
        }
        let r = quasi_iso_check(&zigzag_with_dot())?;
        Ok(Outcome::from_bool(!(r.inclusion_iso && r.projection_iso), || {
            "negative control: the zigzag passed".into()
        }))
    }
);

pub fn checks() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(SceneComplex),
        Box::new(EInfinity),
        Box::new(DdeltaModels),
        Box::new(Degeneration),
        Box::new(QuasiIso),
    ]
}
