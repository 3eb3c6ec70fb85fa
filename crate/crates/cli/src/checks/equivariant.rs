use genformal::equivariant::{
    b_conjugation, check_moment, verify_a_anticommutes_with_del, verify_a_square, verify_delbar_g_del,
    verify_dg_square, verify_dh_a_anticommute, verify_leibniz, verify_symp_equivariant,
};
use genformal::examples::check_eps_invariance;
use genformal::spinor::PVector;
use genformal::Error;

use super::{check, minus_half_i, Check, Outcome, Suite};

check!(
    MomentMap,
    "equivariant.moment-map",
    Suite::Equivariant,
    "(1) ξ − i(df + iη) ∈ L; (2) f invariant; (3) ι_ξH = dη",
    |ctx| {
        let eq = ctx.scene.equivariant()?;
        let frame: Vec<PVector> = ctx.scene.j_omega()?.eigenbundle(None)?.iter().map(|v| v.lift()).collect();
        let r = check_moment(&eq, &frame)?;
        let mut bad = Vec::new();
        for (k, b) in [(1, &r.in_l), (2, &r.invariant), (3, &r.twist)] {
            if let Some(w) = &b.witness {
                bad.push(format!("bullet ({k}): {w}"));
            }
        }
        Ok(if bad.is_empty() { Outcome::pass() } else { Outcome::fail(bad.join("; ")) })
    }
);

check!(
    EpsInvariance,
    "equivariant.eps-invariance",
    Suite::Equivariant,
    "L_ξ ε = 0 for the torus and the auxiliary circle",
    |ctx| {
        Ok(match check_eps_invariance(ctx.scene) {
            Ok(()) => Outcome::pass(),
            Err(Error::NotInvariant(w)) => Outcome::fail(w),
            Err(e) => return Err(e),
        })
    }
);

check!(
    DhAnticommute,
    "equivariant.dh-a-anticommute",
    Suite::Equivariant,
    "d_H𝒜 = −𝒜d_H on invariant Cartan elements",
    |ctx| {
        let eq = ctx.scene.equivariant()?;
        Ok(Outcome::from_identity(verify_dh_a_anticommute(&eq, &ctx.cartan_samples(&eq))?))
    }
);

check!(ASquare, "equivariant.a-square", Suite::Equivariant, "𝒜² = 0", |ctx| {
    let eq = ctx.scene.equivariant()?;
    Ok(Outcome::from_identity(verify_a_square(&eq, &ctx.cartan_samples(&eq))?))
});

check!(DgSquare, "equivariant.dg-square", Suite::Equivariant, "D_G² = 0 for D_G = d_H + 𝒜", |ctx| {
    let eq = ctx.scene.equivariant()?;
    Ok(Outcome::from_identity(verify_dg_square(&eq, &ctx.cartan_samples(&eq))?))
});

check!(
    ADelAnticommute,
    "equivariant.a-del-anticommute",
    Suite::Equivariant,
    "𝒜∂ + ∂𝒜 = 0",
    |ctx| {
        let eq = ctx.scene.equivariant()?;
        let g = ctx.scene.j_omega()?.grading()?;
        Ok(Outcome::from_identity(verify_a_anticommutes_with_del(&eq, &g, &ctx.cartan_samples(&eq))?))
    }
);

check!(
    DelbarGDel,
    "equivariant.delbar-g-del",
    Suite::Equivariant,
    "∂̄_G∂ + ∂∂̄_G = 0",
    |ctx| {
        let eq = ctx.scene.equivariant()?;
        let g = ctx.scene.j_omega()?.grading()?;
        Ok(Outcome::from_identity(verify_delbar_g_del(&eq, &g, &ctx.cartan_samples(&eq))?))
    }
);

check!(
    Leibniz,
    "equivariant.leibniz",
    Suite::Equivariant,
    "∂(fα) = −(i/2)𝒜(ξ)·α + f∂α",
    |ctx| {
        let eq = ctx.scene.equivariant()?;
        let g = ctx.scene.j_omega()?.grading()?;
        let samples = ctx.graded_samples(&g);
        for j in 0..eq.rank() {
            let r = verify_leibniz(&eq, &g, &samples, j, &minus_half_i())?;
            if let Some((i, w)) = r.failure {
                return Ok(Outcome::fail(format!("generator {j}, sample {i}: {w}")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    BConjugation,
    "equivariant.b-conjugation",
    Suite::Equivariant,
    "D_G e^B = e^B D_G^B and ∂̄_G e^B = e^B ∂̄_G^B with η_B = η + ι_ξB",
    |ctx| {
        let Some(b) = &ctx.scene.b else {
            return Ok(Outcome::skip("scene has no B"));
        };
        let eq = ctx.scene.equivariant()?;
        let j = ctx.scene.j_omega()?;
        Ok(Outcome::from_identity(b_conjugation(&eq, &j, b, &ctx.cartan_samples(&eq))?))
    }
);

check!(
    SympTransport,
    "equivariant.symp-transport",
    Suite::Equivariant,
    "e^{iω}e^{ι_Λ/2i} carries d and the equivariant Cartan differential to ∂̄ and ∂̄_G",
    |ctx| {
        if !ctx.scene.tw.h.is_zero() {
            return Ok(Outcome::skip("needs H = 0"));
        }
        let eq = ctx.scene.equivariant()?;
        let g = ctx.scene.j_omega()?.grading()?;
        let samples = ctx.cartan_samples(&eq);
        Ok(Outcome::from_identity(verify_symp_equivariant(&eq, &ctx.scene.omega, &g, &samples)?))
    }
);

pub fn checks() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(MomentMap),
        Box::new(EpsInvariance),
        Box::new(DhAnticommute),
        Box::new(ASquare),
        Box::new(DgSquare),
        Box::new(ADelAnticommute),
        Box::new(DelbarGDel),
        Box::new(Leibniz),
        Box::new(BConjugation),
        Box::new(SympTransport),
    ]
}
