use genformal::dolbeault::{split_dh, verify_btransform_ops, verify_symp_transform, GradedSection};
use genformal::examples::quotient_type;
use genformal::gcs::deform::{deform, deformed_type};
use genformal::gcs::kahler::{gk_check, pq_decomposition, pq_orthogonality, pq_pattern};
use genformal::gcs::two_form_matrix;
use genformal::polyforms::{closedness_condition, d_h, integrable};
use genformal::sample;
use genformal::scalars::Point;

use super::{check, Check, Context, Outcome, Suite};

fn points(ctx: &Context) -> genformal::Result<Vec<Point>> {
    let s = ctx.scene;
    if s.points.is_empty() {
        return Ok(vec![s.complete(&Point::new())?]);
    }
    s.points.iter().map(|p| s.complete(p)).collect()
}

fn show(p: &Point) -> String {
    let parts: Vec<String> = p
        .iter()
        .filter(|(v, x)| !x.is_zero() && matches!(v, genformal::scalars::Var::Z(_) | genformal::scalars::Var::X(_)))
        .map(|(v, x)| format!("{v}={x}"))
        .collect();
    format!("({})", parts.join(", "))
}

check!(OmegaType, "core.omega-type", Suite::Core, "type(J_ω) = 0", |ctx| {
    let t = ctx.scene.j_omega()?.type_of(None)?;
    Ok(Outcome::from_bool(t == 0, || format!("type(J_ω) = {t}")))
});

check!(ComplexType, "core.complex-type", Suite::Core, "type(J_I) = n", |ctx| {
    let n = ctx.scene.chart.n();
    let t = ctx.scene.j_complex()?.type_of(None)?;
    Ok(Outcome::from_bool(t == n, || format!("type(J_I) = {t}, expected {n}")))
});

check!(
    CourantIntegrable,
    "core.courant-integrable",
    Suite::Core,
    "L_ε is closed under the twisted Courant bracket",
    |ctx| {
        let s = ctx.scene;
        let r = integrable(&s.chart, &s.eps_frame()?, &s.tw)?;
        Ok(match r.witness {
            None => Outcome::pass(),
            Some((i, j, k, p)) => Outcome::fail(format!("⟨[[s_{i}, s_{j}]], s_{k}⟩ = {p}")),
        })
    }
);

check!(
    Closedness,
    "core.closedness",
    Suite::Core,
    "ε = ΣF_ij(∂_i∧∂_j + κ dz̄_i∧dz̄_j) with F_ij holomorphic and independent of z_I",
    |ctx| {
        let s = ctx.scene;
        let family = s.holomorphic_family();
        if family.is_empty() || !s.chart.is_complex() {
            return Ok(Outcome::skip("ε has no ∂∧∂ summands"));
        }
        let ok = closedness_condition(&s.chart, &s.index_set(), &family)?;
        Ok(Outcome::from_bool(ok, || {
            let fs: Vec<String> = family.iter().map(|(i, j, f)| format!("F_{i}{j} = {f}")).collect();
            format!("not holomorphic or depends on z_I: {}", fs.join(", "))
        }))
    }
);

check!(
    TypeParity,
    "core.type-parity",
    Suite::Core,
    "type(J_ε) ≡ n (mod 2) at every sample point",
    |ctx| {
        let s = ctx.scene;
        let j = s.j_complex()?;
        let eps = s.eps();
        let n = s.chart.n();
        for p in points(ctx)? {
            let t = deformed_type(&j, &eps, &p)?;
            if (n + t) % 2 == 1 {
                return Ok(Outcome::fail(format!("type {t} at {}", show(&p))));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    GkPositivity,
    "core.gk-positivity",
    Suite::Core,
    "J_ω and J_ε commute and G = −J_ωJ_ε is positive definite",
    |ctx| {
        let s = ctx.scene;
        let jw = s.j_omega()?;
        let ji = s.j_complex()?;
        let eps = s.eps();
        for p in points(ctx)? {
            let je = match deform(&ji, &eps, Some(&p)) {
                Ok(j) => j,
                Err(e) => return Ok(Outcome::fail(format!("at {}: {e}", show(&p)))),
            };
            if let Err(e) = gk_check(&jw, &je, None) {
                return Ok(Outcome::fail(format!("at {}: {e}", show(&p))));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    GkDecomposition,
    "core.gk-decomposition",
    Suite::Core,
    "U^{p,q} vanish unless |p+q| ≤ n and p+q ≡ n (mod 2); distinct pieces are conj-Mukai orthogonal",
    |ctx| {
        let s = ctx.scene;
        let (jw, ji, eps) = (s.j_omega()?, s.j_complex()?, s.eps());
        let n = s.chart.n();
        for p in points(ctx)? {
            let je = deform(&ji, &eps, Some(&p))?;
            let pieces = pq_decomposition(&jw, &je, None)?;
            let pat = pq_pattern(n, &pieces);
            if pat.parity != Some(n as i64 % 2) || !pat.bounded || pat.total_dim != s.chart.spinor_dim() {
                return Ok(Outcome::fail(format!("at {}: {pat:?}", show(&p))));
            }
            if let Some((a, b)) = pq_orthogonality(&s.chart, &pieces)? {
                return Ok(Outcome::fail(format!("at {}: U^{a:?} and U^{b:?} pair nontrivially", show(&p))));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    DolbeaultSplit,
    "core.dolbeault-split",
    Suite::Core,
    "d_H = ∂ + ∂̄ with ∂: U^k → U^{k-1}, ∂̄: U^k → U^{k+1}",
    |ctx| {
        let s = ctx.scene;
        let g = s.j_omega()?.grading()?;
        for (i, (a, k)) in ctx.graded_samples(&g).into_iter().enumerate() {
            let sec = GradedSection::new(&g, a.clone(), k)?;
            let sp = match split_dh(&s.chart, &g, &sec, &s.tw) {
                Ok(sp) => sp,
                Err(e) => return Ok(Outcome::fail(format!("sample {i}: {e}"))),
            };
            if sp.del.alpha.add(&sp.delbar.alpha) != d_h(&s.chart, &a, &s.tw) {
                return Ok(Outcome::fail(format!("sample {i}: ∂ + ∂̄ ≠ d_H")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    SympTransform,
    "core.symp-transform",
    Suite::Core,
    "∂̄(Tα) = T(dα) and −2i∂(Tα) = T(δα) for T = e^{iω}e^{ι_Λ/2i}",
    |ctx| {
        let s = ctx.scene;
        let mut rng = ctx.rng();
        for i in 0..ctx.samples {
            let a = sample::form(&mut rng, &s.chart, ctx.shape(), 2);
            let r = verify_symp_transform(&s.chart, &s.omega, &a)?;
            if !r.pass() {
                return Ok(Outcome::fail(format!(
                    "sample {i}: ∂̄ residual {}, ∂ residual {}",
                    s.chart.fmt_form(&r.delbar_residual),
                    s.chart.fmt_form(&r.del_residual)
                )));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    BTransform,
    "core.b-transform",
    Suite::Core,
    "type(J_B) = type(J), U_B^k = e^{−B}U^k, ∂̄_B = e^{−B}∂̄e^{B}",
    |ctx| {
        let s = ctx.scene;
        let Some(b) = &s.b else {
            return Ok(Outcome::skip("scene has no B"));
        };
        for j in [s.j_omega()?, s.j_complex()?] {
            let jb = j.b_transform(&two_form_matrix(&s.chart, b))?;
            let (t, tb) = (j.type_of(None)?, jb.type_of(None)?);
            if t != tb {
                return Ok(Outcome::fail(format!("type {t} becomes {tb}")));
            }
            let g = j.grading()?;
            let samples = ctx
                .graded_samples(&g)
                .into_iter()
                .map(|(a, k)| GradedSection::new(&g, a, k))
                .collect::<genformal::Result<Vec<_>>>()?;
            let r = verify_btransform_ops(&j, b, &samples, &s.tw)?;
            if let Some((i, op)) = r.failure {
                return Ok(Outcome::fail(format!("sample {i}: {op} does not conjugate")));
            }
        }
        Ok(Outcome::pass())
    }
);

check!(
    QuotientTypes,
    "core.quotient-type",
    Suite::Core,
    "type(J̃_ε) = type(J_ε) − dim T + 2 dim(𝔱_M ∩ π(L_ε)); type(J̃_ω) = 0",
    |ctx| {
        let s = ctx.scene;
        if s.level.is_empty() || s.points.is_empty() {
            return Ok(Outcome::skip("scene has no level set"));
        }
        let top = s.quotient_dim();
        for p in &s.points {
            match quotient_type(s, p) {
                Ok(t) if t.omega == 0 && t.eps <= top && (top + t.eps).is_multiple_of(2) => {}
                Ok(t) => return Ok(Outcome::fail(format!("at {}: {t:?}", show(&s.complete(p)?)))),
                Err(e) => return Ok(Outcome::fail(format!("at {}: {e}", show(&s.complete(p)?)))),
            }
        }
        Ok(Outcome::pass())
    }
);

pub fn checks() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(OmegaType),
        Box::new(ComplexType),
        Box::new(CourantIntegrable),
        Box::new(Closedness),
        Box::new(TypeParity),
        Box::new(GkPositivity),
        Box::new(GkDecomposition),
        Box::new(DolbeaultSplit),
        Box::new(SympTransform),
        Box::new(BTransform),
        Box::new(QuotientTypes),
    ]
}
