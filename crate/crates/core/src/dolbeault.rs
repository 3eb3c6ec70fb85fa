//! ∂/∂̄ splitting of d_H for a generalized complex structure.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gcs::{Gcs, two_form_matrix};
use crate::linalg::QMatrix;
use crate::polyforms::{d, d_h, exp_nilpotent, omega_form, poisson_contraction, TwistData};
use crate::scalars::Qi;
use crate::spinor::rep::AnyGrading;
use crate::spinor::{Chart, PolyForm};

/// A form together with its claimed grade.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSection {
    pub alpha: PolyForm,
    pub k: i64,
}

impl GradedSection {
    /// Checks `P_k α = α`.
    pub fn new(grading: &AnyGrading, alpha: PolyForm, k: i64) -> Result<Self> {
        if grading.project(k, &alpha) != alpha {
            return Err(Error::InvalidParameter(format!("form is not a section of U^{k}")));
        }
        Ok(Self { alpha, k })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub del: GradedSection,
    pub delbar: GradedSection,
}

/// ∂ = P_{k−1} d_H, ∂̄ = P_{k+1} d_H; anything left over is reported.
pub fn split_dh(chart: &Chart, grading: &AnyGrading, s: &GradedSection, tw: &TwistData) -> Result<Split> {
    let dh = d_h(chart, &s.alpha, tw);
    let parts = grading.components(&dh);
    let del = parts.get(&(s.k - 1)).cloned().unwrap_or_default();
    let delbar = parts.get(&(s.k + 1)).cloned().unwrap_or_default();
    if let Some((k, r)) = parts.iter().find(|(k, _)| **k != s.k - 1 && **k != s.k + 1) {
        return Err(Error::ResidualOutsideAdjacentDegrees(format!(
            "component in U^{k}: {}",
            chart.fmt_form(r)
        )));
    }
    Ok(Split {
        del: GradedSection { alpha: del, k: s.k - 1 },
        delbar: GradedSection { alpha: delbar, k: s.k + 1 },
    })
}

/// ∂ on an arbitrary form: Σ_k P_{k−1} d_H P_k.
pub fn del_total(chart: &Chart, grading: &AnyGrading, alpha: &PolyForm, tw: &TwistData) -> PolyForm {
    shifted_total(chart, grading, alpha, tw, -1)
}

/// ∂̄ on an arbitrary form: Σ_k P_{k+1} d_H P_k.
pub fn delbar_total(chart: &Chart, grading: &AnyGrading, alpha: &PolyForm, tw: &TwistData) -> PolyForm {
    shifted_total(chart, grading, alpha, tw, 1)
}

fn shifted_total(chart: &Chart, grading: &AnyGrading, alpha: &PolyForm, tw: &TwistData, shift: i64) -> PolyForm {
    let mut out = PolyForm::zero();
    for (k, part) in grading.components(alpha) {
        out.add_assign(&grading.project(k + shift, &d_h(chart, &part, tw)));
    }
    out
}

/// `e^{iω} e^{ι_Λ/2i} α`.
pub fn symp_transform(omega: &QMatrix, alpha: &PolyForm) -> Result<PolyForm> {
    let il = poisson_contraction(omega)?.scale(&Qi::from_frac(-1, 2).mul_i());
    let w = omega_form(omega).scale(&Qi::i());
    let inner = exp_nilpotent(|v| il.apply_poly(v), alpha);
    Ok(exp_nilpotent(|v| w.wedge(v), &inner))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SympReport {
    /// ∂̄(Tα) − T(dα).
    pub delbar_residual: PolyForm,
    /// −2i∂(Tα) − T(δα).
    pub del_residual: PolyForm,
    /// Tα_p lies in U^{p−n} for every degree p.
    pub graded: bool,
}

impl SympReport {
    pub fn pass(&self) -> bool {
        self.graded && self.delbar_residual.is_zero() && self.del_residual.is_zero()
    }
}

/// Checks −2i∂(Tα) = T(δα) and ∂̄(Tα) = T(dα) for T = e^{iω}e^{ι_Λ/2i}.
pub fn verify_symp_transform(chart: &Chart, omega: &QMatrix, alpha: &PolyForm) -> Result<SympReport> {
    let j = Gcs::from_symplectic(*chart, omega)?;
    let g = j.grading()?;
    let n = chart.n() as i64;
    let mut del = PolyForm::zero();
    let mut delbar = PolyForm::zero();
    let mut graded = true;
    for p in alpha.degrees() {
        let a = alpha.degree_part(p);
        let t = symp_transform(omega, &a)?;
        let k = p as i64 - n;
        graded &= g.project(k, &t) == t;
        let dt = d(chart, &t);
        del.add_assign(&g.project(k - 1, &dt));
        delbar.add_assign(&g.project(k + 1, &dt));
    }
    let t_d = symp_transform(omega, &d(chart, alpha))?;
    let t_delta = symp_transform(omega, &crate::polyforms::koszul_delta(chart, alpha, omega)?)?;
    Ok(SympReport {
        delbar_residual: delbar.sub(&t_d),
        del_residual: del.scale(&Qi::from_int(-2).mul_i()).sub(&t_delta),
        graded,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BTransformReport {
    pub samples: usize,
    /// First failing sample index with the operator name.
    pub failure: Option<(usize, &'static str)>,
}

impl BTransformReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks ∂̄_B = e^{−B}∂̄e^{B} and ∂_B = e^{−B}∂e^{B} for J_B = e^B J e^{−B}, on
/// sections e^{−B}s with s ∈ Γ(U^k) for J.
pub fn verify_btransform_ops(
    j: &Gcs,
    b: &PolyForm,
    samples: &[GradedSection],
    tw: &TwistData,
) -> Result<BTransformReport> {
    let chart = j.chart;
    if b.degrees().iter().any(|&k| k != 2) || !d(&chart, b).is_zero() {
        return Err(Error::BNotClosed);
    }
    let g = j.grading()?;
    let jb = j.b_transform(&two_form_matrix(&chart, b))?;
    let gb = jb.grading()?;
    let exp_b = |sign: i64, v: &PolyForm| {
        let bs = b.scale(&Qi::from_int(sign));
        exp_nilpotent(|u| bs.wedge(u), v)
    };
    for (idx, s) in samples.iter().enumerate() {
        let plain = split_dh(&chart, &g, s, tw)?;
        let moved = GradedSection { alpha: exp_b(-1, &s.alpha), k: s.k };
        if gb.project(s.k, &moved.alpha) != moved.alpha {
            return Err(Error::InvalidParameter("e^{−B} does not carry U^k to U_B^k".into()));
        }
        let twisted = split_dh(&chart, &gb, &moved, tw)?;
        if twisted.delbar.alpha != exp_b(-1, &plain.delbar.alpha) {
            return Ok(BTransformReport { samples: samples.len(), failure: Some((idx, "delbar")) });
        }
        if twisted.del.alpha != exp_b(-1, &plain.del.alpha) {
            return Ok(BTransformReport { samples: samples.len(), failure: Some((idx, "del")) });
        }
    }
    Ok(BTransformReport { samples: samples.len(), failure: None })
}

/// Components of d(s) for s ∈ U^{p,q} of a generalized Kähler pair, keyed by
/// the corner (p±1, q±1) they land in.
pub fn gk_four_split(
    chart: &Chart,
    g1: &AnyGrading,
    g2: &AnyGrading,
    s: &PolyForm,
    p: i64,
    q: i64,
) -> Result<BTreeMap<(i64, i64), PolyForm>> {
    if g1.project(p, s) != *s || g2.project(q, s) != *s {
        return Err(Error::InvalidParameter(format!("form is not a section of U^{{{p},{q}}}")));
    }
    let ds = d(chart, s);
    let mut out = BTreeMap::new();
    let mut rest = ds.clone();
    for a in [-1, 1] {
        let first = g1.project(p + a, &ds);
        for b in [-1, 1] {
            let c = g2.project(q + b, &first);
            rest = rest.sub(&c);
            out.insert((p + a, q + b), c);
        }
    }
    if !rest.is_zero() {
        return Err(Error::ResidualOutsideCorners(chart.fmt_form(&rest)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcs::standard_omega;
    use crate::polyforms::parse_form;
    use crate::scalars::{Var, WirtingerKind};

    fn classical_delbar(chart: &Chart, a: &PolyForm) -> PolyForm {
        let n = chart.n();
        let vars = chart.vars();
        let mut out = PolyForm::zero();
        for k in 0..n {
            let mut part = PolyForm::zero();
            for (mask, c) in a.iter() {
                part.add_term(mask, c.wirtinger(Var::Zb(k as u16), WirtingerKind::Anti, &vars).unwrap());
            }
            out.add_assign(&part.wedge_e(n + k));
        }
        out
    }

    #[test]
    fn complex_split_is_classical() {
        let ch = Chart::complex(2);
        let j = Gcs::standard_complex(ch);
        let g = j.grading().unwrap();
        let a = parse_form(&ch, "z0*zb1*dz0 + zb0^2*dz1").unwrap();
        let comps = g.components(&a);
        assert_eq!(comps.len(), 1);
        let k = *comps.keys().next().unwrap();
        let s = GradedSection::new(&g, a.clone(), k).unwrap();
        let sp = split_dh(&ch, &g, &s, &TwistData::zero()).unwrap();
        assert_eq!(sp.delbar.alpha, classical_delbar(&ch, &a));
        assert_eq!(sp.del.alpha.add(&sp.delbar.alpha), d(&ch, &a));
    }

    #[test]
    fn closed_constant_gives_zero() {
        let ch = Chart::complex(1);
        let j = Gcs::standard_complex(ch);
        let g = j.grading().unwrap();
        let a = parse_form(&ch, "3*dz0").unwrap();
        let k = *g.components(&a).keys().next().unwrap();
        let sp = split_dh(&ch, &g, &GradedSection::new(&g, a, k).unwrap(), &TwistData::zero()).unwrap();
        assert!(sp.del.alpha.is_zero() && sp.delbar.alpha.is_zero());
    }

    #[test]
    fn symp_transform_identities() {
        for ch in [Chart::real(2), Chart::real(4)] {
            let w = standard_omega(&ch);
            for src in ["1", "x0*x1 + x1^2*dx0", "x0^2*dx0∧dx1 + x1*dx1"] {
                let a = parse_form(&ch, src).unwrap();
                let r = verify_symp_transform(&ch, &w, &a).unwrap();
                assert!(r.pass(), "{src} on {ch:?}: {r:?}");
            }
        }
    }

    #[test]
    fn flat_kahler_corners() {
        let ch = Chart::complex(2);
        let g1 = Gcs::standard_symplectic(ch).grading().unwrap();
        let g2 = Gcs::standard_complex(ch).grading().unwrap();
        let basis = match &g1 {
            AnyGrading::Constant(c) => c.clone(),
            _ => unreachable!(),
        };
        let z = crate::scalars::Poly::var(Var::Z(0)).mul_ref(&crate::scalars::Poly::var(Var::Zb(1)));
        for p in -2..=2 {
            for f in basis.eigenbasis(p) {
                let s = f.lift().scale_poly(&z);
                for (q, part) in g2.components(&s) {
                    let split = gk_four_split(&ch, &g1, &g2, &part, p, q).unwrap();
                    let total = split.values().fold(PolyForm::zero(), |a, b| a.add(b));
                    assert_eq!(total, d(&ch, &part));
                }
            }
        }
    }
}
