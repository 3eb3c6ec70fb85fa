//! Torus actions, twisted generalized moment maps and the equivariant operators
//! 𝒜, D_G = d_H + 𝒜 and ∂̄_G = ∂̄ + 𝒜 on polynomial Cartan elements.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::dolbeault::{del_total, delbar_total, symp_transform};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::polyforms::{d, d_fn, d_h, derivative, exp_nilpotent, iota, lie, lie_bracket, TwistData};
use crate::sample::{self, SampleRng, Shape};
use crate::scalars::{Monomial, Poly, Qi};
use crate::spinor::rep::AnyGrading;
use crate::spinor::{clifford_act, pairing, Chart, GenVector, PVector, PolyForm};

/// X = (i/2) Σ w_k (z_k ∂_{z_k} − z̄_k ∂_{z̄_k}), the infinitesimal rotation with weights w.
pub fn linear_generator(chart: &Chart, weights: &[Qi]) -> Result<Vec<Poly>> {
    if !chart.is_complex() || weights.len() != chart.n() {
        return Err(Error::ChartMismatch("weights must match a complex chart".into()));
    }
    let n = chart.n();
    let half_i = Qi::from_frac(1, 2).mul_i();
    let mut x = vec![Poly::zero(); chart.m];
    for (k, w) in weights.iter().enumerate() {
        let c = &half_i * w;
        x[k] = Poly::var(chart.var(k)).scale(&c);
        x[n + k] = Poly::var(chart.var(n + k)).scale(&-c);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionData {
    pub generators: Vec<Vec<Poly>>,
    pub tw: TwistData,
}

impl ActionData {
    /// Checks that the generators commute and preserve H.
    pub fn new(chart: &Chart, generators: Vec<Vec<Poly>>, tw: TwistData) -> Result<Self> {
        if generators.iter().any(|g| g.len() != chart.m) {
            return Err(Error::ChartMismatch("generator length".into()));
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if lie_bracket(chart, &generators[i], &generators[j]).iter().any(|p| !p.is_zero()) {
                    return Err(Error::NotInvariant(format!("generators {i} and {j} do not commute")));
                }
            }
            if !lie(chart, &generators[i], &tw.h).is_zero() {
                return Err(Error::NotInvariant(format!("H is not invariant under generator {i}")));
            }
        }
        Ok(Self { generators, tw })
    }

    pub fn torus(chart: &Chart, weights: &[Vec<Qi>], tw: TwistData) -> Result<Self> {
        let gens = weights.iter().map(|w| linear_generator(chart, w)).collect::<Result<Vec<_>>>()?;
        Self::new(chart, gens, tw)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentData {
    pub f: Vec<Poly>,
    pub eta: Vec<PolyForm>,
}

/// Polynomials in formal variables x_1..x_r with form coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CartanElement {
    pub r: usize,
    pub terms: BTreeMap<Vec<u32>, PolyForm>,
}

impl CartanElement {
    pub fn zero(r: usize) -> Self {
        Self { r, terms: BTreeMap::new() }
    }

    /// The element `α` with x-degree 0.
    pub fn form(r: usize, alpha: PolyForm) -> Self {
        let mut e = Self::zero(r);
        e.add_term(vec![0; r], alpha);
        e
    }

    pub fn add_term(&mut self, x: Vec<u32>, alpha: PolyForm) {
        if alpha.is_zero() {
            return;
        }
        let entry = self.terms.entry(x.clone()).or_default();
        entry.add_assign(&alpha);
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (x, a) in &o.terms {
            out.add_term(x.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Qi::one()))
    }

    pub fn scale(&self, c: &Qi) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Applies a form operator coefficientwise.
    pub fn map(&self, f: impl Fn(&PolyForm) -> PolyForm) -> Self {
        let mut out = Self::zero(self.r);
        for (x, a) in &self.terms {
            out.add_term(x.clone(), f(a));
        }
        out
    }

    /// Fallible variant of [`CartanElement::map`].
    pub fn try_map(&self, f: impl Fn(&PolyForm) -> Result<PolyForm>) -> Result<Self> {
        let mut out = Self::zero(self.r);
        for (x, a) in &self.terms {
            out.add_term(x.clone(), f(a)?);
        }
        Ok(out)
    }

    /// Highest x-degree.
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|x| x.iter().sum()).max().unwrap_or(0)
    }

    /// Evaluation at ξ = Σ c_j e_j, i.e. substituting x_j = c_j.
    pub fn at(&self, c: &[Qi]) -> PolyForm {
        let mut out = PolyForm::zero();
        for (x, a) in &self.terms {
            let w = x.iter().zip(c).fold(Qi::one(), |acc, (e, v)| &acc * &v.pow(*e));
            out.add_assign(&a.scale(&w));
        }
        out
    }

    pub fn display(&self, chart: &Chart) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(x, a)| {
                let xs: Vec<String> = x
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(j, e)| if *e == 1 { format!("x{j}") } else { format!("x{j}^{e}") })
                    .collect();
                if xs.is_empty() {
                    format!("({})", chart.fmt_form(a))
                } else {
                    format!("{}·({})", xs.join("·"), chart.fmt_form(a))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Outcome of an identity checked over samples.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub checked: usize,
    /// First failing sample index and a rendering of the nonzero residual.
    pub failure: Option<(usize, String)>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `residual` on every sample in parallel, reporting the first failure.
pub fn check_samples<T: Sync>(samples: &[T], residual: impl Fn(&T) -> Result<Option<String>> + Sync) -> Result<IdentityReport> {
    let results: Vec<Result<Option<String>>> = samples.par_iter().map(&residual).collect();
    let mut failure = None;
    for (i, r) in results.into_iter().enumerate() {
        if let Some(w) = r? {
            failure = Some((i, w));
            break;
        }
    }
    Ok(IdentityReport { checked: samples.len(), failure })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bullet {
    pub pass: bool,
    pub witness: Option<String>,
}

impl Bullet {
    fn ok() -> Self {
        Self { pass: true, witness: None }
    }
    fn fail(w: String) -> Self {
        Self { pass: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    /// ξ_M − i(df + iη) ∈ L.
    pub in_l: Bullet,
    /// L_ξ f = 0.
    pub invariant: Bullet,
    /// ι_ξ H = dη.
    pub twist: Bullet,
}

impl MomentReport {
    pub fn pass(&self) -> bool {
        self.in_l.pass && self.invariant.pass && self.twist.pass
    }
}

/// A torus action with moment data on a chart.
#[derive(Clone, Debug)]
pub struct Equivariant {
    pub chart: Chart,
    pub act: ActionData,
    pub mom: MomentData,
    sections: Vec<PVector>,
}

impl Equivariant {
    pub fn new(chart: Chart, act: ActionData, mom: MomentData) -> Result<Self> {
        let r = act.rank();
        if mom.f.len() != r || mom.eta.len() != r {
            return Err(Error::InvalidParameter(format!("moment data must have {r} components")));
        }
        if mom.eta.iter().any(|e| e.degrees().iter().any(|&k| k != 1)) {
            return Err(Error::InvalidParameter("moment one-forms must have degree 1".into()));
        }
        let sections = (0..r)
            .map(|j| {
                let df = d_fn(&chart, &mom.f[j]).scale(&Qi::i()).sub(&mom.eta[j]);
                let mut c: Vec<Poly> = act.generators[j].iter().map(|p| p.scale(&-Qi::one())).collect();
                c.extend((0..chart.m).map(|a| df.get(1 << a)));
                GenVector::new(c)
            })
            .collect();
        Ok(Self { chart, act, mom, sections })
    }

    pub fn rank(&self) -> usize {
        self.act.rank()
    }

    pub fn tw(&self) -> &TwistData {
        &self.act.tw
    }

    /// 𝒜(ξ_j) = −ξ_j + i df_j − η_j.
    pub fn section(&self, j: usize) -> &PVector {
        &self.sections[j]
    }

    /// Same action with η replaced by η + ι_ξB.
    pub fn with_b(&self, b: &PolyForm) -> Result<Self> {
        let eta = self
            .mom
            .eta
            .iter()
            .zip(&self.act.generators)
            .map(|(e, x)| e.add(&iota(x, b)))
            .collect();
        Self::new(self.chart, self.act.clone(), MomentData { f: self.mom.f.clone(), eta })
    }

    pub fn is_invariant_form(&self, a: &PolyForm) -> bool {
        self.act.generators.iter().all(|x| lie(&self.chart, x, a).is_zero())
    }

    pub fn check_invariant(&self, e: &CartanElement) -> Result<()> {
        for (x, a) in &e.terms {
            if !self.is_invariant_form(a) {
                return Err(Error::NotInvariant(format!("coefficient of x-exponent {x:?}")));
            }
        }
        Ok(())
    }

    fn raise(&self, e: &CartanElement, op: impl Fn(usize, &PolyForm) -> PolyForm) -> CartanElement {
        let mut out = CartanElement::zero(e.r);
        for (x, a) in &e.terms {
            for j in 0..self.rank() {
                let mut y = x.clone();
                y[j] += 1;
                out.add_term(y, op(j, a));
            }
        }
        out
    }

    /// 𝒜α = Σ_j x_j 𝒜(ξ_j)·α.
    pub fn script_a(&self, e: &CartanElement) -> Result<CartanElement> {
        self.check_invariant(e)?;
        Ok(self.script_a_unchecked(e))
    }

    fn script_a_unchecked(&self, e: &CartanElement) -> CartanElement {
        self.raise(e, |j, a| clifford_act(&self.sections[j], a))
    }

    /// Cartan d'α = −Σ_j x_j ι_{ξ_j}α.
    pub fn cartan_d_prime(&self, e: &CartanElement) -> CartanElement {
        self.raise(e, |j, a| iota(&self.act.generators[j], a).neg())
    }

    pub fn d_h(&self, e: &CartanElement) -> CartanElement {
        e.map(|a| d_h(&self.chart, a, self.tw()))
    }

    pub fn d_g(&self, e: &CartanElement) -> Result<CartanElement> {
        Ok(self.d_h(e).add(&self.script_a(e)?))
    }

    pub fn del(&self, g: &AnyGrading, e: &CartanElement) -> CartanElement {
        e.map(|a| del_total(&self.chart, g, a, self.tw()))
    }

    pub fn delbar(&self, g: &AnyGrading, e: &CartanElement) -> CartanElement {
        e.map(|a| delbar_total(&self.chart, g, a, self.tw()))
    }

    pub fn delbar_g(&self, g: &AnyGrading, e: &CartanElement) -> Result<CartanElement> {
        Ok(self.delbar(g, e).add(&self.script_a(e)?))
    }

    /// Random invariant Cartan element with x-degree ≤ `max_x` and forms of
    /// polynomial degree ≤ `shape.max_degree`, built from invariant monomial terms.
    pub fn sample_invariant(&self, rng: &mut SampleRng, shape: Shape, max_x: u32, terms: usize) -> CartanElement {
        let r = self.rank();
        let mut out = CartanElement::zero(r);
        let mut placed = 0;
        let mut attempts = 0;
        while placed < terms && attempts < 4000 {
            attempts += 1;
            let mask = rng.gen_range(0..=self.chart.full_mask());
            let deg = rng.gen_range(0..=shape.max_degree);
            let vars = self.chart.vars();
            let mono = Monomial::from_pairs((0..deg).map(|_| (vars[rng.gen_range(0..vars.len())], 1)).collect());
            let c = sample::coefficient(rng, shape.coeff_bound);
            let a = PolyForm::term(mask, Poly::term(c, mono));
            if !self.is_invariant_form(&a) {
                continue;
            }
            let mut x = vec![0u32; r];
            let total = if r == 0 { 0 } else { rng.gen_range(0..=max_x) };
            for _ in 0..total {
                x[rng.gen_range(0..r)] += 1;
            }
            out.add_term(x, a);
            placed += 1;
        }
        out
    }
}

/// Moment-map bullets, with membership in L tested by pairing against an L-frame.
pub fn check_moment(eq: &Equivariant, frame: &[PVector]) -> Result<MomentReport> {
    let chart = &eq.chart;
    let mut in_l = Bullet::ok();
    'outer: for j in 0..eq.rank() {
        for (k, s) in frame.iter().enumerate() {
            let p = pairing(eq.section(j), s)?;
            if !p.is_zero() {
                in_l = Bullet::fail(format!("generator {j}: ⟨ξ − i(df + iη), s_{k}⟩ = {p}"));
                break 'outer;
            }
        }
    }
    let mut invariant = Bullet::ok();
    'inv: for (i, x) in eq.act.generators.iter().enumerate() {
        for (j, f) in eq.mom.f.iter().enumerate() {
            let lf = derivative(chart, x, f);
            if !lf.is_zero() {
                invariant = Bullet::fail(format!("L_ξ{i} f_{j} = {lf}"));
                break 'inv;
            }
        }
    }
    let mut twist = Bullet::ok();
    for (j, x) in eq.act.generators.iter().enumerate() {
        let r = iota(x, &eq.tw().h).sub(&d(chart, &eq.mom.eta[j]));
        if !r.is_zero() {
            twist = Bullet::fail(format!("generator {j}: ι_ξH − dη = {}", chart.fmt_form(&r)));
            break;
        }
    }
    Ok(MomentReport { in_l, invariant, twist })
}

fn residual(chart: &Chart, r: &CartanElement) -> Option<String> {
    if r.is_zero() {
        None
    } else {
        Some(r.display(chart))
    }
}

/// d_H𝒜 + 𝒜d_H = 0. The invariance check on 𝒜 is skipped so that broken
/// moment data still produces a witness.
pub fn verify_dh_a_anticommute(eq: &Equivariant, samples: &[CartanElement]) -> Result<IdentityReport> {
    check_samples(samples, |e| {
        let lhs = eq.d_h(&eq.script_a_unchecked(e)).add(&eq.script_a_unchecked(&eq.d_h(e)));
        Ok(residual(&eq.chart, &lhs))
    })
}

/// 𝒜² = 0.
pub fn verify_a_square(eq: &Equivariant, samples: &[CartanElement]) -> Result<IdentityReport> {
    check_samples(samples, |e| {
        let a = eq.script_a(e)?;
        Ok(residual(&eq.chart, &eq.script_a_unchecked(&a)))
    })
}

/// D_G² = 0.
pub fn verify_dg_square(eq: &Equivariant, samples: &[CartanElement]) -> Result<IdentityReport> {
    check_samples(samples, |e| {
        let once = eq.d_g(e)?;
        Ok(residual(&eq.chart, &eq.d_g(&once)?))
    })
}

/// ∂̄𝒜 = −𝒜∂̄ and ∂𝒜 = −𝒜∂.
pub fn verify_a_anticommutes_with_del(eq: &Equivariant, g: &AnyGrading, samples: &[CartanElement]) -> Result<IdentityReport> {
    check_samples(samples, |e| {
        let a = eq.script_a(e)?;
        let r1 = eq.delbar(g, &a).add(&eq.script_a_unchecked(&eq.delbar(g, e)));
        if let Some(w) = residual(&eq.chart, &r1) {
            return Ok(Some(format!("∂̄𝒜 + 𝒜∂̄ = {w}")));
        }
        let r2 = eq.del(g, &a).add(&eq.script_a_unchecked(&eq.del(g, e)));
        Ok(residual(&eq.chart, &r2).map(|w| format!("∂𝒜 + 𝒜∂ = {w}")))
    })
}

/// ∂̄_G∂ + ∂∂̄_G = 0.
pub fn verify_delbar_g_del(eq: &Equivariant, g: &AnyGrading, samples: &[CartanElement]) -> Result<IdentityReport> {
    check_samples(samples, |e| {
        let lhs = eq.delbar_g(g, &eq.del(g, e))?.add(&eq.del(g, &eq.delbar_g(g, e)?));
        Ok(residual(&eq.chart, &lhs))
    })
}

/// Symplectic case: 𝒜T = Td', ∂̄_G T = T d_G and −2i∂T = Tδ for
/// T = e^{iω}e^{ι_Λ/2i}, with H = 0.
pub fn verify_symp_equivariant(eq: &Equivariant, omega: &QMatrix, g: &AnyGrading, samples: &[CartanElement]) -> Result<IdentityReport> {
    let chart = eq.chart;
    check_samples(samples, |e| {
        let t = |x: &CartanElement| x.try_map(|a| symp_transform(omega, a));
        let te = t(e)?;
        let r = eq.script_a(&te)?.sub(&t(&eq.cartan_d_prime(e))?);
        if let Some(w) = residual(&chart, &r) {
            return Ok(Some(format!("𝒜T − Td' = {w}")));
        }
        let dg = e.map(|a| d(&chart, a)).add(&eq.cartan_d_prime(e));
        let r = eq.delbar_g(g, &te)?.sub(&t(&dg)?);
        if let Some(w) = residual(&chart, &r) {
            return Ok(Some(format!("∂̄_G T − T d_G = {w}")));
        }
        let delta = e.try_map(|a| crate::polyforms::koszul_delta(&chart, a, omega))?;
        let r = eq.del(g, &te).scale(&Qi::from_int(-2).mul_i()).sub(&t(&delta)?);
        Ok(residual(&chart, &r).map(|w| format!("−2i∂T − Tδ = {w}")))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizReport {
    pub checked: usize,
    /// ∂(fα) − f∂α − c·𝒜(ξ)·α must vanish for this coefficient c.
    pub coefficient: Qi,
    pub failure: Option<(usize, String)>,
}

/// ∂(f_j α) = c·𝒜(ξ_j)·α + f_j ∂α on graded samples, with c the coefficient
/// of the L-component of df_j.
pub fn verify_leibniz(
    eq: &Equivariant,
    g: &AnyGrading,
    samples: &[(PolyForm, i64)],
    j: usize,
    coefficient: &Qi,
) -> Result<LeibnizReport> {
    let chart = eq.chart;
    let f = &eq.mom.f[j];
    let rep = check_samples(samples, |(a, k)| {
        if g.project(*k, a) != *a {
            return Err(Error::InvalidParameter(format!("sample not in U^{k}")));
        }
        let lhs = g.project(k - 1, &d_h(&chart, &a.scale_poly(f), eq.tw()));
        let rhs = clifford_act(eq.section(j), a)
            .scale(coefficient)
            .add(&g.project(k - 1, &d_h(&chart, a, eq.tw())).scale_poly(f));
        let r = lhs.sub(&rhs);
        Ok(if r.is_zero() { None } else { Some(chart.fmt_form(&r)) })
    })?;
    Ok(LeibnizReport { checked: rep.checked, coefficient: coefficient.clone(), failure: rep.failure })
}

/// D_G e^B = e^B D_G^B and ∂̄_G e^B = e^B ∂̄_G^B, where the B-side uses
/// η + ι_ξB and the grading of the B-transformed structure.
pub fn b_conjugation(
    eq: &Equivariant,
    j: &crate::gcs::Gcs,
    b: &PolyForm,
    samples: &[CartanElement],
) -> Result<IdentityReport> {
    let chart = eq.chart;
    if b.degrees().iter().any(|&k| k != 2) || !d(&chart, b).is_zero() || !eq.is_invariant_form(b) {
        return Err(Error::BNotClosedOrNotInvariant);
    }
    let eqb = eq.with_b(b)?;
    let g = j.grading()?;
    let gb = j.b_transform(&crate::gcs::two_form_matrix(&chart, b))?.grading()?;
    let exp_b = |e: &CartanElement| e.map(|a| exp_nilpotent(|u| b.wedge(u), a));
    check_samples(samples, |e| {
        let r = eq.d_g(&exp_b(e))?.sub(&exp_b(&eqb.d_g(e)?));
        if let Some(w) = residual(&chart, &r) {
            return Ok(Some(format!("D_G e^B − e^B D_G^B = {w}")));
        }
        // ∂̄_G^B acts on U_B = e^{−B}U; samples are pulled back first.
        let pulled = e.map(|a| exp_nilpotent(|u| b.scale(&-Qi::one()).wedge(u), a));
        let r = eq.delbar_g(&g, &exp_b(&pulled))?.sub(&exp_b(&eqb.delbar_g(&gb, &pulled)?));
        Ok(residual(&chart, &r).map(|w| format!("∂̄_G e^B − e^B ∂̄_G^B = {w}")))
    })
}

/// D_G^B α − D_G α for comparison with the sign printed alongside the
/// B-invariance example.
pub fn d_g_b_difference(eq: &Equivariant, b: &PolyForm, e: &CartanElement) -> Result<CartanElement> {
    let eqb = eq.with_b(b)?;
    Ok(eqb.d_g(e)?.sub(&eq.d_g(e)?))
}

/// Σ_j x_j (ι_{ξ_j}B)∧α.
pub fn contraction_term(eq: &Equivariant, b: &PolyForm, e: &CartanElement) -> CartanElement {
    eq.raise(e, |j, a| iota(&eq.act.generators[j], b).wedge(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcs::{standard_omega, Gcs};
    use crate::scalars::Var;

    fn cp1_setup(n: usize) -> (Chart, Equivariant, Gcs) {
        let ch = Chart::complex(n);
        let act = ActionData::torus(&ch, &[vec![Qi::one(); n]], TwistData::zero()).unwrap();
        let mut f = Poly::zero();
        for k in 0..n {
            f.add_assign_ref(&Poly::var(Var::Z(k as u16)).mul_ref(&Poly::var(Var::Zb(k as u16))));
        }
        let mom = MomentData { f: vec![f.scale(&Qi::from_frac(1, 2))], eta: vec![PolyForm::zero()] };
        let eq = Equivariant::new(ch, act, mom).unwrap();
        (ch, eq, Gcs::standard_symplectic(ch))
    }

    #[test]
    fn symplectic_moment_map() {
        let (_, eq, j) = cp1_setup(2);
        let frame: Vec<PVector> = j.eigenbundle(None).unwrap().iter().map(|v| v.lift()).collect();
        assert!(check_moment(&eq, &frame).unwrap().pass());
        let mut bad = eq.mom.clone();
        bad.f[0].add_assign_ref(&Poly::var(Var::Z(0)));
        let eqb = Equivariant::new(eq.chart, eq.act.clone(), bad).unwrap();
        let r = check_moment(&eqb, &frame).unwrap();
        assert!(!r.in_l.pass && r.in_l.witness.is_some());
    }

    #[test]
    fn script_a_on_one() {
        let (ch, eq, _) = cp1_setup(2);
        let one = CartanElement::form(1, PolyForm::one());
        let a = eq.script_a(&one).unwrap();
        let expected = d_fn(&ch, &eq.mom.f[0]).scale(&Qi::i());
        assert_eq!(a.terms.get(&vec![1]).unwrap(), &expected);
    }

    #[test]
    fn operator_identities_on_samples() {
        let (ch, eq, j) = cp1_setup(2);
        let g = j.grading().unwrap();
        let mut rng = sample::rng(7);
        let samples: Vec<CartanElement> =
            (0..6).map(|_| eq.sample_invariant(&mut rng, Shape::default(), 2, 3)).collect();
        assert!(samples.iter().all(|s| !s.is_zero()));
        assert!(verify_dh_a_anticommute(&eq, &samples).unwrap().pass());
        assert!(verify_a_square(&eq, &samples).unwrap().pass());
        assert!(verify_dg_square(&eq, &samples).unwrap().pass());
        let r = verify_a_anticommutes_with_del(&eq, &g, &samples).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(verify_delbar_g_del(&eq, &g, &samples).unwrap().pass());
        let r = verify_symp_equivariant(&eq, &standard_omega(&ch), &g, &samples).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn b_conjugation_constant_b() {
        let (ch, eq, j) = cp1_setup(2);
        let b = crate::polyforms::parse_form(&ch, "dz0∧dzb0 + 2*dz0∧dzb1 + 2*dz1∧dzb0").unwrap();
        let mut rng = sample::rng(3);
        let samples: Vec<CartanElement> =
            (0..4).map(|_| eq.sample_invariant(&mut rng, Shape::default(), 1, 2)).collect();
        let r = b_conjugation(&eq, &j, &b, &samples).unwrap();
        assert!(r.pass(), "{r:?}");
        let diff = d_g_b_difference(&eq, &b, &samples[0]).unwrap();
        assert_eq!(diff, contraction_term(&eq, &b, &samples[0]).scale(&-Qi::one()));
    }

    #[test]
    fn leibniz_coefficient() {
        let (_, eq, j) = cp1_setup(2);
        let g = j.grading().unwrap();
        let mut rng = sample::rng(11);
        let mut samples = Vec::new();
        let g0 = match &g {
            AnyGrading::Constant(c) => c.clone(),
            _ => unreachable!(),
        };
        for k in -2..=2 {
            let vars = eq.chart.vars();
            for b in g0.eigenbasis(k).into_iter().take(2) {
                let p = sample::poly(&mut rng, &vars, Shape::default());
                samples.push((b.lift().scale_poly(&p), k));
            }
        }
        let minus = verify_leibniz(&eq, &g, &samples, 0, &Qi::from_frac(-1, 2).mul_i()).unwrap();
        let plus = verify_leibniz(&eq, &g, &samples, 0, &Qi::from_frac(1, 2).mul_i()).unwrap();
        assert!(minus.failure.is_none(), "{minus:?}");
        assert!(plus.failure.is_some());
    }
}
