//! Exterior calculus with polynomial coefficients on an affine chart.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::scalars::parse::{parse_with, Target};
use crate::scalars::{Poly, Qi, Var, WirtingerKind};
use crate::spinor::rep::{SpinOp, Word};
use crate::spinor::{pairing, Chart, GenVector, PVector, PolyForm};

/// Exterior derivative.
pub fn d(chart: &Chart, alpha: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero();
    for (mask, c) in alpha.iter() {
        for a in 0..chart.m {
            if mask & (1 << a) != 0 {
                continue;
            }
            let dc = c.diff(chart.var(a));
            if dc.is_zero() {
                continue;
            }
            let (u, neg) = crate::spinor::form::wedge_basis(mask, a).unwrap();
            out.add_signed(u, &dc, neg);
        }
    }
    out
}

/// `df` for a function.
pub fn d_fn(chart: &Chart, f: &Poly) -> PolyForm {
    d(chart, &PolyForm::scalar(f.clone()))
}

/// ι_X α for a vector field with `m` polynomial components.
pub fn iota(x: &[Poly], alpha: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero();
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        out.add_assign(&alpha.iota_e(a).mul_scalar(xa));
    }
    out
}

pub fn wedge(a: &PolyForm, b: &PolyForm) -> PolyForm {
    a.wedge(b)
}

/// L_X α = d ι_X α + ι_X dα.
pub fn lie(chart: &Chart, x: &[Poly], alpha: &PolyForm) -> PolyForm {
    d(chart, &iota(x, alpha)).add(&iota(x, &d(chart, alpha)))
}

/// X(f).
pub fn derivative(chart: &Chart, x: &[Poly], f: &Poly) -> Poly {
    let mut acc = Poly::zero();
    for (a, xa) in x.iter().enumerate() {
        if !xa.is_zero() {
            acc.add_assign_ref(&xa.mul_ref(&f.diff(chart.var(a))));
        }
    }
    acc
}

/// [X, Y]^a = X(Y^a) − Y(X^a).
pub fn lie_bracket(chart: &Chart, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    (0..chart.m)
        .map(|a| &derivative(chart, x, &y[a]) - &derivative(chart, y, &x[a]))
        .collect()
}

/// A closed 3-form twisting d.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistData {
    pub h: PolyForm,
}

impl TwistData {
    pub fn new(chart: &Chart, h: PolyForm) -> Result<Self> {
        if h.degrees().iter().any(|&k| k != 3) {
            return Err(Error::InvalidParameter("H must be a 3-form".into()));
        }
        if !d(chart, &h).is_zero() {
            return Err(Error::HNotClosed);
        }
        Ok(Self { h })
    }

    pub fn zero() -> Self {
        Self { h: PolyForm::zero() }
    }
}

/// d_H = d − H∧.
pub fn d_h(chart: &Chart, alpha: &PolyForm, tw: &TwistData) -> PolyForm {
    let da = d(chart, alpha);
    if tw.h.is_zero() {
        return da;
    }
    da.sub(&tw.h.wedge(alpha))
}

/// H-twisted Courant bracket
/// [X+ξ, Y+η] = [X,Y] + L_Xη − L_Yξ − ½ d(η(X) − ξ(Y)) + ι_Y ι_X H.
pub fn courant(chart: &Chart, a: &PVector, b: &PVector, tw: &TwistData) -> Result<PVector> {
    let m = chart.m;
    if a.m() != m || b.m() != m {
        return Err(Error::ChartMismatch("section does not live on the chart".into()));
    }
    let (x, xi) = (a.x(), a.xi_form());
    let (y, eta) = (b.x(), b.xi_form());
    let bracket = lie_bracket(chart, x, y);
    let eta_x = iota(x, &eta).get(0);
    let xi_y = iota(y, &xi).get(0);
    let mut form = lie(chart, x, &eta)
        .sub(&lie(chart, y, &xi))
        .sub(&d_fn(chart, &(&eta_x - &xi_y)).scale(&Qi::from_frac(1, 2)));
    if !tw.h.is_zero() {
        form.add_assign(&iota(y, &iota(x, &tw.h)));
    }
    let mut c = bracket;
    c.extend((0..m).map(|k| form.get(1 << k)));
    Ok(GenVector::new(c))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integrability {
    pub integrable: bool,
    /// `(i, j, k, ⟨[s_i, s_j], s_k⟩)` for the first failing triple.
    pub witness: Option<(usize, usize, usize, Poly)>,
}

/// Closure of a maximal isotropic frame under the bracket, tested as
/// ⟨[s_i, s_j], s_k⟩ = 0 for all triples.
pub fn integrable(chart: &Chart, frame: &[PVector], tw: &TwistData) -> Result<Integrability> {
    for i in 0..frame.len() {
        for j in i..frame.len() {
            if !pairing(&frame[i], &frame[j])?.is_zero() {
                return Err(Error::NotIsotropic(i, j));
            }
        }
    }
    let pairs: Vec<(usize, usize)> =
        (0..frame.len()).flat_map(|i| (i + 1..frame.len()).map(move |j| (i, j))).collect();
    let results: Vec<Option<(usize, usize, usize, Poly)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let br = courant(chart, &frame[i], &frame[j], tw).ok()?;
            for (k, s) in frame.iter().enumerate() {
                let p = pairing(&br, s).ok()?;
                if !p.is_zero() {
                    return Some((i, j, k, p));
                }
            }
            None
        })
        .collect();
    let witness = results.into_iter().flatten().next();
    Ok(Integrability { integrable: witness.is_none(), witness })
}

/// Holomorphicity test for ε = Σ F_ij(∂_i∧∂_j + …): every F_ij holomorphic and
/// independent of the z_k, k ∈ I.
pub fn closedness_condition(chart: &Chart, index_set: &[usize], family: &[(usize, usize, Poly)]) -> Result<bool> {
    if !chart.is_complex() {
        return Err(Error::MalformedFamily("family needs a complex chart".into()));
    }
    let n = chart.n();
    if index_set.iter().any(|&k| k >= n) {
        return Err(Error::MalformedFamily("index set outside the chart".into()));
    }
    let vars = chart.vars();
    for (i, j, f) in family {
        if !index_set.contains(i) || !index_set.contains(j) || i == j {
            return Err(Error::MalformedFamily(format!("pair ({i},{j}) not in the index set")));
        }
        if f.variables().iter().any(|v| chart.index_of(*v).is_none()) {
            return Err(Error::MalformedFamily(format!("coefficient {f} uses symbols outside the chart")));
        }
        if !f.is_holomorphic() {
            return Ok(false);
        }
        for &k in index_set {
            if !f.wirtinger(Var::Z(k as u16), WirtingerKind::Holo, &vars)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The 2-form Σ_{a<b} ω_ab e^a∧e^b.
pub fn omega_form(omega: &QMatrix) -> PolyForm {
    let mut f = PolyForm::zero();
    for a in 0..omega.rows() {
        for b in a + 1..omega.rows() {
            f.add_term((1 << a) | (1 << b), Poly::constant(omega.get(a, b).clone()));
        }
    }
    f
}

/// Contraction with the Poisson bivector: ι_Λ = −½ Σ (ω⁻¹)_ab ι_a ι_b.
pub fn poisson_contraction(omega: &QMatrix) -> Result<SpinOp<Qi>> {
    let m = omega.rows();
    if omega.transpose() != omega.neg() {
        return Err(Error::SingularOmega);
    }
    let inv = omega.inverse().ok_or(Error::SingularOmega)?;
    let mut terms = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let c = inv.get(a, b);
            if !c.is_zero() {
                terms.push((Word::IotaIota(a, b), -c));
            }
        }
    }
    Ok(SpinOp::from_terms(m, terms))
}

/// Koszul boundary δ = [ι_Λ, d] = ι_Λ d − d ι_Λ.
pub fn koszul_delta(chart: &Chart, alpha: &PolyForm, omega: &QMatrix) -> Result<PolyForm> {
    let il = poisson_contraction(omega)?;
    Ok(il.apply_poly(&d(chart, alpha)).sub(&d(chart, &il.apply_poly(alpha))))
}

/// exp of a nilpotent operator applied to `v`.
pub fn exp_nilpotent(op: impl Fn(&PolyForm) -> PolyForm, v: &PolyForm) -> PolyForm {
    let mut acc = v.clone();
    let mut term = v.clone();
    let mut k = 1i64;
    loop {
        term = op(&term).scale(&Qi::from_frac(1, k));
        if term.is_zero() {
            return acc;
        }
        acc.add_assign(&term);
        k += 1;
    }
}

/// Parse target for polynomial forms in the scene grammar (`z0*dz1∧dzb2 + …`).
pub struct FormTarget<'a> {
    pub chart: &'a Chart,
}

impl Target for FormTarget<'_> {
    type Value = PolyForm;
    fn lift(&self, p: Poly) -> PolyForm {
        PolyForm::scalar(p)
    }
    fn token(&self, name: &str) -> Option<PolyForm> {
        self.chart.parse_form_token(name).map(|a| PolyForm::basis(1 << a))
    }
    fn add(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        a.add(b)
    }
    fn mul(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        a.wedge(b)
    }
    fn neg(&self, a: &PolyForm) -> PolyForm {
        a.neg()
    }
    fn as_poly(&self, a: &PolyForm) -> Option<Poly> {
        if a.masks().all(|m| m == 0) {
            Some(a.get(0))
        } else {
            None
        }
    }
    fn check_var(&self, v: Var) -> bool {
        self.chart.index_of(v).is_some()
    }
}

pub fn parse_form(chart: &Chart, src: &str) -> Result<PolyForm> {
    parse_with(src, &FormTarget { chart })
}

/// Parses a function on the chart (symbols checked against it).
pub fn parse_function(chart: &Chart, src: &str) -> Result<Poly> {
    let f = parse_form(chart, src)?;
    if f.masks().any(|m| m != 0) {
        return Err(Error::Parse { line: 1, column: 1, token: src.into(), message: "expected a function".into() });
    }
    Ok(f.get(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_example() {
        let ch = Chart::complex(2);
        let a = parse_form(&ch, "z0*dz1").unwrap();
        assert_eq!(d(&ch, &a), parse_form(&ch, "dz0∧dz1").unwrap());
    }

    #[test]
    fn d_h_of_one() {
        let ch = Chart::real(4);
        let h = parse_form(&ch, "dx0∧dx1∧dx2").unwrap();
        let tw = TwistData::new(&ch, h.clone()).unwrap();
        assert_eq!(d_h(&ch, &PolyForm::one(), &tw), h.neg());
        let bad = parse_form(&ch, "x3*dx0∧dx1∧dx2").unwrap();
        assert_eq!(TwistData::new(&ch, bad).unwrap_err(), Error::HNotClosed);
    }

    #[test]
    fn courant_coordinate_fields() {
        let ch = Chart::real(2);
        let a: PVector = GenVector::unit(2, 0).lift();
        let b: PVector = GenVector::unit(2, 1).lift();
        assert!(courant(&ch, &a, &b, &TwistData::zero()).unwrap().is_zero());
    }

    #[test]
    fn closedness_examples() {
        let ch = Chart::complex(4);
        let f = Poly::var(Var::Z(0)).mul_ref(&Poly::var(Var::Z(1)));
        assert!(closedness_condition(&ch, &[2, 3], &[(2, 3, f)]).unwrap());
        let g = Poly::var(Var::Zb(0));
        assert!(!closedness_condition(&ch, &[2, 3], &[(2, 3, g)]).unwrap());
        let h = Poly::var(Var::Z(2));
        assert!(!closedness_condition(&ch, &[2, 3], &[(2, 3, h)]).unwrap());
    }

    #[test]
    fn koszul_of_constants() {
        let ch = Chart::real(2);
        let w = crate::gcs::standard_omega(&ch);
        assert!(koszul_delta(&ch, &PolyForm::one(), &w).unwrap().is_zero());
        let vol = parse_form(&ch, "dx0∧dx1").unwrap();
        assert!(koszul_delta(&ch, &vol, &w).unwrap().is_zero());
    }
}
