//! ε-deformations L_ε = {Y + ι_Y ε | Y ∈ L}.

use super::{type_of_frame, Gcs};
use crate::error::{Error, Result};
use crate::linalg::{contained_in, QMatrix};
use crate::scalars::{Point, Poly, Qi, Ring};
use crate::spinor::{pairing, Chart, GenVector, PVector, QVector};

/// One summand `F · u ∧ w`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsTerm {
    pub coeff: Poly,
    pub u: QVector,
    pub w: QVector,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Deformation {
    pub terms: Vec<EpsTerm>,
}

impl Deformation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    /// `F (∂_{z_i} ∧ ∂_{z_j} + κ dz̄_i ∧ dz̄_j)` on a complex chart.
    pub fn normal_form(chart: &Chart, f: &Poly, i: usize, j: usize, kappa: &Qi) -> Self {
        let m = chart.m;
        let n = chart.n();
        Self {
            terms: vec![
                EpsTerm { coeff: f.clone(), u: QVector::unit(m, i), w: QVector::unit(m, j) },
                EpsTerm {
                    coeff: f.scale(kappa),
                    u: QVector::unit(m, m + n + i),
                    w: QVector::unit(m, m + n + j),
                },
            ],
        }
    }

    pub fn scaled(&self, c: &Qi) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| EpsTerm { coeff: t.coeff.scale(c), u: t.u.clone(), w: t.w.clone() })
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { terms: self.terms.iter().chain(&o.terms).cloned().collect() }
    }

    /// ι_Y(u ∧ w) = 2⟨Y,u⟩w − 2⟨Y,w⟩u, summed with coefficients.
    pub fn contract(&self, y: &PVector) -> PVector {
        let mut out = PVector::zero(y.m());
        let two = Qi::from_int(2);
        for t in &self.terms {
            let yu = pairing(y, &t.u.lift()).unwrap().mul(&t.coeff).scale(&two);
            let yw = pairing(y, &t.w.lift()).unwrap().mul(&t.coeff).scale(&two);
            if !yu.is_zero() {
                out = out.add(&t.w.lift().mul_scalar(&yu));
            }
            if !yw.is_zero() {
                out = out.sub(&t.u.lift().mul_scalar(&yw));
            }
        }
        out
    }

    /// Checks every wedge factor lies in `lbar`.
    pub fn check_in(&self, lbar: &[QVector]) -> Result<()> {
        let basis: Vec<Vec<Qi>> = lbar.iter().map(|v| v.c.clone()).collect();
        for (k, t) in self.terms.iter().enumerate() {
            if !contained_in(&[t.u.c.clone(), t.w.c.clone()], &basis) {
                return Err(Error::MalformedFamily(format!("term {k} is not a section of Λ²L̄")));
            }
        }
        Ok(())
    }
}

/// Polynomial frame of L_ε for a constant J.
pub fn deformed_frame(j: &Gcs, eps: &Deformation) -> Result<Vec<PVector>> {
    let l = j.eigenbundle(None)?;
    eps.check_in(&j.conj_frame(&l))?;
    Ok(l.iter()
        .map(|y| {
            let y = y.lift();
            y.add(&eps.contract(&y))
        })
        .collect())
}

pub fn frame_at(frame: &[PVector], pt: &Point) -> Result<Vec<QVector>> {
    frame.iter().map(|v| v.eval(pt)).collect()
}

/// Type of L_ε at a point.
pub fn deformed_type(j: &Gcs, eps: &Deformation, pt: &Point) -> Result<usize> {
    let f = frame_at(&deformed_frame(j, eps)?, pt)?;
    Ok(type_of_frame(j.m(), &f))
}

/// The structure with +i eigenbundle `frame`; fails when L ∩ L̄ ≠ 0.
pub fn structure_from_frame(chart: Chart, frame: &[QVector]) -> Result<Gcs> {
    let m = chart.m;
    let mut cols: Vec<Vec<Qi>> = frame.iter().map(|v| v.c.clone()).collect();
    cols.extend(frame.iter().map(|v| v.conj(&chart).c));
    let s = QMatrix::from_cols(&cols, 2 * m);
    let inv = s
        .inverse()
        .ok_or_else(|| Error::NotGeneralizedComplex("A_ε is singular: L_ε meets its conjugate".into()))?;
    let mut d = QMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        d.set(k, k, Qi::i());
        d.set(m + k, m + k, -Qi::i());
    }
    Gcs::from_constant(chart, &s.mul(&d).mul(&inv))
}

/// The deformed structure at a point.
pub fn deform(j: &Gcs, eps: &Deformation, pt: Option<&Point>) -> Result<Gcs> {
    if eps.is_zero() {
        return Ok(j.clone());
    }
    let frame = deformed_frame(j, eps)?;
    let at = match pt {
        Some(p) => frame_at(&frame, p)?,
        None => frame
            .iter()
            .map(|v| {
                v.c.iter().map(Poly::as_constant).collect::<Option<Vec<_>>>().map(GenVector::new)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::PolynomialEntries("an evaluation point is required".into()))?,
    };
    structure_from_frame(j.chart, &at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Var;

    #[test]
    fn zero_deformation_is_identity() {
        let ch = Chart::complex(2);
        let j = Gcs::standard_complex(ch);
        assert_eq!(deform(&j, &Deformation::zero(), None).unwrap(), j);
    }

    #[test]
    fn type_drops_where_coefficient_is_nonzero() {
        let ch = Chart::complex(3);
        let j = Gcs::standard_complex(ch);
        let f = Poly::var(Var::Z(0));
        let eps = Deformation::normal_form(&ch, &f, 1, 2, &-Qi::one());
        let mut pt = Point::new();
        for k in 0..3 {
            pt.insert(Var::Z(k), Qi::zero());
        }
        assert_eq!(deformed_type(&j, &eps, &pt).unwrap(), 3);
        pt.insert(Var::Z(0), Qi::from_frac(1, 3));
        assert_eq!(deformed_type(&j, &eps, &pt).unwrap(), 1);
        let d = deform(&j, &eps, Some(&pt)).unwrap();
        assert_eq!(d.type_of(None).unwrap(), 1);
    }
}
