//! Generalized Kähler pairs: commutation, positivity of G = −J₁J₂, (p,q) bigrading.

use std::collections::BTreeMap;

use super::Gcs;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::scalars::{Point, Qi};
use crate::spinor::rep::{joint_grading, spin_rep, SkewOperator};
use crate::spinor::{mukai_pairing, pairing, Chart, GenVector, QForm, QVector};

#[derive(Clone, Debug)]
pub struct GkCertificate {
    pub g: QMatrix,
    /// Leading principal minors of the Hermitian Gram matrix ⟨G e_a, ē_b⟩.
    pub minors: Vec<Qi>,
}

/// Verifies J₁J₂ = J₂J₁ and that G = −J₁J₂ is a positive definite metric.
pub fn gk_check(j1: &Gcs, j2: &Gcs, pt: Option<&Point>) -> Result<GkCertificate> {
    j1.chart.check(&j2.chart)?;
    let a = j1.at(pt)?;
    let b = j2.at(pt)?;
    let ab = a.mul(&b);
    if ab != b.mul(&a) {
        return Err(Error::NotCommuting);
    }
    let g = ab.neg();
    let chart = j1.chart;
    let m = chart.m;
    let n2 = 2 * m;
    let conj_unit = |b: usize| -> QVector { QVector::unit(m, b).conj(&chart) };
    let gram = QMatrix::from_fn(n2, n2, |r, c| {
        let ge = GenVector::new(g.col(r));
        pairing(&ge, &conj_unit(c)).unwrap()
    });
    if gram.conj().transpose() != gram {
        return Err(Error::NotPositiveDefinite { index: 0, value: "Gram matrix not Hermitian".into() });
    }
    let minors = gram.leading_minors();
    for (k, d) in minors.iter().enumerate() {
        let positive = d.is_real() && d.re > num_rational::BigRational::from_integer(0.into());
        if !positive {
            return Err(Error::NotPositiveDefinite { index: k + 1, value: d.to_string() });
        }
    }
    Ok(GkCertificate { g, minors })
}

/// Joint eigenspaces U^{p,q} of (ρ(J₁), ρ(J₂)) with eigenvalues (−p·i, −q·i).
pub fn pq_decomposition(j1: &Gcs, j2: &Gcs, pt: Option<&Point>) -> Result<BTreeMap<(i64, i64), Vec<QForm>>> {
    gk_check(j1, j2, pt)?;
    let r1 = spin_rep(&SkewOperator::new(j1.at(pt)?)?);
    let r2 = spin_rep(&SkewOperator::new(j2.at(pt)?)?);
    Ok(joint_grading(&r1, &r2, j1.chart.n() as i64))
}

/// Shape of a (p,q) decomposition as found, not as assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqPattern {
    /// p + q mod 2 when every nonzero piece agrees.
    pub parity: Option<i64>,
    /// Every nonzero piece has |p + q| ≤ n.
    pub bounded: bool,
    pub total_dim: usize,
}

pub fn pq_pattern(n: usize, pieces: &BTreeMap<(i64, i64), Vec<QForm>>) -> PqPattern {
    let residues: std::collections::BTreeSet<i64> = pieces.keys().map(|(p, q)| (p + q).rem_euclid(2)).collect();
    PqPattern {
        parity: if residues.len() == 1 { residues.into_iter().next() } else { None },
        bounded: pieces.keys().all(|(p, q)| (p + q).unsigned_abs() as usize <= n),
        total_dim: pieces.values().map(Vec::len).sum(),
    }
}

/// (α, β) ↦ (σ(ᾱ) ∧ β)_top. Stands in for the Born–Infeld product, whose
/// exact normalisation is not fixed here.
pub fn conj_mukai(chart: &Chart, a: &QForm, b: &QForm) -> Result<Qi> {
    mukai_pairing(chart, &chart.conj_form(a), b)
}

/// First pair of distinct pieces that fail to be orthogonal under [`conj_mukai`].
pub fn pq_orthogonality(
    chart: &Chart,
    pieces: &BTreeMap<(i64, i64), Vec<QForm>>,
) -> Result<Option<((i64, i64), (i64, i64))>> {
    for (k1, b1) in pieces {
        for (k2, b2) in pieces.range(..*k1) {
            for a in b1 {
                for b in b2 {
                    if !conj_mukai(chart, a, b)?.is_zero() || !conj_mukai(chart, b, a)?.is_zero() {
                        return Ok(Some((*k2, *k1)));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::Chart;

    #[test]
    fn flat_kahler_c1_corners() {
        let ch = Chart::complex(1);
        let jw = Gcs::standard_symplectic(ch);
        let ji = Gcs::standard_complex(ch);
        gk_check(&jw, &ji, None).unwrap();
        let pq = pq_decomposition(&jw, &ji, None).unwrap();
        let keys: Vec<(i64, i64)> = pq.keys().copied().collect();
        assert_eq!(keys, vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);
        assert!(pq.values().all(|b| b.len() == 1));
    }

    #[test]
    fn opposite_orientation_is_not_positive() {
        let ch = Chart::complex(1);
        let jw = Gcs::from_symplectic(ch, &crate::gcs::standard_omega(&ch).neg()).unwrap();
        let ji = Gcs::standard_complex(ch);
        assert!(matches!(gk_check(&jw, &ji, None), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn flat_pattern_and_orthogonality() {
        for n in 1..=3 {
            let ch = Chart::complex(n);
            let pq = pq_decomposition(&Gcs::standard_symplectic(ch), &Gcs::standard_complex(ch), None).unwrap();
            let pat = pq_pattern(n, &pq);
            assert_eq!(pat.parity, Some(n as i64 % 2));
            assert!(pat.bounded);
            assert_eq!(pat.total_dim, ch.spinor_dim());
            assert_eq!(pq_orthogonality(&ch, &pq).unwrap(), None);
        }
    }

    #[test]
    fn spin_operators_commute() {
        let ch = Chart::complex(2);
        let a = spin_rep(&SkewOperator::new(Gcs::standard_symplectic(ch).at(None).unwrap()).unwrap());
        let b = spin_rep(&SkewOperator::new(Gcs::standard_complex(ch).at(None).unwrap()).unwrap());
        for mask in 0..=ch.full_mask() {
            let f = QForm::basis(mask);
            assert_eq!(a.apply(&b.apply(&f)), b.apply(&a.apply(&f)));
        }
    }

    #[test]
    fn staged_joint_grading_matches_direct() {
        use crate::examples::build_cpn;
        use crate::gcs::deform;
        use crate::linalg::same_span;
        use crate::spinor::rep::joint_eigenspace;
        let s = build_cpn(3, &Qi::from_frac(1, 100)).unwrap();
        let p = s.complete(&s.points[0]).unwrap();
        let je = deform(&s.j_complex().unwrap(), &s.eps(), Some(&p)).unwrap();
        let jw = s.j_omega().unwrap();
        let staged = pq_decomposition(&jw, &je, None).unwrap();
        let r1 = spin_rep(&SkewOperator::new(jw.at(None).unwrap()).unwrap());
        let r2 = spin_rep(&SkewOperator::new(je.at(None).unwrap()).unwrap());
        let dense = |fs: &[QForm]| -> Vec<Vec<Qi>> {
            fs.iter().map(|f| (0..=s.chart.full_mask()).map(|m| f.get(m)).collect()).collect()
        };
        for p in -4..=4i64 {
            for q in -4..=4i64 {
                let lp = -(Qi::from_int(p).mul_i());
                let lq = -(Qi::from_int(q).mul_i());
                let direct = joint_eigenspace(&[&r1, &r2], &[lp, lq]);
                let got = staged.get(&(p, q)).cloned().unwrap_or_default();
                assert_eq!(got.len(), direct.len(), "({p}, {q})");
                assert!(same_span(&dense(&got), &dense(&direct)), "({p}, {q})");
            }
        }
    }
}
