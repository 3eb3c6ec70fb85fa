//! Dirac restriction L_W = {X + ξ|_W : X + ξ ∈ L, X ∈ W} and fixed-point splitting.

use super::Gcs;
use crate::error::{Error, Result};
use crate::linalg::{contained_in, intersection, rank_of, same_span, span_basis, QMatrix};
use crate::scalars::{Point, Qi};
use crate::spinor::QVector;

#[derive(Clone, Debug)]
pub struct RestrictedStructure {
    /// Basis w_1..w_k of W ⊂ V.
    pub basis: Vec<Vec<Qi>>,
    /// Frame of L_W in coordinates (X in the w-basis, ξ(w_i)).
    pub frame: Vec<Vec<Qi>>,
    /// Induced structure on W ⊕ W*, when the basis is closed under conjugation up to order.
    pub j: Option<QMatrix>,
}

fn unit_vec(m: usize, a: usize) -> Vec<Qi> {
    let mut v = vec![Qi::zero(); m];
    v[a] = Qi::one();
    v
}

fn conj_vec(chart: &crate::spinor::Chart, v: &[Qi]) -> Vec<Qi> {
    let mut out = vec![Qi::zero(); v.len()];
    for (a, x) in v.iter().enumerate() {
        out[chart.conj_index(a)] = x.conj();
    }
    out
}

/// Restricts the structure to a subspace W of V.
pub fn restrict_dirac(j: &Gcs, w: &[Vec<Qi>], pt: Option<&Point>) -> Result<RestrictedStructure> {
    let chart = j.chart;
    let m = chart.m;
    let w = span_basis(w);
    let k = w.len();
    let wbar: Vec<Vec<Qi>> = w.iter().map(|v| conj_vec(&chart, v)).collect();
    if !same_span(&w, &wbar) {
        return Err(Error::InvalidParameter("W must be a real subspace".into()));
    }
    let l = j.eigenbundle(pt)?;
    // S = {v ∈ L : π(v) ∈ W}
    let mut cols: Vec<Vec<Qi>> = l.iter().map(|v| v.x().to_vec()).collect();
    cols.extend(w.iter().map(|v| v.iter().map(|x| -x).collect()));
    let sol = QMatrix::from_cols(&cols, m).kernel();
    let s: Vec<Vec<Qi>> = sol
        .iter()
        .map(|c| {
            let mut v = vec![Qi::zero(); 2 * m];
            for (coef, lv) in c.iter().zip(&l) {
                if coef.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(&lv.c) {
                    *x += &(coef * y);
                }
            }
            v
        })
        .collect();
    // Ann(W) inside V ⊕ V*
    let ann: Vec<Vec<Qi>> = if k == 0 {
        (0..m).map(|a| QVector::unit(m, m + a).c).collect()
    } else {
        QMatrix::from_rows(w.clone())
            .kernel()
            .into_iter()
            .map(|a| {
                let mut v = vec![Qi::zero(); m];
                v.extend(a);
                v
            })
            .collect()
    };
    let s_plus: Vec<Vec<Qi>> = s.iter().chain(&ann).cloned().collect();
    let sbar_plus: Vec<Vec<Qi>> = s
        .iter()
        .map(|v| QVector::new(v.clone()).conj(&chart).c)
        .chain(ann.iter().map(|v| QVector::new(v.clone()).conj(&chart).c))
        .collect();
    let meet = intersection(&s_plus, &sbar_plus, 2 * m).len() - rank_of(&ann);
    if meet > 0 {
        return Err(Error::NotGeneralizedComplexSubspace(meet));
    }
    // coordinates on W ⊕ W*
    let wmat = QMatrix::from_cols(&w, m);
    let frame: Vec<Vec<Qi>> = span_basis(
        &s.iter()
            .map(|v| {
                let mut c = wmat.solve(&v[..m]).expect("π(v) ∈ W");
                c.extend(w.iter().map(|wi| {
                    wi.iter().zip(&v[m..]).fold(Qi::zero(), |acc, (a, b)| &acc + &(a * b))
                }));
                c
            })
            .collect::<Vec<_>>(),
    );
    let perm: Option<Vec<usize>> = wbar.iter().map(|c| w.iter().position(|v| v == c)).collect();
    let jw = perm.map(|perm| {
        let conj_w = |v: &Vec<Qi>| -> Vec<Qi> {
            let mut out = vec![Qi::zero(); 2 * k];
            for i in 0..k {
                out[perm[i]] = v[i].conj();
                out[k + perm[i]] = v[k + i].conj();
            }
            out
        };
        let mut cols = frame.clone();
        cols.extend(frame.iter().map(conj_w));
        let smat = QMatrix::from_cols(&cols, 2 * k);
        let mut d = QMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            d.set(i, i, Qi::i());
            d.set(k + i, k + i, -Qi::i());
        }
        smat.mul(&d).mul(&smat.inverse().expect("L_W ∩ conj(L_W) = 0"))
    });
    Ok(RestrictedStructure { basis: w, frame, j: jw })
}

#[derive(Clone, Debug)]
pub struct SplitCertificate {
    pub v1: Vec<Vec<Qi>>,
    pub n: Vec<Vec<Qi>>,
    pub ann_n: Vec<Vec<Qi>>,
    /// Ann(N) equals the fixed covectors V₁*.
    pub duality: bool,
    pub restricted: RestrictedStructure,
}

/// Splits V = V₁ ⊕ N for commuting orthogonal generators and restricts J to V₁.
pub fn weight_split(j: &Gcs, generators: &[QMatrix]) -> Result<SplitCertificate> {
    let m = j.m();
    let jm = j.at(None)?;
    let id = QMatrix::identity(m);
    let mut fixed_rows: Vec<Vec<Qi>> = Vec::new();
    let mut dual_rows: Vec<Vec<Qi>> = Vec::new();
    let mut n_cols: Vec<Vec<Qi>> = Vec::new();
    for g in generators {
        let ginv = g.inverse().ok_or_else(|| Error::InvalidParameter("generator not invertible".into()))?;
        let z = QMatrix::zeros(m, m);
        let lifted = QMatrix::from_blocks(g, &z, &z, &ginv.transpose());
        if lifted.mul(&jm) != jm.mul(&lifted) {
            return Err(Error::NotInvariant("generator does not commute with J".into()));
        }
        let d = g.sub(&id);
        fixed_rows.extend((0..m).map(|i| d.row(i)));
        n_cols.extend(d.columns());
        let dd = ginv.transpose().sub(&id);
        dual_rows.extend((0..m).map(|i| dd.row(i)));
    }
    let v1 = if fixed_rows.is_empty() {
        (0..m).map(|a| unit_vec(m, a)).collect()
    } else {
        QMatrix::from_rows(fixed_rows).kernel()
    };
    let n = span_basis(&n_cols);
    if v1.len() + n.len() != m || !intersection(&v1, &n, m).is_empty() {
        return Err(Error::NotInvariant("V is not V₁ ⊕ N".into()));
    }
    let ann_n = if n.is_empty() {
        (0..m).map(|a| unit_vec(m, a)).collect()
    } else {
        QMatrix::from_rows(n.clone()).kernel()
    };
    let dual_fixed = if dual_rows.is_empty() {
        ann_n.clone()
    } else {
        QMatrix::from_rows(dual_rows).kernel()
    };
    let duality = same_span(&ann_n, &dual_fixed);
    let mut e: Vec<Vec<Qi>> = v1
        .iter()
        .map(|v| {
            let mut x = v.clone();
            x.extend(vec![Qi::zero(); m]);
            x
        })
        .collect();
    e.extend(ann_n.iter().map(|a| {
        let mut x = vec![Qi::zero(); m];
        x.extend(a.clone());
        x
    }));
    let je: Vec<Vec<Qi>> = e.iter().map(|v| jm.apply(v)).collect();
    if !contained_in(&je, &e) {
        return Err(Error::NotInvariant("J does not preserve V₁ ⊕ Ann(N)".into()));
    }
    let restricted = restrict_dirac(j, &v1, None)?;
    Ok(SplitCertificate { v1, n, ann_n, duality, restricted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::Chart;

    fn unit(m: usize, a: usize) -> Vec<Qi> {
        let mut v = vec![Qi::zero(); m];
        v[a] = Qi::one();
        v
    }

    #[test]
    fn whole_space_returns_j() {
        let ch = Chart::complex(2);
        let j = Gcs::standard_complex(ch);
        let w: Vec<Vec<Qi>> = (0..4).map(|a| unit(4, a)).collect();
        let r = restrict_dirac(&j, &w, None).unwrap();
        assert_eq!(r.j.unwrap(), j.at(None).unwrap());
    }

    #[test]
    fn symplectic_on_isotropic_line_fails() {
        let ch = Chart::real(4);
        let j = Gcs::standard_symplectic(ch);
        // span{∂x0, ∂x2} is Lagrangian for Σ dx_{2k+1}∧dx_{2k}
        let w = vec![unit(4, 0), unit(4, 2)];
        assert!(matches!(restrict_dirac(&j, &w, None), Err(Error::NotGeneralizedComplexSubspace(_))));
    }
}
