//! Finite bounded double complexes over ℚ(i): total cohomology, the spectral
//! sequence of the column filtration F^p = ⊕_{i ≥ p} K^{i,j}, the Dδ-lemma and
//! quasi-isomorphism checks.

pub mod generate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{contained_in, intersection, rank_of, same_span, span_basis, QMatrix};
use crate::scalars::parse::parse_scalar;
use crate::scalars::Qi;

/// Basis vectors tagged by bidegree; differentials act on global coordinates
/// (column = source).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDoubleComplex {
    cells: Vec<(i32, i32)>,
    /// Vertical, degree (0, 1).
    d: QMatrix,
    /// Horizontal, degree (1, 0).
    dp: QMatrix,
    /// Optional vertical, degree (0, −1).
    delta: Option<QMatrix>,
}

type Subspace = Vec<Vec<Qi>>;

fn violation(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}

impl FiniteDoubleComplex {
    pub fn new(cells: Vec<(i32, i32)>, d: QMatrix, dp: QMatrix, delta: Option<QMatrix>) -> Result<Self> {
        let n = cells.len();
        let square = |m: &QMatrix| m.rows() == n && m.cols() == n;
        if !square(&d) || !square(&dp) || delta.as_ref().is_some_and(|m| !square(m)) {
            return Err(violation("differential size does not match the basis"));
        }
        let k = Self { cells, d, dp, delta };
        k.check_degree(&k.d, (0, 1), "d")?;
        k.check_degree(&k.dp, (1, 0), "d'")?;
        if let Some(m) = &k.delta {
            k.check_degree(m, (0, -1), "δ")?;
        }
        let zero = |m: &QMatrix| m.is_zero();
        if !zero(&k.d.mul(&k.d)) {
            return Err(violation("d² ≠ 0"));
        }
        if !zero(&k.dp.mul(&k.dp)) {
            return Err(violation("d'² ≠ 0"));
        }
        if !zero(&k.d.mul(&k.dp).add(&k.dp.mul(&k.d))) {
            return Err(violation("dd' + d'd ≠ 0"));
        }
        if let Some(dl) = &k.delta {
            if !zero(&dl.mul(dl)) {
                return Err(violation("δ² ≠ 0"));
            }
            if !zero(&k.d.mul(dl).add(&dl.mul(&k.d))) {
                return Err(violation("dδ + δd ≠ 0"));
            }
            if !zero(&k.dp.mul(dl).add(&dl.mul(&k.dp))) {
                return Err(violation("d'δ + δd' ≠ 0"));
            }
        }
        Ok(k)
    }

    fn check_degree(&self, m: &QMatrix, shift: (i32, i32), name: &str) -> Result<()> {
        for t in 0..m.rows() {
            for s in 0..m.cols() {
                if m.get(t, s).is_zero() {
                    continue;
                }
                let (a, b) = (self.cells[s], self.cells[t]);
                if (b.0 - a.0, b.1 - a.1) != shift {
                    return Err(violation(format!("{name} has an entry from {a:?} to {b:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[(i32, i32)] {
        &self.cells
    }

    pub fn d(&self) -> &QMatrix {
        &self.d
    }

    pub fn dp(&self) -> &QMatrix {
        &self.dp
    }

    pub fn delta(&self) -> Option<&QMatrix> {
        self.delta.as_ref()
    }

    /// D = d + d'.
    pub fn total(&self) -> QMatrix {
        self.d.add(&self.dp)
    }

    /// dim K^{i,j}.
    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(*c).or_insert(0) += 1;
        }
        out
    }

    pub fn total_degrees(&self) -> BTreeSet<i32> {
        self.cells.iter().map(|(i, j)| i + j).collect()
    }

    fn indices(&self, pred: impl Fn((i32, i32)) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&k| pred(self.cells[k])).collect()
    }

    fn unit(&self, k: usize) -> Vec<Qi> {
        let mut v = vec![Qi::zero(); self.dim()];
        v[k] = Qi::one();
        v
    }

    fn span_of(&self, idx: &[usize]) -> Subspace {
        idx.iter().map(|&k| self.unit(k)).collect()
    }

    /// {x ∈ span(src) : (Mx)_t = 0 for t ∈ forbidden}.
    fn constrained(&self, m: &QMatrix, src: &[usize], forbidden: &[usize]) -> Subspace {
        if src.is_empty() {
            return Vec::new();
        }
        if forbidden.is_empty() {
            return self.span_of(src);
        }
        let sub = QMatrix::from_fn(forbidden.len(), src.len(), |r, c| m.get(forbidden[r], src[c]).clone());
        sub.kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![Qi::zero(); self.dim()];
                for (c, &s) in k.iter().zip(src) {
                    v[s] = c.clone();
                }
                v
            })
            .collect()
    }

    fn image(m: &QMatrix, vs: &[Vec<Qi>]) -> Subspace {
        span_basis(&vs.iter().map(|v| m.apply(v)).filter(|v| v.iter().any(|x| !x.is_zero())).collect::<Vec<_>>())
    }

    fn kernel_in(&self, m: &QMatrix, src: &[usize]) -> Subspace {
        self.constrained(m, src, &(0..self.dim()).collect::<Vec<_>>())
    }

    /// Filtration span F^p K^n.
    fn filtered(&self, p: i32, n: i32) -> Vec<usize> {
        self.indices(|(i, j)| i >= p && i + j == n)
    }

    /// Z_r^{p,n} = {x ∈ F^p K^n : Dx ∈ F^{p+r}}.
    fn z(&self, dt: &QMatrix, r: i32, p: i32, n: i32) -> Subspace {
        let src = self.filtered(p, n);
        let forbidden = self.indices(|(i, j)| i + j == n + 1 && i < p + r);
        self.constrained(dt, &src, &forbidden)
    }

    fn filtration_range(&self) -> (i32, i32) {
        let lo = self.cells.iter().map(|c| c.0).min().unwrap_or(0);
        let hi = self.cells.iter().map(|c| c.0).max().unwrap_or(0);
        (lo, hi)
    }

    /// dim E_r^{p, n−p}.
    fn page_entry(&self, dt: &QMatrix, r: i32, p: i32, n: i32) -> usize {
        let z = self.z(dt, r, p, n);
        if z.is_empty() {
            return 0;
        }
        let mut denom = self.z(dt, r - 1, p + 1, n);
        denom.extend(Self::image(dt, &self.z(dt, r - 1, p - r + 1, n - 1)));
        rank_of(&z) - rank_of(&denom)
    }
}

/// dim H^n(K, D) for every total degree present.
pub fn total_cohomology(k: &FiniteDoubleComplex) -> BTreeMap<i32, usize> {
    let dt = k.total();
    let mut out = BTreeMap::new();
    for n in k.total_degrees() {
        let src = k.indices(|(i, j)| i + j == n);
        let prev = k.indices(|(i, j)| i + j == n - 1);
        let z = k.kernel_in(&dt, &src).len();
        let b = FiniteDoubleComplex::image(&dt, &k.span_of(&prev)).len();
        out.insert(n, z - b);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pages {
    /// `pages[r]` maps (p, q) to dim E_r^{p,q}, for r = 0..=max_r.
    pub pages: Vec<BTreeMap<(i32, i32), usize>>,
    /// The page at which every differential has vanished.
    pub infinity: BTreeMap<(i32, i32), usize>,
}

impl Pages {
    /// Smallest r with E_r = E_∞.
    pub fn degeneration_page(&self) -> Option<usize> {
        self.pages.iter().position(|p| *p == self.infinity)
    }

    /// Σ_{p+q=n} dim E_∞^{p,q}.
    pub fn infinity_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for ((p, q), d) in &self.infinity {
            *out.entry(p + q).or_insert(0) += d;
        }
        out
    }

    /// dim E_{r+1} ≤ dim E_r entrywise from E_1 on, ending at E_∞.
    pub fn monotone(&self) -> bool {
        let all: Vec<&BTreeMap<(i32, i32), usize>> = self.pages.iter().chain(std::iter::once(&self.infinity)).collect();
        let get = |m: &BTreeMap<(i32, i32), usize>, k: &(i32, i32)| m.get(k).copied().unwrap_or(0);
        all.windows(2).skip(1).all(|w| w[1].iter().all(|(k, v)| *v <= get(w[0], k)))
    }
}

/// Pages E_0..E_{max_r} and E_∞ of the column filtration.
pub fn spectral_pages(k: &FiniteDoubleComplex, max_r: usize) -> Pages {
    let dt = k.total();
    let (lo, hi) = k.filtration_range();
    let infinite_r = hi - lo + 2;
    let page = |r: i32| -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for n in k.total_degrees() {
            for p in lo..=hi {
                let e = k.page_entry(&dt, r, p, n);
                if e > 0 {
                    out.insert((p, n - p), e);
                }
            }
        }
        out
    };
    let pages = (0..=max_r as i32).map(page).collect();
    Pages { pages, infinity: page(infinite_r) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdeltaReport {
    /// im d ∩ ker δ = ker d ∩ im δ = im dδ.
    pub hypothesis_a: bool,
    /// E_1 = E_∞.
    pub hypothesis_b: bool,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    /// im D ∩ ker δ = im Dδ.
    pub conclusion: bool,
}

impl DdeltaReport {
    /// A lemma violation: both hypotheses verified but the conclusion fails.
    pub fn contradicts_lemma(&self) -> bool {
        self.hypothesis_a && self.hypothesis_b && !self.conclusion
    }
}

pub fn check_ddelta(k: &FiniteDoubleComplex) -> Result<DdeltaReport> {
    let n = k.dim();
    let zero_mat = QMatrix::zeros(n, n);
    let delta = k.delta().unwrap_or(&zero_mat);
    let all: Vec<usize> = (0..n).collect();
    let everything = k.span_of(&all);
    let im = |m: &QMatrix| FiniteDoubleComplex::image(m, &everything);
    let im_d = im(k.d());
    let im_delta = im(delta);
    let ker_d = k.kernel_in(k.d(), &all);
    let ker_delta = k.kernel_in(delta, &all);
    let im_ddelta = im(&k.d().mul(delta));
    let a1 = intersection(&im_d, &ker_delta, n);
    let a2 = intersection(&ker_d, &im_delta, n);
    let hypothesis_a = same_span(&a1, &im_ddelta) && same_span(&a2, &im_ddelta);
    let pages = spectral_pages(k, 1);
    let hypothesis_b = pages.pages[1] == pages.infinity;
    let dt = k.total();
    let lhs = intersection(&im(&dt), &ker_delta, n);
    let rhs = im(&dt.mul(delta));
    Ok(DdeltaReport {
        hypothesis_a,
        hypothesis_b,
        lhs_dim: lhs.len(),
        rhs_dim: rhs.len(),
        conclusion: same_span(&lhs, &rhs),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiIsoReport {
    /// dim H(ker ∂, ∂̄), dim H(K, ∂̄), dim H(H_∂, ∂̄).
    pub dims: [usize; 3],
    /// H(ker ∂, ∂̄) → H(K, ∂̄) is an isomorphism.
    pub inclusion_iso: bool,
    /// H(ker ∂, ∂̄) → H(H_∂(K), ∂̄) is an isomorphism.
    pub projection_iso: bool,
}

/// With ∂̄ = d and ∂ = d': the maps (K, ∂̄) ← (ker ∂, ∂̄) → (H_∂(K), ∂̄) on cohomology.
pub fn quasi_iso_check(k: &FiniteDoubleComplex) -> Result<QuasiIsoReport> {
    let n = k.dim();
    let all: Vec<usize> = (0..n).collect();
    let everything = k.span_of(&all);
    let (db, dl) = (k.d(), k.dp());
    let ker_del = k.kernel_in(dl, &all);
    let im_del = FiniteDoubleComplex::image(dl, &everything);
    let dbar_ker = FiniteDoubleComplex::image(db, &ker_del);
    if !contained_in(&dbar_ker, &ker_del) || !contained_in(&FiniteDoubleComplex::image(db, &im_del), &im_del) {
        return Err(Error::NotChainMap("∂̄ does not preserve ker ∂ and im ∂".into()));
    }
    // H(ker ∂, ∂̄)
    let z_s = intersection(&ker_del, &k.kernel_in(db, &all), n);
    let h_s = z_s.len() - dbar_ker.len();
    // H(K, ∂̄)
    let b_v = FiniteDoubleComplex::image(db, &everything);
    let h_v = k.kernel_in(db, &all).len() - b_v.len();
    let with = |a: &Subspace, b: &Subspace| -> usize {
        let mut s = a.clone();
        s.extend(b.iter().cloned());
        rank_of(&s)
    };
    let inc_rank = with(&z_s, &b_v) - b_v.len();
    // H(H_∂, ∂̄): cocycles {x ∈ ker ∂ : ∂̄x ∈ im ∂}, coboundaries ∂̄(ker ∂) + im ∂.
    let z_q = {
        let mut cols: Vec<Vec<Qi>> = ker_del.iter().map(|v| db.apply(v)).collect();
        cols.extend(im_del.iter().map(|v| v.iter().map(|x| -x).collect()));
        let sol = if cols.is_empty() { Vec::new() } else { QMatrix::from_cols(&cols, n).kernel() };
        let mut out: Subspace = sol
            .iter()
            .map(|c| {
                let mut v = vec![Qi::zero(); n];
                for (coef, kv) in c.iter().zip(&ker_del) {
                    for (x, y) in v.iter_mut().zip(kv) {
                        *x += &(coef * y);
                    }
                }
                v
            })
            .collect();
        out.extend(im_del.iter().cloned());
        span_basis(&out)
    };
    let mut b_q = dbar_ker.clone();
    b_q.extend(im_del.iter().cloned());
    let b_q = span_basis(&b_q);
    let h_q = z_q.len() - b_q.len();
    let proj_rank = with(&z_s, &b_q) - b_q.len();
    Ok(QuasiIsoReport {
        dims: [h_s, h_v, h_q],
        inclusion_iso: h_s == h_v && inc_rank == h_s,
        projection_iso: h_s == h_q && proj_rank == h_s,
    })
}

/// JSON form: bidegrees per basis vector and dense matrices of scalar strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleComplexSpec {
    pub cells: Vec<[i32; 2]>,
    pub d: Vec<Vec<String>>,
    pub dp: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Vec<String>>>,
}

impl DoubleComplexSpec {
    pub fn build(&self) -> Result<FiniteDoubleComplex> {
        let n = self.cells.len();
        let mat = |rows: &Vec<Vec<String>>| -> Result<QMatrix> {
            if n == 0 {
                return Ok(QMatrix::zeros(0, 0));
            }
            let parsed = rows
                .iter()
                .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            if parsed.len() != n || parsed.iter().any(|r| r.len() != n) {
                return Err(violation(format!("matrices must be {n}×{n}")));
            }
            Ok(QMatrix::from_rows(parsed))
        };
        let delta = self.delta.as_ref().map(mat).transpose()?;
        FiniteDoubleComplex::new(self.cells.iter().map(|c| (c[0], c[1])).collect(), mat(&self.d)?, mat(&self.dp)?, delta)
    }

    pub fn from_complex(k: &FiniteDoubleComplex) -> Self {
        let strs = |m: &QMatrix| (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect();
        Self {
            cells: k.cells.iter().map(|c| [c.0, c.1]).collect(),
            d: strs(&k.d),
            dp: strs(&k.dp),
            delta: k.delta.as_ref().map(strs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::generate::*;
    use super::*;

    #[test]
    fn zero_differentials() {
        let k = FiniteDoubleComplex::new(
            vec![(0, 0), (0, 1), (1, 0)],
            QMatrix::zeros(3, 3),
            QMatrix::zeros(3, 3),
            None,
        )
        .unwrap();
        let h = total_cohomology(&k);
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 2)]));
        let p = spectral_pages(&k, 3);
        assert!(p.pages.iter().all(|e| *e == p.infinity));
    }

    #[test]
    fn acyclic_row() {
        let k = horizontal_arrow();
        assert!(total_cohomology(&k).values().all(|&d| d == 0));
        let p = spectral_pages(&k, 2);
        assert_ne!(p.pages[1], p.pages[2]);
        assert_eq!(p.degeneration_page(), Some(2));
    }

    #[test]
    fn staircase_has_d2() {
        let k = staircase();
        let p = spectral_pages(&k, 3);
        assert_eq!(p.pages[1], p.pages[2]);
        assert_ne!(p.pages[2], p.pages[3]);
        assert_eq!(p.infinity_by_degree().values().sum::<usize>(), 0);
        assert!(p.monotone());
    }

    #[test]
    fn rejects_bad_differentials() {
        let mut d = QMatrix::zeros(2, 2);
        d.set(1, 0, Qi::one());
        let err = FiniteDoubleComplex::new(vec![(0, 0), (1, 1)], d, QMatrix::zeros(2, 2), None).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
    }

    #[test]
    fn json_round_trip() {
        let k = staircase();
        let spec = DoubleComplexSpec::from_complex(&k);
        let text = serde_json::to_string(&spec).unwrap();
        let back: DoubleComplexSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), k);
    }

    #[test]
    fn quasi_iso_controls() {
        let mut rng = crate::sample::rng(5);
        let good = dots_and_squares(&mut rng, 3);
        let r = quasi_iso_check(&good).unwrap();
        assert!(r.inclusion_iso && r.projection_iso, "{r:?}");
        let bad = zigzag_with_dot();
        let r = quasi_iso_check(&bad).unwrap();
        assert!(!(r.inclusion_iso && r.projection_iso), "{r:?}");
        let empty = FiniteDoubleComplex::new(vec![], QMatrix::zeros(0, 0), QMatrix::zeros(0, 0), None).unwrap();
        let r = quasi_iso_check(&empty).unwrap();
        assert!(r.inclusion_iso && r.projection_iso);
    }

    #[test]
    fn ddelta_models() {
        let mut rng = crate::sample::rng(9);
        for _ in 0..10 {
            let k = hodge_pair_model(&mut rng);
            let r = check_ddelta(&k).unwrap();
            assert!(r.hypothesis_a && r.hypothesis_b && r.conclusion, "{r:?}");
        }
        let k = lone_arrow_model();
        let r = check_ddelta(&k).unwrap();
        assert!(!r.hypothesis_a);
    }
}
