//! Lie-algebra action of so(V ⊕ V*) on spinors, eigenspaces and grading projectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use super::form::{iota_basis, wedge_basis, FormVector, PolyForm, QForm};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PMatrix, QMatrix};
use crate::scalars::{Poly, Qi, Ring, Var};

/// A 2m × 2m operator on V ⊕ V*, skew for the pairing.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewOperator<R: Ring> {
    mat: Matrix<R>,
}

impl<R: Ring> SkewOperator<R> {
    /// Checks `AᵀQ + QA = 0`, i.e. blocks `[[E, P], [B, -Eᵀ]]` with `P`, `B` skew.
    pub fn new(mat: Matrix<R>) -> Result<Self> {
        if mat.rows() != mat.cols() || !mat.rows().is_multiple_of(2) {
            return Err(Error::NotSkew);
        }
        let m = mat.rows() / 2;
        for a in 0..m {
            for b in 0..m {
                let e = mat.get(a, b);
                let f = mat.get(m + b, m + a);
                if !e.add(f).is_zero() {
                    return Err(Error::NotSkew);
                }
                if !mat.get(a, m + b).add(mat.get(b, m + a)).is_zero() {
                    return Err(Error::NotSkew);
                }
                if !mat.get(m + a, b).add(mat.get(m + b, a)).is_zero() {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.mat
    }

    pub fn m(&self) -> usize {
        self.mat.rows() / 2
    }
}

/// Elementary spinor operators; composition reads right to left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Word {
    Id,
    /// `e^w ∧ ι_i`
    WedgeIota { w: usize, i: usize },
    /// `ι_a ι_b`
    IotaIota(usize, usize),
    /// `e^a ∧ e^b ∧`
    WedgeWedge(usize, usize),
}

impl Word {
    #[inline]
    pub fn act(self, mask: u32) -> Option<(u32, bool)> {
        match self {
            Word::Id => Some((mask, false)),
            Word::WedgeIota { w, i } => {
                let (m1, s1) = iota_basis(mask, i)?;
                let (m2, s2) = wedge_basis(m1, w)?;
                Some((m2, s1 ^ s2))
            }
            Word::IotaIota(a, b) => {
                let (m1, s1) = iota_basis(mask, b)?;
                let (m2, s2) = iota_basis(m1, a)?;
                Some((m2, s1 ^ s2))
            }
            Word::WedgeWedge(a, b) => {
                let (m1, s1) = wedge_basis(mask, b)?;
                let (m2, s2) = wedge_basis(m1, a)?;
                Some((m2, s1 ^ s2))
            }
        }
    }
}

/// Sparse spinor operator `Σ c · word`.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinOp<R> {
    pub m: usize,
    terms: Vec<(Word, R)>,
}

impl<R: Ring> SpinOp<R> {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: Vec::new() }
    }

    pub fn from_terms(m: usize, terms: Vec<(Word, R)>) -> Self {
        let mut merged: BTreeMap<Word, R> = BTreeMap::new();
        for (w, c) in terms {
            let e = merged.entry(w).or_insert_with(R::zero);
            e.add_assign(&c);
        }
        Self { m, terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Word, R)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.m, self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn scale(&self, c: &Qi) -> Self {
        Self::from_terms(self.m, self.terms.iter().map(|(w, x)| (*w, x.scale(c))).collect())
    }

    pub fn apply(&self, v: &FormVector<R>) -> FormVector<R> {
        let mut out = FormVector::zero();
        for (mask, c) in v.iter() {
            for (w, k) in &self.terms {
                if let Some((u, neg)) = w.act(mask) {
                    out.add_signed(u, &k.mul(c), neg);
                }
            }
        }
        out
    }

    pub fn apply_basis(&self, mask: u32) -> FormVector<R> {
        let mut out = FormVector::zero();
        for (w, k) in &self.terms {
            if let Some((u, neg)) = w.act(mask) {
                out.add_signed(u, k, neg);
            }
        }
        out
    }

    /// Masks reachable from `mask` by single words.
    fn neighbours(&self, mask: u32) -> impl Iterator<Item = u32> + '_ {
        self.terms.iter().filter_map(move |(w, _)| w.act(mask).map(|p| p.0))
    }
}

impl SpinOp<Qi> {
    pub fn lift(&self) -> SpinOp<Poly> {
        SpinOp {
            m: self.m,
            terms: self.terms.iter().map(|(w, c)| (*w, Poly::constant(c.clone()))).collect(),
        }
    }

    /// Applies a constant operator to a form with polynomial coefficients.
    pub fn apply_poly(&self, v: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero();
        for (mask, c) in v.iter() {
            for (w, k) in &self.terms {
                if let Some((u, neg)) = w.act(mask) {
                    out.add_signed(u, &c.scale(k), neg);
                }
            }
        }
        out
    }

    /// Dense matrix on the given (invariant) set of basis masks.
    fn dense_on(&self, masks: &[u32]) -> QMatrix {
        let pos: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mat = QMatrix::zeros(masks.len(), masks.len());
        for (j, &mask) in masks.iter().enumerate() {
            for (u, c) in self.apply_basis(mask).iter() {
                let i = pos[&u];
                mat.set(i, j, c.clone());
            }
        }
        mat
    }

    /// Connected blocks of the basis under the operator's words (union-find).
    fn blocks(&self) -> Vec<Vec<u32>> {
        let total = 1usize << self.m;
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for mask in 0..total {
            for u in self.neighbours(mask as u32) {
                let (x, y) = (find(&mut parent, mask), find(&mut parent, u as usize));
                if x != y {
                    parent[x] = y;
                }
            }
        }
        let mut grouped: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for mask in 0..total {
            let r = find(&mut parent, mask);
            grouped.entry(r).or_default().push(mask as u32);
        }
        grouped.into_values().collect()
    }
}

impl SpinOp<Poly> {
    pub fn as_constant(&self) -> Option<SpinOp<Qi>> {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| c.as_constant().map(|q| (*w, q)))
            .collect::<Option<Vec<_>>>()?;
        Some(SpinOp { m: self.m, terms })
    }

    pub fn eval(&self, pt: &BTreeMap<Var, Qi>) -> Result<SpinOp<Qi>> {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| c.eval(pt).map(|q| (*w, q)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinOp::from_terms(self.m, terms))
    }
}

/// ρ(A) = −Σ E_ab e^b∧ι_a + ½ tr E + ½ Σ P_ab ι_aι_b + ½ Σ B_ab e^a∧e^b∧
/// for A = [[E, P], [B, −Eᵀ]]. Satisfies [ρ(A), v·] = (Av)·.
pub fn spin_rep<R: Ring>(a: &SkewOperator<R>) -> SpinOp<R> {
    let m = a.m();
    let mat = a.matrix();
    let mut terms = Vec::new();
    let mut trace = R::zero();
    for i in 0..m {
        for j in 0..m {
            let e = mat.get(i, j);
            if !e.is_zero() {
                terms.push((Word::WedgeIota { w: j, i }, e.neg()));
            }
        }
        trace.add_assign(mat.get(i, i));
    }
    terms.push((Word::Id, trace.scale(&Qi::from_frac(1, 2))));
    for i in 0..m {
        for j in i + 1..m {
            let p = mat.get(i, m + j);
            if !p.is_zero() {
                terms.push((Word::IotaIota(i, j), p.clone()));
            }
            let b = mat.get(m + i, j);
            if !b.is_zero() {
                terms.push((Word::WedgeWedge(i, j), b.clone()));
            }
        }
    }
    SpinOp::from_terms(m, terms)
}

/// Exact basis of ker(op − λ) for a constant operator.
pub fn eigenspace(op: &SpinOp<Poly>, lambda: &Qi) -> Result<Vec<QForm>> {
    let c = op.as_constant().ok_or_else(|| {
        Error::PolynomialEntries("eigenspaces need constant entries; use lagrange_projector".into())
    })?;
    Ok(eigenspace_const(&c, lambda))
}

pub fn eigenspace_const(op: &SpinOp<Qi>, lambda: &Qi) -> Vec<QForm> {
    let mut out = Vec::new();
    for block in op.blocks() {
        let mut mat = op.dense_on(&block);
        for i in 0..block.len() {
            let v = mat.get(i, i) - lambda;
            mat.set(i, i, v);
        }
        for k in mat.kernel() {
            let mut f = QForm::zero();
            for (c, &mask) in k.into_iter().zip(&block) {
                f.add_term(mask, c);
            }
            out.push(f);
        }
    }
    out
}

/// Joint eigenspaces of two commuting operators for eigenvalues (−p·i, −q·i),
/// |p|, |q| ≤ n. Diagonalises `a` first, then `b` inside each eigenspace of `a`.
pub fn joint_grading(a: &SpinOp<Qi>, b: &SpinOp<Qi>, n: i64) -> BTreeMap<(i64, i64), Vec<QForm>> {
    let m = a.m;
    let union = SpinOp { m, terms: a.terms.iter().chain(&b.terms).cloned().collect() };
    let shifted = |mat: &QMatrix, k: i64| {
        let mut out = mat.clone();
        let lambda = -(Qi::from_int(k).mul_i());
        for i in 0..out.rows() {
            let v = out.get(i, i) - &lambda;
            out.set(i, i, v);
        }
        out
    };
    let mut out: BTreeMap<(i64, i64), Vec<QForm>> = BTreeMap::new();
    for block in union.blocks() {
        let (da, db) = (a.dense_on(&block), b.dense_on(&block));
        for p in -n..=n {
            let ep = shifted(&da, p).kernel();
            if ep.is_empty() {
                continue;
            }
            for q in -n..=n {
                let bq = shifted(&db, q);
                let images: Vec<Vec<Qi>> = ep.iter().map(|v| bq.apply(v)).collect();
                // columns are the images of the basis of E_p
                let sys = QMatrix::from_fn(block.len(), ep.len(), |r, c| images[c][r].clone());
                for coeffs in sys.kernel() {
                    let mut f = QForm::zero();
                    for (c, v) in coeffs.iter().zip(&ep) {
                        for (x, &mask) in v.iter().zip(&block) {
                            f.add_term(mask, c * x);
                        }
                    }
                    out.entry((p, q)).or_default().push(f);
                }
            }
        }
    }
    out
}

/// Basis of ∩_i ker(op_i − λ_i) for commuting constant operators.
pub fn joint_eigenspace(ops: &[&SpinOp<Qi>], lambdas: &[Qi]) -> Vec<QForm> {
    let m = ops[0].m;
    let union = SpinOp { m, terms: ops.iter().flat_map(|o| o.terms.iter().cloned()).collect() };
    let mut out = Vec::new();
    for block in union.blocks() {
        let mut stacked: Vec<Vec<Qi>> = Vec::new();
        for (op, lambda) in ops.iter().zip(lambdas) {
            let mut mat = op.dense_on(&block);
            for i in 0..block.len() {
                let v = mat.get(i, i) - lambda;
                mat.set(i, i, v);
            }
            stacked.extend((0..block.len()).map(|i| mat.row(i)));
        }
        for k in QMatrix::from_rows(stacked).kernel() {
            let mut f = QForm::zero();
            for (c, &mask) in k.into_iter().zip(&block) {
                f.add_term(mask, c);
            }
            out.push(f);
        }
    }
    out
}

/// Coefficients of the Lagrange basis polynomials for nodes `−j·i`, `j = −n..=n`.
fn lagrange_coeffs(n: usize) -> Vec<Vec<Qi>> {
    let nodes: Vec<Qi> = (-(n as i64)..=n as i64).map(|j| -(Qi::from_int(j).mul_i())).collect();
    nodes
        .iter()
        .enumerate()
        .map(|(k, lk)| {
            let mut poly = vec![Qi::one()];
            let mut denom = Qi::one();
            for (j, lj) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                // poly *= (x - lj)
                let mut next = vec![Qi::zero(); poly.len() + 1];
                for (e, c) in poly.iter().enumerate() {
                    next[e + 1] += c;
                    next[e] -= &(c * lj);
                }
                poly = next;
                denom = &denom * &(lk - lj);
            }
            let inv = denom.inv().unwrap();
            poly.iter().map(|c| c * &inv).collect()
        })
        .collect()
}

/// Grading projectors P_k = Π_{j≠k} (ρ − λ_j)/(λ_k − λ_j), λ_j = −j·i, k = −n..=n.
#[derive(Clone, Debug)]
pub struct Grading<R> {
    pub op: SpinOp<R>,
    pub n: usize,
    coeffs: Vec<Vec<Qi>>,
}

impl<R: Ring> Grading<R> {
    pub fn new(op: SpinOp<R>) -> Self {
        let n = op.m / 2;
        Self { op, n, coeffs: lagrange_coeffs(n) }
    }

    pub fn from_skew(a: &SkewOperator<R>) -> Self {
        Self::new(spin_rep(a))
    }

    /// All components `P_{-n} v, …, P_n v`.
    pub fn project_all(&self, v: &FormVector<R>) -> Vec<FormVector<R>> {
        let mut krylov = vec![v.clone()];
        for _ in 0..2 * self.n {
            let next = self.op.apply(krylov.last().unwrap());
            if next.is_zero() {
                break;
            }
            krylov.push(next);
        }
        self.combine(&krylov)
    }

    fn combine(&self, krylov: &[FormVector<R>]) -> Vec<FormVector<R>> {
        self.coeffs
            .iter()
            .map(|cs| {
                let mut acc = FormVector::zero();
                for (c, k) in cs.iter().zip(krylov) {
                    if !c.is_zero() {
                        acc.add_assign(&k.scale(c));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn project(&self, k: i64, v: &FormVector<R>) -> FormVector<R> {
        let idx = k + self.n as i64;
        if idx < 0 || idx > 2 * self.n as i64 {
            return FormVector::zero();
        }
        self.project_all(v).swap_remove(idx as usize)
    }

    /// Grades present in `v`, with its components.
    pub fn components(&self, v: &FormVector<R>) -> BTreeMap<i64, FormVector<R>> {
        self.project_all(v)
            .into_iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, f)| (i as i64 - self.n as i64, f))
            .collect()
    }
}

/// P_k for the spinor action of `j`.
pub fn lagrange_projector<R: Ring>(j: &SkewOperator<R>, k: i64) -> impl Fn(&FormVector<R>) -> FormVector<R> {
    let g = Grading::from_skew(j);
    move |v| g.project(k, v)
}

/// Constant grading with projections of basis monomials memoised; applies to
/// polynomial-coefficient forms coefficientwise.
#[derive(Debug)]
pub struct CachedGrading {
    pub grading: Grading<Qi>,
    cache: RwLock<HashMap<u32, Arc<Vec<QForm>>>>,
}

impl Clone for CachedGrading {
    fn clone(&self) -> Self {
        Self::new(self.grading.op.clone())
    }
}

impl CachedGrading {
    pub fn new(op: SpinOp<Qi>) -> Self {
        Self { grading: Grading::new(op), cache: RwLock::new(HashMap::new()) }
    }

    pub fn n(&self) -> usize {
        self.grading.n
    }

    pub fn op(&self) -> &SpinOp<Qi> {
        &self.grading.op
    }

    fn basis_parts(&self, mask: u32) -> Arc<Vec<QForm>> {
        if let Some(v) = self.cache.read().unwrap().get(&mask) {
            return v.clone();
        }
        let parts = Arc::new(self.grading.project_all(&QForm::basis(mask)));
        self.cache.write().unwrap().insert(mask, parts.clone());
        parts
    }

    pub fn project_all(&self, v: &PolyForm) -> Vec<PolyForm> {
        let mut out = vec![PolyForm::zero(); 2 * self.n() + 1];
        for (mask, c) in v.iter() {
            let parts = self.basis_parts(mask);
            for (o, part) in out.iter_mut().zip(parts.iter()) {
                for (u, q) in part.iter() {
                    o.add_term(u, c.scale(q));
                }
            }
        }
        out
    }

    pub fn project(&self, k: i64, v: &PolyForm) -> PolyForm {
        let idx = k + self.n() as i64;
        if idx < 0 || idx > 2 * self.n() as i64 {
            return PolyForm::zero();
        }
        let mut out = PolyForm::zero();
        for (mask, c) in v.iter() {
            let parts = self.basis_parts(mask);
            for (u, q) in parts[idx as usize].iter() {
                out.add_term(u, c.scale(q));
            }
        }
        out
    }

    pub fn components(&self, v: &PolyForm) -> BTreeMap<i64, PolyForm> {
        self.project_all(v)
            .into_iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, f)| (i as i64 - self.n() as i64, f))
            .collect()
    }

    /// Basis of U^k as eigenvectors.
    pub fn eigenbasis(&self, k: i64) -> Vec<QForm> {
        eigenspace_const(self.op(), &-(Qi::from_int(k).mul_i()))
    }
}

/// Either a constant grading (cached) or a polynomial one.
#[derive(Clone, Debug)]
pub enum AnyGrading {
    Constant(Arc<CachedGrading>),
    Polynomial(Arc<Grading<Poly>>),
}

impl AnyGrading {
    pub fn from_matrix(j: &PMatrix) -> Result<Self> {
        let skew = SkewOperator::new(j.clone())?;
        let op = spin_rep(&skew);
        Ok(match op.as_constant() {
            Some(c) => AnyGrading::Constant(Arc::new(CachedGrading::new(c))),
            None => AnyGrading::Polynomial(Arc::new(Grading::new(op))),
        })
    }

    pub fn n(&self) -> usize {
        match self {
            AnyGrading::Constant(g) => g.n(),
            AnyGrading::Polynomial(g) => g.n,
        }
    }

    pub fn project(&self, k: i64, v: &PolyForm) -> PolyForm {
        match self {
            AnyGrading::Constant(g) => g.project(k, v),
            AnyGrading::Polynomial(g) => g.project(k, v),
        }
    }

    pub fn components(&self, v: &PolyForm) -> BTreeMap<i64, PolyForm> {
        match self {
            AnyGrading::Constant(g) => g.components(v),
            AnyGrading::Polynomial(g) => g.components(v),
        }
    }

    /// Basis of U^k; only available for constant structures.
    pub fn eigenbasis(&self, k: i64) -> Result<Vec<QForm>> {
        match self {
            AnyGrading::Constant(g) => Ok(g.eigenbasis(k)),
            AnyGrading::Polynomial(g) => eigenspace(&g.op, &-(Qi::from_int(k).mul_i())),
        }
    }

    pub fn apply_rho(&self, v: &PolyForm) -> PolyForm {
        match self {
            AnyGrading::Constant(g) => g.op().apply_poly(v),
            AnyGrading::Polynomial(g) => g.op.apply(v),
        }
    }
}

/// Distinct grades occurring in a set of forms (diagnostic helper).
pub fn grades_of(g: &AnyGrading, forms: &[PolyForm]) -> BTreeSet<i64> {
    forms.iter().flat_map(|f| g.components(f).into_keys()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{clifford_act, GenVector};

    #[test]
    fn lagrange_partition_of_unity() {
        let cs = lagrange_coeffs(2);
        for e in 0..cs[0].len() {
            let s = cs.iter().fold(Qi::zero(), |acc, c| &acc + &c[e]);
            assert_eq!(s, if e == 0 { Qi::one() } else { Qi::zero() });
        }
    }

    #[test]
    fn zero_operator() {
        let a = SkewOperator::new(QMatrix::zeros(4, 4)).unwrap();
        assert!(spin_rep(&a).is_zero());
    }

    #[test]
    fn derivation_identity_small() {
        // E = [[1,2],[0,-1]], P = [[0,3],[-3,0]], B = [[0,i],[-i,0]]
        let q = Qi::from_int;
        let mut mat = QMatrix::zeros(4, 4);
        mat.set(0, 0, q(1));
        mat.set(0, 1, q(2));
        mat.set(1, 1, q(-1));
        mat.set(2, 2, q(-1));
        mat.set(3, 2, q(-2));
        mat.set(3, 3, q(1));
        mat.set(0, 3, q(3));
        mat.set(1, 2, q(-3));
        mat.set(2, 1, Qi::i());
        mat.set(3, 0, -Qi::i());
        let a = SkewOperator::new(mat.clone()).unwrap();
        let rho = spin_rep(&a);
        for vi in 0..4 {
            let v: GenVector<Qi> = GenVector::unit(2, vi);
            let av = GenVector::new(mat.apply(&v.c));
            for mask in 0..4u32 {
                let alpha = QForm::basis(mask);
                let lhs = rho.apply(&clifford_act(&v, &alpha)).sub(&clifford_act(&v, &rho.apply(&alpha)));
                assert_eq!(lhs, clifford_act(&av, &alpha), "v={vi} mask={mask}");
            }
        }
    }
}
