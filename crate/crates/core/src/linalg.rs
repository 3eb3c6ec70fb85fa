//! Dense matrices over a `Ring`, with exact elimination over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::{Poly, Qi, Ring, Var};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type QMatrix = Matrix<Qi>;
pub type PMatrix = Matrix<Poly>;

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<R>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<R>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * o.cols + j].add_assign(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc.add_assign(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &Qi) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Copies `sub` into the block starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, sub: &Self) {
        for i in 0..sub.rows {
            for j in 0..sub.cols {
                self.set(r0 + i, c0 + j, sub.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `[[a, b], [c, d]]` for square blocks of equal size.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (m, k) = (a.rows, a.cols);
        let mut out = Self::zeros(m + c.rows, k + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, k, b);
        out.set_block(m, 0, c);
        out.set_block(m, k, d);
        out
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }
}

impl Matrix<Qi> {
    pub fn lift(&self) -> PMatrix {
        self.map(|x| Poly::constant(x.clone()))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let rj = m.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * rj);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Qi>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Qi::zero(); self.cols];
                v[f] = Qi::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// A particular solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[Qi]) -> Option<Vec<Qi>> {
        let aug = self.hstack(&Self::from_cols(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Qi::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Qi {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Qi::one();
        }
        let mut m = self.clone();
        let mut sign = Qi::one();
        let mut prev = Qi::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Qi::zero();
                };
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j))) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        &sign * m.get(n - 1, n - 1)
    }

    /// Leading principal minors `Δ_1 … Δ_n`.
    pub fn leading_minors(&self) -> Vec<Qi> {
        (1..=self.rows).map(|k| self.block(0, 0, k, k).det()).collect()
    }
}

impl Matrix<Poly> {
    pub fn eval(&self, point: &BTreeMap<Var, Qi>) -> Result<QMatrix> {
        let data = self.data.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn as_constant(&self) -> Option<QMatrix> {
        let data = self.data.iter().map(Poly::as_constant).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank of a family of vectors.
pub fn rank_of(vs: &[Vec<Qi>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).rank()
}

/// Echelonised basis of the span, as row vectors.
pub fn span_basis(vs: &[Vec<Qi>]) -> Vec<Vec<Qi>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vs.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Subspace equality by double rank: rank[A|B] = rank A = rank B.
pub fn same_span(a: &[Vec<Qi>], b: &[Vec<Qi>]) -> bool {
    let ra = rank_of(a);
    let rb = rank_of(b);
    if ra != rb {
        return false;
    }
    let both: Vec<Vec<Qi>> = a.iter().chain(b).cloned().collect();
    rank_of(&both) == ra
}

/// `true` when every vector of `a` lies in span `b`.
pub fn contained_in(a: &[Vec<Qi>], b: &[Vec<Qi>]) -> bool {
    let rb = rank_of(b);
    let both: Vec<Vec<Qi>> = a.iter().chain(b).cloned().collect();
    rank_of(&both) == rb
}

/// Basis of span a ∩ span b (vectors of length `dim`).
pub fn intersection(a: &[Vec<Qi>], b: &[Vec<Qi>], dim: usize) -> Vec<Vec<Qi>> {
    let a = span_basis(a);
    let b = span_basis(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<Qi>> = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = Matrix::from_cols(&cols, dim);
    let out: Vec<Vec<Qi>> = m
        .kernel()
        .into_iter()
        .map(|k| {
            let mut v = vec![Qi::zero(); dim];
            for (coef, av) in k.iter().zip(&a) {
                if coef.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(av) {
                    *x += &(coef * y);
                }
            }
            v
        })
        .collect();
    span_basis(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Qi {
        Qi::from_int(n)
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), Qi::i()]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.det(), &(&q(2) * &Qi::i()) - &q(1));
        let s = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(s.inverse().is_none());
        assert!(s.det().is_zero());
    }

    #[test]
    fn det_with_pivoting() {
        let m = Matrix::from_rows(vec![
            vec![q(0), q(1), q(2)],
            vec![q(1), q(0), q(3)],
            vec![q(4), q(-3), q(8)],
        ]);
        assert_eq!(m.det(), q(-2));
    }

    #[test]
    fn kernel_and_spans() {
        let m = Matrix::from_rows(vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Qi::is_zero));
        let a = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]];
        let b = vec![vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]];
        let i = intersection(&a, &b, 3);
        assert_eq!(i.len(), 1);
        assert!(same_span(&i, &[vec![q(0), q(3), q(0)]]));
        assert!(!same_span(&a, &b));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(m.solve(&[q(1), q(2)]).is_some());
        assert!(m.solve(&[q(1), q(3)]).is_none());
    }
}
