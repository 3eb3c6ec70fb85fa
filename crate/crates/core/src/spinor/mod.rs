//! Λ(V*)_ℂ as a Clifford module over V ⊕ V*.
//!
//! Basis conventions: on a complex chart of dimension `n`, index `a < n` is `z_a`
//! and `a ≥ n` is `z̄_{a-n}`; on a real chart index `a` is `x_a`. Generalized
//! vectors store the `m` vector components first, then the `m` covector components.
//!
//! With the pairing ⟨X+α, Y+β⟩ = ½(β(X)+α(Y)) and (X+ξ)·α = ι_Xα + ξ∧α one gets
//! `v·v·α = ξ(X)α = 2⟨v,v⟩α`.

pub mod form;
pub mod rep;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use form::{FormVector, PolyForm, QForm};
pub use rep::{eigenspace, lagrange_projector, spin_rep, Grading, SkewOperator, SpinOp};

use crate::error::{Error, Result};
use crate::scalars::{Poly, Qi, Ring, Var};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Complex,
    Real,
}

/// Affine coordinates; `m` is the real dimension.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Chart {
    pub kind: ChartKind,
    pub m: usize,
}

impl Chart {
    pub fn complex(n: usize) -> Self {
        assert!(2 * n <= 30, "chart too large");
        Chart { kind: ChartKind::Complex, m: 2 * n }
    }

    pub fn real(m: usize) -> Self {
        assert!(m.is_multiple_of(2) && m <= 30, "real dimension must be even and at most 30");
        Chart { kind: ChartKind::Real, m }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Half the real dimension.
    pub fn n(&self) -> usize {
        self.m / 2
    }

    pub fn is_complex(&self) -> bool {
        self.kind == ChartKind::Complex
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn var(&self, a: usize) -> Var {
        let n = self.n();
        match self.kind {
            ChartKind::Complex if a < n => Var::Z(a as u16),
            ChartKind::Complex => Var::Zb((a - n) as u16),
            ChartKind::Real => Var::X(a as u16),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        (0..self.m).map(|a| self.var(a)).collect()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        let n = self.n();
        let a = match (self.kind, v) {
            (ChartKind::Complex, Var::Z(k)) if (k as usize) < n => k as usize,
            (ChartKind::Complex, Var::Zb(k)) if (k as usize) < n => n + k as usize,
            (ChartKind::Real, Var::X(k)) if (k as usize) < self.m => k as usize,
            _ => return None,
        };
        Some(a)
    }

    /// Index of the complex-conjugate coordinate.
    pub fn conj_index(&self, a: usize) -> usize {
        let n = self.n();
        match self.kind {
            ChartKind::Complex if a < n => a + n,
            ChartKind::Complex => a - n,
            ChartKind::Real => a,
        }
    }

    /// Image of a basis monomial under conjugation, with reordering sign.
    pub fn conj_mask(&self, mask: u32) -> (u32, bool) {
        if !self.is_complex() {
            return (mask, false);
        }
        let mut out: FormVector<Qi> = FormVector::one();
        for a in (0..self.m).filter(|a| mask & (1 << a) != 0).rev() {
            out = out.wedge_e(self.conj_index(a));
        }
        let (m, c) = out.iter().next().map(|(m, c)| (m, c.clone())).unwrap();
        (m, c != Qi::one())
    }

    pub fn form_token(&self, a: usize) -> String {
        format!("d{}", self.var(a))
    }

    pub fn vector_token(&self, a: usize) -> String {
        format!("d/d{}", self.var(a))
    }

    pub fn parse_form_token(&self, s: &str) -> Option<usize> {
        s.strip_prefix('d').and_then(Var::parse).and_then(|v| self.index_of(v))
    }

    pub fn parse_vector_token(&self, s: &str) -> Option<usize> {
        s.strip_prefix("d/d").and_then(Var::parse).and_then(|v| self.index_of(v))
    }

    pub fn mask_name(&self, mask: u32) -> String {
        if mask == 0 {
            return "1".into();
        }
        (0..self.m)
            .filter(|a| mask & (1 << a) != 0)
            .map(|a| self.form_token(a))
            .collect::<Vec<_>>()
            .join("∧")
    }

    pub fn conj_form<R: Ring>(&self, f: &FormVector<R>) -> FormVector<R> {
        let mut out = FormVector::zero();
        for (mask, c) in f.iter() {
            let (u, neg) = self.conj_mask(mask);
            out.add_signed(u, &c.conj(), neg);
        }
        out
    }

    pub fn check(&self, other: &Chart) -> Result<()> {
        if self != other {
            return Err(Error::ChartMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }

    /// Renders a form in the scene grammar.
    pub fn fmt_form<R: Ring>(&self, f: &FormVector<R>) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = f
            .iter()
            .map(|(mask, c)| {
                if mask == 0 {
                    format!("({c})")
                } else {
                    format!("({c})*{}", self.mask_name(mask))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// An element X + ξ of (V ⊕ V*)_ℂ: `m` vector components, then `m` covector components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenVector<R> {
    pub c: Vec<R>,
}

pub type QVector = GenVector<Qi>;
pub type PVector = GenVector<Poly>;

impl<R: Ring> GenVector<R> {
    pub fn zero(m: usize) -> Self {
        GenVector { c: vec![R::zero(); 2 * m] }
    }

    pub fn new(c: Vec<R>) -> Self {
        assert!(c.len().is_multiple_of(2));
        GenVector { c }
    }

    /// `e_a` (vector) for `a < m`, `e^{a-m}` (covector) otherwise.
    pub fn unit(m: usize, a: usize) -> Self {
        let mut v = Self::zero(m);
        v.c[a] = R::one();
        v
    }

    pub fn m(&self) -> usize {
        self.c.len() / 2
    }

    pub fn x(&self) -> &[R] {
        &self.c[..self.m()]
    }

    pub fn xi(&self) -> &[R] {
        &self.c[self.m()..]
    }

    pub fn add(&self, o: &Self) -> Self {
        GenVector { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GenVector { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: &Qi) -> Self {
        GenVector { c: self.c.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn mul_scalar(&self, s: &R) -> Self {
        GenVector { c: self.c.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(R::is_zero)
    }

    /// Complex conjugate, with coordinate indices swapped on complex charts.
    pub fn conj(&self, chart: &Chart) -> Self {
        let m = self.m();
        let mut out = Self::zero(m);
        for a in 0..m {
            let b = chart.conj_index(a);
            out.c[b] = self.c[a].conj();
            out.c[m + b] = self.c[m + a].conj();
        }
        out
    }

    /// The covector part as a 1-form.
    pub fn xi_form(&self) -> FormVector<R> {
        let mut f = FormVector::zero();
        for (a, c) in self.xi().iter().enumerate() {
            f.add_term(1 << a, c.clone());
        }
        f
    }
}

impl GenVector<Qi> {
    pub fn lift(&self) -> PVector {
        GenVector { c: self.c.iter().map(|x| Poly::constant(x.clone())).collect() }
    }
}

impl GenVector<Poly> {
    pub fn eval(&self, pt: &std::collections::BTreeMap<Var, Qi>) -> Result<QVector> {
        Ok(GenVector { c: self.c.iter().map(|p| p.eval(pt)).collect::<Result<_>>()? })
    }
}

impl<R: Ring> fmt::Display for GenVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// ⟨X+α, Y+β⟩ = ½(β(X) + α(Y)).
pub fn pairing<R: Ring>(v: &GenVector<R>, w: &GenVector<R>) -> Result<R> {
    if v.c.len() != w.c.len() {
        return Err(Error::ChartMismatch("generalized vectors of different dimension".into()));
    }
    let m = v.m();
    let mut acc = R::zero();
    for a in 0..m {
        let t1 = w.c[m + a].mul(&v.c[a]);
        let t2 = v.c[m + a].mul(&w.c[a]);
        acc.add_assign(&t1);
        acc.add_assign(&t2);
    }
    Ok(acc.scale(&Qi::from_frac(1, 2)))
}

/// (X+ξ)·α = ι_Xα + ξ∧α.
pub fn clifford_act<R: Ring>(v: &GenVector<R>, alpha: &FormVector<R>) -> FormVector<R> {
    let m = v.m();
    let mut out = FormVector::zero();
    for (mask, c) in alpha.iter() {
        for a in 0..m {
            let x = &v.c[a];
            if !x.is_zero() {
                if let Some((u, neg)) = form::iota_basis(mask, a) {
                    out.add_signed(u, &x.mul(c), neg);
                }
            }
            let xi = &v.c[m + a];
            if !xi.is_zero() {
                if let Some((u, neg)) = form::wedge_basis(mask, a) {
                    out.add_signed(u, &xi.mul(c), neg);
                }
            }
        }
    }
    out
}

/// Checked variant of [`clifford_act`] against a chart.
pub fn clifford_act_on(chart: &Chart, v: &GenVector<Poly>, alpha: &PolyForm) -> Result<PolyForm> {
    if v.m() != chart.m || alpha.masks().any(|m| m >= 1 << chart.m) {
        return Err(Error::ChartMismatch("operand does not live on the chart".into()));
    }
    Ok(clifford_act(v, alpha))
}

/// Top-degree component of σ(α) ∧ β.
pub fn mukai_pairing<R: Ring>(chart: &Chart, alpha: &FormVector<R>, beta: &FormVector<R>) -> Result<R> {
    let top = chart.full_mask();
    if alpha.masks().chain(beta.masks()).any(|m| m & !top != 0) {
        return Err(Error::ChartMismatch("form does not live on the chart".into()));
    }
    let s = alpha.reverse();
    let mut acc = R::zero();
    for (ma, a) in s.iter() {
        let mb = top & !ma;
        let b = beta.get(mb);
        if b.is_zero() {
            continue;
        }
        let (_, neg) = form::wedge_masks(ma, mb).unwrap();
        let t = a.mul(&b);
        acc.add_assign(&if neg { t.neg() } else { t });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let e1: QVector = GenVector::unit(2, 0);
        let e1d: QVector = GenVector::unit(2, 2);
        let e2: QVector = GenVector::unit(2, 1);
        assert_eq!(pairing(&e1, &e1d).unwrap(), Qi::from_frac(1, 2));
        assert!(pairing(&e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn clifford_examples() {
        let v: QVector = GenVector::unit(2, 0).add(&GenVector::unit(2, 2));
        let e2: QForm = QForm::basis(0b10);
        assert_eq!(clifford_act(&v, &clifford_act(&v, &e2)), e2);
        let e1: QVector = GenVector::unit(2, 0);
        assert!(clifford_act(&e1, &QForm::one()).is_zero());
        let e1d: QVector = GenVector::unit(2, 2);
        assert_eq!(clifford_act(&e1d, &QForm::one()), QForm::basis(0b01));
    }

    #[test]
    fn conj_mask_signs() {
        let ch = Chart::complex(1);
        // conj(dz0 ∧ dzb0) = dzb0 ∧ dz0 = -dz0 ∧ dzb0
        assert_eq!(ch.conj_mask(0b11), (0b11, true));
        assert_eq!(ch.conj_mask(0b01), (0b10, false));
    }

    #[test]
    fn mukai_top() {
        let ch = Chart::real(2);
        let vol: QForm = QForm::term(0b11, Qi::from_int(5));
        assert_eq!(mukai_pairing(&ch, &QForm::one(), &vol).unwrap(), Qi::from_int(5));
    }
}
