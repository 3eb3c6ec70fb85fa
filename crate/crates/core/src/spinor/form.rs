use std::collections::BTreeMap;

use crate::scalars::{Poly, Qi, Ring};

/// Sign of moving `e^a` past the basis covectors of `mask` that precede it.
#[inline]
pub fn sign_below(mask: u32, a: usize) -> bool {
    (mask & ((1u32 << a) - 1)).count_ones() % 2 == 1
}

/// `e^a ∧ e_S` as `(mask, negative?)`, `None` when `a ∈ S`.
#[inline]
pub fn wedge_basis(mask: u32, a: usize) -> Option<(u32, bool)> {
    let bit = 1u32 << a;
    if mask & bit != 0 {
        None
    } else {
        Some((mask | bit, sign_below(mask, a)))
    }
}

/// `ι_a e_S` as `(mask, negative?)`, `None` when `a ∉ S`.
#[inline]
pub fn iota_basis(mask: u32, a: usize) -> Option<(u32, bool)> {
    let bit = 1u32 << a;
    if mask & bit == 0 {
        None
    } else {
        Some((mask & !bit, sign_below(mask, a)))
    }
}

/// `e_S ∧ e_T` as `(mask, negative?)`, `None` if they share an index.
pub fn wedge_masks(s: u32, t: u32) -> Option<(u32, bool)> {
    if s & t != 0 {
        return None;
    }
    // count pairs (x in S, y in T) with x > y
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (s >> (y + 1)).count_ones();
    }
    Some((s | t, inversions % 2 == 1))
}

/// Sparse element of Λ(V*)_ℂ, keyed by basis bitmask in ascending-index order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FormVector<R> {
    terms: BTreeMap<u32, R>,
}

pub type QForm = FormVector<Qi>;
pub type PolyForm = FormVector<Poly>;

impl<R> Default for FormVector<R> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<R: Ring> FormVector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: R) -> Self {
        Self::term(0, c)
    }

    pub fn one() -> Self {
        Self::scalar(R::one())
    }

    pub fn basis(mask: u32) -> Self {
        Self::term(mask, R::one())
    }

    pub fn term(mask: u32, c: R) -> Self {
        let mut f = Self::zero();
        f.add_term(mask, c);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, mask: u32) -> R {
        self.terms.get(&mask).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &R)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, mask: u32, c: R) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, mask: u32, c: &R, negative: bool) {
        self.add_term(mask, if negative { c.neg() } else { c.clone() });
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &Qi) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map(|x| x.scale(c))
    }

    pub fn mul_scalar(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x.mul(c));
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> FormVector<S> {
        let mut out = FormVector::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                if let Some((u, neg)) = wedge_masks(*s, *t) {
                    out.add_signed(u, &a.mul(b), neg);
                }
            }
        }
        out
    }

    /// `e^a ∧ self`.
    pub fn wedge_e(&self, a: usize) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            if let Some((u, neg)) = wedge_basis(*s, a) {
                out.add_signed(u, c, neg);
            }
        }
        out
    }

    /// `ι_{e_a} self`.
    pub fn iota_e(&self, a: usize) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            if let Some((u, neg)) = iota_basis(*s, a) {
                out.add_signed(u, c, neg);
            }
        }
        out
    }

    /// Homogeneous component of degree `k`.
    pub fn degree_part(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Reverses the wedge order of every monomial.
    pub fn reverse(&self) -> Self {
        self.map_masks(|m| {
            let k = m.count_ones();
            (m, (k * k.saturating_sub(1) / 2) % 2 == 1)
        })
    }

    /// Applies a signed mask permutation.
    pub fn map_masks(&self, f: impl Fn(u32) -> (u32, bool)) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (u, neg) = f(*m);
            out.add_signed(u, c, neg);
        }
        out
    }

    /// Degree-`k` parity operator: `(-1)^deg`.
    pub fn parity(&self) -> Self {
        self.map_masks(|m| (m, m.count_ones() % 2 == 1))
    }
}

impl FormVector<Qi> {
    pub fn lift(&self) -> PolyForm {
        self.map(|c| Poly::constant(c.clone()))
    }
}

impl FormVector<Poly> {
    pub fn scale_poly(&self, p: &Poly) -> Self {
        self.mul_scalar(p)
    }

    pub fn as_constant(&self) -> Option<QForm> {
        let mut out = QForm::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.as_constant()?);
        }
        Some(out)
    }

    pub fn eval(
        &self,
        point: &BTreeMap<crate::scalars::Var, Qi>,
    ) -> crate::error::Result<QForm> {
        let mut out = QForm::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.eval(point)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_signs() {
        // e^1 ∧ e^0 = -e^0 ∧ e^1
        assert_eq!(wedge_basis(0b01, 1), Some((0b11, true)));
        assert_eq!(wedge_basis(0b10, 0), Some((0b11, false)));
        assert_eq!(wedge_basis(0b10, 1), None);
        assert_eq!(iota_basis(0b11, 1), Some((0b01, true)));
        assert_eq!(iota_basis(0b11, 0), Some((0b10, false)));
        assert_eq!(wedge_masks(0b010, 0b101), Some((0b111, true)));
        assert_eq!(wedge_masks(0b001, 0b110), Some((0b111, false)));
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let a: QForm = QForm::basis(0b0001).add(&QForm::basis(0b0110));
        let b: QForm = QForm::basis(0b1000);
        // deg a mixed: odd part anticommutes, even part commutes
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        assert_eq!(ab.degree_part(2), ba.degree_part(2).neg());
        assert_eq!(ab.degree_part(3), ba.degree_part(3));
    }
}
