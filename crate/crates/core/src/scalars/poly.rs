use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::gauss::Qi;
use crate::error::{Error, Result};

/// A coordinate symbol. `Z(k)` and `Zb(k)` are independent indeterminates
/// linked only through conjugation; `X(k)` is real.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Z(u16),
    Zb(u16),
    X(u16),
}

impl Var {
    pub fn conj(self) -> Var {
        match self {
            Var::Z(k) => Var::Zb(k),
            Var::Zb(k) => Var::Z(k),
            Var::X(k) => Var::X(k),
        }
    }

    pub fn parse(s: &str) -> Option<Var> {
        let (kind, digits) = if let Some(d) = s.strip_prefix("zb") {
            (1, d)
        } else if let Some(d) = s.strip_prefix('z') {
            (0, d)
        } else {
            let d = s.strip_prefix('x')?;
            (2, d)
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: u16 = digits.parse().ok()?;
        Some(match kind {
            0 => Var::Z(k),
            1 => Var::Zb(k),
            _ => Var::X(k),
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(k) => write!(f, "z{k}"),
            Var::Zb(k) => write!(f, "zb{k}"),
            Var::X(k) => write!(f, "x{k}"),
        }
    }
}

/// Exponent vector, sparse and sorted by variable; no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Returns `(e, m / v)` where `e` is the exponent of `v`, or `None` when absent.
    pub fn divide_var(&self, v: Var) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|p| p.0 == v)?;
        let e = self.0[pos].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 -= 1;
        }
        Some((e, Monomial(rest)))
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (v.conj(), e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over ℚ(i). Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Qi>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Qi::one())
    }

    pub fn constant(c: Qi) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Self::term(Qi::one(), Monomial::var(v))
    }

    pub fn term(c: Qi, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Qi)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Qi> {
        match self.terms.len() {
            0 => Some(Qi::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect()
    }

    /// True when no antiholomorphic variable occurs.
    pub fn is_holomorphic(&self) -> bool {
        self.variables().iter().all(|v| !matches!(v, Var::Zb(_)))
    }

    fn add_term(&mut self, m: Monomial, c: &Qi) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign_ref(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &-c);
        }
    }

    pub fn scale(&self, c: &Qi) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_ref(&self, o: &Poly) -> Poly {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return o.scale(c);
            }
        }
        if o.terms.len() == 1 {
            let (m, c) = o.terms.iter().next().unwrap();
            if m.is_one() {
                return self.scale(c);
            }
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Swaps `z_k ↔ z̄_k` and conjugates coefficients; real variables are fixed.
    pub fn conjugate(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.conj(), &c.conj());
        }
        out
    }

    /// Formal partial derivative, treating `z_k` and `z̄_k` as independent.
    pub fn diff(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.divide_var(v) {
                out.add_term(rest, &(c * &Qi::from_int(e as i64)));
            }
        }
        out
    }

    /// Wirtinger derivative ∂/∂z_k (`holo`) or ∂/∂z̄_k.
    pub fn wirtinger(&self, var: Var, kind: WirtingerKind, chart: &[Var]) -> Result<Poly> {
        if !chart.contains(&var) {
            return Err(Error::UnknownVariable(var.to_string()));
        }
        let target = match (var, kind) {
            (Var::Z(k), WirtingerKind::Holo) | (Var::Zb(k), WirtingerKind::Holo) => Var::Z(k),
            (Var::Z(k), WirtingerKind::Anti) | (Var::Zb(k), WirtingerKind::Anti) => Var::Zb(k),
            (Var::X(_), _) => var,
        };
        Ok(self.diff(target))
    }

    /// Exact substitution. `point` must assign every occurring variable; an assignment
    /// to both `z_k` and `z̄_k` must be conjugate. A missing `z̄_k` is filled from `z_k`
    /// (and vice versa).
    pub fn eval(&self, point: &BTreeMap<Var, Qi>) -> Result<Qi> {
        let pt = complete_point(point)?;
        let mut acc = Qi::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let val = pt.get(&v).ok_or_else(|| Error::IncompleteAssignment(v.to_string()))?;
                t = &t * &val.pow(e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes values for some variables, leaving the rest symbolic.
    pub fn partial_eval(&self, point: &BTreeMap<Var, Qi>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match point.get(&v) {
                    Some(val) => coeff = &coeff * &val.pow(e),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), &coeff);
        }
        out
    }

    pub fn leading(&self) -> Option<(&Monomial, &Qi)> {
        self.terms.iter().next()
    }
}

/// Validates conjugate consistency and fills in missing partners.
pub fn complete_point(point: &BTreeMap<Var, Qi>) -> Result<BTreeMap<Var, Qi>> {
    let mut pt = point.clone();
    for (&v, val) in point {
        match v {
            Var::Z(_) | Var::Zb(_) => {
                let partner = v.conj();
                match point.get(&partner) {
                    Some(p) if *p != val.conj() => {
                        return Err(Error::InconsistentConjugates(v.to_string()))
                    }
                    Some(_) => {}
                    None => {
                        pt.insert(partner, val.conj());
                    }
                }
            }
            Var::X(_) => {
                if !val.is_real() {
                    return Err(Error::InconsistentConjugates(v.to_string()));
                }
            }
        }
    }
    Ok(pt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WirtingerKind {
    Holo,
    Anti,
}

impl fmt::Display for Poly {
    /// Canonical printing; reparses to an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = if c.re.is_zero() { c.im.is_negative() } else { c.im.is_zero() && c.re.is_negative() };
            let mag = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(o);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(o);
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.mul_ref(o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl From<Qi> for Poly {
    fn from(c: Qi) -> Self {
        Poly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u16) -> Poly {
        Poly::var(Var::Z(k))
    }
    fn zb(k: u16) -> Poly {
        Poly::var(Var::Zb(k))
    }
    fn chart(n: u16) -> Vec<Var> {
        (0..n).map(Var::Z).chain((0..n).map(Var::Zb)).collect()
    }

    #[test]
    fn conjugate_examples() {
        let p = z(1).scale(&Qi::i());
        assert_eq!(p.conjugate(), zb(1).scale(&-Qi::i()));
        let c = Poly::constant(Qi::from_frac(3, 2));
        assert_eq!(c.conjugate(), c);
        assert_eq!((&z(0) * &z(1)).conjugate(), &zb(0) * &zb(1));
    }

    #[test]
    fn wirtinger_examples() {
        let ch = chart(4);
        let p = &z(0) * &z(1);
        assert_eq!(p.wirtinger(Var::Z(0), WirtingerKind::Holo, &ch).unwrap(), z(1));
        assert!(p.wirtinger(Var::Z(2), WirtingerKind::Holo, &ch).unwrap().is_zero());
        assert!(zb(2).wirtinger(Var::Z(2), WirtingerKind::Holo, &ch).unwrap().is_zero());
        assert_eq!(
            p.wirtinger(Var::Z(7), WirtingerKind::Holo, &ch),
            Err(Error::UnknownVariable("z7".into()))
        );
    }

    #[test]
    fn eval_examples() {
        let p = &z(0) * &z(1);
        let mut pt = BTreeMap::new();
        pt.insert(Var::Z(0), Qi::one());
        pt.insert(Var::Z(1), Qi::zero());
        assert!(p.eval(&pt).unwrap().is_zero());
        pt.insert(Var::Z(0), Qi::from_parts((1, 1), (1, 1)));
        pt.insert(Var::Z(1), Qi::from_parts((1, 1), (-1, 1)));
        assert_eq!(p.eval(&pt).unwrap(), Qi::from_int(2));
    }

    #[test]
    fn eval_errors() {
        let p = &z(0) * &zb(0);
        let mut pt = BTreeMap::new();
        assert!(matches!(p.eval(&pt), Err(Error::IncompleteAssignment(_))));
        pt.insert(Var::Z(0), Qi::i());
        pt.insert(Var::Zb(0), Qi::i());
        assert!(matches!(p.eval(&pt), Err(Error::InconsistentConjugates(_))));
        pt.insert(Var::Zb(0), -Qi::i());
        assert_eq!(p.eval(&pt).unwrap(), Qi::one());
    }
}
