//! Exact coefficients: ℚ(i) and polynomials over it.

pub mod gauss;
pub mod parse;
pub mod poly;

use std::fmt;

pub use gauss::{GaussianRational, Qi};
pub use poly::{Monomial, Poly, Var, WirtingerKind};

/// Commutative ring with an involution, over ℚ(i).
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_qi(c: Qi) -> Self;
    fn scale(&self, c: &Qi) -> Self;
    /// `Some(c)` when the element is the constant `c`.
    fn as_qi(&self) -> Option<Qi>;

    fn add_assign(&mut self, o: &Self) {
        *self = Ring::add(self, o);
    }
}

impl Ring for Qi {
    fn zero() -> Self {
        Qi::zero()
    }
    fn one() -> Self {
        Qi::one()
    }
    fn is_zero(&self) -> bool {
        Qi::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Qi::conj(self)
    }
    fn from_qi(c: Qi) -> Self {
        c
    }
    fn scale(&self, c: &Qi) -> Self {
        self * c
    }
    fn as_qi(&self) -> Option<Qi> {
        Some(self.clone())
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn from_qi(c: Qi) -> Self {
        Poly::constant(c)
    }
    fn scale(&self, c: &Qi) -> Self {
        Poly::scale(self, c)
    }
    fn as_qi(&self) -> Option<Qi> {
        self.as_constant()
    }
    fn add_assign(&mut self, o: &Self) {
        self.add_assign_ref(o);
    }
}

/// Assignment of values to coordinate symbols.
pub type Point = std::collections::BTreeMap<Var, Qi>;
