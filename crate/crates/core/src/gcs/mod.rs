//! Generalized complex structures on V ⊕ V*, constant or with polynomial entries.

pub mod deform;
pub mod dirac;
pub mod kahler;

pub use deform::{deform, deformed_frame, Deformation, EpsTerm};
pub use dirac::{restrict_dirac, weight_split, RestrictedStructure, SplitCertificate};
pub use kahler::{conj_mukai, gk_check, pq_decomposition, pq_orthogonality, pq_pattern, GkCertificate, PqPattern};

use crate::error::{Error, Result};
use crate::linalg::{rank_of, PMatrix, QMatrix};
use crate::scalars::{Point, Poly, Qi, Ring};
use crate::spinor::rep::AnyGrading;
use crate::spinor::{Chart, GenVector, PolyForm, QVector};

#[derive(Clone, Debug, PartialEq)]
pub struct Gcs {
    pub chart: Chart,
    j: PMatrix,
}

impl Gcs {
    /// Validates J² = −1 and skewness for the pairing (equivalently orthogonality).
    pub fn new(chart: Chart, j: PMatrix) -> Result<Self> {
        let m = chart.m;
        if j.rows() != 2 * m || j.cols() != 2 * m {
            return Err(Error::ChartMismatch(format!("expected a {0}×{0} matrix", 2 * m)));
        }
        crate::spinor::SkewOperator::new(j.clone())
            .map_err(|_| Error::NotGeneralizedComplex("not orthogonal for the pairing".into()))?;
        let sq = j.mul(&j);
        if sq != PMatrix::identity(2 * m).neg() {
            return Err(Error::NotGeneralizedComplex("J² ≠ −1".into()));
        }
        Ok(Self { chart, j })
    }

    pub fn from_constant(chart: Chart, j: &QMatrix) -> Result<Self> {
        Self::new(chart, j.lift())
    }

    pub fn matrix(&self) -> &PMatrix {
        &self.j
    }

    pub fn m(&self) -> usize {
        self.chart.m
    }

    pub fn constant(&self) -> Option<QMatrix> {
        self.j.as_constant()
    }

    /// Constant matrix, evaluating at `pt` when the entries are polynomial.
    pub fn at(&self, pt: Option<&Point>) -> Result<QMatrix> {
        if let Some(c) = self.j.as_constant() {
            return Ok(c);
        }
        match pt {
            Some(p) => self.j.eval(p),
            None => Err(Error::PolynomialEntries("an evaluation point is required".into())),
        }
    }

    /// J = diag(−I, Iᵀ); requires I² = −1.
    pub fn from_complex(chart: Chart, i: &QMatrix) -> Result<Self> {
        let m = chart.m;
        if i.rows() != m || i.cols() != m || i.mul(i) != QMatrix::identity(m).neg() {
            return Err(Error::NotComplexStructure);
        }
        let z = QMatrix::zeros(m, m);
        let j = QMatrix::from_blocks(&i.neg(), &z, &z, &i.transpose());
        Self::from_constant(chart, &j)
    }

    /// J = [[0, −♭⁻¹], [♭, 0]] with ♭X = ι_Xω, i.e. ♭ = ωᵀ in components ω_ab = ω(e_a, e_b).
    pub fn from_symplectic(chart: Chart, omega: &QMatrix) -> Result<Self> {
        let m = chart.m;
        if omega.rows() != m || omega.cols() != m || omega.transpose() != omega.neg() {
            return Err(Error::SingularOmega);
        }
        let flat = omega.transpose();
        let inv = flat.inverse().ok_or(Error::SingularOmega)?;
        let z = QMatrix::zeros(m, m);
        let j = QMatrix::from_blocks(&z, &inv.neg(), &flat, &z);
        Self::from_constant(chart, &j)
    }

    /// e^B J e^{−B} with e^B(X+ξ) = X + ξ + ι_X B.
    pub fn b_transform(&self, b: &PMatrix) -> Result<Self> {
        let m = self.m();
        let (eb, emb) = b_exponentials(m, b);
        Self::new(self.chart, eb.mul(&self.j).mul(&emb))
    }

    /// Basis of ker(J − i) at a point.
    pub fn eigenbundle(&self, pt: Option<&Point>) -> Result<Vec<QVector>> {
        let j = self.at(pt)?;
        Ok(plus_i_eigenspace(&j))
    }

    /// Codimension of π(L) in V_ℂ.
    pub fn type_of(&self, pt: Option<&Point>) -> Result<usize> {
        let frame = self.eigenbundle(pt)?;
        Ok(type_of_frame(self.m(), &frame))
    }

    pub fn grading(&self) -> Result<AnyGrading> {
        AnyGrading::from_matrix(&self.j)
    }

    /// The eigenbundle conjugate L̄ as a frame.
    pub fn conj_frame(&self, frame: &[QVector]) -> Vec<QVector> {
        frame.iter().map(|v| v.conj(&self.chart)).collect()
    }
}

pub fn plus_i_eigenspace(j: &QMatrix) -> Vec<QVector> {
    let n = j.rows();
    let shifted = j.sub(&QMatrix::identity(n).scale(&Qi::i()));
    shifted.kernel().into_iter().map(GenVector::new).collect()
}

pub fn type_of_frame(m: usize, frame: &[QVector]) -> usize {
    let xs: Vec<Vec<Qi>> = frame.iter().map(|v| v.x().to_vec()).collect();
    m - rank_of(&xs)
}

/// `(e^B, e^{−B})` as 2m × 2m matrices.
pub fn b_exponentials(m: usize, b: &PMatrix) -> (PMatrix, PMatrix) {
    let one = PMatrix::identity(m);
    let z = PMatrix::zeros(m, m);
    let bt = b.transpose();
    (
        PMatrix::from_blocks(&one, &z, &bt, &one),
        PMatrix::from_blocks(&one, &z, &bt.neg(), &one),
    )
}

/// Component matrix `B_ab = B(e_a, e_b)` of the degree-2 part of a form.
pub fn two_form_matrix(chart: &Chart, f: &PolyForm) -> PMatrix {
    let m = chart.m;
    let mut b = PMatrix::zeros(m, m);
    for (mask, c) in f.degree_part(2).iter() {
        let a = mask.trailing_zeros() as usize;
        let d = 31 - mask.leading_zeros() as usize;
        b.set(a, d, c.clone());
        b.set(d, a, c.neg());
    }
    b
}

/// Inverse of [`two_form_matrix`].
pub fn matrix_two_form(b: &PMatrix) -> PolyForm {
    let mut f = PolyForm::zero();
    for a in 0..b.rows() {
        for d in a + 1..b.rows() {
            f.add_term((1 << a) | (1 << d), b.get(a, d).clone());
        }
    }
    f
}

/// Standard complex structure: multiplication by i on T^{1,0}, or ∂_{2k} ↦ ∂_{2k+1} on ℝ^m.
pub fn standard_complex(chart: &Chart) -> QMatrix {
    let m = chart.m;
    let mut i = QMatrix::zeros(m, m);
    if chart.is_complex() {
        let n = chart.n();
        for k in 0..n {
            i.set(k, k, Qi::i());
            i.set(n + k, n + k, -Qi::i());
        }
    } else {
        for k in 0..m / 2 {
            i.set(2 * k + 1, 2 * k, Qi::one());
            i.set(2 * k, 2 * k + 1, -Qi::one());
        }
    }
    i
}

/// Symplectic form compatible with [`standard_complex`]: ω = −i Σ dz_k∧dz̄_k,
/// or ω = Σ dx_{2k+1}∧dx_{2k} on ℝ^m.
pub fn standard_omega(chart: &Chart) -> QMatrix {
    let m = chart.m;
    let mut w = QMatrix::zeros(m, m);
    if chart.is_complex() {
        let n = chart.n();
        for k in 0..n {
            w.set(k, n + k, -Qi::i());
            w.set(n + k, k, Qi::i());
        }
    } else {
        for k in 0..m / 2 {
            w.set(2 * k + 1, 2 * k, Qi::one());
            w.set(2 * k, 2 * k + 1, -Qi::one());
        }
    }
    w
}

/// Poly-valued generalized vector from a constant one.
pub fn lift_frame(frame: &[QVector]) -> Vec<GenVector<Poly>> {
    frame.iter().map(QVector::lift).collect()
}

/// Checks orthogonality ⟨Jv, Jw⟩ = ⟨v, w⟩ on basis pairs (used by tests and the scene loader).
pub fn is_orthogonal(j: &QMatrix) -> bool {
    let n = j.rows();
    let m = n / 2;
    for a in 0..n {
        let ja = GenVector::new(j.col(a));
        for b in a..n {
            let jb = GenVector::new(j.col(b));
            let lhs = crate::spinor::pairing(&ja, &jb).unwrap();
            let rhs = crate::spinor::pairing(&QVector::unit(m, a), &QVector::unit(m, b)).unwrap();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

impl Gcs {
    /// Standard complex-induced structure on the chart.
    pub fn standard_complex(chart: Chart) -> Self {
        Self::from_complex(chart, &standard_complex(&chart)).expect("standard I")
    }

    /// Standard symplectic-induced structure on the chart.
    pub fn standard_symplectic(chart: Chart) -> Self {
        Self::from_symplectic(chart, &standard_omega(&chart)).expect("standard ω")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_eigenbundle_on_c1() {
        let ch = Chart::complex(1);
        let j = Gcs::standard_complex(ch);
        let l = j.eigenbundle(None).unwrap();
        // span{∂/∂z̄, dz}: components (∂z, ∂z̄, dz, dz̄)
        let expected = vec![
            vec![Qi::zero(), Qi::one(), Qi::zero(), Qi::zero()],
            vec![Qi::zero(), Qi::zero(), Qi::one(), Qi::zero()],
        ];
        let got: Vec<Vec<Qi>> = l.iter().map(|v| v.c.clone()).collect();
        assert!(crate::linalg::same_span(&got, &expected));
        assert_eq!(j.type_of(None).unwrap(), 1);
    }

    #[test]
    fn symplectic_type_zero() {
        let ch = Chart::real(2);
        let mut w = QMatrix::zeros(2, 2);
        w.set(0, 1, Qi::one());
        w.set(1, 0, -Qi::one());
        let j = Gcs::from_symplectic(ch, &w).unwrap();
        assert_eq!(j.type_of(None).unwrap(), 0);
        let l = j.eigenbundle(None).unwrap();
        // X − i ι_X ω
        for v in &l {
            let x = v.x();
            let xi_expected = [&x[1] * &Qi::i(), -(&x[0] * &Qi::i())];
            assert_eq!(v.xi(), &xi_expected);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let ch = Chart::real(2);
        assert_eq!(Gcs::from_complex(ch, &QMatrix::identity(2)).unwrap_err(), Error::NotComplexStructure);
        assert_eq!(Gcs::from_symplectic(ch, &QMatrix::zeros(2, 2)).unwrap_err(), Error::SingularOmega);
    }

    #[test]
    fn b_transform_zero_is_identity() {
        let ch = Chart::complex(2);
        let j = Gcs::standard_complex(ch);
        assert_eq!(j.b_transform(&PMatrix::zeros(4, 4)).unwrap(), j);
    }
}
