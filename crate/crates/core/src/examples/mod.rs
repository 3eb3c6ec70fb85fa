//! Worked scenes: ℂ^{n+1} with the circle action whose quotient is CP^n, and
//! ℂ^{n+2} with a T² action whose quotient is CP^n blown up at a point.

mod hodge;

pub use hodge::{
    fixed_points, hodge_report, quotient_type, FixedPoint, HodgeEntry, HodgeReport, QuotientType,
};

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::doublecomplex::DoubleComplexSpec;
use crate::equivariant::{ActionData, Equivariant, MomentData};
use crate::error::{Error, Result};
use crate::gcs::deform::{deformed_frame, Deformation};
use crate::gcs::{standard_complex, standard_omega, Gcs};
use crate::linalg::QMatrix;
use crate::polyforms::{derivative, TwistData};
use crate::scalars::poly::complete_point;
use crate::scalars::{Point, Poly, Qi, Ring, Var};
use crate::spinor::{Chart, PVector, PolyForm};

/// Topology of the quotient, used only to look up Betti numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// CP^n.
    Projective(usize),
    /// CP^n blown up at one point.
    BlownUpProjective(usize),
}

impl Quotient {
    pub fn dim(&self) -> usize {
        match *self {
            Quotient::Projective(n) | Quotient::BlownUpProjective(n) => n,
        }
    }

    /// b_0..b_{2n}.
    pub fn betti(&self) -> Vec<usize> {
        // CP^n has one cell in each even dimension. Blowing up a point replaces
        // it by an exceptional CP^{n-1}, adding one cell in degrees 2..2n-2.
        let n = self.dim();
        (0..=2 * n)
            .map(|k| {
                if k % 2 == 1 {
                    0
                } else {
                    match self {
                        Quotient::Projective(_) => 1,
                        Quotient::BlownUpProjective(_) if k == 0 || k == 2 * n => 1,
                        Quotient::BlownUpProjective(_) => 2,
                    }
                }
            })
            .collect()
    }
}

/// Everything needed to run the verification suites on one example.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub chart: Chart,
    pub omega: QMatrix,
    pub complex: QMatrix,
    /// ε before scaling.
    pub epsilon: Deformation,
    pub scale: Qi,
    pub tw: TwistData,
    pub b: Option<PolyForm>,
    pub weights: Vec<Vec<Qi>>,
    pub moment: MomentData,
    pub level: Vec<Qi>,
    pub points: Vec<Point>,
    /// Weights of the auxiliary circle used for fixed-point counts.
    pub circle: Option<Vec<Qi>>,
    pub quotient: Option<Quotient>,
    pub double_complex: Option<DoubleComplexSpec>,
}

impl Scene {
    pub fn j_omega(&self) -> Result<Gcs> {
        Gcs::from_symplectic(self.chart, &self.omega)
    }

    pub fn j_complex(&self) -> Result<Gcs> {
        Gcs::from_complex(self.chart, &self.complex)
    }

    pub fn eps(&self) -> Deformation {
        self.epsilon.scaled(&self.scale)
    }

    /// Polynomial frame of L_ε.
    pub fn eps_frame(&self) -> Result<Vec<PVector>> {
        deformed_frame(&self.j_complex()?, &self.eps())
    }

    pub fn action(&self) -> Result<ActionData> {
        ActionData::torus(&self.chart, &self.weights, self.tw.clone())
    }

    pub fn equivariant(&self) -> Result<Equivariant> {
        Equivariant::new(self.chart, self.action()?, self.moment.clone())
    }

    /// (i, j, F) for every ∂_i∧∂_j summand of ε.
    pub fn holomorphic_family(&self) -> Vec<(usize, usize, Poly)> {
        let m = self.chart.m;
        let unit_index = |v: &crate::spinor::QVector| {
            let nz: Vec<usize> = (0..2 * m).filter(|&a| !v.c[a].is_zero()).collect();
            (nz.len() == 1 && nz[0] < m && v.c[nz[0]].is_one()).then_some(nz[0])
        };
        self.epsilon
            .terms
            .iter()
            .filter_map(|t| Some((unit_index(&t.u)?, unit_index(&t.w)?, t.coeff.clone())))
            .collect()
    }

    /// Indices touched by the ∂_i∧∂_j part of ε.
    pub fn index_set(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.holomorphic_family().iter().flat_map(|(i, j, _)| [*i, *j]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Complex dimension of the chart.
    pub fn upstairs_dim(&self) -> usize {
        self.chart.n()
    }

    /// Dimension of the quotient, n − dim T.
    pub fn quotient_dim(&self) -> usize {
        self.chart.n().saturating_sub(self.weights.len())
    }

    /// Value of the moment map at a point.
    pub fn moment_at(&self, pt: &Point) -> Result<Vec<Qi>> {
        self.moment.f.iter().map(|f| f.eval(pt)).collect()
    }

    /// Fills in conjugates and missing coordinates (as zero).
    pub fn complete(&self, pt: &Point) -> Result<Point> {
        let mut p = complete_point(pt)?;
        for v in self.chart.vars() {
            if !p.contains_key(&v) {
                let partner = v.conj();
                let val = p.get(&partner).map(Qi::conj).unwrap_or_else(Qi::zero);
                p.insert(v, val);
            }
        }
        for v in p.keys() {
            if self.chart.index_of(*v).is_none() {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        Ok(p)
    }
}

/// L_X ε for a diagonal linear field X, as (first, second) index pairs with
/// coefficient. Indices follow the generalized-vector layout.
pub fn eps_lie_derivative(chart: &Chart, x: &[Poly], eps: &Deformation) -> Result<BTreeMap<(usize, usize), Poly>> {
    let m = chart.m;
    let vars = chart.vars();
    let mut c = Vec::with_capacity(m);
    for (a, p) in x.iter().enumerate() {
        let coeff = p.diff(vars[a]).as_constant();
        match coeff {
            Some(k) if p.sub(&Poly::var(vars[a]).scale(&k)).is_zero() => c.push(k),
            _ => return Err(Error::InvalidParameter("generator is not diagonal linear".into())),
        }
    }
    let unit = |v: &crate::spinor::QVector| -> Result<(usize, Qi)> {
        let nz: Vec<usize> = (0..2 * m).filter(|&a| !v.c[a].is_zero()).collect();
        match nz.as_slice() {
            [a] => Ok((*a, v.c[*a].clone())),
            _ => Err(Error::InvalidParameter("ε factors must be coordinate vectors or covectors".into())),
        }
    };
    // [X, ∂_a] = −c_a ∂_a and L_X e^a = c_a e^a.
    let sigma = |a: usize| if a < m { -c[a].clone() } else { c[a - m].clone() };
    let mut out: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for t in &eps.terms {
        let (a, ka) = unit(&t.u)?;
        let (b, kb) = unit(&t.w)?;
        if a == b {
            continue;
        }
        let f = t.coeff.scale(&(&ka * &kb));
        let mut l = derivative(chart, x, &f);
        l.add_assign_ref(&f.scale(&(&sigma(a) + &sigma(b))));
        let (key, sign) = if a < b { ((a, b), Qi::one()) } else { ((b, a), -Qi::one()) };
        out.entry(key).or_insert_with(Poly::zero).add_assign_ref(&l.scale(&sign));
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

fn sum_sq(chart: &Chart, idx: impl IntoIterator<Item = (usize, Qi)>) -> Poly {
    let mut f = Poly::zero();
    for (k, w) in idx {
        let z = Poly::var(chart.var(k)).mul_ref(&Poly::var(chart.var(chart.n() + k)));
        f.add_assign_ref(&z.scale(&w));
    }
    f
}

fn point(coords: &[(usize, Qi)]) -> Point {
    coords.iter().map(|(k, v)| (Var::Z(*k as u16), v.clone())).collect()
}

fn positive(c: &Qi) -> bool {
    c.is_real() && c.re.is_positive()
}

fn standard_b(chart: &Chart) -> PolyForm {
    let n = chart.n();
    let mut b = PolyForm::zero();
    for k in 0..2 {
        b.add_term((1 << k) | (1 << (n + k)), Poly::constant(Qi::i()));
    }
    b
}

/// κ in the normal form F(∂_i∧∂_j + κ dz̄_i∧dz̄_j) compatible with ω = −iΣdz∧dz̄.
pub fn kappa() -> Qi {
    -Qi::one()
}

/// ℂ^{n+1} with ε = c·z0z1(∂_2∧∂_3 + κ dz̄_2∧dz̄_3), the diagonal circle and
/// Φ = ½Σ|z|² at level 1.
pub fn build_cpn(n: usize, c: &Qi) -> Result<Scene> {
    if !(3..=14).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} must lie in 3..=14")));
    }
    if !positive(c) {
        return Err(Error::InvalidParameter(format!("scale {c} must be a positive rational")));
    }
    let big = n + 1;
    let chart = Chart::complex(big);
    let f = Poly::var(Var::Z(0)).mul_ref(&Poly::var(Var::Z(1)));
    let epsilon = Deformation::normal_form(&chart, &f, 2, 3, &kappa());
    let weights = vec![vec![Qi::one(); big]];
    let half = Qi::from_frac(1, 2);
    let phi = sum_sq(&chart, (0..big).map(|k| (k, half.clone())));
    let q = |a: i64, b: i64| Qi::from_frac(a, b);
    let raw: Vec<Vec<(usize, Qi)>> = vec![
        vec![(0, Qi::one()), (2, Qi::one())],
        vec![(0, Qi::one()), (3, Qi::one())],
        vec![(1, Qi::one()), (2, Qi::one())],
        vec![(0, Qi::from_parts((1, 1), (1, 1)))],
        vec![(0, Qi::one()), (2, q(3, 5)), (3, q(4, 5).mul_i())],
        vec![(0, Qi::one()), (1, Qi::one())],
        vec![(0, q(3, 5)), (1, q(4, 5)), (2, Qi::one())],
        vec![(0, Qi::one()), (1, Qi::i())],
        vec![(0, q(3, 5)), (1, q(4, 5).mul_i()), (3, Qi::one())],
    ];
    // Circle (λ, λ⁵, λ², λ⁴, λ^8, …): the z3 weight is 4 so that ε stays invariant.
    let mut circle = vec![Qi::from_int(1), Qi::from_int(5), Qi::from_int(2), Qi::from_int(4)];
    circle.extend((4..big).map(|i| Qi::from_int(2 * i as i64)));
    let scene = Scene {
        name: format!("cp{n}"),
        chart,
        omega: standard_omega(&chart),
        complex: standard_complex(&chart),
        epsilon,
        scale: c.clone(),
        tw: TwistData::zero(),
        b: Some(standard_b(&chart)),
        weights,
        moment: MomentData { f: vec![phi], eta: vec![PolyForm::zero()] },
        level: vec![Qi::one()],
        points: raw.iter().map(|p| point(p)).collect(),
        circle: Some(circle),
        quotient: Some(Quotient::Projective(n)),
        double_complex: None,
    };
    Ok(scene)
}

/// Checks the three weight conditions for the blow-up circle, 0-indexed on ℂ^{n+2}.
pub fn check_blowup_weights(n: usize, lambda: &[Qi]) -> Result<()> {
    if lambda.len() != n + 2 {
        return Err(Error::InvalidParameter(format!("expected {} weights, got {}", n + 2, lambda.len())));
    }
    for i in 0..=n {
        for j in i + 1..=n {
            if lambda[i] == lambda[j] {
                return Err(Error::WeightConditionViolated {
                    condition: 'a',
                    detail: format!("λ_{} = λ_{} = {}", i + 1, j + 1, lambda[i]),
                });
            }
        }
    }
    let lhs = &(&lambda[0] + &lambda[1]) + &lambda[n + 1];
    let rhs = &lambda[n - 1] + &lambda[n];
    if lhs != rhs {
        return Err(Error::WeightConditionViolated {
            condition: 'b',
            detail: format!("λ_1 + λ_2 + λ_{} = {lhs} but λ_{} + λ_{} = {rhs}", n + 2, n, n + 1),
        });
    }
    let diff = &lambda[n] - &lambda[n + 1];
    for (i, l) in lambda.iter().enumerate().take(n) {
        if *l == diff {
            return Err(Error::WeightConditionViolated {
                condition: 'c',
                detail: format!("λ_{} = λ_{} − λ_{} = {diff}", i + 1, n + 1, n + 2),
            });
        }
    }
    Ok(())
}

fn blowup_weights(n: usize) -> Vec<Vec<Qi>> {
    // Doubled so that f_j = Σ w_jk |z_k|² with integral w.
    let two = |k: i64| Qi::from_int(2 * k);
    let first = (0..n + 2).map(|k| two(if k <= n { 1 } else { 0 })).collect();
    let second = (0..n + 2)
        .map(|k| two(if k < n { 1 } else if k == n { 0 } else { -1 }))
        .collect();
    vec![first, second]
}

fn blowup_skeleton(n: usize, lambda: Vec<Qi>, c: &Qi) -> Scene {
    let big = n + 2;
    let chart = Chart::complex(big);
    let f = Poly::var(Var::Z(0))
        .mul_ref(&Poly::var(Var::Z(1)))
        .mul_ref(&Poly::var(Var::Z(big as u16 - 1)));
    let epsilon = Deformation::normal_form(&chart, &f, n - 1, n, &kappa());
    let weights = blowup_weights(n);
    let moment = weights
        .iter()
        .map(|w| sum_sq(&chart, w.iter().enumerate().map(|(k, x)| (k, x * &Qi::from_frac(1, 2)))))
        .collect();
    let one = Qi::one;
    let q = |a: i64, b: i64| Qi::from_frac(a, b);
    let raw: Vec<Vec<(usize, Qi)>> = vec![
        vec![(0, one()), (n, one())],
        vec![(1, one()), (n, one())],
        vec![(0, Qi::from_parts((1, 1), (1, 1))), (n + 1, one())],
        vec![(0, q(3, 5)), (1, q(4, 5)), (n, one())],
        vec![(0, one()), (1, one()), (n + 1, one())],
        vec![(0, one()), (1, q(3, 5)), (2, q(4, 5)), (n + 1, one())],
        vec![(0, q(3, 5)), (1, q(4, 5).mul_i()), (n - 1, one()), (n + 1, one())],
    ];
    Scene {
        name: format!("blowup{n}"),
        chart,
        omega: standard_omega(&chart),
        complex: standard_complex(&chart),
        epsilon,
        scale: c.clone(),
        tw: TwistData::zero(),
        b: Some(standard_b(&chart)),
        weights,
        moment: MomentData { f: moment, eta: vec![PolyForm::zero(), PolyForm::zero()] },
        level: vec![Qi::from_int(2), Qi::one()],
        points: raw.iter().map(|p| point(p)).collect(),
        circle: Some(lambda),
        quotient: Some(Quotient::BlownUpProjective(n)),
        double_complex: None,
    }
}

/// First integer weight vector in `[-bound, bound]^{n+2}` (lexicographic, by
/// maximum absolute value) meeting conditions a/b/c with isolated fixed points.
pub fn search_blowup_weights(n: usize, bound: i64) -> Option<Vec<Qi>> {
    let len = n + 2;
    for b in 1..=bound {
        let range: Vec<i64> = (-b..=b).collect();
        let mut idx = vec![0usize; len];
        loop {
            let cand: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
            if cand.iter().any(|x| x.abs() == b) {
                let lambda: Vec<Qi> = cand.iter().map(|&x| Qi::from_int(x)).collect();
                if check_blowup_weights(n, &lambda).is_ok() {
                    let s = blowup_skeleton(n, lambda.clone(), &Qi::one());
                    if fixed_points(&s).is_ok() {
                        return Some(lambda);
                    }
                }
            }
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < range.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    None
}

/// ℂ^{n+2} with ε = c·z0z1z_{n+1}(∂_{n−1}∧∂_n + κ dz̄_{n−1}∧dz̄_n), the T² action
/// with f1 = Σ_{k≤n}|z_k|², f2 = Σ_{k<n}|z_k|² − |z_{n+1}|² at level (2, 1), and
/// an auxiliary circle with weights λ.
pub fn build_blowup(n: usize, lambda: Option<&[Qi]>, c: &Qi) -> Result<Scene> {
    if !(3..=13).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} must lie in 3..=13")));
    }
    if !positive(c) {
        return Err(Error::InvalidParameter(format!("scale {c} must be a positive rational")));
    }
    let lambda = match lambda {
        Some(l) => l.to_vec(),
        None => search_blowup_weights(n, 4)
            .ok_or_else(|| Error::HypothesisNotVerified("no admissible circle weights found".into()))?,
    };
    check_blowup_weights(n, &lambda)?;
    let scene = blowup_skeleton(n, lambda, c);
    check_eps_invariance(&scene)?;
    Ok(scene)
}

/// L_ξ ε = 0 for every torus generator and the auxiliary circle.
pub fn check_eps_invariance(scene: &Scene) -> Result<()> {
    let eps = scene.eps();
    let mut fields = scene.action()?.generators;
    let mut names: Vec<String> = (0..fields.len()).map(|j| format!("torus generator {j}")).collect();
    if let Some(c) = &scene.circle {
        fields.push(crate::equivariant::linear_generator(&scene.chart, c)?);
        names.push("auxiliary circle".into());
    }
    for (x, name) in fields.iter().zip(names) {
        let l = eps_lie_derivative(&scene.chart, x, &eps)?;
        if let Some(((a, b), p)) = l.into_iter().next() {
            return Err(Error::NotInvariant(format!("{name}: L_ξ ε has component {p} on ({a},{b})")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_tables() {
        assert_eq!(Quotient::Projective(3).betti(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(Quotient::BlownUpProjective(3).betti(), vec![1, 0, 2, 0, 2, 0, 1]);
    }

    #[test]
    fn cpn_points_on_level() {
        let s = build_cpn(3, &Qi::from_frac(1, 100)).unwrap();
        for p in &s.points {
            let p = s.complete(p).unwrap();
            assert_eq!(s.moment_at(&p).unwrap(), s.level);
        }
        check_eps_invariance(&s).unwrap();
        assert_eq!(s.index_set(), vec![2, 3]);
    }

    #[test]
    fn blowup_weight_rejection() {
        let c = Qi::from_frac(1, 100);
        let w = |v: &[i64]| v.iter().map(|&x| Qi::from_int(x)).collect::<Vec<_>>();
        let e = build_blowup(3, Some(&w(&[1, 1, 3, 4, 0])), &c).unwrap_err();
        assert!(matches!(e, Error::WeightConditionViolated { condition: 'a', .. }));
        let e = build_blowup(3, Some(&w(&[1, 2, 3, 4, 5])), &c).unwrap_err();
        assert!(matches!(e, Error::WeightConditionViolated { condition: 'b', .. }));
        // λ_4 − λ_5 = 3 − 1 = 2 = λ_3.
        let e = build_blowup(3, Some(&w(&[0, 4, 2, 3, 1])), &c);
        assert!(matches!(e, Err(Error::WeightConditionViolated { condition: 'c', .. })), "{e:?}");
        assert!(matches!(
            build_blowup(3, Some(&w(&[1, 2, 3, 4, 9, -2])), &c),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn blowup_default_scene() {
        let s = build_blowup(3, None, &Qi::from_frac(1, 100)).unwrap();
        for p in &s.points {
            let p = s.complete(p).unwrap();
            assert_eq!(s.moment_at(&p).unwrap(), s.level, "{p:?}");
        }
        assert_eq!(s.index_set(), vec![2, 3]);
    }

    #[test]
    fn broken_circle_breaks_invariance() {
        let mut s = build_cpn(3, &Qi::one()).unwrap();
        s.circle = Some(vec![Qi::one(), Qi::from_int(2), Qi::from_int(3), Qi::from_int(4)]);
        assert!(matches!(check_eps_invariance(&s), Err(Error::NotInvariant(_))));
    }
}
