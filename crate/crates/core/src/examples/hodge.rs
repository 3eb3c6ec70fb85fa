//! Quotient types, fixed points of the auxiliary circle and the Hodge table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::Scene;
use crate::error::{Error, Result};
use crate::gcs::deform::frame_at;
use crate::gcs::type_of_frame;
use crate::linalg::{intersection, rank_of, QMatrix};
use crate::scalars::{Monomial, Point, Qi, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientType {
    pub upstairs_omega: usize,
    pub upstairs_eps: usize,
    /// dim(span ξ_j(m) ∩ π(L_ε)_m).
    pub intersection: usize,
    pub omega: usize,
    pub eps: usize,
}

/// Types of the reduced structures at [m], computed upstairs:
/// type(J̃_ε) = type(J_ε)_m − dim T + 2 dim(𝔱_M ∩ π(L_ε))_m.
pub fn quotient_type(scene: &Scene, pt: &Point) -> Result<QuotientType> {
    let p = scene.complete(pt)?;
    let values = scene.moment_at(&p)?;
    if values != scene.level {
        let shown: Vec<String> = values.iter().map(Qi::to_string).collect();
        let want: Vec<String> = scene.level.iter().map(Qi::to_string).collect();
        return Err(Error::NotOnLevelSet(format!("Φ = ({}) but the level is ({})", shown.join(", "), want.join(", "))));
    }
    let m = scene.chart.m;
    let gens = scene
        .action()?
        .generators
        .iter()
        .map(|x| x.iter().map(|c| c.eval(&p)).collect::<Result<Vec<Qi>>>())
        .collect::<Result<Vec<_>>>()?;
    let r = gens.len();
    if rank_of(&gens) < r {
        return Err(Error::NotFree);
    }
    let frame = frame_at(&scene.eps_frame()?, &p)?;
    let upstairs_eps = type_of_frame(m, &frame);
    let pi: Vec<Vec<Qi>> = frame.iter().map(|v| v.x().to_vec()).collect();
    let k = intersection(&gens, &pi, m).len();
    let upstairs_omega = scene.j_omega()?.type_of(None)?;
    let eps = (upstairs_eps + 2 * k)
        .checked_sub(r)
        .ok_or_else(|| Error::InvalidParameter("negative quotient type".into()))?;
    // The reduced symplectic-type structure keeps the upstairs type.
    Ok(QuotientType { upstairs_omega, upstairs_eps, intersection: k, omega: upstairs_omega, eps })
}

/// A torus-fixed point of the quotient, i.e. a point of the level set whose
/// support has exactly dim T coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub support: Vec<usize>,
    pub point: Point,
    /// Weights of the auxiliary circle on the quotient tangent directions z_k, k ∉ support.
    pub tangent_weights: Vec<(usize, Qi)>,
    pub types: QuotientType,
}

fn real(x: &Qi) -> Option<BigRational> {
    x.is_real().then(|| x.re.clone())
}

/// Some z ∈ ℚ(i) with |z|² = t, searched over small denominators.
fn rational_root(t: &BigRational) -> Option<Qi> {
    for c in 1i64..=12 {
        for a in 0..=3 * c {
            for b in 0..=a {
                let v = BigRational::new(BigInt::from(a * a + b * b), BigInt::from(c * c));
                if &v == t {
                    return Some(Qi::from_parts((a, c), (b, c)));
                }
            }
        }
    }
    None
}

/// Coefficients a_jk with f_j = Σ a_jk |z_k|².
fn moment_matrix(scene: &Scene) -> Result<Vec<Vec<Qi>>> {
    let n = scene.chart.n();
    let mut out = Vec::new();
    for f in &scene.moment.f {
        let mut row = vec![Qi::zero(); n];
        for (mono, c) in f.terms() {
            let k = (0..n).find(|&k| {
                *mono == Monomial::from_pairs(vec![(Var::Z(k as u16), 1), (Var::Zb(k as u16), 1)])
            });
            match k {
                Some(k) => row[k] = c.clone(),
                None => {
                    return Err(Error::HypothesisNotVerified(
                        "fixed points need a moment map that is a combination of |z_k|²".into(),
                    ))
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if n < r {
        return vec![];
    }
    let mut out = subsets(n - 1, r);
    for mut s in subsets(n - 1, r - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Enumerates the torus-fixed points of the quotient and checks that each is
/// isolated for the auxiliary circle and of complex type.
pub fn fixed_points(scene: &Scene) -> Result<Vec<FixedPoint>> {
    let circle = scene
        .circle
        .as_ref()
        .ok_or_else(|| Error::HypothesisNotVerified("scene has no auxiliary circle".into()))?;
    let n = scene.chart.n();
    if circle.len() != n {
        return Err(Error::InvalidParameter(format!("circle needs {n} weights")));
    }
    let a = moment_matrix(scene)?;
    let w = &scene.weights;
    let r = w.len();
    let want = scene.quotient_dim();
    let mut out = Vec::new();
    for s in subsets(n, r) {
        let sub = QMatrix::from_fn(r, r, |j, k| a[j][s[k]].clone());
        let Some(t) = sub.solve(&scene.level) else { continue };
        let t: Option<Vec<BigRational>> = t.iter().map(real).collect();
        let Some(t) = t else { continue };
        if t.iter().any(|x| !x.is_positive()) {
            continue;
        }
        let mut point = Point::new();
        for (k, tk) in s.iter().zip(&t) {
            let z = rational_root(tk).ok_or_else(|| {
                Error::HypothesisNotVerified(format!("no Gaussian-rational point with |z_{k}|² = {tk}"))
            })?;
            point.insert(Var::Z(*k as u16), z);
        }
        // Shift the circle by the torus so that it fixes the point: λ_s + Σ_j c_j w_js = 0.
        let ws = QMatrix::from_fn(r, r, |i, j| w[j][s[i]].clone());
        let rhs: Vec<Qi> = s.iter().map(|&k| -circle[k].clone()).collect();
        let c = ws.solve(&rhs).ok_or(Error::NotFree)?;
        let mut tangent = Vec::new();
        for k in (0..n).filter(|k| !s.contains(k)) {
            let mut wt = circle[k].clone();
            for (j, cj) in c.iter().enumerate() {
                wt += &(cj * &w[j][k]);
            }
            if wt.is_zero() {
                return Err(Error::HypothesisNotVerified(format!(
                    "fixed point with support {s:?} is not isolated: circle weight on z{k} vanishes"
                )));
            }
            tangent.push((k, wt));
        }
        let types = super::quotient_type(scene, &point)?;
        if types.eps != want {
            return Err(Error::HypothesisNotVerified(format!(
                "structure at the fixed point with support {s:?} has type {} ≠ {want}",
                types.eps
            )));
        }
        out.push(FixedPoint { support: s, point, tangent_weights: tangent, types });
    }
    Ok(out)
}

pub const NOTE_VANISH: &str =
    "zero: the auxiliary circle has isolated fixed points of complex type, so the second ∂̄-cohomology vanishes in degrees |i| > 0";
pub const NOTE_SHIFT: &str =
    "h^{p,0} = b_{n+p}: symplectic-type grading shift H^k_∂̄ = H^{n-k}; Betti number from the cell decomposition";
pub const NOTE_TRIVIAL: &str =
    "ε-type equals n − dim T at every checked point: the structure is a B-transform of Kähler type";

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeEntry {
    pub value: usize,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeReport {
    pub n: usize,
    pub betti: Vec<usize>,
    pub entries: BTreeMap<(i64, i64), HodgeEntry>,
    pub fixed_points: usize,
    /// Set when the quotient ε-type never jumps.
    pub trivial: bool,
}

impl HodgeReport {
    pub fn get(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.value)
    }

    pub fn total(&self) -> usize {
        self.entries.values().map(|e| e.value).sum()
    }

    /// Row q = 0 as (h^{-n,0}, …, h^{n,0}).
    pub fn row(&self) -> Vec<usize> {
        let n = self.n as i64;
        (-n..=n).map(|p| self.get(p, 0)).collect()
    }

    /// Grid with q decreasing downwards and footnote markers.
    pub fn table(&self) -> String {
        let n = self.n as i64;
        let mut s = String::new();
        let _ = write!(s, "{:>6}", "q\\p");
        for p in -n..=n {
            let _ = write!(s, "{p:>4}");
        }
        s.push('\n');
        for q in (-n..=n).rev() {
            let _ = write!(s, "{q:>6}");
            for p in -n..=n {
                let e = &self.entries[&(p, q)];
                let mark = if e.note == NOTE_SHIFT { "¹" } else { "²" };
                let _ = write!(s, "{:>3}{mark}", e.value);
            }
            s.push('\n');
        }
        let _ = writeln!(s, "¹ {NOTE_SHIFT}");
        let _ = writeln!(s, "² {NOTE_VANISH}");
        if self.trivial {
            let _ = writeln!(s, "note: {NOTE_TRIVIAL}");
        }
        let _ = writeln!(s, "total {} = Σ b_i = {}", self.total(), self.betti.iter().sum::<usize>());
        s
    }
}

/// Generalized Hodge numbers of the quotient from fixed-point data and the
/// Betti table. Fails without emitting a table when a hypothesis is not met.
pub fn hodge_report(scene: &Scene) -> Result<HodgeReport> {
    let quotient = scene
        .quotient
        .ok_or_else(|| Error::HypothesisNotVerified("scene does not name its quotient".into()))?;
    let n = quotient.dim();
    if n != scene.quotient_dim() {
        return Err(Error::InvalidParameter(format!(
            "quotient dimension {n} does not match the chart ({})",
            scene.quotient_dim()
        )));
    }
    let fps = fixed_points(scene)?;
    let betti = quotient.betti();
    let euler: usize = betti.iter().sum();
    if fps.len() != euler {
        return Err(Error::HypothesisNotVerified(format!(
            "found {} fixed points but the Betti numbers sum to {euler}",
            fps.len()
        )));
    }
    let mut trivial = fps.iter().all(|f| f.types.eps == n);
    for p in &scene.points {
        trivial &= quotient_type(scene, p)?.eps == n;
    }
    let ni = n as i64;
    let mut entries = BTreeMap::new();
    for p in -ni..=ni {
        for q in -ni..=ni {
            let e = if q == 0 {
                HodgeEntry { value: betti[(ni + p) as usize], note: NOTE_SHIFT }
            } else {
                HodgeEntry { value: 0, note: NOTE_VANISH }
            };
            entries.insert((p, q), e);
        }
    }
    Ok(HodgeReport { n, betti, entries, fixed_points: fps.len(), trivial })
}

#[cfg(test)]
mod tests {
    use super::super::{build_blowup, build_cpn};
    use super::*;

    fn z(coords: &[(u16, Qi)]) -> Point {
        coords.iter().map(|(k, v)| (Var::Z(*k), v.clone())).collect()
    }

    #[test]
    fn cp3_types() {
        let s = build_cpn(3, &Qi::from_frac(1, 100)).unwrap();
        let on = quotient_type(&s, &z(&[(0, Qi::one()), (2, Qi::one())])).unwrap();
        assert_eq!((on.omega, on.eps, on.upstairs_eps), (0, 3, 4));
        let off = quotient_type(&s, &z(&[(0, Qi::one()), (1, Qi::one())])).unwrap();
        assert_eq!((off.omega, off.eps, off.upstairs_eps), (0, 1, 2));
        assert_eq!(off.intersection, 0);
        assert!(matches!(quotient_type(&s, &z(&[(0, Qi::one())])), Err(Error::NotOnLevelSet(_))));
    }

    #[test]
    fn cp3_hodge() {
        let s = build_cpn(3, &Qi::from_frac(1, 100)).unwrap();
        let h = hodge_report(&s).unwrap();
        assert_eq!(h.row(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(h.total(), 4);
        assert!(!h.trivial);
    }

    #[test]
    fn blowup_hodge() {
        let s = build_blowup(3, None, &Qi::from_frac(1, 100)).unwrap();
        let h = hodge_report(&s).unwrap();
        assert_eq!(h.fixed_points, 6);
        assert_eq!(h.row(), vec![1, 0, 2, 0, 2, 0, 1]);
    }

    #[test]
    fn non_isolated_circle_rejected() {
        let mut s = build_cpn(3, &Qi::one()).unwrap();
        s.circle = Some(vec![Qi::one(); 4]);
        assert!(matches!(hodge_report(&s), Err(Error::HypothesisNotVerified(_))));
    }

    #[test]
    fn flat_epsilon_is_trivial() {
        let mut s = build_cpn(3, &Qi::one()).unwrap();
        s.epsilon = crate::gcs::deform::Deformation::zero();
        let h = hodge_report(&s).unwrap();
        assert!(h.trivial);
        let t = quotient_type(&s, &z(&[(0, Qi::one()), (1, Qi::one())])).unwrap();
        assert_eq!(t.eps, 3);
    }
}
