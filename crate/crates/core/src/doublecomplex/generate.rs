//! Model double complexes with controlled properties, assembled from
//! indecomposable pieces and then disguised by a random change of basis in
//! every bidegree.

use rand::Rng;

use super::FiniteDoubleComplex;
use crate::linalg::QMatrix;
use crate::sample::{coefficient, SampleRng};
use crate::scalars::Qi;

#[derive(Default)]
struct Builder {
    cells: Vec<(i32, i32)>,
    d: Vec<(usize, usize, Qi)>,
    dp: Vec<(usize, usize, Qi)>,
    delta: Vec<(usize, usize, Qi)>,
    with_delta: bool,
}

impl Builder {
    fn node(&mut self, c: (i32, i32)) -> usize {
        self.cells.push(c);
        self.cells.len() - 1
    }

    fn finish(self, rng: Option<&mut SampleRng>) -> FiniteDoubleComplex {
        let n = self.cells.len();
        let dense = |entries: &[(usize, usize, Qi)]| {
            let mut m = QMatrix::zeros(n, n);
            for (s, t, c) in entries {
                let v = m.get(*t, *s) + c;
                m.set(*t, *s, v);
            }
            m
        };
        let (mut d, mut dp) = (dense(&self.d), dense(&self.dp));
        let mut delta = self.with_delta.then(|| dense(&self.delta));
        if let Some(rng) = rng {
            let (p, pinv) = basis_change(rng, &self.cells);
            let conj = |m: &QMatrix| p.mul(m).mul(&pinv);
            d = conj(&d);
            dp = conj(&dp);
            delta = delta.as_ref().map(conj);
        }
        FiniteDoubleComplex::new(self.cells, d, dp, delta).expect("model satisfies the double complex identities")
    }
}

/// Block-diagonal (per bidegree) unitriangular product L·U and its inverse.
fn basis_change(rng: &mut SampleRng, cells: &[(i32, i32)]) -> (QMatrix, QMatrix) {
    let n = cells.len();
    let mut l = QMatrix::identity(n);
    let mut u = QMatrix::identity(n);
    for a in 0..n {
        for b in 0..n {
            if a == b || cells[a] != cells[b] || !rng.gen_bool(0.5) {
                continue;
            }
            let c = Qi::from_int(rng.gen_range(-2..=2));
            if a > b {
                l.set(a, b, c);
            } else {
                u.set(a, b, c);
            }
        }
    }
    let p = l.mul(&u);
    let pinv = p.inverse().expect("unitriangular product is invertible");
    (p, pinv)
}

fn shift(c: (i32, i32), vertical: bool, sign: i32) -> (i32, i32) {
    if vertical {
        (c.0, c.1 + sign)
    } else {
        (c.0 + sign, c.1)
    }
}

fn add_square(b: &mut Builder, rng: &mut SampleRng, c: (i32, i32)) {
    let x = b.node(c);
    let y = b.node(shift(c, true, 1));
    let z = b.node(shift(c, false, 1));
    let w = b.node((c.0 + 1, c.1 + 1));
    let (s1, s2, s3) = (coefficient(rng, 2), coefficient(rng, 2), coefficient(rng, 2));
    // d'(dx) = s1 s2 w, d(d'x) = −s1 s2 w
    let s4 = -(&(&s1 * &s2) / &s3);
    b.d.push((x, y, s1));
    b.dp.push((y, w, s2));
    b.dp.push((x, z, s3));
    b.d.push((z, w, s4));
}

/// Zigzag of `len` nodes with alternating edge types and directions.
fn add_zigzag(b: &mut Builder, rng: &mut SampleRng, start: (i32, i32), len: usize) {
    let mut vertical = rng.gen_bool(0.5);
    let mut forward = rng.gen_bool(0.5);
    let mut prev = b.node(start);
    let mut pos = start;
    for _ in 1..len {
        pos = shift(pos, vertical, if forward { 1 } else { -1 });
        let next = b.node(pos);
        let (s, t) = if forward { (prev, next) } else { (next, prev) };
        let c = coefficient(rng, 2);
        if vertical {
            b.d.push((s, t, c));
        } else {
            b.dp.push((s, t, c));
        }
        prev = next;
        vertical = !vertical;
        forward = !forward;
    }
}

fn random_cell(rng: &mut SampleRng) -> (i32, i32) {
    (rng.gen_range(0..3), rng.gen_range(0..3))
}

/// Random bounded complex: a disguised sum of dots, squares and zigzags.
pub fn random_complex(rng: &mut SampleRng) -> FiniteDoubleComplex {
    let mut b = Builder::default();
    let pieces = rng.gen_range(1..=4);
    for _ in 0..pieces {
        let c = random_cell(rng);
        match rng.gen_range(0..3) {
            0 => {
                b.node(c);
            }
            1 => add_square(&mut b, rng, c),
            _ => {
                let len = rng.gen_range(2..=4);
                add_zigzag(&mut b, rng, c, len)
            }
        }
    }
    b.finish(Some(rng))
}

/// Dots and squares only: the ∂∂̄-lemma holds for (d, d').
pub fn dots_and_squares(rng: &mut SampleRng, pieces: usize) -> FiniteDoubleComplex {
    let mut b = Builder::default();
    for k in 0..pieces {
        let c = random_cell(rng);
        if k % 2 == 0 {
            add_square(&mut b, rng, c);
        } else {
            b.node(c);
        }
    }
    b.finish(Some(rng))
}

/// K = C ⊗ A with A a vertical (d, δ) complex made of dots and dδ-squares,
/// d = (−1)^i ⊗ d_A, δ = (−1)^i ⊗ δ_A and d' = e ⊗ d_Aδ_A for an arbitrary
/// horizontal map e. Hypotheses (a) and (b) hold by construction.
pub fn hodge_pair_model(rng: &mut SampleRng) -> FiniteDoubleComplex {
    // A: degrees, d_A and δ_A as sparse lists
    let mut a_deg: Vec<i32> = Vec::new();
    let mut a_d: Vec<(usize, usize, Qi)> = Vec::new();
    let mut a_delta: Vec<(usize, usize, Qi)> = Vec::new();
    let squares = rng.gen_range(1..=2);
    for _ in 0..squares {
        let j = rng.gen_range(1..3);
        let x = a_deg.len();
        a_deg.extend([j, j + 1, j - 1, j]);
        let (dx, dlx, w) = (x + 1, x + 2, x + 3);
        let (s1, s2) = (coefficient(rng, 2), coefficient(rng, 2));
        let s3 = coefficient(rng, 2);
        a_d.push((x, dx, s1.clone()));
        a_delta.push((x, dlx, s2.clone()));
        // d δ x = s2 s3 w, δ d x = −s2 s3 w
        a_d.push((dlx, w, s3.clone()));
        a_delta.push((dx, w, -(&(&s2 * &s3) / &s1)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        a_deg.push(rng.gen_range(0..4));
    }
    let na = a_deg.len();
    let dense = |entries: &[(usize, usize, Qi)]| {
        let mut m = QMatrix::zeros(na, na);
        for (s, t, c) in entries {
            m.set(*t, *s, c.clone());
        }
        m
    };
    let (da, dla) = (dense(&a_d), dense(&a_delta));
    let dd = da.mul(&dla);
    // C: dims per column and a random e
    let c_dims: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
    let mut c_cols: Vec<i32> = Vec::new();
    for (i, &k) in c_dims.iter().enumerate() {
        c_cols.extend(std::iter::repeat_n(i as i32, k));
    }
    let nc = c_cols.len();
    let mut e = QMatrix::zeros(nc, nc);
    for s in 0..nc {
        for t in 0..nc {
            if c_cols[t] == c_cols[s] + 1 && rng.gen_bool(0.7) {
                e.set(t, s, Qi::from_int(rng.gen_range(-2..=2)));
            }
        }
    }
    let mut b = Builder { with_delta: true, ..Default::default() };
    let idx = |c: usize, a: usize| c * na + a;
    for c in 0..nc {
        for a in 0..na {
            b.node((c_cols[c], a_deg[a]));
        }
    }
    for c in 0..nc {
        let sign = if c_cols[c] % 2 == 0 { Qi::one() } else { -Qi::one() };
        for s in 0..na {
            for t in 0..na {
                if !da.get(t, s).is_zero() {
                    b.d.push((idx(c, s), idx(c, t), &sign * da.get(t, s)));
                }
                if !dla.get(t, s).is_zero() {
                    b.delta.push((idx(c, s), idx(c, t), &sign * dla.get(t, s)));
                }
            }
        }
        for c2 in 0..nc {
            if e.get(c2, c).is_zero() {
                continue;
            }
            for s in 0..na {
                for t in 0..na {
                    if !dd.get(t, s).is_zero() {
                        b.dp.push((idx(c, s), idx(c2, t), e.get(c2, c) * dd.get(t, s)));
                    }
                }
            }
        }
    }
    b.finish(Some(rng))
}

/// A lone d-arrow with δ = 0: hypothesis (a) fails.
pub fn lone_arrow_model() -> FiniteDoubleComplex {
    let mut b = Builder { with_delta: true, ..Default::default() };
    let v = b.node((0, 0));
    let w = b.node((0, 1));
    b.d.push((v, w, Qi::one()));
    b.finish(None)
}

/// (0,0) → (1,0) under d': E_1 ≠ E_2.
pub fn horizontal_arrow() -> FiniteDoubleComplex {
    let mut b = Builder::default();
    let v = b.node((0, 0));
    let w = b.node((1, 0));
    b.dp.push((v, w, Qi::one()));
    b.finish(None)
}

/// a → b ← c → e with a ∈ K^{0,1}, b ∈ K^{1,1}, c ∈ K^{1,0}, e ∈ K^{2,0}:
/// E_1 = E_2 and d_2 ≠ 0.
pub fn staircase() -> FiniteDoubleComplex {
    let mut b = Builder::default();
    let a = b.node((0, 1));
    let bb = b.node((1, 1));
    let c = b.node((1, 0));
    let e = b.node((2, 0));
    b.dp.push((a, bb, Qi::one()));
    b.d.push((c, bb, Qi::one()));
    b.dp.push((c, e, Qi::one()));
    b.finish(None)
}

/// x → y ← z plus a dot: the ∂∂̄-lemma fails and (K, ∂̄) ← (ker ∂, ∂̄) is not a quasi-isomorphism.
pub fn zigzag_with_dot() -> FiniteDoubleComplex {
    let mut b = Builder::default();
    let x = b.node((0, 1));
    let y = b.node((1, 1));
    let z = b.node((1, 0));
    b.node((0, 0));
    b.dp.push((x, y, Qi::one()));
    b.d.push((z, y, Qi::one()));
    b.finish(None)
}
