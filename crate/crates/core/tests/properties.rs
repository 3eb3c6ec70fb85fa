use genformal::examples::{build_cpn, quotient_type};
use genformal::gcs::deform::deformed_type;
use genformal::gcs::standard_omega;
use genformal::polyforms::{courant, d, iota, koszul_delta, lie, lie_bracket, derivative, d_fn, TwistData};
use genformal::sample::{self, SampleRng, Shape};
use genformal::scalars::poly::complete_point;
use genformal::scalars::{Point, Poly, Qi, Ring, Var};
use genformal::spinor::{clifford_act, pairing, Chart, PolyForm};
use proptest::prelude::*;
use rand::Rng;

const SHAPE: Shape = Shape { max_degree: 2, max_terms: 3, coeff_bound: 3 };

fn charts() -> impl Strategy<Value = Chart> {
    prop_oneof![Just(Chart::real(2)), Just(Chart::real(4)), Just(Chart::complex(1)), Just(Chart::complex(2))]
}

fn qi(rng: &mut SampleRng) -> Qi {
    if rng.gen_bool(0.2) {
        return Qi::zero();
    }
    sample::coefficient(rng, 5)
}

fn poly(rng: &mut SampleRng, chart: &Chart) -> Poly {
    sample::poly(rng, &chart.vars(), SHAPE)
}

fn sign(k: u32) -> Qi {
    Qi::from_int(if k.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_rationals_form_a_field(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (a, b, c) = (qi(&mut rng), qi(&mut rng), qi(&mut rng));
        prop_assert_eq!(Ring::add(&a, &b), Ring::add(&b, &a));
        prop_assert_eq!(Ring::mul(&a, &Ring::mul(&b, &c)), Ring::mul(&Ring::mul(&a, &b), &c));
        prop_assert_eq!(Ring::mul(&a, &Ring::add(&b, &c)), Ring::add(&Ring::mul(&a, &b), &Ring::mul(&a, &c)));
        prop_assert_eq!(Ring::sub(&a, &a), Qi::zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(Ring::mul(&a, &b).conj(), Ring::mul(&a.conj(), &b.conj()));
        if let Some(inv) = a.inv() {
            prop_assert_eq!(Ring::mul(&a, &inv), Qi::one());
        }
    }

    #[test]
    fn polynomials_form_a_ring(chart in charts(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (p, q, r) = (poly(&mut rng, &chart), poly(&mut rng, &chart), poly(&mut rng, &chart));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!((&p * &q).conjugate(), &p.conjugate() * &q.conjugate());
    }

    #[test]
    fn d_squares_to_zero(chart in charts(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::form(&mut rng, &chart, SHAPE, 3);
        prop_assert!(d(&chart, &d(&chart, &a)).is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(chart in charts(), k in 0u32..3, seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::form_of_degree(&mut rng, &chart, k, SHAPE, 2);
        let b = sample::form(&mut rng, &chart, SHAPE, 2);
        let lhs = d(&chart, &a.wedge(&b));
        let rhs = d(&chart, &a).wedge(&b).add(&a.wedge(&d(&chart, &b)).scale(&sign(k)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_identities(chart in charts(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let x = sample::vector_field(&mut rng, &chart, SHAPE);
        let y = sample::vector_field(&mut rng, &chart, SHAPE);
        let f = poly(&mut rng, &chart);
        let a = sample::form(&mut rng, &chart, SHAPE, 2);
        prop_assert_eq!(lie(&chart, &x, &PolyForm::scalar(f.clone())), PolyForm::scalar(derivative(&chart, &x, &f)));
        prop_assert_eq!(iota(&x, &d_fn(&chart, &f)), PolyForm::scalar(derivative(&chart, &x, &f)));
        let commutator = lie(&chart, &x, &iota(&y, &a)).sub(&iota(&y, &lie(&chart, &x, &a)));
        prop_assert_eq!(commutator, iota(&lie_bracket(&chart, &x, &y), &a));
        prop_assert_eq!(d(&chart, &lie(&chart, &x, &a)), lie(&chart, &x, &d(&chart, &a)));
    }

    #[test]
    fn clifford_relation(chart in charts(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let v = sample::section(&mut rng, &chart, SHAPE);
        let w = sample::section(&mut rng, &chart, SHAPE);
        let a = sample::form(&mut rng, &chart, SHAPE, 3);
        let lhs = clifford_act(&v, &clifford_act(&w, &a)).add(&clifford_act(&w, &clifford_act(&v, &a)));
        let two = pairing(&v, &w).unwrap().scale(&Qi::from_int(2));
        prop_assert_eq!(lhs, a.mul_scalar(&two));
    }

    #[test]
    fn courant_bracket_is_skew(chart in charts(), twisted in any::<bool>(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let tw = if twisted && chart.m >= 3 {
            TwistData::new(&chart, sample::closed_cubic(&mut rng, &chart, SHAPE)).unwrap()
        } else {
            TwistData::zero()
        };
        let a = sample::section(&mut rng, &chart, SHAPE);
        let b = sample::section(&mut rng, &chart, SHAPE);
        let ab = courant(&chart, &a, &b, &tw).unwrap();
        let ba = courant(&chart, &b, &a, &tw).unwrap();
        prop_assert!(ab.add(&ba).is_zero());
    }

    #[test]
    fn koszul_delta_squares_to_zero(chart in prop_oneof![Just(Chart::real(2)), Just(Chart::real(4)), Just(Chart::complex(2))], seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let omega = standard_omega(&chart);
        let a = sample::form(&mut rng, &chart, SHAPE, 3);
        let once = koszul_delta(&chart, &a, &omega).unwrap();
        prop_assert!(koszul_delta(&chart, &once, &omega).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_type_is_constant_on_orbits(idx in 0usize..9, gen in 0usize..4, power in -3i64..=3) {
        let s = build_cpn(3, &Qi::from_frac(1, 100)).unwrap();
        let p = s.complete(&s.points[idx % s.points.len()]).unwrap();
        // |u| = 1 with rational entries.
        let u = Qi::from_parts((3, 5), (4, 5));
        let pow = |e: i64| -> Qi {
            let base = if e < 0 { u.conj() } else { u.clone() };
            (0..e.abs()).fold(Qi::one(), |acc, _| Ring::mul(&acc, &base))
        };
        let w = &s.weights[gen % s.weights.len()];
        let mut moved = Point::new();
        for (v, x) in &p {
            if let Var::Z(k) = v {
                let e = w[*k as usize].re.to_integer().try_into().unwrap_or(0i64) * power;
                moved.insert(*v, Ring::mul(x, &pow(e)));
            }
        }
        let moved = complete_point(&moved).unwrap();
        prop_assert_eq!(quotient_type(&s, &p).unwrap(), quotient_type(&s, &moved).unwrap());
    }

    #[test]
    fn deformed_type_has_the_parity_of_n(scale in 1i64..50, seed in any::<u64>()) {
        let s = build_cpn(3, &Qi::from_frac(1, scale)).unwrap();
        let mut rng = sample::rng(seed);
        let mut pt = Point::new();
        for k in 0..4u16 {
            pt.insert(Var::Z(k), Qi::from_parts((rng.gen_range(-3..=3), 1), (rng.gen_range(-3..=3), 2)));
        }
        let pt = complete_point(&pt).unwrap();
        if let Ok(t) = deformed_type(&s.j_complex().unwrap(), &s.eps(), &pt) {
            prop_assert_eq!((t + s.chart.n()) % 2, 0);
        }
    }
}
