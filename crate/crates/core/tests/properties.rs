use proptest::prelude::*;
use tfsym_core::exponents::{check_conditions, feasible, ExponentProfile, ExtExp, Mode, Q, SearchOptions};
use tfsym_core::fft::{dft, direct, Direction};
use tfsym_core::lattice::{make_grid, CArray, Measure};
use tfsym_core::mixed_norm::{mixed_norm, MixedNormSpec};
use tfsym_core::tfa::{fourier, inverse_fourier, stft, t_a, t_a_inverse, Window};
use tfsym_core::C64;

fn exp() -> impl Strategy<Value = ExtExp> {
    (0i128..=12, 1i128..=12)
        .prop_filter("u <= 1", |(k, d)| k <= d)
        .prop_map(|(k, d)| ExtExp::from_recip(Q::new(k, d)).unwrap())
}

fn samples(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b)), n)
}

fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_text_round_trips(p in exp()) {
        let back: ExtExp = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(p.conj().conj(), p);
        prop_assert_eq!(p.u() + p.conj().u(), Q::from_integer(1));
    }

    #[test]
    fn radix2_matches_direct(x in samples(32)) {
        let mut fast = x.clone();
        dft(&mut fast, Direction::Forward);
        prop_assert!(close(&fast, &direct(&x, Direction::Forward), 1e-12));
    }

    #[test]
    fn fourier_inverts(x in samples(16)) {
        let g = make_grid(&[(16, 4.0)], Measure::Riemann).unwrap();
        let f = CArray::new(g.clone(), x).unwrap();
        let back = inverse_fourier(&fourier(&f).unwrap(), &g).unwrap();
        prop_assert!(close(back.data(), f.data(), 1e-12));
    }

    #[test]
    fn stft_magnitude_is_translation_covariant(x in samples(8), a in 0isize..8) {
        let g = make_grid(&[(8, 4.0)], Measure::Riemann).unwrap();
        let f = CArray::new(g.clone(), x).unwrap();
        let phi = Window::gaussian(&g);
        let v = stft(&f, &phi).unwrap();
        let w = stft(&f.translate(&[a]), &phi).unwrap();
        for t in 0..8 {
            for nu in 0..8 {
                let src = (t + 8 - a as usize) % 8;
                prop_assert!((w.at(&[t, nu]).norm() - v.at(&[src, nu]).norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn t_a_is_invertible(x in samples(64)) {
        let g = make_grid(&[(4, 2.0); 3], Measure::Riemann).unwrap();
        let h = CArray::new(g, x).unwrap();
        prop_assert_eq!(t_a_inverse(&t_a(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn equal_exponents_ignore_order(x in samples(24), p in exp()) {
        let g = make_grid(&[(2, 2.0), (3, 3.0), (4, 4.0)], Measure::Counting).unwrap();
        let f = CArray::new(g, x).unwrap();
        let exps = [p; 3];
        let a = mixed_norm(&f, &MixedNormSpec::new(&exps, &[0, 1, 2])).unwrap();
        let b = mixed_norm(&f, &MixedNormSpec::new(&exps, &[2, 0, 1])).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn minkowski_ordering(x in samples(30), p in exp(), q in exp()) {
        let (p, q) = if p.le(&q) { (p, q) } else { (q, p) };
        let g = make_grid(&[(5, 5.0), (6, 6.0)], Measure::Counting).unwrap();
        let f = CArray::new(g, x).unwrap();
        let exps = [p, q];
        let inner_first = mixed_norm(&f, &MixedNormSpec::new(&exps, &[0, 1])).unwrap();
        let outer_first = mixed_norm(&f, &MixedNormSpec::new(&exps, &[1, 0])).unwrap();
        prop_assert!(inner_first <= outer_first * (1.0 + 1e-12));
    }

    #[test]
    fn witnesses_satisfy_the_conditions(
        p in prop::collection::vec(exp(), 2),
        r in prop::collection::vec(exp(), 2),
        p0 in exp(),
        r0 in exp(),
        theorem in any::<bool>(),
    ) {
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.p = p;
        pr.r = r;
        pr.p0 = p0;
        pr.r0 = r0;
        let opts = SearchOptions::new(if theorem { Mode::Theorem } else { Mode::Proposition });
        if let Some(w) = feasible(&pr, &opts).unwrap() {
            prop_assert!(check_conditions(&pr, &w, opts.reading).unwrap());
        }
    }
}
