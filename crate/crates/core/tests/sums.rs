use harmsum::rational::rat;
use harmsum::{
    bernoulli, harmonic, parse_poly, spiess_form, spiess_form_shifted, structure_check,
    structured_to_closed, sum_power, sum_power_shifted, Convention, Polynomial, Rational,
    SpiessKind,
};
use num_traits::Zero;
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..=4)
        .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(a, b)| rat(a, b)).collect()))
}

#[test]
fn shifted_cube_sums_carry_minus_bernoulli_halves() {
    for d in 1..=6usize {
        let f = Polynomial::monomial(harmsum::rational::int(1), d);
        let s = spiess_form_shifted(&SpiessKind::Hn3(f.clone())).unwrap();
        assert_eq!(s.c2, Polynomial::constant(bernoulli(d, Convention::Minus) * rat(1, 2)));
        assert_eq!(structured_to_closed(&s), sum_power_shifted(&f, 3).unwrap());
    }
}

#[test]
fn presentations_by_powers_for_low_t() {
    // Σ_{m=0..n} F(m)·H_m^t lies in span{H^i, H(2)} with coefficients of degree ≤ d+1
    for f in ["1", "m^2", "4*m^3 - m + 2"] {
        let f = parse_poly(f).unwrap();
        for kind in [SpiessKind::Hn1(f.clone()), SpiessKind::Hn2(f.clone()), SpiessKind::Hn3(f.clone())] {
            let s = spiess_form_shifted(&kind).unwrap();
            assert!(s.c21.is_zero() && s.c3.is_zero());
            assert!(s.lower_degree() <= f.degree() + 1);
            assert_eq!(structured_to_closed(&s), kind.generic_shifted().unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structure_holds(f in arb_poly(), t in 0u32..=4) {
        let r = structure_check(&f, t).unwrap();
        prop_assert!(r.passes, "{:?}", r.offending_terms);
    }

    #[test]
    fn fourth_power_form_matches_generic(f in arb_poly()) {
        let s = spiess_form(&SpiessKind::Hn4(f.clone())).unwrap();
        prop_assert_eq!(structured_to_closed(&s), sum_power(&f, 4).unwrap());
    }

    #[test]
    fn shifted_sums_evaluate(f in arb_poly(), t in 0u32..=3) {
        let got = sum_power_shifted(&f, t).unwrap().eval_range(10).unwrap();
        let mut acc = Rational::zero();
        for (n, g) in got.iter().enumerate() {
            acc += f.eval_int(n as i64) * num_traits::pow(harmonic(n as u64, 1), t as usize);
            prop_assert_eq!(g, &acc);
        }
    }
}
