use gradedirac_core::field_theory::{antirep_check, observable_bracket, FieldChart, Observable};
use gradedirac_core::{random, Polynomial};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn restricted(rng: &mut ChaCha8Rng, chart: &FieldChart) -> Observable {
    let base = chart.n + chart.m;
    let mut coeff = |k: usize| -> Vec<Polynomial> {
        (0..k)
            .map(|_| random::polynomial(rng, base, 2, 3))
            .collect()
    };
    let a = coeff(chart.m);
    let b = coeff(chart.n);
    Observable::restricted(chart, a, b).unwrap()
}

fn chart(rng: &mut ChaCha8Rng) -> FieldChart {
    FieldChart::new(rng.gen_range(1..=2), rng.gen_range(1..=2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_field_matches_solver(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = chart(&mut rng);
        let obs = restricted(&mut rng, &chart);
        let solved = Observable::new(&chart, &obs.form).unwrap();
        prop_assert_eq!(&solved.field, &obs.field);
    }

    #[test]
    fn restricted_class_is_closed_under_bracket(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = chart(&mut rng);
        let a = restricted(&mut rng, &chart);
        let b = restricted(&mut rng, &chart);
        let ab = observable_bracket(&chart, &a, &b).unwrap();
        let ba = observable_bracket(&chart, &b, &a).unwrap();
        prop_assert_eq!(ab.form.degree() + 1, chart.n);
        prop_assert!(Observable::new(&chart, &(&ab.form + &ba.form)).is_ok());
    }

    #[test]
    fn brackets_with_currents_are_an_antirepresentation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = chart(&mut rng);
        let a = restricted(&mut rng, &chart);
        let b = restricted(&mut rng, &chart);
        let f = random::polynomial(&mut rng, chart.quotient_dim(), 2, 4);
        let eta = chart.volume_in(chart.dim()).mul_poly(&f);
        prop_assert!(antirep_check(&chart, &a, &b, &eta).unwrap().is_pass());
    }
}
