use gradedirac_core::exterior::interior;
use gradedirac_core::graded_poisson::GradedPoissonStructure;
use gradedirac_core::{random, Form};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // on a volume form every form of degree < n − 1 is Hamiltonian, and the
    // returned field contracts the volume to dα
    #[test]
    fn volume_form_witnesses_contract_to_d(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4);
        let omega = Form::volume(n);
        let s = GradedPoissonStructure::from_multisymplectic(&omega, Vec::new()).unwrap();
        let degree = rng.gen_range(0..n - 1);
        let alpha = random::form(&mut rng, n, degree, 2, 3);
        let h = s.is_hamiltonian(&alpha, 2).unwrap().into_form().unwrap();
        prop_assert_eq!(h.a, degree + 1);
        prop_assert_eq!(interior(&h.witness, &omega).unwrap(), alpha.d());
    }

    #[test]
    fn bracket_of_hamiltonians_is_hamiltonian(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let omega = Form::volume(n);
        let s = GradedPoissonStructure::from_multisymplectic(&omega, Vec::new()).unwrap();
        let mut pick = |deg: usize| {
            let alpha = random::form(&mut rng, n, deg, 2, 3);
            s.is_hamiltonian(&alpha, 2).unwrap().into_form().unwrap()
        };
        let (a, b) = (pick(0), pick(1));
        let ab = s.bracket(&a, &b).unwrap();
        prop_assert_eq!(interior(&ab.witness, &omega).unwrap(), ab.form.d());
    }
}
