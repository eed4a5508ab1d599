use gradedirac_core::exterior::sign_pow;
use gradedirac_core::identities::{
    antisymmetry_defect, interior_defect, jacobi_defect, leibniz_defect,
};
use gradedirac_core::poly::int;
use gradedirac_core::{random, schouten_nijenhuis, MultiVector, Polynomial};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// [X,Y]^k = X(Y^k) − Y(X^k), computed through the action on functions only
fn vector_bracket(x: &MultiVector, y: &MultiVector) -> MultiVector {
    let comps: Vec<Polynomial> = y
        .components()
        .iter()
        .zip(x.components())
        .map(|(yk, xk)| x.apply(yk).unwrap() - y.apply(&xk).unwrap())
        .collect();
    MultiVector::from_components(&comps)
}

fn wedge_all(n: usize, fields: &[&MultiVector]) -> MultiVector {
    let mut acc = MultiVector::function(n, Polynomial::one());
    for f in fields {
        acc = acc.wedge(f).unwrap();
    }
    acc
}

// Σ (−1)^{i+j} [X_i,Y_j] ∧ X_1…X̂_i…X_p ∧ Y_1…Ŷ_j…Y_q
fn decomposable_oracle(n: usize, xs: &[MultiVector], ys: &[MultiVector]) -> MultiVector {
    let mut out = MultiVector::zero(n, xs.len() + ys.len() - 1);
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let mut parts = vec![];
            let b = vector_bracket(x, y);
            parts.push(&b);
            parts.extend(
                xs.iter()
                    .enumerate()
                    .filter(|(l, _)| *l != i)
                    .map(|(_, v)| v),
            );
            parts.extend(
                ys.iter()
                    .enumerate()
                    .filter(|(l, _)| *l != j)
                    .map(|(_, v)| v),
            );
            let term = wedge_all(n, &parts).scale(&int(sign_pow(i + j) as i64));
            out = &out + &term;
        }
    }
    out
}

#[test]
fn coordinate_formula_matches_decomposable_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..120 {
        let n = rng.gen_range(2..=5);
        let p = rng.gen_range(1..=3.min(n));
        let q = rng.gen_range(1..=3.min(n));
        let xs: Vec<_> = (0..p)
            .map(|_| random::multivector(&mut rng, n, 1, 2, 2))
            .collect();
        let ys: Vec<_> = (0..q)
            .map(|_| random::multivector(&mut rng, n, 1, 2, 2))
            .collect();
        let u = wedge_all(n, &xs.iter().collect::<Vec<_>>());
        let v = wedge_all(n, &ys.iter().collect::<Vec<_>>());
        assert_eq!(
            schouten_nijenhuis(&u, &v).unwrap(),
            decomposable_oracle(n, &xs, &ys)
        );
    }
}

#[test]
fn vector_fields_reduce_to_lie_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let x = random::multivector(&mut rng, 4, 1, 2, 3);
        let y = random::multivector(&mut rng, 4, 1, 2, 3);
        assert_eq!(schouten_nijenhuis(&x, &y).unwrap(), vector_bracket(&x, &y));
    }
}

#[test]
fn function_argument_is_rejected() {
    let f = MultiVector::function(3, Polynomial::var(0));
    let x = MultiVector::partial(3, 1);
    assert!(schouten_nijenhuis(&f, &x).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let [p, q, r] = [0; 3].map(|_| rng.gen_range(1..=3.min(n)));
        let u = random::multivector(&mut rng, n, p, 2, 2);
        let v = random::multivector(&mut rng, n, q, 2, 2);
        let w = random::multivector(&mut rng, n, r, 2, 2);
        prop_assert!(antisymmetry_defect(&u, &v).unwrap().is_zero());
        prop_assert!(leibniz_defect(&u, &v, &w).unwrap().is_zero());
        prop_assert!(jacobi_defect(&u, &v, &w).unwrap().is_zero());
        if p + q - 1 <= n {
            let a = rng.gen_range(p + q - 1..=n);
            let omega = random::form(&mut rng, n, a, 2, 3);
            prop_assert!(interior_defect(&u, &v, &omega).unwrap().is_zero());
        }
    }
}
