//! Defects of the Schouten–Nijenhuis identities. Each function returns the
//! difference of the two sides, which must vanish identically.

use crate::error::{Error, Result};
use crate::exterior::{interior, lie_derivative, schouten_nijenhuis, sign_pow, Form, MultiVector};
use crate::poly::int;

fn signed<K: crate::exterior::Kind>(
    g: &crate::exterior::Graded<K>,
    s: i32,
) -> crate::exterior::Graded<K> {
    if s > 0 {
        g.clone()
    } else {
        -g
    }
}

/// `[U,V] + (−1)^{(p−1)(q−1)} [V,U]`.
pub fn antisymmetry_defect(u: &MultiVector, v: &MultiVector) -> Result<MultiVector> {
    let (p, q) = (u.degree(), v.degree());
    let uv = schouten_nijenhuis(u, v)?;
    let vu = schouten_nijenhuis(v, u)?;
    uv.checked_add(&signed(&vu, sign_pow((p - 1) * (q - 1))))
}

/// `ι_{[U,V]}ω − ((−1)^{(p−1)q} £_U ι_V ω − ι_V £_U ω)` for `deg ω >= p + q − 1`.
pub fn interior_defect(u: &MultiVector, v: &MultiVector, omega: &Form) -> Result<Form> {
    let (p, q, a) = (u.degree(), v.degree(), omega.degree());
    if a + 1 < p + q {
        return Err(Error::DegreeOutOfRange {
            degree: p + q - 1,
            max: a,
            context: "interior identity needs deg ω >= p + q − 1",
        });
    }
    let lhs = interior(&schouten_nijenhuis(u, v)?, omega)?;
    let first = signed(
        &lie_derivative(u, &interior(v, omega)?)?,
        sign_pow((p - 1) * q),
    );
    let second = interior(v, &lie_derivative(u, omega)?)?;
    lhs.checked_sub(&first.checked_sub(&second)?)
}

/// `[U, V∧W] − ([U,V]∧W + (−1)^{(p−1)q} V∧[U,W])`.
pub fn leibniz_defect(u: &MultiVector, v: &MultiVector, w: &MultiVector) -> Result<MultiVector> {
    let (p, q) = (u.degree(), v.degree());
    let lhs = schouten_nijenhuis(u, &v.wedge(w)?)?;
    let a = schouten_nijenhuis(u, v)?.wedge(w)?;
    let b = signed(&v.wedge(&schouten_nijenhuis(u, w)?)?, sign_pow((p - 1) * q));
    lhs.checked_sub(&a.checked_add(&b)?)
}

/// `(−1)^{(p−1)(r−1)}[U,[V,W]] + (−1)^{(q−1)(p−1)}[V,[W,U]] + (−1)^{(r−1)(q−1)}[W,[U,V]]`.
pub fn jacobi_defect(u: &MultiVector, v: &MultiVector, w: &MultiVector) -> Result<MultiVector> {
    let (p, q, r) = (u.degree(), v.degree(), w.degree());
    jacobi_with_exponents(
        u,
        v,
        w,
        [(p - 1) * (r - 1), (q - 1) * (p - 1), (r - 1) * (q - 1)],
    )
}

/// The cyclic sum with exponents `(p−1)(q−1), (q−1)(r−1), (r−1)(p−1)`; not an identity
/// in general, kept to document the difference from [`jacobi_defect`].
pub fn jacobi_defect_alternative(
    u: &MultiVector,
    v: &MultiVector,
    w: &MultiVector,
) -> Result<MultiVector> {
    let (p, q, r) = (u.degree(), v.degree(), w.degree());
    jacobi_with_exponents(
        u,
        v,
        w,
        [(p - 1) * (q - 1), (q - 1) * (r - 1), (r - 1) * (p - 1)],
    )
}

fn jacobi_with_exponents(
    u: &MultiVector,
    v: &MultiVector,
    w: &MultiVector,
    e: [usize; 3],
) -> Result<MultiVector> {
    let t1 = schouten_nijenhuis(u, &schouten_nijenhuis(v, w)?)?;
    let t2 = schouten_nijenhuis(v, &schouten_nijenhuis(w, u)?)?;
    let t3 = schouten_nijenhuis(w, &schouten_nijenhuis(u, v)?)?;
    let s = |g: &MultiVector, k: usize| g.scale(&int(sign_pow(k) as i64));
    s(&t1, e[0])
        .checked_add(&s(&t2, e[1]))?
        .checked_add(&s(&t3, e[2]))
}

/// `d h(α) + h(dα) − α` for the chart's homotopy operator (degree `>= 1`).
pub fn homotopy_defect(alpha: &Form, chart: &crate::exterior::Chart) -> Result<Form> {
    let dh = alpha.homotopy(chart)?.d();
    let hd = alpha.d().homotopy(chart)?;
    dh.checked_add(&hd)?.checked_sub(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;
    use crate::random;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identities_on_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(3..=4);
            let p = rng.gen_range(1..=2);
            let q = rng.gen_range(1..=2);
            let r = rng.gen_range(1..=2);
            let u = random::multivector(&mut rng, n, p, 2, 2);
            let v = random::multivector(&mut rng, n, q, 2, 2);
            let w = random::multivector(&mut rng, n, r, 2, 2);
            assert!(antisymmetry_defect(&u, &v).unwrap().is_zero());
            assert!(leibniz_defect(&u, &v, &w).unwrap().is_zero());
            assert!(jacobi_defect(&u, &v, &w).unwrap().is_zero());
            if p + q - 1 <= n {
                let omega = random::form(&mut rng, n, p + q - 1, 2, 3);
                assert!(interior_defect(&u, &v, &omega).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn homotopy_identity_off_center() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let chart = Chart::standard(4)
            .unwrap()
            .with_center(random::sample_point(&mut rng, 4))
            .unwrap();
        for a in 1..=3 {
            let alpha = random::form(&mut rng, 4, a, 3, 4);
            assert!(homotopy_defect(&alpha, &chart).unwrap().is_zero());
        }
    }
}
