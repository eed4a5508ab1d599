//! Seeded generators for test inputs. All take a caller-supplied [`rand::Rng`].

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blade::Blade;
use crate::exterior::{Form, Graded, Kind, MultiVector};
use crate::poly::{ratio, Monomial, Polynomial, Scalar};

/// Small nonzero rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let num = rng.gen_range(-4i64..=4);
        if num != 0 {
            let den = rng.gen_range(1i64..=3);
            return ratio(num, den);
        }
    }
}

/// Small rational possibly zero, used for sample points.
pub fn sample_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    ratio(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=2))
}

pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| sample_rational(rng)).collect()
}

/// Random polynomial in variables `0..n` with total degree `<= max_degree`
/// and at most `max_terms` terms.
pub fn polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial {
    let vars: Vec<u16> = (0..n as u16).collect();
    let monos = Monomial::all_up_to(&vars, max_degree);
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut p = Polynomial::zero();
    for _ in 0..count {
        let m = monos.choose(rng).expect("nonempty").clone();
        p.add_term(m, small_rational(rng));
    }
    p
}

fn graded<K: Kind, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    degree: usize,
    coeff_degree: u32,
    max_terms: usize,
) -> Graded<K> {
    let blades = Blade::all_of_degree(n, degree);
    let mut out = Graded::<K>::zero(n, degree);
    if blades.is_empty() {
        return out;
    }
    let count = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..count {
        let b = *blades.choose(rng).expect("nonempty");
        let f = polynomial(rng, n, coeff_degree, 3);
        out = &out + &Graded::<K>::term(n, b, f).expect("blade in range");
    }
    out
}

pub fn form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    degree: usize,
    coeff_degree: u32,
    max_terms: usize,
) -> Form {
    graded(rng, n, degree, coeff_degree, max_terms)
}

pub fn multivector<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    degree: usize,
    coeff_degree: u32,
    max_terms: usize,
) -> MultiVector {
    graded(rng, n, degree, coeff_degree, max_terms)
}

/// Random constant element of `Λ^p ℝⁿ`.
pub fn constant_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    degree: usize,
    max_terms: usize,
) -> Form {
    graded(rng, n, degree, 0, max_terms)
}

pub fn constant_multivector<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    degree: usize,
    max_terms: usize,
) -> MultiVector {
    graded(rng, n, degree, 0, max_terms)
}

/// Random exact `k+1`-form `dθ` with polynomial `θ`.
pub fn exact_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, coeff_degree: u32) -> Form {
    loop {
        let theta = form(rng, n, k, coeff_degree + 1, 3);
        let omega = theta.d();
        if !omega.is_zero() {
            return omega;
        }
    }
}

/// Random `k+1`-form that is not closed.
pub fn non_closed_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    coeff_degree: u32,
) -> Form {
    assert!(k + 2 <= n, "a non-closed (k+1)-form needs k + 2 <= n");
    loop {
        let omega = form(rng, n, k + 1, coeff_degree.max(1), 3);
        if !omega.d().is_zero() {
            return omega;
        }
    }
}

/// Random constant top level `(S, K = S^{∘,1}, ♯)` of order `k` on `ℝⁿ`.
///
/// A constant `(k+1)`-form `ω` and a subspace `W` give generators `(ι_w ω, w)`;
/// forms killed by all of `W` are added with `♯ = 0`. Skew-symmetry and
/// well-definedness hold by construction.
pub fn linear_top<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
) -> crate::linear_dirac::SharpMap {
    use crate::linalg::{
        annihilator_forms, annihilator_mv, Ambient, ConstSubspace, ContractionPairing,
    };
    assert!(1 <= k && k <= n, "order must satisfy 1 <= k <= n");
    let omega = if k < n {
        constant_form(rng, n, k + 1, 4)
            .to_vector()
            .expect("constant form")
    } else {
        Vec::new()
    };
    let wdim = rng.gen_range(0..=n);
    let ws: Vec<Vec<Scalar>> = (0..wdim)
        .map(|_| {
            constant_multivector(rng, n, 1, 2)
                .to_vector()
                .expect("constant vector")
        })
        .collect();
    let w = ConstSubspace::span(Ambient::MultiVectors { n, d: 1 }, &ws).expect("vectors of ℝⁿ");
    let mut gens = Vec::new();
    if k < n {
        let pairing = ContractionPairing::new(n, 1, k + 1).expect("degrees in range");
        for v in w.basis() {
            gens.push((pairing.apply(&v, &omega), v));
        }
    }
    let free = annihilator_forms(&w, k).expect("degrees in range");
    let zero_vec = alloc::vec![Scalar::from_integer(0.into()); n];
    for beta in free.basis() {
        if rng.gen_bool(0.6) {
            gens.push((beta, zero_vec.clone()));
        }
    }
    let forms: Vec<Vec<Scalar>> = gens.iter().map(|(f, _)| f.clone()).collect();
    let s = ConstSubspace::span(Ambient::Forms { n, d: k }, &forms).expect("forms of ℝⁿ");
    let kernel = annihilator_mv(&s, 1).expect("degrees in range");
    crate::linear_dirac::SharpMap::new(n, k, k, kernel, gens).expect("consistent sizes")
}
