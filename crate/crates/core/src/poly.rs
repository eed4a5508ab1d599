//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are indexed by `u16`. A chart of dimension `n` owns the variables
//! `0..n`; any variable with a larger index is treated by the exterior calculus
//! as a symbolic parameter (it is never differentiated by `d`).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact scalar type used everywhere in the kernel.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Power product `x_{v1}^{e1} * x_{v2}^{e2} * ...`, variables strictly increasing,
/// exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(u16, u16)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u16) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs in any order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u16, u16)>) -> Self {
        let mut map: BTreeMap<u16, u16> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn pairs(&self) -> &[(u16, u16)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, v: u16) -> u16 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            if a < b {
                out.push((a, ea));
                i += 1;
            } else if b < a {
                out.push((b, eb));
                j += 1;
            } else {
                out.push((a, ea + eb));
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `∂/∂x_v` of the monomial: returns the multiplicity and the reduced monomial.
    pub fn derivative(&self, v: u16) -> Option<(u16, Monomial)> {
        let pos = self.0.iter().position(|&(w, _)| w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 = e - 1;
        }
        Some((e, Monomial(out)))
    }

    /// True when every variable of the monomial is below `bound`.
    pub fn only_vars_below(&self, bound: u16) -> bool {
        self.0.iter().all(|&(v, _)| v < bound)
    }

    pub fn max_var(&self) -> Option<u16> {
        self.0.last().map(|&(v, _)| v)
    }

    /// All monomials in the listed variables with total degree at most `max_degree`,
    /// in a fixed deterministic order.
    pub fn all_up_to(vars: &[u16], max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current: Vec<(u16, u16)> = Vec::new();
        fn rec(
            vars: &[u16],
            idx: usize,
            remaining: u32,
            current: &mut Vec<(u16, u16)>,
            out: &mut Vec<Monomial>,
        ) {
            if idx == vars.len() {
                out.push(Monomial(current.clone()));
                return;
            }
            for e in 0..=remaining {
                if e > 0 {
                    current.push((vars[idx], e as u16));
                }
                rec(vars, idx + 1, remaining - e, current, out);
                if e > 0 {
                    current.pop();
                }
            }
        }
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        rec(&sorted, 0, max_degree, &mut current, &mut out);
        out.sort();
        out
    }
}

/// Multivariate polynomial with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var(v: u16) -> Self {
        Self::monomial(Monomial::var(v), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u16> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn depends_on(&self, v: u16) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(mono), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, v: u16) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derivative(v) {
                out.add_term(rest, c * int(e as i64));
            }
        }
        out
    }

    /// Full evaluation; every variable must have an entry in `point`.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = &point[v as usize];
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes numeric values for the variables `0..point.len()` and keeps the rest symbolic.
    pub fn eval_partial(&self, point: &[Scalar]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                if (v as usize) < point.len() {
                    let x = &point[v as usize];
                    for _ in 0..e {
                        t *= x;
                    }
                } else {
                    rest.push((v, e));
                }
            }
            out.add_term(Monomial(rest), t);
        }
        out
    }

    /// Substitution homomorphism: variable `v` is replaced by `images[v]` when that entry
    /// exists and is `Some`; every other variable is left untouched.
    pub fn substitute(&self, images: &[Option<Polynomial>]) -> Polynomial {
        let mut power_cache: BTreeMap<(u16, u16), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.pairs() {
                match images.get(v as usize).and_then(Option::as_ref) {
                    Some(img) => {
                        let pw = power_cache
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e as u32))
                            .clone();
                        term = &term * &pw;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial(kept);
            out += &term.mul_monomial(&kept, &Scalar::one());
        }
        out
    }

    /// Renders the polynomial with the given variable names (fallback `v<i>`),
    /// in the text syntax understood by the DSL.
    pub fn render(&self, names: &[String]) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let unit = abs.is_one();
            if m.is_one() {
                let _ = write!(s, "{}", render_scalar(&abs));
                continue;
            }
            if !unit {
                let _ = write!(s, "{}*", render_scalar(&abs));
            }
            for (j, &(v, e)) in m.pairs().iter().enumerate() {
                if j > 0 {
                    s.push('*');
                }
                match names.get(v as usize) {
                    Some(n) => s.push_str(n),
                    None => {
                        let _ = write!(s, "v{}", v);
                    }
                }
                if e > 1 {
                    let _ = write!(s, "**{}", e);
                }
            }
        }
        s
    }
}

pub fn render_scalar(c: &Scalar) -> String {
    use alloc::string::ToString;
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl From<Scalar> for Polynomial {
    fn from(c: Scalar) -> Self {
        Polynomial::constant(c)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(0)
    }
    fn y() -> Polynomial {
        Polynomial::var(1)
    }

    #[test]
    fn ring_basics() {
        let p = &x() + &y();
        let q = &x() - &y();
        let prod = &p * &q;
        let expected = &x().pow(2) - &y().pow(2);
        assert_eq!(prod, expected);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        let p = &(&x().pow(3) * &y()) + &Polynomial::constant(ratio(1, 2));
        assert_eq!(p.derivative(0), &x().pow(2).scale(&int(3)) * &y());
        assert_eq!(p.eval(&[int(2), int(3)]), int(24) + ratio(1, 2));
    }

    #[test]
    fn substitution_translates() {
        // (x + 1)^2 evaluated through substitution x -> x + 1
        let p = x().pow(2);
        let shifted = p.substitute(&[Some(&x() + &Polynomial::one())]);
        assert_eq!(
            shifted,
            &(&x().pow(2) + &x().scale(&int(2))) + &Polynomial::one()
        );
    }

    #[test]
    fn parameters_survive_partial_eval() {
        let p = &Polynomial::var(5) * &x();
        assert_eq!(p.eval_partial(&[int(3)]), Polynomial::var(5).scale(&int(3)));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(3 + 2, 2) = 10 monomials of degree <= 2 in three variables
        assert_eq!(Monomial::all_up_to(&[0, 1, 2], 2).len(), 10);
        assert_eq!(Monomial::all_up_to(&[], 4).len(), 1);
    }

    #[test]
    fn render_uses_names() {
        let p = &x().scale(&ratio(3, 2)) - &y().pow(2);
        let names = [String::from("a"), String::from("b")];
        assert_eq!(p.render(&names), "-b**2 + 3/2*a");
    }
}
