//! Differential forms and multivector fields with polynomial coefficients on a
//! coordinate chart of `ℝⁿ`.
//!
//! Interior products follow `ι_{U∧V} = ι_V ∘ ι_U`, so that
//! `ι_{X1∧…∧Xp} α = α(X1, …, Xp, ·)`. The Schouten–Nijenhuis bracket is the
//! one determined on decomposable fields by
//! `[X1∧…∧Xp, Y1∧…∧Yq] = Σ (−1)^{i+j} [Xi,Yj] ∧ X1…X̂i…Xp ∧ Y1…Ŷj…Yq`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::marker::PhantomData;
use core::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::blade::{binomial, Blade};
use crate::error::{Error, Result};
use crate::poly::{int, Monomial, Polynomial, Scalar};

/// First variable index reserved for symbolic parameters. Chart coordinates use
/// indices `0..n`; `d`, `∂` and pullbacks never touch indices `>= PARAM_BASE`.
pub const PARAM_BASE: u16 = 1024;

pub const MAX_DIM: usize = 32;

/// Named coordinates and a star center used by the homotopy operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub names: Vec<String>,
    pub center: Vec<Scalar>,
}

impl Chart {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(names.len()));
        }
        let center = alloc::vec![Scalar::zero(); names.len()];
        Ok(Chart { names, center })
    }

    /// Chart with coordinates `x1..xn`.
    pub fn standard(n: usize) -> Result<Self> {
        Chart::new((1..=n).map(|i| alloc::format!("x{}", i)).collect())
    }

    pub fn with_center(mut self, center: Vec<Scalar>) -> Result<Self> {
        if center.len() != self.names.len() {
            return Err(Error::ChartMismatch {
                left: self.names.len(),
                right: center.len(),
            });
        }
        self.center = center;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coord(&self, i: usize) -> Polynomial {
        Polynomial::var(i as u16)
    }
}

pub trait Kind: Clone + Copy + fmt::Debug + PartialEq + Eq + core::hash::Hash + Default {
    const IS_FORM: bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FormKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct VectorKind;

impl Kind for FormKind {
    const IS_FORM: bool = true;
}

impl Kind for VectorKind {
    const IS_FORM: bool = false;
}

/// Homogeneous element of `Λ^p` with polynomial coefficients, sparse over blades.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graded<K: Kind> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Polynomial>,
    kind: PhantomData<K>,
}

/// A differential form `Σ f_J dx^J`.
pub type Form = Graded<FormKind>;
/// A multivector field `Σ f_I ∂_I`.
pub type MultiVector = Graded<VectorKind>;

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch { left: a, right: b })
    }
}

impl<K: Kind> Graded<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Graded {
            dim,
            degree,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// Checked constructor for a single term `coeff · e_blade`.
    pub fn term(dim: usize, blade: Blade, coeff: Polynomial) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        if !blade.is_subset_of(Blade::full(dim)) {
            return Err(Error::DegreeOutOfRange {
                degree: blade.degree(),
                max: dim,
                context: "blade outside chart",
            });
        }
        let mut out = Self::zero(dim, blade.degree());
        out.add_term(blade, coeff);
        Ok(out)
    }

    /// Basis element for the sorted index list, e.g. `[0, 2]` gives `dx1∧dx3`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let blade = Blade::from_indices(indices);
        if blade.degree() != indices.len() {
            return Err(Error::PreconditionFailure(String::from(
                "repeated index in basis element",
            )));
        }
        Self::term(dim, blade, Polynomial::one())
    }

    pub fn function(dim: usize, f: Polynomial) -> Self {
        let mut out = Self::zero(dim, 0);
        out.add_term(Blade::EMPTY, f);
        out
    }

    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Blade, Polynomial)>,
    ) -> Result<Self> {
        let mut out = Self::zero(dim, degree);
        for (b, f) in terms {
            if b.degree() != degree || !b.is_subset_of(Blade::full(dim)) {
                return Err(Error::DegreeOutOfRange {
                    degree: b.degree(),
                    max: dim,
                    context: "term does not match declared degree",
                });
            }
            out.add_term(b, f);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, blade: Blade, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(blade.degree(), self.degree);
        match self.terms.entry(blade) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Polynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, blade: Blade) -> Polynomial {
        self.terms
            .get(&blade)
            .cloned()
            .unwrap_or_else(Polynomial::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Polynomial::is_constant)
    }

    /// Largest total degree among the coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms
            .values()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeOutOfRange {
                degree: other.degree,
                max: self.degree,
                context: "sum of different degrees",
            });
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let mut out = self.clone();
        out.degree = degree;
        for (b, f) in &other.terms {
            out.add_term(*b, f.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map_coeffs(|f| f.scale(c))
    }

    pub fn mul_poly(&self, g: &Polynomial) -> Self {
        self.map_coeffs(|f| f * g)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    /// Wedge product. Errors when the charts differ.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (bi, fi) in &self.terms {
            for (bj, fj) in &other.terms {
                let s = bi.merge_sign(*bj);
                if s == 0 {
                    continue;
                }
                let c = fi * fj;
                out.add_term(bi.union(*bj), if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Freezes the chart coordinates at `point`; parameters stay symbolic.
    pub fn evaluate_at(&self, point: &[Scalar]) -> Result<Self> {
        check_dim(self.dim, point.len())?;
        Ok(self.map_coeffs(|f| f.eval_partial(point)))
    }

    /// Coefficients in the lexicographic basis of `Λ^p ℝⁿ`. Requires constant coefficients.
    pub fn to_vector(&self) -> Result<Vec<Scalar>> {
        let index = Blade::index_map(self.dim, self.degree);
        let mut v = alloc::vec![Scalar::zero(); binomial(self.dim, self.degree)];
        for (b, f) in &self.terms {
            let c = f.constant_value().ok_or_else(|| {
                Error::PreconditionFailure(String::from(
                    "coefficient vector of a non-constant element",
                ))
            })?;
            v[index[b]] = c;
        }
        Ok(v)
    }

    pub fn from_vector(dim: usize, degree: usize, v: &[Scalar]) -> Result<Self> {
        let basis = Blade::all_of_degree(dim, degree);
        if basis.len() != v.len() {
            return Err(Error::ChartMismatch {
                left: basis.len(),
                right: v.len(),
            });
        }
        let mut out = Self::zero(dim, degree);
        for (b, c) in basis.into_iter().zip(v) {
            out.add_term(b, Polynomial::constant(c.clone()));
        }
        Ok(out)
    }

    /// Coefficients in the lexicographic basis, as polynomials.
    pub fn coefficients(&self) -> Vec<Polynomial> {
        let index = Blade::index_map(self.dim, self.degree);
        let mut v = alloc::vec![Polynomial::zero(); binomial(self.dim, self.degree)];
        for (b, f) in &self.terms {
            v[index[b]] = f.clone();
        }
        v
    }

    pub fn from_coefficients(dim: usize, degree: usize, v: &[Polynomial]) -> Result<Self> {
        let basis = Blade::all_of_degree(dim, degree);
        if basis.len() != v.len() {
            return Err(Error::ChartMismatch {
                left: basis.len(),
                right: v.len(),
            });
        }
        Self::from_terms(dim, degree, basis.into_iter().zip(v.iter().cloned()))
    }

    /// Applies a substitution to every coefficient (see [`Polynomial::substitute`]).
    pub fn substitute(&self, images: &[Option<Polynomial>]) -> Self {
        self.map_coeffs(|f| f.substitute(images))
    }

    pub fn render(&self, chart_names: &[String]) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (b, f)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = b
                .indices()
                .into_iter()
                .map(|k| {
                    let name = chart_names
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| alloc::format!("x{}", k + 1));
                    if K::IS_FORM {
                        alloc::format!("d{}", name)
                    } else {
                        alloc::format!("@{}", name)
                    }
                })
                .collect();
            let basis = basis.join("^");
            let (neg, mag) = match f.constant_value() {
                Some(c) if c < Scalar::zero() => (true, Polynomial::constant(-c)),
                _ if f.num_terms() == 1 => {
                    let (_, c) = f.terms().next().expect("one term");
                    if *c < Scalar::zero() {
                        (true, -f)
                    } else {
                        (false, f.clone())
                    }
                }
                _ => (false, f.clone()),
            };
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let coeff = mag.render(chart_names);
            if basis.is_empty() {
                if mag.num_terms() > 1 && i > 0 {
                    s.push('(');
                    s.push_str(&coeff);
                    s.push(')');
                } else {
                    s.push_str(&coeff);
                }
            } else if mag == Polynomial::one() {
                s.push_str(&basis);
            } else if mag.num_terms() == 1 {
                s.push_str(&coeff);
                s.push('*');
                s.push_str(&basis);
            } else {
                s.push('(');
                s.push_str(&coeff);
                s.push_str(")*");
                s.push_str(&basis);
            }
        }
        s
    }
}

impl<K: Kind> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl<K: Kind> Neg for &Graded<K> {
    type Output = Graded<K>;
    fn neg(self) -> Graded<K> {
        self.map_coeffs(|f| -f)
    }
}

impl<K: Kind> Neg for Graded<K> {
    type Output = Graded<K>;
    fn neg(self) -> Graded<K> {
        -&self
    }
}

/// Panicking sum for internal use where charts and degrees are known to agree.
impl<K: Kind> Add for &Graded<K> {
    type Output = Graded<K>;
    fn add(self, rhs: &Graded<K>) -> Graded<K> {
        self.checked_add(rhs)
            .expect("sum of incompatible graded elements")
    }
}

impl<K: Kind> Sub for &Graded<K> {
    type Output = Graded<K>;
    fn sub(self, rhs: &Graded<K>) -> Graded<K> {
        self.checked_sub(rhs)
            .expect("difference of incompatible graded elements")
    }
}

impl<K: Kind> Add for Graded<K> {
    type Output = Graded<K>;
    fn add(self, rhs: Graded<K>) -> Graded<K> {
        &self + &rhs
    }
}

impl<K: Kind> Sub for Graded<K> {
    type Output = Graded<K>;
    fn sub(self, rhs: Graded<K>) -> Graded<K> {
        &self - &rhs
    }
}

fn signed(c: Polynomial, s: i32) -> Polynomial {
    if s > 0 {
        c
    } else {
        -c
    }
}

pub fn sign_pow(e: usize) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Form {
    /// `dⁿx` on an `n`-dimensional chart.
    pub fn volume(dim: usize) -> Form {
        let mut out = Form::zero(dim, dim);
        out.add_term(Blade::full(dim), Polynomial::one());
        out
    }

    /// `d f` for a function of the chart coordinates.
    pub fn differential_of(dim: usize, f: &Polynomial) -> Form {
        Form::function(dim, f.clone()).d()
    }

    /// Exterior derivative. Parameters (variables `>= dim`) are constants.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim, self.degree + 1);
        for (b, f) in &self.terms {
            for i in 0..self.dim {
                if b.contains(i) {
                    continue;
                }
                let df = f.derivative(i as u16);
                if df.is_zero() {
                    continue;
                }
                let s = Blade::single(i).merge_sign(*b);
                out.add_term(b.with(i), signed(df, s));
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Polynomial forms on `ℝⁿ` are exact exactly when closed (degree `>= 1`);
    /// a 0-form is exact only when it vanishes. The answer is certified by a
    /// primitive from [`Form::homotopy`].
    pub fn is_exact(&self, chart: &Chart) -> Result<bool> {
        check_dim(self.dim, chart.dim())?;
        if self.degree == 0 {
            return Ok(self.is_zero());
        }
        Ok(self.exact_primitive(chart)?.is_some())
    }

    /// A primitive `θ` with `dθ = self`, verified before it is returned.
    pub fn exact_primitive(&self, chart: &Chart) -> Result<Option<Form>> {
        check_dim(self.dim, chart.dim())?;
        if self.degree == 0 || !self.is_closed() {
            return Ok(None);
        }
        let h = self.homotopy(chart)?;
        Ok(if h.d() == *self { Some(h) } else { None })
    }

    /// Radial homotopy operator about the chart's star center `c`:
    /// `Hα = ∫₀¹ t^{a−1} ι_R α(c + t(x − c)) dt` with `R = Σ (x_i − c_i) ∂_i`.
    /// For closed `α` of degree `a >= 1`, `d Hα = α`.
    pub fn homotopy(&self, chart: &Chart) -> Result<Form> {
        check_dim(self.dim, chart.dim())?;
        if self.degree == 0 {
            return Err(Error::HomotopyOnFunction);
        }
        let n = self.dim;
        // y = x − c: substitute x_i ↦ y_i + c_i
        let forward: Vec<Option<Polynomial>> = (0..n)
            .map(|i| {
                Some(&Polynomial::var(i as u16) + &Polynomial::constant(chart.center[i].clone()))
            })
            .collect();
        let backward: Vec<Option<Polynomial>> = (0..n)
            .map(|i| {
                Some(&Polynomial::var(i as u16) - &Polynomial::constant(chart.center[i].clone()))
            })
            .collect();
        let a = self.degree;
        let mut scaled = Form::zero(n, a);
        for (b, f) in &self.terms {
            let g = f.substitute(&forward);
            let mut h = Polynomial::zero();
            for (m, c) in g.terms() {
                let d: u32 = m
                    .pairs()
                    .iter()
                    .filter(|(v, _)| (*v as usize) < n)
                    .map(|&(_, e)| e as u32)
                    .sum();
                h.add_term(m.clone(), c / int((a as u32 + d) as i64));
            }
            scaled.add_term(*b, h);
        }
        let mut radial = MultiVector::zero(n, 1);
        for i in 0..n {
            radial.add_term(Blade::single(i), Polynomial::var(i as u16));
        }
        let contracted = interior(&radial, &scaled)?;
        Ok(contracted.substitute(&backward))
    }

    /// Pullback along `φ` where `images[i]` is `φ^i` as a polynomial in the
    /// `target_dim` target coordinates.
    pub fn pullback(&self, images: &[Polynomial], target_dim: usize) -> Result<Form> {
        check_dim(self.dim, images.len())?;
        let subst: Vec<Option<Polynomial>> = images.iter().cloned().map(Some).collect();
        let dphi: Vec<Form> = images
            .iter()
            .map(|p| Form::differential_of(target_dim, p))
            .collect();
        let mut out = Form::zero(target_dim, self.degree);
        for (b, f) in &self.terms {
            let mut acc = Form::function(target_dim, f.substitute(&subst));
            for i in b.indices() {
                acc = acc.wedge(&dphi[i])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.checked_add(&acc)?;
        }
        out.degree = self.degree;
        Ok(out)
    }
}

impl MultiVector {
    /// Coordinate vector field `∂_i`.
    pub fn partial(dim: usize, i: usize) -> MultiVector {
        let mut out = MultiVector::zero(dim, 1);
        out.add_term(Blade::single(i), Polynomial::one());
        out
    }

    /// Directional derivative `X(f)` for a vector field `X`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.degree != 1 {
            return Err(Error::DegreeOutOfRange {
                degree: self.degree,
                max: 1,
                context: "only vector fields act on functions",
            });
        }
        let mut out = Polynomial::zero();
        for (b, c) in &self.terms {
            let i = b.indices()[0];
            out += &(c * &f.derivative(i as u16));
        }
        Ok(out)
    }

    /// Component functions `X^i` of a vector field.
    pub fn components(&self) -> Vec<Polynomial> {
        let mut out = alloc::vec![Polynomial::zero(); self.dim];
        if self.degree == 1 {
            for (b, c) in &self.terms {
                out[b.indices()[0]] = c.clone();
            }
        }
        out
    }

    pub fn from_components(comps: &[Polynomial]) -> MultiVector {
        let mut out = MultiVector::zero(comps.len(), 1);
        for (i, c) in comps.iter().enumerate() {
            out.add_term(Blade::single(i), c.clone());
        }
        out
    }
}

/// `ι_U α` for `deg U <= deg α`.
pub fn interior(u: &MultiVector, alpha: &Form) -> Result<Form> {
    check_dim(u.dim, alpha.dim)?;
    if u.degree > alpha.degree {
        return Err(Error::InteriorDegree {
            mv_degree: u.degree,
            form_degree: alpha.degree,
        });
    }
    let mut out = Form::zero(alpha.dim, alpha.degree - u.degree);
    for (bi, f) in &u.terms {
        for (bj, g) in &alpha.terms {
            if !bi.is_subset_of(*bj) {
                continue;
            }
            let rest = bj.minus(*bi);
            let s = bi.merge_sign(rest);
            out.add_term(rest, signed(f * g, s));
        }
    }
    Ok(out)
}

/// Schouten–Nijenhuis bracket of multivectors of degrees `p, q >= 1`;
/// the result has degree `p + q − 1`.
pub fn schouten_nijenhuis(u: &MultiVector, v: &MultiVector) -> Result<MultiVector> {
    check_dim(u.dim, v.dim)?;
    if u.degree == 0 || v.degree == 0 {
        return Err(Error::ZeroDegreeBracket);
    }
    let n = u.dim;
    let (p, q) = (u.degree, v.degree);
    let mut out = MultiVector::zero(n, p + q - 1);
    if p + q - 1 > n {
        return Ok(out);
    }
    let sp = sign_pow(p - 1);
    for (bi, f) in &u.terms {
        for (bj, g) in &v.terms {
            // (−1)^{p−1} Σ_k (−1)^{k−1} f ∂_{i_k} g ∂_{I∖i_k} ∧ ∂_J
            for (k, i) in bi.indices().into_iter().enumerate() {
                let dg = g.derivative(i as u16);
                if dg.is_zero() {
                    continue;
                }
                let rest = bi.without(i);
                let s = rest.merge_sign(*bj);
                if s == 0 {
                    continue;
                }
                out.add_term(rest.union(*bj), signed(f * &dg, sp * sign_pow(k) * s));
            }
            // − Σ_l (−1)^{l−1} g ∂_{j_l} f ∂_I ∧ ∂_{J∖j_l}
            for (l, j) in bj.indices().into_iter().enumerate() {
                let df = f.derivative(j as u16);
                if df.is_zero() {
                    continue;
                }
                let rest = bj.without(j);
                let s = bi.merge_sign(rest);
                if s == 0 {
                    continue;
                }
                out.add_term(bi.union(rest), signed(g * &df, -sign_pow(l) * s));
            }
        }
    }
    Ok(out)
}

/// Lie bracket of vector fields, `[X,Y](f) = X(Y f) − Y(X f)`.
pub fn lie_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    if x.degree != 1 || y.degree != 1 {
        return Err(Error::DegreeOutOfRange {
            degree: x.degree.max(y.degree),
            max: 1,
            context: "Lie bracket of vector fields",
        });
    }
    schouten_nijenhuis(x, y)
}

/// `£_U ω = d ι_U ω − (−1)^p ι_U dω` for `deg U = p <= deg ω + 1`.
pub fn lie_derivative(u: &MultiVector, omega: &Form) -> Result<Form> {
    check_dim(u.dim, omega.dim)?;
    let (p, a) = (u.degree, omega.degree);
    if p > a + 1 {
        return Err(Error::InteriorDegree {
            mv_degree: p,
            form_degree: a + 1,
        });
    }
    let second = interior(u, &omega.d())?;
    let second = if p % 2 == 0 { -second } else { second };
    if p > a {
        return Ok(second);
    }
    let first = interior(u, omega)?.d();
    first.checked_add(&second)
}

/// Coordinate-free helper: the monomials of a coefficient in chart variables only.
pub fn chart_monomials(f: &Polynomial, dim: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = f
        .terms()
        .map(|(m, _)| {
            Monomial::from_pairs(
                m.pairs()
                    .iter()
                    .copied()
                    .filter(|(v, _)| (*v as usize) < dim),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn x(i: u16) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn d_squares_to_zero_on_sample() {
        let f = &(&x(0) * &x(1).pow(2)) + &x(2).pow(3);
        let a = Form::function(3, f).d();
        assert!(!a.is_zero());
        assert!(a.d().is_zero());
    }

    #[test]
    fn interior_convention() {
        // ι_{∂1} (dx1∧dx2) = dx2, ι_{∂2}(dx1∧dx2) = −dx1
        let w = Form::basis(2, &[0, 1]).unwrap();
        let i1 = interior(&MultiVector::partial(2, 0), &w).unwrap();
        let i2 = interior(&MultiVector::partial(2, 1), &w).unwrap();
        assert_eq!(i1, Form::basis(2, &[1]).unwrap());
        assert_eq!(i2, -Form::basis(2, &[0]).unwrap());
        // ι_{∂1∧∂2} = ι_{∂2} ∘ ι_{∂1}
        let u = MultiVector::basis(2, &[0, 1]).unwrap();
        assert_eq!(
            interior(&u, &w).unwrap(),
            Form::function(2, Polynomial::one())
        );
    }

    #[test]
    fn sn_on_vector_fields_is_lie_bracket() {
        let xf = MultiVector::from_components(&[x(1), Polynomial::zero()]);
        let yf = MultiVector::from_components(&[Polynomial::zero(), x(0)]);
        // [y∂x, x∂y] = y∂y − x∂x
        let br = schouten_nijenhuis(&xf, &yf).unwrap();
        let expected = MultiVector::from_components(&[-x(0), x(1)]);
        assert_eq!(br, expected);
        let f = &x(0) * &x(1).pow(2);
        let lhs = br.apply(&f).unwrap();
        let rhs =
            &xf.apply(&yf.apply(&f).unwrap()).unwrap() - &yf.apply(&xf.apply(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn homotopy_recovers_closed_form() {
        let chart = Chart::standard(3)
            .unwrap()
            .with_center(alloc::vec![ratio(1, 2), int(-1), int(2)])
            .unwrap();
        let f = &(&x(0) * &x(1)) + &x(2).pow(2);
        let g = &x(0).pow(2) - &x(1);
        let alpha = Form::function(3, f)
            .d()
            .wedge(&Form::function(3, g).d())
            .unwrap();
        let h = alpha.homotopy(&chart).unwrap();
        assert_eq!(h.d(), alpha);
        assert!(alpha.is_exact(&chart).unwrap());
    }

    #[test]
    fn homotopy_rejects_functions() {
        let chart = Chart::standard(2).unwrap();
        let f = Form::function(2, x(0));
        assert_eq!(f.homotopy(&chart), Err(Error::HomotopyOnFunction));
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = Form::basis(2, &[0]).unwrap();
        let b = Form::basis(3, &[0]).unwrap();
        assert!(matches!(a.wedge(&b), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn sn_rejects_degree_zero() {
        let f = MultiVector::function(2, x(0));
        let v = MultiVector::partial(2, 0);
        assert_eq!(schouten_nijenhuis(&f, &v), Err(Error::ZeroDegreeBracket));
    }

    #[test]
    fn pullback_commutes_with_d() {
        let alpha = Form::function(2, &x(0) * &x(1)).d().mul_poly(&x(0));
        let images = [&x(0) + &x(1).pow(2), &x(0) * &x(1)];
        let lhs = alpha.d().pullback(&images, 2).unwrap();
        let rhs = alpha.pullback(&images, 2).unwrap().d();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_cartan_on_vector_fields() {
        // £_X f = X(f)
        let xf = MultiVector::from_components(&[x(1), x(0).pow(2)]);
        let f = &x(0) * &x(1);
        let lf = lie_derivative(&xf, &Form::function(2, f.clone())).unwrap();
        assert_eq!(lf, Form::function(2, xf.apply(&f).unwrap()));
    }

    #[test]
    fn lie_derivative_along_bivector_by_definition() {
        // ι_{∂x∧∂y}(x dy∧dz) = 0 and ι_{∂x∧∂y} d(x dy∧dz) = dz, so the defining
        // combination d ι − (−1)^2 ι d gives −dz
        let u = MultiVector::basis(3, &[0, 1]).unwrap();
        let a = Form::basis(3, &[1, 2]).unwrap().mul_poly(&x(0));
        let got = lie_derivative(&u, &a).unwrap();
        assert_eq!(got, -Form::basis(3, &[2]).unwrap());
        // £_{∂x}(x dy) = dy
        let got = lie_derivative(
            &MultiVector::partial(2, 0),
            &Form::basis(2, &[1]).unwrap().mul_poly(&x(0)),
        )
        .unwrap();
        assert_eq!(got, Form::basis(2, &[1]).unwrap());
    }

    #[test]
    fn render_round_shape() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| String::from(*s)).collect();
        let a = &Form::basis(2, &[0, 1]).unwrap().mul_poly(&(&x(0) + &x(1)))
            - &Form::basis(2, &[0, 1]).unwrap().scale(&int(0));
        assert_eq!(a.render(&names), "(y + x)*dx^dy");
        let v = -MultiVector::partial(2, 1);
        assert_eq!(v.render(&names), "-@y");
    }
}
