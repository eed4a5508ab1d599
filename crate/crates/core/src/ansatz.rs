//! Bounded-degree polynomial ansatz.
//!
//! Unknown coefficients are polynomial variables allocated from a [`Params`]
//! block. Operators of the exterior calculus act on the chart variables only, so
//! applying them to a generic form keeps the coefficients linear in the unknowns.
//! Requiring the outcome to vanish identically yields a sparse linear system.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::exterior::{Graded, Kind, PARAM_BASE};
use crate::linalg::{solve_affine, sparse_to_dense, SparseRow};
use crate::poly::{Monomial, Polynomial, Scalar};

/// A contiguous block of unknown variables.
#[derive(Clone, Debug)]
pub struct Params {
    base: u16,
    count: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params::new()
    }
}

impl Params {
    pub fn new() -> Self {
        Params::starting_at(PARAM_BASE)
    }

    /// A block starting at `base`; used to keep unknowns apart from symbolic data.
    pub fn starting_at(base: u16) -> Self {
        Params { base, count: 0 }
    }

    pub fn fresh(&mut self) -> Result<u16> {
        let idx = self.base as usize + self.count;
        if idx > u16::MAX as usize {
            return Err(Error::VariableRange { index: idx });
        }
        self.count += 1;
        Ok(idx as u16)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn base(&self) -> u16 {
        self.base
    }

    pub fn end(&self) -> u16 {
        (self.base as usize + self.count) as u16
    }

    pub fn contains(&self, v: u16) -> bool {
        v >= self.base && (v as usize) < self.base as usize + self.count
    }

    /// `Σ c_m m` over all monomials `m` in `vars` of degree `<= max_degree`.
    pub fn generic_polynomial(&mut self, vars: &[u16], max_degree: u32) -> Result<Polynomial> {
        let mut p = Polynomial::zero();
        for m in Monomial::all_up_to(vars, max_degree) {
            let c = self.fresh()?;
            p.add_term(m.mul(&Monomial::var(c)), Scalar::from_integer(1.into()));
        }
        Ok(p)
    }

    /// Generic element of `Λ^degree` (or `∨_degree`) on a `dim`-chart with coefficients in `vars`.
    pub fn generic_graded<K: Kind>(
        &mut self,
        dim: usize,
        degree: usize,
        vars: &[u16],
        max_degree: u32,
    ) -> Result<Graded<K>> {
        let mut terms = Vec::new();
        for b in Blade::all_of_degree(dim, degree) {
            terms.push((b, self.generic_polynomial(vars, max_degree)?));
        }
        Graded::from_terms(dim, degree, terms)
    }
}

/// Splits a monomial into its unknown factor (at most one, to first order) and the rest.
fn split_unknown(m: &Monomial, params: &Params) -> Result<(Option<u16>, Monomial)> {
    let mut unknown = None;
    let mut rest = Vec::new();
    for &(v, e) in m.pairs() {
        if params.contains(v) {
            if e != 1 || unknown.is_some() {
                return Err(Error::PreconditionFailure(
                    "ansatz expression is not linear in the unknowns".into(),
                ));
            }
            unknown = Some(v);
        } else {
            rest.push((v, e));
        }
    }
    Ok((unknown, Monomial::from_pairs(rest)))
}

/// Linear conditions on the unknowns of a [`Params`] block.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    params: Params,
    equations: Vec<(SparseRow, Scalar)>,
}

/// Solution set `particular + span(kernel)` of a consistent [`LinearSystem`].
#[derive(Clone, Debug)]
pub struct Solution {
    params: Params,
    pub particular: Vec<Scalar>,
    pub kernel: Vec<SparseRow>,
}

impl LinearSystem {
    pub fn new(params: &Params) -> Self {
        LinearSystem {
            params: params.clone(),
            equations: Vec::new(),
        }
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    /// Requires `p` to vanish identically in every variable that is not an unknown.
    pub fn require_zero(&mut self, p: &Polynomial) -> Result<()> {
        let mut rows: BTreeMap<Monomial, (BTreeMap<usize, Scalar>, Scalar)> = BTreeMap::new();
        for (m, c) in p.terms() {
            let (unknown, rest) = split_unknown(m, &self.params)?;
            let entry = rows
                .entry(rest)
                .or_insert_with(|| (BTreeMap::new(), Scalar::zero()));
            match unknown {
                Some(v) => {
                    let idx = (v - self.params.base) as usize;
                    let slot = entry.0.entry(idx).or_insert_with(Scalar::zero);
                    *slot += c;
                }
                None => entry.1 -= c,
            }
        }
        for (_, (coeffs, rhs)) in rows {
            let row: SparseRow = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if row.is_empty() && rhs.is_zero() {
                continue;
            }
            self.equations.push((row, rhs));
        }
        Ok(())
    }

    pub fn require_zero_graded<K: Kind>(&mut self, g: &Graded<K>) -> Result<()> {
        for (_, c) in g.terms() {
            self.require_zero(c)?;
        }
        Ok(())
    }

    pub fn require_equal<K: Kind>(&mut self, a: &Graded<K>, b: &Graded<K>) -> Result<()> {
        self.require_zero_graded(&a.checked_sub(b)?)
    }

    pub fn solve(&self) -> Option<Solution> {
        let (particular, kernel) = solve_affine(self.params.count, &self.equations)?;
        Some(Solution {
            params: self.params.clone(),
            particular: sparse_to_dense(&particular, self.params.count),
            kernel,
        })
    }
}

impl Solution {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    /// Values of the unknowns for `particular + Σ t_i kernel_i`.
    pub fn assignment(&self, t: &[Scalar]) -> Vec<Scalar> {
        let mut x = self.particular.clone();
        for (ti, kv) in t.iter().zip(&self.kernel) {
            if ti.is_zero() {
                continue;
            }
            for (j, c) in kv {
                x[*j] += ti * c;
            }
        }
        x
    }

    /// Values of the unknowns for the kernel vector `i` alone (homogeneous part).
    pub fn kernel_assignment(&self, i: usize) -> Vec<Scalar> {
        sparse_to_dense(&self.kernel[i], self.params.count)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }
}

/// Replaces the unknowns of `params` by `values`.
pub fn instantiate(p: &Polynomial, params: &Params, values: &[Scalar]) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut rest = Vec::new();
        for &(v, e) in m.pairs() {
            if params.contains(v) {
                let x = &values[(v - params.base) as usize];
                for _ in 0..e {
                    coeff *= x;
                }
            } else {
                rest.push((v, e));
            }
        }
        if !coeff.is_zero() {
            out.add_term(Monomial::from_pairs(rest), coeff);
        }
    }
    out
}

pub fn instantiate_graded<K: Kind>(g: &Graded<K>, params: &Params, values: &[Scalar]) -> Graded<K> {
    g.map_coeffs(|c| instantiate(c, params, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::poly::int;

    #[test]
    fn closed_one_forms_on_the_plane_are_gradients() {
        // generic 1-form with coefficients of degree <= 2: closed ones form d(cubic without constant)
        let mut params = Params::new();
        let alpha: Form = params.generic_graded(2, 1, &[0, 1], 2).unwrap();
        let mut sys = LinearSystem::new(&params);
        sys.require_zero_graded(&alpha.d()).unwrap();
        let sol = sys.solve().unwrap();
        // cubic polynomials modulo constants: 10 − 1 = 9
        assert_eq!(sol.dim(), 9);
        for i in 0..sol.dim() {
            let a = instantiate_graded(&alpha, &params, &sol.kernel_assignment(i));
            assert!(a.d().is_zero());
        }
    }

    #[test]
    fn inhomogeneous_solve() {
        // find f with ∂f/∂x = 2x y, total degree <= 2 in (x, y)
        let mut params = Params::new();
        let f = params.generic_polynomial(&[0, 1], 2).unwrap();
        let target = &Polynomial::var(0) * &Polynomial::var(1);
        let mut sys = LinearSystem::new(&params);
        sys.require_zero(&(&f.derivative(0) - &target.scale(&int(2))))
            .unwrap();
        // x^2 y has degree 3 so the bounded ansatz fails
        assert!(sys.solve().is_none());
        let mut params = Params::new();
        let f = params.generic_polynomial(&[0, 1], 3).unwrap();
        let mut sys = LinearSystem::new(&params);
        sys.require_zero(&(&f.derivative(0) - &target.scale(&int(2))))
            .unwrap();
        let sol = sys.solve().unwrap();
        let g = instantiate(&f, &params, &sol.particular);
        assert_eq!(g.derivative(0), target.scale(&int(2)));
    }
}
