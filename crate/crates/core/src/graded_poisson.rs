//! Graded Poisson structures, Hamiltonian forms and their bracket.
//!
//! A structure is stored as generator lists `(σ_j, w_j)` per level with
//! `♯_a(σ_j) = w_j + K`. Constant structures are checked exactly through
//! [`LinearGradedDirac`]; polynomial ones are checked at sample points.
//!
//! With `Ω = dp∧dq` on `(q, p)` the conventions here give `X_p = −∂_q` and
//! `{q, p} = −1`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::ansatz::{instantiate_graded, LinearSystem, Params, Solution};
use crate::blade::{binomial, Blade};
use crate::error::{Error, Result};
use crate::exterior::{
    interior, lie_derivative, schouten_nijenhuis, Chart, Form, FormKind, MultiVector,
};
use crate::linalg::{
    annihilator_forms, annihilator_mv, Ambient, ConstSubspace, ConstantSolver, Echelon, SparseRow,
};
use crate::linear_dirac::{
    contract, reconstruct_family, wedge_mv, LinearFamily, LinearGradedDirac, SharpMap,
};
use crate::poly::{int, Monomial, Polynomial, Scalar};
use crate::random::small_rational;
use crate::verdict::Verdict;

fn signed<K: crate::exterior::Kind>(
    g: crate::exterior::Graded<K>,
    e: usize,
) -> crate::exterior::Graded<K> {
    if e % 2 == 0 {
        g
    } else {
        -g
    }
}

/// A point where a nonzero polynomial does not vanish. The grid `{0..=deg}^n`
/// always contains one.
pub fn nonzero_point(p: &Polynomial, n: usize) -> Vec<Scalar> {
    assert!(!p.is_zero(), "zero polynomial vanishes everywhere");
    let base = p.degree() as usize + 1;
    let mut digits = alloc::vec![0usize; n];
    loop {
        let x: Vec<Scalar> = digits.iter().map(|&d| int(d as i64)).collect();
        if !p.eval(&x).is_zero_value() {
            return x;
        }
        let mut i = 0;
        loop {
            if i == n {
                unreachable!("a nonzero polynomial has a non-root on the grid");
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

trait IsZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl IsZeroValue for Scalar {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// `None` when every monomial coefficient vector of `comps` lies in `s`;
/// otherwise a point where the value leaves `s`.
pub fn miss_point(s: &ConstSubspace, comps: &[Polynomial], n: usize) -> Option<Vec<Scalar>> {
    for c in s.orthogonal_complement().basis() {
        let mut q = Polynomial::zero();
        for (ci, f) in c.iter().zip(comps) {
            if !ci.is_zero_value() && !f.is_zero() {
                q += &f.scale(ci);
            }
        }
        if !q.is_zero() {
            return Some(nonzero_point(&q, n));
        }
    }
    None
}

fn eval_vector(comps: &[Polynomial], x: &[Scalar]) -> Vec<Scalar> {
    comps.iter().map(|f| f.eval(x)).collect()
}

/// Generators of one level: `♯_a(σ_j) = w_j + K_{k+1−a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonLevel {
    pub a: usize,
    pub generators: Vec<(Form, MultiVector)>,
}

#[derive(Clone, Debug)]
pub struct GradedPoissonStructure {
    pub n: usize,
    pub k: usize,
    /// `levels[a − 1]`.
    pub levels: Vec<PoissonLevel>,
    constant: Option<(LinearGradedDirac, LinearFamily)>,
    points: Vec<Vec<Scalar>>,
}

/// A Hamiltonian `(a−1)`-form with a representative of `♯_a(dα)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianForm {
    pub form: Form,
    pub a: usize,
    pub k: usize,
    pub witness: MultiVector,
}

impl HamiltonianForm {
    /// `deg α = k − a`.
    pub fn deg(&self) -> usize {
        self.k - self.a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hamiltonicity {
    Hamiltonian(HamiltonianForm),
    NotHamiltonian { point: Vec<Scalar> },
    Inconclusive,
}

impl Hamiltonicity {
    pub fn into_form(self) -> Option<HamiltonianForm> {
        match self {
            Hamiltonicity::Hamiltonian(h) => Some(h),
            _ => None,
        }
    }
}

fn top_at(
    n: usize,
    k: usize,
    top: &[(Form, MultiVector)],
    x: Option<&[Scalar]>,
) -> Result<SharpMap> {
    let mut gens = Vec::with_capacity(top.len());
    for (s, w) in top {
        let (s, w) = match x {
            Some(x) => (s.evaluate_at(x)?, w.evaluate_at(x)?),
            None => (s.clone(), w.clone()),
        };
        gens.push((s.to_vector()?, w.to_vector()?));
    }
    let forms: Vec<Vec<Scalar>> = gens.iter().map(|(f, _)| f.clone()).collect();
    let domain = ConstSubspace::span(Ambient::Forms { n, d: k }, &forms)?;
    let kernel = annihilator_mv(&domain, 1)?;
    if kernel.dim() > 0 {
        return Err(Error::PreconditionFailure(format!(
            "degenerate top level: K₁ has dimension {}",
            kernel.dim()
        )));
    }
    SharpMap::new(n, k, k, kernel, gens)
}

fn family_from(top: &SharpMap) -> Result<LinearGradedDirac> {
    reconstruct_family(top)?.map_err(|v| Error::PreconditionFailure(format!("{}", v)))
}

impl GradedPoissonStructure {
    /// Recovers all levels from `♯_k` given on generators `(σ_j, w_j)`.
    ///
    /// Constant generators are reconstructed exactly. Otherwise `points` are
    /// the sample points where nondegeneracy and the level conditions are checked.
    pub fn extend_from_top(
        n: usize,
        k: usize,
        top: Vec<(Form, MultiVector)>,
        points: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                max: n,
                context: "order of a graded Poisson structure",
            });
        }
        for (s, w) in &top {
            if s.dim() != n || w.dim() != n {
                return Err(Error::ChartMismatch {
                    left: n,
                    right: s.dim().max(w.dim()),
                });
            }
            if s.degree() != k || w.degree() != 1 {
                return Err(Error::DegreeOutOfRange {
                    degree: s.degree(),
                    max: k,
                    context: "top generators are (k-form, vector field) pairs",
                });
            }
        }
        if top.iter().all(|(s, w)| s.is_constant() && w.is_constant()) {
            let family = family_from(&top_at(n, k, &top, None)?)?;
            let graph = family.graph()?;
            let levels = family
                .levels
                .iter()
                .map(|sharp| {
                    let order = sharp.order();
                    let generators = sharp
                        .generators
                        .iter()
                        .map(|(f, u)| {
                            Ok((
                                Form::from_vector(n, sharp.a, f)?,
                                MultiVector::from_vector(n, order, u)?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(PoissonLevel {
                        a: sharp.a,
                        generators,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(GradedPoissonStructure {
                n,
                k,
                levels,
                constant: Some((family, graph)),
                points,
            });
        }
        if points.is_empty() {
            return Err(Error::PreconditionFailure(String::from(
                "a polynomial structure needs sample points",
            )));
        }
        for x in &points {
            family_from(&top_at(n, k, &top, Some(x))?).map_err(|e| {
                Error::PreconditionFailure(format!("at {:?}: {}", render_point(x), e))
            })?;
        }
        let mut levels = Vec::with_capacity(k);
        for a in 1..=k {
            let mut generators = Vec::new();
            for blade in Blade::all_of_degree(n, k - a) {
                let e = MultiVector::term(n, blade, Polynomial::one())?;
                for (s, w) in &top {
                    generators.push((interior(&e, s)?, w.wedge(&e)?));
                }
            }
            levels.push(PoissonLevel { a, generators });
        }
        Ok(GradedPoissonStructure {
            n,
            k,
            levels,
            constant: None,
            points,
        })
    }

    /// The structure of a nondegenerate `(k+1)`-form: `♯_k(ι_Xω) = X`.
    pub fn from_multisymplectic(omega: &Form, points: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = omega.dim();
        if omega.degree() < 2 {
            return Err(Error::DegreeOutOfRange {
                degree: omega.degree(),
                max: n,
                context: "a multisymplectic form has degree >= 2",
            });
        }
        let top = (0..n)
            .map(|i| {
                let e = MultiVector::partial(n, i);
                Ok((interior(&e, omega)?, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::extend_from_top(n, omega.degree() - 1, top, points)
    }

    pub fn is_constant(&self) -> bool {
        self.constant.is_some()
    }

    pub fn level(&self, a: usize) -> &PoissonLevel {
        &self.levels[a - 1]
    }

    pub fn sample_points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// The linear structure at `x` (the same everywhere for constant structures).
    pub fn at(&self, x: &[Scalar]) -> Result<LinearGradedDirac> {
        match &self.constant {
            Some((family, _)) => Ok(family.clone()),
            None => family_from(&top_at(
                self.n,
                self.k,
                &self.levels[self.k - 1].generators,
                Some(x),
            )?),
        }
    }

    /// The constant linear structure, if there is one.
    pub fn linear(&self) -> Option<&LinearGradedDirac> {
        self.constant.as_ref().map(|(f, _)| f)
    }

    fn check_level(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.k {
            return Err(Error::DegreeOutOfRange {
                degree: a,
                max: self.k,
                context: "level of a Hamiltonian form (form degree + 1)",
            });
        }
        Ok(())
    }

    /// A representative of `♯_a(σ)` for a polynomial `a`-form with values in `S^a`.
    pub fn sharp(&self, sigma: &Form, bound: u32) -> Result<Option<MultiVector>> {
        let a = sigma.degree();
        self.check_level(a)?;
        let gens = &self.level(a).generators;
        let order = self.k + 1 - a;
        if sigma.is_zero() {
            return Ok(Some(MultiVector::zero(self.n, order)));
        }
        let coeffs = if self.is_constant() {
            let cols = gens
                .iter()
                .map(|(s, _)| s.to_vector())
                .collect::<Result<Vec<_>>>()?;
            match ConstantSolver::new(binomial(self.n, a), &cols).solve_poly(&sigma.coefficients())
            {
                Some(c) => c,
                None => return Ok(None),
            }
        } else {
            let vars: Vec<u16> = (0..self.n as u16).collect();
            let mut params = Params::new();
            let fs = gens
                .iter()
                .map(|_| params.generic_polynomial(&vars, bound))
                .collect::<Result<Vec<_>>>()?;
            let mut rest = sigma.clone();
            for (f, (s, _)) in fs.iter().zip(gens) {
                rest = rest.checked_sub(&s.mul_poly(f))?;
            }
            let mut sys = LinearSystem::new(&params);
            sys.require_zero_graded(&rest)?;
            match sys.solve() {
                Some(sol) => fs
                    .iter()
                    .map(|f| crate::ansatz::instantiate(f, &params, &sol.particular))
                    .collect(),
                None => return Ok(None),
            }
        };
        let mut w = MultiVector::zero(self.n, order);
        for (c, (_, u)) in coeffs.iter().zip(gens) {
            if !c.is_zero() {
                w = w.checked_add(&u.mul_poly(c))?;
            }
        }
        Ok(Some(w))
    }

    fn forms_span_at(&self, a: usize, x: &[Scalar]) -> Result<ConstSubspace> {
        let rows = self
            .level(a)
            .generators
            .iter()
            .map(|(s, _)| s.evaluate_at(x)?.to_vector())
            .collect::<Result<Vec<_>>>()?;
        ConstSubspace::span(Ambient::Forms { n: self.n, d: a }, &rows)
    }

    /// Whether `dα` takes values in `S^a`, `a = deg α + 1`, with a witness for `♯_a(dα)`.
    ///
    /// Constant structures decide exactly. Otherwise a bounded ansatz is tried
    /// first and the sample points decide between failure and inconclusive.
    pub fn is_hamiltonian(&self, alpha: &Form, bound: u32) -> Result<Hamiltonicity> {
        if alpha.dim() != self.n {
            return Err(Error::ChartMismatch {
                left: self.n,
                right: alpha.dim(),
            });
        }
        let a = alpha.degree() + 1;
        self.check_level(a)?;
        let d = alpha.d();
        if let Some(witness) = self.sharp(&d, bound)? {
            return Ok(Hamiltonicity::Hamiltonian(HamiltonianForm {
                form: alpha.clone(),
                a,
                k: self.k,
                witness,
            }));
        }
        if let Some((family, _)) = &self.constant {
            let point = miss_point(&family.level(a).domain, &d.coefficients(), self.n)
                .expect("the exact solve failed, so some value leaves S^a");
            return Ok(Hamiltonicity::NotHamiltonian { point });
        }
        let comps = d.coefficients();
        for x in &self.points {
            if !self.forms_span_at(a, x)?.contains(&eval_vector(&comps, x)) {
                return Ok(Hamiltonicity::NotHamiltonian { point: x.clone() });
            }
        }
        Ok(Hamiltonicity::Inconclusive)
    }

    /// `(−1)^{deg β} ι_V dα` where `V` represents `♯_b(dβ)`; `α` need not be wrapped.
    pub fn bracket_raw(&self, alpha: &Form, beta: &HamiltonianForm) -> Result<Form> {
        let q = beta.witness.degree();
        if q > alpha.degree() + 1 {
            return Err(Error::DegreeOutOfRange {
                degree: alpha.degree() + 1 + beta.a,
                max: self.k + 1,
                context: "bracket needs a + b >= k + 1",
            });
        }
        Ok(signed(interior(&beta.witness, &alpha.d())?, beta.deg()))
    }

    /// `{α, β} = (−1)^{deg β} ι_{♯_b(dβ)} dα`, carrying the witness `−[U, V]`.
    pub fn bracket(
        &self,
        alpha: &HamiltonianForm,
        beta: &HamiltonianForm,
    ) -> Result<HamiltonianForm> {
        if alpha.a + beta.a < self.k + 1 {
            return Err(Error::DegreeOutOfRange {
                degree: alpha.a + beta.a,
                max: self.k + 1,
                context: "bracket of Hamiltonian forms needs a + b >= k + 1",
            });
        }
        let form = self.bracket_raw(&alpha.form, beta)?;
        let witness = -schouten_nijenhuis(&alpha.witness, &beta.witness)?;
        Ok(HamiltonianForm {
            form,
            a: alpha.a + beta.a - self.k,
            k: self.k,
            witness,
        })
    }

    /// Checks `(U, dα) ∈ D_{k+1−a}` exactly (constant) or at the sample points.
    pub fn certify(&self, h: &HamiltonianForm) -> Result<Verdict<Vec<Scalar>>> {
        let p = self.k + 1 - h.a;
        let mut comps = h.witness.coefficients();
        comps.extend(h.form.d().coefficients());
        if let Some((_, graph)) = &self.constant {
            return Ok(match miss_point(&graph.levels[p - 1], &comps, self.n) {
                None => Verdict::Pass,
                Some(x) => Verdict::Fail(x),
            });
        }
        for x in &self.points {
            let graph = self.at(x)?.graph()?;
            if !graph.levels[p - 1].contains(&eval_vector(&comps, x)) {
                return Ok(Verdict::Fail(x.clone()));
            }
        }
        Ok(Verdict::Pass)
    }

    /// Whether `u − v ∈ K_p`.
    pub fn same_modulo_kernel(
        &self,
        u: &MultiVector,
        v: &MultiVector,
    ) -> Result<Verdict<Vec<Scalar>>> {
        let p = u.degree();
        let diff = u.checked_sub(v)?.coefficients();
        if let Some((family, _)) = &self.constant {
            return Ok(match miss_point(family.kernel(p), &diff, self.n) {
                None => Verdict::Pass,
                Some(x) => Verdict::Fail(x),
            });
        }
        for x in &self.points {
            if !self.at(x)?.kernel(p).contains(&eval_vector(&diff, x)) {
                return Ok(Verdict::Fail(x.clone()));
            }
        }
        Ok(Verdict::Pass)
    }

    /// `X_α`, the representative of `♯_k(dα)` for a Hamiltonian `(k−1)`-form.
    pub fn hamiltonian_vector_field(&self, h: &HamiltonianForm) -> Result<MultiVector> {
        if h.a != self.k {
            return Err(Error::DegreeOutOfRange {
                degree: h.a - 1,
                max: self.k - 1,
                context: "Hamiltonian vector fields come from (k−1)-forms",
            });
        }
        Ok(h.witness.clone())
    }

    /// Generators of `E = Im ♯_k`.
    pub fn characteristic_distribution(&self) -> Vec<MultiVector> {
        self.level(self.k)
            .generators
            .iter()
            .map(|(_, w)| w.clone())
            .filter(|w| !w.is_zero())
            .collect()
    }

    /// The leaf form at `x` on the basis of `E|_x` returned alongside it.
    pub fn leaf_form_at(&self, x: &[Scalar]) -> Result<LeafForm> {
        let (n, k) = (self.n, self.k);
        let gens = self
            .level(k)
            .generators
            .iter()
            .map(|(s, w)| {
                Ok((
                    s.evaluate_at(x)?.to_vector()?,
                    w.evaluate_at(x)?.to_vector()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let ws: Vec<Vec<Scalar>> = gens.iter().map(|(_, w)| w.clone()).collect();
        let basis = ConstSubspace::span(Ambient::MultiVectors { n, d: 1 }, &ws)?.basis();
        let r = basis.len();
        let solver = ConstantSolver::new(n, &ws);
        let combine = |coeffs: &[Scalar]| -> Vec<Scalar> {
            let mut out = alloc::vec![int(0); binomial(n, k)];
            for (c, (s, _)) in coeffs.iter().zip(&gens) {
                for (o, v) in out.iter_mut().zip(s) {
                    *o += c * v;
                }
            }
            out
        };
        let evaluate = |alpha: &[Scalar], vs: &[&Vec<Scalar>]| -> Result<Scalar> {
            let mut u = alloc::vec![int(1)];
            for (i, v) in vs.iter().enumerate() {
                u = wedge_mv(n, &u, i, v, 1)?;
            }
            Ok(contract(n, &u, vs.len(), alpha, k)?[0].clone())
        };
        let preimages: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|c| combine(&solver.solve(c).expect("basis vector lies in the span")))
            .collect();
        // redundancies among the w_j must restrict to zero on E
        let rows = crate::linalg::equations_from_columns(&ws, n);
        for rel in crate::linalg::Rref::from_rows(gens.len(), rows.iter()).kernel() {
            let tau = combine(&crate::linalg::sparse_to_dense(&rel, gens.len()));
            for j in Blade::all_of_degree(r, k) {
                let vs: Vec<&Vec<Scalar>> = j.indices().into_iter().map(|i| &basis[i]).collect();
                if !evaluate(&tau, &vs)?.is_zero_value() {
                    return Err(Error::PreconditionFailure(String::from(
                        "leaf form depends on the chosen preimage",
                    )));
                }
            }
        }
        let mut form = Form::zero(r, k + 1);
        for blade in Blade::all_of_degree(r, k + 1) {
            let idx = blade.indices();
            let mut value: Option<Scalar> = None;
            for t in 0..idx.len() {
                let vs: Vec<&Vec<Scalar>> = idx
                    .iter()
                    .filter(|&&i| i != idx[t])
                    .map(|&i| &basis[i])
                    .collect();
                let mut v = evaluate(&preimages[idx[t]], &vs)?;
                if t % 2 == 1 {
                    v = -v;
                }
                match &value {
                    None => value = Some(v),
                    Some(prev) if *prev == v => {}
                    Some(_) => {
                        return Err(Error::PreconditionFailure(String::from(
                            "leaf form is not alternating",
                        )));
                    }
                }
            }
            let v = value.expect("k + 1 >= 1 positions");
            form = form.checked_add(&Form::term(r, blade, Polynomial::constant(v))?)?;
        }
        Ok(LeafForm { basis, form })
    }

    /// Recovers `♯_a(dα)` from brackets `{β, α}` against closed probes `β` with
    /// `dβ` running over `S^p`, `p = k + 1 − a`. Constant structures only.
    pub fn recover_from_brackets(
        &self,
        alpha: &HamiltonianForm,
        table: impl Fn(&HamiltonianForm) -> Result<Form>,
    ) -> Result<MultiVector> {
        let Some((family, _)) = &self.constant else {
            return Err(Error::PreconditionFailure(String::from(
                "bracket reconstruction needs a constant structure",
            )));
        };
        let n = self.n;
        let p = self.k + 1 - alpha.a;
        let chart = Chart::standard(n)?;
        let probes = family.level(p).domain.basis();
        let mut values = Vec::with_capacity(probes.len());
        for sigma in &probes {
            let s = Form::from_vector(n, p, sigma)?;
            let beta = s.homotopy(&chart)?;
            let h = match self.is_hamiltonian(&beta, 0)? {
                Hamiltonicity::Hamiltonian(h) => h,
                _ => return Err(Error::NotHamiltonian(String::from("probe form"))),
            };
            let b = table(&h)?;
            values.push(signed(b, alpha.deg()).coefficient(Blade::EMPTY));
        }
        let pairing = crate::linalg::ContractionPairing::new(n, p, p)?;
        let columns: Vec<Vec<Scalar>> = (0..binomial(n, p))
            .map(|i| {
                let mut e = alloc::vec![int(0); binomial(n, p)];
                e[i] = int(1);
                probes
                    .iter()
                    .map(|s| pairing.apply(&e, s)[0].clone())
                    .collect()
            })
            .collect();
        let coeffs = ConstantSolver::new(probes.len(), &columns)
            .solve_poly(&values)
            .ok_or_else(|| {
                Error::PreconditionFailure(String::from(
                    "bracket table is not induced by a multivector",
                ))
            })?;
        MultiVector::from_coefficients(n, p, &coeffs)
    }
}

fn render_point(x: &[Scalar]) -> Vec<String> {
    x.iter().map(crate::poly::render_scalar).collect()
}

/// `ω_F|_x` written in the basis `basis` of `E|_x` (a form on `ℝ^r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafForm {
    pub basis: Vec<Vec<Scalar>>,
    pub form: Form,
}

/// The structure induced by coordinate leaves `span{∂_i : i ∈ leaf}` with a
/// constant leaf form: `S = ι_W ω_F ⊕ W^{∘,k}` and `♯ = 0` on the second summand.
pub fn foliation_to_structure(
    n: usize,
    k: usize,
    leaf: &[usize],
    omega_f: &Form,
) -> Result<GradedPoissonStructure> {
    if omega_f.dim() != n || omega_f.degree() != k + 1 || !omega_f.is_constant() {
        return Err(Error::PreconditionFailure(String::from(
            "leaf form must be a constant (k+1)-form on the ambient chart",
        )));
    }
    let leaf_blade = Blade::from_indices(leaf);
    if leaf.iter().any(|&i| i >= n) || omega_f.terms().any(|(b, _)| !b.is_subset_of(leaf_blade)) {
        return Err(Error::PreconditionFailure(String::from(
            "leaf form involves directions transverse to the leaves",
        )));
    }
    let mut top = Vec::new();
    let mut flats = Vec::new();
    for &i in leaf {
        let e = MultiVector::partial(n, i);
        let flat = interior(&e, omega_f)?;
        flats.push(flat.to_vector()?);
        top.push((flat, e));
    }
    let rank = ConstSubspace::span(Ambient::Forms { n, d: k }, &flats)?.dim();
    if rank < leaf.len() {
        return Err(Error::PreconditionFailure(format!(
            "leaf form is degenerate: ♭ has rank {} on a {}-dimensional leaf",
            rank,
            leaf.len()
        )));
    }
    let w: Vec<Vec<Scalar>> = leaf
        .iter()
        .map(|&i| MultiVector::partial(n, i).to_vector())
        .collect::<Result<_>>()?;
    let w = ConstSubspace::span(Ambient::MultiVectors { n, d: 1 }, &w)?;
    for sigma in annihilator_forms(&w, k)?.basis() {
        top.push((Form::from_vector(n, k, &sigma)?, MultiVector::zero(n, 1)));
    }
    GradedPoissonStructure::extend_from_top(n, k, top, Vec::new())
}

/// All sections `Σ f_i α_i` with `deg f_i <= bound` that are closed, as a basis.
pub fn closed_section_search(n: usize, gens: &[Form], bound: u32) -> Result<Vec<Form>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let a = first.degree();
    if gens.iter().any(|g| g.degree() != a || g.dim() != n) {
        return Err(Error::PreconditionFailure(String::from(
            "generators must share degree and chart",
        )));
    }
    let vars: Vec<u16> = (0..n as u16).collect();
    let mut params = Params::new();
    let mut section = Form::zero(n, a);
    for g in gens {
        let f = params.generic_polynomial(&vars, bound)?;
        section = section.checked_add(&g.mul_poly(&f))?;
    }
    let mut sys = LinearSystem::new(&params);
    sys.require_zero_graded(&section.d())?;
    let sol = sys
        .solve()
        .expect("the zero section solves the homogeneous system");
    let mut index: BTreeMap<(Blade, Monomial), usize> = BTreeMap::new();
    let mut echelon_rows: Vec<(SparseRow, Form)> = Vec::new();
    for i in 0..sol.dim() {
        let s = instantiate_graded(&section, &params, &sol.kernel_assignment(i));
        if s.is_zero() {
            continue;
        }
        let mut row = SparseRow::new();
        for (b, f) in s.terms() {
            for (m, c) in f.terms() {
                let len = index.len();
                let j = *index.entry((*b, m.clone())).or_insert(len);
                row.push((j, c.clone()));
            }
        }
        row.sort_by_key(|(j, _)| *j);
        echelon_rows.push((row, s));
    }
    let mut ech = Echelon::new(index.len());
    let mut out = Vec::new();
    for (row, s) in echelon_rows {
        if ech.insert(&row) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Extra condition imposed on randomly drawn Hamiltonian forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// `dα(x₀) = 0`.
    VanishAt(Vec<Scalar>),
    /// `α` does not depend on coordinate `j`, so `£_{∂_j}α = 0`.
    Invariant(usize),
}

/// Draws random Hamiltonian forms of a constant structure. Solved systems are cached.
pub struct HamiltonianSampler<'s> {
    structure: &'s GradedPoissonStructure,
    coeff_degree: u32,
    cache: BTreeMap<(usize, Option<usize>), (Params, Form, Solution)>,
}

impl<'s> HamiltonianSampler<'s> {
    pub fn new(structure: &'s GradedPoissonStructure, coeff_degree: u32) -> Result<Self> {
        if !structure.is_constant() {
            return Err(Error::PreconditionFailure(String::from(
                "random Hamiltonian forms need a constant structure",
            )));
        }
        Ok(HamiltonianSampler {
            structure,
            coeff_degree,
            cache: BTreeMap::new(),
        })
    }

    fn system(
        &self,
        a: usize,
        exclude: Option<usize>,
        vanish: Option<&[Scalar]>,
    ) -> Result<(Params, Form, Solution)> {
        let s = self.structure;
        let vars: Vec<u16> = (0..s.n as u16)
            .filter(|&v| Some(v as usize) != exclude)
            .collect();
        let mut params = Params::new();
        let alpha: Form =
            params.generic_graded::<FormKind>(s.n, a - 1, &vars, self.coeff_degree)?;
        let comps = alpha.d().coefficients();
        let mut sys = LinearSystem::new(&params);
        let domain = &s.linear().expect("checked in new").level(a).domain;
        for c in domain.orthogonal_complement().basis() {
            let mut q = Polynomial::zero();
            for (ci, f) in c.iter().zip(&comps) {
                if !ci.is_zero_value() {
                    q += &f.scale(ci);
                }
            }
            sys.require_zero(&q)?;
        }
        if let Some(x) = vanish {
            for f in &comps {
                sys.require_zero(&f.eval_partial(x))?;
            }
        }
        let sol = sys.solve().expect("zero is always a solution");
        Ok((params, alpha, sol))
    }

    /// A random Hamiltonian `(a−1)`-form; up to eight draws are made to avoid `dα = 0`.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        a: usize,
        constraint: &Constraint,
    ) -> Result<HamiltonianForm> {
        self.structure.check_level(a)?;
        let fresh;
        let (params, alpha, sol) = match constraint {
            Constraint::VanishAt(x) => {
                fresh = self.system(a, None, Some(x))?;
                &fresh
            }
            Constraint::None | Constraint::Invariant(_) => {
                let exclude = match constraint {
                    Constraint::Invariant(j) => Some(*j),
                    _ => None,
                };
                if !self.cache.contains_key(&(a, exclude)) {
                    let entry = self.system(a, exclude, None)?;
                    self.cache.insert((a, exclude), entry);
                }
                &self.cache[&(a, exclude)]
            }
        };
        let mut form = Form::zero(self.structure.n, a - 1);
        for _ in 0..8 {
            let mut values = alloc::vec![int(0); params.count()];
            if sol.dim() > 0 {
                for _ in 0..3 {
                    let i = rng.gen_range(0..sol.dim());
                    let c = small_rational(rng);
                    for (j, v) in &sol.kernel[i] {
                        values[*j] += &c * v;
                    }
                }
            }
            form = instantiate_graded(alpha, params, &values);
            if !form.d().is_zero() {
                break;
            }
        }
        let witness = self
            .structure
            .sharp(&form.d(), 0)?
            .expect("sampled forms satisfy the membership equations");
        Ok(HamiltonianForm {
            form,
            a,
            k: self.structure.k,
            witness,
        })
    }
}

/// The properties checked by [`check_bracket_properties`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    Graded,
    SkewSymmetric,
    Local,
    Leibniz,
    SymmetryInvariant,
    Jacobi,
    JacobiLemma,
    Closure,
    HamiltonianVectorFields,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Graded,
        Property::SkewSymmetric,
        Property::Local,
        Property::Leibniz,
        Property::SymmetryInvariant,
        Property::Jacobi,
        Property::JacobiLemma,
        Property::Closure,
        Property::HamiltonianVectorFields,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Graded => "graded",
            Property::SkewSymmetric => "skew-symmetric",
            Property::Local => "local",
            Property::Leibniz => "leibniz",
            Property::SymmetryInvariant => "symmetry-invariant",
            Property::Jacobi => "jacobi-up-to-exact",
            Property::JacobiLemma => "jacobi-lemma",
            Property::Closure => "closure",
            Property::HamiltonianVectorFields => "hamiltonian-vector-fields",
        }
    }
}

/// Inputs and the nonzero difference of the two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyFailure {
    pub inputs: Vec<Form>,
    pub defect: Form,
    pub point: Option<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub property: Property,
    /// Number of non-vacuous instances tested.
    pub instances: usize,
    pub verdict: Verdict<PropertyFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub outcomes: Vec<PropertyOutcome>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.verdict.is_pass())
    }

    pub fn get(&self, p: Property) -> &PropertyOutcome {
        self.outcomes
            .iter()
            .find(|o| o.property == p)
            .expect("every property is reported")
    }
}

struct Tally {
    outcomes: BTreeMap<Property, (usize, Verdict<PropertyFailure>)>,
}

impl Tally {
    fn record(&mut self, p: Property, inputs: &[&Form], defect: Form, point: Option<Vec<Scalar>>) {
        let entry = self.outcomes.entry(p).or_insert((0, Verdict::Pass));
        entry.0 += 1;
        if entry.1.is_pass() && (!defect.is_zero() || point.is_some()) {
            entry.1 = Verdict::Fail(PropertyFailure {
                inputs: inputs.iter().map(|f| (*f).clone()).collect(),
                defect,
                point,
            });
        }
    }
}

fn ordered_triples(k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=k {
        for b in 1..=k {
            for c in 1..=k {
                if a + b > k && b + c > k && c + a > k && a + b + c > 2 * k {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// `(−1)^{deg α deg γ}{{α,β},γ} + cyclic`.
pub fn jacobi_sum(
    s: &GradedPoissonStructure,
    alpha: &HamiltonianForm,
    beta: &HamiltonianForm,
    gamma: &HamiltonianForm,
) -> Result<Form> {
    let term = |x: &HamiltonianForm, y: &HamiltonianForm, z: &HamiltonianForm| -> Result<Form> {
        let inner = s.bracket(x, y)?;
        Ok(signed(s.bracket(&inner, z)?.form, x.deg() * z.deg()))
    };
    term(alpha, beta, gamma)?
        .checked_add(&term(beta, gamma, alpha)?)?
        .checked_add(&term(gamma, alpha, beta)?)
}

/// Left side minus right side of the cyclic contraction identity behind the
/// Jacobi property.
pub fn jacobi_lemma_defect(
    alpha: &HamiltonianForm,
    beta: &HamiltonianForm,
    gamma: &HamiltonianForm,
) -> Result<Form> {
    let t = |x: &HamiltonianForm, y: &HamiltonianForm, z: &HamiltonianForm| -> Result<Form> {
        // (−1)^{(deg z − 1) deg x} ι_{♯dz} d ι_{♯dy} dx
        let inner = interior(&y.witness, &x.form.d())?.d();
        Ok(signed(
            interior(&z.witness, &inner)?,
            (z.deg() + 1) * x.deg(),
        ))
    };
    let lhs = t(alpha, beta, gamma)?
        .checked_add(&t(beta, gamma, alpha)?)?
        .checked_add(&t(gamma, alpha, beta)?)?;
    let dg = interior(&beta.witness, &gamma.form.d())?;
    let rhs_degree = (dg.degree() + 1).checked_sub(alpha.witness.degree());
    let rhs = if alpha.witness.degree() <= dg.degree() {
        signed(
            interior(&alpha.witness, &dg)?.d(),
            (alpha.deg() + gamma.deg()) * (beta.deg() + 1),
        )
    } else {
        Form::zero(alpha.form.dim(), rhs_degree.unwrap_or(0))
    };
    lhs.checked_sub(&rhs)
}

/// Random instances of the bracket properties on a constant structure.
///
/// Leibniz inputs are forms in the first `k` coordinates; instances where
/// `β∧dγ` is not Hamiltonian are skipped. Leibniz and symmetry invariance need
/// `k >= 2` and are vacuous (zero instances) otherwise.
pub fn check_bracket_properties<R: Rng + ?Sized>(
    s: &GradedPoissonStructure,
    rng: &mut R,
    cases: usize,
    coeff_degree: u32,
) -> Result<PropertyReport> {
    let (n, k) = (s.n, s.k);
    let mut sampler = HamiltonianSampler::new(s, coeff_degree)?;
    let chart = Chart::standard(n)?;
    let mut tally = Tally {
        outcomes: BTreeMap::new(),
    };
    let triples = ordered_triples(k);
    for _ in 0..cases {
        // pairs: graded, skew, closure
        let a = rng.gen_range(1..=k);
        let b = rng.gen_range((k + 1 - a)..=k);
        let alpha = sampler.sample(rng, a, &Constraint::None)?;
        let beta = sampler.sample(rng, b, &Constraint::None)?;
        let ab = s.bracket(&alpha, &beta)?;
        let ba = s.bracket(&beta, &alpha)?;
        let graded_ok = ab.form.degree() + k + 1 == a + b && ab.deg() == alpha.deg() + beta.deg();
        tally.record(
            Property::Graded,
            &[&alpha.form, &beta.form],
            if graded_ok {
                Form::zero(n, 0)
            } else {
                ab.form.clone()
            },
            None,
        );
        let skew = ab
            .form
            .checked_add(&signed(ba.form.clone(), alpha.deg() * beta.deg()))?;
        tally.record(
            Property::SkewSymmetric,
            &[&alpha.form, &beta.form],
            skew,
            None,
        );
        let fresh = s.is_hamiltonian(&ab.form, 0)?.into_form();
        let closure_point = match &fresh {
            Some(h) => s
                .same_modulo_kernel(&h.witness, &ab.witness)?
                .witness()
                .cloned(),
            None => Some(Vec::new()),
        };
        let closure_point = closure_point.or(s.certify(&ab)?.witness().cloned());
        tally.record(
            Property::Closure,
            &[&alpha.form, &beta.form],
            Form::zero(n, 0),
            closure_point,
        );

        // Hamiltonian vector fields: [X_α, X_β] = −X_{α,β} and {f, α} = X_α(f)
        let x_a = sampler.sample(rng, k, &Constraint::None)?;
        let x_b = sampler.sample(rng, k, &Constraint::None)?;
        let br = s.bracket(&x_a, &x_b)?;
        let xab = s
            .is_hamiltonian(&br.form, 0)?
            .into_form()
            .ok_or_else(|| Error::NotHamiltonian(String::from("bracket of Hamiltonian forms")))?;
        let lie = schouten_nijenhuis(
            &s.hamiltonian_vector_field(&x_a)?,
            &s.hamiltonian_vector_field(&x_b)?,
        )?;
        let anti = lie.checked_add(&s.hamiltonian_vector_field(&xab)?)?;
        let f = sampler.sample(rng, 1, &Constraint::None)?;
        let fx = s.bracket(&f, &x_a)?.form;
        let derivation =
            fx.coefficient(Blade::EMPTY) - x_a.witness.apply(&f.form.coefficient(Blade::EMPTY))?;
        let anti_point = if anti.is_zero() {
            None
        } else {
            Some(nonzero_point(
                &anti
                    .coefficients()
                    .into_iter()
                    .find(|c| !c.is_zero())
                    .unwrap(),
                n,
            ))
        };
        tally.record(
            Property::HamiltonianVectorFields,
            &[&x_a.form, &x_b.form, &f.form],
            Form::function(n, derivation),
            anti_point,
        );

        // locality at a constructed zero of dα
        let x0: Vec<Scalar> = crate::random::sample_point(rng, n);
        let a = rng.gen_range(1..=k);
        let b = rng.gen_range((k + 1 - a)..=k);
        let alpha = sampler.sample(rng, a, &Constraint::VanishAt(x0.clone()))?;
        let beta = sampler.sample(rng, b, &Constraint::None)?;
        let value = s.bracket(&alpha, &beta)?.form.evaluate_at(&x0)?;
        tally.record(Property::Local, &[&alpha.form, &beta.form], value, None);

        if k >= 2 {
            // Leibniz for a = k
            let alpha = sampler.sample(rng, k, &Constraint::None)?;
            let b = rng.gen_range(1..k);
            let c = rng.gen_range(1..=(k - b));
            let base: Vec<usize> = (0..k).collect();
            let beta = base_form(rng, n, &base, b - 1, coeff_degree + 1);
            let gamma = base_form(rng, n, &base, c - 1, coeff_degree + 1);
            let bg = beta.wedge(&gamma.d())?;
            if let Hamiltonicity::Hamiltonian(_) = s.is_hamiltonian(&bg, 0)? {
                let lhs = s.bracket_raw(&bg, &alpha)?;
                let rhs = s
                    .bracket_raw(&beta, &alpha)?
                    .wedge(&gamma.d())?
                    .checked_add(&signed(beta.d().wedge(&s.bracket_raw(&gamma, &alpha)?)?, b))?;
                tally.record(
                    Property::Leibniz,
                    &[&beta, &gamma, &alpha.form],
                    lhs.checked_sub(&rhs)?,
                    None,
                );
            }

            // invariance under a coordinate symmetry
            let a = rng.gen_range(2..=k);
            let j = rng.gen_range(0..n);
            let alpha = sampler.sample(rng, a, &Constraint::Invariant(j))?;
            let x = MultiVector::partial(n, j);
            let lie = lie_derivative(&x, &alpha.form)?;
            let contracted = interior(&x, &alpha.form)?;
            let b = rng.gen_range((k + 2 - a)..=k);
            let beta = sampler.sample(rng, b, &Constraint::None)?;
            let defect = match s.is_hamiltonian(&contracted, 0)? {
                Hamiltonicity::Hamiltonian(h) if lie.is_zero() => {
                    let lhs = s.bracket(&h, &beta)?.form;
                    let rhs = signed(interior(&x, &s.bracket(&alpha, &beta)?.form)?, beta.deg());
                    lhs.checked_sub(&rhs)?
                }
                _ => contracted.clone(),
            };
            tally.record(
                Property::SymmetryInvariant,
                &[&alpha.form, &beta.form],
                defect,
                None,
            );
        }

        // Jacobi up to an exact form, and the contraction identity
        let (a, b, c) = triples[rng.gen_range(0..triples.len())];
        let alpha = sampler.sample(rng, a, &Constraint::None)?;
        let beta = sampler.sample(rng, b, &Constraint::None)?;
        let gamma = sampler.sample(rng, c, &Constraint::None)?;
        let sum = jacobi_sum(s, &alpha, &beta, &gamma)?;
        let certified = sum.is_zero() || sum.exact_primitive(&chart)?.is_some();
        tally.record(
            Property::Jacobi,
            &[&alpha.form, &beta.form, &gamma.form],
            if certified { Form::zero(n, 0) } else { sum },
            None,
        );
        let lemma = jacobi_lemma_defect(&alpha, &beta, &gamma)?;
        tally.record(
            Property::JacobiLemma,
            &[&alpha.form, &beta.form, &gamma.form],
            lemma,
            None,
        );
    }
    let outcomes = Property::ALL
        .iter()
        .map(|&p| {
            let (instances, verdict) = tally.outcomes.remove(&p).unwrap_or((0, Verdict::Pass));
            PropertyOutcome {
                property: p,
                instances,
                verdict,
            }
        })
        .collect();
    Ok(PropertyReport { outcomes })
}

/// Random form of degree `deg` using only the coordinates in `base`.
fn base_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    base: &[usize],
    deg: usize,
    coeff_degree: u32,
) -> Form {
    let vars: Vec<u16> = base.iter().map(|&i| i as u16).collect();
    let monos = Monomial::all_up_to(&vars, coeff_degree);
    let blades: Vec<Blade> = Blade::all_of_degree(base.len(), deg)
        .into_iter()
        .map(|b| Blade::from_indices(&b.indices().into_iter().map(|i| base[i]).collect::<Vec<_>>()))
        .collect();
    let mut out = Form::zero(n, deg);
    for _ in 0..3 {
        let b = blades[rng.gen_range(0..blades.len())];
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let t =
            Form::term(n, b, Polynomial::monomial(m, small_rational(rng))).expect("blade in range");
        out = &out + &t;
    }
    out
}
