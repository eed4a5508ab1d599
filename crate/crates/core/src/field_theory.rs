//! Currents on the canonical multi-cotangent chart `(x^μ, y^i, p^μ_i, p)`.
//!
//! Coordinates are laid out as `x^μ` at `μ`, `y^i` at `n + i`, `p^μ_i` at
//! `n + m + μ·m + i` and `p` last. The quotient chart drops `p`, so a form on
//! the quotient is a form on the first `N − 1` variables. `d^{n−1}x_μ` is
//! `ι_{∂_μ} dⁿx`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::exterior::{interior, Chart, Form, MultiVector, PARAM_BASE};
use crate::linalg::ConstantSolver;
use crate::poly::{Monomial, Polynomial, Scalar};
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldChart {
    pub n: usize,
    pub m: usize,
}

impl FieldChart {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::PreconditionFailure(format!(
                "base and fiber dimensions must be positive, got n = {n}, m = {m}"
            )));
        }
        let chart = FieldChart { n, m };
        if chart.dim() > 32 {
            return Err(Error::DimensionTooLarge(chart.dim()));
        }
        Ok(chart)
    }

    pub fn dim(&self) -> usize {
        self.n + self.m + self.n * self.m + 1
    }

    pub fn quotient_dim(&self) -> usize {
        self.dim() - 1
    }

    pub fn x(&self, mu: usize) -> usize {
        mu
    }

    pub fn y(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn pm(&self, mu: usize, i: usize) -> usize {
        self.n + self.m + mu * self.m + i
    }

    pub fn p(&self) -> usize {
        self.dim() - 1
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.n).map(|mu| format!("x{mu}")).collect();
        out.extend((1..=self.m).map(|i| format!("y{i}")));
        for mu in 1..=self.n {
            out.extend((1..=self.m).map(|i| format!("p{mu}_{i}")));
        }
        out.push(String::from("p"));
        out
    }

    fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(i as u16)
    }

    /// `dⁿx` on a chart of dimension `dim` whose first `n` coordinates are the `x^μ`.
    pub fn volume_in(&self, dim: usize) -> Form {
        let idx: Vec<usize> = (0..self.n).collect();
        Form::basis(dim, &idx).expect("base coordinates lie in the chart")
    }

    /// `d^{n−1}x_μ` on a chart of dimension `dim`.
    pub fn hyper_in(&self, mu: usize, dim: usize) -> Form {
        interior(&MultiVector::partial(dim, mu), &self.volume_in(dim)).expect("degrees match")
    }

    pub fn canonical_omega(&self) -> Form {
        let dim = self.dim();
        let d = |i: usize| Form::basis(dim, &[i]).expect("in range");
        let mut omega = d(self.p()).wedge(&self.volume_in(dim)).expect("same chart");
        for mu in 0..self.n {
            let hyper = self.hyper_in(mu, dim);
            for i in 0..self.m {
                let two = d(self.pm(mu, i)).wedge(&d(self.y(i))).expect("same chart");
                omega = &omega + &two.wedge(&hyper).expect("same chart");
            }
        }
        omega
    }

    /// Columns `ι_{∂_j}Ω` of the contraction matrix of the canonical form.
    pub fn omega_solver(&self) -> ConstantSolver {
        let dim = self.dim();
        let omega = self.canonical_omega();
        let columns: Vec<Vec<Scalar>> = (0..dim)
            .map(|j| {
                interior(&MultiVector::partial(dim, j), &omega)
                    .and_then(|f| f.to_vector())
                    .expect("constant form")
            })
            .collect();
        ConstantSolver::new(crate::blade::binomial(dim, self.n), &columns)
    }

    /// `τ*α` for a form on the quotient chart.
    pub fn lift(&self, alpha: &Form) -> Result<Form> {
        let images: Vec<Polynomial> = (0..self.quotient_dim()).map(|i| self.var(i)).collect();
        alpha.pullback(&images, self.dim())
    }

    /// Inverse of [`FieldChart::lift`]: the form must have no `dp` leg and
    /// coefficients independent of `p`.
    pub fn descend(&self, form: &Form) -> Result<Form> {
        if form.dim() != self.dim() {
            return Err(Error::ChartMismatch {
                left: form.dim(),
                right: self.dim(),
            });
        }
        let p = self.p();
        let mut out = Form::zero(self.quotient_dim(), form.degree());
        for (b, f) in form.terms() {
            if b.contains(p) {
                return Err(Error::DescentFailure(format!("dp component {}", f)));
            }
            if f.depends_on(p as u16) {
                return Err(Error::DescentFailure(format!(
                    "coefficient {} depends on p",
                    f
                )));
            }
            out = &out + &Form::term(self.quotient_dim(), *b, f.clone())?;
        }
        Ok(out)
    }

    /// Coefficient `f` when `η = f dⁿx`, `None` if `η` has another component.
    pub fn semi_basic_coefficient(&self, eta: &Form) -> Option<Polynomial> {
        if eta.degree() != self.n {
            return None;
        }
        let vol = Blade::full(self.n);
        eta.terms()
            .all(|(b, _)| *b == vol)
            .then(|| eta.coefficient(vol))
    }

    /// Whether a semi-basic `f dⁿx` has `f` independent of `p`.
    pub fn is_basic(&self, eta: &Form) -> bool {
        self.semi_basic_coefficient(eta)
            .is_some_and(|f| !f.depends_on(self.p() as u16))
    }

    fn only_vars_below(&self, f: &Polynomial, bound: usize) -> bool {
        f.terms().all(|(mono, _)| {
            mono.pairs()
                .iter()
                .all(|&(v, _)| (v as usize) < bound || v >= PARAM_BASE)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSection {
    pub h: Polynomial,
}

impl HamiltonianSection {
    pub fn new(chart: &FieldChart, h: Polynomial) -> Result<Self> {
        if !chart.only_vars_below(&h, chart.quotient_dim()) {
            return Err(Error::PreconditionFailure(format!(
                "Hamiltonian {} must depend only on (x, y, p^μ_i)",
                h
            )));
        }
        Ok(HamiltonianSection { h })
    }

    /// `h̃ = (p + H) dⁿx`.
    pub fn h_tilde(&self, chart: &FieldChart) -> Form {
        let f = &chart.var(chart.p()) + &self.h;
        chart.volume_in(chart.dim()).mul_poly(&f)
    }

    /// Images of the full coordinates under `h`: identity and `p ↦ −H`.
    fn images(&self, chart: &FieldChart) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = (0..chart.quotient_dim()).map(|i| chart.var(i)).collect();
        out.push(-&self.h);
        out
    }
}

/// Coefficients of a restricted observable `(A^i p^μ_i + B^μ) d^{n−1}x_μ`
/// with `A`, `B` functions of `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restricted {
    pub a: Vec<Polynomial>,
    pub b: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    /// `(n−1)`-form on the quotient chart.
    pub form: Form,
    pub lifted: Form,
    /// `X_α` with `ι_{X_α}Ω = dα̃`, on the full chart.
    pub field: MultiVector,
    pub restricted: Option<Restricted>,
}

impl Observable {
    /// Solves `ι_XΩ = d(τ*α)`.
    pub fn new(chart: &FieldChart, alpha: &Form) -> Result<Self> {
        Self::with_solver(chart, &chart.omega_solver(), alpha)
    }

    pub fn with_solver(chart: &FieldChart, solver: &ConstantSolver, alpha: &Form) -> Result<Self> {
        if alpha.dim() != chart.quotient_dim() {
            return Err(Error::ChartMismatch {
                left: alpha.dim(),
                right: chart.quotient_dim(),
            });
        }
        if alpha.degree() + 1 != chart.n {
            return Err(Error::DegreeOutOfRange {
                degree: alpha.degree(),
                max: chart.n - 1,
                context: "observables are (n-1)-forms",
            });
        }
        let lifted = chart.lift(alpha)?;
        let rhs = lifted.d().coefficients();
        let comps = solver
            .solve_poly(&rhs)
            .ok_or_else(|| Error::NotHamiltonian(format!("{}", alpha.render(&chart.names()))))?;
        Ok(Observable {
            form: alpha.clone(),
            lifted,
            field: MultiVector::from_components(&comps),
            restricted: None,
        })
    }

    /// Restricted class with the closed-form field.
    pub fn restricted(chart: &FieldChart, a: Vec<Polynomial>, b: Vec<Polynomial>) -> Result<Self> {
        if a.len() != chart.m || b.len() != chart.n {
            return Err(Error::PreconditionFailure(format!(
                "expected {} A-coefficients and {} B-coefficients",
                chart.m, chart.n
            )));
        }
        let base = chart.n + chart.m;
        if let Some(bad) = a.iter().chain(&b).find(|f| !chart.only_vars_below(f, base)) {
            return Err(Error::PreconditionFailure(format!(
                "coefficient {} must depend only on (x, y)",
                bad
            )));
        }
        let q = chart.quotient_dim();
        let mut form = Form::zero(q, chart.n - 1);
        for mu in 0..chart.n {
            let mut coeff = b[mu].clone();
            for (i, ai) in a.iter().enumerate() {
                coeff += &(ai * &chart.var(chart.pm(mu, i)));
            }
            form = &form + &chart.hyper_in(mu, q).mul_poly(&coeff);
        }
        let lifted = chart.lift(&form)?;
        let field = restricted_field(chart, &a, &b);
        Ok(Observable {
            form,
            lifted,
            field,
            restricted: Some(Restricted { a, b }),
        })
    }

    /// Components `(A, B^μ_i, C^i)` of `X_α` along `∂_p`, `∂_{p^μ_i}`, `∂_{y^i}`.
    pub fn components(
        &self,
        chart: &FieldChart,
    ) -> (Polynomial, Vec<Vec<Polynomial>>, Vec<Polynomial>) {
        let c = self.field.components();
        let b = (0..chart.n)
            .map(|mu| (0..chart.m).map(|i| c[chart.pm(mu, i)].clone()).collect())
            .collect();
        let y = (0..chart.m).map(|i| c[chart.y(i)].clone()).collect();
        (c[chart.p()].clone(), b, y)
    }
}

/// `X_α = (∂_μA^i p^μ_i + ∂_μB^μ)∂_p + (∂_{y^j}A^i p^μ_i + ∂_{y^j}B^μ)∂_{p^μ_j} − A^i ∂_{y^i}`.
pub fn restricted_field(chart: &FieldChart, a: &[Polynomial], b: &[Polynomial]) -> MultiVector {
    let dim = chart.dim();
    let mut comps = alloc::vec![Polynomial::zero(); dim];
    let xv = |mu: usize| chart.x(mu) as u16;
    for mu in 0..chart.n {
        comps[chart.p()] += &b[mu].derivative(xv(mu));
        for (i, ai) in a.iter().enumerate() {
            comps[chart.p()] += &(&ai.derivative(xv(mu)) * &chart.var(chart.pm(mu, i)));
        }
        for j in 0..chart.m {
            let yj = chart.y(j) as u16;
            let mut c = b[mu].derivative(yj);
            for (i, ai) in a.iter().enumerate() {
                c += &(&ai.derivative(yj) * &chart.var(chart.pm(mu, i)));
            }
            comps[chart.pm(mu, j)] = c;
        }
    }
    for (i, ai) in a.iter().enumerate() {
        comps[chart.y(i)] = -ai;
    }
    MultiVector::from_components(&comps)
}

/// `{α, η} = ι_{X_α} dη` for `η = f dⁿx`.
pub fn current_bracket_eta(chart: &FieldChart, alpha: &Observable, eta: &Form) -> Result<Form> {
    if eta.dim() != chart.dim() {
        return Err(Error::ChartMismatch {
            left: eta.dim(),
            right: chart.dim(),
        });
    }
    if chart.semi_basic_coefficient(eta).is_none() {
        return Err(Error::PreconditionFailure(String::from(
            "η must be a multiple of dⁿx",
        )));
    }
    interior(&alpha.field, &eta.d())
}

/// `{α, h} = ι_{X_α} dh̃`.
pub fn current_bracket_h(
    chart: &FieldChart,
    alpha: &Observable,
    h: &HamiltonianSection,
) -> Result<Form> {
    current_bracket_eta(chart, alpha, &h.h_tilde(chart))
}

/// The local expression `(∂_μA^i p^μ_i + ∂H/∂p^μ_j(∂_{y^j}A^i p^μ_i + ∂_{y^j}B^μ) − ∂H/∂y^i A^i) dⁿx`
/// exactly as displayed, without the divergence of `B`.
pub fn displayed_bracket_h(chart: &FieldChart, r: &Restricted, h: &HamiltonianSection) -> Form {
    let mut f = Polynomial::zero();
    for mu in 0..chart.n {
        let xv = chart.x(mu) as u16;
        for (i, ai) in r.a.iter().enumerate() {
            f += &(&ai.derivative(xv) * &chart.var(chart.pm(mu, i)));
        }
        for j in 0..chart.m {
            let yj = chart.y(j) as u16;
            let mut inner = r.b[mu].derivative(yj);
            for (i, ai) in r.a.iter().enumerate() {
                inner += &(&ai.derivative(yj) * &chart.var(chart.pm(mu, i)));
            }
            f += &(&h.h.derivative(chart.pm(mu, j) as u16) * &inner);
        }
    }
    for (i, ai) in r.a.iter().enumerate() {
        f -= &(&h.h.derivative(chart.y(i) as u16) * ai);
    }
    chart.volume_in(chart.dim()).mul_poly(&f)
}

/// `∂_μB^μ dⁿx`, the term separating [`displayed_bracket_h`] from [`current_bracket_h`].
pub fn divergence_term(chart: &FieldChart, r: &Restricted) -> Form {
    let mut f = Polynomial::zero();
    for (mu, bm) in r.b.iter().enumerate() {
        f += &bm.derivative(chart.x(mu) as u16);
    }
    chart.volume_in(chart.dim()).mul_poly(&f)
}

/// `⟦α, β⟧`: the bracket `ι_{X_β} dα̃` of the lifts, descended to the quotient.
pub fn observable_bracket(
    chart: &FieldChart,
    alpha: &Observable,
    beta: &Observable,
) -> Result<Observable> {
    let lifted = interior(&beta.field, &alpha.lifted.d())?;
    let form = chart.descend(&lifted)?;
    Observable::new(chart, &form)
}

/// Defect `{⟦α,β⟧, η} + {α,{β,η}} − {β,{α,η}}`.
pub fn antirep_check(
    chart: &FieldChart,
    alpha: &Observable,
    beta: &Observable,
    eta: &Form,
) -> Result<Verdict<Form>> {
    let ab = observable_bracket(chart, alpha, beta)?;
    let lhs = current_bracket_eta(chart, &ab, eta)?;
    let b_eta = current_bracket_eta(chart, beta, eta)?;
    let a_eta = current_bracket_eta(chart, alpha, eta)?;
    let rhs =
        &current_bracket_eta(chart, beta, &a_eta)? - &current_bracket_eta(chart, alpha, &b_eta)?;
    let defect = &lhs - &rhs;
    Ok(if defect.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(defect)
    })
}

/// Cyclic sum `⟦α,⟦β,γ⟧⟧ + ⟦β,⟦γ,α⟧⟧ + ⟦γ,⟦α,β⟧⟧` on the quotient.
pub fn observable_jacobi_defect(
    chart: &FieldChart,
    alpha: &Observable,
    beta: &Observable,
    gamma: &Observable,
) -> Result<Form> {
    let br = |u: &Observable, v: &Observable| observable_bracket(chart, u, v);
    let t1 = br(alpha, &br(beta, gamma)?)?;
    let t2 = br(beta, &br(gamma, alpha)?)?;
    let t3 = br(gamma, &br(alpha, beta)?)?;
    Ok(&(&t1.form + &t2.form) + &t3.form)
}

/// Whether a form on the quotient chart is exact.
pub fn is_exact_on_quotient(chart: &FieldChart, form: &Form) -> Result<bool> {
    form.is_exact(&Chart::standard(chart.quotient_dim())?)
}

/// A section `x ↦ (x, ψ^i(x), ψ^μ_i(x))`; components are polynomials in the
/// base variables `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSolution {
    pub psi: Vec<Polynomial>,
    /// `psi_p[μ][i] = ψ^μ_i`.
    pub psi_p: Vec<Vec<Polynomial>>,
}

impl CandidateSolution {
    pub fn new(
        chart: &FieldChart,
        psi: Vec<Polynomial>,
        psi_p: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        if psi.len() != chart.m
            || psi_p.len() != chart.n
            || psi_p.iter().any(|r| r.len() != chart.m)
        {
            return Err(Error::PreconditionFailure(format!(
                "a section needs {} fiber and {}x{} momentum components",
                chart.m, chart.n, chart.m
            )));
        }
        if let Some(bad) = psi
            .iter()
            .chain(psi_p.iter().flatten())
            .find(|f| !chart.only_vars_below(f, chart.n))
        {
            return Err(Error::PreconditionFailure(format!(
                "component {} must depend only on x",
                bad
            )));
        }
        Ok(CandidateSolution { psi, psi_p })
    }

    /// Images of the quotient coordinates.
    pub fn images(&self, chart: &FieldChart) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = (0..chart.n).map(|mu| chart.var(mu)).collect();
        out.extend(self.psi.iter().cloned());
        for row in &self.psi_p {
            out.extend(row.iter().cloned());
        }
        out
    }

    /// Images of the full coordinates under `h∘ψ`.
    pub fn images_with(&self, chart: &FieldChart, h: &HamiltonianSection) -> Vec<Polynomial> {
        let mut out = self.images(chart);
        out.push(-compose(&h.h, &out));
        out
    }
}

fn compose(f: &Polynomial, images: &[Polynomial]) -> Polynomial {
    let subst: Vec<Option<Polynomial>> = images.iter().cloned().map(Some).collect();
    f.substitute(&subst)
}

fn top_coefficient(form: &Form, n: usize) -> Polynomial {
    form.coefficient(Blade::full(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HdwResiduals {
    /// `first[μ][i] = ∂_μψ^i − ∂H/∂p^μ_i ∘ ψ`.
    pub first: Vec<Vec<Polynomial>>,
    /// `second[i] = Σ_μ ∂_μψ^μ_i + ∂H/∂y^i ∘ ψ`.
    pub second: Vec<Polynomial>,
}

impl HdwResiduals {
    pub fn is_solution(&self) -> bool {
        self.all().iter().all(|r| r.is_zero())
    }

    pub fn all(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = self.first.iter().flatten().cloned().collect();
        out.extend(self.second.iter().cloned());
        out
    }
}

pub fn hdw_residual(
    chart: &FieldChart,
    psi: &CandidateSolution,
    h: &HamiltonianSection,
) -> HdwResiduals {
    let images = psi.images(chart);
    let first = (0..chart.n)
        .map(|mu| {
            (0..chart.m)
                .map(|i| {
                    let dh = compose(&h.h.derivative(chart.pm(mu, i) as u16), &images);
                    &psi.psi[i].derivative(chart.x(mu) as u16) - &dh
                })
                .collect()
        })
        .collect();
    let second = (0..chart.m)
        .map(|i| {
            let mut r = compose(&h.h.derivative(chart.y(i) as u16), &images);
            for mu in 0..chart.n {
                r += &psi.psi_p[mu][i].derivative(chart.x(mu) as u16);
            }
            r
        })
        .collect();
    HdwResiduals { first, second }
}

/// `ψ* ι_{∂_j} Ω_h` as the coefficient of `dⁿx`, for a quotient coordinate `j`.
pub fn intrinsic_residual(
    chart: &FieldChart,
    psi: &CandidateSolution,
    h: &HamiltonianSection,
    j: usize,
) -> Result<Polynomial> {
    let q = chart.quotient_dim();
    if j >= q {
        return Err(Error::VariableRange { index: j });
    }
    let omega_h = chart.canonical_omega().pullback(&h.images(chart), q)?;
    let contracted = interior(&MultiVector::partial(q, j), &omega_h)?;
    let pulled = contracted.pullback(&psi.images(chart), chart.n)?;
    Ok(top_coefficient(&pulled, chart.n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationReport {
    /// `ψ*(dα) − (h∘ψ)*{α,h}` as the coefficient of `dⁿx`.
    pub defect: Polynomial,
    /// `Σ B^μ_i(ψ) r1_{μi} − Σ C^i(ψ) r2_i`.
    pub residual_combination: Polynomial,
    /// `ψ*(dα)`.
    pub divergence: Polynomial,
    pub residuals: HdwResiduals,
}

impl ConservationReport {
    pub fn verdict(&self) -> Verdict<Polynomial> {
        if self.defect.is_zero() {
            Verdict::Pass
        } else {
            Verdict::Fail(self.defect.clone())
        }
    }

    pub fn factors_through_residuals(&self) -> bool {
        self.defect == self.residual_combination
    }
}

pub fn conservation_check(
    chart: &FieldChart,
    psi: &CandidateSolution,
    alpha: &Observable,
    h: &HamiltonianSection,
) -> Result<ConservationReport> {
    let images = psi.images(chart);
    let full = psi.images_with(chart, h);
    let divergence = top_coefficient(&alpha.form.d().pullback(&images, chart.n)?, chart.n);
    let bracket = current_bracket_h(chart, alpha, h)?;
    let evolved = top_coefficient(&bracket.pullback(&full, chart.n)?, chart.n);
    let residuals = hdw_residual(chart, psi, h);
    let (_, b, c) = alpha.components(chart);
    let mut combination = Polynomial::zero();
    for mu in 0..chart.n {
        for i in 0..chart.m {
            combination += &(&compose(&b[mu][i], &full) * &residuals.first[mu][i]);
        }
    }
    for i in 0..chart.m {
        combination -= &(&compose(&c[i], &full) * &residuals.second[i]);
    }
    Ok(ConservationReport {
        defect: &divergence - &evolved,
        residual_combination: combination,
        divergence,
        residuals,
    })
}

fn antiderivative(f: &Polynomial, v: u16) -> Polynomial {
    Polynomial::from_terms(f.terms().map(|(mono, c)| {
        let e = mono.exponent(v) as i64;
        (
            mono.mul(&Monomial::var(v)),
            c / Scalar::from_integer((e + 1).into()),
        )
    }))
}

/// Momentum-linear Hamiltonian `H = Σ ∂_μφ^i p^μ_i + Σ g_i y^i` together with
/// its solution `ψ^i = φ^i`, `ψ^1_i = −∫ g_i dx^1`, other momenta zero.
/// `φ` and `g` are polynomials in the base variables.
pub fn momentum_linear_solution(
    chart: &FieldChart,
    phi: &[Polynomial],
    g: &[Polynomial],
) -> Result<(HamiltonianSection, CandidateSolution)> {
    if phi.len() != chart.m || g.len() != chart.m {
        return Err(Error::PreconditionFailure(format!(
            "expected {} functions φ and g",
            chart.m
        )));
    }
    let mut h = Polynomial::zero();
    for (i, (ph, gi)) in phi.iter().zip(g).enumerate() {
        for mu in 0..chart.n {
            h += &(&ph.derivative(chart.x(mu) as u16) * &chart.var(chart.pm(mu, i)));
        }
        h += &(gi * &chart.var(chart.y(i)));
    }
    let mut psi_p = alloc::vec![alloc::vec![Polynomial::zero(); chart.m]; chart.n];
    for (i, gi) in g.iter().enumerate() {
        psi_p[0][i] = -antiderivative(gi, chart.x(0) as u16);
    }
    let section = HamiltonianSection::new(chart, h)?;
    let psi = CandidateSolution::new(chart, phi.to_vec(), psi_p)?;
    Ok((section, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::Params;
    use crate::poly::{int, ratio};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(i: usize) -> Polynomial {
        Polynomial::var(i as u16)
    }

    #[test]
    fn omega_for_n1_m1() {
        let c = FieldChart::new(1, 1).unwrap();
        // (x, y, p1_1, p)
        let d = |i| Form::basis(4, &[i]).unwrap();
        let expected = &d(3).wedge(&d(0)).unwrap() + &d(2).wedge(&d(1)).unwrap();
        assert_eq!(c.canonical_omega(), expected);
        assert!(c.canonical_omega().d().is_zero());
    }

    #[test]
    fn omega_is_nondegenerate() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            let c = FieldChart::new(n, m).unwrap();
            assert_eq!(c.omega_solver().rank(), c.dim());
        }
    }

    #[test]
    fn restricted_field_agrees_with_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            let c = FieldChart::new(n, m).unwrap();
            let base = n + m;
            for _ in 0..4 {
                let a: Vec<_> = (0..m)
                    .map(|_| random::polynomial(&mut rng, base, 2, 3))
                    .collect();
                let b: Vec<_> = (0..n)
                    .map(|_| random::polynomial(&mut rng, base, 2, 3))
                    .collect();
                let fast = Observable::restricted(&c, a, b).unwrap();
                let slow = Observable::new(&c, &fast.form).unwrap();
                assert_eq!(fast.field, slow.field);
                assert_eq!(
                    fast.field.components()[..n]
                        .iter()
                        .filter(|f| !f.is_zero())
                        .count(),
                    0
                );
            }
        }
    }

    #[test]
    fn constant_b_has_zero_field() {
        let c = FieldChart::new(2, 1).unwrap();
        let obs = Observable::restricted(
            &c,
            vec![Polynomial::zero()],
            vec![Polynomial::from_int(3), Polynomial::from_int(-1)],
        )
        .unwrap();
        assert!(obs.field.is_zero());
    }

    #[test]
    fn single_fiber_coordinate() {
        // α = y¹ d^{n−1}x₁: X = ∂_{p¹₁}
        let c = FieldChart::new(2, 1).unwrap();
        let alpha = c.hyper_in(0, c.quotient_dim()).mul_poly(&v(c.y(0)));
        let obs = Observable::new(&c, &alpha).unwrap();
        assert_eq!(obs.field, MultiVector::partial(c.dim(), c.pm(0, 0)));
    }

    #[test]
    fn quadratic_momenta_are_not_observables() {
        let c = FieldChart::new(2, 2).unwrap();
        let f = &v(c.pm(0, 0)) * &v(c.pm(0, 1));
        let alpha = c.hyper_in(0, c.quotient_dim()).mul_poly(&f);
        assert!(matches!(
            Observable::new(&c, &alpha),
            Err(Error::NotHamiltonian(_))
        ));
    }

    #[test]
    fn mechanics_evolution() {
        // n = 1: H = π²/2 + y³ on (x, y, π, p)
        let c = FieldChart::new(1, 1).unwrap();
        let pi = v(c.pm(0, 0));
        let y = v(c.y(0));
        let h = HamiltonianSection::new(&c, &(&pi * &pi).scale(&ratio(1, 2)) + &y.pow(3)).unwrap();
        let vol = c.volume_in(c.dim());
        let pos = Observable::restricted(&c, vec![Polynomial::zero()], vec![y.clone()]).unwrap();
        assert_eq!(current_bracket_h(&c, &pos, &h).unwrap(), vol.mul_poly(&pi));
        let mom =
            Observable::restricted(&c, vec![Polynomial::one()], vec![Polynomial::zero()]).unwrap();
        let force = (&y * &y).scale(&int(-3));
        assert_eq!(
            current_bracket_h(&c, &mom, &h).unwrap(),
            vol.mul_poly(&force)
        );
    }

    #[test]
    fn displayed_bracket_misses_divergence() {
        let c = FieldChart::new(2, 1).unwrap();
        let h = HamiltonianSection::new(&c, &v(c.pm(0, 0)) * &v(c.y(0))).unwrap();
        let r = Restricted {
            a: vec![v(c.x(1))],
            b: vec![v(c.x(0)), Polynomial::zero()],
        };
        let obs = Observable::restricted(&c, r.a.clone(), r.b.clone()).unwrap();
        let got = current_bracket_h(&c, &obs, &h).unwrap();
        let shown = displayed_bracket_h(&c, &r, &h);
        assert_eq!(&got - &shown, divergence_term(&c, &r));
        assert!(!divergence_term(&c, &r).is_zero());
    }

    #[test]
    fn zero_hamiltonian_constant_coefficients() {
        let c = FieldChart::new(2, 2).unwrap();
        let h = HamiltonianSection::new(&c, Polynomial::zero()).unwrap();
        let obs = Observable::restricted(
            &c,
            vec![Polynomial::from_int(2), Polynomial::from_int(1)],
            vec![Polynomial::from_int(5), Polynomial::zero()],
        )
        .unwrap();
        assert!(current_bracket_h(&c, &obs, &h).unwrap().is_zero());
    }

    #[test]
    fn eta_bracket_term_by_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = FieldChart::new(2, 1).unwrap();
        for _ in 0..6 {
            let a = vec![random::polynomial(&mut rng, 3, 2, 3)];
            let b: Vec<_> = (0..2)
                .map(|_| random::polynomial(&mut rng, 3, 2, 3))
                .collect();
            let obs = Observable::restricted(&c, a, b).unwrap();
            let f = random::polynomial(&mut rng, c.dim(), 2, 4);
            let eta = c.volume_in(c.dim()).mul_poly(&f);
            let (aa, bb, cc) = obs.components(&c);
            let mut oracle = &aa * &f.derivative(c.p() as u16);
            oracle += &(&cc[0] * &f.derivative(c.y(0) as u16));
            for mu in 0..2 {
                oracle += &(&bb[mu][0] * &f.derivative(c.pm(mu, 0) as u16));
            }
            assert_eq!(
                current_bracket_eta(&c, &obs, &eta).unwrap(),
                c.volume_in(c.dim()).mul_poly(&oracle)
            );
            assert!(current_bracket_eta(&c, &obs, &c.volume_in(c.dim()))
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn non_semi_basic_eta_is_rejected() {
        let c = FieldChart::new(1, 1).unwrap();
        let obs =
            Observable::restricted(&c, vec![Polynomial::one()], vec![Polynomial::zero()]).unwrap();
        let eta = Form::basis(c.dim(), &[c.y(0)]).unwrap();
        assert!(current_bracket_eta(&c, &obs, &eta).is_err());
    }

    #[test]
    fn restricted_pair_bracket_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = FieldChart::new(2, 2).unwrap();
        let q = c.quotient_dim();
        for _ in 0..4 {
            let mk = |rng: &mut ChaCha8Rng| {
                let a: Vec<_> = (0..2).map(|_| random::polynomial(rng, 4, 2, 2)).collect();
                let b: Vec<_> = (0..2).map(|_| random::polynomial(rng, 4, 2, 2)).collect();
                Observable::restricted(&c, a, b).unwrap()
            };
            let alpha = mk(&mut rng);
            let beta = mk(&mut rng);
            let got = observable_bracket(&c, &alpha, &beta).unwrap();
            let (_, b1, c1) = alpha.components(&c);
            let (_, b2, c2) = beta.components(&c);
            let mut expected = Form::zero(q, 1);
            for mu in 0..2 {
                let mut f = Polynomial::zero();
                for i in 0..2 {
                    f += &(&b1[mu][i] * &c2[i]);
                    f -= &(&c1[i] * &b2[mu][i]);
                }
                let f = c
                    .descend(&Form::function(c.dim(), f))
                    .unwrap()
                    .coefficient(Blade::from_indices(&[]));
                expected = &expected + &c.hyper_in(mu, q).mul_poly(&f);
            }
            assert_eq!(got.form, expected);
            let zero =
                Observable::restricted(&c, vec![Polynomial::zero(); 2], vec![Polynomial::one(); 2])
                    .unwrap();
            assert!(observable_bracket(&c, &alpha, &zero)
                .unwrap()
                .form
                .is_zero());
        }
    }

    #[test]
    fn antirep_and_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            let c = FieldChart::new(n, m).unwrap();
            let base = n + m;
            for _ in 0..3 {
                let mut mk = || {
                    let a: Vec<_> = (0..m)
                        .map(|_| random::polynomial(&mut rng, base, 2, 2))
                        .collect();
                    let b: Vec<_> = (0..n)
                        .map(|_| random::polynomial(&mut rng, base, 2, 2))
                        .collect();
                    Observable::restricted(&c, a, b).unwrap()
                };
                let (alpha, beta, gamma) = (mk(), mk(), mk());
                let f = random::polynomial(&mut rng, c.quotient_dim(), 2, 4);
                let eta = c.volume_in(c.dim()).mul_poly(&f);
                assert!(antirep_check(&c, &alpha, &beta, &eta).unwrap().is_pass());
                assert!(antirep_check(&c, &alpha, &alpha, &eta).unwrap().is_pass());
                let jac = observable_jacobi_defect(&c, &alpha, &beta, &gamma).unwrap();
                assert!(is_exact_on_quotient(&c, &jac).unwrap());
            }
        }
    }

    #[test]
    fn hdw_direct_substitution() {
        // H = p¹₁ with ψ¹ = x, ψ¹₁ = 7
        let c = FieldChart::new(1, 1).unwrap();
        let h = HamiltonianSection::new(&c, v(c.pm(0, 0))).unwrap();
        let psi =
            CandidateSolution::new(&c, vec![v(0)], vec![vec![Polynomial::from_int(7)]]).unwrap();
        assert!(hdw_residual(&c, &psi, &h).is_solution());
        let constant =
            CandidateSolution::new(&c, vec![Polynomial::one()], vec![vec![Polynomial::one()]])
                .unwrap();
        let r = hdw_residual(&c, &constant, &h);
        assert_eq!(r.first[0][0], Polynomial::from_int(-1));
        assert!(!r.is_solution());
    }

    #[test]
    fn intrinsic_residuals_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            let c = FieldChart::new(n, m).unwrap();
            for _ in 0..3 {
                let h = HamiltonianSection::new(
                    &c,
                    random::polynomial(&mut rng, c.quotient_dim(), 2, 4),
                )
                .unwrap();
                let psi = CandidateSolution::new(
                    &c,
                    (0..m)
                        .map(|_| random::polynomial(&mut rng, n, 2, 3))
                        .collect(),
                    (0..n)
                        .map(|_| {
                            (0..m)
                                .map(|_| random::polynomial(&mut rng, n, 2, 3))
                                .collect()
                        })
                        .collect(),
                )
                .unwrap();
                let r = hdw_residual(&c, &psi, &h);
                for mu in 0..n {
                    for i in 0..m {
                        assert_eq!(
                            intrinsic_residual(&c, &psi, &h, c.pm(mu, i)).unwrap(),
                            r.first[mu][i]
                        );
                    }
                }
                for i in 0..m {
                    assert_eq!(
                        intrinsic_residual(&c, &psi, &h, c.y(i)).unwrap(),
                        -&r.second[i]
                    );
                }
            }
        }
    }

    #[test]
    fn conservation_on_constructed_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            let c = FieldChart::new(n, m).unwrap();
            for _ in 0..3 {
                let phi: Vec<_> = (0..m)
                    .map(|_| random::polynomial(&mut rng, n, 2, 3))
                    .collect();
                let g: Vec<_> = (0..m)
                    .map(|_| random::polynomial(&mut rng, n, 2, 3))
                    .collect();
                let (h, psi) = momentum_linear_solution(&c, &phi, &g).unwrap();
                assert!(hdw_residual(&c, &psi, &h).is_solution());
                for q in 1..=c.quotient_dim() {
                    assert!(intrinsic_residual(&c, &psi, &h, q - 1).unwrap().is_zero());
                }
                let a: Vec<_> = (0..m)
                    .map(|_| random::polynomial(&mut rng, n + m, 2, 2))
                    .collect();
                let b: Vec<_> = (0..n)
                    .map(|_| random::polynomial(&mut rng, n + m, 2, 2))
                    .collect();
                let alpha = Observable::restricted(&c, a, b).unwrap();
                let report = conservation_check(&c, &psi, &alpha, &h).unwrap();
                assert!(report.verdict().is_pass());
            }
        }
    }

    #[test]
    fn defect_factors_for_symbolic_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let c = FieldChart::new(2, 1).unwrap();
        let mut params = Params::new();
        let base: Vec<u16> = (0..2).collect();
        let psi = CandidateSolution::new(
            &c,
            vec![params.generic_polynomial(&base, 2).unwrap()],
            (0..2)
                .map(|_| vec![params.generic_polynomial(&base, 2).unwrap()])
                .collect(),
        )
        .unwrap();
        let h = HamiltonianSection::new(&c, random::polynomial(&mut rng, c.quotient_dim(), 2, 4))
            .unwrap();
        let alpha = Observable::restricted(
            &c,
            vec![random::polynomial(&mut rng, 3, 2, 2)],
            vec![
                random::polynomial(&mut rng, 3, 2, 2),
                random::polynomial(&mut rng, 3, 1, 2),
            ],
        )
        .unwrap();
        let report = conservation_check(&c, &psi, &alpha, &h).unwrap();
        assert!(report.factors_through_residuals());
        assert!(!report.defect.is_zero());
    }

    #[test]
    fn conserved_current() {
        let c = FieldChart::new(1, 1).unwrap();
        let (h, psi) = momentum_linear_solution(&c, &[v(0)], &[Polynomial::zero()]).unwrap();
        // H = p¹₁, α = p¹₁
        let alpha =
            Observable::restricted(&c, vec![Polynomial::one()], vec![Polynomial::zero()]).unwrap();
        assert!(current_bracket_h(&c, &alpha, &h).unwrap().is_zero());
        let report = conservation_check(&c, &psi, &alpha, &h).unwrap();
        assert!(report.divergence.is_zero());
    }
}
