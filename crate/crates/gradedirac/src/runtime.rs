//! Evaluation of documents: declarations become values, directives become report entries.

use std::collections::BTreeMap;
use std::time::Instant;

use gradedirac_core::blade::Blade;
use gradedirac_core::exterior::{interior, lie_derivative, schouten_nijenhuis, Chart};
use gradedirac_core::field_theory::{
    antirep_check, conservation_check, current_bracket_eta, current_bracket_h, hdw_residual,
    observable_bracket, CandidateSolution, FieldChart, HamiltonianSection, Observable,
};
use gradedirac_core::graded_manifold::{
    check_graph_involutive, check_involutive, courant_bracket, graded_pairing, BracketWitness,
    GeneratedSubbundle, GradedSection,
};
use gradedirac_core::graded_poisson::{
    check_bracket_properties, closed_section_search, GradedPoissonStructure, HamiltonianForm,
    Hamiltonicity,
};
use gradedirac_core::identities::{
    antisymmetry_defect, interior_defect, jacobi_defect, leibniz_defect,
};
use gradedirac_core::linalg::ConstantSolver;
use gradedirac_core::poly::render_scalar;
use gradedirac_core::{random, Form, MultiVector, Polynomial, Scalar, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ast::{BinOp, ChartSpec, Decl, DiracSpec, Directive, Document, Expr, Func, Node};
use crate::error::{DslError, Pos};
use crate::parser::literal;
use crate::printer::{print_directive, print_expr};
use crate::report::{overall, DirectiveReport, Report, Status, Warning, Witness};
use crate::suites;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Run every directive.
    Check,
    /// Run `compute` directives only.
    Compute,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub cases: usize,
    pub bound: Option<u32>,
    pub timing: bool,
    pub mode: Mode,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            cases: 100,
            bound: None,
            timing: false,
            mode: Mode::Check,
        }
    }
}

const DEFAULT_BOUND: u32 = 2;
const SAMPLE_POINTS: usize = 4;

#[derive(Clone, Debug)]
pub enum Dirac {
    Graph(Form),
    Generated(GeneratedSubbundle),
}

#[derive(Clone, Debug)]
pub enum Value {
    Poly(Polynomial),
    Form(Form),
    Mv(MultiVector),
    Section(GradedSection),
    Span(Vec<Form>),
    Poisson(Box<GradedPoissonStructure>),
    Dirac(Box<Dirac>),
    Observable(Box<Observable>),
    Hamiltonian(HamiltonianSection),
    Candidate(CandidateSolution),
}

struct Env {
    names: Vec<String>,
    field: Option<FieldChart>,
    solver: Option<ConstantSolver>,
    values: BTreeMap<String, Value>,
    points: Vec<Vec<Scalar>>,
    warnings: Vec<Warning>,
}

type RResult<T> = Result<T, DslError>;

fn rt<T, E: std::fmt::Display>(pos: Pos) -> impl Fn(E) -> DslError {
    move |e| DslError::runtime(pos, e)
}

/// A degree-0 form becomes a function.
fn form_value(f: Form) -> Value {
    if f.degree() == 0 {
        Value::Poly(f.coefficient(Blade::from_indices(&[])))
    } else {
        Value::Form(f)
    }
}

impl Env {
    fn dim(&self) -> usize {
        self.names.len()
    }

    fn as_form(&self, v: &Value, pos: Pos) -> RResult<Form> {
        match v {
            Value::Form(f) => Ok(f.clone()),
            Value::Poly(p) => Ok(Form::function(self.dim(), p.clone())),
            _ => Err(DslError::runtime(pos, "expected a form")),
        }
    }

    fn field(&self, pos: Pos) -> RResult<FieldChart> {
        self.field
            .ok_or_else(|| DslError::runtime(pos, "needs a field chart"))
    }

    fn render_poly(&self, p: &Polynomial) -> String {
        p.render(&self.names)
    }

    fn render(&self, v: &Value) -> String {
        match v {
            Value::Poly(p) => self.render_poly(p),
            Value::Form(f) => f.render(&self.names),
            Value::Mv(u) => u.render(&self.names),
            Value::Section(s) => format!(
                "({}, {})",
                s.u.render(&self.names),
                self.render_form(&s.alpha)
            ),
            Value::Span(forms) => format!(
                "<{}>",
                forms
                    .iter()
                    .map(|f| f.render(&self.names))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Value::Poisson(s) => format!(
                "graded Poisson structure of order {} on {} coordinates",
                s.k, s.n
            ),
            Value::Dirac(d) => match d.as_ref() {
                Dirac::Graph(w) => format!("graph({})", w.render(&self.names)),
                Dirac::Generated(g) => format!("generated family of order {}", g.k),
            },
            Value::Observable(o) => self.render_form(&o.form),
            Value::Hamiltonian(h) => self.render_poly(&h.h),
            Value::Candidate(c) => {
                let mut parts: Vec<String> = c.psi.iter().map(|p| self.render_poly(p)).collect();
                parts.extend(c.psi_p.iter().flatten().map(|p| self.render_poly(p)));
                format!("[{}]", parts.join(", "))
            }
        }
    }

    fn render_form(&self, f: &Form) -> String {
        if f.degree() == 0 {
            self.render_poly(&f.coefficient(Blade::from_indices(&[])))
        } else {
            f.render(&self.names)
        }
    }

    fn render_mv(&self, u: &MultiVector) -> String {
        u.render(&self.names)
    }

    fn render_point(&self, x: &[Scalar]) -> String {
        format!(
            "({})",
            x.iter().map(render_scalar).collect::<Vec<_>>().join(", ")
        )
    }

    fn eval(&self, e: &Expr) -> RResult<Value> {
        let pos = e.pos;
        let err = rt::<Value, gradedirac_core::Error>(pos);
        let dim = self.dim();
        Ok(match &e.node {
            Node::Num(n) => Value::Poly(Polynomial::constant(literal(n))),
            Node::Name(name) => {
                if let Some(v) = self.values.get(name) {
                    v.clone()
                } else if let Some(i) = self.names.iter().position(|c| c == name) {
                    Value::Poly(Polynomial::var(i as u16))
                } else {
                    let i = name
                        .strip_prefix('d')
                        .and_then(|r| self.names.iter().position(|c| c == r))
                        .ok_or_else(|| DslError::UnknownIdentifier {
                            pos,
                            name: name.clone(),
                        })?;
                    Value::Form(Form::basis(dim, &[i]).map_err(&err)?)
                }
            }
            Node::Partial(name) => {
                let i = self.names.iter().position(|c| c == name).ok_or_else(|| {
                    DslError::UnknownIdentifier {
                        pos,
                        name: format!("@{name}"),
                    }
                })?;
                Value::Mv(MultiVector::partial(dim, i))
            }
            Node::Neg(a) => self.scale(self.eval(a)?, &Scalar::from_integer((-1).into()), pos)?,
            Node::Pow(a, k) => match self.eval(a)? {
                Value::Poly(p) => Value::Poly(p.pow(*k)),
                _ => return Err(DslError::runtime(pos, "powers need a polynomial base")),
            },
            Node::Bin(op, a, b) => {
                let (va, vb) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add | BinOp::Sub => {
                        let vb = if *op == BinOp::Sub {
                            self.scale(vb, &Scalar::from_integer((-1).into()), pos)?
                        } else {
                            vb
                        };
                        self.add(va, vb, pos)?
                    }
                    BinOp::Div => {
                        let Node::Num(n) = &b.node else {
                            return Err(DslError::runtime(pos, "division by a non-literal"));
                        };
                        self.scale(va, &literal(n).recip(), pos)?
                    }
                    BinOp::Mul | BinOp::Wedge => match (va, vb) {
                        (Value::Poly(p), other) | (other, Value::Poly(p)) => {
                            self.mul_poly(other, &p, pos)?
                        }
                        (Value::Form(f), Value::Form(g)) => form_value(f.wedge(&g).map_err(&err)?),
                        (Value::Mv(u), Value::Mv(v)) => Value::Mv(u.wedge(&v).map_err(&err)?),
                        _ => return Err(DslError::runtime(pos, "unsupported operands")),
                    },
                }
            }
            Node::Call(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<RResult<Vec<_>>>()?;
                match (f, vals.as_slice()) {
                    (Func::D, [Value::Poly(p)]) => Value::Form(Form::differential_of(dim, p)),
                    (Func::D, [Value::Form(w)]) => Value::Form(w.d()),
                    (Func::Interior, [Value::Mv(u), a]) => {
                        form_value(interior(u, &self.as_form(a, pos)?).map_err(&err)?)
                    }
                    (Func::Sn, [Value::Mv(u), Value::Mv(v)]) => {
                        Value::Mv(schouten_nijenhuis(u, v).map_err(&err)?)
                    }
                    (Func::Lie, [Value::Mv(u), a]) => {
                        form_value(lie_derivative(u, &self.as_form(a, pos)?).map_err(&err)?)
                    }
                    (Func::Graph, [w]) => {
                        Value::Dirac(Box::new(Dirac::Graph(self.as_form(w, pos)?)))
                    }
                    _ => {
                        return Err(DslError::runtime(
                            pos,
                            format!("bad arguments to {}()", f.name()),
                        ))
                    }
                }
            }
            Node::Pair(u, a) => {
                let Value::Mv(u) = self.eval(u)? else {
                    return Err(DslError::runtime(
                        pos,
                        "a section starts with a multivector",
                    ));
                };
                let alpha = self.as_form(&self.eval(a)?, pos)?;
                let k = u.degree() + alpha.degree() - 1;
                Value::Section(GradedSection::new(k, u, alpha).map_err(&err)?)
            }
        })
    }

    fn scale(&self, v: Value, c: &Scalar, pos: Pos) -> RResult<Value> {
        self.mul_poly(v, &Polynomial::constant(c.clone()), pos)
    }

    fn mul_poly(&self, v: Value, p: &Polynomial, pos: Pos) -> RResult<Value> {
        Ok(match v {
            Value::Poly(q) => Value::Poly(&q * p),
            Value::Form(f) => Value::Form(f.mul_poly(p)),
            Value::Mv(u) => Value::Mv(u.mul_poly(p)),
            Value::Section(s) => Value::Section(GradedSection {
                k: s.k,
                u: s.u.mul_poly(p),
                alpha: s.alpha.mul_poly(p),
            }),
            _ => return Err(DslError::runtime(pos, "cannot scale this value")),
        })
    }

    fn add(&self, a: Value, b: Value, pos: Pos) -> RResult<Value> {
        let err = rt::<Value, gradedirac_core::Error>(pos);
        Ok(match (a, b) {
            (Value::Poly(p), Value::Poly(q)) => Value::Poly(&p + &q),
            (Value::Form(f), Value::Form(g)) => form_value(f.checked_add(&g).map_err(&err)?),
            (Value::Mv(u), Value::Mv(v)) => Value::Mv(u.checked_add(&v).map_err(&err)?),
            (Value::Section(s), Value::Section(t)) => Value::Section(
                GradedSection::new(
                    s.k,
                    s.u.checked_add(&t.u).map_err(&err)?,
                    s.alpha.checked_add(&t.alpha).map_err(&err)?,
                )
                .map_err(&err)?,
            ),
            _ => return Err(DslError::runtime(pos, "operands of different kinds")),
        })
    }

    fn value_of(&self, e: &Expr) -> RResult<Value> {
        self.eval(e)
    }

    fn poisson(&self, name: &str, pos: Pos) -> RResult<&GradedPoissonStructure> {
        match self.values.get(name) {
            Some(Value::Poisson(s)) => Ok(s),
            _ => Err(DslError::runtime(
                pos,
                format!("`{name}` is not a Poisson structure"),
            )),
        }
    }

    fn declare(&mut self, d: &Decl, pos: Pos) -> RResult<()> {
        let err = rt::<(), gradedirac_core::Error>(pos);
        let (name, value) = match d {
            Decl::Chart { spec, .. } => {
                match spec {
                    ChartSpec::Coordinates(c) => self.names = c.clone(),
                    ChartSpec::Field { n, m } => {
                        let chart = FieldChart::new(*n, *m).map_err(&err)?;
                        self.names = chart.names();
                        self.solver = Some(chart.omega_solver());
                        self.field = Some(chart);
                    }
                }
                return Ok(());
            }
            Decl::Form { name, expr, .. } | Decl::Mv { name, expr } | Decl::Poly { name, expr } => {
                let v = self.eval(expr)?;
                let zero = match &v {
                    Value::Poly(p) => p.is_zero(),
                    Value::Form(f) => f.is_zero(),
                    Value::Mv(u) => u.is_zero(),
                    _ => false,
                };
                if zero && !matches!(&expr.node, Node::Num(n) if n == &0.into()) {
                    self.warnings.push(Warning::new(
                        expr.pos,
                        format!("`{name}` evaluates to zero"),
                    ));
                }
                (name, v)
            }
            Decl::Span { name, forms } => {
                let fs = forms
                    .iter()
                    .map(|f| self.eval(f).and_then(|v| self.as_form(&v, f.pos)))
                    .collect::<RResult<Vec<_>>>()?;
                (name, Value::Span(fs))
            }
            Decl::Poisson { name, omega } => {
                let w = self.as_form(&self.eval(omega)?, omega.pos)?;
                let s = GradedPoissonStructure::from_multisymplectic(&w, self.points.clone())
                    .map_err(&err)?;
                (name, Value::Poisson(Box::new(s)))
            }
            Decl::Dirac { name, spec } => {
                let d = match spec {
                    DiracSpec::Graph(w) => Dirac::Graph(self.as_form(&self.eval(w)?, w.pos)?),
                    DiracSpec::LevelOne { k, sections } => {
                        let mut gens = Vec::new();
                        for s in sections {
                            match self.eval(s)? {
                                Value::Section(g) => gens.push(g),
                                _ => return Err(DslError::runtime(s.pos, "expected a section")),
                            }
                        }
                        Dirac::Generated(
                            GeneratedSubbundle::from_level_one(*k, gens).map_err(&err)?,
                        )
                    }
                };
                (name, Value::Dirac(Box::new(d)))
            }
            Decl::Observable { name, expr } => {
                let chart = self.field(pos)?;
                let full = self.as_form(&self.eval(expr)?, expr.pos)?;
                let alpha = chart.descend(&full).map_err(rt::<(), _>(expr.pos))?;
                let solver = self.solver.as_ref().expect("field chart has a solver");
                let obs = Observable::with_solver(&chart, solver, &alpha)
                    .map_err(rt::<(), _>(expr.pos))?;
                (name, Value::Observable(Box::new(obs)))
            }
            Decl::Hamiltonian { name, expr } => {
                let chart = self.field(pos)?;
                let Value::Poly(h) = self.eval(expr)? else {
                    return Err(DslError::runtime(expr.pos, "a Hamiltonian is a polynomial"));
                };
                (
                    name,
                    Value::Hamiltonian(
                        HamiltonianSection::new(&chart, h).map_err(rt::<(), _>(expr.pos))?,
                    ),
                )
            }
            Decl::Section { name, components } => {
                let chart = self.field(pos)?;
                let polys = components
                    .iter()
                    .map(|c| match self.eval(c)? {
                        Value::Poly(p) => Ok(p),
                        _ => Err(DslError::runtime(
                            c.pos,
                            "section components are polynomials",
                        )),
                    })
                    .collect::<RResult<Vec<_>>>()?;
                let (psi, rest) = polys.split_at(chart.m);
                let psi_p = rest.chunks(chart.m).map(|r| r.to_vec()).collect();
                let c = CandidateSolution::new(&chart, psi.to_vec(), psi_p).map_err(&err)?;
                (name, Value::Candidate(c))
            }
            Decl::Check(_) | Decl::Compute(_) => return Ok(()),
        };
        self.values.insert(name.clone(), value);
        Ok(())
    }
}

/// Result of one directive before positions are attached.
struct Outcome {
    status: Status,
    summary: String,
    witnesses: Vec<Witness>,
}

impl Outcome {
    fn pass(summary: impl Into<String>) -> Self {
        Outcome {
            status: Status::Pass,
            summary: summary.into(),
            witnesses: Vec::new(),
        }
    }

    fn fail(summary: impl Into<String>) -> Self {
        Outcome {
            status: Status::Fail,
            summary: summary.into(),
            witnesses: Vec::new(),
        }
    }

    fn value(label: &str, value: String) -> Self {
        Outcome::pass("").with(label, value)
    }

    fn with(mut self, label: &str, value: String) -> Self {
        self.witnesses.push(Witness::new(label, value));
        self
    }

    fn from_bool(ok: bool, pass: &str, fail: &str) -> Self {
        if ok {
            Outcome::pass(pass)
        } else {
            Outcome::fail(fail)
        }
    }
}

pub fn run(doc: &Document, opts: &Options) -> RResult<Report> {
    let mut env = Env {
        names: Vec::new(),
        field: None,
        solver: None,
        values: BTreeMap::new(),
        points: Vec::new(),
        warnings: Vec::new(),
    };
    let mut results = Vec::new();
    let mut index = 0u64;
    for stmt in &doc.stmts {
        let pos = stmt.pos;
        match &stmt.decl {
            Decl::Check(d) | Decl::Compute(d) => {
                let check = matches!(stmt.decl, Decl::Check(_));
                index += 1;
                if check && opts.mode == Mode::Compute {
                    continue;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(index);
                let start = Instant::now();
                let out = if check {
                    run_check(&env, d, pos, opts, &mut rng)?
                } else {
                    run_compute(&env, d, pos, opts)?
                };
                let elapsed = start.elapsed().as_millis() as u64;
                results.push(DirectiveReport {
                    line: pos.line,
                    column: pos.col,
                    kind: if check { "check" } else { "compute" },
                    directive: print_directive(d),
                    status: out.status,
                    summary: out.summary,
                    witnesses: out.witnesses,
                    timing_ms: opts.timing.then_some(elapsed),
                });
            }
            decl => {
                env.declare(decl, pos)?;
                if matches!(decl, Decl::Chart { .. }) {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    rng.set_stream(0);
                    env.points = (0..SAMPLE_POINTS)
                        .map(|_| random::sample_point(&mut rng, env.dim()))
                        .collect();
                }
            }
        }
    }
    Ok(Report::new(opts.seed, opts.cases, env.warnings, results))
}

fn bound(d: &Directive, opts: &Options) -> u32 {
    d.option("bound")
        .map(|b| b as u32)
        .or(opts.bound)
        .unwrap_or(DEFAULT_BOUND)
}

fn hamiltonian_form(
    env: &Env,
    s: &GradedPoissonStructure,
    v: &Value,
    b: u32,
    pos: Pos,
) -> RResult<HamiltonianForm> {
    let f = env.as_form(v, pos)?;
    match s.is_hamiltonian(&f, b).map_err(rt::<(), _>(pos))? {
        Hamiltonicity::Hamiltonian(h) => Ok(h),
        Hamiltonicity::NotHamiltonian { point } => Err(DslError::runtime(
            pos,
            format!(
                "{} is not Hamiltonian (fails at {})",
                env.render_form(&f),
                env.render_point(&point)
            ),
        )),
        Hamiltonicity::Inconclusive => Err(DslError::runtime(
            pos,
            format!(
                "could not certify {} as Hamiltonian within bound {b}",
                env.render_form(&f)
            ),
        )),
    }
}

fn bracket_witness(env: &Env, w: &BracketWitness) -> Vec<Witness> {
    let mut out = vec![
        Witness::new(
            "generators",
            format!("level {} #{} with level {} #{}", w.p, w.left, w.q, w.right),
        ),
        Witness::new(
            "defect",
            format!(
                "({}, {})",
                env.render_mv(&w.defect.u),
                env.render_form(&w.defect.alpha)
            ),
        ),
    ];
    if let Some(x) = &w.point {
        out.push(Witness::new("point", env.render_point(x)));
    }
    out
}

fn verdict_outcome<W>(
    v: Verdict<W>,
    pass: &str,
    describe: impl FnOnce(W) -> (String, Vec<Witness>),
) -> Outcome {
    match v {
        Verdict::Pass => Outcome::pass(pass),
        Verdict::Fail(w) => {
            let (summary, witnesses) = describe(w);
            Outcome {
                status: Status::Fail,
                summary,
                witnesses,
            }
        }
        Verdict::Inconclusive(w) => {
            let (summary, witnesses) = describe(w);
            Outcome {
                status: Status::Inconclusive,
                summary,
                witnesses,
            }
        }
    }
}

fn run_check(
    env: &Env,
    d: &Directive,
    pos: Pos,
    opts: &Options,
    rng: &mut ChaCha8Rng,
) -> RResult<Outcome> {
    let err = rt::<(), gradedirac_core::Error>(pos);
    let args = d
        .args
        .iter()
        .map(|a| env.value_of(a))
        .collect::<RResult<Vec<_>>>()?;
    let chart = || Chart::standard(env.dim()).map_err(&err);
    let cases = d.option("cases").map_or(opts.cases, |c| c as usize);
    let out = match (d.name.as_str(), args.as_slice()) {
        ("closed", [v]) => {
            let dw = env.as_form(v, pos)?.d();
            if dw.is_zero() {
                Outcome::pass("closed")
            } else {
                Outcome::fail("not closed").with("d", env.render_form(&dw))
            }
        }
        ("exact", [v]) => {
            let w = env.as_form(v, pos)?;
            if w.degree() == 0 {
                Outcome::from_bool(
                    w.is_zero(),
                    "the zero function is exact",
                    "a nonzero function is not exact",
                )
            } else {
                match w.exact_primitive(&chart()?).map_err(&err)? {
                    Some(theta) => {
                        Outcome::pass("exact").with("primitive", env.render_form(&theta))
                    }
                    None => Outcome::fail("not exact").with("d", env.render_form(&w.d())),
                }
            }
        }
        ("hamiltonian", [v]) => {
            let s = env.poisson(d.within.as_deref().unwrap_or_default(), pos)?;
            let f = env.as_form(v, pos)?;
            let b = bound(d, opts);
            match s.is_hamiltonian(&f, b).map_err(&err)? {
                Hamiltonicity::Hamiltonian(h) => {
                    Outcome::pass(format!("Hamiltonian at level {}", h.a))
                        .with("sharp", env.render_mv(&h.witness))
                }
                Hamiltonicity::NotHamiltonian { point } => {
                    Outcome::fail("d of the form leaves the structure")
                        .with("point", env.render_point(&point))
                }
                Hamiltonicity::Inconclusive => Outcome {
                    status: Status::Inconclusive,
                    summary: format!("no witness with coefficients of degree <= {b}"),
                    witnesses: Vec::new(),
                },
            }
        }
        ("weak-lagrangian", [Value::Dirac(dv)]) => {
            let g = match dv.as_ref() {
                Dirac::Graph(w) => GeneratedSubbundle::graph(w).map_err(&err)?,
                Dirac::Generated(g) => g.clone(),
            };
            let v = g.check_weak_lagrangian_at(&env.points).map_err(&err)?;
            verdict_outcome(v, "weakly Lagrangian at every sample point", |(x, viol)| {
                (
                    format!("violation: {viol}"),
                    vec![Witness::new("point", env.render_point(&x))],
                )
            })
        }
        ("involutive", [Value::Dirac(dv)]) => {
            let v = match dv.as_ref() {
                Dirac::Graph(w) => check_graph_involutive(w).map_err(&err)?,
                Dirac::Generated(g) => {
                    check_involutive(g, bound(d, opts), &env.points)
                        .map_err(&err)?
                        .verdict
                }
            };
            verdict_outcome(v, "closed under the graded Courant bracket", |w| {
                (
                    String::from("bracket leaves the family"),
                    bracket_witness(env, &w),
                )
            })
        }
        ("poisson-properties", [Value::Poisson(s)]) => {
            if !s.is_constant() {
                return Err(DslError::runtime(
                    pos,
                    "the property suite needs a constant-coefficient structure",
                ));
            }
            let degree = d.option("degree").unwrap_or(1) as u32;
            let rep = check_bracket_properties(s, rng, cases, degree).map_err(&err)?;
            let status = overall(rep.outcomes.iter().map(|o| match o.verdict {
                Verdict::Pass => Status::Pass,
                Verdict::Fail(_) => Status::Fail,
                Verdict::Inconclusive(_) => Status::Inconclusive,
            }));
            let mut out = Outcome {
                status,
                summary: format!("{} random cases", cases),
                witnesses: Vec::new(),
            };
            for o in &rep.outcomes {
                let v = match &o.verdict {
                    Verdict::Pass => format!("pass ({} instances)", o.instances),
                    Verdict::Fail(f) | Verdict::Inconclusive(f) => format!(
                        "{} ({} instances): inputs [{}], defect {}",
                        if o.verdict.is_fail() {
                            "fail"
                        } else {
                            "inconclusive"
                        },
                        o.instances,
                        f.inputs
                            .iter()
                            .map(|x| env.render_form(x))
                            .collect::<Vec<_>>()
                            .join(", "),
                        env.render_form(&f.defect)
                    ),
                };
                out = out.with(o.property.name(), v);
            }
            out
        }
        ("closed-sections", [Value::Span(gens)]) => {
            let b = d
                .option("bound")
                .map(|b| b as u32)
                .or(opts.bound)
                .unwrap_or(3);
            let found = closed_section_search(env.dim(), gens, b).map_err(&err)?;
            if found.is_empty() {
                Outcome::pass(format!(
                    "only the zero section is closed (coefficients of degree <= {b})"
                ))
            } else {
                let mut out = Outcome::fail(format!("{} independent closed sections", found.len()));
                for f in &found {
                    out = out.with("closed", env.render_form(f));
                }
                out
            }
        }
        ("antirep", [Value::Observable(a), Value::Observable(b), eta]) => {
            let chart = env.field(pos)?;
            let eta = env.as_form(eta, pos)?;
            match antirep_check(&chart, a, b, &eta).map_err(&err)? {
                Verdict::Pass => Outcome::pass("anti-representation identity holds"),
                Verdict::Fail(defect) | Verdict::Inconclusive(defect) => {
                    Outcome::fail("anti-representation identity fails")
                        .with("defect", env.render_form(&defect))
                }
            }
        }
        ("hdw", [Value::Candidate(psi), Value::Hamiltonian(h)]) => {
            let chart = env.field(pos)?;
            let r = hdw_residual(&chart, psi, h);
            residual_outcome(env, &chart, &r)
        }
        ("conservation", [Value::Candidate(psi), Value::Observable(a), Value::Hamiltonian(h)]) => {
            let chart = env.field(pos)?;
            let rep = conservation_check(&chart, psi, a, h).map_err(&err)?;
            let base = |p: &Polynomial| env.render_poly(p);
            let mut out = if !rep.factors_through_residuals() {
                Outcome::fail("defect does not factor through the field-equation residuals")
            } else if rep.defect.is_zero() {
                Outcome::pass("evolution identity holds")
            } else {
                Outcome::fail(
                    "evolution identity fails; the section does not solve the field equations",
                )
            };
            out = out
                .with("divergence", base(&rep.divergence))
                .with("defect", base(&rep.defect))
                .with("residual combination", base(&rep.residual_combination));
            out
        }
        ("conserved", [Value::Observable(a), Value::Hamiltonian(h)]) => {
            let chart = env.field(pos)?;
            let b = current_bracket_h(&chart, a, h).map_err(&err)?;
            if b.is_zero() {
                Outcome::pass("bracket with the Hamiltonian vanishes")
            } else {
                Outcome::fail("bracket with the Hamiltonian is nonzero")
                    .with("bracket", env.render_form(&b))
            }
        }
        ("equal", [a, b]) => {
            let diff = env.add(
                a.clone(),
                env.scale(b.clone(), &Scalar::from_integer((-1).into()), pos)?,
                pos,
            )?;
            let zero = match &diff {
                Value::Poly(p) => p.is_zero(),
                Value::Form(f) => f.is_zero(),
                Value::Mv(u) => u.is_zero(),
                Value::Section(s) => s.is_zero(),
                _ => {
                    return Err(DslError::runtime(
                        pos,
                        "only algebraic values can be compared",
                    ))
                }
            };
            if zero {
                Outcome::pass("equal")
            } else {
                Outcome::fail("not equal").with("difference", env.render(&diff))
            }
        }
        ("sn-identities", [Value::Mv(u), Value::Mv(v), Value::Mv(w), rest @ ..]) => {
            let mut out = Outcome::pass("antisymmetry, Leibniz rule and Jacobi identity hold");
            let checks = [
                ("antisymmetry", antisymmetry_defect(u, v).map_err(&err)?),
                ("leibniz", leibniz_defect(u, v, w).map_err(&err)?),
                ("jacobi", jacobi_defect(u, v, w).map_err(&err)?),
            ];
            for (name, defect) in checks {
                if !defect.is_zero() {
                    out.status = Status::Fail;
                    out.summary = String::from("an identity fails");
                    out = out.with(name, env.render_mv(&defect));
                }
            }
            if let [omega] = rest {
                let omega = env.as_form(omega, pos)?;
                let defect = interior_defect(u, v, &omega).map_err(&err)?;
                if !defect.is_zero() {
                    out.status = Status::Fail;
                    out.summary = String::from("an identity fails");
                    out = out.with("interior", env.render_form(&defect));
                }
            }
            out
        }
        ("sn-suite", []) => {
            let dim = d.option("dim").unwrap_or(5) as usize;
            suite_outcome(suites::sn_suite(rng, cases, dim).map_err(&err)?)
        }
        ("graph-suite", []) => {
            let dim = d.option("dim").unwrap_or(5) as usize;
            suite_outcome(suites::graph_suite(rng, cases, dim).map_err(&err)?)
        }
        ("linear-roundtrip", []) => {
            let dim = d.option("dim").unwrap_or(5) as usize;
            let order = d.option("order").unwrap_or(3) as usize;
            suite_outcome(suites::linear_roundtrip(rng, cases, dim, order).map_err(&err)?)
        }
        ("auxiliary-lemma", []) => {
            let dim = d.option("dim").unwrap_or(5) as usize;
            let order = d.option("order").unwrap_or(3) as usize;
            suite_outcome(suites::auxiliary_lemma(rng, cases, dim, order).map_err(&err)?)
        }
        _ => {
            return Err(DslError::runtime(
                pos,
                format!("`{}` cannot take these arguments", d.name),
            ))
        }
    };
    Ok(out)
}

fn residual_outcome(
    env: &Env,
    chart: &FieldChart,
    r: &gradedirac_core::field_theory::HdwResiduals,
) -> Outcome {
    let mut out = Outcome::from_bool(
        r.is_solution(),
        "solves the field equations",
        "field equations fail",
    );
    for mu in 0..chart.n {
        for i in 0..chart.m {
            if !r.first[mu][i].is_zero() {
                out = out.with(
                    &format!("r1[{}][{}]", mu + 1, i + 1),
                    env.render_poly(&r.first[mu][i]),
                );
            }
        }
    }
    for i in 0..chart.m {
        if !r.second[i].is_zero() {
            out = out.with(&format!("r2[{}]", i + 1), env.render_poly(&r.second[i]));
        }
    }
    out
}

fn suite_outcome(o: suites::SuiteOutcome) -> Outcome {
    let mut out = match &o.failure {
        None => Outcome::pass(format!("{} random cases", o.cases)),
        Some(f) => Outcome::fail(format!("{} random cases", o.cases)).with("failure", f.clone()),
    };
    for n in &o.notes {
        out = out.with("note", n.clone());
    }
    out
}

fn run_compute(env: &Env, d: &Directive, pos: Pos, opts: &Options) -> RResult<Outcome> {
    let err = rt::<(), gradedirac_core::Error>(pos);
    let args = d
        .args
        .iter()
        .map(|a| env.value_of(a))
        .collect::<RResult<Vec<_>>>()?;
    let out = match (d.name.as_str(), args.as_slice()) {
        ("value", [v]) => Outcome::value("value", env.render(v)),
        ("d", [v]) => Outcome::value("d", env.render_form(&env.as_form(v, pos)?.d())),
        ("sn", [Value::Mv(u), Value::Mv(v)]) => {
            Outcome::value("sn", env.render_mv(&schouten_nijenhuis(u, v).map_err(&err)?))
        }
        ("lie", [Value::Mv(u), a]) => Outcome::value(
            "lie",
            env.render_form(&lie_derivative(u, &env.as_form(a, pos)?).map_err(&err)?),
        ),
        ("interior", [Value::Mv(u), a]) => {
            Outcome::value("interior", env.render_form(&interior(u, &env.as_form(a, pos)?).map_err(&err)?))
        }
        ("pairing", [Value::Section(s), Value::Section(t)]) => {
            Outcome::value("pairing", env.render_form(&graded_pairing(s, t).map_err(&err)?))
        }
        ("courant", [Value::Section(s), Value::Section(t)]) => {
            let c = courant_bracket(s, t).map_err(&err)?;
            Outcome::value("courant", env.render(&Value::Section(c)))
        }
        ("bracket", [a, b]) => match (&d.within, a, b) {
            (Some(name), _, _) => {
                let s = env.poisson(name, pos)?;
                let bd = bound(d, opts);
                let ha = hamiltonian_form(env, s, a, bd, d.args[0].pos)?;
                let hb = hamiltonian_form(env, s, b, bd, d.args[1].pos)?;
                let br = s.bracket(&ha, &hb).map_err(&err)?;
                Outcome::value("bracket", env.render_form(&br.form)).with("sharp", env.render_mv(&br.witness))
            }
            (None, Value::Observable(o), Value::Hamiltonian(h)) => {
                let chart = env.field(pos)?;
                let b = current_bracket_h(&chart, o, h).map_err(&err)?;
                Outcome::value("bracket", env.render_form(&b))
            }
            (None, Value::Observable(o), Value::Observable(p)) => {
                let chart = env.field(pos)?;
                let b = observable_bracket(&chart, o, p).map_err(&err)?;
                Outcome::value("bracket", env.render_form(&b.form))
            }
            (None, Value::Observable(o), eta @ (Value::Form(_) | Value::Poly(_))) => {
                let chart = env.field(pos)?;
                let eta = env.as_form(eta, pos)?;
                let b = current_bracket_eta(&chart, o, &eta).map_err(&err)?;
                let basic = if chart.is_basic(&eta) { "basic" } else { "not basic" };
                Outcome::value("bracket", env.render_form(&b)).with("argument", format!("{basic} over the quotient"))
            }
            _ => {
                return Err(DslError::runtime(
                    pos,
                    "`bracket` takes two forms `in` a Poisson structure, or an observable with a Hamiltonian, observable or semi-basic form",
                ))
            }
        },
        ("closed-sections", [Value::Span(gens)]) => {
            let b = d.option("bound").map(|b| b as u32).or(opts.bound).unwrap_or(3);
            let found = closed_section_search(env.dim(), gens, b).map_err(&err)?;
            let mut out = Outcome::pass(format!("{} independent closed sections", found.len()));
            for f in &found {
                out = out.with("closed", env.render_form(f));
            }
            out
        }
        ("extend", [Value::Poisson(s)]) => {
            let mut out = Outcome::pass(format!("order {}", s.k));
            for level in &s.levels {
                let (mut gens, mut kernel) = (Vec::new(), Vec::new());
                let mut seen: Vec<(&Form, &MultiVector)> = Vec::new();
                for (f, w) in &level.generators {
                    let repeat = seen.iter().any(|(g, v)| (*g == f && *v == w) || (*g == &-f && *v == &-w));
                    if repeat || (f.is_zero() && w.is_zero()) {
                        continue;
                    }
                    seen.push((f, w));
                    if f.is_zero() {
                        kernel.push(env.render_mv(w));
                    } else {
                        gens.push(format!("{} -> {}", env.render_form(f), env.render_mv(w)));
                    }
                }
                out = out.with(&format!("level {}", level.a), format!("[{}]", gens.join(", ")));
                if !kernel.is_empty() {
                    out = out.with(&format!("level {} kernel", level.a), format!("<{}>", kernel.join(", ")));
                }
            }
            out
        }
        ("reconstruct", [Value::Poisson(s)]) => {
            let Some(lin) = s.linear() else {
                return Err(DslError::runtime(pos, "reconstruction needs a constant-coefficient structure"));
            };
            let mut out = Outcome::pass(format!("order {}", lin.k));
            for (i, level) in lin.levels.iter().enumerate() {
                out = out.with(
                    &format!("level {}", i + 1),
                    format!("dim S = {}, dim K = {}", level.domain.dim(), level.kernel.dim()),
                );
            }
            let graph = lin.graph().map_err(&err)?;
            let ok = graph.check_weak_lagrangian().map_err(&err)?.is_ok();
            out.with("graph", String::from(if ok { "weakly Lagrangian" } else { "not weakly Lagrangian" }))
        }
        ("field", [Value::Observable(o)]) => Outcome::value("field", env.render_mv(&o.field)),
        ("residuals", [Value::Candidate(psi), Value::Hamiltonian(h)]) => {
            let chart = env.field(pos)?;
            let r = hdw_residual(&chart, psi, h);
            let mut out = residual_outcome(env, &chart, &r);
            out.status = Status::Pass;
            out
        }
        _ => return Err(DslError::runtime(pos, format!("`{}` cannot take these arguments", d.name))),
    };
    Ok(out)
}

/// Renders an expression back to source, used in diagnostics.
pub fn describe(e: &Expr) -> String {
    print_expr(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn run_src(src: &str) -> Report {
        run(
            &parse(src).unwrap(),
            &Options {
                cases: 5,
                ..Options::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn closed_and_exact() {
        let r = run_src("chart R3 (x, y, z);\nform a1 w = y*dx + x*dy;\ncheck closed w;\ncheck exact w;\ncheck closed z*dx;");
        let s: Vec<_> = r.results.iter().map(|x| x.status).collect();
        assert_eq!(s, vec![Status::Pass, Status::Pass, Status::Fail]);
        assert_eq!(r.results[1].witnesses[0].value, "x*y");
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn zero_multivector_warns() {
        let r = run_src("chart R2 (x, y);\nmv v = @x^@x;");
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.warnings[0].line, 2);
    }

    #[test]
    fn closed_section_example() {
        let r = run_src("chart R4 (x, y, z, t);\nform a2 w = (dx + y*dz)^dt;\nspan S2 = <w>;\ncheck closed-sections S2 bound 1;");
        assert_eq!(r.results[0].status, Status::Pass);
    }

    #[test]
    fn graph_involutivity_tracks_closedness() {
        let r =
            run_src("chart R3 (x, y, z);\ndirac D = graph(x*dx^dy + dx^dz);\ncheck involutive D;");
        assert_eq!(r.results[0].status, Status::Pass);
        let r = run_src("chart R3 (x, y, z);\ndirac D = graph(y*dx^dy);\ncheck involutive D;");
        assert_eq!(r.results[0].status, Status::Pass);
        let r = run_src("chart R3 (x, y, z);\nform a2 w = z*dx^dy;\ncheck involutive graph(w);");
        assert_eq!(r.results[0].status, Status::Fail);
        assert!(!r.results[0].witnesses.is_empty());
    }

    #[test]
    fn runtime_errors_are_positioned() {
        let doc = parse("chart Z field(1, 1);\nobservable a = p;").unwrap();
        let e = run(&doc, &Options::default()).unwrap_err();
        assert_eq!(e.pos(), Some(Pos { line: 2, col: 16 }));
    }

    #[test]
    fn mechanics_brackets() {
        let r = run_src(
            "chart Z field(1, 1);\nobservable q = y1;\nobservable pi = p1_1;\nhamiltonian h = p1_1**2/2 + y1**3;\ncompute bracket q, h;\ncompute bracket pi, h;",
        );
        assert_eq!(r.results[0].witnesses[0].value, "p1_1*dx1");
        assert_eq!(r.results[1].witnesses[0].value, "-3*y1**2*dx1");
    }
}
