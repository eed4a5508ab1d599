//! Seeded randomized suites behind the `*-suite`, `linear-roundtrip` and
//! `auxiliary-lemma` checks.

use gradedirac_core::graded_manifold::check_graph_involutive;
use gradedirac_core::identities::{
    antisymmetry_defect, interior_defect, jacobi_defect, leibniz_defect,
};
use gradedirac_core::linalg::{
    annihilator_forms, annihilator_mv, contraction_span, Ambient, ConstSubspace,
};
use gradedirac_core::linear_dirac::{reconstruct_family, LinearViolation};
use gradedirac_core::{random, Verdict};
use num_traits::Zero;
use rand::Rng;

/// Number of cases run and the first failure, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub cases: usize,
    pub failure: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new() -> Self {
        SuiteOutcome {
            cases: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Res<T> = Result<T, gradedirac_core::Error>;

/// Antisymmetry, Leibniz, Jacobi and the interior-product identity of the
/// Schouten-Nijenhuis bracket on random multivectors with coefficients of degree `<= 2`.
pub fn sn_suite<R: Rng>(rng: &mut R, cases: usize, max_dim: usize) -> Res<SuiteOutcome> {
    let mut out = SuiteOutcome::new();
    let mut interior_cases = 0;
    for case in 0..cases {
        let n = rng.gen_range(2..=max_dim.max(2));
        let [p, q, r] = [0; 3].map(|_| rng.gen_range(1..=3.min(n)));
        let u = random::multivector(rng, n, p, 2, 2);
        let v = random::multivector(rng, n, q, 2, 2);
        let w = random::multivector(rng, n, r, 2, 2);
        let mut fail = |what: &str| {
            out.failure = Some(format!(
                "case {case}: {what} fails for n = {n}, degrees ({p}, {q}, {r})"
            ));
        };
        if !antisymmetry_defect(&u, &v)?.is_zero() {
            fail("antisymmetry");
        } else if !leibniz_defect(&u, &v, &w)?.is_zero() {
            fail("Leibniz rule");
        } else if !jacobi_defect(&u, &v, &w)?.is_zero() {
            fail("Jacobi identity");
        } else if p + q - 1 <= n {
            let a = rng.gen_range(p + q - 1..=n);
            let omega = random::form(rng, n, a, 2, 3);
            interior_cases += 1;
            if !interior_defect(&u, &v, &omega)?.is_zero() {
                fail("interior-product identity");
            }
        }
        out.cases += 1;
        if out.failure.is_some() {
            break;
        }
    }
    out.notes.push(format!(
        "{interior_cases} cases included the interior-product identity"
    ));
    Ok(out)
}

/// The graph of `ω` is closed under the graded Courant bracket exactly when
/// `dω = 0`: half the cases use exact `ω`, half non-closed `ω`.
pub fn graph_suite<R: Rng>(rng: &mut R, cases: usize, max_dim: usize) -> Res<SuiteOutcome> {
    let mut out = SuiteOutcome::new();
    let max_dim = max_dim.max(3);
    let (mut exact, mut open) = (0, 0);
    for case in 0..cases {
        let closed = case % 2 == 0;
        let (omega, n) = if closed {
            let n = rng.gen_range(2..=max_dim);
            let k = rng.gen_range(1..n);
            (random::exact_form(rng, n, k, 1), n)
        } else {
            let n = rng.gen_range(3..=max_dim);
            let k = rng.gen_range(1..=n - 2);
            (random::non_closed_form(rng, n, k, 1), n)
        };
        let verdict = check_graph_involutive(&omega)?;
        out.cases += 1;
        if closed {
            exact += 1;
        } else {
            open += 1;
        }
        if verdict.is_pass() != closed {
            out.failure = Some(format!(
                "case {case}: n = {n}, degree {}, closed = {closed}, involutive = {}",
                omega.degree(),
                verdict.is_pass()
            ));
            break;
        }
    }
    out.notes
        .push(format!("{exact} exact and {open} non-closed forms"));
    Ok(out)
}

/// Reconstruction of a constant graded Dirac family from a random top level,
/// graph and triple round trips, and uniqueness under perturbation.
pub fn linear_roundtrip<R: Rng>(
    rng: &mut R,
    cases: usize,
    max_dim: usize,
    max_order: usize,
) -> Res<SuiteOutcome> {
    let mut out = SuiteOutcome::new();
    let mut perturbed = 0;
    for case in 0..cases {
        let n = rng.gen_range(2..=max_dim.max(2));
        let k = rng.gen_range(1..=max_order.clamp(1, n));
        let top = random::linear_top(rng, n, k);
        let tag = format!("case {case} (n = {n}, k = {k})");
        out.cases += 1;
        let family = match reconstruct_family(&top)? {
            Ok(f) => f,
            Err(v) => {
                out.failure = Some(format!("{tag}: reconstruction failed: {v}"));
                break;
            }
        };
        if let Err(v) = family.check_conditions()? {
            out.failure = Some(format!("{tag}: reconstructed family violates {v}"));
            break;
        }
        if !family.level(k).equivalent(&top) {
            out.failure = Some(format!("{tag}: top level changed"));
            break;
        }
        let graph = family.graph()?;
        if let Err(v) = graph.check_weak_lagrangian()? {
            out.failure = Some(format!("{tag}: graph is not weakly Lagrangian: {v}"));
            break;
        }
        let back = match graph.triple_from_graph()? {
            Ok(b) => b,
            Err(v) => {
                out.failure = Some(format!("{tag}: triple from graph failed: {v}"));
                break;
            }
        };
        if !back.equivalent(&family) || back.graph()? != graph {
            out.failure = Some(format!(
                "{tag}: graph/triple round trip is not the identity"
            ));
            break;
        }
        if k >= 2 {
            if let Some(msg) = perturbation(rng, &family, k)? {
                out.failure = Some(format!("{tag}: {msg}"));
                break;
            }
            perturbed += 1;
        }
    }
    out.notes
        .push(format!("{perturbed} cases perturbed a lower level"));
    Ok(out)
}

// Shifting ♯_a off the kernel must break skew-symmetry; shifting into it must not.
fn perturbation<R: Rng>(
    rng: &mut R,
    family: &gradedirac_core::linear_dirac::LinearGradedDirac,
    k: usize,
) -> Res<Option<String>> {
    let a = rng.gen_range(1..k);
    let level = family.level(a);
    let Some((alpha0, _)) = level
        .generators
        .iter()
        .find(|(f, _)| f.iter().any(|c| !c.is_zero()))
    else {
        return Ok(None);
    };
    let c = alpha0
        .iter()
        .position(|x| !x.is_zero())
        .expect("nonzero generator");
    let complement = level.kernel.orthogonal_complement().basis();
    if !complement.is_empty() {
        let v = complement[rng.gen_range(0..complement.len())].clone();
        let broken =
            family.with_shifted_level(a, |alpha| v.iter().map(|x| x * &alpha[c]).collect());
        match broken.check_conditions()? {
            Err(LinearViolation::Skew { .. }) => {}
            other => {
                return Ok(Some(format!(
                    "perturbed level {a} was not rejected: {other:?}"
                )))
            }
        }
    }
    if let Some(kv) = level.kernel.basis().first().cloned() {
        let harmless =
            family.with_shifted_level(a, |alpha| kv.iter().map(|x| x * &alpha[c]).collect());
        if harmless.check_conditions()?.is_err() || !harmless.equivalent(family) {
            return Ok(Some(format!(
                "shift of level {a} inside the kernel changed the family"
            )));
        }
    }
    Ok(None)
}

/// `span{ι_U α} = (S^{∘,a})^{∘,a}` for random constant `S ⊆ Λ^k` and every `a <= k`.
pub fn auxiliary_lemma<R: Rng>(
    rng: &mut R,
    cases: usize,
    max_dim: usize,
    max_order: usize,
) -> Res<SuiteOutcome> {
    let mut out = SuiteOutcome::new();
    let mut instances = 0;
    for case in 0..cases {
        let n = rng.gen_range(2..=max_dim.max(2));
        let k = rng.gen_range(1..=max_order.clamp(1, n));
        let count = rng.gen_range(0..=3);
        let forms: Vec<_> = (0..count)
            .map(|_| random::constant_form(rng, n, k, 3).to_vector())
            .collect::<Res<_>>()?;
        let s = ConstSubspace::span(Ambient::Forms { n, d: k }, &forms)?;
        out.cases += 1;
        for a in 1..=k {
            instances += 1;
            let double = annihilator_forms(&annihilator_mv(&s, a)?, a)?;
            if contraction_span(&s, a)? != double {
                out.failure = Some(format!(
                    "case {case}: n = {n}, k = {k}, a = {a}, dim S = {}",
                    s.dim()
                ));
                return Ok(out);
            }
        }
    }
    out.notes.push(format!("{instances} (S, a) instances"));
    Ok(out)
}

/// Maps a suite outcome to a verdict carrying the failure description.
pub fn verdict(o: &SuiteOutcome) -> Verdict<String> {
    match &o.failure {
        None => Verdict::Pass,
        Some(f) => Verdict::Fail(f.clone()),
    }
}
