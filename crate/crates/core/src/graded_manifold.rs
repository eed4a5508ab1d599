//! Polynomial sections of `E_p = ∨_pM ⊕ Λ^{k+1−p}M`: the graded pairing, the
//! graded Courant bracket, graphs of forms and involutivity.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ansatz::{LinearSystem, Params};
use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::exterior::{
    interior, lie_derivative, schouten_nijenhuis, sign_pow, Form, Graded, Kind, MultiVector,
};
use crate::linalg::{Ambient, ConstSubspace};
use crate::linear_dirac::{LinearFamily, LinearViolation};
use crate::poly::{ratio, Polynomial, Scalar};
use crate::verdict::Verdict;

fn signed<K: Kind>(g: Graded<K>, s: i32) -> Graded<K> {
    if s > 0 {
        g
    } else {
        -g
    }
}

/// `(U, α)` with `deg U = p` and `deg α = k + 1 − p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSection {
    pub k: usize,
    pub u: MultiVector,
    pub alpha: Form,
}

impl GradedSection {
    pub fn new(k: usize, u: MultiVector, alpha: Form) -> Result<Self> {
        if u.dim() != alpha.dim() {
            return Err(Error::ChartMismatch {
                left: u.dim(),
                right: alpha.dim(),
            });
        }
        let p = u.degree();
        if p == 0 || p > k || alpha.degree() != k + 1 - p {
            return Err(Error::DegreeOutOfRange {
                degree: alpha.degree(),
                max: k,
                context: "section of E_p needs deg U + deg α = k + 1",
            });
        }
        Ok(GradedSection { k, u, alpha })
    }

    pub fn level(&self) -> usize {
        self.u.degree()
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.alpha.is_zero()
    }

    /// `(U, ι_U ω)`.
    pub fn graph_of(u: MultiVector, omega: &Form) -> Result<Self> {
        let k = omega
            .degree()
            .checked_sub(1)
            .ok_or(Error::DegreeOutOfRange {
                degree: 0,
                max: 1,
                context: "graph of a function",
            })?;
        let alpha = interior(&u, omega)?;
        GradedSection::new(k, u, alpha)
    }

    /// `ι_X (U, α) = (U ∧ X, ι_X α)`, a section one level up.
    pub fn contract(&self, x: &MultiVector) -> Result<Self> {
        GradedSection::new(self.k, self.u.wedge(x)?, interior(x, &self.alpha)?)
    }

    pub fn evaluate_at(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let mut v = self.u.evaluate_at(point)?.to_vector()?;
        v.extend(self.alpha.evaluate_at(point)?.to_vector()?);
        Ok(v)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        GradedSection::new(
            self.k,
            self.u.checked_sub(&other.u)?,
            self.alpha.checked_sub(&other.alpha)?,
        )
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> Self {
        GradedSection {
            k: self.k,
            u: self.u.map_coeffs(&mut f),
            alpha: self.alpha.map_coeffs(&mut f),
        }
    }
}

/// `⟨⟨(U,α),(V,β)⟩⟩ = ι_Uβ − (−1)^{pq} ι_Vα`.
pub fn graded_pairing(s: &GradedSection, t: &GradedSection) -> Result<Form> {
    check_same(s, t)?;
    let (p, q) = (s.level(), t.level());
    if p + q > s.k + 1 {
        return Err(Error::DegreeOutOfRange {
            degree: p + q,
            max: s.k + 1,
            context: "graded pairing",
        });
    }
    interior(&s.u, &t.alpha)?.checked_sub(&signed(interior(&t.u, &s.alpha)?, sign_pow(p * q)))
}

/// `⟦(U,α),(V,β)⟧ = ([U,V], (−1)^{(p−1)q}£_Uβ + (−1)^q£_Vα − (−1)^q ½ d(ι_Vα + (−1)^{pq}ι_Uβ))`.
pub fn courant_bracket(s: &GradedSection, t: &GradedSection) -> Result<GradedSection> {
    check_bracket_degrees(s, t)?;
    let (p, q) = (s.level(), t.level());
    let uv = schouten_nijenhuis(&s.u, &t.u)?;
    let a = signed(lie_derivative(&s.u, &t.alpha)?, sign_pow((p - 1) * q));
    let b = signed(lie_derivative(&t.u, &s.alpha)?, sign_pow(q));
    let inner = interior(&t.u, &s.alpha)?
        .checked_add(&signed(interior(&s.u, &t.alpha)?, sign_pow(p * q)))?;
    let c = inner.d().scale(&ratio(-sign_pow(q) as i64, 2));
    GradedSection::new(s.k, uv, a.checked_add(&b)?.checked_add(&c)?)
}

/// The bracket on pairs with `ι_Uβ = (−1)^{pq}ι_Vα`: `([U,V], (−1)^{(p−1)q}£_Uβ − ι_V dα)`.
pub fn courant_bracket_isotropic(s: &GradedSection, t: &GradedSection) -> Result<GradedSection> {
    check_bracket_degrees(s, t)?;
    let (p, q) = (s.level(), t.level());
    let uv = schouten_nijenhuis(&s.u, &t.u)?;
    let a = signed(lie_derivative(&s.u, &t.alpha)?, sign_pow((p - 1) * q));
    let b = interior(&t.u, &s.alpha.d())?;
    GradedSection::new(s.k, uv, a.checked_sub(&b)?)
}

fn check_same(s: &GradedSection, t: &GradedSection) -> Result<()> {
    if s.dim() != t.dim() {
        return Err(Error::ChartMismatch {
            left: s.dim(),
            right: t.dim(),
        });
    }
    if s.k != t.k {
        return Err(Error::PreconditionFailure(String::from(
            "sections of different orders",
        )));
    }
    Ok(())
}

fn check_bracket_degrees(s: &GradedSection, t: &GradedSection) -> Result<()> {
    check_same(s, t)?;
    if s.level() + t.level() > s.k + 1 {
        return Err(Error::DegreeOutOfRange {
            degree: s.level() + t.level() - 1,
            max: s.k,
            context: "Courant bracket lands above level k",
        });
    }
    Ok(())
}

/// Generators `(∂_I, ι_{∂_I}ω)` for every blade of degree `p`.
pub fn multisymplectic_graph(omega: &Form, p: usize) -> Result<Vec<GradedSection>> {
    let n = omega.dim();
    let k = omega.degree().saturating_sub(1);
    if p == 0 || p > k {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            max: k,
            context: "graph level",
        });
    }
    Blade::all_of_degree(n, p)
        .into_iter()
        .map(|b| GradedSection::graph_of(MultiVector::basis(n, &b.indices())?, omega))
        .collect()
}

/// A family `D_1, …, D_k` given by polynomial generators per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedSubbundle {
    pub n: usize,
    pub k: usize,
    /// `levels[p − 1]` generates `D_p`.
    pub levels: Vec<Vec<GradedSection>>,
}

impl GeneratedSubbundle {
    pub fn new(n: usize, k: usize, levels: Vec<Vec<GradedSection>>) -> Result<Self> {
        if levels.len() != k {
            return Err(Error::PreconditionFailure(String::from(
                "one generator list per level is required",
            )));
        }
        for (i, gens) in levels.iter().enumerate() {
            for g in gens {
                if g.dim() != n || g.k != k || g.level() != i + 1 {
                    return Err(Error::PreconditionFailure(String::from(
                        "generator in the wrong level",
                    )));
                }
            }
        }
        Ok(GeneratedSubbundle { n, k, levels })
    }

    /// All levels of the graph of `ω`.
    pub fn graph(omega: &Form) -> Result<Self> {
        let k = omega.degree().saturating_sub(1);
        let levels = (1..=k)
            .map(|p| multisymplectic_graph(omega, p))
            .collect::<Result<_>>()?;
        GeneratedSubbundle::new(omega.dim(), k, levels)
    }

    /// `D_p = ⟨(W∧∂_I, ι_{∂_I}α)⟩` from generators `(W, α)` of `D_1`.
    pub fn from_level_one(k: usize, d1: Vec<GradedSection>) -> Result<Self> {
        let n = d1.first().map(GradedSection::dim).ok_or_else(|| {
            Error::PreconditionFailure(String::from("D_1 needs at least one generator"))
        })?;
        let mut levels = alloc::vec![d1.clone()];
        for p in 2..=k {
            let mut gens = Vec::new();
            for b in Blade::all_of_degree(n, p - 1) {
                let e = MultiVector::basis(n, &b.indices())?;
                for s in &d1 {
                    let g = GradedSection::new(k, s.u.wedge(&e)?, interior(&e, &s.alpha)?)?;
                    if !g.is_zero() {
                        gens.push(g);
                    }
                }
            }
            levels.push(gens);
        }
        GeneratedSubbundle::new(n, k, levels)
    }

    pub fn evaluate_at(&self, point: &[Scalar]) -> Result<LinearFamily> {
        let mut levels = Vec::with_capacity(self.k);
        for (i, gens) in self.levels.iter().enumerate() {
            let rows = gens
                .iter()
                .map(|g| g.evaluate_at(point))
                .collect::<Result<Vec<_>>>()?;
            levels.push(ConstSubspace::span(
                Ambient::Sections {
                    n: self.n,
                    k: self.k,
                    p: i + 1,
                },
                &rows,
            )?);
        }
        Ok(LinearFamily {
            n: self.n,
            k: self.k,
            levels,
        })
    }

    /// `rank D_p(x)` for each sample point, one row per point.
    pub fn rank_profile(&self, points: &[Vec<Scalar>]) -> Result<Vec<Vec<usize>>> {
        points
            .iter()
            .map(|x| {
                Ok(self
                    .evaluate_at(x)?
                    .levels
                    .iter()
                    .map(ConstSubspace::dim)
                    .collect())
            })
            .collect()
    }

    /// Pointwise weak-Lagrangian check; the first failing point is returned.
    pub fn check_weak_lagrangian_at(
        &self,
        points: &[Vec<Scalar>],
    ) -> Result<Verdict<(Vec<Scalar>, LinearViolation)>> {
        for x in points {
            if let Err(v) = self.evaluate_at(x)?.check_weak_lagrangian()? {
                return Ok(Verdict::Fail((x.clone(), v)));
            }
        }
        Ok(Verdict::Pass)
    }
}

/// A generator pair whose bracket misses the expected target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketWitness {
    pub p: usize,
    pub q: usize,
    pub left: usize,
    pub right: usize,
    /// Bracket minus the expected value (graph check) or the bracket itself (membership check).
    pub defect: GradedSection,
    /// Sample point at which membership fails, when known.
    pub point: Option<Vec<Scalar>>,
}

/// `⟦(∂_I, ι_Iω), (∂_J, ι_Jω)⟧ = ([∂_I,∂_J], ι_{[∂_I,∂_J]}ω)` for all admissible blade pairs.
pub fn check_graph_involutive(omega: &Form) -> Result<Verdict<BracketWitness>> {
    let d = GeneratedSubbundle::graph(omega)?;
    let k = d.k;
    for p in 1..=k {
        for q in 1..=(k + 1 - p) {
            for (i, s) in d.levels[p - 1].iter().enumerate() {
                for (j, t) in d.levels[q - 1].iter().enumerate() {
                    let br = courant_bracket(s, t)?;
                    let expected = GradedSection::graph_of(br.u.clone(), omega)?;
                    let defect = br.checked_sub(&expected)?;
                    if !defect.is_zero() {
                        return Ok(Verdict::Fail(BracketWitness {
                            p,
                            q,
                            left: i,
                            right: j,
                            defect,
                            point: None,
                        }));
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Outcome of [`check_involutive`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    /// Result over all level pairs.
    pub verdict: Verdict<BracketWitness>,
    /// Result over the pair of levels `(1, 1)` alone.
    pub level_one: Verdict<BracketWitness>,
    pub rank_profile: Vec<Vec<usize>>,
}

/// Expresses `target` as `Σ f_l g_l` with polynomial `f_l` of degree `<= bound`.
pub fn express_in_span(
    target: &GradedSection,
    gens: &[GradedSection],
    bound: u32,
) -> Result<Option<Vec<Polynomial>>> {
    let n = target.dim();
    let vars: Vec<u16> = (0..n as u16).collect();
    let mut params = Params::new();
    let coeffs = gens
        .iter()
        .map(|_| params.generic_polynomial(&vars, bound))
        .collect::<Result<Vec<_>>>()?;
    let mut u = target.u.clone();
    let mut a = target.alpha.clone();
    for (f, g) in coeffs.iter().zip(gens) {
        u = u.checked_sub(&g.u.mul_poly(f))?;
        a = a.checked_sub(&g.alpha.mul_poly(f))?;
    }
    let mut sys = LinearSystem::new(&params);
    sys.require_zero_graded(&u)?;
    sys.require_zero_graded(&a)?;
    Ok(sys.solve().map(|sol| {
        coeffs
            .iter()
            .map(|f| crate::ansatz::instantiate(f, &params, &sol.particular))
            .collect()
    }))
}

/// Pointwise membership of `s(x)` in `span g_l(x)`.
fn member_at(s: &GradedSection, gens: &[GradedSection], x: &[Scalar]) -> Result<bool> {
    let rows = gens
        .iter()
        .map(|g| g.evaluate_at(x))
        .collect::<Result<Vec<_>>>()?;
    let amb = Ambient::Sections {
        n: s.dim(),
        k: s.k,
        p: s.level(),
    };
    Ok(ConstSubspace::span(amb, &rows)?.contains(&s.evaluate_at(x)?))
}

/// Closure of the generators under the Courant bracket, certified by a bounded
/// polynomial ansatz. A pair the ansatz cannot place is tested at the sample
/// points: a pointwise miss is a failure, otherwise the outcome is inconclusive.
pub fn check_involutive(
    d: &GeneratedSubbundle,
    bound: u32,
    points: &[Vec<Scalar>],
) -> Result<InvolutivityReport> {
    let rank_profile = d.rank_profile(points)?;
    if let Verdict::Fail((x, v)) = d.check_weak_lagrangian_at(points)? {
        return Err(Error::PreconditionFailure(alloc::format!(
            "not weakly Lagrangian at {:?}: {}",
            x.iter().map(crate::poly::render_scalar).collect::<Vec<_>>(),
            v
        )));
    }
    let mut verdict = Verdict::Pass;
    let mut level_one = Verdict::Pass;
    'outer: for p in 1..=d.k {
        for q in 1..=(d.k + 1 - p) {
            let r = p + q - 1;
            for (i, s) in d.levels[p - 1].iter().enumerate() {
                for (j, t) in d.levels[q - 1].iter().enumerate() {
                    let br = courant_bracket(s, t)?;
                    let outcome = if br.is_zero()
                        || express_in_span(&br, &d.levels[r - 1], bound)?.is_some()
                    {
                        Verdict::Pass
                    } else {
                        let mut miss = None;
                        for x in points {
                            if !member_at(&br, &d.levels[r - 1], x)? {
                                miss = Some(x.clone());
                                break;
                            }
                        }
                        let failed = miss.is_some();
                        let w = BracketWitness {
                            p,
                            q,
                            left: i,
                            right: j,
                            defect: br,
                            point: miss,
                        };
                        if failed {
                            Verdict::Fail(w)
                        } else {
                            Verdict::Inconclusive(w)
                        }
                    };
                    if (p, q) == (1, 1) && !outcome.is_pass() && level_one.is_pass() {
                        level_one = outcome.clone();
                    }
                    if outcome.is_fail() {
                        verdict = outcome;
                        if !level_one.is_pass() {
                            break 'outer;
                        }
                    } else if outcome.is_inconclusive() && verdict.is_pass() {
                        verdict = outcome;
                    }
                }
            }
        }
    }
    Ok(InvolutivityReport {
        verdict,
        level_one,
        rank_profile,
    })
}

/// `Σ f_l g_l`.
pub fn combine(gens: &[GradedSection], coeffs: &[Polynomial]) -> Result<GradedSection> {
    let first = gens
        .first()
        .ok_or_else(|| Error::PreconditionFailure(String::from("empty generator list")))?;
    let mut u = MultiVector::zero(first.dim(), first.level());
    let mut a = Form::zero(first.dim(), first.k + 1 - first.level());
    for (g, f) in gens.iter().zip(coeffs) {
        u = u.checked_add(&g.u.mul_poly(f))?;
        a = a.checked_add(&g.alpha.mul_poly(f))?;
    }
    GradedSection::new(first.k, u, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;
    use crate::random;
    use rand::{Rng, SeedableRng};

    fn x(i: u16) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn pairing_of_graph_sections_vanishes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let omega = random::form(&mut rng, 4, 3, 2, 3);
            for (p, q) in [(1, 1), (1, 2), (2, 1)] {
                let u = random::multivector(&mut rng, 4, p, 1, 2);
                let v = random::multivector(&mut rng, 4, q, 1, 2);
                let s = GradedSection::graph_of(u, &omega).unwrap();
                let t = GradedSection::graph_of(v, &omega).unwrap();
                assert!(graded_pairing(&s, &t).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn pairing_symmetry_and_one_sided_case() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let k = 3;
            let s = GradedSection::new(
                k,
                random::multivector(&mut rng, 4, p, 2, 2),
                random::form(&mut rng, 4, k + 1 - p, 2, 2),
            )
            .unwrap();
            let t = GradedSection::new(
                k,
                random::multivector(&mut rng, 4, q, 2, 2),
                random::form(&mut rng, 4, k + 1 - q, 2, 2),
            )
            .unwrap();
            let st = graded_pairing(&s, &t).unwrap();
            let ts = graded_pairing(&t, &s).unwrap();
            assert!(st
                .checked_add(&signed(ts, sign_pow(p * q)))
                .unwrap()
                .is_zero());
            let only_form =
                GradedSection::new(k, MultiVector::zero(4, q), t.alpha.clone()).unwrap();
            assert_eq!(
                graded_pairing(&s, &only_form).unwrap(),
                interior(&s.u, &t.alpha).unwrap()
            );
        }
    }

    #[test]
    fn vector_parts_only_give_lie_bracket() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let xf = random::multivector(&mut rng, 3, 1, 2, 3);
        let yf = random::multivector(&mut rng, 3, 1, 2, 3);
        let s = GradedSection::new(2, xf.clone(), Form::zero(3, 2)).unwrap();
        let t = GradedSection::new(2, yf.clone(), Form::zero(3, 2)).unwrap();
        let br = courant_bracket(&s, &t).unwrap();
        assert_eq!(br.u, schouten_nijenhuis(&xf, &yf).unwrap());
        assert!(br.alpha.is_zero());
    }

    #[test]
    fn isotropic_pairs_use_the_short_formula() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let omega = random::form(&mut rng, 4, 3, 2, 3);
            let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let s =
                GradedSection::graph_of(random::multivector(&mut rng, 4, p, 1, 2), &omega).unwrap();
            let t =
                GradedSection::graph_of(random::multivector(&mut rng, 4, q, 1, 2), &omega).unwrap();
            if p + q > 3 {
                continue;
            }
            assert_eq!(
                courant_bracket(&s, &t).unwrap(),
                courant_bracket_isotropic(&s, &t).unwrap()
            );
        }
    }

    #[test]
    fn graph_involutive_iff_closed() {
        // ω = y dx∧dz∧dt on ℝ⁴, dω = dy∧dx∧dz∧dt ≠ 0
        let omega = Form::basis(4, &[0, 2, 3]).unwrap().mul_poly(&x(1));
        let v = check_graph_involutive(&omega).unwrap();
        let w = v.witness().expect("non-closed graph must fail").clone();
        // bracket minus graph is (−1)^{p+1} ι_{U∧V} dω
        let s = &GeneratedSubbundle::graph(&omega).unwrap().levels[w.p - 1][w.left];
        let t = &GeneratedSubbundle::graph(&omega).unwrap().levels[w.q - 1][w.right];
        let expected = signed(
            interior(&s.u.wedge(&t.u).unwrap(), &omega.d()).unwrap(),
            sign_pow(w.p + 1),
        );
        assert_eq!(w.defect.alpha, expected);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let exact = random::exact_form(&mut rng, 4, 2, 1);
        assert!(check_graph_involutive(&exact).unwrap().is_pass());
    }

    #[test]
    fn constant_toy_is_involutive() {
        // D_1 = ⟨(∂x, 0), (0, dy∧dz)⟩ on ℝ³ with k = 2
        let k = 2;
        let d1 = alloc::vec![
            GradedSection::new(k, MultiVector::partial(3, 0), Form::zero(3, 2)).unwrap(),
            GradedSection::new(k, MultiVector::zero(3, 1), Form::basis(3, &[1, 2]).unwrap())
                .unwrap(),
        ];
        let d = GeneratedSubbundle::from_level_one(k, d1).unwrap();
        let pts = alloc::vec![alloc::vec![int(0); 3], alloc::vec![int(1), int(2), int(-1)]];
        let rep = check_involutive(&d, 1, &pts).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(rep.rank_profile[0], alloc::vec![2, 4]);
    }

    #[test]
    fn non_closed_graph_fails_membership() {
        let omega = Form::basis(4, &[0, 2, 3]).unwrap().mul_poly(&x(1));
        let d = GeneratedSubbundle::graph(&omega).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<_> = (0..3).map(|_| random::sample_point(&mut rng, 4)).collect();
        let rep = check_involutive(&d, 1, &pts).unwrap();
        assert!(rep.verdict.is_fail());
        assert!(rep.level_one.is_fail());
        let closed = random::exact_form(&mut rng, 4, 2, 1);
        let rep = check_involutive(&GeneratedSubbundle::graph(&closed).unwrap(), 1, &pts).unwrap();
        assert!(rep.verdict.is_pass());
    }

    #[test]
    fn inductive_step_on_graph_sections() {
        // ⟦s, ι_X t⟧ = ι_X⟦s, t⟧ + (−1)^{(p−1)(q−1)} ι_{[U,X]} t, q − 1 = deg V
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..12 {
            let omega = random::form(&mut rng, 4, 4, 2, 3);
            let (p, q1) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            if p + q1 + 1 > 4 {
                continue;
            }
            let s =
                GradedSection::graph_of(random::multivector(&mut rng, 4, p, 1, 2), &omega).unwrap();
            let t = GradedSection::graph_of(random::multivector(&mut rng, 4, q1, 1, 2), &omega)
                .unwrap();
            let xf = random::multivector(&mut rng, 4, 1, 1, 2);
            let lhs = courant_bracket(&s, &t.contract(&xf).unwrap()).unwrap();
            let first = courant_bracket(&s, &t).unwrap().contract(&xf).unwrap();
            let ux = schouten_nijenhuis(&s.u, &xf).unwrap();
            let second =
                GradedSection::new(3, t.u.wedge(&ux).unwrap(), interior(&ux, &t.alpha).unwrap())
                    .unwrap();
            let second = second.map_coeffs(|c| c.scale(&int(sign_pow((p - 1) * q1) as i64)));
            let rhs = GradedSection::new(
                3,
                first.u.checked_add(&second.u).unwrap(),
                first.alpha.checked_add(&second.alpha).unwrap(),
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
