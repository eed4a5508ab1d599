//! Linear graded Dirac structures on `V = ℝⁿ`.
//!
//! A structure of order `k` is stored as triples `(S^a, K_{k+1−a}, ♯_a)` for
//! `a = 1..k`, where `♯_a : S^a → ∨_{k+1−a}V / K_{k+1−a}` is given on a generator
//! list and extended linearly. Its graph is the family
//! `D_p = {(U, α) : α ∈ S^{k+1−p}, ♯(α) = U + K_p}` inside
//! `E_p = ∨_pV ⊕ Λ^{k+1−p}V*`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::blade::{binomial, Blade};
use crate::error::{Error, Result};
use crate::exterior::{sign_pow, MultiVector};
use crate::linalg::{
    annihilator_forms, annihilator_mv, contraction_span, equations_from_columns, Ambient,
    ConstSubspace, ConstantSolver, ContractionPairing, Rref,
};
use crate::poly::Scalar;

pub type Vector = Vec<Scalar>;

/// Reason a linear structure fails one of its axioms, with the offending data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearViolation {
    /// `⟨⟨s, t⟩⟩ ≠ 0` for `s ∈ D_p`, `t ∈ D_q`.
    NotIsotropic {
        p: usize,
        q: usize,
        left: Vector,
        right: Vector,
        pairing: Vector,
    },
    /// `D_q ∩ ∨_qV ≠ (pr₂ D_p)^{∘,q}`.
    AnnihilatorMismatch {
        p: usize,
        q: usize,
        intersection_dim: usize,
        annihilator_dim: usize,
    },
    /// `K_p ≠ (S^{k+1−q})^{∘,p}`.
    KernelMismatch { p: usize, q: usize },
    /// `ι_{♯_a α} β ≠ (−1)^{pq} ι_{♯_b β} α`.
    Skew {
        a: usize,
        b: usize,
        alpha: Vector,
        beta: Vector,
        lhs: Vector,
        rhs: Vector,
    },
    /// A linear relation among generator forms whose image is not in `K`.
    IllDefined {
        a: usize,
        relation: Vector,
        image: Vector,
    },
    /// The generator forms do not span the declared `S^a`.
    DomainMismatch { a: usize },
    /// `span{ι_U α} ≠ (S^{∘,a})^{∘,a}`.
    AuxiliaryLemma { a: usize },
    /// The supplied `K` is not `S^{∘,1}`.
    TopKernel,
}

impl fmt::Display for LinearViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearViolation::NotIsotropic { p, q, .. } => write!(f, "not isotropic at levels ({p}, {q})"),
            LinearViolation::AnnihilatorMismatch {
                p,
                q,
                intersection_dim,
                annihilator_dim,
            } => write!(
                f,
                "D_{q} ∩ ∨_{q} has dimension {intersection_dim} but (pr₂ D_{p})^(∘,{q}) has dimension {annihilator_dim}"
            ),
            LinearViolation::KernelMismatch { p, q } => write!(f, "K_{p} differs from the annihilator of S^(k+1-{q})"),
            LinearViolation::Skew { a, b, .. } => write!(f, "skew-symmetry fails between levels {a} and {b}"),
            LinearViolation::IllDefined { a, .. } => write!(f, "sharp map at level {a} is not well defined"),
            LinearViolation::DomainMismatch { a } => write!(f, "generators do not span S^{a}"),
            LinearViolation::AuxiliaryLemma { a } => write!(f, "contraction span differs from the double annihilator at level {a}"),
            LinearViolation::TopKernel => write!(f, "K is not the annihilator of S"),
        }
    }
}

/// `ι_U α` on coefficient vectors.
pub fn contract(n: usize, u: &[Scalar], p: usize, alpha: &[Scalar], a: usize) -> Result<Vector> {
    Ok(ContractionPairing::new(n, p, a)?.apply(u, alpha))
}

/// Wedge of multivector coefficient vectors.
pub fn wedge_mv(n: usize, u: &[Scalar], p: usize, v: &[Scalar], q: usize) -> Result<Vector> {
    let uu = MultiVector::from_vector(n, p, u)?;
    let vv = MultiVector::from_vector(n, q, v)?;
    if p + q > n {
        return Ok(Vec::new());
    }
    uu.wedge(&vv)?.to_vector()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn neg_vec(v: &[Scalar]) -> Vector {
    v.iter().map(|x| -x.clone()).collect()
}

fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn basis_vector(len: usize, i: usize) -> Vector {
    let mut v = alloc::vec![Scalar::zero(); len];
    v[i] = Scalar::from_integer(1.into());
    v
}

/// `♯_a : S^a → ∨_{k+1−a}V / K_{k+1−a}` on a generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpMap {
    pub n: usize,
    pub k: usize,
    pub a: usize,
    pub domain: ConstSubspace,
    pub kernel: ConstSubspace,
    /// Pairs `(α, U)` meaning `♯_a(α) = U + K`.
    pub generators: Vec<(Vector, Vector)>,
}

impl SharpMap {
    /// Builds the map; `domain` is the span of the generator forms.
    pub fn new(
        n: usize,
        k: usize,
        a: usize,
        kernel: ConstSubspace,
        generators: Vec<(Vector, Vector)>,
    ) -> Result<Self> {
        if a == 0 || a > k || k > n {
            return Err(Error::DegreeOutOfRange {
                degree: a,
                max: k,
                context: "sharp map level",
            });
        }
        let forms: Vec<Vector> = generators.iter().map(|(f, _)| f.clone()).collect();
        let domain = ConstSubspace::span(Ambient::Forms { n, d: a }, &forms)?;
        if kernel.ambient() != (Ambient::MultiVectors { n, d: k + 1 - a }) {
            return Err(Error::PreconditionFailure(String::from(
                "kernel lives in the wrong exterior power",
            )));
        }
        for (_, u) in &generators {
            if u.len() != binomial(n, k + 1 - a) {
                return Err(Error::ChartMismatch {
                    left: binomial(n, k + 1 - a),
                    right: u.len(),
                });
            }
        }
        Ok(SharpMap {
            n,
            k,
            a,
            domain,
            kernel,
            generators,
        })
    }

    /// Degree of the representatives, `k + 1 − a`.
    pub fn order(&self) -> usize {
        self.k + 1 - self.a
    }

    fn solver(&self) -> ConstantSolver {
        let cols: Vec<Vector> = self.generators.iter().map(|(f, _)| f.clone()).collect();
        ConstantSolver::new(binomial(self.n, self.a), &cols)
    }

    /// A representative of `♯_a(α)`, or `None` when `α ∉ S^a`.
    pub fn apply(&self, alpha: &[Scalar]) -> Option<Vector> {
        let c = self.solver().solve(alpha)?;
        let mut out = alloc::vec![Scalar::zero(); binomial(self.n, self.order())];
        for (ci, (_, u)) in c.iter().zip(&self.generators) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(u) {
                *o += ci * x;
            }
        }
        Some(out)
    }

    /// Every linear relation among the generator forms must map into `K`.
    pub fn check_well_defined(&self) -> core::result::Result<(), LinearViolation> {
        let cols: Vec<Vector> = self.generators.iter().map(|(f, _)| f.clone()).collect();
        let eqs = equations_from_columns(&cols, binomial(self.n, self.a));
        let rref = Rref::from_rows(self.generators.len(), eqs.iter());
        for rel in rref.kernel() {
            let mut image = alloc::vec![Scalar::zero(); binomial(self.n, self.order())];
            for (j, c) in &rel {
                for (o, x) in image.iter_mut().zip(&self.generators[*j].1) {
                    *o += c * x;
                }
            }
            if !self.kernel.contains(&image) {
                return Err(LinearViolation::IllDefined {
                    a: self.a,
                    relation: crate::linalg::sparse_to_dense(&rel, self.generators.len()),
                    image,
                });
            }
        }
        Ok(())
    }

    /// Same domain, kernel, and values modulo the kernel.
    pub fn equivalent(&self, other: &SharpMap) -> bool {
        if self.n != other.n || self.k != other.k || self.a != other.a {
            return false;
        }
        if self.domain != other.domain || self.kernel != other.kernel {
            return false;
        }
        self.generators.iter().all(|(f, u)| match other.apply(f) {
            Some(v) => self.kernel.contains(&sub_vec(u, &v)),
            None => false,
        })
    }
}

/// A family `D_1..D_k` with `D_p ⊆ E_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFamily {
    pub n: usize,
    pub k: usize,
    /// `levels[p − 1] = D_p`.
    pub levels: Vec<ConstSubspace>,
}

/// `D ⊆ V ⊕ Λ^kV*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearWeakHigherDirac {
    pub n: usize,
    pub k: usize,
    pub d: ConstSubspace,
}

/// Triples `(S^a, K_{k+1−a}, ♯_a)` for `a = 1..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGradedDirac {
    pub n: usize,
    pub k: usize,
    /// `levels[a − 1]` describes `♯_a`.
    pub levels: Vec<SharpMap>,
}

fn split_section(n: usize, k: usize, p: usize, v: &[Scalar]) -> (Vector, Vector) {
    let m = binomial(n, p);
    debug_assert_eq!(v.len(), m + binomial(n, k + 1 - p));
    (v[..m].to_vec(), v[m..].to_vec())
}

fn join_section(u: &[Scalar], alpha: &[Scalar]) -> Vector {
    let mut out = u.to_vec();
    out.extend_from_slice(alpha);
    out
}

/// `⟨⟨(U,α),(V,β)⟩⟩ = ι_Uβ − (−1)^{pq} ι_Vα` on constant sections, `p + q <= k + 1`.
pub fn linear_pairing(
    n: usize,
    k: usize,
    p: usize,
    s: &[Scalar],
    q: usize,
    t: &[Scalar],
) -> Result<Vector> {
    if p + q > k + 1 {
        return Err(Error::DegreeOutOfRange {
            degree: p + q,
            max: k + 1,
            context: "graded pairing",
        });
    }
    let (u, alpha) = split_section(n, k, p, s);
    let (v, beta) = split_section(n, k, q, t);
    let first = contract(n, &u, p, &beta, k + 1 - q)?;
    let second = contract(n, &v, q, &alpha, k + 1 - p)?;
    Ok(if sign_pow(p * q) > 0 {
        sub_vec(&first, &second)
    } else {
        first.iter().zip(&second).map(|(x, y)| x + y).collect()
    })
}

/// Projection of a subspace of `E_p` onto its form block.
pub fn project_forms(n: usize, k: usize, p: usize, d: &ConstSubspace) -> Result<ConstSubspace> {
    d.map(Ambient::Forms { n, d: k + 1 - p }, |v| {
        split_section(n, k, p, v).1
    })
}

/// `D ∩ ∨_pV`, as a subspace of `∨_pV`.
pub fn multivector_part(n: usize, k: usize, p: usize, d: &ConstSubspace) -> Result<ConstSubspace> {
    let amb = Ambient::Sections { n, k, p };
    let m = binomial(n, p);
    let block: Vec<Vector> = (0..m).map(|i| basis_vector(amb.dim(), i)).collect();
    let block = ConstSubspace::span(amb, &block)?;
    let meet = d.intersection(&block)?;
    meet.map(Ambient::MultiVectors { n, d: p }, |v| {
        split_section(n, k, p, v).0
    })
}

fn check_isotropic(
    n: usize,
    k: usize,
    p: usize,
    dp: &ConstSubspace,
    q: usize,
    dq: &ConstSubspace,
) -> core::result::Result<(), LinearViolation> {
    let bq = dq.basis();
    for s in dp.basis() {
        for t in &bq {
            let pairing = linear_pairing(n, k, p, &s, q, t).expect("degrees checked by caller");
            if !is_zero_vec(&pairing) {
                return Err(LinearViolation::NotIsotropic {
                    p,
                    q,
                    left: s,
                    right: t.clone(),
                    pairing,
                });
            }
        }
    }
    Ok(())
}

fn check_annihilator(
    n: usize,
    k: usize,
    p: usize,
    dp: &ConstSubspace,
    q: usize,
    dq: &ConstSubspace,
) -> Result<core::result::Result<(), LinearViolation>> {
    let meet = multivector_part(n, k, q, dq)?;
    let ann = annihilator_mv(&project_forms(n, k, p, dp)?, q)?;
    if meet != ann {
        return Ok(Err(LinearViolation::AnnihilatorMismatch {
            p,
            q,
            intersection_dim: meet.dim(),
            annihilator_dim: ann.dim(),
        }));
    }
    Ok(Ok(()))
}

impl LinearWeakHigherDirac {
    pub fn new(n: usize, k: usize, d: ConstSubspace) -> Result<Self> {
        if d.ambient() != (Ambient::Sections { n, k, p: 1 }) {
            return Err(Error::PreconditionFailure(String::from(
                "D must live in V ⊕ Λ^k V*",
            )));
        }
        Ok(LinearWeakHigherDirac { n, k, d })
    }

    /// Graph `{(U, α) : α ∈ S, ♯α = U + K}` of a top-level sharp map.
    pub fn from_sharp(top: &SharpMap) -> Result<Self> {
        if top.a != top.k {
            return Err(Error::PreconditionFailure(String::from(
                "expected the top level a = k",
            )));
        }
        let (n, k) = (top.n, top.k);
        let mut rows: Vec<Vector> = top
            .generators
            .iter()
            .map(|(f, u)| join_section(u, f))
            .collect();
        let zero_form = alloc::vec![Scalar::zero(); binomial(n, k)];
        rows.extend(
            top.kernel
                .basis()
                .iter()
                .map(|u| join_section(u, &zero_form)),
        );
        LinearWeakHigherDirac::new(
            n,
            k,
            ConstSubspace::span(Ambient::Sections { n, k, p: 1 }, &rows)?,
        )
    }

    /// Isotropy `D ⊆ D^{⊥,1}` and `D ∩ V = (pr₂D)^{∘,1}`.
    pub fn check_weak_lagrangian(&self) -> Result<core::result::Result<(), LinearViolation>> {
        if let Err(v) = check_isotropic(self.n, self.k, 1, &self.d, 1, &self.d) {
            return Ok(Err(v));
        }
        check_annihilator(self.n, self.k, 1, &self.d, 1, &self.d)
    }

    /// `(S, K, ♯)` with `S = pr₂D`, `K = D ∩ V`.
    pub fn to_sharp(&self) -> Result<SharpMap> {
        let (n, k) = (self.n, self.k);
        let kernel = multivector_part(n, k, 1, &self.d)?;
        let gens = self
            .d
            .basis()
            .into_iter()
            .map(|v| {
                let (u, f) = split_section(n, k, 1, &v);
                (f, u)
            })
            .collect();
        SharpMap::new(n, k, k, kernel, gens)
    }
}

impl LinearFamily {
    /// Isotropy and the annihilator condition for all `p + q <= k + 1`.
    pub fn check_weak_lagrangian(&self) -> Result<core::result::Result<(), LinearViolation>> {
        let (n, k) = (self.n, self.k);
        for p in 1..=k {
            for q in 1..=(k + 1 - p) {
                let (dp, dq) = (&self.levels[p - 1], &self.levels[q - 1]);
                if let Err(v) = check_isotropic(n, k, p, dp, q, dq) {
                    return Ok(Err(v));
                }
                if let Err(v) = check_annihilator(n, k, p, dp, q, dq)? {
                    return Ok(Err(v));
                }
            }
        }
        Ok(Ok(()))
    }

    /// `K_p := D_p ∩ ∨_pV`, `S^{k+1−p} := pr₂ D_p`, `♯` read off any witness.
    pub fn triple_from_graph(
        &self,
    ) -> Result<core::result::Result<LinearGradedDirac, LinearViolation>> {
        if let Err(v) = self.check_weak_lagrangian()? {
            return Ok(Err(v));
        }
        let (n, k) = (self.n, self.k);
        let mut levels = Vec::with_capacity(k);
        for a in 1..=k {
            let p = k + 1 - a;
            let dp = &self.levels[p - 1];
            let kernel = multivector_part(n, k, p, dp)?;
            let gens = dp
                .basis()
                .into_iter()
                .map(|v| {
                    let (u, f) = split_section(n, k, p, &v);
                    (f, u)
                })
                .collect();
            let sharp = SharpMap::new(n, k, a, kernel, gens)?;
            if let Err(v) = sharp.check_well_defined() {
                return Ok(Err(v));
            }
            levels.push(sharp);
        }
        Ok(Ok(LinearGradedDirac { n, k, levels }))
    }
}

impl LinearGradedDirac {
    pub fn level(&self, a: usize) -> &SharpMap {
        &self.levels[a - 1]
    }

    /// `K_p`, stored with level `a = k + 1 − p`.
    pub fn kernel(&self, p: usize) -> &ConstSubspace {
        &self.levels[self.k + 1 - p - 1].kernel
    }

    /// `D_p = span{(♯α, α)} + (K_p, 0)`.
    pub fn graph(&self) -> Result<LinearFamily> {
        let (n, k) = (self.n, self.k);
        let mut levels = Vec::with_capacity(k);
        for p in 1..=k {
            let sharp = self.level(k + 1 - p);
            let mut rows: Vec<Vector> = sharp
                .generators
                .iter()
                .map(|(f, u)| join_section(u, f))
                .collect();
            let zero_form = alloc::vec![Scalar::zero(); binomial(n, k + 1 - p)];
            rows.extend(
                sharp
                    .kernel
                    .basis()
                    .iter()
                    .map(|u| join_section(u, &zero_form)),
            );
            levels.push(ConstSubspace::span(Ambient::Sections { n, k, p }, &rows)?);
        }
        Ok(LinearFamily { n, k, levels })
    }

    /// Conditions (i) and (ii), plus well-definedness of every `♯_a`.
    pub fn check_conditions(&self) -> Result<core::result::Result<(), LinearViolation>> {
        let (n, k) = (self.n, self.k);
        for sharp in &self.levels {
            if let Err(v) = sharp.check_well_defined() {
                return Ok(Err(v));
            }
        }
        // (i) K_p = (S^{k+1−q})^{∘,p} for p + q <= k + 1
        for p in 1..=k {
            for q in 1..=(k + 1 - p) {
                let b = k + 1 - q;
                if annihilator_mv(&self.level(b).domain, p)? != *self.kernel(p) {
                    return Ok(Err(LinearViolation::KernelMismatch { p, q }));
                }
            }
        }
        // (ii) ι_{♯_a α} β = (−1)^{pq} ι_{♯_b β} α, p = k+1−a, q = k+1−b
        for a in 1..=k {
            for b in (k + 1 - a)..=k {
                let (p, q) = (k + 1 - a, k + 1 - b);
                let sign = sign_pow(p * q);
                for (alpha, u) in &self.level(a).generators {
                    for (beta, v) in &self.level(b).generators {
                        let lhs = contract(n, u, p, beta, b)?;
                        let rhs0 = contract(n, v, q, alpha, a)?;
                        let rhs = if sign > 0 { rhs0 } else { neg_vec(&rhs0) };
                        if lhs != rhs {
                            return Ok(Err(LinearViolation::Skew {
                                a,
                                b,
                                alpha: alpha.clone(),
                                beta: beta.clone(),
                                lhs,
                                rhs,
                            }));
                        }
                    }
                }
            }
        }
        Ok(Ok(()))
    }

    /// Replaces every representative `U_j` of `♯_a` by `U_j + shift(α_j)`; `shift` should be linear.
    pub fn with_shifted_level(
        &self,
        a: usize,
        shift: impl Fn(&[Scalar]) -> Vector,
    ) -> LinearGradedDirac {
        let mut out = self.clone();
        for (alpha, u) in &mut out.levels[a - 1].generators {
            let d = shift(alpha);
            for (x, y) in u.iter_mut().zip(d) {
                *x += y;
            }
        }
        out
    }

    pub fn equivalent(&self, other: &LinearGradedDirac) -> bool {
        self.n == other.n
            && self.k == other.k
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.equivalent(b))
    }
}

/// The five-step reconstruction of the whole family from `(S, K, ♯)` at level `k`.
pub fn reconstruct_family(
    top: &SharpMap,
) -> Result<core::result::Result<LinearGradedDirac, LinearViolation>> {
    let (n, k) = (top.n, top.k);
    if top.a != k {
        return Err(Error::PreconditionFailure(String::from(
            "reconstruction starts from level a = k",
        )));
    }
    // preconditions: K = S^{∘,1}, skew-symmetry, well-definedness
    if annihilator_mv(&top.domain, 1)? != top.kernel {
        return Ok(Err(LinearViolation::TopKernel));
    }
    if let Err(v) = top.check_well_defined() {
        return Ok(Err(v));
    }
    for (alpha, u) in &top.generators {
        for (beta, v) in &top.generators {
            let lhs = contract(n, u, 1, beta, k)?;
            let rhs = neg_vec(&contract(n, v, 1, alpha, k)?);
            if lhs != rhs {
                return Ok(Err(LinearViolation::Skew {
                    a: k,
                    b: k,
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    lhs,
                    rhs,
                }));
            }
        }
    }
    let mut levels = Vec::with_capacity(k);
    for a in 1..=k {
        let order = k + 1 - a;
        // Step 1: K_{k+1−a} = S^{∘,k+1−a}
        let kernel = annihilator_mv(&top.domain, order)?;
        // Step 2: S^a = (K_a)^{∘,a}
        let s_a = annihilator_forms(&annihilator_mv(&top.domain, a)?, a)?;
        // Step 3: S^a = span{ι_U α}
        if contraction_span(&top.domain, a)? != s_a {
            return Ok(Err(LinearViolation::AuxiliaryLemma { a }));
        }
        // Step 4: ♯_a(ι_U α) = ♯(α) ∧ U
        let mut gens = Vec::new();
        let pairing = ContractionPairing::new(n, k - a, k)?;
        for blade_idx in 0..binomial(n, k - a) {
            let e = basis_vector(binomial(n, k - a), blade_idx);
            for (alpha, w) in &top.generators {
                let form = pairing.apply(&e, alpha);
                let rep = wedge_mv(n, w, 1, &e, k - a)?;
                gens.push((form, rep));
            }
        }
        let sharp = SharpMap::new(n, k, a, kernel, gens)?;
        if sharp.domain != s_a {
            return Ok(Err(LinearViolation::DomainMismatch { a }));
        }
        if let Err(v) = sharp.check_well_defined() {
            return Ok(Err(v));
        }
        levels.push(sharp);
    }
    // Step 5
    let family = LinearGradedDirac { n, k, levels };
    if let Err(v) = family.check_conditions()? {
        return Ok(Err(v));
    }
    Ok(Ok(family))
}

/// `span{(W∧U, ι_U α) : U ∈ ∨_{p−1}V, (W, α) ∈ D₁}` inside `E_p`.
pub fn d1_generates(d1: &LinearWeakHigherDirac, p: usize) -> Result<ConstSubspace> {
    let (n, k) = (d1.n, d1.k);
    if p == 0 || p > k {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            max: k,
            context: "level of the generated subspace",
        });
    }
    let pairing = ContractionPairing::new(n, p - 1, k)?;
    let mut rows = Vec::new();
    for v in d1.d.basis() {
        let (w, alpha) = split_section(n, k, 1, &v);
        for idx in 0..binomial(n, p - 1) {
            let e = basis_vector(binomial(n, p - 1), idx);
            let mv = wedge_mv(n, &w, 1, &e, p - 1)?;
            let form = pairing.apply(&e, &alpha);
            rows.push(join_section(&mv, &form));
        }
    }
    ConstSubspace::span(Ambient::Sections { n, k, p }, &rows)
}

/// Blade enumeration re-exported for callers that build generators by hand.
pub fn blades(n: usize, p: usize) -> Vec<Blade> {
    Blade::all_of_degree(n, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::poly::int;

    fn symplectic_top(n: usize) -> SharpMap {
        // ω = Σ dx_{2i} ∧ dx_{2i+1}; S = V*, ♯ = ω^{-1} read off ♯(ι_v ω) = v
        let mut omega = Form::zero(n, 2);
        for i in 0..n / 2 {
            omega = &omega + &Form::basis(n, &[2 * i, 2 * i + 1]).unwrap();
        }
        let w = omega.to_vector().unwrap();
        let pairing = ContractionPairing::new(n, 1, 2).unwrap();
        let gens = (0..n)
            .map(|i| {
                let e = basis_vector(n, i);
                (pairing.apply(&e, &w), e)
            })
            .collect();
        SharpMap::new(
            n,
            1,
            1,
            ConstSubspace::zero(Ambient::MultiVectors { n, d: 1 }),
            gens,
        )
        .unwrap()
    }

    #[test]
    fn symplectic_graph_is_lagrangian() {
        let top = symplectic_top(4);
        let d = LinearWeakHigherDirac::from_sharp(&top).unwrap();
        assert_eq!(d.check_weak_lagrangian().unwrap(), Ok(()));
        let fam = reconstruct_family(&top).unwrap().unwrap();
        assert_eq!(fam.levels.len(), 1);
        assert!(fam.level(1).equivalent(&top));
    }

    #[test]
    fn tangent_block_alone_is_not_weak_lagrangian() {
        // D = V ⊕ 0 with k = 2 on ℝ³: D ∩ V = V but (pr₂D)^{∘,1} = (0)^{∘,1} = V, isotropic;
        // adding one 2-form breaks isotropy
        let (n, k) = (3, 2);
        let amb = Ambient::Sections { n, k, p: 1 };
        let rows: Vec<Vector> = (0..3).map(|i| basis_vector(amb.dim(), i)).collect();
        let d = LinearWeakHigherDirac::new(n, k, ConstSubspace::span(amb, &rows).unwrap()).unwrap();
        assert_eq!(d.check_weak_lagrangian().unwrap(), Ok(()));
        let mut rows2 = rows.clone();
        rows2.push(basis_vector(amb.dim(), 3));
        let d2 =
            LinearWeakHigherDirac::new(n, k, ConstSubspace::span(amb, &rows2).unwrap()).unwrap();
        assert!(matches!(
            d2.check_weak_lagrangian().unwrap(),
            Err(LinearViolation::NotIsotropic { .. })
        ));
    }

    #[test]
    fn degenerate_two_form_triple() {
        // graph of ω = dx∧dy on ℝ³ (k = 1): K₁ = <∂z>, S¹ = <dx, dy>
        let n = 3;
        let omega = Form::basis(n, &[0, 1]).unwrap().to_vector().unwrap();
        let pairing = ContractionPairing::new(n, 1, 2).unwrap();
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let e = basis_vector(n, i);
                join_section(&e, &pairing.apply(&e, &omega))
            })
            .collect();
        let d = ConstSubspace::span(Ambient::Sections { n, k: 1, p: 1 }, &rows).unwrap();
        let fam = LinearFamily {
            n,
            k: 1,
            levels: alloc::vec![d],
        };
        let t = fam.triple_from_graph().unwrap().unwrap();
        let kz =
            ConstSubspace::span(Ambient::MultiVectors { n, d: 1 }, &[basis_vector(3, 2)]).unwrap();
        assert_eq!(*t.kernel(1), kz);
        let s = ConstSubspace::span(
            Ambient::Forms { n, d: 1 },
            &[basis_vector(3, 0), basis_vector(3, 1)],
        )
        .unwrap();
        assert_eq!(t.level(1).domain, s);
        assert_eq!(t.graph().unwrap(), fam);
    }

    #[test]
    fn generated_span_misses_kernel_when_sharp_vanishes() {
        // S = <dx∧dy + dz∧dw>, k = 2 on ℝ⁴: S^{∘,1} = 0 and skew-symmetry forces ♯ = 0
        let (n, k) = (4, 2);
        let sigma = (&Form::basis(n, &[0, 1]).unwrap() + &Form::basis(n, &[2, 3]).unwrap())
            .to_vector()
            .unwrap();
        let top = SharpMap::new(
            n,
            k,
            k,
            ConstSubspace::zero(Ambient::MultiVectors { n, d: 1 }),
            alloc::vec![(sigma, alloc::vec![int(0); 4])],
        )
        .unwrap();
        let fam = reconstruct_family(&top).unwrap().unwrap();
        let graph = fam.graph().unwrap();
        let d1 = LinearWeakHigherDirac::from_sharp(&top).unwrap();
        let generated = d1_generates(&d1, 2).unwrap();
        assert_eq!(fam.kernel(2).dim(), 5);
        assert_eq!(generated.dim(), 4);
        assert_eq!(graph.levels[1].dim(), 9);
        assert!(generated.is_subspace_of(&graph.levels[1]).unwrap());
    }
}
