//! Exact rational linear algebra: sparse echelon forms, kernels, affine solves,
//! and constant-coefficient subspaces of exterior powers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::blade::{binomial, Blade};
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector};
use crate::poly::{Polynomial, Scalar};

/// Sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

pub fn dense_to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sparse_to_dense(row: &SparseRow, ncols: usize) -> Vec<Scalar> {
    let mut out = alloc::vec![Scalar::zero(); ncols];
    for (i, c) in row {
        out[*i] = c.clone();
    }
    out
}

/// Incremental row-echelon form. Every stored row has a leading `1` at its pivot
/// column and no entries to the left of it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `row` against the stored pivots; the result has no entry in a pivot column.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut work: BTreeMap<usize, Scalar> = row.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, coeff)) = next else { break };
            for (j, v) in &self.rows[&col] {
                let entry = work.entry(*j).or_insert_with(Scalar::zero);
                *entry -= &coeff * v;
                if entry.is_zero() {
                    work.remove(j);
                }
            }
            cursor = col + 1;
        }
        work.into_iter().collect()
    }

    /// Adds a row; returns `true` when it was independent of the stored rows.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let reduced = self.reduce(row);
        let Some((lead, c)) = reduced.first().cloned() else {
            return false;
        };
        let inv = c.recip();
        let normalized: SparseRow = reduced.into_iter().map(|(j, v)| (j, v * &inv)).collect();
        self.rows.insert(lead, normalized);
        true
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Back-substitutes to the unique reduced row-echelon form.
    pub fn into_rref(mut self) -> Rref {
        let cols: Vec<usize> = self.rows.keys().rev().copied().collect();
        let mut done = Echelon::new(self.ncols);
        for c in cols {
            let row = self.rows.remove(&c).expect("pivot present");
            let reduced = full_reduce(&done, &row, c);
            done.rows.insert(c, reduced);
        }
        Rref {
            ncols: done.ncols,
            rows: done.rows,
        }
    }
}

// clears every pivot column of `done` from `row`, keeping the leading entry at `lead`
fn full_reduce(done: &Echelon, row: &SparseRow, lead: usize) -> SparseRow {
    let mut work: BTreeMap<usize, Scalar> = row.iter().cloned().collect();
    let targets: Vec<(usize, Scalar)> = work
        .iter()
        .filter(|(c, _)| **c != lead && done.rows.contains_key(c))
        .map(|(c, v)| (*c, v.clone()))
        .collect();
    for (col, coeff) in targets {
        for (j, v) in &done.rows[&col] {
            let entry = work.entry(*j).or_insert_with(Scalar::zero);
            *entry -= &coeff * v;
            if entry.is_zero() {
                work.remove(j);
            }
        }
    }
    work.into_iter().collect()
}

/// Reduced row-echelon form; canonical for the row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn from_rows<'a>(ncols: usize, rows: impl IntoIterator<Item = &'a SparseRow>) -> Rref {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e.into_rref()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Basis of `{x : A x = 0}` where `A` has this row space.
    pub fn kernel(&self) -> Vec<SparseRow> {
        kernel_from_rref(&self.rows, self.ncols)
    }
}

// one basis vector per free column `f < nvars`: x_f = 1, x_p = −R[p][f]
fn kernel_from_rref(rows: &BTreeMap<usize, SparseRow>, nvars: usize) -> Vec<SparseRow> {
    let mut by_free: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (p, row) in rows {
        for (j, c) in row {
            if *j != *p && *j < nvars {
                by_free.entry(*j).or_default().push((*p, -c.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for f in 0..nvars {
        if rows.contains_key(&f) {
            continue;
        }
        let mut v = by_free.remove(&f).unwrap_or_default();
        v.push((f, Scalar::one()));
        v.sort_by_key(|(j, _)| *j);
        out.push(v);
    }
    out
}

/// Solves `A x = b` for a sparse system given as rows `(coefficients, rhs)`.
/// Returns a particular solution (free variables zero) and a kernel basis, or
/// `None` when the system is inconsistent.
pub fn solve_affine(
    nvars: usize,
    equations: &[(SparseRow, Scalar)],
) -> Option<(SparseRow, Vec<SparseRow>)> {
    let mut e = Echelon::new(nvars + 1);
    for (row, rhs) in equations {
        let mut r = row.clone();
        if !rhs.is_zero() {
            r.push((nvars, rhs.clone()));
        }
        e.insert(&r);
    }
    if e.rows.contains_key(&nvars) {
        return None;
    }
    let rref = e.into_rref();
    let mut particular: SparseRow = Vec::new();
    for (p, row) in &rref.rows {
        if let Some((_, c)) = row.iter().find(|(j, _)| *j == nvars) {
            particular.push((*p, c.clone()));
        }
    }
    let kernel = kernel_from_rref(&rref.rows, nvars);
    Some((particular, kernel))
}

/// Dense rational matrix with a cached factorization `T · M = R` for repeated solves,
/// including right-hand sides with polynomial entries.
#[derive(Clone, Debug)]
pub struct ConstantSolver {
    nrows: usize,
    ncols: usize,
    // rows of T paired with the pivot column of the corresponding row of R (None for zero rows)
    transform: Vec<(Option<usize>, Vec<Scalar>)>,
}

impl ConstantSolver {
    /// `columns[j]` is column `j` of `M`, of length `nrows`.
    pub fn new(nrows: usize, columns: &[Vec<Scalar>]) -> Self {
        let ncols = columns.len();
        // augmented [M | I], eliminated densely
        let width = ncols + nrows;
        let mut rows: Vec<Vec<Scalar>> = (0..nrows)
            .map(|i| {
                let mut r = alloc::vec![Scalar::zero(); width];
                for (j, col) in columns.iter().enumerate() {
                    r[j] = col[i].clone();
                }
                r[ncols + i] = Scalar::one();
                r
            })
            .collect();
        let mut pivot_of_row: Vec<Option<usize>> = alloc::vec![None; nrows];
        let mut r = 0;
        for c in 0..ncols {
            let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][c].recip();
            for v in rows[r].iter_mut() {
                *v *= &inv;
            }
            let src = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (dst, sv) in row.iter_mut().zip(&src) {
                        if !sv.is_zero() {
                            *dst -= &f * sv;
                        }
                    }
                }
            }
            pivot_of_row[r] = Some(c);
            r += 1;
            if r == nrows {
                break;
            }
        }
        let transform = rows
            .into_iter()
            .zip(pivot_of_row)
            .map(|(row, p)| (p, row[ncols..].to_vec()))
            .collect();
        ConstantSolver {
            nrows,
            ncols,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.transform.iter().filter(|(p, _)| p.is_some()).count()
    }

    /// Solves `M x = b` over polynomials; free variables are set to zero.
    pub fn solve_poly(&self, b: &[Polynomial]) -> Option<Vec<Polynomial>> {
        assert_eq!(b.len(), self.nrows);
        let mut x = alloc::vec![Polynomial::zero(); self.ncols];
        for (pivot, t) in &self.transform {
            let mut acc = Polynomial::zero();
            for (ti, bi) in t.iter().zip(b) {
                if !ti.is_zero() && !bi.is_zero() {
                    acc += &bi.scale(ti);
                }
            }
            match pivot {
                Some(c) => x[*c] = acc,
                None => {
                    if !acc.is_zero() {
                        return None;
                    }
                }
            }
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let polys: Vec<Polynomial> = b.iter().cloned().map(Polynomial::constant).collect();
        self.solve_poly(&polys).map(|x| {
            x.into_iter()
                .map(|p| {
                    p.constant_value()
                        .expect("constant input gives constant output")
                })
                .collect()
        })
    }
}

/// Which exterior power a constant subspace lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `Λ^d V*` with `dim V = n`.
    Forms { n: usize, d: usize },
    /// `∨_d V` with `dim V = n`.
    MultiVectors { n: usize, d: usize },
    /// `E_p = ∨_p V ⊕ Λ^{k+1−p} V*`; coordinates list the multivector block first.
    Sections { n: usize, k: usize, p: usize },
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match *self {
            Ambient::Forms { n, d } | Ambient::MultiVectors { n, d } => binomial(n, d),
            Ambient::Sections { n, k, p } => binomial(n, p) + binomial(n, k + 1 - p),
        }
    }
}

/// Constant-coefficient subspace stored as its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstSubspace {
    ambient: Ambient,
    rref: Rref,
}

impl ConstSubspace {
    pub fn zero(ambient: Ambient) -> Self {
        ConstSubspace {
            ambient,
            rref: Rref::from_rows(ambient.dim(), core::iter::empty()),
        }
    }

    pub fn whole(ambient: Ambient) -> Self {
        let n = ambient.dim();
        let rows: Vec<SparseRow> = (0..n).map(|i| alloc::vec![(i, Scalar::one())]).collect();
        Self::from_sparse(ambient, &rows)
    }

    pub fn span(ambient: Ambient, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let n = ambient.dim();
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != n {
                return Err(Error::ChartMismatch {
                    left: n,
                    right: v.len(),
                });
            }
            rows.push(dense_to_sparse(v));
        }
        Ok(Self::from_sparse(ambient, &rows))
    }

    pub fn from_sparse(ambient: Ambient, rows: &[SparseRow]) -> Self {
        ConstSubspace {
            ambient,
            rref: Rref::from_rows(ambient.dim(), rows.iter()),
        }
    }

    /// Span of constant forms (all of the same degree).
    pub fn span_forms(n: usize, d: usize, forms: &[Form]) -> Result<Self> {
        let vecs = forms
            .iter()
            .map(|f| f.to_vector())
            .collect::<Result<Vec<_>>>()?;
        Self::span(Ambient::Forms { n, d }, &vecs)
    }

    pub fn span_multivectors(n: usize, d: usize, mvs: &[MultiVector]) -> Result<Self> {
        let vecs = mvs
            .iter()
            .map(|f| f.to_vector())
            .collect::<Result<Vec<_>>>()?;
        Self::span(Ambient::MultiVectors { n, d }, &vecs)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        let n = self.ambient.dim();
        self.rref.rows().map(|r| sparse_to_dense(r, n)).collect()
    }

    pub fn sparse_basis(&self) -> Vec<SparseRow> {
        self.rref.rows().cloned().collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut e = Echelon::new(self.ambient.dim());
        for r in self.rref.rows() {
            e.insert(r);
        }
        e.contains(&dense_to_sparse(v))
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                left: self.ambient.dim(),
                right: other.ambient.dim(),
            })
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let rows: Vec<SparseRow> = self.rref.rows().chain(other.rref.rows()).cloned().collect();
        Ok(Self::from_sparse(self.ambient, &rows))
    }

    /// `{x : x · v = 0 for all v}` under the coordinate dot product.
    pub fn orthogonal_complement(&self) -> Self {
        Self::from_sparse(self.ambient, &self.rref.kernel())
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let c = self
            .orthogonal_complement()
            .sum(&other.orthogonal_complement())?;
        Ok(c.orthogonal_complement())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.basis().iter().all(|v| other.contains(v)))
    }

    /// Image under a linear map given as a function on dense vectors.
    pub fn map(&self, target: Ambient, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> Result<Self> {
        let imgs: Vec<Vec<Scalar>> = self.basis().iter().map(|v| f(v)).collect();
        Self::span(target, &imgs)
    }
}

/// Bilinear contraction `∨_p V × Λ^a V* → Λ^{a−p} V*` in lexicographic blade bases.
#[derive(Clone, Debug)]
pub struct ContractionPairing {
    pub n: usize,
    pub p: usize,
    pub a: usize,
    mv_basis: Vec<Blade>,
    form_basis: Vec<Blade>,
    out_index: BTreeMap<Blade, usize>,
}

impl ContractionPairing {
    pub fn new(n: usize, p: usize, a: usize) -> Result<Self> {
        if p > a || a > n {
            return Err(Error::InteriorDegree {
                mv_degree: p,
                form_degree: a,
            });
        }
        Ok(ContractionPairing {
            n,
            p,
            a,
            mv_basis: Blade::all_of_degree(n, p),
            form_basis: Blade::all_of_degree(n, a),
            out_index: Blade::index_map(n, a - p),
        })
    }

    pub fn output_dim(&self) -> usize {
        self.out_index.len()
    }

    pub fn apply(&self, u: &[Scalar], alpha: &[Scalar]) -> Vec<Scalar> {
        let mut out = alloc::vec![Scalar::zero(); self.output_dim()];
        for (i, bi) in self.mv_basis.iter().enumerate() {
            if u[i].is_zero() {
                continue;
            }
            for (j, bj) in self.form_basis.iter().enumerate() {
                if alpha[j].is_zero() || !bi.is_subset_of(*bj) {
                    continue;
                }
                let rest = bj.minus(*bi);
                let c = &u[i] * &alpha[j];
                let slot = &mut out[self.out_index[&rest]];
                if bi.merge_sign(rest) > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
        }
        out
    }

    /// Matrix of `U ↦ ι_U α` for fixed `α`: one column per multivector basis element.
    pub fn columns_for_form(&self, alpha: &[Scalar]) -> Vec<Vec<Scalar>> {
        (0..self.mv_basis.len())
            .map(|i| {
                let mut e = alloc::vec![Scalar::zero(); self.mv_basis.len()];
                e[i] = Scalar::one();
                self.apply(&e, alpha)
            })
            .collect()
    }

    /// Matrix of `α ↦ ι_U α` for fixed `U`: one column per form basis element.
    pub fn columns_for_multivector(&self, u: &[Scalar]) -> Vec<Vec<Scalar>> {
        (0..self.form_basis.len())
            .map(|j| {
                let mut e = alloc::vec![Scalar::zero(); self.form_basis.len()];
                e[j] = Scalar::one();
                self.apply(u, &e)
            })
            .collect()
    }
}

/// Rows of the matrix whose columns are given, as sparse equations `Σ_j col_j[r] x_j = 0`.
pub fn equations_from_columns(columns: &[Vec<Scalar>], out_dim: usize) -> Vec<SparseRow> {
    (0..out_dim)
        .map(|r| {
            columns
                .iter()
                .enumerate()
                .filter(|(_, c)| !c[r].is_zero())
                .map(|(j, c)| (j, c[r].clone()))
                .collect::<SparseRow>()
        })
        .filter(|r| !r.is_empty())
        .collect()
}

/// `S^{∘,p} = {U ∈ ∨_p V : ι_U α = 0 for all α ∈ S}` for `S ⊆ Λ^a V*`, `p <= a`.
pub fn annihilator_mv(s: &ConstSubspace, p: usize) -> Result<ConstSubspace> {
    let Ambient::Forms { n, d: a } = s.ambient() else {
        return Err(Error::PreconditionFailure(
            "annihilator_mv expects a subspace of forms".into(),
        ));
    };
    let pairing = ContractionPairing::new(n, p, a)?;
    let mut eqs = Vec::new();
    for alpha in s.basis() {
        let cols = pairing.columns_for_form(&alpha);
        eqs.extend(equations_from_columns(&cols, pairing.output_dim()));
    }
    let rref = Rref::from_rows(binomial(n, p), eqs.iter());
    Ok(ConstSubspace::from_sparse(
        Ambient::MultiVectors { n, d: p },
        &rref.kernel(),
    ))
}

/// `K^{∘,a} = {α ∈ Λ^a V* : ι_U α = 0 for all U ∈ K}` for `K ⊆ ∨_p V`, `a >= p`.
pub fn annihilator_forms(k: &ConstSubspace, a: usize) -> Result<ConstSubspace> {
    let Ambient::MultiVectors { n, d: p } = k.ambient() else {
        return Err(Error::PreconditionFailure(
            "annihilator_forms expects a subspace of multivectors".into(),
        ));
    };
    let pairing = ContractionPairing::new(n, p, a)?;
    let mut eqs = Vec::new();
    for u in k.basis() {
        let cols = pairing.columns_for_multivector(&u);
        eqs.extend(equations_from_columns(&cols, pairing.output_dim()));
    }
    let rref = Rref::from_rows(binomial(n, a), eqs.iter());
    Ok(ConstSubspace::from_sparse(
        Ambient::Forms { n, d: a },
        &rref.kernel(),
    ))
}

/// `span{ι_U α : U ∈ ∨_{d−a} V, α ∈ S}` for `S ⊆ Λ^d V*`.
pub fn contraction_span(s: &ConstSubspace, a: usize) -> Result<ConstSubspace> {
    let Ambient::Forms { n, d } = s.ambient() else {
        return Err(Error::PreconditionFailure(
            "contraction_span expects a subspace of forms".into(),
        ));
    };
    if a > d {
        return Err(Error::DegreeOutOfRange {
            degree: a,
            max: d,
            context: "contraction span",
        });
    }
    let pairing = ContractionPairing::new(n, d - a, d)?;
    let mut vecs = Vec::new();
    for alpha in s.basis() {
        vecs.extend(pairing.columns_for_form(&alpha));
    }
    ConstSubspace::span(Ambient::Forms { n, d: a }, &vecs)
}
