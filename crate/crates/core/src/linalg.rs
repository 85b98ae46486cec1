//! Exact dense linear algebra: reduced row echelon forms, kernels, images,
//! linear solving and subspace arithmetic.
//!
//! Pivoting is deterministic (first nonzero entry in the column), so every
//! derived basis is reproducible. Subspaces always store their basis in RREF,
//! which makes equality of subspaces a plain comparison of bases.

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
}

/// Output of [`rref`]: the nonzero rows of the reduced form and their pivot columns.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination of `rows` (each of length `ncols`) to reduced row
/// echelon form. Zero rows are dropped.
pub fn rref(field: &Field, mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Reduced {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(&rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[col]) {
                continue;
            }
            let c = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&c, p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Reduced { rows, pivots }
}

/// Incrementally maintained RREF basis, used for spinning and span closures.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon { field: field.clone(), dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&out[p]) {
                continue;
            }
            let c = out[p].clone();
            for (x, r) in out.iter_mut().zip(row).skip(p) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match ambient dimension");
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).unwrap();
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace { field: self.field, ambient: self.dim, basis: self.rows, pivots: self.pivots }
    }
}

/// A linear subspace of `F^n`, stored by its RREF basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| self.field.format(x)).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "span{{{}}} <= {}^{}", rows.join(", "), self.field, self.ambient)
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Echelon::new(field, ambient).into_subspace()
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, (0..ambient).map(|i| unit_vector(field, ambient, i)))
    }

    pub fn span<I>(field: &Field, ambient: usize, vectors: I) -> Subspace
    where
        I: IntoIterator,
        I::Item: AsRef<[Scalar]>,
    {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            e.insert(v.as_ref());
        }
        e.into_subspace()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn echelon(&self) -> Echelon {
        Echelon { field: self.field.clone(), dim: self.ambient, rows: self.basis.clone(), pivots: self.pivots.clone() }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient && self.echelon().contains(v)
    }

    /// Coordinates of `v` in the RREF basis, `None` when `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// The vector with the given coordinates in the RREF basis.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in out.iter_mut().zip(b) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let mut e = self.echelon();
        for v in &other.basis {
            e.insert(v);
        }
        Ok(e.into_subspace())
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(&self.field, self.ambient));
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        let m = Matrix::from_columns(&self.field, self.ambient, &cols);
        let k = self.dim();
        let ker = kernel(&m);
        Ok(Subspace::span(&self.field, self.ambient, ker.basis.iter().map(|c| self.combine(&c[..k]))))
    }

    /// Image of the subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        Subspace::span(&self.field, m.rows(), self.basis.iter().map(|v| m.apply(v)))
    }

    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.apply(v)))
    }

    /// The annihilator `{w : w · v = 0 for all v}` in the dual space.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(&self.field, self.ambient);
        }
        let m = Matrix::from_rows(&self.field, self.basis.clone()).expect("basis rows share a length");
        kernel(&m)
    }

    /// Matrix of an operator that leaves the subspace invariant, in the RREF
    /// basis coordinates. Panics if the subspace is not invariant.
    pub fn restrict(&self, m: &Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self
            .basis
            .iter()
            .map(|v| self.coordinates(&m.apply(v)).expect("operator must leave the subspace invariant"))
            .collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Every vector of the subspace, in counting order of coordinates
    /// (finite fields only).
    pub fn vectors(&self) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        let q = self.field.order().expect("enumeration needs a finite field");
        let total = q.checked_pow(self.dim() as u32).expect("subspace too large to enumerate");
        (0..total).map(move |i| self.combine(&counting_vector(&self.field, self.dim(), i)))
    }
}

pub fn unit_vector(field: &Field, n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()
}

/// The `index`-th vector of `F^len` in counting order: little-endian base-`q`
/// digits, coordinate 0 varying fastest. Index 1 is `e_1`.
pub fn counting_vector(field: &Field, len: usize, mut index: u64) -> Vec<Scalar> {
    let q = field.order().expect("counting order needs a finite field");
    (0..len)
        .map(|_| {
            let d = index % q;
            index /= q;
            field.element(d)
        })
        .collect()
}

/// `q^len` if it fits below `limit`.
pub fn count_vectors(field: &Field, len: usize, limit: u64) -> Option<u64> {
    let q = field.order()?;
    let mut total: u64 = 1;
    for _ in 0..len {
        total = total.checked_mul(q)?;
        if total > limit {
            return None;
        }
    }
    Some(total)
}

#[derive(Debug, Clone)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Subspace,
    pub image: Subspace,
}

pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field();
    let red = rref(f, m.row_vecs(), m.cols());
    let mut is_pivot = vec![false; m.cols()];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..m.cols()).filter(|&c| !is_pivot[c]).map(|free| {
        let mut v = vec![f.zero(); m.cols()];
        v[free] = f.one();
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            v[p] = f.neg(&row[free]);
        }
        v
    });
    Subspace::span(f, m.cols(), vectors.collect::<Vec<_>>())
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.field(), m.rows(), m.columns())
}

pub fn rank_kernel_image(m: &Matrix) -> RankKernelImage {
    let image = image(m);
    RankKernelImage { rank: image.dim(), kernel: kernel(m), image }
}

/// Solves `a x = b`. Returns the solution with free variables set to zero, or
/// `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::ShapeMismatch { expected: a.rows(), found: b.len() });
    }
    let f = a.field();
    let n = a.cols();
    let rows: Vec<Vec<Scalar>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let red = rref(f, rows, n + 1);
    if red.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); n];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[n].clone();
    }
    Ok(Some(x))
}

/// Sum and intersection of two subspaces of the same ambient space.
pub fn subspace_sum_intersect(u: &Subspace, w: &Subspace) -> Result<(Subspace, Subspace), LinalgError> {
    Ok((u.sum(w)?, u.intersection(w)?))
}

/// Canonical (RREF over flattened entries) basis of the smallest
/// product-closed span containing `gens`, and the identity when asked.
pub fn algebra_span(field: &Field, n: usize, gens: &[Matrix], with_identity: bool) -> Vec<Matrix> {
    let mut ech = Echelon::new(field, n * n);
    let mut found: Vec<Matrix> = Vec::new();
    let candidates = with_identity.then(|| Matrix::identity(field, n)).into_iter().chain(gens.iter().cloned());
    for g in candidates {
        if ech.insert(g.flatten()) {
            found.push(g);
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..=i {
            if ech.is_full() {
                break;
            }
            for prod in [&found[i] * &found[j], &found[j] * &found[i]] {
                if ech.insert(prod.flatten()) {
                    found.push(prod);
                }
            }
        }
        i += 1;
    }
    ech.into_subspace()
        .basis()
        .iter()
        .map(|v| Matrix::from_flat(field, n, n, v.clone()).expect("flattened n x n matrix"))
        .collect()
}
