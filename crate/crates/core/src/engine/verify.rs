//! Independent re-verification of a certificate against the instance it
//! claims to linearise. Uses only field arithmetic, matrices and linear
//! algebra.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certificate::{KElement, KMatrix, LinearizationCertificate};
use crate::field::{Field, Scalar};
use crate::linalg::{algebra_span, count_vectors, counting_vector};
use crate::matrix::Matrix;
use crate::module::ModuleInstance;

const EXHAUSTIVE_DIVISION_LIMIT: u64 = 1 << 20;
const DIVISION_SAMPLES: usize = 200;

/// The first check that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub check: &'static str,
    pub message: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.message)
    }
}

fn fail<T>(check: &'static str, message: impl Into<String>) -> Result<T, VerifyFailure> {
    Err(VerifyFailure { check, message: message.into() })
}

struct KAlg<'a> {
    field: &'a Field,
    d: usize,
    c: &'a [Vec<Vec<Scalar>>],
}

impl KAlg<'_> {
    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> KElement {
        let f = self.field;
        let mut out = vec![f.zero(); self.d];
        for i in 0..self.d {
            for j in 0..self.d {
                let xy = f.mul(&a[i], &b[j]);
                if f.is_zero(&xy) {
                    continue;
                }
                for r in 0..self.d {
                    out[r] = f.add(&out[r], &f.mul(&xy, &self.c[i][j][r]));
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> KElement {
        (0..self.d).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect()
    }

    /// Matrix of `y ↦ x y` on coordinates.
    fn left(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<KElement> = (0..self.d).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(self.field, self.d, &cols)
    }
}

fn dims_ok(cert: &LinearizationCertificate, m: &ModuleInstance) -> Result<(), VerifyFailure> {
    let (n, d, k) = (cert.n, cert.d, cert.k);
    if cert.field != *m.field() || n != m.n() {
        return fail("shape", "certificate is for a different field or carrier dimension");
    }
    if k * d != n || d == 0 {
        return fail("shape", format!("k·d = {}·{} does not equal n = {n}", k, d));
    }
    let sk = &cert.skew_field;
    if sk.d != d
        || sk.unit.len() != d
        || sk.structure_constants.len() != d
        || sk.structure_constants.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d))
    {
        return fail("shape", "structure constants are not a d x d x d array");
    }
    if cert.t_basis.len() != d || cert.t_basis.iter().any(|t| t.rows() != n || t.cols() != n) {
        return fail("shape", "t_basis must hold d matrices of size n x n");
    }
    if cert.adapted_basis.rows() != n || cert.adapted_basis.cols() != n {
        return fail("shape", "adapted basis must be n x n");
    }
    let kmat_ok = |x: &KMatrix| x.len() == k && x.iter().all(|r| r.len() == k && r.iter().all(|e| e.len() == d));
    if cert.s_images.len() != m.s_gens().len() || !cert.s_images.iter().all(kmat_ok) {
        return fail("shape", "s_images must hold one k x k array over K per S generator");
    }
    if cert.g_images.as_ref().is_some_and(|g| !g.iter().all(kmat_ok)) {
        return fail("shape", "g_images must be k x k arrays over K");
    }
    let t_count = m.t_gens().map_or(d, <[Matrix]>::len);
    if cert.t_images.len() != t_count || cert.t_images.iter().any(|e| e.len() != d) {
        return fail("shape", "t_images must hold one K element per T generator");
    }
    if cert.r_images.as_ref().is_some_and(|r| r.iter().any(|e| e.len() != d)) {
        return fail("shape", "r_images must be K elements");
    }
    Ok(())
}

fn determinant(m: &Matrix) -> Scalar {
    let f = m.field();
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut det = f.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !f.is_zero(&a[r][col])) else {
            return f.zero();
        };
        if p != col {
            a.swap(p, col);
            det = f.neg(&det);
        }
        let pivot = a[col][col].clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot).expect("nonzero pivot");
        for r in col + 1..n {
            let factor = f.mul(&a[r][col], &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..n {
                let sub = f.mul(&factor, &a[col][c]);
                a[r][c] = f.sub(&a[r][c], &sub);
            }
        }
    }
    det
}

fn is_positive(f: &Field, x: &Scalar) -> bool {
    matches!(x, Scalar::Rat(r) if *r > num_rational::BigRational::from_integer(0.into())) && !f.is_zero(x)
}

fn check_division(k: &KAlg<'_>, cert: &LinearizationCertificate) -> Result<(), VerifyFailure> {
    let f = k.field;
    let d = k.d;
    if f.is_finite() {
        let check = |x: &[Scalar]| -> Result<(), VerifyFailure> {
            if x.iter().any(|c| !f.is_zero(c)) && k.left(x).rank() < d {
                return fail("division", "a nonzero element of K is a zero divisor");
            }
            Ok(())
        };
        if let Some(total) = count_vectors(f, d, EXHAUSTIVE_DIVISION_LIMIT) {
            for i in 1..total {
                check(&counting_vector(f, d, i))?;
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..DIVISION_SAMPLES {
                let x: Vec<Scalar> = (0..d).map(|_| f.random(&mut rng)).collect();
                check(&x)?;
            }
        }
        return Ok(());
    }
    // Over Q: left multiplications are similitudes of a positive definite form.
    let Some(gamma) = &cert.norm_gram else {
        return fail("division", "no norm form supplied for K over the rationals");
    };
    if gamma.rows() != d || gamma.cols() != d || *gamma != gamma.transpose() {
        return fail("division", "norm form must be a symmetric d x d matrix");
    }
    for size in 1..=d {
        if !is_positive(f, &determinant(&gamma.submatrix(0, 0, size, size))) {
            return fail("division", "norm form is not positive definite");
        }
    }
    let lefts: Vec<Matrix> = (0..d).map(|i| k.left(&k.basis(i))).collect();
    let ginv = gamma.inverse().expect("positive definite");
    for i in 0..d {
        for j in i..d {
            let mut p = &(&lefts[i].transpose() * gamma) * &lefts[j];
            if i != j {
                p = &p + &(&(&lefts[j].transpose() * gamma) * &lefts[i]);
            }
            let ratio = &p * &ginv;
            let c = ratio.get(0, 0).clone();
            if ratio != Matrix::identity(f, d).scale(&c) {
                return fail("division", "left multiplications are not similitudes of the norm form");
            }
        }
    }
    Ok(())
}

fn reconstruct_s(k: &KAlg<'_>, kappa: &KMatrix) -> Matrix {
    let d = k.d;
    let size = kappa.len() * d;
    let f = k.field;
    Matrix::from_fn(f, size, size, |row, col| {
        let (i, r) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        (0..d).fold(f.zero(), |acc, m| acc_add(f, acc, &kappa[i][j][m], &k.c[l][m][r]))
    })
}

fn reconstruct_t(k: &KAlg<'_>, tau: &[Scalar], blocks: usize) -> Matrix {
    let d = k.d;
    let size = blocks * d;
    let f = k.field;
    Matrix::from_fn(f, size, size, |row, col| {
        let (i, r) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        if i != j {
            return f.zero();
        }
        (0..d).fold(f.zero(), |acc, m| acc_add(f, acc, &tau[m], &k.c[m][l][r]))
    })
}

fn acc_add(f: &Field, acc: Scalar, a: &Scalar, b: &Scalar) -> Scalar {
    f.add(&acc, &f.mul(a, b))
}

/// Re-checks a certificate; returns the first failing check.
pub fn verify_certificate(m: &ModuleInstance, cert: &LinearizationCertificate) -> Result<(), VerifyFailure> {
    dims_ok(cert, m)?;
    let f = m.field();
    let (n, d) = (cert.n, cert.d);
    let k = KAlg { field: f, d, c: &cert.skew_field.structure_constants };

    for a in 0..d {
        for b in 0..d {
            let ab = k.mul(&k.basis(a), &k.basis(b));
            for c in 0..d {
                let left = k.mul(&ab, &k.basis(c));
                let right = k.mul(&k.basis(a), &k.mul(&k.basis(b), &k.basis(c)));
                if left != right {
                    return fail("associativity", format!("(e{a} e{b}) e{c} differs from e{a} (e{b} e{c})"));
                }
            }
        }
    }
    let unit = &cert.skew_field.unit;
    for a in 0..d {
        let e = k.basis(a);
        if k.mul(unit, &e) != e || k.mul(&e, unit) != e {
            return fail("unit", "the stated unit is not a two-sided identity");
        }
    }
    let commutative = (0..d).all(|a| (0..d).all(|b| k.c[a][b] == k.c[b][a]));
    if commutative != cert.skew_field.commutative {
        return fail("commutativity", "commutativity flag does not match the structure constants");
    }
    check_division(&k, cert)?;

    for a in 0..d {
        for b in 0..d {
            let prod = &cert.t_basis[a] * &cert.t_basis[b];
            let expected = (0..d).fold(Matrix::zeros(f, n, n), |acc, r| &acc + &cert.t_basis[r].scale(&k.c[a][b][r]));
            if prod != expected {
                return fail("realisation", format!("t_basis products disagree with the constants at ({a}, {b})"));
            }
        }
    }
    let unit_matrix = (0..d).fold(Matrix::zeros(f, n, n), |acc, r| &acc + &cert.t_basis[r].scale(&unit[r]));
    if !unit_matrix.is_identity() {
        return fail("realisation", "the unit of K does not act as the identity");
    }

    let b = &cert.adapted_basis;
    let Some(binv) = b.inverse() else {
        return fail("adapted_basis", "the adapted basis is singular");
    };
    let to_original = |x: &Matrix| &(b * x) * &binv;

    for (i, (x, kappa)) in m.s_gens().iter().zip(&cert.s_images).enumerate() {
        if to_original(&reconstruct_s(&k, kappa)) != *x {
            return fail("reproduction", format!("S generator {i} is not reproduced by its image"));
        }
    }
    let t_sources: Vec<Matrix> = m.t_gens().map_or_else(|| cert.t_basis.clone(), <[Matrix]>::to_vec);
    for (i, (x, tau)) in t_sources.iter().zip(&cert.t_images).enumerate() {
        if to_original(&reconstruct_t(&k, tau, cert.k)) != *x {
            return fail("reproduction", format!("T generator {i} is not reproduced by its image"));
        }
    }
    // The basis of K must act as the scalars it names.
    for (i, e) in cert.t_basis.iter().enumerate() {
        if to_original(&reconstruct_t(&k, &k.basis(i), cert.k)) != *e {
            return fail("reproduction", format!("K basis element {i} does not act as a scalar"));
        }
    }
    if let (Some(g), Some(images)) = (m.g_gens(), &cert.g_images) {
        if g.len() != images.len() {
            return fail("shape", "g_images must hold one image per group generator");
        }
        for (i, (x, kappa)) in g.iter().zip(images).enumerate() {
            if to_original(&reconstruct_s(&k, kappa)) != *x {
                return fail("reproduction", format!("group generator {i} is not reproduced by its image"));
            }
        }
    }
    if let (Some(r), Some(images)) = (m.r_gens(), &cert.r_images) {
        if r.len() != images.len() {
            return fail("shape", "r_images must hold one image per ring generator");
        }
        for (i, (x, tau)) in r.iter().zip(images).enumerate() {
            if to_original(&reconstruct_t(&k, tau, cert.k)) != *x {
                return fail("reproduction", format!("ring generator {i} is not reproduced by its image"));
            }
        }
    }

    let dim_s = algebra_span(f, n, m.s_gens(), true).len();
    if dim_s != cert.k * cert.k * d || dim_s != cert.dim_s {
        return fail("dimensions", format!("dim S = {dim_s}, expected k^2 d = {}", cert.k * cert.k * d));
    }
    if cert.dim_t != d {
        return fail("dimensions", "dim T must equal d");
    }
    Ok(())
}
