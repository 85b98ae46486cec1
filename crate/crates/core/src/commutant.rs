//! Matrix algebras: commutants, generated subalgebras and division-ring
//! certification.

use crate::field::{Field, Scalar};
use crate::linalg::{algebra_span, counting_vector, kernel, solve_linear, Subspace};
use crate::matrix::{linear_combination, Matrix};
use crate::module::{self, Irreducibility, IrreducibilityOptions, ModuleError, ModuleInstance, Strategy};

/// A product-closed span of `n x n` matrices with its canonical basis (RREF
/// over the flattened entries).
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    field: Field,
    n: usize,
    basis: Vec<Matrix>,
    span: Subspace,
    unit: Option<Vec<Scalar>>,
}

impl PartialEq for AlgebraBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.span == other.span
    }
}

impl Eq for AlgebraBasis {}

impl AlgebraBasis {
    /// Canonicalises the span of `mats` and checks product closure.
    pub fn new(field: &Field, n: usize, mats: &[Matrix]) -> Result<AlgebraBasis, ModuleError> {
        for m in mats {
            if m.rows() != n || m.cols() != n || m.field() != field {
                return Err(ModuleError::Validation(format!("expected {n}x{n} matrices over {field}")));
            }
        }
        let span = Subspace::span(field, n * n, mats.iter().map(Matrix::flatten));
        let basis: Vec<Matrix> = span
            .basis()
            .iter()
            .map(|v| Matrix::from_flat(field, n, n, v.clone()).expect("flattened n x n matrix"))
            .collect();
        for a in &basis {
            for b in &basis {
                if !span.contains((a * b).flatten()) {
                    return Err(ModuleError::NotProductClosed);
                }
            }
        }
        let mut alg = AlgebraBasis { field: field.clone(), n, basis, span, unit: None };
        alg.unit = alg.find_unit();
        Ok(alg)
    }

    fn find_unit(&self) -> Option<Vec<Scalar>> {
        let id = Matrix::identity(&self.field, self.n);
        if let Some(c) = self.coordinates(&id) {
            return Some(c);
        }
        if self.basis.is_empty() {
            return None;
        }
        // u b_j = b_j and b_j u = b_j for every basis element.
        let d = self.dim();
        let nn = self.n * self.n;
        let mut cols: Vec<Vec<Scalar>> = vec![Vec::with_capacity(2 * d * nn); d];
        let mut rhs = Vec::with_capacity(2 * d * nn);
        for bj in &self.basis {
            for (i, bi) in self.basis.iter().enumerate() {
                cols[i].extend_from_slice((bi * bj).flatten());
                cols[i].extend_from_slice((bj * bi).flatten());
            }
            rhs.extend_from_slice(bj.flatten());
            rhs.extend_from_slice(bj.flatten());
        }
        let a = Matrix::from_columns(&self.field, rhs.len(), &cols);
        solve_linear(&a, &rhs).ok().flatten()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    pub fn unit_matrix(&self) -> Option<Matrix> {
        self.unit.as_ref().map(|c| self.element(c))
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.span.contains(m.flatten())
    }

    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        if m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        self.span.coordinates(m.flatten())
    }

    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        let terms: Vec<(Scalar, &Matrix)> = coords.iter().cloned().zip(&self.basis).collect();
        linear_combination(&self.field, self.n, self.n, &terms)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (i + 1..self.dim()).all(|j| self.basis[i].commutes_with(&self.basis[j])))
    }

    /// `c[i][j][r]` with `b_i b_j = Σ_r c[i][j][r] b_r`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        self.basis
            .iter()
            .map(|a| {
                self.basis
                    .iter()
                    .map(|b| self.coordinates(&(a * b)).expect("algebra is product-closed"))
                    .collect()
            })
            .collect()
    }

    /// Left multiplication by `x` on the coordinate space.
    pub fn left_multiplication(&self, x: &Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> =
            self.basis.iter().map(|b| self.coordinates(&(x * b)).expect("algebra is product-closed")).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Right multiplication by `x` on the coordinate space.
    pub fn right_multiplication(&self, x: &Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> =
            self.basis.iter().map(|b| self.coordinates(&(b * x)).expect("algebra is product-closed")).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// The left regular representation on the basis.
    pub fn left_regular(&self) -> Vec<Matrix> {
        self.basis.iter().map(|b| self.left_multiplication(b)).collect()
    }

    /// Number of elements, when finite and below `limit`.
    pub fn order(&self, limit: u64) -> Option<u64> {
        crate::linalg::count_vectors(&self.field, self.dim(), limit)
    }

    /// Every element in counting order of coordinates (finite fields only).
    pub fn elements(&self) -> impl Iterator<Item = Matrix> + '_ {
        let total = self.order(u64::MAX).expect("enumeration needs a finite algebra");
        (0..total).map(move |i| self.element(&counting_vector(&self.field, self.dim(), i)))
    }
}

/// `{X : X A = A X for all A in gens}`. The empty family yields `Mat_n(F)`.
pub fn centralizer_basis(field: &Field, gens: &[Matrix], n: usize) -> AlgebraBasis {
    let nn = n * n;
    let mut data: Vec<Scalar> = Vec::with_capacity(gens.len() * nn * nn);
    for a in gens {
        for i in 0..n {
            for j in 0..n {
                // (XA - AX)_{ij} = Σ_k X_ik A_kj - Σ_k A_ik X_kj
                let mut row = vec![field.zero(); nn];
                for k in 0..n {
                    row[i * n + k] = field.add(&row[i * n + k], a.get(k, j));
                    row[k * n + j] = field.sub(&row[k * n + j], a.get(i, k));
                }
                data.extend(row);
            }
        }
    }
    let rows = gens.len() * nn;
    let system = Matrix::from_flat(field, rows, nn, data).expect("commutation system shape");
    let sol = kernel(&system);
    let mats: Vec<Matrix> =
        sol.basis().iter().map(|v| Matrix::from_flat(field, n, n, v.clone()).expect("n x n")).collect();
    AlgebraBasis::new(field, n, &mats).expect("a commutant is an algebra")
}

pub fn algebra_closure(field: &Field, gens: &[Matrix], n: usize, adjoin_identity: bool) -> AlgebraBasis {
    AlgebraBasis::new(field, n, &algebra_span(field, n, gens, adjoin_identity)).expect("closure is product-closed")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionVerdict {
    Division { strategy: Strategy },
    /// Nonzero `x`, `y` in the algebra with `x y = 0`.
    NotDivision { x: Matrix, y: Matrix },
}

impl DivisionVerdict {
    pub fn is_division(&self) -> bool {
        matches!(self, DivisionVerdict::Division { .. })
    }
}

/// Division iff the left regular module is irreducible. A proper left ideal
/// `W` yields `y ∈ W` and `x ∈ ker R_y`, so `x y = 0`.
pub fn is_division_ring(a: &AlgebraBasis, opts: &IrreducibilityOptions) -> Result<DivisionVerdict, ModuleError> {
    if !a.is_unital() || a.dim() == 0 {
        return Err(ModuleError::Validation("division test needs a nonzero unital algebra".into()));
    }
    if !a.field().is_finite() && module::norm_form_certifies(a.field(), a.basis()) {
        return Ok(DivisionVerdict::Division { strategy: Strategy::NormForm });
    }
    let regular = a.left_regular();
    match module::irreducible_test(a.field(), a.dim(), &regular, opts)? {
        Irreducibility::Irreducible { strategy } => Ok(DivisionVerdict::Division { strategy }),
        Irreducibility::Reducible { witness } => {
            let y = a.element(&witness.basis()[0]);
            let ker = kernel(&a.right_multiplication(&y));
            let x = a.element(ker.basis().first().expect("a proper left ideal has a nontrivial annihilator"));
            assert!(!x.is_zero() && !y.is_zero() && (&x * &y).is_zero(), "zero-divisor witness failed verification");
            Ok(DivisionVerdict::NotDivision { x, y })
        }
    }
}

#[derive(Debug, Clone)]
pub struct DoubleCentralizerReport {
    pub t: AlgebraBasis,
    pub s_cc: AlgebraBasis,
    pub closure: AlgebraBasis,
    pub biequal: bool,
}

pub fn double_centralizer_check(m: &ModuleInstance) -> DoubleCentralizerReport {
    let f = m.field();
    let t = centralizer_basis(f, m.s_gens(), m.n());
    let s_cc = centralizer_basis(f, t.basis(), m.n());
    let closure = algebra_closure(f, m.s_gens(), m.n(), true);
    let biequal = s_cc == closure;
    DoubleCentralizerReport { t, s_cc, closure, biequal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    /// Brute-force commutant: every matrix in `Mat_n(F)` filtered by commutation.
    fn brute_commutant(field: &Field, gens: &[Matrix], n: usize) -> Subspace {
        let total = crate::linalg::count_vectors(field, n * n, 1 << 16).unwrap();
        let hits = (0..total)
            .map(|i| Matrix::from_flat(field, n, n, counting_vector(field, n * n, i)).unwrap())
            .filter(|x| gens.iter().all(|g| x.commutes_with(g)));
        Subspace::span(field, n * n, hits.map(|m| m.flatten().to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn centralizer_examples() {
        let f = f2();
        assert_eq!(centralizer_basis(&f, &[Matrix::identity(&f, 2)], 2).dim(), 4);
        let a = fixtures::f4_generator();
        let c = centralizer_basis(&f, &[a.clone()], 2);
        assert_eq!(c.dim(), 2);
        assert_eq!(*c.span(), brute_commutant(&f, &[a], 2));
        assert!(c.is_commutative());

        let q = Field::rational();
        let (li, lj) = fixtures::quaternion_left(&q);
        let c = centralizer_basis(&q, &[li, lj], 4);
        assert_eq!(c.dim(), 4);
        let (ri, rj) = fixtures::quaternion_right(&q);
        assert!(c.contains(&ri) && c.contains(&rj));
    }

    #[test]
    fn closure_examples() {
        let f = f2();
        assert_eq!(algebra_closure(&f, &[], 2, true).dim(), 1);
        let a = fixtures::f4_generator();
        assert_eq!(algebra_closure(&f, &[a.clone()], 2, true).dim(), 2);
        let phi = Matrix::from_ints(&f, &[&[1, 1], &[0, 1]]);
        assert_eq!(algebra_closure(&f, &[a, phi], 2, true).dim(), 4);
    }

    #[test]
    fn division_examples() {
        let f = f2();
        let f4 = centralizer_basis(&f, &[fixtures::f4_generator()], 2);
        assert!(is_division_ring(&f4, &Default::default()).unwrap().is_division());
        let full = algebra_closure(&f, &[Matrix::unit(&f, 2, 0, 1), Matrix::unit(&f, 2, 1, 0)], 2, true);
        match is_division_ring(&full, &Default::default()).unwrap() {
            DivisionVerdict::NotDivision { x, y } => {
                assert!(!x.is_zero() && !y.is_zero() && (&x * &y).is_zero())
            }
            v => panic!("expected zero divisors, got {v:?}"),
        }
        let q = Field::rational();
        let (li, lj) = fixtures::quaternion_left(&q);
        let c = centralizer_basis(&q, &[li, lj], 4);
        assert!(is_division_ring(&c, &Default::default()).unwrap().is_division());
    }

    #[test]
    fn unit_of_non_identity_algebra() {
        let f = f2();
        let e11 = Matrix::unit(&f, 2, 0, 0);
        let alg = AlgebraBasis::new(&f, 2, &[e11.clone()]).unwrap();
        assert_eq!(alg.unit_matrix(), Some(e11));
        let nil = AlgebraBasis::new(&f, 2, &[Matrix::unit(&f, 2, 0, 1)]).unwrap();
        assert!(!nil.is_unital());
        assert_eq!(
            AlgebraBasis::new(&f, 2, &[Matrix::unit(&f, 2, 0, 1), Matrix::unit(&f, 2, 1, 0)]),
            Err(ModuleError::NotProductClosed)
        );
    }

    #[test]
    fn double_centralizer_examples() {
        let f = f2();
        let units: Vec<Matrix> = (0..4).map(|k| Matrix::unit(&f, 2, k / 2, k % 2)).collect();
        let r = double_centralizer_check(&ModuleInstance::new(&f, 2, units).unwrap());
        assert_eq!(r.t.dim(), 1);
        assert!(r.biequal);
        let r = double_centralizer_check(&ModuleInstance::new(&f, 2, vec![fixtures::f4_generator()]).unwrap());
        assert_eq!(r.t, r.closure);
        assert!(r.biequal);
        // Upper-triangular algebra: C = scalars, so C(C(S)) is all of Mat_2.
        let upper = vec![Matrix::unit(&f, 2, 0, 0), Matrix::unit(&f, 2, 0, 1), Matrix::unit(&f, 2, 1, 1)];
        let r = double_centralizer_check(&ModuleInstance::new(&f, 2, upper.clone()).unwrap());
        assert_eq!(*r.t.span(), brute_commutant(&f, &upper, 2));
        assert_eq!(r.t.dim(), 1);
        assert_eq!(r.s_cc.dim(), 4);
        assert!(!r.biequal);
    }
}
