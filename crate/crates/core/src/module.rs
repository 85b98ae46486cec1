//! Modules presented by generator matrices acting on `F^n`.
//!
//! Irreducibility is decided either exhaustively (spin every projective
//! point, feasible when `q^n <= 2^16`) or with the Holt–Rees form of the
//! MeatAxe: pick a random algebra element `θ`, an irreducible factor `f` of
//! its minimal polynomial with `nullity f(θ) = deg f`, and apply Norton's
//! criterion to a kernel vector of `f(θ)` and of its transpose. Over the
//! rationals a third route is available: if every element of the generated
//! algebra `A` satisfies `x xᵀ ∈ Q·I` and `dim A = n`, every nonzero element
//! is invertible and `V` is one-dimensional over the division algebra `A`.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::commutant::AlgebraBasis;
use crate::field::{Field, Scalar};
use crate::linalg::{algebra_span, count_vectors, counting_vector, kernel, Echelon, LinalgError, Subspace};
use crate::matrix::{linear_combination, Matrix};
use crate::poly::{self, Poly};

/// Exhaustive strategies are used up to this many vectors.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
pub const DEFAULT_MEATAXE_BUDGET: usize = 200;
// Irreducible factors tried by the MeatAxe have q^deg below this bound.
const FACTOR_SEARCH_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("invalid module: {0}")]
    Validation(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("span is not closed under products")]
    NotProductClosed,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `V = F^n` with generator families for `S`, and optionally `T`, a group `G`
/// and a commutative ring `R`.
#[derive(Debug, Clone)]
pub struct ModuleInstance {
    pub name: Option<String>,
    field: Field,
    n: usize,
    s_gens: Vec<Matrix>,
    t_gens: Option<Vec<Matrix>>,
    g_gens: Option<Vec<Matrix>>,
    r_gens: Option<Vec<Matrix>>,
}

fn check_shapes(field: &Field, n: usize, gens: &[Matrix], what: &str) -> Result<(), ModuleError> {
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(ModuleError::Validation(format!(
                "{what}[{i}] is {}x{}, expected {n}x{n}",
                g.rows(),
                g.cols()
            )));
        }
        if g.field() != field {
            return Err(ModuleError::Validation(format!("{what}[{i}] lives over {}, expected {field}", g.field())));
        }
    }
    Ok(())
}

impl ModuleInstance {
    pub fn new(field: &Field, n: usize, s_gens: Vec<Matrix>) -> Result<Self, ModuleError> {
        if n == 0 {
            return Err(ModuleError::Validation("carrier dimension must be positive".into()));
        }
        check_shapes(field, n, &s_gens, "s_gens")?;
        Ok(ModuleInstance { name: None, field: field.clone(), n, s_gens, t_gens: None, g_gens: None, r_gens: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_t_gens(mut self, t: Vec<Matrix>) -> Result<Self, ModuleError> {
        check_shapes(&self.field, self.n, &t, "t_gens")?;
        self.t_gens = Some(t);
        Ok(self)
    }

    /// Group generators must be invertible.
    pub fn with_g_gens(mut self, g: Vec<Matrix>) -> Result<Self, ModuleError> {
        check_shapes(&self.field, self.n, &g, "g_gens")?;
        if let Some(i) = g.iter().position(|m| m.rank() < self.n) {
            return Err(ModuleError::Validation(format!("g_gens[{i}] is singular")));
        }
        self.g_gens = Some(g);
        Ok(self)
    }

    /// Ring generators must commute pairwise.
    pub fn with_r_gens(mut self, r: Vec<Matrix>) -> Result<Self, ModuleError> {
        check_shapes(&self.field, self.n, &r, "r_gens")?;
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                if !r[i].commutes_with(&r[j]) {
                    return Err(ModuleError::Validation(format!("r_gens[{i}] and r_gens[{j}] do not commute")));
                }
            }
        }
        self.r_gens = Some(r);
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_gens(&self) -> &[Matrix] {
        &self.s_gens
    }

    pub fn t_gens(&self) -> Option<&[Matrix]> {
        self.t_gens.as_deref()
    }

    pub fn g_gens(&self) -> Option<&[Matrix]> {
        self.g_gens.as_deref()
    }

    pub fn r_gens(&self) -> Option<&[Matrix]> {
        self.r_gens.as_deref()
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("<unnamed>")
    }

    pub fn spin(&self, gens: &[Matrix], seeds: &[Vec<Scalar>]) -> Subspace {
        spin(&self.field, self.n, gens, seeds)
    }

    pub fn irreducible_test(&self, gens: &[Matrix], opts: &IrreducibilityOptions) -> Result<Irreducibility, ModuleError> {
        irreducible_test(&self.field, self.n, gens, opts)
    }

    pub fn annihilator(&self, algebra: &AlgebraBasis, w: &Subspace) -> Subspace {
        annihilator(algebra, w)
    }

    pub fn minimal_submodule(&self, gens: &[Matrix], opts: &IrreducibilityOptions) -> Result<Subspace, ModuleError> {
        minimal_submodule(&self.field, self.n, gens, opts)
    }
}

/// Smallest subspace containing `seeds` and invariant under `gens`.
pub fn spin(field: &Field, n: usize, gens: &[Matrix], seeds: &[Vec<Scalar>]) -> Subspace {
    let mut ech = Echelon::new(field, n);
    let mut queue = VecDeque::new();
    for s in seeds {
        if ech.insert(s) {
            queue.push_back(s.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        if ech.is_full() {
            break;
        }
        for g in gens {
            let w = g.apply(&v);
            if ech.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    ech.into_subspace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive when `q^n <= 2^16`, MeatAxe otherwise (plus the norm-form
    /// route over the rationals).
    Auto,
    Exhaustive,
    MeatAxe,
}

/// How an irreducibility (or division) verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    MeatAxe,
    NormForm,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::MeatAxe => "meataxe",
            Strategy::NormForm => "norm_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrreducibilityOptions {
    pub method: Method,
    pub budget: usize,
    pub seed: u64,
}

impl Default for IrreducibilityOptions {
    fn default() -> Self {
        IrreducibilityOptions { method: Method::Auto, budget: DEFAULT_MEATAXE_BUDGET, seed: 0 }
    }
}

impl IrreducibilityOptions {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible { strategy: Strategy },
    Reducible { witness: Subspace },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }
}

fn reducible(gens: &[Matrix], witness: Subspace) -> Irreducibility {
    assert!(
        !witness.is_zero() && !witness.is_full() && gens.iter().all(|g| witness.is_invariant_under(g)),
        "reducibility witness failed verification"
    );
    Irreducibility::Reducible { witness }
}

pub fn irreducible_test(
    field: &Field,
    n: usize,
    gens: &[Matrix],
    opts: &IrreducibilityOptions,
) -> Result<Irreducibility, ModuleError> {
    if n == 0 {
        return Err(ModuleError::Validation("the zero module is not irreducible".into()));
    }
    check_shapes(field, n, gens, "gens")?;
    match opts.method {
        Method::Exhaustive => exhaustive(field, n, gens),
        Method::MeatAxe => meataxe(field, n, gens, opts.budget, opts.seed),
        Method::Auto => {
            if count_vectors(field, n, EXHAUSTIVE_LIMIT).is_some() {
                return exhaustive(field, n, gens);
            }
            if !field.is_finite() && norm_form_certifies(field, &algebra_span(field, n, gens, true)) {
                return norm_form_verdict(field, n, gens);
            }
            meataxe(field, n, gens, opts.budget, opts.seed)
        }
    }
}

/// Every element `x` of the span satisfies `x xᵀ ∈ Q·I`. Over an ordered
/// field this forces `x xᵀ = c(x)·I` with `c(x) > 0` for `x ≠ 0`, so every
/// nonzero element of the span is invertible.
pub fn norm_form_certifies(field: &Field, basis: &[Matrix]) -> bool {
    if field.is_finite() || basis.is_empty() {
        return false;
    }
    let is_scalar = |m: &Matrix| {
        let c = m.get(0, 0).clone();
        *m == Matrix::identity(field, m.rows()).scale(&c)
    };
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let a = &basis[i] * &basis[j].transpose();
            let sym = if i == j { a } else { &a + &(&basis[j] * &basis[i].transpose()) };
            if !is_scalar(&sym) {
                return false;
            }
        }
    }
    true
}

fn norm_form_verdict(field: &Field, n: usize, gens: &[Matrix]) -> Result<Irreducibility, ModuleError> {
    let algebra = algebra_span(field, n, gens, true);
    if algebra.len() == n {
        return Ok(Irreducibility::Irreducible { strategy: Strategy::NormForm });
    }
    // Free over a division algebra of smaller dimension: any cyclic submodule is proper.
    let w = spin(field, n, gens, &[crate::linalg::unit_vector(field, n, 0)]);
    Ok(reducible(gens, w))
}

fn is_projective_rep(field: &Field, v: &[Scalar]) -> bool {
    v.iter().find(|x| !field.is_zero(x)).is_some_and(|x| field.is_one(x))
}

fn exhaustive(field: &Field, n: usize, gens: &[Matrix]) -> Result<Irreducibility, ModuleError> {
    let total = count_vectors(field, n, u64::MAX)
        .ok_or_else(|| ModuleError::Validation("exhaustive search needs a finite field".into()))?;
    for idx in 1..total {
        let v = counting_vector(field, n, idx);
        if !is_projective_rep(field, &v) {
            continue;
        }
        let w = spin(field, n, gens, &[v]);
        if !w.is_full() {
            return Ok(reducible(gens, w));
        }
    }
    Ok(Irreducibility::Irreducible { strategy: Strategy::Exhaustive })
}

fn random_vector(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..n).map(|_| field.random(rng)).collect();
        if v.iter().any(|x| !field.is_zero(x)) {
            return v;
        }
    }
}

fn meataxe(field: &Field, n: usize, gens: &[Matrix], budget: usize, seed: u64) -> Result<Irreducibility, ModuleError> {
    if n == 1 {
        return Ok(Irreducibility::Irreducible { strategy: Strategy::MeatAxe });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<Matrix> = gens.to_vec();
    for a in gens {
        for b in gens {
            words.push(a * b);
        }
    }
    words.push(Matrix::identity(field, n));
    let transposed: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    let candidates: Vec<Poly> =
        if field.is_finite() { poly::small_irreducibles(field, n, FACTOR_SEARCH_LIMIT) } else { Vec::new() };

    for _ in 0..budget {
        let w = spin(field, n, gens, &[random_vector(field, n, &mut rng)]);
        if !w.is_full() {
            return Ok(reducible(gens, w));
        }
        let terms: Vec<(Scalar, &Matrix)> = words.iter().map(|m| (field.random(&mut rng), m)).collect();
        let theta = linear_combination(field, n, n, &terms);
        let mu = poly::minimal_polynomial(&theta);
        let factors: Vec<Poly> = if field.is_finite() {
            candidates
                .iter()
                .filter(|f| f.len() <= mu.len() && poly::divides_monic(field, f, &mu))
                .cloned()
                .collect()
        } else {
            poly::rational_roots(field, &mu).into_iter().map(|r| vec![field.neg(&r), field.one()]).collect()
        };
        for f in factors {
            let psi = poly::eval_matrix(field, &f, &theta);
            let null = kernel(&psi);
            let Some(v) = null.basis().first() else {
                continue;
            };
            let w = spin(field, n, gens, &[v.clone()]);
            if !w.is_full() {
                return Ok(reducible(gens, w));
            }
            if null.dim() != f.len() - 1 {
                continue;
            }
            let dual_null = kernel(&psi.transpose());
            let u = dual_null.basis()[0].clone();
            let dual = spin(field, n, &transposed, &[u]);
            if dual.is_full() {
                return Ok(Irreducibility::Irreducible { strategy: Strategy::MeatAxe });
            }
            return Ok(reducible(gens, dual.annihilator()));
        }
    }
    Err(ModuleError::Inconclusive(format!("MeatAxe found no usable algebra element in {budget} attempts")))
}

/// `{r in algebra : r W = 0}` as a subspace of the algebra's coordinate space.
pub fn annihilator(algebra: &AlgebraBasis, w: &Subspace) -> Subspace {
    let field = algebra.field();
    let d = algebra.dim();
    if w.is_zero() {
        return Subspace::full(field, d);
    }
    // Column i stacks b_i w_1, ..., b_i w_m.
    let cols: Vec<Vec<Scalar>> =
        algebra.basis().iter().map(|b| w.basis().iter().flat_map(|v| b.apply(v)).collect()).collect();
    kernel(&Matrix::from_columns(field, algebra.n() * w.dim(), &cols))
}

/// A nonzero `gens`-invariant subspace with no proper nonzero invariant
/// subspace. When exhaustive search is feasible this is the spin of the first
/// vector (counting order) whose spin has minimal dimension.
pub fn minimal_submodule(
    field: &Field,
    n: usize,
    gens: &[Matrix],
    opts: &IrreducibilityOptions,
) -> Result<Subspace, ModuleError> {
    if n == 0 {
        return Err(ModuleError::Validation("the zero module has no nonzero submodule".into()));
    }
    if let Some(total) = count_vectors(field, n, EXHAUSTIVE_LIMIT) {
        let mut best: Option<Subspace> = None;
        for idx in 1..total {
            let v = counting_vector(field, n, idx);
            if !is_projective_rep(field, &v) {
                continue;
            }
            let w = spin(field, n, gens, &[v]);
            if best.as_ref().is_none_or(|b| w.dim() < b.dim()) {
                let done = w.dim() == 1;
                best = Some(w);
                if done {
                    break;
                }
            }
        }
        return Ok(best.expect("F^n has a nonzero vector"));
    }
    let mut current = Subspace::full(field, n);
    loop {
        let restricted: Vec<Matrix> = gens.iter().map(|g| current.restrict(g)).collect();
        match irreducible_test(field, current.dim(), &restricted, opts)? {
            Irreducibility::Irreducible { .. } => return Ok(current),
            Irreducibility::Reducible { witness } => {
                let lifted: Vec<Vec<Scalar>> = witness.basis().iter().map(|c| current.combine(c)).collect();
                current = Subspace::span(field, n, lifted);
            }
        }
    }
}
