//! The full pipeline and the linearisation certificate it emits.
//!
//! `K` is realised as `T` itself: its basis is the canonical basis of `T`
//! and its structure constants are those of matrix multiplication. The
//! adapted basis of `V` is grouped into blocks `(e_1 v_j, ..., e_d v_j)`, one
//! per line of the decomposition, where `e_1, ..., e_d` is the basis of `K`.
//! An operator `X` commuting with `T` then satisfies
//! `X v_j = Σ_i κ_ij v_i` with `κ_ij ∈ K`, and the certificate records the
//! `k x k` array `κ`.

use super::decompose::{compress, direct_sum_decompose, local_inverse, CompressedPair, Decomposition};
use super::delta::{compute_delta, DeltaResult, DeltaStrategy};
use super::domain::{check_domain_surjective, kernel_chain};
use super::lines::{analyze_lines, bridge, check_line_kernels, line_complement, LineData};
use super::verify::verify_certificate;
use super::{subspace_witness, violation, CheckLog, Claim, EngineError, EngineOptions};
use crate::commutant::{algebra_closure, centralizer_basis, is_division_ring, AlgebraBasis, DivisionVerdict};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::module::{irreducible_test, Irreducibility, ModuleInstance};

// Lines beyond this many are not individually re-checked for (vi)-(ix).
const LINE_CHECK_CAP: usize = 64;

/// Coordinates of an element of `K` in its basis.
pub type KElement = Vec<Scalar>;
/// Row-major array of `K` elements.
pub type KMatrix = Vec<Vec<KElement>>;

/// A finite-dimensional algebra over the ground field by structure constants:
/// `e_i e_j = Σ_r c[i][j][r] e_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewFieldPresentation {
    pub d: usize,
    pub structure_constants: Vec<Vec<Vec<Scalar>>>,
    pub unit: KElement,
    pub commutative: bool,
}

impl SkewFieldPresentation {
    pub fn from_algebra(a: &AlgebraBasis) -> Option<SkewFieldPresentation> {
        Some(SkewFieldPresentation {
            d: a.dim(),
            structure_constants: a.structure_constants(),
            unit: a.unit()?.to_vec(),
            commutative: a.is_commutative(),
        })
    }

    pub fn mul(&self, field: &Field, a: &[Scalar], b: &[Scalar]) -> KElement {
        let mut out = vec![field.zero(); self.d];
        for (i, x) in a.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if field.is_zero(y) {
                    continue;
                }
                let xy = field.mul(x, y);
                for (r, c) in self.structure_constants[i][j].iter().enumerate() {
                    out[r] = field.add(&out[r], &field.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Image of `X ∘ Y` from the images of `X` and `Y`:
    /// `(X∘Y)_lj = Σ_i Y_ij · X_li`.
    pub fn compose(&self, field: &Field, x: &KMatrix, y: &KMatrix) -> KMatrix {
        let k = x.len();
        (0..k)
            .map(|l| {
                (0..k)
                    .map(|j| {
                        (0..k).fold(vec![field.zero(); self.d], |acc, i| {
                            let p = self.mul(field, &y[i][j], &x[l][i]);
                            acc.iter().zip(&p).map(|(a, b)| field.add(a, b)).collect()
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// The image of the identity operator.
    pub fn identity_matrix(&self, field: &Field, k: usize) -> KMatrix {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { self.unit.clone() } else { vec![field.zero(); self.d] }).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizationCertificate {
    pub name: Option<String>,
    pub field: Field,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub skew_field: SkewFieldPresentation,
    /// The matrices realising the basis of `K` on `V`.
    pub t_basis: Vec<Matrix>,
    /// Columns `e_l v_j`, block by block.
    pub adapted_basis: Matrix,
    pub s_images: Vec<KMatrix>,
    /// Images of the `T` generators, or of `t_basis` when none were given.
    pub t_images: Vec<KElement>,
    pub g_images: Option<Vec<KMatrix>>,
    pub r_images: Option<Vec<KElement>>,
    /// Over the rationals: `Γ_ij = (e_i v_1) · (e_j v_1)`.
    pub norm_gram: Option<Matrix>,
    pub dim_s: usize,
    pub dim_t: usize,
    pub delta_route: String,
    pub check_log: CheckLog,
}

/// Everything the pipeline computed on the way to the certificate.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub certificate: LinearizationCertificate,
    pub s: AlgebraBasis,
    pub t: AlgebraBasis,
    pub delta: DeltaResult,
    pub line_data: LineData,
    pub decomposition: Decomposition,
    pub compressed: Vec<CompressedPair>,
}

fn coords_s_type(binv: &Matrix, basis_cols: &[Vec<Scalar>], x: &Matrix, k: usize, d: usize) -> KMatrix {
    // κ_ij[m] is the (i, m) coordinate of X v_j.
    let mut out: KMatrix = vec![vec![Vec::new(); k]; k];
    for j in 0..k {
        let w = binv.apply(&x.apply(&basis_cols[j * d]));
        for (i, row) in out.iter_mut().enumerate() {
            row[j] = w[i * d..(i + 1) * d].to_vec();
        }
    }
    out
}

fn reconstruct_s_type(field: &Field, k_field: &SkewFieldPresentation, kappa: &KMatrix) -> Matrix {
    let d = k_field.d;
    let k = kappa.len();
    let c = &k_field.structure_constants;
    Matrix::from_fn(field, k * d, k * d, |row, col| {
        let (i, r) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        let mut acc = field.zero();
        for (m, km) in kappa[i][j].iter().enumerate() {
            acc = field.add(&acc, &field.mul(km, &c[l][m][r]));
        }
        acc
    })
}

fn gram(field: &Field, vectors: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_fn(field, vectors.len(), vectors.len(), |i, j| {
        vectors[i].iter().zip(&vectors[j]).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
    })
}

/// Runs the pipeline on `m` and returns a certificate that has already
/// passed [`verify_certificate`].
pub fn linearize(m: &ModuleInstance, opts: &EngineOptions) -> Result<Linearization, EngineError> {
    let field = m.field().clone();
    let n = m.n();
    if m.s_gens().is_empty() {
        return Err(EngineError::Precondition("S needs at least one generator".into()));
    }
    let irr_opts = opts.irreducibility();
    let mut log = CheckLog::default();

    match irreducible_test(&field, n, m.s_gens(), &irr_opts)? {
        Irreducibility::Reducible { witness } => {
            return Err(violation(
                Claim::Irreducibility,
                format!("V has an S-invariant subspace of dimension {}", witness.dim()),
                subspace_witness(&witness),
            ))
        }
        Irreducibility::Irreducible { strategy } => {
            log.verified(Claim::Irreducibility, format!("V is S-irreducible ({})", strategy.as_str()))
        }
    }

    let s = algebra_closure(&field, m.s_gens(), n, true);
    let t = match m.t_gens() {
        Some(g) => algebra_closure(&field, g, n, true),
        None => centralizer_basis(&field, m.s_gens(), n),
    };

    check_domain_surjective(m, &t, opts.seed)?;
    log.verified(Claim::Numbered(1), "nonzero elements of T act surjectively with zero kernel");

    if m.t_gens().is_some() && centralizer_basis(&field, s.basis(), n) != t {
        return Err(violation(Claim::DoubleCentralizer, "C(S) differs from T", None));
    }
    if centralizer_basis(&field, t.basis(), n) != s {
        return Err(violation(Claim::DoubleCentralizer, "C(T) differs from S", None));
    }
    log.verified(Claim::DoubleCentralizer, "C(S) = T and C(T) = S");
    log.waived("unboundedness", "S or T unbounded has no content for finite-dimensional carriers");

    for b in t.basis() {
        let chain = kernel_chain(b);
        if !chain.union.is_zero() {
            return Err(violation(Claim::KernelChain, "a kernel chain of T does not vanish", Some(b.clone())));
        }
    }
    log.verified(Claim::KernelChain, "kernel chains of T basis elements stabilise at 0");

    if let DivisionVerdict::NotDivision { x, .. } = is_division_ring(&t, &irr_opts)? {
        return Err(violation(Claim::Numbered(11), "T has zero divisors", Some(x)));
    }

    let delta = compute_delta(&s, Some(&t), DeltaStrategy::Auto, opts)?;
    let ld = analyze_lines(m, &s, &t, &delta)?;
    log.verified(Claim::Numbered(2), format!("{} lines, all T-invariant", ld.lines.len()));
    log.verified(Claim::Numbered(3), "nonzero images of a line are lines");
    log.verified(Claim::Numbered(4), "the lines span V");
    log.verified(Claim::Numbered(5), "S is transitive on lines");

    let checked = &ld.lines[..ld.lines.len().min(LINE_CHECK_CAP)];
    for line in checked {
        check_line_kernels(&s, line)?;
    }
    log.verified(Claim::Numbered(6), "nonzero elements of S are injective on lines");
    for (idx, line) in checked.iter().enumerate() {
        for x in t.basis() {
            if line.space.restrict(x).inverse().is_none() {
                let claim = if idx == 0 { Claim::Numbered(7) } else { Claim::Numbered(8) };
                return Err(violation(claim, "T does not act by automorphisms on a line", Some(x.clone())));
            }
        }
    }
    log.verified(Claim::Numbered(7), "T acts by automorphisms on the first line");
    log.verified(Claim::Numbered(8), "T acts by automorphisms on every line");
    for line in checked {
        line_complement(line, &s)?;
    }
    log.verified(Claim::Numbered(9), "every line has a T-invariant complement");

    let dec = direct_sum_decompose(m, &s, &t, &ld)?;
    let k = dec.lines.len();
    log.verified(Claim::Numbered(10), format!("V is a direct sum of {k} lines"));
    log.verified(Claim::Numbered(11), "T is a division ring acting by automorphisms");

    let first = dec.lines[0].clone();
    let mut movers = Vec::with_capacity(k);
    for line in &dec.lines {
        let w = bridge(&s, &first.space, line)
            .filter(|w| first.space.image_under(w) == line.space)
            .ok_or_else(|| violation(Claim::Numbered(5), "no element of S carries the first line onto another", None))?;
        movers.push(local_inverse(&w, &first, line, &s)?);
    }
    log.verified(Claim::Numbered(12), "transitivity witnesses extend to invertible elements of S");

    let compressed = (0..k).map(|i| compress(&s, &t, &dec, i, &irr_opts)).collect::<Result<Vec<_>, _>>()?;
    log.verified(Claim::Numbered(13), "S_L and T_L are division rings");
    log.verified(Claim::Numbered(14), "S_L and T_L are mutual centralisers on each line");

    let d = t.dim();
    if delta.delta != d {
        return Err(violation(Claim::Numbered(15), format!("δ = {} but dim T = {d}", delta.delta), None));
    }
    let k_field = SkewFieldPresentation::from_algebra(&t).expect("T contains the identity");
    let v1 = first.space.basis()[0].clone();
    let base: Vec<Vec<Scalar>> = movers.iter().map(|s_j| s_j.apply(&v1)).collect();
    let columns: Vec<Vec<Scalar>> = base.iter().flat_map(|v| t.basis().iter().map(move |e| e.apply(v))).collect();
    let adapted = Matrix::from_columns(&field, n, &columns);
    let binv = adapted
        .inverse()
        .ok_or_else(|| violation(Claim::Numbered(15), "the adapted basis is singular", Some(adapted.clone())))?;

    let s_type = |x: &Matrix| coords_s_type(&binv, &columns, x, k, d);
    let t_type = |x: &Matrix| t.coordinates(x);
    let s_images: Vec<KMatrix> = m.s_gens().iter().map(s_type).collect();
    for (x, kappa) in m.s_gens().iter().zip(&s_images) {
        let back = &(&adapted * &reconstruct_s_type(&field, &k_field, kappa)) * &binv;
        if back != *x {
            return Err(violation(Claim::Numbered(15), "an S generator is not K-linear", Some(x.clone())));
        }
    }
    let t_sources: Vec<Matrix> = m.t_gens().map_or_else(|| t.basis().to_vec(), <[Matrix]>::to_vec);
    let t_images: Vec<KElement> = t_sources.iter().map(|x| t_type(x).expect("generator lies in T")).collect();
    let g_images = match m.g_gens() {
        Some(g) => {
            if let Some(x) = g.iter().find(|x| !s.contains(x)) {
                return Err(violation(Claim::Containment, "a group generator is not in S", Some(x.clone())));
            }
            Some(g.iter().map(s_type).collect())
        }
        None => None,
    };
    let r_images = match m.r_gens() {
        Some(r) => Some(
            r.iter()
                .map(|x| {
                    t_type(x).ok_or_else(|| {
                        violation(Claim::Containment, "a ring generator is not in T", Some(x.clone()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };

    if n != k * d || s.dim() != k * k * d {
        return Err(violation(
            Claim::Numbered(15),
            format!("dimension identities fail: n = {n}, k = {k}, d = {d}, dim S = {}", s.dim()),
            None,
        ));
    }
    log.verified(Claim::Numbered(15), format!("K has dimension {d}; V = K^{k}; dim S = k^2 d"));

    let norm_gram = (!field.is_finite()).then(|| gram(&field, &columns[..d]));
    let certificate = LinearizationCertificate {
        name: m.name.clone(),
        field: field.clone(),
        n,
        d,
        k,
        skew_field: k_field,
        t_basis: t.basis().to_vec(),
        adapted_basis: adapted,
        s_images,
        t_images,
        g_images,
        r_images,
        norm_gram,
        dim_s: s.dim(),
        dim_t: t.dim(),
        delta_route: delta.route.as_str().into(),
        check_log: log,
    };
    if let Err(failure) = verify_certificate(m, &certificate) {
        if failure.check == "division" && !field.is_finite() {
            return Err(EngineError::Inconclusive(format!(
                "K is a division ring but has no norm-form certificate: {}",
                failure.message
            )));
        }
        return Err(violation(Claim::Numbered(15), format!("certificate failed verification: {failure}"), None));
    }
    Ok(Linearization { certificate, s, t, delta, line_data: ld, decomposition: dec, compressed })
}
