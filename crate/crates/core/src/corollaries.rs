//! Consequences of the linearisation pipeline: a single ring acting
//! irreducibly, an irreducible group action, and a commutative ring
//! normalised by an irreducible group.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commutant::{algebra_closure, centralizer_basis, is_division_ring, AlgebraBasis, DivisionVerdict};
use crate::engine::certificate::{linearize, Linearization, LinearizationCertificate, SkewFieldPresentation};
use crate::engine::domain::kernel_chain;
use crate::engine::{subspace_witness, violation, Claim, EngineError, EngineOptions};
use crate::linalg::{Echelon, Subspace};
use crate::matrix::Matrix;
use crate::module::{annihilator, irreducible_test, minimal_submodule, Irreducibility, ModuleError, ModuleInstance, Strategy};

// Invertibility of R is checked on every element up to this many.
const EXHAUSTIVE_RING_LIMIT: u64 = 1 << 12;
const RANDOM_RING_SAMPLES: usize = 50;

fn require_irreducible(m: &ModuleInstance, gens: &[Matrix], what: &str, opts: &EngineOptions) -> Result<(), EngineError> {
    match irreducible_test(m.field(), m.n(), gens, &opts.irreducibility())? {
        Irreducibility::Irreducible { .. } => Ok(()),
        Irreducibility::Reducible { witness } => Err(violation(
            Claim::Irreducibility,
            format!("V has a {what}-invariant subspace of dimension {}", witness.dim()),
            subspace_witness(&witness),
        )),
    }
}

fn with_name(m: ModuleInstance, name: &Option<String>) -> ModuleInstance {
    match name {
        Some(n) => m.with_name(n.clone()),
        None => m,
    }
}

/// The instance [`one_sided`] linearises: `S` replaced by `C(C(S))`.
pub fn one_sided_instance(m: &ModuleInstance) -> Result<ModuleInstance, ModuleError> {
    let t = centralizer_basis(m.field(), m.s_gens(), m.n());
    let s = centralizer_basis(m.field(), t.basis(), m.n());
    Ok(with_name(ModuleInstance::new(m.field(), m.n(), s.basis().to_vec())?, &m.name))
}

/// The instance [`group_action`] linearises: `S = C(C(G))`, keeping `G`.
pub fn group_instance(m: &ModuleInstance) -> Result<ModuleInstance, ModuleError> {
    let g = m.g_gens().ok_or_else(|| ModuleError::Validation("group generators are required".into()))?;
    let t = centralizer_basis(m.field(), g, m.n());
    let s = centralizer_basis(m.field(), t.basis(), m.n());
    let inst = ModuleInstance::new(m.field(), m.n(), s.basis().to_vec())?.with_g_gens(g.to_vec())?;
    Ok(with_name(inst, &m.name))
}

/// The instance [`nesin_poizat`] linearises: `S = C(R)`, keeping `G` and `R`.
pub fn np_instance(m: &ModuleInstance) -> Result<ModuleInstance, ModuleError> {
    let (Some(r), Some(g)) = (m.r_gens(), m.g_gens()) else {
        return Err(ModuleError::Validation("ring and group generators are required".into()));
    };
    let s = centralizer_basis(m.field(), r, m.n());
    let inst = ModuleInstance::new(m.field(), m.n(), s.basis().to_vec())?
        .with_g_gens(g.to_vec())?
        .with_r_gens(r.to_vec())?;
    Ok(with_name(inst, &m.name))
}

#[derive(Debug, Clone)]
pub struct OneSided {
    pub t: AlgebraBasis,
    pub division_strategy: Strategy,
    /// `None` when the pipeline could not decide within its budget.
    pub certificate: Option<LinearizationCertificate>,
}

/// `T = C(S)` is a division ring; replacing `S` by `C(T)` and linearising.
pub fn one_sided(m: &ModuleInstance, opts: &EngineOptions) -> Result<OneSided, EngineError> {
    if m.s_gens().is_empty() {
        return Err(EngineError::Precondition("S needs at least one generator".into()));
    }
    require_irreducible(m, m.s_gens(), "S", opts)?;
    let field = m.field();
    let n = m.n();
    let t = centralizer_basis(field, m.s_gens(), n);
    let replaced = one_sided_instance(m)?;
    require_irreducible(&replaced, replaced.s_gens(), "C(T)", opts)?;
    let division_strategy = match is_division_ring(&t, &opts.irreducibility())? {
        DivisionVerdict::Division { strategy } => strategy,
        DivisionVerdict::NotDivision { x, .. } => {
            return Err(violation(Claim::Numbered(11), "C(S) has zero divisors", Some(x)))
        }
    };
    let certificate = match linearize(&replaced, opts) {
        Ok(lin) => Some(lin.certificate),
        Err(EngineError::Inconclusive(_) | EngineError::BudgetExhausted(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(OneSided { t, division_strategy, certificate })
}

/// `T = C(G)`, `S = C(T) ⊇ G`, then linearise; the certificate carries the
/// images of the group generators.
pub fn group_action(m: &ModuleInstance, opts: &EngineOptions) -> Result<Linearization, EngineError> {
    let Some(g) = m.g_gens() else {
        return Err(EngineError::Precondition("group generators are required".into()));
    };
    require_irreducible(m, g, "G", opts)?;
    let field = m.field();
    let n = m.n();
    let t = centralizer_basis(field, g, n);
    let s = centralizer_basis(field, t.basis(), n);
    if let Some(x) = g.iter().find(|x| !s.contains(x)) {
        return Err(violation(Claim::Containment, "a group generator is not in C(C(G))", Some(x.clone())));
    }
    let mut lin = linearize(&group_instance(m)?, opts)?;
    lin.certificate.check_log.waived("infinite_commutant", "C(G) is finite-dimensional; nothing to check");
    Ok(lin)
}

/// Findings of the commutative-ring pipeline, up to the point it stopped.
#[derive(Debug, Clone)]
pub struct NPReport {
    pub r: AlgebraBasis,
    /// An `R`-irreducible submodule.
    pub w: Subspace,
    /// `Ann_R(W)` in `R` coordinates.
    pub p_ideal: Subspace,
    /// The distinct conjugates `h p h⁻¹`, with `P[0] = p`.
    pub conjugates: Vec<Subspace>,
    /// `representatives[i]` conjugates `p` to `conjugates[i]`.
    pub representatives: Vec<Matrix>,
    /// `representatives[i] · W`.
    pub translates: Vec<Subspace>,
    /// Elements in every conjugate but the `i`-th, when `|P| > 1`.
    pub avoidance_witnesses: Vec<Matrix>,
    /// Whether `Σ translates` is direct, when `|P| > 1`.
    pub direct: Option<bool>,
    pub frac: Option<SkewFieldPresentation>,
}

fn conjugate_ideal(r: &AlgebraBasis, ideal: &Subspace, h: &Matrix, h_inv: &Matrix) -> Subspace {
    let coords: Vec<Vec<_>> = ideal
        .basis()
        .iter()
        .map(|c| r.coordinates(&(&(h * &r.element(c)) * h_inv)).expect("G normalises R"))
        .collect();
    Subspace::span(r.field(), r.dim(), coords)
}

/// Runs the pipeline up to the conjugacy count; errors only on failed
/// preconditions.
pub fn np_analyze(m: &ModuleInstance, opts: &EngineOptions) -> Result<NPReport, EngineError> {
    let (Some(r_gens), Some(g_gens)) = (m.r_gens(), m.g_gens()) else {
        return Err(EngineError::Precondition("ring and group generators are required".into()));
    };
    let field = m.field();
    let n = m.n();
    let r = algebra_closure(field, r_gens, n, true);
    if !r.is_commutative() {
        return Err(violation(Claim::Commutativity, "R is not commutative", None));
    }
    for b in r.basis() {
        if kernel_chain(b).union.is_full() {
            return Err(violation(Claim::KernelChain, "R contains a nilpotent element", Some(b.clone())));
        }
    }
    let inverses: Vec<Matrix> = g_gens.iter().map(|g| g.inverse().expect("validated invertible")).collect();
    for (g, gi) in g_gens.iter().zip(&inverses) {
        if r.basis().iter().any(|b| !r.contains(&(&(g * b) * gi))) {
            return Err(violation(Claim::Normalisation, "G does not normalise R", Some(g.clone())));
        }
    }
    require_irreducible(m, g_gens, "G", opts)?;

    let w = minimal_submodule(field, n, r.basis(), &opts.irreducibility())?;
    let p_ideal = annihilator(&r, &w);

    let id = crate::matrix::Matrix::identity(field, n);
    let mut conjugates = vec![p_ideal.clone()];
    let mut representatives = vec![id.clone()];
    let mut queue = VecDeque::from([(p_ideal.clone(), id.clone(), id)]);
    while let Some((ideal, h, h_inv)) = queue.pop_front() {
        for (g, gi) in g_gens.iter().zip(&inverses) {
            let next = conjugate_ideal(&r, &ideal, g, gi);
            if conjugates.contains(&next) {
                continue;
            }
            let (gh, gh_inv) = (g * &h, &h_inv * gi);
            conjugates.push(next.clone());
            representatives.push(gh.clone());
            queue.push_back((next, gh, gh_inv));
        }
    }
    let translates: Vec<Subspace> = representatives.iter().map(|h| w.image_under(h)).collect();

    let mut meet = Subspace::full(field, r.dim());
    for c in &conjugates {
        meet = meet.intersection(c).expect("same ambient");
    }
    if !meet.is_zero() {
        return Err(violation(
            Claim::Faithfulness,
            "the conjugates of Ann_R(W) have a nonzero common element",
            Some(r.element(&meet.basis()[0])),
        ));
    }

    let mut report = NPReport {
        r,
        w,
        p_ideal,
        conjugates,
        representatives,
        translates,
        avoidance_witnesses: Vec::new(),
        direct: None,
        frac: None,
    };
    if report.conjugates.len() > 1 {
        prime_avoidance(&mut report)?;
    }
    Ok(report)
}

fn prime_avoidance(report: &mut NPReport) -> Result<(), EngineError> {
    let r = &report.r;
    let p = &report.conjugates;
    for i in 0..p.len() {
        let mut x = r.unit_matrix().expect("R contains the identity");
        for (j, pj) in p.iter().enumerate() {
            if j == i {
                continue;
            }
            let Some(c) = pj.basis().iter().find(|c| !p[i].contains(c)) else {
                return Err(violation(Claim::ConjugateSingleton, "one conjugate ideal contains another", None));
            };
            x = &x * &r.element(c);
        }
        let coords = r.coordinates(&x).expect("R is closed under products");
        let ok = !p[i].contains(&coords) && p.iter().enumerate().all(|(j, pj)| j == i || pj.contains(&coords));
        if !ok {
            return Err(violation(Claim::ConjugateSingleton, "prime avoidance failed", Some(x)));
        }
        report.avoidance_witnesses.push(x);
    }
    let field = r.field();
    let n = r.n();
    let mut ech = Echelon::new(field, n);
    let mut total = 0;
    for t in &report.translates {
        total += t.dim();
        for v in t.basis() {
            ech.insert(v);
        }
    }
    report.direct = Some(ech.len() == total);
    Ok(())
}

/// `Frac(R)`: `R` itself over a finite field, otherwise the closure of `R`
/// under inverses of its basis elements until the span stabilises.
fn fraction_field(r: &AlgebraBasis) -> AlgebraBasis {
    if r.field().is_finite() {
        return r.clone();
    }
    let mut current = r.clone();
    loop {
        let mut gens = current.basis().to_vec();
        gens.extend(current.basis().iter().filter_map(Matrix::inverse));
        let next = algebra_closure(r.field(), &gens, r.n(), true);
        if next.dim() == current.dim() {
            return next;
        }
        current = next;
    }
}

/// The full commutative-ring pipeline: the report and the certificate.
pub fn nesin_poizat(m: &ModuleInstance, opts: &EngineOptions) -> Result<(NPReport, Linearization), EngineError> {
    let mut report = np_analyze(m, opts)?;
    if report.conjugates.len() > 1 {
        return Err(violation(
            Claim::ConjugateSingleton,
            format!(
                "G permutes {} conjugates of Ann_R(W) (direct sum of translates: {}); a connected group would fix it",
                report.conjugates.len(),
                report.direct.unwrap_or(false)
            ),
            None,
        ));
    }
    let field = m.field();
    let n = m.n();
    let r = &report.r;
    let fail = |x: &Matrix| violation(Claim::KernelChain, "a nonzero element of R is not invertible", Some(x.clone()));
    if r.order(EXHAUSTIVE_RING_LIMIT).is_some() {
        if let Some(x) = r.elements().find(|x| !x.is_zero() && x.rank() < n) {
            return Err(fail(&x));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..RANDOM_RING_SAMPLES {
            let coords: Vec<_> = (0..r.dim()).map(|_| field.random(&mut rng)).collect();
            let x = r.element(&coords);
            if !x.is_zero() && (x.rank() < n || !kernel_chain(&x).union.is_zero()) {
                return Err(fail(&x));
            }
        }
    }

    let frac = fraction_field(r);
    if let DivisionVerdict::NotDivision { x, .. } = is_division_ring(&frac, &opts.irreducibility())? {
        return Err(violation(Claim::KernelChain, "Frac(R) has zero divisors", Some(x)));
    }
    report.frac = SkewFieldPresentation::from_algebra(&frac);

    let g_gens = m.g_gens().expect("checked by np_analyze");
    let s = centralizer_basis(field, report.r.basis(), n);
    if let Some(x) = g_gens.iter().find(|x| !s.contains(x)) {
        return Err(violation(Claim::Containment, "G does not centralise R", Some(x.clone())));
    }
    let mut lin = linearize(&np_instance(m)?, opts)?;
    lin.certificate.check_log.waived("connectedness", "replaced by the requirement |P| = 1");
    lin.certificate.check_log.waived("unboundedness", "R is finite-dimensional; kernel chains checked directly");
    Ok((report, lin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::fixtures;

    fn units(field: &Field, n: usize) -> Vec<Matrix> {
        (0..n * n).map(|k| Matrix::unit(field, n, k / n, k % n)).collect()
    }

    #[test]
    fn one_sided_examples() {
        let f2 = Field::prime(2).unwrap();
        let out = one_sided(&ModuleInstance::new(&f2, 2, units(&f2, 2)).unwrap(), &Default::default()).unwrap();
        assert_eq!(out.t.dim(), 1);

        let f3 = Field::prime(3).unwrap();
        let out = one_sided(&ModuleInstance::new(&f3, 2, vec![fixtures::singer_f3()]).unwrap(), &Default::default())
            .unwrap();
        assert_eq!(out.t.order(1000), Some(9));
        assert_eq!(out.certificate.unwrap().k, 1);

        let q = Field::rational();
        let (li, lj) = fixtures::quaternion_left(&q);
        let out = one_sided(&ModuleInstance::new(&q, 4, vec![li, lj]).unwrap(), &Default::default()).unwrap();
        assert_eq!(out.t.dim(), 4);
        assert!(!out.t.is_commutative());
    }

    #[test]
    fn group_action_examples() {
        let f3 = Field::prime(3).unwrap();
        let c = fixtures::singer_f3();
        let m = ModuleInstance::new(&f3, 2, vec![]).unwrap().with_g_gens(vec![c]).unwrap();
        let cert = group_action(&m, &Default::default()).unwrap().certificate;
        assert_eq!((cert.d, cert.k), (2, 1));
        assert_eq!(cert.g_images.unwrap().len(), 1);

        let f2 = Field::prime(2).unwrap();
        let g = vec![Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]), Matrix::from_ints(&f2, &[&[0, 1], &[1, 1]])];
        let m = ModuleInstance::new(&f2, 2, vec![]).unwrap().with_g_gens(g).unwrap();
        let cert = group_action(&m, &Default::default()).unwrap().certificate;
        assert_eq!((cert.d, cert.k), (1, 2));

        let m = ModuleInstance::new(&f2, 2, vec![])
            .unwrap()
            .with_g_gens(vec![Matrix::from_ints(&f2, &[&[1, 1], &[0, 1]])])
            .unwrap();
        let err = group_action(&m, &Default::default()).unwrap_err();
        assert_eq!(err.violation().unwrap().claim, Claim::Irreducibility);
    }

    #[test]
    fn nesin_poizat_singer() {
        let f3 = Field::prime(3).unwrap();
        let c = fixtures::singer_f3();
        let m = ModuleInstance::new(&f3, 2, vec![c.clone()])
            .unwrap()
            .with_g_gens(vec![c.clone()])
            .unwrap()
            .with_r_gens(vec![c])
            .unwrap();
        let (report, lin) = nesin_poizat(&m, &Default::default()).unwrap();
        assert!(report.w.is_full());
        assert!(report.p_ideal.is_zero());
        assert_eq!(report.conjugates.len(), 1);
        let frac = report.frac.unwrap();
        assert!(frac.commutative);
        assert_eq!(frac.d, 2);
        let cert = lin.certificate;
        assert_eq!(cert.r_images.unwrap().len(), 1);
        assert_eq!(cert.g_images.unwrap().len(), 1);
    }

    #[test]
    fn nesin_poizat_scalars_and_gl2() {
        let f2 = Field::prime(2).unwrap();
        let g = vec![Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]), Matrix::from_ints(&f2, &[&[0, 1], &[1, 1]])];
        let m = ModuleInstance::new(&f2, 2, vec![])
            .unwrap()
            .with_g_gens(g)
            .unwrap()
            .with_r_gens(vec![Matrix::identity(&f2, 2)])
            .unwrap();
        let (report, lin) = nesin_poizat(&m, &Default::default()).unwrap();
        assert!(report.p_ideal.is_zero());
        assert_eq!((lin.certificate.d, lin.certificate.k), (1, 2));
    }

    #[test]
    fn nilpotent_ring_rejected() {
        let f2 = Field::prime(2).unwrap();
        let nil = Matrix::from_ints(&f2, &[&[0, 1], &[0, 0]]);
        let m = ModuleInstance::new(&f2, 2, vec![])
            .unwrap()
            .with_g_gens(vec![fixtures::f4_generator()])
            .unwrap()
            .with_r_gens(vec![nil.clone()])
            .unwrap();
        let err = nesin_poizat(&m, &Default::default()).unwrap_err();
        let v = err.violation().unwrap();
        assert_eq!(v.claim, Claim::KernelChain);
        assert_eq!(v.witness.as_ref(), Some(&nil));
    }

    #[test]
    fn permuted_ideals_give_partial_report() {
        // R = diagonal matrices, G swaps the coordinates: two conjugate ideals.
        let f3 = Field::prime(3).unwrap();
        let r = vec![Matrix::unit(&f3, 2, 0, 0), Matrix::unit(&f3, 2, 1, 1)];
        let swap = Matrix::from_ints(&f3, &[&[0, 1], &[1, 0]]);
        let diag = Matrix::from_ints(&f3, &[&[1, 0], &[0, 2]]);
        let m = ModuleInstance::new(&f3, 2, vec![])
            .unwrap()
            .with_g_gens(vec![swap, diag])
            .unwrap()
            .with_r_gens(r)
            .unwrap();
        let report = np_analyze(&m, &Default::default()).unwrap();
        assert_eq!(report.conjugates.len(), 2);
        assert_eq!(report.direct, Some(true));
        assert_eq!(report.avoidance_witnesses.len(), 2);
        // Ann_R(hW) = h p h⁻¹.
        for (h, conj) in report.representatives.iter().zip(&report.conjugates) {
            assert_eq!(annihilator(&report.r, &report.w.image_under(h)), *conj);
        }
        let err = nesin_poizat(&m, &Default::default()).unwrap_err();
        assert_eq!(err.violation().unwrap().claim, Claim::ConjugateSingleton);
    }
}
