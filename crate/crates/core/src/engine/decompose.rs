//! Direct-sum decomposition into lines, local inverses and the compressed
//! pair `(S_L, T_L)`.

use super::lines::{line_complement, Line, LineData};
use super::{subspace_witness, violation, Claim, EngineError};
use crate::commutant::{centralizer_basis, is_division_ring, AlgebraBasis, DivisionVerdict};
use crate::field::Scalar;
use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::module::{IrreducibilityOptions, ModuleInstance};

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub lines: Vec<Line>,
    /// `complements[i]` is the complement of `lines[i]` found by the greedy step.
    pub complements: Vec<Subspace>,
    pub projections: Vec<Matrix>,
    /// Columns are the RREF bases of the chosen lines, in order.
    pub change_of_basis: Matrix,
}

/// Projection onto `onto` with kernel `along`; `None` unless `V = onto ⊕ along`.
pub fn projection(onto: &Subspace, along: &Subspace) -> Option<Matrix> {
    let field = onto.field();
    let n = onto.ambient();
    if onto.dim() + along.dim() != n {
        return None;
    }
    let mut cols = onto.basis().to_vec();
    cols.extend(along.basis().iter().cloned());
    let b = Matrix::from_columns(field, n, &cols);
    let inv = b.inverse()?;
    let keep = onto.dim();
    let left = b.submatrix(0, 0, n, keep);
    let right = inv.submatrix(0, 0, keep, n);
    Some(&left * &right)
}

fn sum_all<'a>(field: &crate::field::Field, n: usize, spaces: impl Iterator<Item = &'a Subspace>) -> Subspace {
    spaces.fold(Subspace::zero(field, n), |acc, s| acc.sum(s).expect("same ambient"))
}

fn intersect_all<'a>(field: &crate::field::Field, n: usize, spaces: impl Iterator<Item = &'a Subspace>) -> Subspace {
    spaces.fold(Subspace::full(field, n), |acc, s| acc.intersection(s).expect("same ambient"))
}

/// Greedy construction of `V = L_1 ⊕ ... ⊕ L_k` with each new line inside
/// every earlier complement; checks claim (x).
pub fn direct_sum_decompose(
    m: &ModuleInstance,
    s: &AlgebraBasis,
    t: &AlgebraBasis,
    ld: &LineData,
) -> Result<Decomposition, EngineError> {
    let field = m.field();
    let n = m.n();
    let first = ld.lines[0].clone();
    let (h0, _) = line_complement(&first, s)?;
    let mut chosen = vec![first];
    let mut complements = vec![h0];

    loop {
        let lsum = sum_all(field, n, chosen.iter().map(|l| &l.space));
        if lsum.is_full() {
            break;
        }
        let hcap = intersect_all(field, n, complements.iter());
        let q = projection(&hcap, &lsum).ok_or_else(|| {
            violation(
                Claim::Numbered(10),
                "the chosen lines and the meet of their complements do not split the space",
                subspace_witness(&hcap),
            )
        })?;
        if !s.contains(&q) {
            return Err(violation(Claim::Numbered(10), "the projection q is not in S", Some(q)));
        }
        let Some(next) = ld.lines.iter().find(|l| !l.space.image_under(&q).is_zero()) else {
            return Err(violation(Claim::Numbered(10), "no line survives the projection q", Some(q)));
        };
        let space = next.space.image_under(&q);
        if space.dim() != ld.delta {
            return Err(violation(
                Claim::Numbered(3),
                format!("q maps a line onto a subspace of dimension {}", space.dim()),
                Some(q),
            ));
        }
        let line = Line { space, generator: &q * &next.generator };
        if let Some(x) = t.basis().iter().find(|x| !line.space.is_invariant_under(x)) {
            return Err(violation(Claim::Numbered(2), "a line is not T-invariant", Some(x.clone())));
        }
        let (h, _) = line_complement(&line, s)?;
        chosen.push(line);
        complements.push(h);
    }

    let cols: Vec<Vec<Scalar>> = chosen.iter().flat_map(|l| l.space.basis().iter().cloned()).collect();
    let change_of_basis = Matrix::from_columns(field, n, &cols);
    let inv = change_of_basis.inverse().ok_or_else(|| {
        violation(Claim::Numbered(10), "the chosen lines are not independent", Some(change_of_basis.clone()))
    })?;
    let mut projections = Vec::with_capacity(chosen.len());
    let mut offset = 0;
    for l in &chosen {
        let d = l.space.dim();
        let p = &change_of_basis.submatrix(0, offset, n, d) * &inv.submatrix(offset, 0, d, n);
        offset += d;
        if !s.contains(&p) {
            return Err(violation(Claim::Numbered(10), "a line projection is not in S", Some(p)));
        }
        projections.push(p);
    }
    Ok(Decomposition { lines: chosen, complements, projections, change_of_basis })
}

/// Completes `sigma: L_1 → L_2` to an invertible element of `S`; checks
/// claim (xii).
pub fn local_inverse(sigma: &Matrix, l1: &Line, l2: &Line, s: &AlgebraBasis) -> Result<Matrix, EngineError> {
    let field = s.field();
    let n = s.n();
    if l1.space.image_under(sigma) != l2.space || l1.space.dim() != l2.space.dim() {
        return Err(EngineError::Precondition("sigma does not map L_1 onto L_2".into()));
    }
    let (h1, _) = line_complement(l1, s)?;
    let meet = l2.space.intersection(&h1).expect("same ambient");
    let mut domain: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut images: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for v in l1.space.basis() {
        domain.push(v.clone());
        images.push(sigma.apply(v));
    }
    if meet.is_zero() {
        for v in h1.basis() {
            domain.push(v.clone());
            images.push(v.clone());
        }
    } else if meet == l2.space {
        let (h2, _) = line_complement(l2, s)?;
        let rest = h1.intersection(&h2).expect("same ambient");
        // sigma restricted to L_1, in RREF coordinates of L_1 and L_2.
        let cols: Vec<Vec<Scalar>> = l1
            .space
            .basis()
            .iter()
            .map(|v| l2.space.coordinates(&sigma.apply(v)).expect("sigma maps into L_2"))
            .collect();
        let restricted = Matrix::from_columns(field, l2.space.dim(), &cols);
        let back = restricted.inverse().ok_or_else(|| {
            EngineError::Precondition("sigma is not injective on L_1".into())
        })?;
        for (k, v) in l2.space.basis().iter().enumerate() {
            domain.push(v.clone());
            images.push(l1.space.combine(&back.column(k)));
        }
        for v in rest.basis() {
            domain.push(v.clone());
            images.push(v.clone());
        }
    } else {
        return Err(violation(
            Claim::Numbered(12),
            "L_2 meets the complement of L_1 in a proper nonzero subspace",
            subspace_witness(&meet),
        ));
    }
    let d = Matrix::from_columns(field, n, &domain);
    let inv = d.inverse().ok_or_else(|| {
        violation(Claim::Numbered(12), "the glued pieces do not form a direct sum", Some(d.clone()))
    })?;
    let glued = &Matrix::from_columns(field, n, &images) * &inv;
    if glued.inverse().is_none() {
        return Err(violation(Claim::Numbered(12), "the glued map is not invertible", Some(glued)));
    }
    if !s.contains(&glued) {
        return Err(violation(Claim::Numbered(12), "the glued map is not in S", Some(glued)));
    }
    Ok(glued)
}

/// `S_L` and `T_L` as algebras of operators on a line, in the RREF basis of
/// the line.
#[derive(Debug, Clone)]
pub struct CompressedPair {
    pub line: Line,
    pub s_l: AlgebraBasis,
    pub t_l: AlgebraBasis,
}

fn compressed_s(s: &AlgebraBasis, line: &Line, pi: &Matrix) -> Result<AlgebraBasis, EngineError> {
    let field = s.field();
    let d = line.space.dim();
    let restricted: Vec<Matrix> = s.basis().iter().map(|b| line.space.restrict(&(&(pi * b) * pi))).collect();
    AlgebraBasis::new(field, d, &restricted)
        .map_err(|e| violation(Claim::Numbered(13), format!("S_L is not an algebra: {e}"), None))
}

/// Checks claims (xiii) and (xiv) on the `index`-th line of `dec`.
pub fn compress(
    s: &AlgebraBasis,
    t: &AlgebraBasis,
    dec: &Decomposition,
    index: usize,
    opts: &IrreducibilityOptions,
) -> Result<CompressedPair, EngineError> {
    let field = s.field();
    let line = dec.lines[index].clone();
    let d = line.space.dim();
    let s_l = compressed_s(s, &line, &dec.projections[index])?;

    let (h, _) = line_complement(&line, s)?;
    let alt = projection(&line.space, &h).expect("line_complement checked the splitting");
    if compressed_s(s, &line, &alt)? != s_l {
        return Err(violation(Claim::Numbered(13), "S_L depends on the chosen complement", Some(alt)));
    }

    let restricted: Vec<Matrix> = t.basis().iter().map(|x| line.space.restrict(x)).collect();
    let t_l = AlgebraBasis::new(field, d, &restricted)
        .map_err(|e| violation(Claim::Numbered(13), format!("T_L is not an algebra: {e}"), None))?;

    for (name, alg) in [("S_L", &s_l), ("T_L", &t_l)] {
        if let DivisionVerdict::NotDivision { x, .. } = is_division_ring(alg, opts)? {
            return Err(violation(Claim::Numbered(13), format!("{name} has zero divisors"), Some(x)));
        }
    }
    if centralizer_basis(field, s_l.basis(), d) != t_l {
        return Err(violation(Claim::Numbered(14), "C(S_L) differs from T_L", None));
    }
    if centralizer_basis(field, t_l.basis(), d) != s_l {
        return Err(violation(Claim::Numbered(14), "C(T_L) differs from S_L", None));
    }
    Ok(CompressedPair { line, s_l, t_l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutant::algebra_closure;
    use crate::engine::delta::{compute_delta, DeltaStrategy};
    use crate::engine::lines::analyze_lines;
    use crate::engine::EngineOptions;
    use crate::field::Field;
    use crate::fixtures;
    use crate::linalg::{image, unit_vector};

    struct Setup {
        s: AlgebraBasis,
        t: AlgebraBasis,
        ld: LineData,
        dec: Decomposition,
    }

    fn setup(field: &Field, n: usize, gens: Vec<Matrix>) -> Setup {
        let m = ModuleInstance::new(field, n, gens.clone()).unwrap();
        let s = algebra_closure(field, &gens, n, true);
        let t = centralizer_basis(field, &gens, n);
        let delta = compute_delta(&s, None, DeltaStrategy::Auto, &EngineOptions::default()).unwrap();
        let ld = analyze_lines(&m, &s, &t, &delta).unwrap();
        let dec = direct_sum_decompose(&m, &s, &t, &ld).unwrap();
        Setup { s, t, ld, dec }
    }

    fn units(field: &Field, n: usize) -> Vec<Matrix> {
        (0..n * n).map(|k| Matrix::unit(field, n, k / n, k % n)).collect()
    }

    fn check_projections(dec: &Decomposition, s: &AlgebraBasis) {
        let field = s.field();
        let n = s.n();
        let mut total = Matrix::zeros(field, n, n);
        for (i, p) in dec.projections.iter().enumerate() {
            total = &total + p;
            assert!(s.contains(p));
            for (j, q) in dec.projections.iter().enumerate() {
                let expected = if i == j { p.clone() } else { Matrix::zeros(field, n, n) };
                assert_eq!(p * q, expected);
            }
        }
        assert!(total.is_identity());
    }

    #[test]
    fn full_mat2_decomposes_into_coordinate_axes() {
        let f2 = Field::prime(2).unwrap();
        let st = setup(&f2, 2, units(&f2, 2));
        let spaces: Vec<Subspace> = st.dec.lines.iter().map(|l| l.space.clone()).collect();
        let e = |i| Subspace::span(&f2, 2, [unit_vector(&f2, 2, i)]);
        assert_eq!(spaces, vec![e(0), e(1)]);
        check_projections(&st.dec, &st.s);
    }

    #[test]
    fn f4_single_line() {
        let f2 = Field::prime(2).unwrap();
        let st = setup(&f2, 2, vec![fixtures::f4_generator()]);
        assert_eq!(st.dec.lines.len(), 1);
        assert!(st.dec.projections[0].is_identity());
        let pair = compress(&st.s, &st.t, &st.dec, 0, &Default::default()).unwrap();
        assert_eq!((pair.s_l.dim(), pair.t_l.dim()), (2, 2));
        assert_eq!(pair.s_l, pair.t_l);
    }

    #[test]
    fn full_mat3_three_lines() {
        let f2 = Field::prime(2).unwrap();
        let st = setup(&f2, 3, units(&f2, 3));
        assert_eq!(st.ld.delta, 1);
        assert_eq!(st.dec.lines.len(), 3);
        for i in 0..3 {
            for j in 0..i {
                let meet = st.dec.lines[i].space.intersection(&st.dec.lines[j].space).unwrap();
                assert!(meet.is_zero());
            }
        }
        check_projections(&st.dec, &st.s);
    }

    #[test]
    fn local_inverse_examples() {
        let f2 = Field::prime(2).unwrap();
        let st = setup(&f2, 2, units(&f2, 2));
        let l1 = st.dec.lines[0].clone();
        let l2 = st.dec.lines[1].clone();
        let id = Matrix::identity(&f2, 2);
        assert!(local_inverse(&id, &l1, &l1, &st.s).unwrap().is_identity());
        // e1 -> e2
        let sigma = Matrix::unit(&f2, 2, 1, 0);
        let swap = Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]);
        assert_eq!(local_inverse(&sigma, &l1, &l2, &st.s).unwrap(), swap);

        let f3 = Field::prime(3).unwrap();
        let c = fixtures::singer_f3();
        let st = setup(&f3, 2, vec![c.clone()]);
        let v = st.dec.lines[0].clone();
        let sigma = &c * &c;
        let s = local_inverse(&sigma, &v, &v, &st.s).unwrap();
        assert_eq!(s, sigma);
    }

    #[test]
    fn compress_examples() {
        let f2 = Field::prime(2).unwrap();
        let st = setup(&f2, 2, units(&f2, 2));
        let pair = compress(&st.s, &st.t, &st.dec, 0, &Default::default()).unwrap();
        assert_eq!((pair.s_l.dim(), pair.t_l.dim()), (1, 1));

        let q = Field::rational();
        let (li, lj) = fixtures::quaternion_left(&q);
        let (ri, rj) = fixtures::quaternion_right(&q);
        let st = setup(&q, 4, vec![li.clone(), lj.clone()]);
        assert_eq!(st.dec.lines.len(), 1);
        let pair = compress(&st.s, &st.t, &st.dec, 0, &Default::default()).unwrap();
        assert!(pair.line.space.is_full());
        assert!(pair.s_l.contains(&li) && pair.s_l.contains(&lj));
        assert!(pair.t_l.contains(&ri) && pair.t_l.contains(&rj));
        assert_eq!(pair.s_l.dim(), 4);
    }

    #[test]
    fn projection_onto_along() {
        let f3 = Field::prime(3).unwrap();
        let onto = Subspace::span(&f3, 2, [unit_vector(&f3, 2, 0)]);
        let along = Subspace::span(&f3, 2, [vec![f3.one(), f3.one()]]);
        let p = projection(&onto, &along).unwrap();
        assert_eq!(&p * &p, p);
        assert_eq!(image(&p), onto);
        assert!(projection(&onto, &onto).is_none());
    }
}
