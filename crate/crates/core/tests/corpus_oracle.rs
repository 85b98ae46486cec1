//! Brute-force oracles for the corpus manifest: every expectation is
//! recomputed here by enumeration, independently of the engine.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use skewfield::harness::corpus::{load_instance, manifest};
use skewfield::harness::Pipeline;
use skewfield::{Field, Matrix, ModuleInstance, Scalar};

fn all_matrices(field: &Field, n: usize) -> impl Iterator<Item = Matrix> + '_ {
    let q = field.order().unwrap();
    let total = q.pow((n * n) as u32);
    (0..total).map(move |mut idx| {
        let data = (0..n * n)
            .map(|_| {
                let s = field.element(idx % q);
                idx /= q;
                s
            })
            .collect();
        Matrix::from_flat(field, n, n, data).unwrap()
    })
}

fn commutant(field: &Field, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    all_matrices(field, n).filter(|x| gens.iter().all(|g| &(x * g) == &(g * x))).collect()
}

/// The set of elements of the unital algebra generated by `gens`, by
/// saturating under sums and products.
fn closure(field: &Field, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let mut set: HashSet<Vec<Scalar>> = HashSet::new();
    let mut elems: Vec<Matrix> = Vec::new();
    let push = |m: Matrix, set: &mut HashSet<Vec<Scalar>>, elems: &mut Vec<Matrix>| {
        if set.insert(m.flatten().to_vec()) {
            elems.push(m);
        }
    };
    push(Matrix::zeros(field, n, n), &mut set, &mut elems);
    push(Matrix::identity(field, n), &mut set, &mut elems);
    for g in gens {
        push(g.clone(), &mut set, &mut elems);
    }
    loop {
        let before = elems.len();
        let snapshot = elems.clone();
        for a in &snapshot {
            for b in &snapshot {
                push(a + b, &mut set, &mut elems);
                push(a * b, &mut set, &mut elems);
            }
        }
        if elems.len() == before {
            return elems;
        }
    }
}

fn log_q(field: &Field, size: usize) -> usize {
    let q = field.order().unwrap() as usize;
    let mut d = 0;
    let mut acc = 1;
    while acc < size {
        acc *= q;
        d += 1;
    }
    assert_eq!(acc, size, "{size} is not a power of {q}");
    d
}

fn is_commutative(xs: &[Matrix]) -> bool {
    xs.iter().all(|a| xs.iter().all(|b| &(a * b) == &(b * a)))
}

fn finite_summary(field: &Field, n: usize, s: &[Matrix], t: &[Matrix]) -> Value {
    let d = log_q(field, t.len());
    json!({
        "outcome": "certificate",
        "d": d,
        "k": n / d,
        "dim_s": log_q(field, s.len()),
        "dim_t": d,
        "commutative": is_commutative(t),
    })
}

type Q = BigRational;

fn rat(s: &Scalar) -> Q {
    match s {
        Scalar::Rat(r) => r.clone(),
        _ => unreachable!("rational entries expected"),
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    for col in 0..cols {
        let rank = pivots.len();
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Q::one() / rows[rank][col].clone();
        let pivot: Vec<Q> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = pivot;
        pivots.push(col);
    }
    rows.truncate(pivots.len());
    pivots
}

fn qmul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i * n + j] += &a[i * n + k] * &b[k * n + j];
            }
        }
    }
    c
}

/// Basis of `{X : XG = GX}` over Q, as flattened matrices.
fn rational_commutant(n: usize, gens: &[Matrix]) -> Vec<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for g in gens {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![Q::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] += rat(g.get(k, j));
                    row[k * n + j] -= rat(g.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    let pivots = rref(&mut rows);
    (0..n * n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n * n];
            v[free] = Q::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Dimension of the span of all words of length at most `n` in the generators.
fn rational_algebra_dim(n: usize, gens: &[Matrix]) -> usize {
    let g: Vec<Vec<Q>> = gens.iter().map(|m| m.flatten().iter().map(rat).collect()).collect();
    let id: Vec<Q> = (0..n * n).map(|k| if k / n == k % n { Q::one() } else { Q::zero() }).collect();
    let mut words = vec![id];
    let mut frontier = words.clone();
    for _ in 0..n {
        frontier = frontier.iter().flat_map(|w| g.iter().map(|x| qmul(w, x, n))).collect();
        words.extend(frontier.iter().cloned());
    }
    rref(&mut words).len()
}

fn invariant_line_e1(m: &ModuleInstance, gens: &[Matrix]) -> bool {
    gens.iter().all(|g| (1..m.n()).all(|i| m.field().is_zero(g.get(i, 0))))
}

fn oracle(entry_instance: &str, pipeline: Pipeline, expect: &Value) -> Value {
    let m = load_instance(entry_instance).unwrap().unwrap();
    let f = m.field().clone();
    let n = m.n();
    if expect["outcome"] == "violation" {
        let claim = expect["claim"].as_str().unwrap();
        let holds = match claim {
            "irreducibility" => {
                let gens = if pipeline == Pipeline::Group { m.g_gens().unwrap() } else { m.s_gens() };
                invariant_line_e1(&m, gens)
            }
            "(i)" => m.t_gens().unwrap().iter().any(|t| {
                let q = f.order().unwrap();
                let vecs: Vec<Vec<Scalar>> = (0..q.pow(n as u32))
                    .map(|mut i| {
                        (0..n)
                            .map(|_| {
                                let s = f.element(i % q);
                                i /= q;
                                s
                            })
                            .collect()
                    })
                    .collect();
                let img: HashSet<Vec<Scalar>> = vecs.iter().map(|v| t.apply(v)).collect();
                img.len() < vecs.len()
            }),
            "conjugate_singleton" => {
                // Ann_R(e1) and Ann_R(e2) differ and the first group generator swaps them.
                let r = closure(&f, n, m.r_gens().unwrap());
                let e = |i: usize| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect::<Vec<_>>();
                let ann = |i: usize| -> HashSet<Vec<Scalar>> {
                    r.iter().filter(|x| x.apply(&e(i)).iter().all(|s| f.is_zero(s))).map(|x| x.flatten().to_vec()).collect()
                };
                let g = &m.g_gens().unwrap()[0];
                let gi = g.inverse().unwrap();
                let conj: HashSet<Vec<Scalar>> = r
                    .iter()
                    .filter(|x| ann(0).contains(x.flatten()))
                    .map(|x| (&(g * x) * &gi).flatten().to_vec())
                    .collect();
                ann(0) != ann(1) && conj == ann(1)
            }
            other => panic!("no oracle for claim {other}"),
        };
        assert!(holds, "{entry_instance}: the oracle does not confirm {claim}");
        return expect.clone();
    }
    if !f.is_finite() {
        let t = rational_commutant(n, m.s_gens());
        let d = t.len();
        let commutative = t.iter().all(|a| t.iter().all(|b| qmul(a, b, n) == qmul(b, a, n)));
        return json!({
            "outcome": "certificate",
            "d": d,
            "k": n / d,
            "dim_s": rational_algebra_dim(n, m.s_gens()),
            "dim_t": d,
            "commutative": commutative,
        });
    }
    let (s, t) = match pipeline {
        Pipeline::Linearize | Pipeline::OneSided => {
            let t = commutant(&f, n, m.s_gens());
            let s = if pipeline == Pipeline::OneSided { commutant(&f, n, &t) } else { closure(&f, n, m.s_gens()) };
            (s, t)
        }
        Pipeline::Group => {
            let t = commutant(&f, n, m.g_gens().unwrap());
            (commutant(&f, n, &t), t)
        }
        Pipeline::NesinPoizat => {
            let s = commutant(&f, n, m.r_gens().unwrap());
            let t = commutant(&f, n, &s);
            (s, t)
        }
    };
    finite_summary(&f, n, &s, &t)
}

#[test]
fn manifest_expectations_match_oracles() {
    for entry in manifest() {
        let oracle = oracle(&entry.instance, entry.pipeline, &entry.expect);
        for (k, v) in entry.expect.as_object().unwrap() {
            assert_eq!(oracle.get(k), Some(v), "{}: key {k}", entry.name);
        }
    }
}
