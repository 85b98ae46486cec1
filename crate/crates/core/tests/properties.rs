//! Property tests over small random instances.

use proptest::prelude::*;
use skewfield::engine::certificate::linearize;
use skewfield::engine::domain::kernel_chain;
use skewfield::engine::verify_certificate;
use skewfield::harness::doc::{instance_to_json, parse_instance, to_canonical_string};
use skewfield::linalg::{image, kernel};
use skewfield::module::{annihilator, irreducible_test, minimal_submodule, spin};
use skewfield::{
    algebra_closure, centralizer_basis, is_division_ring, DivisionVerdict, Field, Irreducibility,
    IrreducibilityOptions, Matrix, Method, ModuleInstance, Scalar, Subspace,
};

fn field_of(code: u8) -> Field {
    match code {
        0 => Field::prime(2).unwrap(),
        1 => Field::prime(3).unwrap(),
        2 => Field::extension(2, vec![1, 1, 1]).unwrap(),
        _ => Field::extension(3, vec![1, 0, 1]).unwrap(),
    }
}

fn matrix(field: &Field, n: usize, idx: &[u64]) -> Matrix {
    let q = field.order().unwrap();
    Matrix::from_flat(field, n, n, idx.iter().map(|i| field.element(i % q)).collect()).unwrap()
}

/// A finite field, a dimension and a few generators.
fn instance(max_n: usize, max_gens: usize) -> impl Strategy<Value = (Field, usize, Vec<Matrix>)> {
    (0u8..2, 1..=max_n, 1..=max_gens).prop_flat_map(|(f, n, g)| {
        prop::collection::vec(prop::collection::vec(any::<u64>(), n * n), g).prop_map(move |raw| {
            let field = field_of(f);
            let gens = raw.iter().map(|r| matrix(&field, n, r)).collect();
            (field, n, gens)
        })
    })
}

fn exhaustive() -> IrreducibilityOptions {
    IrreducibilityOptions::default().with_method(Method::Exhaustive)
}

fn is_irreducible(field: &Field, n: usize, gens: &[Matrix]) -> bool {
    matches!(irreducible_test(field, n, gens, &exhaustive()).unwrap(), Irreducibility::Irreducible { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(code in 0u8..4, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field_of(code);
        let q = f.order().unwrap();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn rational_field_axioms(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let f = Field::rational();
        let (x, y) = (f.from_ratio(a, b), f.from_ratio(c, d));
        prop_assert_eq!(f.sub(&f.add(&x, &y), &y), x.clone());
        if !f.is_zero(&y) {
            prop_assert_eq!(f.mul(&f.div(&x, &y).unwrap(), &y), x);
        }
    }

    #[test]
    fn rank_equals_rank_of_transpose((_f, _n, gens) in instance(5, 1)) {
        let a = &gens[0];
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(kernel(a).dim() + image(a).dim(), a.cols());
        for v in kernel(a).basis() {
            prop_assert!(a.apply(v).iter().all(|x| a.field().is_zero(x)));
        }
    }

    #[test]
    fn rref_is_canonical((field, n, gens) in instance(4, 1), mix in prop::collection::vec(any::<u64>(), 16)) {
        // The rows of a matrix and random combinations of them that keep
        // every row: both spans must have the same canonical basis.
        let rows = gens[0].row_vecs();
        let u = Subspace::span(&field, n, rows.iter().cloned());
        let q = field.order().unwrap();
        let mut combos = rows.clone();
        for k in 0..n {
            let mut v = vec![field.zero(); n];
            for (j, r) in rows.iter().enumerate() {
                let c = field.element(mix[(k * n + j) % mix.len()] % q);
                for (x, y) in v.iter_mut().zip(r) {
                    *x = field.add(x, &field.mul(&c, y));
                }
            }
            combos.push(v);
        }
        combos.reverse();
        let w = Subspace::span(&field, n, combos);
        prop_assert_eq!(u.basis(), w.basis());
    }

    #[test]
    fn spin_is_idempotent_and_monotone((field, n, gens) in instance(4, 2), seed in any::<u64>()) {
        let q = field.order().unwrap();
        let v: Vec<Scalar> = (0..n).map(|i| field.element((seed >> (4 * i)) % q)).collect();
        let w = spin(&field, n, &gens, &[v.clone()]);
        let again = spin(&field, n, &gens, w.basis());
        prop_assert_eq!(&w, &again);
        prop_assert!(w.contains(&v));
        for g in &gens {
            prop_assert!(w.is_invariant_under(g));
        }
        let bigger = spin(&field, n, &gens[..1], &[v]);
        prop_assert!(bigger.is_subspace_of(&w));
    }

    #[test]
    fn commutant_of_closure_and_triple_centraliser((field, n, gens) in instance(4, 2)) {
        let c = centralizer_basis(&field, &gens, n);
        let closure = algebra_closure(&field, &gens, n, true);
        prop_assert_eq!(&centralizer_basis(&field, closure.basis(), n), &c);
        let cc = centralizer_basis(&field, c.basis(), n);
        let ccc = centralizer_basis(&field, cc.basis(), n);
        prop_assert_eq!(&ccc, &c);
        for g in &gens {
            prop_assert!(cc.contains(g));
        }
    }

    #[test]
    fn meataxe_agrees_with_exhaustive((field, n, gens) in instance(4, 2), seed in any::<u64>()) {
        let brute = is_irreducible(&field, n, &gens);
        let opts = IrreducibilityOptions::default().with_method(Method::MeatAxe).with_seed(seed);
        if let Ok(v) = irreducible_test(&field, n, &gens, &opts) {
            prop_assert_eq!(v.is_irreducible(), brute);
            if let Irreducibility::Reducible { witness } = v {
                prop_assert!(!witness.is_zero() && !witness.is_full());
                for g in &gens {
                    prop_assert!(witness.is_invariant_under(g));
                }
            }
        }
    }

    #[test]
    fn schur_property((field, n, gens) in instance(4, 2)) {
        if is_irreducible(&field, n, &gens) {
            let t = centralizer_basis(&field, &gens, n);
            let verdict = is_division_ring(&t, &Default::default()).unwrap();
            let division = matches!(verdict, DivisionVerdict::Division { .. });
            prop_assert!(division);
        }
    }

    #[test]
    fn minimal_submodule_is_irreducible((field, n, gens) in instance(4, 2)) {
        let w = minimal_submodule(&field, n, &gens, &Default::default()).unwrap();
        prop_assert!(!w.is_zero());
        for g in &gens {
            prop_assert!(w.is_invariant_under(g));
        }
        // Restricted to W the generators act irreducibly.
        let restricted: Vec<Matrix> = gens.iter().map(|g| w.restrict(g)).collect();
        prop_assert!(is_irreducible(&field, w.dim(), &restricted));
    }

    #[test]
    fn annihilator_is_an_ideal((field, n, gens) in instance(3, 2)) {
        let r = algebra_closure(&field, &gens, n, true);
        if r.is_commutative() {
            let w = minimal_submodule(&field, n, r.basis(), &Default::default()).unwrap();
            let p = annihilator(&r, &w);
            for c in p.basis() {
                let x = r.element(c);
                prop_assert!(w.image_under(&x).is_zero());
                for b in r.basis() {
                    prop_assert!(p.contains(&r.coordinates(&(b * &x)).unwrap()));
                }
            }
        }
    }

    #[test]
    fn kernel_chain_stabilises_within_n_steps((_f, n, gens) in instance(4, 1)) {
        let chain = kernel_chain(&gens[0]);
        prop_assert!(chain.steps.len() <= n + 1);
        let dims = chain.dims();
        prop_assert!(dims.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn irreducible_instances_linearise_and_verify((field, n, gens) in instance(3, 2)) {
        if is_irreducible(&field, n, &gens) {
            let m = ModuleInstance::new(&field, n, gens).unwrap();
            let lin = linearize(&m, &Default::default()).unwrap();
            let c = &lin.certificate;
            prop_assert_eq!(c.k * c.d, n);
            prop_assert_eq!(c.dim_s, c.k * c.k * c.d);
            prop_assert!(verify_certificate(&m, c).is_ok());
        }
    }

    #[test]
    fn instance_documents_round_trip((field, n, gens) in instance(3, 3)) {
        let m = ModuleInstance::new(&field, n, gens).unwrap().with_name("random");
        let text = to_canonical_string(&instance_to_json(&m));
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.s_gens(), m.s_gens());
        prop_assert_eq!(to_canonical_string(&instance_to_json(&back)), text);
    }
}
