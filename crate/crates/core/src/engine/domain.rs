//! Every nonzero element of `T` must act surjectively with trivial kernel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{violation, Claim, EngineError};
use crate::commutant::AlgebraBasis;
use crate::linalg::{kernel, Subspace};
use crate::matrix::Matrix;
use crate::module::ModuleInstance;

const RANDOM_SAMPLES: usize = 50;
const EXHAUSTIVE_ELEMENTS: u64 = 1 << 12;

/// Checks claim (i) on `T`: all basis elements and 50 random nonzero
/// combinations (or every element, when `|T| <= 4096`) are invertible, and
/// sampled products of nonzero elements are nonzero.
pub fn check_domain_surjective(m: &ModuleInstance, t: &AlgebraBasis, seed: u64) -> Result<(), EngineError> {
    let n = m.n();
    let field = m.field();
    let fail = |x: &Matrix| {
        violation(
            Claim::Numbered(1),
            format!("element of T has rank {} < {n}, so it is not surjective", x.rank()),
            Some(x.clone()),
        )
    };
    let mut sample: Vec<Matrix> = t.basis().to_vec();
    if t.order(EXHAUSTIVE_ELEMENTS).is_some() {
        sample.extend(t.elements().filter(|x| !x.is_zero()));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while sample.len() < t.dim() + RANDOM_SAMPLES {
            let coords: Vec<_> = (0..t.dim()).map(|_| field.random(&mut rng)).collect();
            let x = t.element(&coords);
            if !x.is_zero() {
                sample.push(x);
            }
        }
    }
    for x in &sample {
        if x.rank() < n {
            return Err(fail(x));
        }
    }
    for (a, b) in sample.iter().zip(sample.iter().rev()) {
        let p = a * b;
        if p.is_zero() {
            return Err(violation(Claim::Numbered(1), "T has zero divisors", Some(a.clone())));
        }
    }
    Ok(())
}

/// `ker t ⊆ ker t² ⊆ ...` up to stabilisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelChain {
    pub steps: Vec<Subspace>,
    pub union: Subspace,
}

impl KernelChain {
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(Subspace::dim).collect()
    }
}

/// Stops at the first power whose kernel equals the previous one (the
/// previous kernel of `t^0` being zero) or fills the space.
pub fn kernel_chain(t: &Matrix) -> KernelChain {
    assert!(t.is_square(), "kernel chain needs a square matrix");
    let n = t.rows();
    let mut steps: Vec<Subspace> = Vec::new();
    let mut power = t.clone();
    let mut prev = 0;
    loop {
        let k = kernel(&power);
        let dim = k.dim();
        steps.push(k);
        if dim == prev || dim == n {
            break;
        }
        prev = dim;
        power = &power * t;
    }
    let union = steps.last().cloned().expect("at least one step");
    KernelChain { steps, union }
}
