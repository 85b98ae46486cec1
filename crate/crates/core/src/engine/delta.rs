//! δ, the least rank of a nonzero element of `S`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EngineError, EngineOptions};
use crate::commutant::{is_division_ring, AlgebraBasis, DivisionVerdict};
use crate::matrix::Matrix;

/// Exhaustive enumeration is allowed up to this many elements.
pub const EXHAUSTIVE_DELTA_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaStrategy {
    Auto,
    Exhaustive,
    Randomized,
}

/// How the reported δ was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRoute {
    Exhaustive,
    /// `S` is a division ring, so every nonzero element is invertible.
    DivisionShortcut,
    /// Every `sV` is a nonzero module over the division ring `T`, so its
    /// dimension is at least `dim T`; a sampled element attained it.
    ModuleBound,
}

impl DeltaRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            DeltaRoute::Exhaustive => "exhaustive",
            DeltaRoute::DivisionShortcut => "division_shortcut",
            DeltaRoute::ModuleBound => "module_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaResult {
    pub delta: usize,
    pub witness: Matrix,
    pub route: DeltaRoute,
}

/// `t_division` is a basis of `T` already certified to be a division ring,
/// when available; it enables the lower bound `δ >= dim T`.
pub fn compute_delta(
    s: &AlgebraBasis,
    t_division: Option<&AlgebraBasis>,
    strategy: DeltaStrategy,
    opts: &EngineOptions,
) -> Result<DeltaResult, EngineError> {
    if s.dim() == 0 {
        return Err(EngineError::Precondition("S is zero".into()));
    }
    let feasible = s.order(EXHAUSTIVE_DELTA_LIMIT).is_some();
    match strategy {
        DeltaStrategy::Exhaustive if !feasible => {
            Err(EngineError::Precondition("exhaustive δ needs a finite S with at most 2^20 elements".into()))
        }
        DeltaStrategy::Exhaustive => Ok(exhaustive(s)),
        DeltaStrategy::Auto if feasible => Ok(exhaustive(s)),
        _ => randomized(s, t_division, opts),
    }
}

fn exhaustive(s: &AlgebraBasis) -> DeltaResult {
    let mut best: Option<(usize, Matrix)> = None;
    for x in s.elements() {
        if x.is_zero() {
            continue;
        }
        let r = x.rank();
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, x));
            if r == 1 {
                break;
            }
        }
    }
    let (delta, witness) = best.expect("S is nonzero");
    DeltaResult { delta, witness, route: DeltaRoute::Exhaustive }
}

fn randomized(
    s: &AlgebraBasis,
    t_division: Option<&AlgebraBasis>,
    opts: &EngineOptions,
) -> Result<DeltaResult, EngineError> {
    let n = s.n();
    if s.is_unital() {
        if let DivisionVerdict::Division { .. } = is_division_ring(s, &opts.irreducibility())? {
            let witness = s.unit_matrix().expect("unital");
            return Ok(DeltaResult { delta: n, witness, route: DeltaRoute::DivisionShortcut });
        }
    }
    let field = s.field();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut candidates: Vec<Matrix> = s.basis().to_vec();
    for a in s.basis() {
        for b in s.basis() {
            candidates.push(a * b);
        }
    }
    for _ in 0..opts.budget {
        let coords: Vec<_> = (0..s.dim()).map(|_| field.random(&mut rng)).collect();
        candidates.push(s.element(&coords));
    }
    let (bound, witness) = candidates
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| (x.rank(), x))
        .min_by_key(|(r, _)| *r)
        .expect("S has a nonzero basis element");
    match t_division {
        Some(t) if t.dim() == bound => Ok(DeltaResult { delta: bound, witness, route: DeltaRoute::ModuleBound }),
        _ => Err(EngineError::BudgetExhausted(format!(
            "sampled minimum rank {bound} is only an upper bound for δ"
        ))),
    }
}
