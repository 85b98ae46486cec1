//! Lines: images `sV` of minimal dimension δ.

use std::collections::VecDeque;

use super::delta::DeltaResult;
use super::{subspace_witness, violation, Claim, EngineError};
use crate::commutant::AlgebraBasis;
use crate::linalg::{image, kernel, Subspace};
use crate::matrix::Matrix;
use crate::module::{ModuleInstance, EXHAUSTIVE_LIMIT};

// BFS discovery stops after this many lines.
const LINE_CAP: usize = 4096;

/// A line together with an element `m` of `S` with `L = mV`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub space: Subspace,
    pub generator: Matrix,
}

#[derive(Debug, Clone)]
pub struct LineData {
    pub delta: usize,
    pub witness: Matrix,
    /// Discovered lines; the first is `witness · V`.
    pub lines: Vec<Line>,
    /// Whether `lines` is every image `sV` of rank δ (exhaustive discovery).
    pub complete: bool,
    /// `from_first[j]` maps `L_0` onto `L_j`.
    pub from_first: Vec<Matrix>,
    /// `to_first[j]` maps `L_j` onto `L_0`.
    pub to_first: Vec<Matrix>,
}

impl LineData {
    /// An element of `S` mapping `L_i` onto `L_j`.
    pub fn transitivity_witness(&self, i: usize, j: usize) -> Matrix {
        &self.from_first[j] * &self.to_first[i]
    }

    pub fn position(&self, space: &Subspace) -> Option<usize> {
        self.lines.iter().position(|l| l.space == *space)
    }
}

/// `m_to · b` for the first basis element `b` of `S` with `m_to b L_from ≠ 0`.
/// Its image is a nonzero subspace of `L_to` of dimension at most δ.
pub(crate) fn bridge(s: &AlgebraBasis, from: &Subspace, to: &Line) -> Option<Matrix> {
    s.basis().iter().map(|b| &to.generator * b).find(|x| !from.image_under(x).is_zero())
}

/// Discovers lines and checks claims (ii) to (v). Small algebras are
/// enumerated outright; otherwise lines are found by applying basis elements
/// of `S` to known lines, starting from `s₀V`.
pub fn analyze_lines(
    m: &ModuleInstance,
    s: &AlgebraBasis,
    t: &AlgebraBasis,
    delta: &DeltaResult,
) -> Result<LineData, EngineError> {
    let n = m.n();
    let d = delta.delta;
    let l0 = Line { space: image(&delta.witness), generator: delta.witness.clone() };
    if l0.space.dim() != d {
        return Err(EngineError::Precondition("δ witness does not have rank δ".into()));
    }
    let mut lines = vec![l0.clone()];
    let mut complete = false;

    let consider = |lines: &mut Vec<Line>, x: &Matrix, from: &Line| -> Result<bool, EngineError> {
        let img = from.space.image_under(x);
        if img.is_zero() {
            return Ok(false);
        }
        if img.dim() != d {
            return Err(violation(
                Claim::Numbered(3),
                format!("an element of S maps a line onto a subspace of dimension {}", img.dim()),
                Some(x.clone()),
            ));
        }
        if lines.iter().any(|l| l.space == img) {
            return Ok(false);
        }
        lines.push(Line { space: img, generator: x * &from.generator });
        Ok(true)
    };

    if s.order(EXHAUSTIVE_LIMIT).is_some() {
        for x in s.elements() {
            consider(&mut lines, &x, &l0)?;
            if x.rank() == d {
                let img = image(&x);
                if !lines.iter().any(|l| l.space == img) {
                    lines.push(Line { space: img, generator: x });
                }
            }
        }
        complete = true;
    } else {
        let mut queue = VecDeque::from([0usize]);
        'bfs: while let Some(i) = queue.pop_front() {
            let from = lines[i].clone();
            for b in s.basis() {
                if consider(&mut lines, b, &from)? {
                    queue.push_back(lines.len() - 1);
                    if lines.len() >= LINE_CAP {
                        break 'bfs;
                    }
                }
            }
        }
    }

    for line in &lines {
        if let Some(x) = t.basis().iter().find(|x| !line.space.is_invariant_under(x)) {
            return Err(violation(Claim::Numbered(2), "a line is not T-invariant", Some(x.clone())));
        }
    }

    let mut sum = Subspace::zero(m.field(), n);
    for line in &lines {
        sum = sum.sum(&line.space).expect("same ambient");
        if sum.is_full() {
            break;
        }
    }
    if !sum.is_full() {
        return Err(violation(
            Claim::Numbered(4),
            format!("the discovered lines span only a {}-dimensional subspace", sum.dim()),
            subspace_witness(&sum),
        ));
    }

    let mut from_first = Vec::with_capacity(lines.len());
    let mut to_first = Vec::with_capacity(lines.len());
    for line in &lines {
        let fwd = bridge(s, &l0.space, line).filter(|x| l0.space.image_under(x) == line.space);
        let back = bridge(s, &line.space, &l0).filter(|x| line.space.image_under(x) == l0.space);
        match (fwd, back) {
            (Some(f), Some(b)) => {
                from_first.push(f);
                to_first.push(b);
            }
            _ => {
                return Err(violation(
                    Claim::Numbered(5),
                    "no element of S carries the first line onto another line and back",
                    subspace_witness(&line.space),
                ))
            }
        }
    }

    Ok(LineData { delta: d, witness: delta.witness.clone(), lines, complete, from_first, to_first })
}

/// Checks claim (vi) on a line: `L ∩ ker x = 0` for every basis element `x`
/// of `S` with `xL ≠ 0`.
pub fn check_line_kernels(s: &AlgebraBasis, line: &Line) -> Result<(), EngineError> {
    for x in s.basis() {
        let img = line.space.image_under(x);
        if !img.is_zero() && img.dim() != line.space.dim() {
            return Err(violation(
                Claim::Numbered(6),
                "an element of S is nonzero but not injective on a line",
                Some(x.clone()),
            ));
        }
    }
    Ok(())
}

/// `H = ker s₁` where `s₁ = m_L · b` satisfies `L = s₁V = s₁L`; checks
/// claims (vi) and (ix).
pub fn line_complement(line: &Line, s: &AlgebraBasis) -> Result<(Subspace, Matrix), EngineError> {
    let Some(s1) = bridge(s, &line.space, line) else {
        return Err(violation(
            Claim::Numbered(9),
            "no element of S through the line acts nontrivially on it, so it has no complement",
            Some(line.generator.clone()),
        ));
    };
    let h = kernel(&s1);
    let meet = line.space.intersection(&h).expect("same ambient");
    if !meet.is_zero() {
        return Err(violation(Claim::Numbered(6), "the line meets ker s₁", Some(s1)));
    }
    if !line.space.sum(&h).expect("same ambient").is_full() {
        return Err(violation(Claim::Numbered(9), "L + ker s₁ is not the whole space", Some(s1)));
    }
    Ok((h, s1))
}
