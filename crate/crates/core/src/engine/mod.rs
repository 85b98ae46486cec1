//! The line-decomposition pipeline: domain checks, δ and lines, complements,
//! direct-sum decomposition, local inverses, compression, certificates and
//! their independent verification.
//!
//! Every failed check is attributed to a [`Claim`] so callers can tell where
//! a non-conforming input was rejected.

pub mod certificate;
pub mod decompose;
pub mod delta;
pub mod domain;
pub mod lines;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::module::{IrreducibilityOptions, ModuleError};

pub use certificate::{linearize, Linearization, LinearizationCertificate, SkewFieldPresentation};
pub use decompose::{compress, direct_sum_decompose, local_inverse, CompressedPair, Decomposition};
pub use delta::{compute_delta, DeltaResult, DeltaRoute, DeltaStrategy};
pub use domain::{check_domain_surjective, kernel_chain, KernelChain};
pub use lines::{analyze_lines, line_complement, Line, LineData};
pub use verify::{verify_certificate, VerifyFailure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    Irreducibility,
    DoubleCentralizer,
    /// Numbered claims (i) to (xv) of the proof.
    Numbered(u8),
    Commutativity,
    Normalisation,
    ConjugateSingleton,
    KernelChain,
    Containment,
    Faithfulness,
}

const ROMAN: [&str; 15] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv", "xv"];

impl Claim {
    pub fn tag(&self) -> String {
        match self {
            Claim::Irreducibility => "irreducibility".into(),
            Claim::DoubleCentralizer => "double_centralizer".into(),
            Claim::Numbered(k) => format!("({})", ROMAN[usize::from(*k) - 1]),
            Claim::Commutativity => "commutativity".into(),
            Claim::Normalisation => "normalisation".into(),
            Claim::ConjugateSingleton => "conjugate_singleton".into(),
            Claim::KernelChain => "kernel_chain".into(),
            Claim::Containment => "containment".into(),
            Claim::Faithfulness => "faithfulness".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Claim> {
        let fixed = [
            Claim::Irreducibility,
            Claim::DoubleCentralizer,
            Claim::Commutativity,
            Claim::Normalisation,
            Claim::ConjugateSingleton,
            Claim::KernelChain,
            Claim::Containment,
            Claim::Faithfulness,
        ];
        if let Some(c) = fixed.into_iter().find(|c| c.tag() == tag) {
            return Some(c);
        }
        let inner = tag.strip_prefix('(')?.strip_suffix(')')?;
        ROMAN.iter().position(|r| *r == inner).map(|i| Claim::Numbered(i as u8 + 1))
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub claim: Claim,
    pub message: String,
    pub witness: Option<Matrix>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hypothesis violated at {}: {}", self.claim, self.message)?;
        if let Some(w) = &self.witness {
            write!(f, " (witness {w})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("{0}")]
    HypothesisViolation(Violation),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Module(ModuleError),
}

impl From<ModuleError> for EngineError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Inconclusive(msg) => EngineError::Inconclusive(msg),
            other => EngineError::Module(other),
        }
    }
}

impl EngineError {
    pub fn violation(&self) -> Option<&Violation> {
        match self {
            EngineError::HypothesisViolation(v) => Some(v),
            _ => None,
        }
    }
}

pub(crate) fn violation(claim: Claim, message: impl Into<String>, witness: Option<Matrix>) -> EngineError {
    EngineError::HypothesisViolation(Violation { claim, message: message.into(), witness })
}

/// A subspace as the matrix whose rows are its RREF basis, for use as a witness.
pub(crate) fn subspace_witness(w: &Subspace) -> Option<Matrix> {
    Matrix::from_rows(w.field(), w.basis().to_vec()).ok().filter(|m| m.rows() > 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Verified,
    Waived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub claim: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Which checks ran, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CheckLog(pub Vec<CheckEntry>);

impl CheckLog {
    pub fn verified(&mut self, claim: Claim, detail: impl Into<String>) {
        self.0.push(CheckEntry { claim: claim.tag(), status: CheckStatus::Verified, detail: detail.into() });
    }

    pub fn waived(&mut self, what: &str, detail: impl Into<String>) {
        self.0.push(CheckEntry { claim: what.into(), status: CheckStatus::Waived, detail: detail.into() });
    }

    pub fn contains(&self, claim: Claim) -> bool {
        let tag = claim.tag();
        self.0.iter().any(|e| e.claim == tag && e.status == CheckStatus::Verified)
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub seed: u64,
    /// MeatAxe attempts and randomised δ samples.
    pub budget: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { seed: 0, budget: crate::module::DEFAULT_MEATAXE_BUDGET }
    }
}

impl EngineOptions {
    pub fn irreducibility(&self) -> IrreducibilityOptions {
        IrreducibilityOptions { budget: self.budget, seed: self.seed, ..Default::default() }
    }
}
