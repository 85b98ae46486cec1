//! File formats, the built-in corpus and the command-line front end.

pub mod cli;
pub mod corpus;
pub mod doc;

use serde_json::{json, Value};

use crate::corollaries::{group_action, group_instance, nesin_poizat, np_analyze, np_instance, one_sided, one_sided_instance};
use crate::engine::certificate::{linearize, LinearizationCertificate};
use crate::engine::{EngineError, EngineOptions};
use crate::module::{ModuleError, ModuleInstance};
use doc::{certificate_to_json, matrices_json, matrix_json, np_report_json};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    /// A certificate failed verification, or a corpus entry missed its expectation.
    pub const FAILED: i32 = 1;
    pub const VIOLATION: i32 = 2;
    /// Parse, validation, precondition or I/O error.
    pub const INPUT: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
}

/// The certificate-producing pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Linearize,
    OneSided,
    Group,
    NesinPoizat,
}

impl Pipeline {
    pub fn verb(&self) -> &'static str {
        match self {
            Pipeline::Linearize => "linearize",
            Pipeline::OneSided => "corollary-one-sided",
            Pipeline::Group => "corollary-group",
            Pipeline::NesinPoizat => "corollary-np",
        }
    }

    pub fn from_verb(verb: &str) -> Option<Pipeline> {
        [Pipeline::Linearize, Pipeline::OneSided, Pipeline::Group, Pipeline::NesinPoizat]
            .into_iter()
            .find(|p| p.verb() == verb)
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub certificate: Option<LinearizationCertificate>,
    pub document: Value,
}

/// The instance whose `S` generators a pipeline's certificate describes.
pub fn linearised_instance(p: Pipeline, m: &ModuleInstance) -> Result<ModuleInstance, ModuleError> {
    match p {
        Pipeline::Linearize => Ok(m.clone()),
        Pipeline::OneSided => one_sided_instance(m),
        Pipeline::Group => group_instance(m),
        Pipeline::NesinPoizat => np_instance(m),
    }
}

pub fn run_pipeline(p: Pipeline, m: &ModuleInstance, opts: &EngineOptions) -> Result<PipelineOutput, EngineError> {
    match p {
        Pipeline::Linearize => {
            let cert = linearize(m, opts)?.certificate;
            Ok(PipelineOutput { document: certificate_to_json(&cert), certificate: Some(cert) })
        }
        Pipeline::Group => {
            let cert = group_action(m, opts)?.certificate;
            Ok(PipelineOutput { document: certificate_to_json(&cert), certificate: Some(cert) })
        }
        Pipeline::NesinPoizat => {
            let (report, lin) = nesin_poizat(m, opts)?;
            let mut document = certificate_to_json(&lin.certificate);
            document["np_report"] = np_report_json(&report);
            Ok(PipelineOutput { document, certificate: Some(lin.certificate) })
        }
        Pipeline::OneSided => {
            let out = one_sided(m, opts)?;
            let mut document = json!({
                "kind": "one_sided",
                "t_basis": matrices_json(out.t.basis()),
                "t_dim": out.t.dim(),
                "t_commutative": out.t.is_commutative(),
                "division_strategy": out.division_strategy.as_str(),
            });
            if let Some(cert) = &out.certificate {
                document["certificate"] = certificate_to_json(cert);
            }
            Ok(PipelineOutput { document, certificate: out.certificate })
        }
    }
}

pub fn exit_code(e: &EngineError) -> i32 {
    match e {
        EngineError::HypothesisViolation(_) => exit::VIOLATION,
        EngineError::Inconclusive(_) | EngineError::BudgetExhausted(_) => exit::INCONCLUSIVE,
        EngineError::Module(ModuleError::Inconclusive(_)) => exit::INCONCLUSIVE,
        EngineError::Precondition(_) | EngineError::Module(_) => exit::INPUT,
    }
}

/// The result document for a failed run. A failed commutative-ring pipeline
/// also carries whatever [`np_analyze`] found.
pub fn error_document(e: &EngineError, p: Option<Pipeline>, m: Option<&ModuleInstance>, opts: &EngineOptions) -> Value {
    match e {
        EngineError::HypothesisViolation(v) => {
            let mut doc = json!({"kind": "violation", "claim": v.claim.tag(), "message": v.message});
            if let Some(w) = &v.witness {
                doc["witness"] = matrix_json(w);
            }
            if let (Some(Pipeline::NesinPoizat), Some(m)) = (p, m) {
                if let Ok(report) = np_analyze(m, opts) {
                    doc["partial_report"] = np_report_json(&report);
                }
            }
            doc
        }
        EngineError::Inconclusive(_) | EngineError::BudgetExhausted(_) | EngineError::Module(ModuleError::Inconclusive(_)) => {
            json!({"kind": "inconclusive", "message": e.to_string()})
        }
        other => json!({"kind": "error", "class": "input", "message": other.to_string()}),
    }
}

/// A short summary used to compare runs against corpus expectations.
pub fn outcome_summary(result: &Result<PipelineOutput, EngineError>) -> Value {
    match result {
        Ok(PipelineOutput { certificate: Some(c), .. }) => json!({
            "outcome": "certificate",
            "d": c.d,
            "k": c.k,
            "dim_s": c.dim_s,
            "dim_t": c.dim_t,
            "commutative": c.skew_field.commutative,
        }),
        Ok(PipelineOutput { certificate: None, .. }) => json!({"outcome": "division_only"}),
        Err(EngineError::HypothesisViolation(v)) => json!({"outcome": "violation", "claim": v.claim.tag()}),
        Err(e) if exit_code(e) == exit::INCONCLUSIVE => json!({"outcome": "inconclusive"}),
        Err(e) => json!({"outcome": "error", "message": e.to_string()}),
    }
}
