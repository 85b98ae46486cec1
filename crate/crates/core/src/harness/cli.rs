//! Command-line front end.
//!
//! Every command produces one JSON document, written to standard output or
//! to `--out`, and an exit status from [`super::exit`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::corpus::{self, run_entry};
use super::doc::{self, parse_certificate, parse_instance, DocError};
use super::{error_document, exit, exit_code, linearised_instance, run_pipeline, Pipeline};
use crate::commutant::{algebra_closure, centralizer_basis, double_centralizer_check, is_division_ring, DivisionVerdict};
use crate::engine::delta::{compute_delta, DeltaStrategy};
use crate::engine::{verify_certificate, EngineError, EngineOptions};
use crate::module::{irreducible_test, Irreducibility, Method, ModuleInstance, DEFAULT_MEATAXE_BUDGET};

#[derive(Debug, Parser)]
#[command(name = "skewfield", version, about = "Commutants, division-ring certificates and module linearisation")]
pub struct Cli {
    /// Seed for the MeatAxe and randomised δ searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// MeatAxe attempts and randomised δ samples.
    #[arg(long, global = true, default_value_t = DEFAULT_MEATAXE_BUDGET)]
    pub budget: usize,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The commutant C(S) and the double-centraliser comparison.
    Centralize { instance: String },
    /// Irreducibility of V under one generator set.
    Irreducible {
        instance: String,
        #[arg(long, value_enum, default_value_t = GenSet::S)]
        gens: GenSet,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// The minimal positive rank δ of S with a witness.
    Delta { instance: String },
    /// Runs the full pipeline and emits a certificate.
    Linearize { instance: String },
    /// Checks a certificate against an instance. Certificates from the
    /// corollary commands describe a derived instance; name the command that
    /// produced the certificate with `--pipeline`.
    Verify {
        instance: String,
        certificate: PathBuf,
        #[arg(long, value_enum, default_value_t = PipelineArg::Linearize)]
        pipeline: PipelineArg,
    },
    /// T = C(S) must be a division ring; linearises V over the bicommutant.
    #[command(name = "corollary-one-sided")]
    CorollaryOneSided { instance: String },
    /// Linearises an irreducible group action given by `g_gens`.
    #[command(name = "corollary-group")]
    CorollaryGroup { instance: String },
    /// Commutative ring `r_gens` normalised by `g_gens`: fraction field and
    /// a linearisation of G over it.
    #[command(name = "corollary-np")]
    CorollaryNp { instance: String },
    /// Re-emits an instance document in canonical form.
    Format { instance: String },
    /// The built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Lists entries, instances and expectations.
    List,
    /// Runs entries and compares them with their expectations.
    Run {
        #[arg(long)]
        all: bool,
        names: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenSet {
    S,
    T,
    G,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PipelineArg {
    Linearize,
    #[value(name = "corollary-one-sided")]
    OneSided,
    #[value(name = "corollary-group")]
    Group,
    #[value(name = "corollary-np")]
    Np,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Pipeline {
        match p {
            PipelineArg::Linearize => Pipeline::Linearize,
            PipelineArg::OneSided => Pipeline::OneSided,
            PipelineArg::Group => Pipeline::Group,
            PipelineArg::Np => Pipeline::NesinPoizat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Exhaustive,
    Meataxe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub document: Value,
    /// One line for standard error.
    pub diagnostic: Option<String>,
}

impl Output {
    fn ok(document: Value) -> Output {
        Output { code: exit::OK, document, diagnostic: None }
    }

    fn input_error(e: &DocError) -> Output {
        let class = match e {
            DocError::Parse { .. } => "parse",
            DocError::Validation { .. } => "validation",
            DocError::Io(_) => "io",
        };
        Output {
            code: exit::INPUT,
            document: json!({"kind": "error", "class": class, "message": e.to_string()}),
            diagnostic: Some(e.to_string()),
        }
    }

    fn engine_error(e: &EngineError, p: Option<Pipeline>, m: &ModuleInstance, opts: &EngineOptions) -> Output {
        Output { code: exit_code(e), document: error_document(e, p, Some(m), opts), diagnostic: Some(e.to_string()) }
    }
}

/// A file path, or else the name of a corpus instance.
pub fn load_instance(arg: &str) -> Result<ModuleInstance, DocError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| DocError::Io(format!("{arg}: {e}")))?;
        return parse_instance(&text);
    }
    corpus::load_instance(arg)
        .unwrap_or_else(|| Err(DocError::Io(format!("{arg}: no such file or corpus instance"))))
}

pub fn execute(cli: &Cli) -> Output {
    let opts = EngineOptions { seed: cli.seed, budget: cli.budget };
    let with_instance = |arg: &str, f: &dyn Fn(&ModuleInstance) -> Output| match load_instance(arg) {
        Ok(m) => f(&m),
        Err(e) => Output::input_error(&e),
    };
    let pipeline = |arg: &str, p: Pipeline| {
        with_instance(arg, &|m| match run_pipeline(p, m, &opts) {
            Ok(out) => Output::ok(out.document),
            Err(e) => Output::engine_error(&e, Some(p), m, &opts),
        })
    };
    match &cli.command {
        Command::Centralize { instance } => with_instance(instance, &centralize),
        Command::Irreducible { instance, gens, method } => {
            with_instance(instance, &|m| irreducible(m, *gens, *method, &opts))
        }
        Command::Delta { instance } => with_instance(instance, &|m| delta(m, &opts)),
        Command::Linearize { instance } => pipeline(instance, Pipeline::Linearize),
        Command::CorollaryOneSided { instance } => pipeline(instance, Pipeline::OneSided),
        Command::CorollaryGroup { instance } => pipeline(instance, Pipeline::Group),
        Command::CorollaryNp { instance } => pipeline(instance, Pipeline::NesinPoizat),
        Command::Verify { instance, certificate, pipeline } => {
            with_instance(instance, &|m| verify(m, certificate, (*pipeline).into(), &opts))
        }
        Command::Format { instance } => with_instance(instance, &|m| Output::ok(doc::instance_to_json(m))),
        Command::Corpus { action: CorpusAction::List } => corpus_list(),
        Command::Corpus { action: CorpusAction::Run { all, names } } => corpus_run(*all, names, &opts),
    }
}

fn centralize(m: &ModuleInstance) -> Output {
    let report = double_centralizer_check(m);
    Output::ok(json!({
        "kind": "commutant",
        "dim": report.t.dim(),
        "basis": doc::matrices_json(report.t.basis()),
        "s_closure_dim": report.closure.dim(),
        "double_commutant_dim": report.s_cc.dim(),
        "double_centralizer": report.biequal,
    }))
}

fn irreducible(m: &ModuleInstance, which: GenSet, method: MethodArg, opts: &EngineOptions) -> Output {
    let (label, gens) = match which {
        GenSet::S => ("s", Some(m.s_gens())),
        GenSet::T => ("t", m.t_gens()),
        GenSet::G => ("g", m.g_gens()),
        GenSet::R => ("r", m.r_gens()),
    };
    let Some(gens) = gens else {
        return Output::input_error(&DocError::Validation {
            path: format!("{label}_gens"),
            message: "missing key".into(),
        });
    };
    let method = match method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Exhaustive => Method::Exhaustive,
        MethodArg::Meataxe => Method::MeatAxe,
    };
    match irreducible_test(m.field(), m.n(), gens, &opts.irreducibility().with_method(method)) {
        Ok(Irreducibility::Irreducible { strategy }) => Output::ok(json!({
            "kind": "irreducibility",
            "gens": label,
            "irreducible": true,
            "strategy": strategy.as_str(),
        })),
        Ok(Irreducibility::Reducible { witness }) => Output::ok(json!({
            "kind": "irreducibility",
            "gens": label,
            "irreducible": false,
            "witness": doc::subspace_json(&witness),
        })),
        Err(e) => Output::engine_error(&e.into(), None, m, opts),
    }
}

fn delta(m: &ModuleInstance, opts: &EngineOptions) -> Output {
    let run = || -> Result<Value, EngineError> {
        let s = algebra_closure(m.field(), m.s_gens(), m.n(), true);
        let t = match m.t_gens() {
            Some(t) => algebra_closure(m.field(), t, m.n(), true),
            None => centralizer_basis(m.field(), m.s_gens(), m.n()),
        };
        let division = matches!(is_division_ring(&t, &opts.irreducibility())?, DivisionVerdict::Division { .. });
        let d = compute_delta(&s, division.then_some(&t), DeltaStrategy::Auto, opts)?;
        Ok(json!({
            "kind": "delta",
            "delta": d.delta,
            "route": d.route.as_str(),
            "witness": doc::matrix_json(&d.witness),
        }))
    };
    match run() {
        Ok(v) => Output::ok(v),
        Err(e) => Output::engine_error(&e, None, m, opts),
    }
}

fn verify(m: &ModuleInstance, path: &Path, p: Pipeline, opts: &EngineOptions) -> Output {
    let m = match linearised_instance(p, m) {
        Ok(m) => m,
        Err(e) => return Output::engine_error(&e.into(), None, m, opts),
    };
    let cert = match std::fs::read_to_string(path) {
        Ok(text) => parse_certificate(&text),
        Err(e) => Err(DocError::Io(format!("{}: {e}", path.display()))),
    };
    let cert = match cert {
        Ok(c) => c,
        Err(e) => return Output::input_error(&e),
    };
    match verify_certificate(&m, &cert) {
        Ok(()) => Output::ok(json!({"kind": "verification", "valid": true})),
        Err(f) => Output {
            code: exit::FAILED,
            document: json!({"kind": "verification", "valid": false, "check": f.check, "message": f.message}),
            diagnostic: Some(f.to_string()),
        },
    }
}

fn corpus_list() -> Output {
    let entries: Vec<Value> = corpus::manifest()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "instance": e.instance,
                "verb": e.pipeline.verb(),
                "expect": e.expect,
                "provenance": e.provenance,
            })
        })
        .collect();
    Output::ok(json!({"kind": "corpus", "entries": entries}))
}

fn corpus_run(all: bool, names: &[String], opts: &EngineOptions) -> Output {
    let manifest = corpus::manifest();
    if !all && names.is_empty() {
        return Output::input_error(&DocError::Validation {
            path: "corpus run".into(),
            message: "name entries or pass --all".into(),
        });
    }
    if let Some(missing) = names.iter().find(|n| !manifest.iter().any(|e| &e.name == *n)) {
        return Output::input_error(&DocError::Io(format!("{missing}: no such corpus entry")));
    }
    let selected: Vec<_> = manifest.into_iter().filter(|e| all || names.contains(&e.name)).collect();
    let results: Vec<_> = selected.par_iter().map(|e| run_entry(e, opts)).collect();
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let document = json!({
        "kind": "corpus_run",
        "passed": results.len() - failed.len(),
        "failed": failed.len(),
        "entries": results
            .iter()
            .map(|r| json!({"name": r.name, "pass": r.pass, "expected": r.expected, "actual": r.actual}))
            .collect::<Vec<_>>(),
    });
    if failed.is_empty() {
        Output::ok(document)
    } else {
        Output { code: exit::FAILED, document, diagnostic: Some(format!("entries failed: {}", failed.join(", "))) }
    }
}

/// Parses arguments, runs the command, writes its output and returns the
/// exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::OK };
        }
    };
    let out = execute(&cli);
    if let Some(d) = &out.diagnostic {
        eprintln!("skewfield: {d}");
    }
    let text = doc::to_canonical_string(&out.document);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("skewfield: {}: {e}", path.display());
                return exit::INPUT;
            }
        }
        None => print!("{text}"),
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Output {
        let cli = Cli::try_parse_from(std::iter::once("skewfield").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn linearize_f4() {
        let out = run(&["linearize", "f4_on_f2sq"]);
        assert_eq!(out.code, exit::OK);
        assert_eq!(out.document["d"], 2);
        assert_eq!(out.document["k"], 1);
    }

    #[test]
    fn violation_exit_codes() {
        let out = run(&["linearize", "upper_triangular_fixture"]);
        assert_eq!(out.code, exit::VIOLATION);
        assert_eq!(out.document["claim"], "irreducibility");
        let out = run(&["linearize", "nilpotent_T_fixture"]);
        assert_eq!(out.code, exit::VIOLATION);
        assert_eq!(out.document["claim"], "(i)");
        assert_eq!(out.document["witness"], json!([["0", "1"], ["0", "0"]]));
    }

    #[test]
    fn unknown_instance_is_an_input_error() {
        assert_eq!(run(&["linearize", "no_such_thing"]).code, exit::INPUT);
    }

    #[test]
    fn partial_report_on_permuted_ideals() {
        let out = run(&["corollary-np", "diagonal_swap_fixture"]);
        assert_eq!(out.code, exit::VIOLATION);
        assert_eq!(out.document["claim"], "conjugate_singleton");
        assert_eq!(out.document["partial_report"]["direct"], true);
    }

    #[test]
    fn small_verbs() {
        let out = run(&["centralize", "crossed_product_f2"]);
        assert_eq!(out.document["dim"], 1);
        assert_eq!(out.document["double_centralizer"], true);
        let out = run(&["irreducible", "upper_triangular_fixture", "--method", "meataxe"]);
        assert_eq!(out.document["irreducible"], false);
        let out = run(&["delta", "full_mat3_f2"]);
        assert_eq!(out.document["delta"], 1);
        let out = run(&["irreducible", "f4_on_f2sq", "--gens", "g"]);
        assert_eq!(out.code, exit::INPUT);
    }

    #[test]
    fn corpus_runs_clean() {
        let out = run(&["corpus", "run", "--all"]);
        assert_eq!(out.code, exit::OK, "{}", out.document);
    }
}
