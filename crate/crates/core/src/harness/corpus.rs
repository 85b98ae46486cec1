//! The built-in example corpus. Instance documents and the manifest of
//! expectations are compiled into the binary from `corpus/`.

use serde_json::Value;

use super::doc::{parse_instance, parse_json, DocError};
use super::{outcome_summary, run_pipeline, Pipeline};
use crate::engine::EngineOptions;
use crate::module::ModuleInstance;

const INSTANCES: &[(&str, &str)] = &[
    ("crossed_product_f2", include_str!("../../corpus/crossed_product_f2.json")),
    ("diagonal_swap_fixture", include_str!("../../corpus/diagonal_swap_fixture.json")),
    ("f4_on_f2sq", include_str!("../../corpus/f4_on_f2sq.json")),
    ("full_mat3_f2", include_str!("../../corpus/full_mat3_f2.json")),
    ("gl2_f2_group", include_str!("../../corpus/gl2_f2_group.json")),
    ("nilpotent_T_fixture", include_str!("../../corpus/nilpotent_T_fixture.json")),
    ("quaternions_q4", include_str!("../../corpus/quaternions_q4.json")),
    ("singer_f3", include_str!("../../corpus/singer_f3.json")),
    ("unipotent_group_fixture", include_str!("../../corpus/unipotent_group_fixture.json")),
    ("upper_triangular_fixture", include_str!("../../corpus/upper_triangular_fixture.json")),
];

const MANIFEST: &str = include_str!("../../corpus/manifest.json");

pub fn instance_names() -> impl Iterator<Item = &'static str> {
    INSTANCES.iter().map(|(name, _)| *name)
}

pub fn instance_text(name: &str) -> Option<&'static str> {
    INSTANCES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn load_instance(name: &str) -> Option<Result<ModuleInstance, DocError>> {
    instance_text(name).map(parse_instance)
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: String,
    pub pipeline: Pipeline,
    /// Keys that must appear with these values in the outcome summary.
    pub expect: Value,
    /// Where the expectation comes from.
    pub provenance: String,
}

/// The manifest entries, sorted by name.
pub fn manifest() -> Vec<CorpusEntry> {
    let doc = parse_json(MANIFEST).expect("the built-in manifest is valid JSON");
    let mut entries: Vec<CorpusEntry> = doc["entries"]
        .as_array()
        .expect("manifest lists entries")
        .iter()
        .map(|e| CorpusEntry {
            name: e["name"].as_str().expect("entry name").to_string(),
            instance: e["instance"].as_str().expect("entry instance").to_string(),
            pipeline: Pipeline::from_verb(e["verb"].as_str().expect("entry verb")).expect("known verb"),
            expect: e["expect"].clone(),
            provenance: e["provenance"].as_str().unwrap_or_default().to_string(),
        })
        .collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    entries
}

#[derive(Debug, Clone)]
pub struct EntryResult {
    pub name: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Value,
}

pub fn matches(expect: &Value, actual: &Value) -> bool {
    match expect.as_object() {
        Some(keys) => keys.iter().all(|(k, v)| actual.get(k) == Some(v)),
        None => false,
    }
}

pub fn run_entry(entry: &CorpusEntry, opts: &EngineOptions) -> EntryResult {
    let actual = match load_instance(&entry.instance) {
        Some(Ok(m)) => outcome_summary(&run_pipeline(entry.pipeline, &m, opts)),
        Some(Err(e)) => serde_json::json!({"outcome": "error", "message": e.to_string()}),
        None => serde_json::json!({"outcome": "error", "message": format!("no instance {:?}", entry.instance)}),
    };
    EntryResult { name: entry.name.clone(), pass: matches(&entry.expect, &actual), expected: entry.expect.clone(), actual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::doc::{instance_to_json, to_canonical_string};

    #[test]
    fn instances_are_canonical() {
        for (name, text) in INSTANCES {
            let m = parse_instance(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(m.name.as_deref(), Some(*name));
            assert_eq!(to_canonical_string(&instance_to_json(&m)), *text, "{name} is not canonical");
        }
    }

    #[test]
    fn manifest_refers_to_known_instances() {
        let entries = manifest();
        assert!(!entries.is_empty());
        for e in &entries {
            assert!(instance_text(&e.instance).is_some(), "{}", e.name);
            assert!(!e.provenance.is_empty(), "{} has no provenance", e.name);
        }
    }

    #[test]
    fn f4_parses_as_expected() {
        let m = load_instance("f4_on_f2sq").unwrap().unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.s_gens().len(), 1);
        assert_eq!(m.field().order(), Some(2));
    }
}
