//! The committed fixture files must stay in sync with the in-code builders
//! that generated them.

use std::path::PathBuf;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn manifest_fixture_matches_builder() {
    let manifest = windkg_core::ontology::bundled::bundled_manifest();
    assert_eq!(fixture("levenmouth.manifest.json"), manifest.to_json());
    // and the file itself loads and builds
    let parsed =
        windkg_core::ontology::OntologyManifest::from_json(&fixture("levenmouth.manifest.json"))
            .unwrap();
    assert_eq!(parsed, manifest);
}

#[test]
fn phrase_fixture_matches_builder() {
    let registry = windkg_core::phrases::bundled_registry();
    assert_eq!(fixture("phrases.json"), registry.to_json());
}

#[test]
fn graph_fixture_matches_build_output() {
    let manifest = windkg_core::ontology::bundled::bundled_manifest();
    let graph = windkg_core::ontology::build_ontology(&manifest).unwrap();
    assert_eq!(
        fixture("levenmouth.kg.json"),
        windkg_core::io::save_graph_named(&graph, &manifest.name)
    );
    let loaded = windkg_core::io::load_graph(&fixture("levenmouth.kg.json")).unwrap();
    assert_eq!(loaded, graph);
}

#[test]
fn dataset_fixture_matches_generator() {
    let data = windkg_core::xai::synth::synthesize(2000, 2023);
    assert_eq!(fixture("scada_synthetic.csv"), data.to_csv());
}
