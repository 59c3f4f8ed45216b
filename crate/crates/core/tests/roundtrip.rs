use ghzlab::assets;
use ghzlab::specfile::SpecFile;

#[test]
fn every_asset_round_trips() {
    for name in assets::names() {
        let f = assets::load(name).unwrap();
        let text = f.to_json().unwrap();
        let back: SpecFile = text.parse().unwrap();
        assert_eq!(back.spec, f.spec, "{name}");
        assert_eq!(back.candidates.len(), f.candidates.len());
        for (a, b) in f.candidates.iter().zip(&back.candidates) {
            assert_eq!(a.bipartition, b.bipartition);
            assert_eq!(a.label, b.label);
            assert!(a.state.overlap(&b.state) > 1.0 - 1e-15);
        }
        assert_eq!(back.to_json().unwrap(), text, "{name}: second serialization differs");
    }
}

#[test]
fn save_and_load_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    for name in assets::names() {
        let f = assets::load(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        f.save(&path).unwrap();
        assert_eq!(SpecFile::load(&path).unwrap().spec, f.spec, "{name}");
    }
}

#[test]
fn candidate_states_are_normalized_on_load() {
    let text = r#"{"name":"n","n_qubits":2,"relations":[{"sites":[{"pauli":"Z"},{"pauli":"Z"}],"sign":1}],
        "candidates":[{"state":[[3,0],[0,0],[0,0],[0,0]],"bipartition":[[1],[2]]}]}"#;
    let f: SpecFile = text.parse().unwrap();
    assert!((f.candidates[0].state.amplitudes().norm() - 1.0).abs() < 1e-15);
}
