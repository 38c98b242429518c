use std::fs;
use std::path::PathBuf;

use rwka_core::format::{parse_dfa_automaton, parse_multi_head_automaton, parse_wk_automaton, serialize_wk};
use rwka_core::{
    check_reversibility_mfa, check_reversibility_wk, check_strong_reversibility, dfa_to_rwka, mfa2_to_swk,
    parse_machine, serialize_machine, swk_to_mfa2, theorem2_machine, validate,
};

fn corpus(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name]
        .iter()
        .collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn corpus_files() -> Vec<String> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect();
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn every_corpus_file_is_canonical_and_valid() {
    let names = corpus_files();
    assert!(names.len() >= 9, "{names:?}");
    for name in names {
        let text = corpus(&name);
        let m = parse_machine(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(serialize_machine(&m), text, "{name} is not in canonical form");
        let report = validate(&m);
        assert!(report.passed(), "{name}: {report}");
    }
}

#[test]
fn example1_golden() {
    let dfa = parse_dfa_automaton(&corpus("example1-dfa.dfa")).unwrap();
    let m = dfa_to_rwka(&dfa).unwrap();
    assert_eq!(serialize_wk(&m), corpus("example1-rwka.wk"));
    assert_eq!(m.delta.len(), 6);
}

#[test]
fn block_machine_file_matches_builder() {
    let m = theorem2_machine();
    assert_eq!(serialize_wk(&m), corpus("theorem2.wk"));
    assert!(check_reversibility_wk(&m).passed());
    assert!(!check_strong_reversibility(&m).passed());
}

#[test]
fn identity_files_are_lemma2_outputs() {
    for base in ["anbn1", "copy"] {
        let mfa = parse_multi_head_automaton(&corpus(&format!("{base}.mfa"))).unwrap();
        assert!(check_reversibility_mfa(&mfa).passed());
        let wk = mfa2_to_swk(&mfa).unwrap();
        assert_eq!(serialize_wk(&wk), corpus(&format!("{base}-identity.wk")));
        assert!(check_strong_reversibility(&wk).passed());
        assert_eq!(swk_to_mfa2(&wk).unwrap(), mfa);
    }
}

#[test]
fn strongly_reversible_samples_translate() {
    for name in ["alternating-complement.wk", "loop.wk"] {
        let wk = parse_wk_automaton(&corpus(name)).unwrap();
        assert!(check_strong_reversibility(&wk).passed(), "{name}");
        let mfa = swk_to_mfa2(&wk).unwrap();
        assert!(check_reversibility_mfa(&mfa).passed(), "{name}");
    }
}
