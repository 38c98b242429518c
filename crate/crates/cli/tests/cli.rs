use std::path::PathBuf;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn rwka(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rwka").chain(args.iter().copied());
    let code = rwka_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn run_accepts_with_replayable_witness() {
    let file = corpus("example1-rwka.wk");
    let (code, out, _) = rwka(&["run", &file, "aba"]);
    assert_eq!(code, 0);
    assert_eq!(out, "accept\nwitness: a_1 b_2 a_1\n");
    let (code, out, _) = rwka(&["run", &file, "aba", "--lower", "a_1,b_2,a_1", "--trace"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("accept\n"));
    assert_eq!(out.lines().count(), 2 + 5);
}

#[test]
fn run_reject_and_loop_exit_one() {
    let (code, out, _) = rwka(&["run", &corpus("example1-rwka.wk"), "ab"]);
    assert_eq!((code, out.as_str()), (1, "reject\n"));
    let (code, out, _) = rwka(&["run", &corpus("loop.wk"), "", "--lower", ""]);
    assert_eq!(code, 1);
    assert!(out.starts_with("loop\n"));
    let (code, out, _) = rwka(&["--format", "tsv", "run", &corpus("anbn1.mfa"), "abb"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict\taccept\n"));
}

#[test]
fn run_input_errors_exit_two() {
    let file = corpus("example1-rwka.wk");
    let (code, _, err) = rwka(&["run", &file, "abc"]);
    assert_eq!(code, 2);
    assert!(err.contains("not in the input alphabet"), "{err}");
    let (code, _, _) = rwka(&["run", &file, "ab", "--lower", "a_1,a_1"]);
    assert_eq!(code, 2);
    let (code, _, _) = rwka(&["run", &corpus("example1-dfa.dfa"), "ab", "--lower", "ab"]);
    assert_eq!(code, 2);
}

#[test]
fn multi_character_words_are_comma_separated() {
    let file = corpus("theorem2.wk");
    let (code, out, _) = rwka(&["run", &file, "aa*a%ab*a%ab*b"]);
    assert_eq!(code, 0, "{out}");
    let witness = out
        .lines()
        .nth(1)
        .unwrap()
        .trim_start_matches("witness: ")
        .replace(' ', ",");
    let (code, out, _) = rwka(&["run", &file, "aa*a%ab*a%ab*b", "--lower", &witness]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn check_exit_codes_follow_requirement() {
    let file = corpus("theorem2.wk");
    let (code, out, _) = rwka(&["check", &file]);
    assert_eq!(code, 0);
    assert!(out.contains("reversible: pass"));
    assert!(out.contains("strongly-reversible: fail"));
    assert_eq!(rwka(&["check", &file, "--require", "reversible"]).0, 0);
    assert_eq!(rwka(&["check", &file, "--require", "strong"]).0, 1);
    assert_eq!(
        rwka(&["check", &corpus("copy-identity.wk"), "--require", "strong"]).0,
        0
    );
    assert_eq!(rwka(&["check", &corpus("example1-dfa.dfa")]).0, 0);
    assert_eq!(
        rwka(&["check", &corpus("example1-dfa.dfa"), "--require", "strong"]).0,
        2
    );
    let (code, out, _) = rwka(&["--format", "tsv", "check", &corpus("copy.mfa")]);
    assert_eq!(code, 0);
    assert_eq!(out, "valid\tpass\nreversible\tpass\nstrongly-reversible\tn/a\n");
}

#[test]
fn check_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.wk");
    std::fs::write(
        &path,
        "type: wk\nstates: p q r\nstart: p\nfinal: r\nalphabet: a\nrho: a->a\n\
         trans: p a a -> r 1 1\ntrans: q a a -> r 1 1\n",
    )
    .unwrap();
    let (code, out, _) = rwka(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("[C2]"), "{out}");
}

#[test]
fn parse_errors_are_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.wk");
    std::fs::write(&path, "type: wk\nstates: p\nstart p\n").unwrap();
    let (code, _, err) = rwka(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("broken.wk:3:1"), "{err}");
    assert_eq!(rwka(&["check", "/nonexistent.wk"]).0, 2);
    assert_eq!(rwka(&["compare", &corpus("loop.wk")]).0, 2);
    assert_eq!(rwka(&["--format", "xml", "check", &corpus("loop.wk")]).0, 2);
}

#[test]
fn translations_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_wk = dir.path().join("e1.wk");
    let (code, out, _) = rwka(&["from-dfa", &corpus("example1-dfa.dfa"), "-o", out_wk.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(
        std::fs::read_to_string(&out_wk).unwrap(),
        std::fs::read_to_string(corpus("example1-rwka.wk")).unwrap()
    );
    let (code, mfa_text, _) = rwka(&["to-mfa", &corpus("copy-identity.wk")]);
    assert_eq!(code, 0);
    assert_eq!(mfa_text, std::fs::read_to_string(corpus("copy.mfa")).unwrap());
    let (code, wk_text, _) = rwka(&["from-mfa", &corpus("anbn1.mfa")]);
    assert_eq!(code, 0);
    assert_eq!(wk_text, std::fs::read_to_string(corpus("anbn1-identity.wk")).unwrap());
    let (code, _, err) = rwka(&["to-mfa", &corpus("example1-rwka.wk")]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(rwka(&["from-dfa", &corpus("example1-rwka.wk")]).0, 2);
}

#[test]
fn compare_modes() {
    let (code, out, _) = rwka(&[
        "compare",
        &corpus("example1-dfa.dfa"),
        &corpus("example1-rwka.wk"),
        "--max-len",
        "12",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("words: 8191, mismatches: 0"), "{out}");
    let dfa_oracle = format!("dfa:{}", corpus("example1-dfa.dfa"));
    assert_eq!(
        rwka(&[
            "compare",
            &corpus("example1-rwka.wk"),
            "--oracle",
            &dfa_oracle,
            "--max-len",
            "8"
        ])
        .0,
        0
    );
    let (code, out, _) = rwka(&[
        "compare",
        &corpus("example1-rwka.wk"),
        &corpus("alternating-complement.wk"),
        "--max-len",
        "2",
    ]);
    assert_eq!(code, 2, "{out}");
    let (code, out, _) = rwka(&[
        "--format",
        "tsv",
        "compare",
        &corpus("theorem2.wk"),
        "--oracle",
        "theorem2",
        "--blocks",
        "--max-len",
        "9",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("mismatch\t*,a,%,*\t0\t1\n"), "{out}");
    assert_eq!(
        rwka(&["compare", &corpus("theorem2.wk"), "--oracle", "nope", "--max-len", "2"]).0,
        2
    );
}

#[test]
fn compare_with_itself_is_clean() {
    for name in [
        "example1-rwka.wk",
        "theorem2.wk",
        "copy.mfa",
        "example1-dfa.dfa",
        "loop.wk",
    ] {
        let f = corpus(name);
        assert_eq!(rwka(&["compare", &f, &f, "--max-len", "5"]).0, 0, "{name}");
    }
}

#[test]
fn enumerate_lists_accepted_words() {
    let (code, out, _) = rwka(&["enumerate", &corpus("example1-dfa.dfa"), "--max-len", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "a\naa\nba\n");
    let (_, out, _) = rwka(&["enumerate", &corpus("alternating-complement.wk"), "--max-len", "1"]);
    assert_eq!(out, "ε\nA\nC\nG\nT\n");
}
