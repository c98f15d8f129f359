//! End-to-end runs of the command-line interface against in-memory
//! buffers: exact outputs, exit codes, and byte-level determinism.

use starheight::cli::run;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["starheight"];
    argv.extend(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn count_lang_prints_expression_and_height() {
    let (code, out, err) = run_cli(&["count-lang", "--word", "aa", "--k", "1", "--alphabet", "a"]);
    assert_eq!((code, err.as_str()), (0, ""));
    assert_eq!(out, "aa\nheight: 0\n");
}

#[test]
fn count_lang_tree_form() {
    let (code, out, _) = run_cli(&[
        "count-lang", "--word", "aa", "--k", "1", "--alphabet", "a", "--tree",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "Concat\n  Lit a\n  Lit a\nheight: 0\n");
}

#[test]
fn member_answers_true_and_false() {
    let (code, out, _) = run_cli(&[
        "member", "--expr", "!(!0 aa !0)", "--word", "aba", "--alphabet", "ab",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "true\n");

    let (code, out, _) = run_cli(&[
        "member", "--expr", "!(!0 aa !0)", "--word", "aa", "--alphabet", "ab",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "false\n");
}

#[test]
fn height_measures_the_tree() {
    let (code, out, _) = run_cli(&["height", "--expr", "a(aa)*", "--alphabet", "a"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
}

#[test]
fn enum_lists_words_in_length_then_lex_order() {
    let (code, out, _) = run_cli(&["enum", "--expr", "a*|b", "--alphabet", "ab", "--max-len", "2"]);
    assert_eq!(code, 0);
    // ε prints as a blank line
    assert_eq!(out, "\na\nb\naa\n");
}

#[test]
fn equiv_reports_both_ways() {
    let (code, out, _) = run_cli(&[
        "equiv",
        "--expr1",
        "b*",
        "--expr2",
        "!0 - (!0 a !0)",
        "--alphabet",
        "ab",
        "--max-len",
        "6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "equivalent up to length 6\n");

    let (code, out, _) = run_cli(&[
        "equiv", "--expr1", "a", "--expr2", "a|aa", "--alphabet", "ab", "--max-len", "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "not equivalent: counterexample \"aa\"\n");
}

#[test]
fn rees_eval_prints_the_image() {
    let f1 = fixture("f1.spec");
    let (code, out, _) = run_cli(&["rees", "eval", "--spec", &f1, "--word", "ab"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(1, [0], 2)\n");

    let (code, out, _) = run_cli(&["rees", "eval", "--spec", &f1, "--word", "bb"]);
    assert_eq!(code, 0);
    assert_eq!(out, "zero\n");
}

#[test]
fn rees_preimage_builds_height_bounded_expressions() {
    let f1 = fixture("f1.spec");
    let (code, out, _) = run_cli(&["rees", "preimage", "--spec", &f1, "--element", "zero"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("height: 0\n"), "output: {out}");

    let (code, out, _) = run_cli(&["rees", "preimage", "--spec", &f1, "--element", "1,0,2"]);
    assert_eq!(code, 0);
    let height_line = out.lines().last().unwrap();
    assert!(
        height_line == "height: 0" || height_line == "height: 1",
        "output: {out}"
    );
}

#[test]
fn rees_recognized_unions_preimages() {
    let f1 = fixture("f1.spec");
    let (code, out, _) = run_cli(&[
        "rees",
        "recognized",
        "--spec",
        &f1,
        "--elements",
        "zero;1,0,1",
    ]);
    assert_eq!(code, 0);
    assert!(out.ends_with("height: 0\n") || out.ends_with("height: 1\n"));
}

#[test]
fn verify_count_passes_for_aba() {
    let (code, out, _) = run_cli(&[
        "verify", "count", "--word", "aba", "--max-k", "2", "--mod", "2", "--alphabet", "ab",
        "--max-len", "8",
    ]);
    assert_eq!(code, 0, "output:\n{out}");
    assert!(out.contains("Count(aba,0)"));
    assert!(out.contains("ModCount(aba,1,2)"));
    assert!(out.trim_end().ends_with("all 5 checks passed"), "output:\n{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_count_sweeps_all_supported_words_when_no_word_given() {
    let (code, out, _) = run_cli(&[
        "verify", "count", "--max-k", "1", "--alphabet", "ab", "--max-len", "5",
    ]);
    assert_eq!(code, 0, "output:\n{out}");
    // 14 supported words of length <= 3 over {a,b}, two counts each
    assert!(out.trim_end().ends_with("all 28 checks passed"), "output:\n{out}");
}

#[test]
fn verify_rees_sweeps_every_element() {
    let f1 = fixture("f1.spec");
    let (code, out, _) = run_cli(&["verify", "rees", "--spec", &f1, "--max-len", "5"]);
    assert_eq!(code, 0, "output:\n{out}");
    assert!(out.contains("preimage zero"));
    // 8 triples + zero
    assert!(out.trim_end().ends_with("all 9 checks passed"), "output:\n{out}");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify", "count", "--word", "ab", "--max-k", "1", "--mod", "2", "--alphabet", "ab",
        "--max-len", "6",
    ];
    let first = run_cli(&args);
    let second = run_cli(&args);
    assert_eq!(first, second);
}

#[test]
fn usage_errors_exit_with_two() {
    // unknown flag
    let (code, _, err) = run_cli(&["height", "--nope"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());

    // syntax error in the expression
    let (code, _, err) = run_cli(&["height", "--expr", "a|", "--alphabet", "ab"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error"), "stderr: {err}");

    // letter outside the alphabet
    let (code, _, err) = run_cli(&[
        "member", "--expr", "a", "--word", "c", "--alphabet", "ab",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("'c'"), "stderr: {err}");

    // missing spec file
    let (code, _, err) = run_cli(&["rees", "eval", "--spec", "/nonexistent.spec", "--word", "a"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"), "stderr: {err}");

    // malformed element
    let f1 = fixture("f1.spec");
    let (code, _, err) = run_cli(&["rees", "preimage", "--spec", &f1, "--element", "1,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("expected"), "stderr: {err}");

    // element outside the index ranges
    let (code, _, err) = run_cli(&["rees", "preimage", "--spec", &f1, "--element", "9,0,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("outside"), "stderr: {err}");

    // enumeration cap
    let (code, _, err) = run_cli(&["enum", "--expr", "a*", "--alphabet", "a", "--max-len", "20"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"), "stderr: {err}");
}

#[test]
fn caps_are_adjustable_from_the_command_line() {
    let (code, out, _) = run_cli(&[
        "enum", "--enum-cap", "14", "--expr", "a*", "--alphabet", "a", "--max-len", "14",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 15);

    let (code, _, err) = run_cli(&[
        "count-lang", "--composition-cap", "2", "--word", "aa", "--k", "3", "--alphabet", "ab",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("composition cap"), "stderr: {err}");

    let f2 = fixture("f2.spec");
    let (code, _, err) = run_cli(&[
        "rees", "preimage", "--tuple-budget", "2", "--spec", &f2, "--element", "1,0,0,1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "stderr: {err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}
