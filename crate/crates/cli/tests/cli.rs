use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use centering::trace::Trace;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centering"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn farmer_trace_establishes_then_continues() {
    let o = run(&["derive", path(&corpus("farmer.disc"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("utterance 1: A_1* farmer walks | Establish"));
    assert!(out.contains("utterance 2: He_* laughed | Continuation | violations: none | merged"));
    assert!(out.contains("program: [u_0, u_1 | u_0 = u_1, farmer(u_1), walk(u_1), laugh(u_0)]"));
}

#[test]
fn sloppy_cat_trace_shows_the_blocked_shift() {
    let o = run(&["derive", "--trace", path(&corpus("sloppy_cat.disc"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("  transition: Shift"));
    assert!(out.contains("  join: sequenced (u_0, u_3 reassigned)"));
    assert!(out.contains("  resolved: "));
}

#[test]
fn missing_file_is_a_diagnosed_input_error() {
    let o = run(&["derive", "no/such/file.disc"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no/such/file.disc"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["eval", path(&corpus("farmer.disc"))]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["readings", path(&corpus("farmer.disc")), "--site", "0:1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn parse_errors_name_the_utterance() {
    let f = temp("Tom_1* walks.\nwalks Tom_2 the.\n");
    let o = run(&["derive", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("utterance 2"), "{}", stderr(&o));
}

#[test]
fn strict_centering_turns_violations_into_failures() {
    let f = temp("Tom_1* walks.\nJohn_2 laughed.\n");
    let file = f.path().to_str().unwrap();
    let warn = run(&["derive", file]);
    assert_eq!(warn.status.code(), Some(0));
    assert!(stdout(&warn).contains("violations: NoCenter"));
    let strict = run(&["derive", "--centering", "strict", file]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(stderr(&strict).contains("NoCenter"));
}

#[test]
fn sloppy_cat_readings_differ_in_the_possessor() {
    let o = run(&[
        "readings",
        path(&corpus("sloppy_cat.disc")),
        "--site",
        "1:4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = |label: &str| {
        out.lines()
            .find(|l| l.starts_with(label))
            .unwrap()
            .to_string()
    };
    assert!(line("sloppy (his_*)").ends_with("of(u_3, u_0), cat(u_3), love(u_4, u_3)]"));
    assert!(line("strict (his_1)").ends_with("of(u_3, u_1), cat(u_3), love(u_4, u_3)]"));
}

#[test]
fn plain_genitives_leave_paycheck_strict_only() {
    let file = corpus("paycheck.disc");
    let dynamic = stdout(&run(&["readings", path(&file), "--site", "2:4"]));
    assert!(!dynamic.contains("strict only"));
    let plain = stdout(&run(&[
        "readings",
        "--mode",
        "strict-annotations",
        path(&file),
        "--site",
        "2:4",
    ]));
    assert!(plain.contains("strict only"));
}

#[test]
fn help_kiss_readings_include_embedded_ellipsis() {
    let o = run(&["readings", path(&corpus("help_kiss.disc")), "--site", "2:7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT([ | want(u_3, kiss(u_1, u_3))])"));
}

#[test]
fn structured_readings_are_json() {
    let o = run(&[
        "readings",
        "--format",
        "structured",
        path(&corpus("sloppy_cat.disc")),
        "--site",
        "1:4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["controller"], "u_1");
    assert_eq!(v["sloppy"]["annotation"], "his_*");
}

#[test]
fn golden_suite_passes_and_mutations_fail() {
    let ok = run(&["golden"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("8/8 golden derivations match"));
    let broken = run(&["golden", "--mutate", "drop-center-equation"]);
    assert_eq!(broken.status.code(), Some(3));
    assert!(stdout(&broken).contains("FAIL sloppy_cat"));
    let merged = run(&["golden", "--mutate", "ignore-reassignment"]);
    assert_eq!(merged.status.code(), Some(3));
    assert!(stdout(&merged).contains("FAIL tom_john"));
}

#[test]
fn eval_reports_satisfaction_and_outputs() {
    let model = corpus("models/paycheck_sloppy.model");
    let disc = corpus("paycheck.disc");
    let o = run(&[
        "eval",
        path(&disc),
        "--model",
        path(&model),
        "--input-state",
        "u_1=smith",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("satisfiable: true"));
    assert!(
        out.contains("outputs: 1\n  {u_0=jones, u_1=smith, u_3=p2, u_4=jones}"),
        "{out}"
    );
    let strict = run(&[
        "eval",
        path(&disc),
        "--model",
        path(&corpus("models/paycheck_strict.model")),
    ]);
    assert!(stdout(&strict).contains("satisfiable: false"));
}

#[test]
fn eval_rejects_unknown_entities() {
    let model = temp("domain: a b\nconst Tom = a\npred walk = {(a)}\n");
    let disc = temp("Tom_1* walks.\n");
    let args = |state: &str| {
        run(&[
            "eval",
            disc.path().to_str().unwrap(),
            "--model",
            model.path().to_str().unwrap(),
            "--input-state",
            state,
        ])
    };
    assert_eq!(args("u_1=a").status.code(), Some(0));
    let o = args("u_1=zed");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("zed"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["derive", "--trace"],
        vec!["derive", "--format", "structured"],
        vec!["readings", "--site", "1:4"],
    ] {
        let mut full: Vec<&str> = args.clone();
        let file = corpus("sloppy_cat.disc");
        full.push(path(&file));
        let a = run(&full);
        let b = run(&full);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn structured_trace_round_trips() {
    let o = run(&[
        "derive",
        "--format",
        "structured",
        path(&corpus("paycheck.disc")),
    ]);
    let out = stdout(&o);
    let trace = Trace::from_json(&out).unwrap();
    assert_eq!(format!("{}\n", trace.to_json()), out);
    let text = stdout(&run(&["derive", "--trace", path(&corpus("paycheck.disc"))]));
    assert_eq!(trace.to_text(true), text);
}
