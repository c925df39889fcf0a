use std::path::PathBuf;
use std::process::{Command, Output};

fn monster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monster")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn programs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs")
}

#[test]
fn gs_check_on_seed_ledger() {
    let o = monster(&["gs-check"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("value at t=1/2: -7/8"), "{out}");
    assert!(out.contains("status: PASS"));
}

#[test]
fn records_format_is_key_value() {
    let o = monster(&["--format", "records", "gs-check"]);
    assert_eq!(stdout(&o), "value=-7/8\ndecimal=-0.875000000000\nr5=4\nstatus=PASS\n");
}

#[test]
fn parse_reports_tuples_and_count_delta() {
    let stream = "++xy2y+,,,221++1++++0xy1yyy++,,;;;;xxx2112+++yxyxy22+++";
    let o = monster(&["--format", "records", "parse", "--p", "3", "--vars", "2", "--expect-empty", "2", stream]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("tuple1=(2xyy, 2)\n"), "{out}");
    assert!(out.contains("pending=(xxx+yxyxy ...)\n"));
    assert!(out.contains("empty=3\n"));
    assert!(out.contains("empty_delta=+1\n"));
}

#[test]
fn zero_budget_run_is_the_seed_ledger() {
    let o = monster(&["foundry-run", "--budget", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 seed 0 5 wwwww\n1 seed 0 5 xxxxx\n2 seed 0 5 yyyyy\n3 seed 0 5 zzzzz\n");
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = programs().join("enumerator.conf");
    let config = config.to_str().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let full = monster(&["--config", config, "foundry-run", "--budget", "300", "--ledger", &path("full")]);
    assert!(full.status.success(), "{}", stderr(&full));
    let half = monster(&[
        "--config",
        config,
        "foundry-run",
        "--budget",
        "100",
        "--ledger",
        &path("half"),
        "--snapshot",
        &path("snap"),
    ]);
    assert!(half.status.success());
    let rest = monster(&[
        "--config",
        config,
        "foundry-resume",
        "--snapshot",
        &path("snap"),
        "--budget",
        "200",
        "--ledger",
        &path("rest"),
    ]);
    assert!(rest.status.success(), "{}", stderr(&rest));
    let a = std::fs::read(path("full")).unwrap();
    assert_eq!(a, std::fs::read(path("rest")).unwrap());
    assert!(String::from_utf8(a).unwrap().contains("tracer:3"));

    // a snapshot from another config is refused
    let other = monster(&["foundry-resume", "--snapshot", &path("snap"), "--budget", "1"]);
    assert_eq!(other.status.code(), Some(1));
    assert_eq!(stderr(&other).lines().count(), 1);
}

#[test]
fn dims_and_report_succeed_on_seed_ledger() {
    let o = monster(&["dims", "--depth", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("6 4068 28 0\n"));
    let o = monster(&["--format", "records", "report"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dimensions=1,4,16,64,256,1020,4068,16224,64704\n"));
}

#[test]
fn machine_commands() {
    let asm = programs().join("monomial.asm");
    let o = monster(&["machine-run", "--asm", asm.to_str().unwrap(), "--steps", "60"]);
    assert!(stdout(&o).starts_with("output: x;xx;xxx;"));
    let o = monster(&["--format", "records", "machine-enum", "--from", "3", "--count", "2"]);
    assert_eq!(stdout(&o), "index=3 program=OUT 0\nindex=4 program=HALT; HALT\n");
    let o = monster(&["machine-run", "--index", "3"]);
    assert!(stdout(&o).contains("output: 0\nstatus: halted"));
}

#[test]
fn group_eval_words_and_laws() {
    let o = monster(&["--format", "records", "group-eval", "--depth", "4", "x t x^-1 t^-1", "x t x^-1 t^-1"]);
    let out = stdout(&o);
    assert!(out.contains("element1=(1, x) ledger=4 depth=4\n"), "{out}");
    assert!(out.contains("not separated"));
    let o = monster(&["group-eval", "--depth", "4", "--samples", "20", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("failures: 0"));
}

#[test]
fn failures_are_single_line_and_nonzero() {
    for args in [
        &["foundry-run", "--budget", "many"][..],
        &["--config", "/nonexistent/foundry.conf", "gs-check"],
        &["parse", "--p", "4", "x;"],
        &["group-eval", "q"],
        &["frobnicate"],
    ] {
        let o = monster(args);
        assert!(!o.status.success(), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn outputs_are_reproducible() {
    let a = monster(&["--format", "records", "foundry-run", "--budget", "2000"]);
    let b = monster(&["--format", "records", "foundry-run", "--budget", "2000"]);
    assert_eq!(a.stdout, b.stdout);
}
