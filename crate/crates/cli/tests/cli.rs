use assert_cmd::Command;

fn normcalc() -> Command {
    let mut cmd = Command::cargo_bin("normcalc").unwrap();
    cmd.env_remove("NORMCALC_CACHE");
    cmd
}

fn stdout(args: &[&str]) -> String {
    let out = normcalc().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn counts_transfer_systems() {
    assert_eq!(stdout(&["transfer", "count", "--group", "Cp2"]), "5\n");
    assert_eq!(stdout(&["transfer", "count", "--group", "S3"]), "9\n");
    assert_eq!(stdout(&["transfer", "count", "--group", "C2xC2"]), "19\n");
}

#[test]
fn tensor_of_trivial_and_complete() {
    let out = stdout(&["windex", "tensor", "--group", "C2", "--lhs", "triv", "--rhs", "complete"]);
    assert_eq!(out.lines().next(), Some("complete"));
}

#[test]
fn sign_is_additive_with_itself() {
    assert_eq!(stdout(&["rep", "additivity", "--group", "C2", "--v", "sigma", "--w", "sigma"]), "PASS\n");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["windex", "saturate", "--group", "S3", "--gens", "[6/3]", "--bound", "6", "--format", "json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(v.is_object());
}

#[test]
fn gset_operations() {
    assert_eq!(stdout(&["gset", "coinduce", "--group", "S3", "--set", "[2/1]", "--to", "6"]), "[6/1] + [6/3]\n");
    assert_eq!(stdout(&["gset", "iso", "--group", "S3", "--level", "6", "--marks", "6,0,0,0"]), "[6/1]\n");
    let marks = stdout(&["gset", "marks", "--group", "C2", "--set", "[2/1] + 2·[2/2]"]);
    assert_eq!(marks, "     1: 4\n     2: 2\n");
}

#[test]
fn poset_as_dot() {
    let dot = stdout(&["group", "poset", "--group", "S3", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 4);
}

#[test]
fn lattice_as_dot() {
    let dot = stdout(&["transfer", "lattice", "--group", "C4", "--format", "dot"]);
    assert_eq!(dot.matches(" [label=").count(), 5);
}

#[test]
fn corrupted_system_is_caught() {
    normcalc().args(["span", "verify-pullback", "--group", "S3", "--system", "e0:1", "--corrupt"]).assert().code(1);
    normcalc().args(["span", "verify-pullback", "--group", "S3", "--system", "complete", "--budget", "40"]).assert().success();
}

#[test]
fn counterexample_commands() {
    assert!(stdout(&["counterexample", "eh"]).starts_with("PASS"));
    let out = stdout(&["counterexample", "distinctness", "--group", "C2", "--family", "1", "--s", "2·[2/2]"]);
    assert!(out.contains("tr: 2·[2/2]"));
}

#[test]
fn errors_and_exit_codes() {
    normcalc().args(["windex", "validate", "--system", "nope"]).assert().code(2);
    normcalc().args(["gset", "marks", "--set", "[9/1]"]).assert().code(2);
    normcalc().args(["frobnicate"]).assert().code(2);
    normcalc().args(["group", "info", "--format", "dot"]).assert().code(2);
    let out = normcalc().args(["group", "info", "--group", "Q9"]).assert().failure().get_output().stderr.clone();
    assert!(String::from_utf8(out).unwrap().starts_with("error: "));
}

#[test]
fn writes_to_file_and_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("subgroups.json");
    for _ in 0..2 {
        normcalc()
            .env("NORMCALC_CACHE", dir.path().join("cache"))
            .args(["group", "subgroups", "--group", "S3", "--format", "json", "--out"])
            .arg(&out)
            .assert()
            .success();
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(std::fs::read_dir(dir.path().join("cache")).unwrap().count(), 1);
}

#[test]
fn acceptance_subset() {
    let out = stdout(&["suite", "acceptance", "--criteria", "1,7"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("criterion")).count(), 2);
    assert!(out.ends_with("all criteria pass\n"));
}
