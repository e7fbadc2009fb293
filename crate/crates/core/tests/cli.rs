use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn mvred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvred"))
        .args(args)
        .env_remove("MVRED_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn model_lists_every_atom() {
    let o = mvred(&["model", &corpus("belnap_sample.mv")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("s(a) = bot"), "{text}");
    assert!(text.contains("u(a) = top"), "{text}");
}

#[test]
fn check_prints_true_or_false() {
    let f = corpus("belnap_sample.mv");
    let yes = mvred(&["check", &f, "--formula", "[t]p(a)"]);
    assert_eq!((yes.status.code(), stdout(&yes).trim()), (Some(0), "true"));
    let no = mvred(&["check", &f, "--formula", "[f]p(a)", "--world", "top"]);
    assert_eq!((no.status.code(), stdout(&no).trim()), (Some(0), "false"));
}

#[test]
fn flatten_listing() {
    let o = mvred(&["transform", &corpus("belnap_sample.mv"), "--mode", "flatten"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("s_F(a, bot) <-A (p_F(a, t) andA ~A q_F(a, bot))."));
}

#[test]
fn verify_passes_on_a_sample() {
    let o = mvred(&["verify", &corpus("belnap_sample.mv"), "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdicts = v.as_array().unwrap();
    assert!(!verdicts.is_empty());
    assert!(verdicts.iter().all(|x| x["pass"] == true), "{v:#}");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(mvred(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mvred(&["model", "/no/such/file.mv"]).status.code(), Some(2));
    let o = mvred(&["check", &corpus("belnap_sample.mv"), "--formula", "[t]("]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn budget_from_environment_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_mvred"))
        .args(["verify", &corpus("paraconsistency.mv"), "--suite", "suszko"])
        .env("MVRED_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn lattice_listing_reports_axioms() {
    let o = mvred(&["--lattice", "fuzzy:5", "lattice"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all lattice axioms hold"));
}

#[test]
fn failed_verdict_exits_1_with_witness() {
    let o = mvred(&["verify", &corpus("belnap_sample.mv"), "--suite", "matrix", "--designated-worlds-only"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["pass"], false);
    assert!(v[0]["witness"]["formula"].is_string());
}
