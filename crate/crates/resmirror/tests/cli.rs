use std::process::{Command, Output};

fn resmirror(cache: Option<&std::path::Path>, args: &[&str]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_resmirror"));
    c.args(args).env_remove("RESMIRROR_CACHE");
    if let Some(p) = cache {
        c.env("RESMIRROR_CACHE", p);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = resmirror(None, &["two-point", "--geometry", "cpn", "--N", "5", "--k", "5", "--d", "1", "--a", "0", "--b", "2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "3850\n"));
    let o = resmirror(None, &["two-point", "--geometry", "f3", "--d", "0,1", "--a", "w", "--b", "w2"]);
    assert_eq!(stdout(&o), "3\n");
    let o = resmirror(None, &["j", "--dmax", "2"]);
    assert_eq!(stdout(&o), "j_1=744\tw_1=744\nj_2=196884\tw_2=473652\n");
}

#[test]
fn checks_exit_zero() {
    assert_eq!(resmirror(None, &["check", "theorem1", "--N", "5", "--k", "5", "--d", "2"]).status.code(), Some(0));
    assert_eq!(resmirror(None, &["check", "conjecture2"]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(resmirror(None, &["two-point", "--geometry", "nope", "--d", "1"]).status.code(), Some(2));
    assert_eq!(resmirror(None, &["two-point", "--geometry", "kf0", "--d", "1,0", "--a", "w2"]).status.code(), Some(2));
    assert_eq!(resmirror(None, &["vsc", "--N", "5"]).status.code(), Some(2));
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cache.jsonl");
    let args = ["gw", "--geometry", "wp1", "--a", "w", "--b", "w", "--trunc", "2", "--format", "json"];
    let cold = resmirror(Some(&p), &args);
    let warm = resmirror(Some(&p), &args);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.lines().count() > 0 && text.contains("\"provenance\""));
}

#[test]
fn conflicting_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cache.jsonl");
    let args = ["two-point", "--geometry", "cpn", "--N", "5", "--k", "5", "--d", "1", "--a", "0", "--b", "2"];
    resmirror(Some(&p), &args);
    let line = std::fs::read_to_string(&p).unwrap();
    std::fs::write(&p, format!("{line}{}", line.replace("3850", "3851"))).unwrap();
    let o = resmirror(Some(&p), &args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cache corruption"));
}

#[test]
fn config_supplies_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"truncation": {"cpn": 1}}"#).unwrap();
    let o = resmirror(None, &["mirror-map", "--geometry", "cpn", "--N", "5", "--k", "5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&o), "t = x + 770*q\n");
}
