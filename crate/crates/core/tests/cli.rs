use std::path::Path;
use std::process::{Command, Output};

fn hcp(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcp"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .expect("spawn hcp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn hpoly_then_served_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("hpoly.cache");
    let first = hcp(&cache, &["hpoly", "-D", "-4"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), "x - 1728\n");
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), "v1|-4|1|-1728,1\n");

    let second = hcp(&cache, &["hpoly", "-D", "-4"]);
    assert_eq!(stdout(&second), stdout(&first));
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
}

#[test]
fn hpoly_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let out = hcp(&dir.path().join("c"), &["hpoly", "--disc", "-15"]);
    assert_eq!(stdout(&out), "x^2 + 191025*x - 121287375\n");
}

#[test]
fn roots_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");

    let ok = hcp(&cache, &["roots", "-D", "-15", "-p", "29"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("roots = [2, 25]"), "{text}");
    assert!(text.contains("predicted_count = 2") && text.contains("agreement = true"), "{text}");

    let empty = hcp(&cache, &["--format", "json", "roots", "-D", "-20", "-p", "37"]);
    assert_eq!(empty.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&empty.stdout).unwrap();
    assert_eq!(v["record"]["observed_count"], 0);
    assert_eq!(v["record"]["predicted_count"], 0);
    assert_eq!(v["record"]["agreement"], true);

    let split = hcp(&cache, &["roots", "-D", "-15", "-p", "17"]);
    assert_eq!(split.status.code(), Some(2));
    let text = stdout(&split);
    assert!(text.contains("inapplicable") && text.contains("splits"), "{text}");
    assert!(text.contains("observed_count"), "{text}");
}

#[test]
fn validation_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    assert_eq!(hcp(&cache, &["classgroup", "-D", "-14"]).status.code(), Some(2));
    assert_eq!(hcp(&cache, &["predict", "-D", "-15", "-p", "21"]).status.code(), Some(2));
    assert_eq!(hcp(&cache, &["sweep", "--max-disc", "0", "--max-prime", "50"]).status.code(), Some(1));
    assert_eq!(hcp(&cache, &["bogus"]).status.code(), Some(1));
    assert_eq!(hcp(&cache, &["--format", "xml", "classgroup", "-D", "-4"]).status.code(), Some(1));
    assert_eq!(hcp(&cache, &["--help"]).status.code(), Some(0));
}

#[test]
fn classgroup_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = hcp(&dir.path().join("c"), &["classgroup", "-D", "-15"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("h = 2"), "{text}");
    assert!(text.contains("|Pic[2]| = 2^(mu-1) = 2"), "{text}");
}

#[test]
fn sweep_json_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = hcp(
            &cache,
            &["--format", "json", "sweep", "--max-disc", "40", "--max-prime", "300", "--out", out.to_str().unwrap()],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["summary"]["disagreements"], 0);
    let keys: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["params", "records", "summary"]);
}

#[test]
fn sweep_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = hcp(&dir.path().join("c"), &["--format", "csv", "sweep", "--max-disc", "20", "--max-prime", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("D,p,h,mu,"));
    assert!(lines.all(|l| l.ends_with(",true")));
}
