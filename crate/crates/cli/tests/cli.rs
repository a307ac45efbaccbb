use std::process::{Command, Output};

fn qcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcanon")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn roots_a2() {
    let o = qcanon(&["--type", "A2", "--word", "1,2,1", "-q", "roots"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\ta1\tF1\n2\ta1+a2\tF2F1 - qF1F2\n3\ta2\tF2\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--type", "A2", "--word", "1,1,2", "roots"][..],
        &["--type", "X9", "roots"],
        &["--type", "A2", "--max-height", "2", "canonical", "--weight", "2,2"],
        &["--type", "A2", "verify", "--suite", "nonsense"],
        &["--type", "A2", "descent", "--lambda", "1"],
        &["--format", "yaml", "roots"],
    ] {
        let o = qcanon(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn canonical_json_is_deterministic() {
    let args = ["--type", "A3", "--format", "json", "-q", "canonical", "--weight", "1,1,1"];
    let a = qcanon(&args);
    let b = qcanon(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.to_string().contains("\"coords\""));
}

#[test]
fn seeded_verify_is_reproducible() {
    let args = ["--type", "A2", "--seed", "7", "-q", "verify", "--suite", "random-relations"];
    let a = qcanon(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, qcanon(&args).stdout);
}

#[test]
fn verify_braid_relations_d4() {
    let o = qcanon(&["--type", "D4", "--max-height", "4", "-q", "verify", "--suite", "braid-relations"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("braid-relations"));
}

#[test]
fn crystal_dot_a3() {
    let o = qcanon(&["--type", "A3", "-q", "crystal", "--depth", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    // 1 + 3 + 6 vertices; each vertex below depth 2 has 3 outgoing edges
    assert_eq!(s.matches("->").count(), 12);
}

#[test]
fn descent_csv_a2() {
    let o = qcanon(&["--type", "A2", "-q", "descent", "--lambda", "1,1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("weight,survivors,multiplicity"));
    assert!(s.lines().any(|l| l.ends_with(",2,2")), "{s}");
}

#[test]
fn config_file_and_out() {
    let dir = std::env::temp_dir().join(format!("qcanon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    let out = dir.join("roots.txt");
    std::fs::write(&cfg, "# settings\ntype = A2\nword = 2,1,2\nquiet = true\n").unwrap();
    let o = qcanon(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "roots"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("1\ta2\tF2\n"), "{text}");
    // flags beat the file
    let o = qcanon(&["--config", cfg.to_str().unwrap(), "--word", "1,2,1", "roots"]);
    assert!(stdout(&o).starts_with("1\ta1\tF1\n"));
    std::fs::remove_dir_all(&dir).ok();
}
