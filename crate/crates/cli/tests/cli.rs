use std::process::{Command, Output};

fn ldl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldl"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_disk() {
    let o = ldl(&["count", "--domain", "disk:1", "--t", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "81\n");
    let o = ldl(&["count", "--domain", "disk:1", "--t", "5", "--out", "csv"]);
    assert!(stdout(&o).starts_with("domain,t,count,area,lattice_rest\ndisk:1,5,81,"));
}

#[test]
fn distance_shell() {
    let o = ldl(&["distance", "--dim", "3", "--R", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["card_e"], 32);
    assert_eq!(v["distinct_values"], 4);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(ldl(&[]).status.code(), Some(64));
    assert_eq!(ldl(&["count", "--bogus"]).status.code(), Some(64));
    assert_eq!(ldl(&["count", "--t", "3"]).status.code(), Some(64));
    assert_eq!(
        ldl(&["count", "--domain", "blob:1", "--t", "3"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        ldl(&["farey", "--R", "1e4", "--eps", "0.5", "--out", "csv"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(ldl(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_input_exits_1() {
    let o = ldl(&["count", "--domain", "disk:1", "--t=-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn resource_guard_exits_3() {
    let o = ldl(&["distance", "--dim", "8", "--R", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\ndomain = disk:1\nt = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(stdout(&ldl(&["--config", c, "count"])), "81\n");
    assert_eq!(stdout(&ldl(&["--config", c, "count", "--t", "1"])), "5\n");
    assert_eq!(
        stdout(&ldl(&[
            "--config",
            c,
            "count",
            "--domain",
            "ellipse:2,1",
            "--t",
            "1"
        ])),
        "7\n"
    );
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = |p: &str| {
        vec![
            "--seed".to_string(),
            "3".into(),
            "--output".into(),
            p.to_string(),
            "rotation-study".into(),
            "--domain".into(),
            "ellipse:2,1".into(),
            "--samples".into(),
            "4".into(),
            "--R".into(),
            "32,64".into(),
        ]
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (p, threads) in [(&a, "1"), (&b, "4")] {
        let o = Command::new(env!("CARGO_BIN_EXE_ldl"))
            .args(args(p.to_str().unwrap()))
            .env("LDL_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("sample,theta,R,G,normalized\n"));
    assert_eq!(text.lines().count(), 9);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn study_csv_columns() {
    let o = ldl(&[
        "study",
        "--domains",
        "disk:1",
        "--R",
        "16,32",
        "--h-rule",
        "const:2",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("domain,R,h,G,G_over_sqrtR,G_over_sqrtRlogR,slope")
    );
    assert!(lines.all(|l| l.starts_with("disk:1,") && l.split(',').nth(2) == Some("2")));
}

#[test]
fn farey_checks_pass() {
    let o = ldl(&["farey", "--R", "1e4", "--eps", "0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pyth_ok"], true);
    assert_eq!(v["slim"]["ok"], true);
    assert!(v["kbound"]["ratio"].as_f64().unwrap() > 0.0);
}
