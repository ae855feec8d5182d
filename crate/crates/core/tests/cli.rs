use std::process::Command;

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_compact-routing"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn generate_then_check_a_graph_file() {
    let dir = std::env::temp_dir().join(format!("cr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let p = path.to_str().unwrap();
    let (code, _) = cli(&["generate", "--n", "64", "--seed", "2", "--out", p]);
    assert_eq!(code, 0);
    let (code, out) = cli(&["check", "--graph", p]);
    assert!(code == 0 || code == 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 64);
}

#[test]
fn build_and_reload_scheme_file() {
    let dir = std::env::temp_dir().join(format!("cr-cli-s-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.txt");
    let p = path.to_str().unwrap();
    let (code, _) = cli(&[
        "build",
        "--n",
        "64",
        "--scheme",
        "sp_fixed_port",
        "--out",
        p,
    ]);
    assert_eq!(code, 0);
    let (code, out) = cli(&["verify", "--n", "64", "--scheme-file", p]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scheme"], "sp_fixed_port");
    assert_eq!(v["shortest_violations"], 0);
}

#[test]
fn route_prints_trace() {
    let (code, out) = cli(&[
        "route",
        "--n",
        "64",
        "--scheme",
        "stretch_logn",
        "--src",
        "3",
        "--dst",
        "50",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("node=3 ")));
    assert!(out.contains("\"delivered\": true"));
}

#[test]
fn report_is_stable_and_rejects_bad_models() {
    let args = [
        "report",
        "--n",
        "32",
        "--seed",
        "1",
        "2",
        "--scheme",
        "stretch15",
        "sp_relabel",
    ];
    let (code, a) = cli(&args);
    let (_, b) = cli(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 5);
    let (code, _) = cli(&[
        "report",
        "--n",
        "32",
        "--seed",
        "1",
        "--scheme",
        "sp_relabel:II-alpha",
    ]);
    assert_eq!(code, 2);
}
