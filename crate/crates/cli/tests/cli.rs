use std::fs;
use std::process::Command;

fn rendezvous() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rendezvous"))
}

#[test]
fn run_reports_meeting_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = rendezvous()
        .args([
            "run",
            "--model",
            "unoriented-regular",
            "--d",
            "3",
            "--labeling",
            "symmetric",
        ])
        .args([
            "--seed", "7", "--D", "2", "--l1", "1", "--l2", "2", "--delta", "5", "--algo", "urt",
        ])
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("met: true"), "{stdout}");
    let text = fs::read_to_string(&trace).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for field in ["round", "agent", "node", "action", "stage", "bit", "proc"] {
        assert!(first.get(field).is_some(), "missing {field}");
    }
    assert_eq!(first["round"], 0);
}

#[test]
fn run_oriented_algorithms() {
    for (algo, extra) in [
        ("kbl", ["--lstar", "8"]),
        ("kbd", ["--dstar", "4"]),
        ("nek", ["--label-space", "8"]),
    ] {
        let out = rendezvous()
            .args([
                "run",
                "--model",
                "oriented",
                "--degree-gen",
                "random(1,3)",
                "--seed",
                "2",
            ])
            .args([
                "--k1", "1", "--k2", "2", "--h", "3", "--l1", "3", "--l2", "6", "--algo", algo,
            ])
            .args(extra)
            .output()
            .unwrap();
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(out.status.success(), "{algo}: {stdout}");
        assert!(stdout.contains("(pass)"));
    }
}

#[test]
fn run_rejects_bad_input() {
    let out = rendezvous()
        .args([
            "run",
            "--model",
            "oriented",
            "--degree-gen",
            "regular(2)",
            "--k1",
            "1",
            "--k2",
            "1",
        ])
        .args(["--h", "0", "--l1", "2", "--l2", "2", "--algo", "nek"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = rendezvous()
        .args([
            "run",
            "--model",
            "oriented",
            "--degree-gen",
            "regular(2)",
            "--k1",
            "1",
            "--k2",
            "1",
        ])
        .args([
            "--h", "0", "--l1", "1", "--l2", "2", "--delta", "3", "--algo", "nek",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.toml");
    fs::write(
        &config,
        "algorithm = \"urt\"\ndegrees = [2, 3]\ndistances = [1, 2]\nlabelings = [\"seeded\", \"symmetric\"]\nlabels = [1, 2, 3]\ndelays = [0, \"3a*+1\"]\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let csv = dir.path().join(name);
        let status = rendezvous()
            .arg("sweep")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&csv)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(fs::read_to_string(csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let header = outputs[0].lines().next().unwrap();
    assert!(header.starts_with(
        "scenario_id,algo,d,D,l1,l2,delta,seed,met,meeting_round,deadline,pass,moves_a1,moves_a2"
    ));
    assert_eq!(outputs[0].lines().count(), 1 + 2 * 2 * 2 * 6 * 2);
}

#[test]
fn verify_exit_status_follows_checks() {
    let tree = rendezvous()
        .args(["verify", "--suite", "tree"])
        .output()
        .unwrap();
    assert!(tree.status.success());
    assert!(String::from_utf8(tree.stdout)
        .unwrap()
        .starts_with("[PASS]"));
    let bogus = rendezvous()
        .args(["verify", "--suite", "bogus"])
        .output()
        .unwrap();
    assert!(!bogus.status.success());
    assert!(String::from_utf8(bogus.stderr).unwrap().contains("bogus"));
}
