use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn logibot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logibot")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn run_writes_artifacts_that_replay_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = logibot(&["run", "--rounds", "2", "--matches", "2", "--seed", "5", "--t", "scripted", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("native (5) vs scripted (5) on warehouse"));
    for f in ["match-0.trace", "match-1.trace", "match-0.actions", "counts.csv", "report.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(2).unwrap().starts_with("1,6,"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["t"], "scripted");
    assert_eq!(report["matches"][1]["rounds"].as_array().unwrap().len(), 2);

    let trace = dir.path().join("match-1.trace");
    let o = logibot(&["replay", trace.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("clean:"));

    let text = std::fs::read_to_string(&trace).unwrap();
    let edited = dir.path().join("edited.trace");
    std::fs::write(&edited, text.replacen(";spawn;", ";spawned;", 1)).unwrap();
    let o = logibot(&["replay", edited.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("diverged at event 2"), "{}", stdout(&o));
}

#[test]
fn config_files_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("match.toml");
    std::fs::write(&cfg, "map = \"airplane\"\nrounds = 1\nmatches = 1\nct = \"scripted\"\n[game]\nstart_money = 800\n")
        .unwrap();
    let o = logibot(&["run", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("scripted (5) vs native (5) on airplane, 1 rounds"), "{s}");
    assert!(s.contains("\n0           3 "), "{s}");

    std::fs::write(&cfg, "rounds = \"many\"\n").unwrap();
    assert_eq!(code(&logibot(&["run", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn perf_prints_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = logibot(&["run", "--rounds", "1", "--matches", "1", "--ct", "scripted", "--perf", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("reasoning share of wall time"), "{s}");
    assert!(s.contains("all-native run"), "{s}");
    let perf: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("perf.json")).unwrap()).unwrap();
    assert!(perf["reasoning_share"].as_f64().unwrap() > 0.0);
}

#[test]
fn experiment_formats() {
    let text = logibot(&["experiment", "--matches", "1", "--rounds", "2"]);
    assert_eq!(code(&text), 0);
    let s = stdout(&text);
    assert!(s.starts_with("Table 1: total team victories"), "{s}");
    assert!(s.contains("Table 2: goal-fulfilled team victories"));
    assert_eq!(s, stdout(&logibot(&["experiment", "--matches", "1", "--rounds", "2"])));

    let csv = stdout(&logibot(&["experiment", "--matches", "1", "--rounds", "2", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 5);
    let json = stdout(&logibot(&["experiment", "--matches", "1", "--rounds", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn validate_reports_and_sets_the_exit_code() {
    let o = logibot(&["validate", "warehouse_tactics"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("objective_waypoint/2"));
    let o = logibot(&["validate", "warehouse_tactics", "--on", "baseline,cs_rules"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok\n");

    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/assets/packages/baseline/manifest.toml");
    assert_eq!(code(&logibot(&["validate", manifest.to_str().unwrap()])), 0);
    assert_eq!(code(&logibot(&["validate", "/no/such/manifest.toml"])), 1);
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(code(&logibot(&["run", "--ct", "robot"])), 1);
    assert_eq!(code(&logibot(&["run", "--map", "atlantis"])), 1);
    assert_eq!(code(&logibot(&["replay", "/no/such/trace"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.trace");
    std::fs::write(&bad, "# logibot-trace 9\n").unwrap();
    let o = logibot(&["replay", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("version 9"));
    // unwritable output directory
    let file = dir.path().join("file");
    std::fs::write(&file, "").unwrap();
    let o = logibot(&["run", "--rounds", "1", "--matches", "1", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn repl_pages_answers() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_logibot"))
        .args(["repl", "--packages", "baseline"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"team(b7, S)\nbot_alive(X)\n;\n;\n.\n:quit\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("S = t."), "{s}");
    assert!(s.contains("X = b1 X = b2 X = b3 ."), "{s}");
}
