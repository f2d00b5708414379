use std::process::{Command, Output};

fn twinpulse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twinpulse")).args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

#[test]
fn success_paths() {
    for args in [&["rates"][..], &["point"], &["point", "--format", "json"], &["oracle", "--set", "kappa=11000"]] {
        let o = twinpulse(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(code(&twinpulse(&["--nope", "point"])), 1);
    assert_eq!(code(&twinpulse(&["point", "--set", "unknown_key=1"])), 1);
    assert_eq!(code(&twinpulse(&["point", "--format", "xml"])), 1);
    assert_eq!(code(&twinpulse(&["point", "--config", "/nonexistent/params.cfg"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "kappa = 800\nkappa = 900\n").unwrap();
    let o = twinpulse(&["point", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn physics_failures_exit_two() {
    // window longer than the dark interval
    assert_eq!(code(&twinpulse(&["point", "--tm", "1e-3"])), 2);
    // Lamb-Dicke expansion broken
    assert_eq!(code(&twinpulse(&["point", "--set", "eta=0.9"])), 2);
    // second-pulse kernel without a transfer optimum
    assert_eq!(code(&twinpulse(&["point", "--set", "kappa=400000"])), 2);
}

#[test]
fn oracle_deviation_exits_three() {
    assert_eq!(code(&twinpulse(&["oracle", "--flip-drift-sign"])), 3);
}

#[test]
fn config_file_matches_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.cfg");
    std::fs::write(&path, "# reference point\nkappa = 6400\nkappa_h = 20\n").unwrap();
    let from_file = twinpulse(&["point", "--config", path.to_str().unwrap()]);
    let from_flags = twinpulse(&["point", "--set", "kappa=6400"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "--parameter", "T1", "--from", "5e-6", "--to", "60e-6", "--steps", "33"];
    let a = twinpulse(&args);
    let b = twinpulse(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 34);
    assert!(data[0].starts_with("t1_s,e_n,"));
}

#[test]
fn json_mirrors_csv_columns() {
    let csv = String::from_utf8(twinpulse(&["point"]).stdout).unwrap();
    let header: Vec<&str> = csv.lines().find(|l| !l.starts_with('#')).unwrap().split(',').collect();
    let json: serde_json::Value = serde_json::from_slice(&twinpulse(&["point", "--format", "json"]).stdout).unwrap();
    let row = json["rows"][0].as_object().unwrap();
    assert_eq!(row.len(), header.len());
    for h in header {
        assert!(row.contains_key(h), "missing {h}");
    }
}

#[test]
fn figure_writes_curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = twinpulse(&["figure", "--which", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.len(), 6, "{names:?}");
    assert!(names.iter().any(|n| n == "fig5_kappa_800hz_noiseless.csv"));
}
