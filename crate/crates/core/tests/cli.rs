use std::path::Path;
use std::process::{Command, Output};

use linklab::harness::{read_csv, read_json, CSV_HEADER};

fn linklab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_linklab"));
    cmd.args(args).env_remove("LINKLAB_THREADS");
    if let Some(t) = threads {
        cmd.env("LINKLAB_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL_SWEEP: &str = r#"{
    "preset": "fig3",
    "sweep": {"variable": "gamma_avg_db", "start_db": 20, "stop_db": 30, "step_db": 5},
    "methods": ["closed", "mc"],
    "monte_carlo": {"trials": 20000, "seed": 3, "ber_mode": "equivalent_snr"}
}"#;

#[test]
fn preset_run_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.json", SMALL_SWEEP);
    let out = dir.path().join("out");
    let o = linklab(&["run", "--config", &config, "--out-dir", out.to_str().unwrap(), "--seed", "9"], Some("2"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("fig3.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 2 * 4 * 3);
    assert!(rows.iter().filter(|r| r.method == "mc").all(|r| r.seed == "9" && !r.ci_halfwidth.is_empty()));
    let record = read_json(std::fs::File::open(out.join("fig3.json")).unwrap()).unwrap();
    assert_eq!(record.seed, Some(9));
    assert_eq!(record.rows.len(), rows.len());
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.json", SMALL_SWEEP);
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = linklab(&["run", "--config", &config, "--out-dir", out.to_str().unwrap()], Some(threads));
        assert!(o.status.success());
        outputs.push(std::fs::read(out.join("fig3.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn methods_and_trials_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = linklab(&["run", "--preset", "fig5", "--methods", "mc", "--trials", "10000", "--out-dir", out], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let record = read_json(std::fs::File::open(dir.path().join("fig5.json")).unwrap()).unwrap();
    assert_eq!(record.config.monte_carlo.unwrap().trials, 10_000);
    assert_eq!(record.rows.len(), 2 * 61);
}

#[test]
fn inapplicable_methods_are_noted_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.json", &SMALL_SWEEP.replace(r#"["closed", "mc"]"#, r#"["closed", "quadrature"]"#));
    let o = linklab(&["run", "--config", &config, "--out-dir", dir.path().to_str().unwrap()], None);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("M=1/quadrature skipped"));
}

#[test]
fn config_errors_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let bad_field = write(dir.path(), "a.json", r#"{"preset": "fig2", "sweeep": {}}"#);
    let bad_sweep = write(
        dir.path(),
        "b.json",
        r#"{"preset": "fig2", "sweep": {"variable": "gamma_avg_db", "start_db": 10, "stop_db": 0, "step_db": 1}}"#,
    );
    let cases: [(&[&str], Option<&str>); 6] = [
        (&["run", "--config", &bad_field, "--out-dir", out], None),
        (&["run", "--config", &bad_sweep, "--out-dir", out], None),
        (&["run", "--config", "/nonexistent/config.json"], None),
        (&["run", "--preset", "fig8"], None),
        (&["run"], None),
        (&["run", "--preset", "fig2", "--methods", "closed", "--out-dir", out], Some("zero")),
    ];
    for (args, threads) in cases {
        let o = linklab(args, threads);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let stderr = String::from_utf8_lossy(&linklab(&["run", "--config", &bad_field], None).stderr).into_owned();
    assert!(stderr.contains("sweeep") && stderr.contains("line 1"), "{stderr}");
}

#[test]
fn unwritable_output_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = write(dir.path(), "file", "");
    let o = linklab(&["run", "--preset", "fig2", "--methods", "closed", "--out-dir", &format!("{blocker}/sub")], None);
    assert_eq!(o.status.code(), Some(3));
}
