//! End-to-end runs of the `rsl` binary: exit-code contract, report shapes,
//! and the determinism guarantee.

use std::path::Path;
use std::process::{Command, Output};

fn rsl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn expect_ball_instance_matches_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let instance = write(
        tmp.path(),
        "balls.json",
        r#"{"schema":"rsl/1","weights":[0.5,0.5],"values":[
            {"type":"ball","center":[0.0,0.0],"radius":1.0},
            {"type":"ball","center":[2.0,0.0],"radius":3.0}]}"#,
    );
    let out = tmp.path().join("report.json");
    let res = rsl(
        &["expect", "--instance", &instance, "--out", out.to_str().unwrap()],
        tmp.path(),
    );
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], "rsl/1");
    assert!(report["result"]["hausdorff_gap"].as_f64().unwrap() <= 1e-12);
    // Closed form: ½B̄₁(0) ⊕ ½B̄₃((2,0)) = B̄₂((1,0)); the reduced body holds
    // a single folded ball of radius 2 centered at (1,0).
    let balls = report["result"]["convexified"]["balls"].as_array().unwrap();
    assert_eq!(balls.len(), 1);
    assert!((balls[0]["radius"].as_f64().unwrap() - 2.0).abs() <= 1e-12);
    assert!((balls[0]["center"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);

    // Support CSV written alongside, header plus one row per direction.
    let csv = std::fs::read_to_string(tmp.path().join("report.support.csv")).unwrap();
    assert!(csv.starts_with("direction_index,support\n"));
    assert!(csv.lines().count() > 1);
}

#[test]
fn expect_singleton_instance_degenerates() {
    let tmp = tempfile::tempdir().unwrap();
    let instance = write(
        tmp.path(),
        "point.json",
        r#"{"schema":"rsl/1","weights":[1.0],"values":[
            {"type":"polytope","vertices":[[3.0,4.0]]}]}"#,
    );
    let res = rsl(&["expect", "--instance", &instance], tmp.path());
    assert!(res.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(report["result"]["hausdorff_gap"].as_f64().unwrap(), 0.0);
    let verts = report["result"]["convexified"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 1);
}

#[test]
fn malformed_instance_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let instance = write(tmp.path(), "bad.json", "{not json");
    let res = rsl(&["expect", "--instance", &instance], tmp.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("malformed"));
}

#[test]
fn unknown_suite_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let res = rsl(&["verify", "nonsense"], tmp.path());
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn guard_exceeded_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cloud: Vec<String> = (0..10).map(|k| format!("[{k}.0]")).collect();
    let value = format!(r#"{{"type":"cloud","points":[{}]}}"#, cloud.join(","));
    let instance = write(
        tmp.path(),
        "big.json",
        &format!(
            r#"{{"schema":"rsl/1","weights":[0.25,0.25,0.25,0.25],"values":[{v},{v},{v},{v}]}}"#,
            v = value
        ),
    );
    let res = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(["expect", "--instance", &instance])
        .env("RSL_GUARD_MAX", "100")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn verify_suites_all_pass() {
    let tmp = tempfile::tempdir().unwrap();
    for suite in ["hulls", "barycenter", "kernel", "extreme", "aumann"] {
        let res = rsl(&["verify", suite, "--seed", "7", "--trials", "10"], tmp.path());
        assert!(
            res.status.success(),
            "suite {suite}: {}",
            String::from_utf8_lossy(&res.stderr)
        );
        let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
        assert_eq!(report["all_pass"], true, "suite {suite}");
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["pass"], true, "suite {suite}: {}", check["identity"]);
        }
    }
}

#[test]
fn convexification_gap_column_is_half_over_n() {
    let tmp = tempfile::tempdir().unwrap();
    let res = rsl(&["experiment", "convexification"], tmp.path());
    assert!(res.status.success());
    let csv = String::from_utf8(res.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,gap,runtime_ms"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: f64 = cols[0].parse().unwrap();
        let gap: f64 = cols[1].parse().unwrap();
        assert!((gap - 0.5 / n).abs() <= 1e-12, "n={n}: gap {gap}");
    }
}

#[test]
fn staircase_gap_column_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let res = rsl(&["experiment", "staircase"], tmp.path());
    assert!(res.status.success());
    let csv = String::from_utf8(res.stdout).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let gap: f64 = cols[1].parse().unwrap();
        assert_eq!(gap, 0.0, "line {line}");
    }
}

#[test]
fn shrink_gap_is_monotone() {
    let tmp = tempfile::tempdir().unwrap();
    let res = rsl(&["experiment", "shrink-gap"], tmp.path());
    assert!(res.status.success());
    let csv = String::from_utf8(res.stdout).unwrap();
    let gaps: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "gaps {gaps:?}");
    assert!(*gaps.last().unwrap() < gaps[0]);
}

#[test]
fn reports_are_deterministic() {
    // JSON reports carry no timing, so identical configs must produce
    // byte-identical bytes; experiment CSVs are identical once the
    // runtime_ms column is stripped.
    let tmp = tempfile::tempdir().unwrap();
    let args = ["verify", "aumann", "--seed", "42", "--trials", "10"];
    let a = rsl(&args, tmp.path());
    let b = rsl(&args, tmp.path());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let strip = |out: &Output| -> Vec<String> {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap())
            .collect()
    };
    let a = rsl(&["experiment", "shrink-gap"], tmp.path());
    let b = rsl(&["experiment", "shrink-gap"], tmp.path());
    assert_eq!(strip(&a), strip(&b));
}
