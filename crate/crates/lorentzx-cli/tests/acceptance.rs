//! Integration tests against the compiled binary: exit codes, report
//! shapes, and byte-for-byte determinism of the full command corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use lorentzx::cone::ConeDims;
use lorentzx::linalg::Mat;
use lorentzx::posop::Operator;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lorentzx"));
    c.env("NO_COLOR", "1");
    c
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, content: &str| {
            std::fs::write(dir.path().join(name), content).unwrap();
        };
        write("identity.csv", "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
        write("block.csv", "1,0,0\n0,1,0\n0,0,2\n");
        write("band.csv", "5,0,0\n0,5,0\n0,0,5.0000000005\n");
        // p = 1, q = 2: zero first block, skew second block.
        write("rotgen.csv", "0,0,0\n0,0,1\n0,-1,0\n");
        write("udil.csv", "1,0,0\n0,1,0\n0,0,2\n");
        write(
            "points.csv",
            "1,1,0.5,0.5\n2,0,1,0\n0.1,0.1,3,0\n1,-0.5,0.1,0\n0,0,0,0\n",
        );
        write(
            "points.json",
            r#"[{"p":2,"q":2,"x":[1.0,1.0],"u":[0.5,0.5]},{"p":2,"q":2,"x":[0.1,0.1],"u":[3.0,0.0]}]"#,
        );
        write(
            "matrix.json",
            r#"{"p":2,"q":2,"matrix":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
        );
        write("bad.csv", "1,0\nx,1\n");
        write("empty.csv", "");
        Fixtures { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

/// Everything observable from one invocation: exit code, both streams, and
/// the bytes of any files it wrote under its scratch directory.
#[derive(PartialEq, Debug)]
struct Observed {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    files: BTreeMap<String, Vec<u8>>,
}

fn collect_files(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        if !dir.exists() {
            continue;
        }
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_str().unwrap().to_string();
                files.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn observe(args: &[String], out_dir: &Path) -> Observed {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| a.replace("{out}", out_dir.to_str().unwrap()))
        .collect();
    let out = bin().args(&resolved).output().unwrap();
    Observed {
        code: code(&out),
        stdout: out.stdout,
        stderr: out.stderr,
        files: collect_files(out_dir),
    }
}

/// Criterion 9: rerunning every command with the same seeds and
/// `--no-timestamp` reproduces each report byte for byte.
#[test]
fn deterministic_reports_across_reruns() {
    let start = Instant::now();
    let fx = Fixtures::new();
    let s = |v: &[&str]| -> Vec<String> { v.iter().map(|a| a.to_string()).collect() };
    let corpus: Vec<(Vec<String>, i32)> = vec![
        (
            s(&["membership", &fx.arg("points.csv"), "--p", "2", "--q", "2", "--no-timestamp"]),
            0,
        ),
        (s(&["membership", &fx.arg("points.json"), "--no-timestamp"]), 0),
        (
            s(&[
                "check-positive",
                &fx.arg("identity.csv"),
                "--p",
                "2",
                "--q",
                "2",
                "--seed",
                "7",
                "--samples",
                "3000",
                "--no-timestamp",
            ]),
            0,
        ),
        (
            s(&["check-positive", &fx.arg("block.csv"), "--p", "2", "--q", "1", "--no-timestamp"]),
            1,
        ),
        (
            s(&["check-positive", &fx.arg("band.csv"), "--p", "2", "--q", "1", "--no-timestamp"]),
            2,
        ),
        (s(&["check-positive", &fx.arg("matrix.json"), "--no-timestamp"]), 0),
        (
            s(&[
                "lyapunov",
                &fx.arg("rotgen.csv"),
                "--p",
                "1",
                "--q",
                "2",
                "--samples",
                "1500",
                "--no-timestamp",
            ]),
            0,
        ),
        (
            s(&[
                "expmap",
                &fx.arg("udil.csv"),
                "--p",
                "2",
                "--q",
                "1",
                "--t-values",
                "0.25,1.5",
                "--no-timestamp",
            ]),
            1,
        ),
        (s(&["gen", "--p", "3", "--q", "2", "--seed", "11"]), 0),
        (
            s(&[
                "gen", "--p", "3", "--q", "2", "--kind", "operator", "--count", "3", "--seed",
                "11", "--output", "{out}/ops",
            ]),
            0,
        ),
        (
            s(&[
                "gen", "--p", "2", "--q", "3", "--kind", "points-m", "--count", "50", "--seed",
                "5", "--mode", "mix",
            ]),
            0,
        ),
        (
            s(&[
                "gen", "--p", "2", "--q", "3", "--kind", "points-l", "--count", "30", "--seed",
                "5", "--mode", "boundary",
            ]),
            0,
        ),
        (
            s(&["gap", "--p", "2", "--q", "1", "--samples", "40", "--perturbation", "0.03",
                "--seed", "3"]),
            0,
        ),
        (
            s(&["gap", "--p", "3", "--q", "2", "--samples", "30", "--perturbation", "0",
                "--seed", "4"]),
            0,
        ),
        (
            s(&[
                "membership",
                &fx.arg("points.csv"),
                "--p",
                "2",
                "--q",
                "2",
                "--no-timestamp",
                "--output",
                "{out}/mem.json",
            ]),
            0,
        ),
    ];

    let mut compared = 0;
    for (i, (args, expected_code)) in corpus.iter().enumerate() {
        let out_a = tempfile::tempdir().unwrap();
        let out_b = tempfile::tempdir().unwrap();
        let first = observe(args, out_a.path());
        let second = observe(args, out_b.path());
        assert_eq!(
            first.code, *expected_code,
            "invocation {i} {:?}: unexpected exit code, stderr: {}",
            args,
            String::from_utf8_lossy(&first.stderr)
        );
        assert_eq!(first, second, "invocation {i} {:?} is not reproducible", args);
        compared += 1;
    }
    println!(
        "criterion 9 (deterministic reports): PASS ({:.2}s) {compared} invocations byte-identical",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn positive_matrix_exits_zero_with_certificate() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["check-positive", &fx.arg("identity.csv"), "--p", "2", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "Positive");
    assert_eq!(v["certificate"]["type"], "lambda");
    let lambda = v["certificate"]["lambda"].as_f64().unwrap();
    assert!((lambda - 1.0).abs() < 1e-3, "lambda {lambda}");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn refuted_matrix_reports_reverifiable_witness() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["check-positive", &fx.arg("block.csv"), "--p", "2", "--q", "1", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["status"], "NotPositive");
    let cert = &v["certificate"];
    assert_eq!(cert["type"], "extreme_ray");
    assert_eq!(cert["i"], 1);
    assert_eq!(cert["u"].as_array().unwrap().len(), 1);
    let u: Vec<f64> = cert["u"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let slack = cert["slack"].as_f64().unwrap();
    assert!(slack < -1e-9);

    // Re-derive the slack through the library from the same matrix.
    let d = ConeDims::new(2, 1).unwrap();
    let mat = Mat::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 2.0],
    ])
    .unwrap();
    let op = Operator::new(d, mat).unwrap();
    let i0 = cert["i"].as_u64().unwrap() as usize - 1;
    let mapped = op.mapped_generator(i0, &u).unwrap();
    assert!((mapped.m_slack() - slack).abs() < 1e-12);
}

#[test]
fn tolerance_band_exits_two() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["check-positive", &fx.arg("band.csv"), "--p", "2", "--q", "1", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["status"], "Unknown");
}

#[test]
fn dims_mismatch_is_an_input_error() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["check-positive", &fx.arg("matrix.json"), "--p", "3", "--q", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn malformed_csv_names_the_line() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["check-positive", &fx.arg("bad.csv"), "--p", "1", "--q", "1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn csv_without_dims_is_rejected() {
    let fx = Fixtures::new();
    let out = bin().args(["check-positive", &fx.arg("identity.csv")]).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_three_help_exits_zero() {
    let out = bin().args(["check-positive", "--frobnicate"]).output().unwrap();
    assert_eq!(code(&out), 3);
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(code(&help), 0);
    assert!(!help.stdout.is_empty());
    let version = bin().arg("--version").output().unwrap();
    assert_eq!(code(&version), 0);
}

#[test]
fn generated_operators_round_trip_positive() {
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops");
    let gen = bin()
        .args([
            "gen", "--p", "2", "--q", "2", "--kind", "operator", "--count", "3", "--seed", "9",
            "--output", ops.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));
    for k in 0..3 {
        let file = ops.join(format!("operator_{k:03}.csv"));
        assert!(file.exists(), "missing {}", file.display());
        let check = bin()
            .args([
                "check-positive", file.to_str().unwrap(), "--p", "2", "--q", "2",
                "--no-timestamp",
            ])
            .output()
            .unwrap();
        assert_eq!(code(&check), 0, "operator {k} not accepted");
    }
}

#[test]
fn generated_points_are_members() {
    let dir = tempfile::tempdir().unwrap();
    let m_file = dir.path().join("m.csv");
    let l_file = dir.path().join("l.csv");
    let gen_m = bin()
        .args([
            "gen", "--p", "3", "--q", "2", "--kind", "points-m", "--count", "40", "--seed", "2",
            "--output", m_file.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&gen_m), 0);
    let gen_l = bin()
        .args([
            "gen", "--p", "3", "--q", "2", "--kind", "points-l", "--count", "40", "--seed", "2",
            "--mode", "boundary", "--output", l_file.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&gen_l), 0);

    let mem_m = bin()
        .args(["membership", m_file.to_str().unwrap(), "--p", "3", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&mem_m), 0);
    let v = json(&mem_m);
    assert_eq!(v["count"], 40);
    assert!(v["points"].as_array().unwrap().iter().all(|r| r["in_m"] == true));

    let mem_l = bin()
        .args(["membership", l_file.to_str().unwrap(), "--p", "3", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    let v = json(&mem_l);
    // L is contained in M, so both flags must hold for every sampled point.
    assert!(v["points"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["in_l"] == true && r["in_m"] == true));
}

#[test]
fn empty_points_file_reports_zero_count() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["membership", &fx.arg("empty.csv"), "--p", "2", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["count"], 0);
    assert_eq!(v["points"].as_array().unwrap().len(), 0);
}

#[test]
fn membership_reports_slacks_and_config() {
    let fx = Fixtures::new();
    let out = bin()
        .args(["membership", &fx.arg("points.csv"), "--p", "2", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["config"]["p"], 2);
    assert_eq!(v["config"]["q"], 2);
    assert_eq!(v["config"]["tol_abs"], 1e-9);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    // (1,1,0.5,0.5): in both cones, quadratic form 4 - 0.5.
    assert_eq!(pts[0]["in_l"], true);
    assert_eq!(pts[0]["in_m"], true);
    assert!((pts[0]["quadratic_form"].as_f64().unwrap() - 3.5).abs() < 1e-12);
    // (0.1,0.1,3,0): far outside both.
    assert_eq!(pts[2]["in_m"], false);
    assert!(pts[2]["m_slack"].as_f64().unwrap() < -2.0);
    // Origin is a member of both.
    assert_eq!(pts[4]["in_l"], true);
    assert_eq!(pts[4]["in_m"], true);
}

#[test]
fn expmap_distinguishes_rotation_from_dilation() {
    let fx = Fixtures::new();
    let rot = bin()
        .args([
            "expmap", &fx.arg("rotgen.csv"), "--p", "1", "--q", "2", "--t-values", "0.5,2.0",
            "--no-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&rot), 0);
    let v = json(&rot);
    assert!(v["steps"].as_array().unwrap().iter().all(|st| st["automorphism"] == true));

    let dil = bin()
        .args([
            "expmap", &fx.arg("udil.csv"), "--p", "2", "--q", "1", "--t-values", "0.5",
            "--no-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&dil), 1);
    let v = json(&dil);
    let step = &v["steps"].as_array().unwrap()[0];
    // Dilating u faster than x preserves the cone only backwards in time.
    assert_eq!(step["forward"], false);
    assert_eq!(step["backward"], true);
}

#[test]
fn lyapunov_flags_rotation_but_not_dilation() {
    let fx = Fixtures::new();
    let rot = bin()
        .args(["lyapunov", &fx.arg("rotgen.csv"), "--p", "1", "--q", "2", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&rot), 0);
    let v = json(&rot);
    assert_eq!(v["lyapunov_like"], true);
    assert!(v["max_ratio"].as_f64().unwrap() <= v["threshold"].as_f64().unwrap());

    let dil = bin()
        .args(["lyapunov", &fx.arg("udil.csv"), "--p", "2", "--q", "1", "--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(code(&dil), 1);
    assert_eq!(json(&dil)["lyapunov_like"], false);
}

#[test]
fn gap_summary_is_coherent_csv() {
    let out = bin()
        .args(["gap", "--p", "2", "--q", "1", "--samples", "60", "--perturbation", "0.02",
               "--seed", "6"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "dims_p,dims_q,n_trials,oracle_positive,thm3_certified,refuted_necessary,refuted_oracle_only"
    );
    let row: Vec<u64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&row[..3], &[2, 1, 60]);
    let (positive, certified) = (row[3], row[4]);
    assert!(certified <= positive, "certified {certified} > positive {positive}");
    assert!(positive <= 60);
}
