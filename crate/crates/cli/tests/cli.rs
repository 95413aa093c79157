use std::path::Path;
use std::process::{Command, Output};

use toepcov_cli::commands::estimate;
use toepcov_cli::config::ExperimentConfig;
use toepcov_cli::harness::{run_benchmark, WORKERS_ENV};
use toepcov_cli::io::{parse_samples, write_samples, Report};
use toepcov_cli::registry::OrderChoice;
use toepcov_core::gs::{gs_assemble, gs_from_autocov};
use toepcov_core::processes::{sample_raw, ProcessSpec};
use toepcov_core::HermitianToeplitz;

const SMALL: &str = r#"
runs = 6
seed = 11
dims = [8, 12]
sample_counts = [6]
nmse_icm = true

[[process]]
kind = "ar"
a = [0.6]
sigma2 = 1.0

[[process]]
kind = "ma"
b = [0.5]
sigma2 = 1.0

[[estimator]]
name = "pls"
[[estimator]]
name = "band"
[[estimator]]
name = "shrink-th"
[[estimator]]
name = "em"
"#;

fn toepcov(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toepcov"));
    cmd.args(args);
    if let Some(w) = workers {
        cmd.env(WORKERS_ENV, w);
    }
    cmd.output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn benchmark_outputs_are_deterministic() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_benchmark(&cfg).unwrap().write(a.path(), false).unwrap();
    run_benchmark(&cfg).unwrap().write(b.path(), false).unwrap();
    for f in ["summary.csv", "runs.csv", "hyperparams.csv"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f} differs");
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("small.toml");
    std::fs::write(&config, SMALL).unwrap();
    let outs: Vec<_> = ["1", "3"]
        .iter()
        .map(|w| {
            let out = dir.path().join(format!("out{w}"));
            let res = toepcov(
                &[
                    "benchmark",
                    "--config",
                    config.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap(),
                    "--svg",
                ],
                Some(w),
            );
            assert!(
                res.status.success(),
                "{}",
                String::from_utf8_lossy(&res.stderr)
            );
            out
        })
        .collect();
    assert_eq!(read(&outs[0], "runs.csv"), read(&outs[1], "runs.csv"));
    let has_svg = std::fs::read_dir(&outs[0])
        .unwrap()
        .any(|e| e.unwrap().path().extension().is_some_and(|x| x == "svg"));
    assert!(has_svg);
}

#[test]
fn single_run_scm_gives_one_row() {
    let cfg = ExperimentConfig::from_toml(
        r#"
runs = 1
dims = [5]
sample_counts = [3]
[[process]]
kind = "ar"
a = [0.3]
sigma2 = 1.0
[[estimator]]
name = "scm"
"#,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run_benchmark(&cfg).unwrap();
    out.write(dir.path(), false).unwrap();
    assert_eq!(out.records.len(), 1);
    let runs = read(dir.path(), "runs.csv");
    assert_eq!(runs.lines().count(), 2, "{runs}");
}

#[test]
fn failures_are_counted_not_averaged() {
    // The eigenvalue estimator refuses P > 64, so every eig cell fails.
    let cfg = ExperimentConfig::from_toml(
        r#"
runs = 3
dims = [65]
sample_counts = [4]
nmse_icm = true
[[process]]
kind = "ar"
a = [0.3]
sigma2 = 1.0
[[estimator]]
name = "eig"
order = 1
[[estimator]]
name = "band"
order = 1
"#,
    )
    .unwrap();
    let agg = run_benchmark(&cfg).unwrap().aggregate();
    assert_eq!((agg[0].ok, agg[0].failed), (0, 3));
    assert!(agg[0].nmse_c.is_none());
    assert_eq!((agg[1].ok, agg[1].failed), (3, 0));
    assert!(agg[1].nmse_c.is_some());
    // Banding is not positive definite by construction: no ICM column.
    assert!(agg[1].nmse_icm.is_none());
}

#[test]
fn white_noise_pls_selects_order_zero() {
    let xs = sample_raw(&ProcessSpec::white(1.0, 16).unwrap(), 256, 4).unwrap();
    let r = estimate(&xs, "pls", OrderChoice::Auto, false).unwrap();
    assert_eq!(r.order, Some(0));
    assert!(r.alpha.unwrap().iter().all(|&v| v == 0.0));
}

#[test]
fn banding_has_no_inverse_estimate() {
    let xs = sample_raw(&ProcessSpec::ma1(0.5, 1.0, 8).unwrap(), 32, 5).unwrap();
    let err = format!(
        "{:#}",
        estimate(&xs, "band", OrderChoice::Auto, true).unwrap_err()
    );
    assert!(err.contains("inverse covariance"), "{err}");
    assert!(estimate(&xs, "band", OrderChoice::Auto, false).is_ok());
}

#[test]
fn report_round_trip_reproduces_icm() {
    let xs = sample_raw(&ProcessSpec::ar1(0.7, 0.5, 12).unwrap(), 40, 6).unwrap();
    for est in ["pls", "pgd", "frob"] {
        let report = estimate(&xs, est, OrderChoice::Auto, true).unwrap();
        let back = Report::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        let c = HermitianToeplitz::new(back.cm.unwrap()).unwrap();
        let icm = gs_assemble(&gs_from_autocov(&c).unwrap());
        let want = back.icm.unwrap();
        let scale = want.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for (i, row) in want.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((icm[(i, j)] - v).abs() <= 1e-9 * scale, "{est} ({i},{j})");
            }
        }
    }
}

#[test]
fn malformed_csv_names_the_line() {
    let e = format!(
        "{:#}",
        parse_samples("# x\n1,2,3\n4,5,6\n7,oops,9\n").unwrap_err()
    );
    assert!(e.contains("line 4"), "{e}");
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    let xs = sample_raw(&ProcessSpec::ar1(0.5, 1.0, 6).unwrap(), 20, 7).unwrap();
    write_samples(&good, &xs).unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,2\n3,x\n").unwrap();
    let good = good.to_str().unwrap();

    let ok = toepcov(
        &["estimate", "--input", good, "--estimator", "pls", "--icm"],
        None,
    );
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let report = Report::from_json(&String::from_utf8(ok.stdout).unwrap()).unwrap();
    assert_eq!(report.estimator, "pls");
    assert!(report.icm.is_some());

    let icm = toepcov(
        &["estimate", "--input", good, "--estimator", "band", "--icm"],
        None,
    );
    assert_eq!(icm.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&icm.stderr).contains("inverse covariance"));

    let parse = toepcov(
        &[
            "estimate",
            "--input",
            bad.to_str().unwrap(),
            "--estimator",
            "scm",
        ],
        None,
    );
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));

    assert_eq!(
        toepcov(&["estimate", "--input", good], None).status.code(),
        Some(1)
    );
    assert_eq!(
        toepcov(&["estimate", "--input", good, "--estimator", "nope"], None)
            .status
            .code(),
        Some(1)
    );
    let list = toepcov(&["list-estimators"], None);
    assert_eq!(list.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&list.stdout).contains("pgd"));
}
