use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exciton-sae"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const CLOSED: [&str; 6] = ["--kappa", "1", "--a", "1", "--A", "0.5"];
const GENERIC: [&str; 8] = ["--kappa", "1", "--a", "1", "--A", "1", "--sigma", "1"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn spectrum_rhs_zero_closed_form() {
    let o = run(&with(
        &["spectrum"],
        &with(&CLOSED, &["--sigma-rhs-zero", "--nmax", "5"]),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = csv(&stdout(&o));
    assert_eq!(header, ["n", "alpha", "energy", "norm_constant"]);
    assert_eq!(rows.len(), 5);
    let m = 0.75f64.sqrt();
    for (k, row) in rows.iter().enumerate() {
        let n = (k + 1) as f64;
        let want = -1.0 / (4.0 * (0.5 - m + n).powi(2));
        assert!(((num(&row[2]) - want) / want).abs() < 1e-10);
        assert!(num(&row[3]) > 0.0);
    }
}

#[test]
fn degenerate_index_is_a_config_error() {
    // A = 0.75 gives m = 1, where the Frobenius exponents differ by an integer
    let o = run(&[
        "spectrum",
        "--kappa",
        "1",
        "--a",
        "1",
        "--A",
        "0.75",
        "--sigma-rhs-zero",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn empty_spectrum_keeps_header() {
    let o = run(&with(&["spectrum"], &with(&GENERIC, &["--nmax", "0"])));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,alpha,energy,norm_constant\n");
    let o = run(&with(
        &["spectrum"],
        &with(&GENERIC, &["--nmax", "0", "--format", "json"]),
    ));
    assert_eq!(stdout(&o), "[]\n");
}

#[test]
fn spectrum_matches_oracle_subcommand() {
    let s = run(&with(
        &["spectrum"],
        &with(&GENERIC, &["--nmax", "4", "--format", "json"]),
    ));
    let o = run(&with(
        &["oracle"],
        &with(&GENERIC, &["--nmax", "4", "--format", "json"]),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: Value = serde_json::from_str(&stdout(&s)).unwrap();
    let o: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (s, o) = (s.as_array().unwrap(), o.as_array().unwrap());
    assert_eq!(s.len(), o.len());
    for (a, b) in s.iter().zip(o) {
        assert_eq!(a["n"], b["n"]);
        assert_eq!(b["pass"], Value::Bool(true));
        let d = a["energy"].as_f64().unwrap() - b["e_shooting"].as_f64().unwrap();
        assert!(d.abs() < 1e-6);
    }
}

#[test]
fn oracle_rhs_zero_matches_closed_form() {
    let o = run(&with(
        &["oracle"],
        &with(&CLOSED, &["--sigma-rhs-zero", "--nmax", "3"]),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = csv(&stdout(&o));
    let m = 0.75f64.sqrt();
    assert_eq!(rows.len(), 3);
    for (k, row) in rows.iter().enumerate() {
        let want = -1.0 / (4.0 * (0.5 - m + (k + 1) as f64).powi(2));
        assert!((num(&row[2]) - want).abs() < 1e-10);
        assert!((num(&row[3]) - want).abs() < 1e-6);
        assert_eq!(row[5], "true");
    }
}

#[test]
fn oracle_rejects_loose_tolerance() {
    for tol in ["1", "1e-3"] {
        let o = run(&with(&["oracle"], &with(&GENERIC, &["--tol", tol])));
        assert_eq!(o.status.code(), Some(2), "tol {tol}");
    }
}

#[test]
fn fplot_table_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = run(&with(
        &["fplot"],
        &with(
            &CLOSED,
            &[
                "--alpha-min",
                "0.0001",
                "--alpha-max",
                "4",
                "--samples",
                "40000",
                "--out",
                out.to_str().unwrap(),
            ],
        ),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = csv(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 40000);
    let (_, side) = csv(&std::fs::read_to_string(dir.path().join("f.asymptotes.csv")).unwrap());
    let poles: Vec<f64> = side
        .iter()
        .filter(|r| r[0] == "pole")
        .map(|r| num(&r[2]))
        .collect();
    let zeros: Vec<f64> = side
        .iter()
        .filter(|r| r[0] == "zero")
        .map(|r| num(&r[2]))
        .collect();
    let m = 0.75f64.sqrt();
    assert_eq!(poles, [0.5 + m, 1.5 + m, 2.5 + m]);
    assert!((poles[0] - 1.3660).abs() < 1e-4 && (poles[1] - 2.3660).abs() < 1e-4);
    assert_eq!(zeros, [1.5 - m, 2.5 - m, 3.5 - m, 4.5 - m]);
    // sign changes of the table sit at the listed poles and zeros
    let f: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r[0]), num(&r[1]))).collect();
    let flips: Vec<f64> = f
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0)
        .map(|w| 0.5 * (w[0].0 + w[1].0))
        .collect();
    let mut marks: Vec<f64> = poles.iter().chain(&zeros).copied().collect();
    marks.sort_by(f64::total_cmp);
    assert_eq!(flips.len(), marks.len());
    for (a, b) in flips.iter().zip(&marks) {
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn fplot_rejects_bad_range() {
    let o = run(&with(
        &["fplot"],
        &with(&CLOSED, &["--alpha-min", "3", "--alpha-max", "1"]),
    ));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&with(&["fplot"], &with(&CLOSED, &["--samples", "1"])));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scattering_scan() {
    let o = run(&with(
        &["scattering"],
        &with(
            &GENERIC,
            &["--emin", "1e-3", "--emax", "100", "--epoints", "4000"],
        ),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = csv(&stdout(&o));
    assert_eq!(
        header,
        [
            "energy",
            "re_c_over_d",
            "im_c_over_d",
            "delta",
            "unitarity_defect",
            "continuous"
        ]
    );
    assert_eq!(rows.len(), 4000);
    assert!(rows.iter().all(|r| num(&r[4]) < 1e-8));
    assert!(rows.iter().all(|r| r[5] == "true"));
    assert_eq!(num(&rows[0][0]), 1e-3);
    assert_eq!(num(&rows[3999][0]), 100.0);
}

#[test]
fn scattering_single_point_and_bad_grid() {
    let o = run(&with(
        &["scattering"],
        &with(&GENERIC, &["--emin", "2", "--emax", "2", "--epoints", "1"]),
    ));
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0][0]), 2.0);
    let o = run(&with(&["scattering"], &with(&GENERIC, &["--emin", "-1"])));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eigenfunction_is_normalized() {
    let o = run(&with(
        &["eigenfunction"],
        &with(&GENERIC, &["--state", "2", "--zmax", "120", "--samples", "24001"]),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = csv(&stdout(&o));
    let h = 120.0 / 24000.0;
    let f: Vec<f64> = rows.iter().map(|r| num(&r[1]).powi(2)).collect();
    let simpson: f64 = f
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if i == 0 || i == f.len() - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * v
        })
        .sum::<f64>()
        * h
        / 3.0;
    assert!((simpson - 1.0).abs() < 1e-8, "{simpson}");
    let o = run(&with(
        &["eigenfunction"],
        &with(&GENERIC, &["--state", "99", "--nmax", "2"]),
    ));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("s{i}.json"));
            let o = run(&with(
                &["scattering"],
                &with(
                    &GENERIC,
                    &[
                        "--epoints",
                        "300",
                        "--format",
                        "json",
                        "--out",
                        p.to_str().unwrap(),
                    ],
                ),
            ));
            assert_eq!(o.status.code(), Some(0));
            std::fs::read(p).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

#[test]
fn json_round_trip_is_idempotent() {
    let o = run(&with(
        &["spectrum"],
        &with(&GENERIC, &["--nmax", "4", "--format", "json"]),
    ));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(text, again);
    // CSV and JSON carry the same values
    let c = run(&with(&["spectrum"], &with(&GENERIC, &["--nmax", "4"])));
    let (_, rows) = csv(&stdout(&c));
    for (row, obj) in rows.iter().zip(v.as_array().unwrap()) {
        assert_eq!(num(&row[2]), obj["energy"].as_f64().unwrap());
    }
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = run(&[
        "spectrum",
        "--kappa",
        "1",
        "--a",
        "1",
        "--A",
        "0.75",
        "--sigma",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"kappa": 1, "a": 1, "A": 0.5, "sigma": 2.0, "nmax": 3, "mode": "paper"}"#,
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = run(&["spectrum", "--config", c]);
    let direct = run(&with(
        &["spectrum"],
        &with(&CLOSED, &["--sigma", "2", "--nmax", "3"]),
    ));
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&direct));
    // a flag replaces the file's Σ, including with one of the specials
    let over = run(&["spectrum", "--config", c, "--sigma-rhs-zero"]);
    let direct = run(&with(
        &["spectrum"],
        &with(&CLOSED, &["--sigma-rhs-zero", "--nmax", "3"]),
    ));
    assert_eq!(stdout(&over), stdout(&direct));
    let over = run(&["spectrum", "--config", c, "--nmax", "1"]);
    assert_eq!(csv(&stdout(&over)).1.len(), 1);
}

#[test]
fn config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"kappa": 1, "a": 1, "A": 0.5, "sigmaa": 1}"#).unwrap();
    assert_eq!(
        run(&["spectrum", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["spectrum", "--config", "/nonexistent.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["spectrum", "--a", "1", "--A", "0.5", "--sigma", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&with(&["spectrum"], &with(&GENERIC, &["--sigma-rhs-zero"])))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&with(&["spectrum"], &with(&CLOSED, &[]))).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&with(&["spectrum"], &with(&GENERIC, &["--tol", "0"])))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(2));
}

#[test]
fn rigorous_mode_differs_for_generic_sigma() {
    let p = run(&with(&["spectrum"], &with(&GENERIC, &["--nmax", "3"])));
    let r = run(&with(
        &["spectrum"],
        &with(&GENERIC, &["--nmax", "3", "--mode", "rigorous"]),
    ));
    assert_eq!(r.status.code(), Some(0));
    assert_ne!(stdout(&p), stdout(&r));
    let o = run(&with(
        &["oracle"],
        &with(&GENERIC, &["--nmax", "3", "--mode", "rigorous"]),
    ));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
