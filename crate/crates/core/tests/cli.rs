use std::path::Path;
use std::process::{Command, Output};

use dirrho::estimator::rho_hat_directional;
use dirrho::io::{ingest_csv, CsvOptions};
use dirrho::{compute_ranks, Direction, TiePolicy};

fn dirrho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirrho"))
        .args(args)
        .env_remove("DIRRHO_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn sample_to(dir: &Path, name: &str, spec: &str, n: usize, seed: u64) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    stdout(&dirrho(&["sample", spec, "-n", &n.to_string(), "--seed", &seed.to_string(), "-o", &p]));
    p
}

fn csv_rows(text: &str) -> Vec<(String, f64)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn comonotone_csv_gives_ones() {
    let dir = tempfile::tempdir().unwrap();
    let p = sample_to(dir.path(), "m.csv", "comonotone:d=3", 300, 1);
    let out = dirrho(&["estimate", &p, "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("alpha,rho_hat\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 8);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"\"(1,1,1)\",1.0000"));
    assert!(lines.contains(&"\"(-1,-1,-1)\",1.0000"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho_hat_3* = 1.0000"));
}

#[test]
fn independent_csv_is_near_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = sample_to(dir.path(), "pi.csv", "product:d=3", 10_000, 17);
    let rows = csv_rows(&stdout(&dirrho(&["estimate", &p, "--format", "csv"])));
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|(_, v)| v.abs() <= 0.04), "{rows:?}");
    // sorted by descending estimate
    assert!(rows.windows(2).all(|w| w[0].1 >= w[1].1));
}

#[test]
fn json_matches_library_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = sample_to(dir.path(), "c.csv", "clayton:theta=1.5:d=4", 250, 3);
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&dirrho(&["estimate", &p, "--format", "json"]))).unwrap();
    let ds = ingest_csv(Path::new(&p), &CsvOptions::default()).unwrap();
    let ranks = compute_ranks(&ds.data, TiePolicy::Stable);
    let estimates = json["estimates"].as_array().unwrap();
    assert_eq!(estimates.len(), 16);
    for e in estimates {
        let alpha: Direction = e["alpha"].as_str().unwrap().parse().unwrap();
        let lib = rho_hat_directional(&ranks, &alpha).unwrap().value;
        assert_eq!(e["value"].as_f64().unwrap(), lib);
    }
    assert_eq!(json["tie_count"], 0);
}

#[test]
fn explicit_directions_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.csv");
    std::fs::write(&p, "a;b;c\n1;5;2\n2;4;3\n3;3;1\n4;1;5\n5;2;4\n").unwrap();
    let p = p.to_str().unwrap();
    let text = stdout(&dirrho(&[
        "estimate", p, "--delimiter", ";", "--columns", "a,b", "-a", "+-", "-a", "(1,1)", "--format", "csv",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].0, "(1,-1)");
    assert!(rows[0].1 > 0.0 && rows[1].1 < 0.0);
}

#[test]
fn exact_examples() {
    let rows = csv_rows(&stdout(&dirrho(&["exact", "fgm:lambda=1:d=4", "--all", "--format", "csv"])));
    assert_eq!(rows.len(), 16);
    for (alpha, v) in &rows {
        let a: Direction = alpha.parse().unwrap();
        let sign = if (4 - a.minus_count()).is_multiple_of(2) { 1.0 } else { -1.0 };
        assert!((v - sign * 0.0056).abs() < 1e-12, "{alpha}: {v}");
    }
    let json: serde_json::Value = serde_json::from_str(&stdout(&dirrho(&[
        "exact", "fgm:lambda=1:d=4", "-a", "++++", "--format", "json",
    ])))
    .unwrap();
    assert_eq!(json["coefficients"][0]["value"].as_f64().unwrap(), 5.0 / 891.0);

    let rows = csv_rows(&stdout(&dirrho(&["exact", "comonotone:d=3", "--format", "csv"])));
    let ones = rows.iter().filter(|(_, v)| *v == 1.0).count();
    let thirds = rows.iter().filter(|(_, v)| *v == -0.3333).count();
    assert_eq!((ones, thirds), (2, 6));

    let rows = csv_rows(&stdout(&dirrho(&["exact", "product:d=5", "--format", "csv"])));
    assert_eq!(rows.len(), 32);
    assert!(rows.iter().all(|(_, v)| *v == 0.0));
}

#[test]
fn simulate_presets_layout_and_determinism() {
    let a = stdout(&dirrho(&["simulate", "--preset", "table1", "--seed", "42", "--reps", "30", "--format", "csv"]));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "alpha,theta,exact,n=20,n=50,n=100,n=500");
    assert_eq!(lines.len(), 6);
    let b = stdout(&dirrho(&["simulate", "--preset", "table1", "--seed", "42", "--reps", "30", "--format", "csv"]));
    assert_eq!(a, b);

    let t4 = stdout(&dirrho(&["simulate", "--preset", "table4", "--seed", "42", "--reps", "30", "--format", "csv"]));
    let lines: Vec<&str> = t4.lines().collect();
    assert_eq!(
        lines[0],
        "n,theta,exact,rho_minus_14,rho_minus_124,rho_minus_134,rho_minus_1234,rho_hat"
    );
    assert_eq!(lines.len(), 21);
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_dirrho"));
        cmd.args(args).env_remove("DIRRHO_SEED");
        if let Some(v) = env {
            cmd.env("DIRRHO_SEED", v);
        }
        stdout(&cmd.output().unwrap())
    };
    let explicit = run(None, &["sample", "fgm:lambda=0.5:d=3", "-n", "5", "--seed", "11"]);
    let from_env = run(Some("11"), &["sample", "fgm:lambda=0.5:d=3", "-n", "5"]);
    let overridden = run(Some("12"), &["sample", "fgm:lambda=0.5:d=3", "-n", "5", "--seed", "11"]);
    assert_eq!(explicit, from_env);
    assert_eq!(explicit, overridden);
    assert_ne!(explicit, run(Some("12"), &["sample", "fgm:lambda=0.5:d=3", "-n", "5"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dirrho(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dirrho(&["exact", "gumbel:theta=1:d=3"]).status.code(), Some(2));
    assert_eq!(dirrho(&["simulate", "--preset", "table9"]).status.code(), Some(2));
    assert_eq!(dirrho(&["estimate", "/definitely/missing.csv"]).status.code(), Some(3));

    let blank = dir.path().join("blank.csv");
    std::fs::write(&blank, "a,b\n1,2\n3,\n4,5\n").unwrap();
    let out = dirrho(&["estimate", blank.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 3") && err.contains("column b"), "{err}");

    let out = dirrho(&[
        "exact", "clayton:theta=2:d=3", "--method", "quadrature", "--nodes", "8", "--target-error", "1e-15",
    ]);
    assert_eq!(out.status.code(), Some(4));
}
