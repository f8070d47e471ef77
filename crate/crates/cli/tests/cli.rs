use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cpnshare_cli::{run_allocation, Algorithm, ExperimentConfig};
use cpnshare_core::cpn::{GeneratorConfig, Scenario};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpnshare"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(name: &str, json: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, json).unwrap();
    p
}

const SMALL: &str = r#"{
  "generator": { "devices": { "user": 30, "edge": 20, "cloud": 10 } },
  "algorithms": ["nsga3", "nsga3-kdr"],
  "pop_size": 12,
  "generations": 3,
  "runs": 2,
  "seed": 5,
  "benchmark": { "problems": ["dtlz2"], "objectives": [3], "pop_size": 12, "generations": 3, "reference_samples": 100 }
}"#;

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn allocate_emits_one_row_per_run_and_algorithm() {
    let cfg = write_config("small.json", SMALL);
    let out = tmp("alloc.csv");
    let o = run(&["allocate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 4);
    let seed = header.iter().position(|h| h == "seed").unwrap();
    let algo = header.iter().position(|h| h == "algorithm").unwrap();
    let hash = header.iter().position(|h| h == "config_hash").unwrap();
    assert_eq!(rows.iter().map(|r| r[seed].as_str()).collect::<Vec<_>>(), ["5", "5", "6", "6"]);
    assert_eq!(rows.iter().map(|r| r[algo].as_str()).collect::<Vec<_>>(), ["nsga3", "nsga3-kdr", "nsga3", "nsga3-kdr"]);
    assert!(rows.iter().all(|r| r[hash].len() == 16 && r[hash] == rows[0][hash]));
    assert_eq!(header.len(), 6 + 6 * 8);
}

#[test]
fn allocate_is_reproducible_and_flags_override_config() {
    let cfg = write_config("small-repro.json", SMALL);
    let args = ["allocate", "--config", cfg.to_str().unwrap(), "--runs", "1", "--algo", "nsga3-sdr", "--seed", "9"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv_rows(&stdout(&a));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][header.iter().position(|h| h == "algorithm").unwrap()], "nsga3-sdr");
    assert_eq!(rows[0][header.iter().position(|h| h == "seed").unwrap()], "9");
}

#[test]
fn variation_off_gives_zero_improvement() {
    let mut cfg: ExperimentConfig = serde_json::from_str(SMALL).unwrap();
    cfg.crossover_prob = 0.0;
    cfg.mutation_prob = Some(0.0);
    let report = run_allocation(&cfg).unwrap();
    let table = report.table();
    let ir_cols: Vec<usize> = (0..table.header.len()).filter(|&i| table.header[i].contains("_ir_")).collect();
    assert_eq!(ir_cols.len(), 12);
    for row in &table.rows {
        for &c in &ir_cols {
            assert_eq!(row[c], "0", "{}", table.header[c]);
        }
    }
    for a in [Algorithm::Nsga3, Algorithm::Nsga3Kdr] {
        assert_eq!(report.median_ir(a, 2), Some(0.0));
    }
}

#[test]
fn bench_moea_reports_runs_medians_and_verdicts() {
    let cfg = write_config("bench.json", SMALL);
    let o = run(&["bench-moea", "--config", cfg.to_str().unwrap(), "--algo", "nsga3,nsga3-sdr,nsga3-kdr"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    let run_col = header.iter().position(|h| h == "run").unwrap();
    let verdict = header.iter().position(|h| h == "igd_verdict").unwrap();
    let medians: Vec<&Vec<String>> = rows.iter().filter(|r| r[run_col] == "median").collect();
    assert_eq!(rows.len() - medians.len(), 6);
    assert_eq!(medians.len(), 3);
    assert!(["+", "-", "="].contains(&medians[0][verdict].as_str()));
    assert!(["+", "-", "="].contains(&medians[1][verdict].as_str()));
    assert_eq!(medians[2][verdict], "");
}

#[test]
fn bench_protocol_counts() {
    let o = run(&["bench-protocol", "--runs", "3", "--seed", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    let col = |n: &str| header.iter().position(|h| h == n).unwrap();
    let counts: Vec<(String, String, String, String)> = rows
        .iter()
        .map(|r| (r[col("phase")].clone(), r[col("point_mults")].clone(), r[col("point_adds")].clone(), r[col("hashes")].clone()))
        .collect();
    let expect = |p: &str, m: &str, a: &str, h: &str| (p.to_string(), m.to_string(), a.to_string(), h.to_string());
    assert_eq!(
        counts,
        vec![
            expect("pseudonym", "7", "1", "4"),
            expect("certificate", "3", "1", "2"),
            expect("verification", "4", "2", "2"),
            expect("signature", "1", "0", "1")
        ]
    );
    assert!(rows.iter().all(|r| r[col("iterations")] == "3"));
}

#[test]
fn trade_demo_is_deterministic_and_ledger_verifies() {
    let cfg = write_config("demo.json", SMALL);
    let (l1, l2) = (tmp("demo1.cpnl"), tmp("demo2.cpnl"));
    for l in [&l1, &l2] {
        let o = run(&["trade-demo", "--config", cfg.to_str().unwrap(), "--test-mode", "--out", l.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("verification: both credentials accepted"));
    }
    let bytes = std::fs::read(&l1).unwrap();
    assert_eq!(bytes, std::fs::read(&l2).unwrap());

    let json = tmp("demo.json.out");
    let o = run(&["ledger-verify", l1.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "valid: 2 blocks");
    let exported: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(exported.to_string().contains("\"trade\""));

    let mut broken = bytes.clone();
    let last = broken.len() - 40;
    broken[last] ^= 0x01;
    let bad = tmp("demo-broken.cpnl");
    std::fs::write(&bad, broken).unwrap();
    let o = run(&["ledger-verify", bad.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn ledger_verify_with_foreign_writer_fails() {
    let cfg = write_config("demo-foreign.json", SMALL);
    let l = tmp("foreign.cpnl");
    assert!(run(&["trade-demo", "--config", cfg.to_str().unwrap(), "--test-mode", "--out", l.to_str().unwrap()]).status.success());
    let generator = "036b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296";
    let o = run(&["ledger-verify", l.to_str().unwrap(), "--writer", generator]);
    assert!(!o.status.success());
    assert!(stdout(&o).starts_with("invalid at height 0"));
}

#[test]
fn tampered_certificate_aborts_at_verification() {
    let cfg = write_config("demo-tamper.json", SMALL);
    let o = run(&["trade-demo", "--config", cfg.to_str().unwrap(), "--test-mode", "--tamper-certificate"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("verification phase"), "{err}");
    assert!(!stdout(&o).contains("ledger:"));
}

#[test]
fn scenario_command_writes_reduced_network() {
    let o = run(&["scenario", "--reduced", "--seed", "3"]);
    assert!(o.status.success());
    let s = Scenario::<f64>::from_json(&stdout(&o)).unwrap();
    assert_eq!(s.devices.len(), 120);
    assert_eq!(s, GeneratorConfig::reduced().generate::<f64>(3));
}

#[test]
fn bad_inputs_are_reported() {
    let o = run(&["allocate", "--algo", "moead"]);
    assert!(!o.status.success());
    let cfg = write_config("bad.json", r#"{"runs": 0}"#);
    let o = run(&["allocate", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("runs must be at least 1"));
}
