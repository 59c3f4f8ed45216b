use std::fs;
use std::process::{Command, Output};

use ghzlab::assets;
use ghzlab::quantum::{ghz_state, DensityOperator};
use ghzlab::sim::{simulate_tables, witness_settings, write_csv, CountModel, NoiseModel};

fn ghzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzlab"))
        .args(args)
        .env_remove("GHZLAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn without_timestamp(stdout: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(stdout).expect("JSON report");
    v.as_object_mut().unwrap().remove("generated_at_unix");
    v
}

#[test]
fn verify_exit_codes_on_every_asset() {
    for name in assets::names() {
        let o = ghzlab(&["verify", name, "--json"]);
        let expected = if name == "table-s1-6q-row3" { 1 } else { 0 };
        assert_eq!(code(&o), expected, "{name}");
        let v = without_timestamp(&o.stdout);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["exit_code"], expected);
    }
}

#[test]
fn reduce_exit_codes_on_every_asset() {
    for name in assets::names() {
        let o = ghzlab(&["reduce", name, "--restarts", "16"]);
        let expected = match name {
            "paper-4q" | "mermin-3q" => 0,
            "table-s1-6q-row3" => 3,
            _ => 1,
        };
        assert_eq!(code(&o), expected, "{name}");
    }
}

#[test]
fn unreadable_and_malformed_specs_exit_2() {
    assert_eq!(code(&ghzlab(&["verify", "/definitely/not/here.json"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name":"x","n_qubits":2,"relations":[{"sites":[{"pauli":"Q"}],"sign":1}]}"#).unwrap();
    assert_eq!(code(&ghzlab(&["verify", bad.to_str().unwrap()])), 2);
}

#[test]
fn contradictory_spec_reports_dimension_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("zz.json");
    fs::write(
        &p,
        r#"{"name":"zz","n_qubits":2,"relations":[
            {"sites":[{"pauli":"Z"},{"pauli":"Z"}],"sign":1},
            {"sites":[{"pauli":"Z"},{"pauli":"Z"}],"sign":-1}]}"#,
    )
    .unwrap();
    let o = ghzlab(&["verify", p.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(without_timestamp(&o.stdout)["verify"]["eigenspace_dim"], 0);
}

#[test]
fn same_seed_gives_identical_reports() {
    let args = ["simulate", "paper-4q", "--visibilities", "0.733,0.730,0.704,0.711,0.727,0.733", "--seed", "11", "--json"];
    let a = ghzlab(&args);
    let b = ghzlab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(without_timestamp(&a.stdout), without_timestamp(&b.stdout));
    let c = ghzlab(&["simulate", "paper-4q", "--visibility", "0.72", "--seed", "12", "--json"]);
    assert_ne!(without_timestamp(&a.stdout)["simulation"], without_timestamp(&c.stdout)["simulation"]);

    let r1 = ghzlab(&["reduce", "table-s1-5q", "--seed", "5", "--json"]);
    let r2 = ghzlab(&["reduce", "table-s1-5q", "--seed", "5", "--json"]);
    assert_eq!(without_timestamp(&r1.stdout), without_timestamp(&r2.stdout));
}

#[test]
fn canonical_json_is_byte_identical() {
    let spec = ghzlab::report::load_spec("table-s1-6q-row1").unwrap();
    let opts = ghzlab::paradox::ReducibilityOptions { seed: 9, restarts: 16, ..Default::default() };
    let a = ghzlab::report::cmd_reduce(&spec, &opts).unwrap().report.to_canonical_json().unwrap();
    let b = ghzlab::report::cmd_reduce(&spec, &opts).unwrap().report.to_canonical_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ghzlab"));
        c.args(["simulate", "paper-4q", "--visibility", "0.7", "--json"]).args(extra).env_remove("GHZLAB_SEED");
        if let Some(s) = env {
            c.env("GHZLAB_SEED", s);
        }
        without_timestamp(&c.output().unwrap().stdout)
    };
    assert_eq!(run(Some("77"), &[]), run(None, &["--seed", "77"]));
    assert_ne!(run(Some("77"), &[]), run(None, &["--seed", "78"]));
}

#[test]
fn simulate_writes_csv_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("counts.csv");
    let out = dir.path().join("report.json");
    let o = ghzlab(&[
        "simulate",
        "paper-4q",
        "--visibility",
        "1.0",
        "--deterministic",
        "--out-csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let tables = ghzlab::sim::read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(tables.len(), 6);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["simulation"]["bell"]["value"], 6.0);
    assert_eq!(report["simulation"]["bell"]["sigma"], 0.0);
}

#[test]
fn witness_from_counts_directory() {
    let dir = tempfile::tempdir().unwrap();
    let rho = DensityOperator::white_noise(&ghz_state(4).unwrap(), 0.5).unwrap();
    let tables = simulate_tables(
        &witness_settings(),
        &rho,
        &NoiseModel::uniform(1.0).unwrap(),
        &CountModel::deterministic(1e12, 1.0),
    )
    .unwrap();
    // Split across files to exercise directory merging.
    write_csv(&tables[..2], fs::File::create(dir.path().join("a.csv")).unwrap()).unwrap();
    write_csv(&tables[2..], fs::File::create(dir.path().join("b.csv")).unwrap()).unwrap();
    let o = ghzlab(&["witness", "--counts", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v = without_timestamp(&o.stdout);
    let f = v["witness"]["fidelity"]["value"].as_f64().unwrap();
    assert!((f - 0.53125).abs() < 1e-9, "{f}");

    fs::remove_file(dir.path().join("b.csv")).unwrap();
    assert_eq!(code(&ghzlab(&["witness", "--counts", dir.path().to_str().unwrap()])), 2);
    fs::write(dir.path().join("c.csv"), "setting,outcome_bits,count\nnonsense\n").unwrap();
    assert_eq!(code(&ghzlab(&["witness", "--counts", dir.path().to_str().unwrap()])), 2);
}

#[test]
fn witness_flags() {
    let o = ghzlab(&["witness", "--visibility", "0.5", "--json"]);
    let v = without_timestamp(&o.stdout);
    assert!((v["witness"]["state_fidelity"].as_f64().unwrap() - 0.53125).abs() < 1e-12);
    let o = ghzlab(&["witness", "--visibility", "1.0", "--deterministic", "--json"]);
    let v = without_timestamp(&o.stdout);
    assert_eq!(v["witness"]["witness"]["value"], -0.5);
    assert_eq!(v["witness"]["fidelity"]["value"], 1.0);
    assert_eq!(v["witness"]["exceeds_threshold"], true);
    assert_ne!(code(&ghzlab(&["witness", "--visibility", "0.5", "--fidelity", "0.8"])), 0);
}

#[test]
fn bound_on_five_qubit_row_matches_brute_force() {
    let o = ghzlab(&["bound", "table-s1-5q", "--json"]);
    assert_eq!(code(&o), 0);
    let v = without_timestamp(&o.stdout);
    let expr = ghzlab::lhv::bell_from_paradox(&assets::load("table-s1-5q").unwrap().spec);
    // Independent enumeration: one ±1 per (site, setting).
    let per_site = expr.settings_per_site();
    let slots: Vec<_> = per_site.iter().enumerate().flat_map(|(s, ks)| ks.iter().map(move |k| (s, *k))).collect();
    let mut best = i64::MIN;
    for m in 0u64..1 << slots.len() {
        let val = |s: usize, k| {
            let j = slots.iter().position(|&x| x == (s, k)).unwrap();
            if m >> j & 1 == 1 { -1 } else { 1 }
        };
        let total: i64 = expr
            .terms
            .iter()
            .map(|t| {
                let prod: i64 = t.observable.keys().iter().enumerate().filter_map(|(s, k)| k.map(|k| val(s, k))).product();
                t.coefficient.value() as i64 * prod
            })
            .sum();
        best = best.max(total);
    }
    assert_eq!(v["bound"]["lhv_max"], best);
}

#[test]
fn demo_command_runs() {
    let o = ghzlab(&["demo-paper"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("threshold visibility"));
    assert!(text.contains("4.3380"));
    assert!(text.contains("-0.3060"));
}
