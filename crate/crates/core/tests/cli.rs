use std::process::{Command, Output};

fn gic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gic"))
        .args(args)
        .output()
        .expect("run gic")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = gic(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json")
}

#[test]
fn bounds_in_regime_reports_exact_capacity() {
    let o = gic(&["bounds", "--p-db", "10", "--h", "0.25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("low_interference_exact"));
    assert!(text.contains("exact_capacity  2.838719093"), "{text}");
}

#[test]
fn bounds_without_interference_collapse() {
    let v = json(&["bounds", "--p", "10", "--h", "0", "--format", "json"]);
    let expected = 11f64.log2();
    for key in [
        "tin_lower",
        "onebit_upper",
        "kramer_upper",
        "exact_capacity",
    ] {
        let got = v[key].as_f64().unwrap();
        assert!((got - expected).abs() < 1e-12, "{key}: {got}");
    }
    assert_eq!(v["regime"]["kind"], "low_interference_exact");
}

#[test]
fn asymmetric_bounds() {
    let v = json(&[
        "bounds", "--p1", "10", "--p2", "10", "--h12", "0.2", "--h21", "0.1", "--format", "json",
    ]);
    let expected = 0.5 * (1.0 + 10.0 / 1.4f64).log2() + 0.5 * (1.0 + 10.0 / 1.1f64).log2();
    assert!((v["exact_capacity"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!(v["onebit_upper"].is_null());
}

#[test]
fn conflicting_flags_exit_2() {
    let o = gic(&["bounds", "--p", "10", "--p-db", "10", "--h", "0.25"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(
        gic(&["sweep", "--p", "10", "--h-from", "1", "--h-to", "0", "--h-step", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gic(&["sweep", "--p", "10", "--h-from", "0", "--h-to", "1", "--h-step", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gic(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_and_lf_terminated() {
    let args = [
        "sweep", "--p-db", "10", "--h-from", "0", "--h-to", "1", "--h-step", "0.01",
    ];
    let a = gic(&args);
    let b = gic(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 102);
    assert_eq!(
        text.lines().next().unwrap(),
        "h,p,tin_lower,ortho_lower,onebit_upper,kramer_upper,tangent_upper,exact_capacity,regime,genie_upper"
    );
}

#[test]
fn sweep_out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("gic-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let args = [
        "sweep", "--p", "10", "--h-from", "0", "--h-to", "0.5", "--h-step", "0.05",
    ];
    let direct = gic(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = gic(&with_out);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_step_larger_than_range() {
    let text = stdout(&gic(&[
        "sweep", "--p", "10", "--h-from", "0.3", "--h-to", "0.5", "--h-step", "1",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0.29999999999999999,"));
}

#[test]
fn sweep_json_matches_csv() {
    let base = [
        "sweep", "--p", "10", "--h-from", "0", "--h-to", "1", "--h-step", "0.1",
    ];
    let csv_text = stdout(&gic(&base));
    let mut jargs = base.to_vec();
    jargs.extend(["--format", "json"]);
    let rows = json(&jargs);
    let rows = rows.as_array().unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header = reader.headers().unwrap().clone();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        for (name, field) in header.iter().zip(rec.iter()) {
            let v = &row[name];
            if field.is_empty() {
                assert!(v.is_null(), "{name}");
            } else if let Some(x) = v.as_f64() {
                assert_eq!(field.parse::<f64>().unwrap(), x, "{name}");
            } else {
                assert_eq!(v.as_str().unwrap(), field);
            }
        }
    }
}

#[test]
fn asymmetric_sweep_columns() {
    let text = stdout(&gic(&[
        "sweep", "--p1", "10", "--p2", "5", "--h21", "0.1", "--h-from", "0", "--h-to", "0.2",
        "--h-step", "0.1",
    ]));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("h12,h21,p1,p2,tin_lower"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn genie_certificate_values() {
    let v = json(&["genie", "--p", "10", "--h", "0.25", "--format", "json"]);
    assert_eq!(v["certificate"], true);
    let g = &v["genie"];
    assert!((g["eta1"].as_f64().unwrap() - 2.2981).abs() < 1e-4);
    assert!((g["rho1"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    let (tin, rate) = (
        v["tin_sum_rate"].as_f64().unwrap(),
        v["genie_aided_sum_rate"].as_f64().unwrap(),
    );
    assert!((tin - rate).abs() < 1e-9);
    for key in ["useful_residuals", "smart_residuals"] {
        let r = v[key].as_array().unwrap();
        assert!(r.iter().all(|x| x.as_f64().unwrap() < 1e-12), "{key}");
    }
}

#[test]
fn genie_above_threshold() {
    let text = stdout(&gic(&["genie", "--p", "10", "--h", "1"]));
    assert!(text.contains("no certificate"));
    assert!(text.contains("tangent bound     3.56"), "{text}");
    assert!(stdout(&gic(&["genie", "--p", "10", "--h", "0"]))
        .contains("trivial regime, no genie needed"));
}

#[test]
fn sample_dump() {
    let args = [
        "sample", "--p", "10", "--h", "0.25", "--n", "5", "--seed", "3",
    ];
    let a = gic(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, gic(&args).stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "X1,X2,Z1,Z2,W1,W2,Y1,Y2,S1,S2");
    assert_eq!(lines.count(), 5);
    let plain = stdout(&gic(&[
        "sample",
        "--p",
        "10",
        "--h",
        "0.25",
        "--n",
        "5",
        "--no-genie",
    ]));
    assert_eq!(plain.lines().next().unwrap(), "X1,X2,Z1,Z2,Y1,Y2");
}

#[test]
fn verify_single_suite() {
    let o = gic(&[
        "verify",
        "--suite",
        "bounds_ordering",
        "--suite",
        "onebit_recovery",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS  bounds_ordering"));
    assert!(text.contains("all suites passed"));
}

#[test]
fn strict_verify_exits_1() {
    let o = gic(&["verify", "--strict", "--suite", "bounds_ordering"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failure"));
}
