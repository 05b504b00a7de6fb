use std::fs;
use std::process::{Command, Output};

use cavityqed_cli::report::{parse_report, Format};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavityqed"))
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

#[test]
fn xi_at_cavity_midpoint() {
    let o = run(&["xi", "--u", "1", "--v", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ξ(1, 0) = 2 Σ_{k≥0} 1/(2k+1)³ = (7/4) ζ(3)
    let want = 1.75 * 1.202_056_903_159_594_2;
    let got = v["xi"].as_f64().unwrap();
    assert!((got - want).abs() < 1e-12 * want, "{got}");
}

#[test]
fn excluded_origin_is_a_domain_error() {
    let o = run(&["kernel", "--family", "D", "--sign", "plus", "--u", "0", "--v", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("domain"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let o = run(&["xi", "--bogus", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
}

#[test]
fn invalid_tolerance_exits_2() {
    let o = run(&["xi", "--tol-rel", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectral_matches_summed_kernel() {
    let args = ["kernel", "--family", "D", "--u", "0.7", "--v", "0.4", "--phi", "0.3"];
    let a = run(&args);
    let mut spectral = args.to_vec();
    spectral.push("--spectral");
    let b = run(&spectral);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    let ma: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let mb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    let entry = |m: &serde_json::Value, i: usize, j: usize| m["matrix"][i][j].as_f64().unwrap();
    let scale = (0..9).map(|k| entry(&ma, k / 3, k % 3).abs()).fold(0.0, f64::max);
    // The extrapolated spectral sum at the default regulator is good to ~1e-6.
    for k in 0..9 {
        let (x, y) = (entry(&ma, k / 3, k % 3), entry(&mb, k / 3, k % 3));
        assert!((x - y).abs() < 1e-5 * scale, "({k}) {x} {y}");
    }
}

#[test]
fn spectral_requires_d_plus() {
    let o = run(&["kernel", "--family", "E", "--spectral"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let o = run(&["verify", "all", "--tol-rel", "1e-8", "--seed", "42", "--output", json_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bytes = fs::read(&json_path).unwrap();
    let doc = parse_report(&bytes, Format::Json, "all", 42).unwrap();
    assert!(doc.all_pass);
    assert_eq!(doc.suite, "all");
    assert_eq!(doc.seed, 42);
    assert!(!doc.checks.is_empty());

    let csv_path = dir.path().join("report.csv");
    let o = run(&[
        "verify", "all", "--tol-rel", "1e-8", "--format", "csv", "--output", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let from_csv = parse_report(&fs::read(&csv_path).unwrap(), Format::Csv, "all", 42).unwrap();
    assert_eq!(from_csv.checks.len(), doc.checks.len());
    for (a, b) in doc.checks.iter().zip(&from_csv.checks) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.pass, b.pass);
        assert_eq!(a.abs_err.to_bits(), b.abs_err.to_bits());
        assert_eq!(a.rel_err.to_bits(), b.rel_err.to_bits());
        assert_eq!(a.params, b.params);
    }
}

#[test]
fn identical_arguments_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "cancellation", "--seed", "9"],
        vec!["dicke", "scan", "--n-atoms", "4", "--cutoff", "20", "--steps", "7", "--format", "csv"],
    ] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("out{k}"));
            let mut a = args.clone();
            a.extend(["--output", path.to_str().unwrap()]);
            let o = run(&a);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            outputs.push(fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
}

#[test]
fn seed_changes_random_grid() {
    let a = run(&["verify", "cancellation", "--seed", "1"]);
    let b = run(&["verify", "cancellation", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn dicke_outputs() {
    let o = run(&["dicke", "meanfield", "--y", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a2 = v["mean_field"]["order_parameter_sq_per_atom"].as_f64().unwrap();
    assert!((a2 - 15.0 / 16.0).abs() < 1e-12);

    let o = run(&["dicke", "scan", "--n-atoms", "2", "--cutoff", "10", "--steps", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("omega_a,omega_c,n_atoms,cutoff,y,energy,photon_number,gap,parity"));

    let o = run(&["dicke", "ground", "--n-atoms", "500", "--cutoff", "500"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let o = run(&["xi", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_every_flag() {
    let o = run(&["kernel", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for flag in [
        "--family", "--sign", "--u", "--v", "--phi", "--spectral", "--eps", "--format", "--output", "--seed",
        "--tol-abs", "--tol-rel", "--max-subdivisions",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
    let o = run(&["dicke", "--help"]);
    let text = stdout(&o);
    for flag in ["--omega-a", "--omega-c", "--y", "--y-min", "--y-max", "--steps", "--n-atoms", "--cutoff"] {
        assert!(text.contains(flag), "missing {flag}");
    }
    let o = run(&["verify", "--help"]);
    let text = stdout(&o);
    for target in ["all", "bessel", "cancellation", "modesum", "lipschitz", "green", "aniso"] {
        assert!(text.contains(target), "missing {target}");
    }
}

#[test]
fn empty_report_is_valid_json() {
    let doc = cavityqed_cli::report::ReportDocument {
        suite: "all".into(),
        seed: 0,
        all_pass: true,
        checks: vec![],
    };
    let bytes = cavityqed_cli::report::emit_report(&doc, Format::Json).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["checks"], serde_json::json!([]));
}
