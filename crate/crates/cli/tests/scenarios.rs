use std::path::PathBuf;
use std::process::Command;

use formbound_cli::config::{Expectation, MapConfig, DEFAULT_ORDER, DEFAULT_SAMPLES, DEFAULT_SEED};
use formbound_cli::export::ALL_FIELDS;
use formbound_cli::{
    catalog, emit_pointwise_csv, load_scenario, midpoint_grid, run, ConfigError, CsvField, DirectionChoice, RunOptions,
    ScenarioConfig, Verdict,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read_csv(path: &std::path::Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn minimal_file_gets_defaults() {
    let s = load_scenario(fixture("minimal_identity.toml")).unwrap();
    let c = &s.config;
    assert_eq!(c.order, DEFAULT_ORDER);
    assert_eq!(c.samples, DEFAULT_SAMPLES);
    assert_eq!(c.seed, DEFAULT_SEED);
    assert_eq!(c.tolerance.sup, 1e-6);
    assert_eq!(c.expect, Expectation::Pass);
    assert_eq!(c.degrees(), vec![0, 1, 2]);
    assert_eq!(c.exponents().len(), 5);
    assert!(c.exponents()[4].is_infinite());
    assert_eq!(c.target_chart(), &c.source);
}

#[test]
fn shear_file_parses() {
    let text = std::fs::read_to_string(catalog::directory().join("shear_cylinder.toml")).unwrap();
    let c = ScenarioConfig::from_toml(&text).unwrap();
    assert_eq!(c.map, MapConfig::Shear { s: 1.0 });
    assert_eq!(c.source.periodic, vec![true, false]);
}

#[test]
fn catalog_files_match_embedded_copies() {
    for (name, text) in catalog::ENTRIES {
        let on_disk = std::fs::read_to_string(catalog::directory().join(format!("{name}.toml"))).unwrap();
        assert_eq!(on_disk, text, "{name}");
        assert_eq!(ScenarioConfig::from_toml(text).unwrap().name, name);
    }
}

#[test]
fn reflection_is_rejected_with_witness() {
    match load_scenario(fixture("reflection.toml")) {
        Err(ConfigError::Orientation { point, det }) => {
            assert_eq!(point.len(), 2);
            assert!(det < 0.0);
            assert!((det + 1.0).abs() < 1e-6);
        }
        other => panic!("expected an orientation error, got {:?}", other.err()),
    }
}

#[test]
fn syntax_error_reports_position() {
    match load_scenario(fixture("bad_syntax.toml")) {
        Err(ConfigError::Parse { line, column, .. }) => {
            assert!(line >= 5, "line {line}");
            assert!(column >= 1);
        }
        other => panic!("expected a parse error, got {:?}", other.err()),
    }
}

#[test]
fn unknown_keys_are_rejected() {
    match load_scenario(fixture("unknown_field.toml")) {
        Err(ConfigError::Parse { line, message, .. }) => {
            assert_eq!(line, 2);
            assert!(message.contains("colour"), "{message}");
        }
        other => panic!("expected a parse error, got {:?}", other.err()),
    }
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(load_scenario(fixture("absent.toml")), Err(ConfigError::Io { .. })));
}

#[test]
fn bad_values_are_rejected() {
    let base = std::fs::read_to_string(fixture("minimal_identity.toml")).unwrap();
    let cases = [
        ("degrees = [3]\n", "degrees"),
        ("order = 0\n", "order"),
        ("exponents = [0.5]\n", ""),
        ("exponents = []\n", "exponents"),
    ];
    for (line, field) in cases {
        let text = format!("{line}{base}");
        let err = ScenarioConfig::from_toml(&text).and_then(formbound_cli::Scenario::new).err();
        match err {
            Some(ConfigError::Invalid { field: f, .. }) => assert_eq!(f, field),
            Some(ConfigError::Parse { .. }) => assert!(field.is_empty(), "{line}"),
            other => panic!("{line}: {other:?}"),
        }
    }
}

#[test]
fn exponent_spellings() {
    let base = std::fs::read_to_string(fixture("minimal_identity.toml")).unwrap();
    let text = format!("exponents = [1, 1.5, \"3/2\", \"inf\", 4]\n{base}");
    let c = ScenarioConfig::from_toml(&text).unwrap();
    let v: Vec<f64> = c.exponents().iter().map(|p| p.reciprocal()).collect();
    assert_eq!(v, vec![1.0, 1.0 / 1.5, 1.0 / 1.5, 0.0, 0.25]);
}

#[test]
fn configs_round_trip_through_toml() {
    for config in catalog::configs().unwrap() {
        let again = ScenarioConfig::from_toml(&config.to_toml()).unwrap();
        assert_eq!(again, config, "{}", config.name);
    }
}

#[test]
fn reports_are_deterministic() {
    let s = catalog::get("sinusoidal_torus_2d").unwrap();
    let options = RunOptions { order: Some(8), samples: Some(256), ..RunOptions::default() };
    let a = run(&s, &options).to_json();
    let b = run(&s, &options).to_json();
    assert_eq!(a, b);
}

#[test]
fn errors_stay_with_their_tuples() {
    let s = catalog::get("near_degenerate").unwrap();
    assert_eq!(s.config.expect, Expectation::Error);
    let report = run(&s, &RunOptions { order: Some(8), samples: Some(256), ..RunOptions::default() });
    assert_eq!(report.summary.total, 30);
    assert!(report.summary.errors > 0);
    assert!(!report.all_passed());
    for c in &report.certificates {
        match c.verdict {
            Verdict::Error => {
                assert!(c.values.is_none());
                let msg = c.error.as_deref().unwrap();
                assert!(msg.contains("near_degenerate"), "{msg}");
            }
            _ => assert!(c.values.is_some()),
        }
    }
    assert!(report.certificates.iter().any(|c| c.verdict == Verdict::Pass));
}

#[test]
fn direction_filter() {
    let s = load_scenario(fixture("minimal_identity.toml")).unwrap();
    let options = RunOptions { direction: DirectionChoice::Pull, order: Some(4), samples: Some(64), seed: None };
    let report = run(&s, &options);
    assert_eq!(report.summary.total, 15);
    assert!(report.certificates.iter().all(|c| c.direction == "pull"));
    assert!(report.all_passed());
}

#[test]
fn identity_csv_has_unit_spectrum() {
    let s = load_scenario(fixture("minimal_identity.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.csv");
    emit_pointwise_csv(&s, &ALL_FIELDS, &midpoint_grid(s.phi.source(), 4), &path).unwrap();
    let (header, rows) = read_csv(&path);
    assert_eq!(rows.len(), 16);
    for name in ["alpha_1", "alpha_2", "beta_1", "beta_2", "jacobian", "lower_k1_p2", "upper_k1_pinf"] {
        let j = column(&header, name);
        for row in &rows {
            assert!((row[j] - 1.0).abs() < 1e-12, "{name} = {}", row[j]);
        }
    }
}

#[test]
fn stretch_csv_columns() {
    let s = catalog::get("stretch_linear").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stretch.csv");
    let fields = [CsvField::Alpha, CsvField::Jacobian, CsvField::PointwiseNorm];
    emit_pointwise_csv(&s, &fields, &midpoint_grid(s.phi.source(), 5), &path).unwrap();
    let (header, rows) = read_csv(&path);
    assert_eq!(header[..2], ["x1".to_string(), "x2".to_string()]);
    assert!(!header.iter().any(|h| h.starts_with("beta")));
    let (a1, a2, jac) = (column(&header, "alpha_1"), column(&header, "alpha_2"), column(&header, "jacobian"));
    for row in &rows {
        assert!((row[jac] - 2.0).abs() < 1e-12);
        assert!(row[a1] >= row[a2]);
        assert!((row[a1] - 2.0).abs() < 1e-12 && (row[a2] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sinusoidal_csv_is_ordered() {
    let s = catalog::get("sinusoidal_torus_2d").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sin.csv");
    emit_pointwise_csv(&s, &ALL_FIELDS, &midpoint_grid(s.phi.source(), 6), &path).unwrap();
    let (header, rows) = read_csv(&path);
    let cols = ["alpha_1", "alpha_2", "beta_1", "beta_2", "jacobian"].map(|c| column(&header, c));
    for row in &rows {
        assert!(row[cols[0]] >= row[cols[1]]);
        assert!(row[cols[2]] >= row[cols[3]]);
        assert!((row[cols[0]] * row[cols[1]] - row[cols[4]]).abs() < 1e-9 * row[cols[4]]);
    }
}

#[test]
fn unknown_csv_field_is_rejected() {
    assert!("alpha_i".parse::<CsvField>().is_ok());
    assert!("gamma".parse::<CsvField>().is_err());
}

fn certify_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_certify"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("id.json");
    let status = certify_bin()
        .args(["run", fixture("minimal_identity.toml").to_str().unwrap(), "--order", "4", "--samples", "64", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["scenario"], "minimal_identity");
    assert_eq!(json["summary"]["total"], 30);
    assert_eq!(json["environment"]["refined_order"], 8);

    let status = certify_bin().args(["run", fixture("reflection.toml").to_str().unwrap()]).status().unwrap();
    assert_eq!(status.code(), Some(2));

    let degenerate = catalog::directory().join("near_degenerate.toml");
    let output = certify_bin()
        .args(["run", degenerate.to_str().unwrap(), "--order", "4", "--samples", "64"])
        .env("CERTIFY_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
    assert!(dir.path().join("near_degenerate.json").exists());
    assert!(String::from_utf8_lossy(&output.stderr).contains("errors"));
}

#[test]
fn binary_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let output = certify_bin()
        .args(["run", fixture("minimal_identity.toml").to_str().unwrap(), "--order", "4", "--samples", "64"])
        .args(["--direction", "push", "--fields", "alpha_i,jacobian", "--grid", "3", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(json["summary"]["total"], 15);
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["x1", "x2", "alpha_1", "alpha_2", "jacobian"]);
    assert_eq!(rows.len(), 9);
}
